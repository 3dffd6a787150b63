//! Smallest values of integer polynomials at a number, by exhaustive search.

use mahler::algebra::rat::rat;
use mahler::algebra::Dyadic;
use mahler::liouville::{default_ladder, liouville_constant, poly_min_scan, BoundProfile, ScanOptions, SCAN_CSV_HEADER};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ladder = default_ladder(16);
    let opts = ScanOptions::default();

    let decoy = poly_min_scan(&rat(3, 5), 1, &ladder, None, &opts)?;
    for r in &decoy.relations {
        println!("3/5 is a root of {:?} (exact: {})", r.coeffs, r.exact);
    }

    let xi = liouville_constant(4, &Dyadic::pow2(-256))?;
    let bp = BoundProfile::new(rat(1, 2), 1)?;
    println!("\n{}", SCAN_CSV_HEADER.join(","));
    for d in 1..=2 {
        let scan = poly_min_scan(&xi, d, &ladder, Some(&bp), &opts)?;
        for row in &scan.rows {
            println!("{}", row.csv_record().join(","));
        }
    }
    Ok(())
}
