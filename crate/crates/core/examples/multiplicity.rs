//! Valuations of random kernel elements against the scale M N^t.

use mahler::mahler::corpus;
use mahler::siegel::{multiplicity_scan, CSV_HEADER};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let eqs = [corpus::get("thue_morse").expect("bundled")];
    let res = multiplicity_scan(&eqs, 4, 4, 4, 7)?;
    println!("{}", CSV_HEADER.join(","));
    for row in &res.rows {
        println!("{}", row.csv_record().join(","));
    }
    println!("C_fit = {}", res.c_fit_string());
    Ok(())
}
