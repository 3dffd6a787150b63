//! Distances from rational points to zero sets of binary forms.

use mahler::algebra::rat::rat;
use mahler::elimination::{binary_form, dist_p1, elim_suite, liouville_elim_check, ProjPoint, Verdict};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = binary_form(&[-2, 0, 1]);
    for omega in [[rat(1, 1), rat(1, 1)], [rat(5, 7), rat(1, 1)], [rat(1, 1), rat(0, 1)]] {
        let point = ProjPoint::from_rats(&omega, 128)?;
        let d = dist_p1(&f, &point, 64)?;
        let rep = liouville_elim_check(&f, &point, 128)?;
        println!("X1^2 - 2 X0^2 at {}: dist {}, verdict {}", point.describe(), d, rep.verdict);
    }

    let rows = elim_suite(200, 1, 5, 10, 128)?;
    let count = |v| rows.iter().filter(|r| r.report.verdict == v).count();
    println!(
        "\n200 random instances: {} hold, {} trivial, {} inconclusive, {} violated",
        count(Verdict::Holds),
        count(Verdict::Trivial),
        count(Verdict::Inconclusive),
        count(Verdict::Violated)
    );
    Ok(())
}
