//! A lacunary series over a Mahler value, and the growth of its exponents.

use mahler::algebra::rat::{int, rat};
use mahler::algebra::{Dyadic, Round};
use mahler::evaluator::{eval_at, growth_profile, DeclaredBound};
use mahler::liouville::{growth_check, liouville_constant, xi_value, Beta, ExponentSeq};
use mahler::mahler::{corpus, expand_series};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let eq = corpus::get("thue_morse").expect("bundled");
    let profile = growth_profile(&expand_series(&eq, 256)?, Some(DeclaredBound::unit("0/1 coefficients")))?;
    let width = Dyadic::pow2(-160);
    let beta = eval_at(&eq, &rat(1, 2), &profile, &width)?;

    let u = ExponentSeq::tower(2, 5)?;
    let xi = xi_value(&Beta::Enclosure(beta), &u, 2, &width)?;
    println!("xi = sum beta^(2^(5^n)) in [{}, {}]", xi.value.lo().to_decimal(30, Round::Down), xi.value.hi().to_decimal(30, Round::Up));

    let report = growth_check(&u, &int(4), 3)?;
    for row in &report.rows {
        println!("n = {}: u_(n+1) / u_n^4 = {} ({})", row.n, row.ratio, if row.holds { "> 1" } else { "<= 1" });
    }

    let lc = liouville_constant(4, &width)?;
    println!("\nLiouville's constant in [{}, {}]", lc.value.lo().to_decimal(30, Round::Down), lc.value.hi().to_decimal(30, Round::Up));
    Ok(())
}
