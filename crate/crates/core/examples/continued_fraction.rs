//! Continued fraction digits that are certain from an enclosure.

use mahler::algebra::rat::rat;
use mahler::algebra::Dyadic;
use mahler::evaluator::{eval_at, growth_profile, DeclaredBound};
use mahler::liouville::{continued_fraction, continued_fraction_of, liouville_constant};
use mahler::mahler::{corpus, expand_series};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("10/7: {}", continued_fraction(&rat(10, 7), &rat(10, 7), 10).to_json());

    let lc = liouville_constant(4, &Dyadic::pow2(-300))?;
    println!("Liouville: {}", continued_fraction_of(&lc, 40).to_json());

    let eq = corpus::get("thue_morse").expect("bundled");
    let profile = growth_profile(&expand_series(&eq, 256)?, Some(DeclaredBound::unit("0/1 coefficients")))?;
    let v = eval_at(&eq, &rat(1, 2), &profile, &Dyadic::pow2(-300))?;
    println!("thue_morse(1/2): {}", continued_fraction_of(&v, 200).to_json());
    Ok(())
}
