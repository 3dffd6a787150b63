//! Certified values of Mahler functions by two independent routes.

use mahler::algebra::rat::rat;
use mahler::algebra::Dyadic;
use mahler::evaluator::{eval_at, eval_via_system, growth_profile, DeclaredBound};
use mahler::mahler::{companion_system, corpus, expand_series};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let width = Dyadic::pow2(-200);
    for name in ["thue_morse", "powers2", "cantor"] {
        let eq = corpus::get(name).expect("bundled");
        let s = expand_series(&eq, 256)?;
        let declared = (name != "cantor").then(|| DeclaredBound::unit("coefficients in {0, 1}"));
        let profile = growth_profile(&s, declared)?;
        let alpha = rat(1, 3);
        let a = eval_at(&eq, &alpha, &profile, &width)?;
        println!("{name}(1/3) via series: {}", serde_json::to_string(&a.to_json(40))?);
        let b = eval_via_system(&companion_system(&eq), &eq, &alpha, 2, &profile, &width)?;
        println!("{name}(1/3) via system: {}", serde_json::to_string(&b.to_json(40))?);
        println!("  routes agree: {}\n", a.value.intersect(&b.value).is_some());
    }
    Ok(())
}
