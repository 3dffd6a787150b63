//! Power-series solutions of Mahler equations, checked against their equations.

use mahler::algebra::rat::rat_to_string;
use mahler::mahler::{corpus, expand_series, verify_equation, MahlerEquation};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in corpus::names() {
        let eq = corpus::get(name).expect("bundled");
        let s = expand_series(&eq, 24)?;
        let head: Vec<String> = s.coeffs().iter().map(rat_to_string).collect();
        println!("{name:>14} (q = {}): {}", eq.q(), head.join(" "));
        println!("{:>14}  residual valuation {}", "", verify_equation(&eq, &s));
    }

    let doc = r#"{"name": "geometric_2", "q": 2, "coeffs": ["1", "-(1+z)"], "rhs": "0", "seeds": ["1"]}"#;
    let eq = MahlerEquation::from_json(doc)?;
    let s = expand_series(&eq, 16)?;
    println!("\nprod (1 + z^(2^k)) = 1/(1 - z): {:?}", s.coeffs().iter().map(rat_to_string).collect::<Vec<_>>());
    Ok(())
}
