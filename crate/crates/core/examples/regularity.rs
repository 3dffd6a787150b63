//! Companion systems and the regularity test at rational points.

use mahler::algebra::rat::rat;
use mahler::mahler::{companion_system, corpus, find_regular_power, regularity, MahlerError};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tm = corpus::get("thue_morse").expect("bundled");
    let sys = companion_system(&tm);
    println!("companion matrix of thue_morse:\n{}", sys.matrix());
    println!("det = {}", sys.det());

    for alpha in [rat(1, 2), rat(-3, 4), rat(99, 100)] {
        let rep = regularity(&sys, &alpha)?;
        println!("alpha = {alpha}: regular = {}, K = {}, r_min = {}", rep.regular, rep.checked_up_to, rep.r_min);
    }

    let singular = corpus::get("singular_demo").expect("bundled");
    let rep = regularity(&companion_system(&singular), &rat(1, 2))?;
    println!("\nsingular_demo at 1/2: failure at k = {:?}, witness {:?}", rep.failure_k, rep.witness.map(|w| w.to_string()));

    for name in ["lifted_demo", "singular_demo"] {
        let eq = corpus::get(name).expect("bundled");
        match find_regular_power(&eq, &rat(1, 2), 4) {
            Ok(rp) => println!("{name}: iterate ell = {} is regular at 1/2", rp.ell),
            Err(MahlerError::NotFound { attempts }) => {
                println!("{name}: no regular iterate up to ell = {}", attempts.len());
                for a in attempts {
                    println!("  ell = {}: fails at k = {:?}", a.ell, a.report.failure_k);
                }
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(())
}
