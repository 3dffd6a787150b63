//! An auxiliary form with prescribed vanishing, and its iterates under the
//! functional equation.

use mahler::mahler::{corpus, expand_series};
use mahler::siegel::{achieved_valuation, aux_form, check_iterate_identity, iterate_aux, IterContext};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let eq = corpus::get("powers2").expect("bundled");
    let f = expand_series(&eq, 128)?;

    let (n, v) = (4, 24);
    let res = aux_form(&[f.truncate(64)], n, v)?;
    println!("R_0 with N = {n}, V = {v}: {} unknowns, kernel dimension {}", res.unknowns, res.kernel_dim);
    println!("{}", serde_json::to_string_pretty(&res.form.to_doc())?);
    println!("val_z R_0(z, 1, f(z)) = {}", achieved_valuation(&res.form, &[f]));

    let ctx = IterContext::from_equation(&eq, 256)?;
    for k in 0..=3 {
        let rk = iterate_aux(&res.form, &ctx.system, &ctx.a, n, k)?;
        let check = check_iterate_identity(&res.form, &rk, &ctx, n, k, 256)?;
        println!("k = {k}: deg_z R_k = {:>3}, identity holds to order 256: {}", rk.deg_z(), check.holds);
    }
    Ok(())
}
