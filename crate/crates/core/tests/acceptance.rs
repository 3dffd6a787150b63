use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mahler::algebra::rat::{int, pow_rat, rat};
use mahler::algebra::{AuxForm, Dyadic, Rat};
use mahler::elimination::{binary_form, dist_p1, elim_suite, random_instance, ProjPoint, Verdict};
use mahler::evaluator::{eval_at, eval_via_system, growth_profile, DeclaredBound};
use mahler::liouville::{
    continued_fraction, continued_fraction_of, default_ladder, growth_check, liouville_constant,
    liouville_truncation, pn_build, poly_min_scan, qn_form, ExponentSeq, ScanOptions, XiSource,
};
use mahler::mahler::{companion_system, corpus, expand_series, regularity, verify_equation, MahlerEquation};
use mahler::siegel::{achieved_valuation, aux_form, check_iterate_identity, iterate_aux, multiplicity_scan, IterContext};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn eq(name: &str) -> MahlerEquation {
    corpus::get(name).unwrap_or_else(|| panic!("corpus entry {name}"))
}

fn as_int(r: &Rat) -> Option<BigInt> {
    r.is_integer().then(|| r.to_integer())
}

fn series_oracles() -> Outcome {
    let n = 4096;
    let tm = expand_series(&eq("thue_morse"), n).map_err(|e| e.to_string())?;
    for i in 0..n {
        let want = (i as u64).count_ones() % 2;
        ensure(*tm.coeff(i) == int(want as i64), || format!("thue_morse coefficient {i}"))?;
    }
    let p2 = expand_series(&eq("powers2"), n).map_err(|e| e.to_string())?;
    for i in 0..n {
        let want = i > 0 && i.is_power_of_two();
        ensure(*p2.coeff(i) == int(want as i64), || format!("powers2 coefficient {i}"))?;
    }
    let m = 512;
    let mut counts = vec![BigInt::zero(); m];
    counts[0] = BigInt::one();
    let mut part = 1;
    while part < m {
        for i in part..m {
            let prev = counts[i - part].clone();
            counts[i] += prev;
        }
        part *= 5;
    }
    let cantor = expand_series(&eq("cantor"), m).map_err(|e| e.to_string())?;
    for (i, want) in counts.iter().enumerate() {
        ensure(as_int(cantor.coeff(i)).as_ref() == Some(want), || format!("cantor coefficient {i}"))?;
    }
    Ok(format!("{n} + {n} + {m} coefficients equal"))
}

fn residuals() -> Outcome {
    let mut checked = 0;
    for name in corpus::names() {
        let e = eq(name);
        let s = expand_series(&e, 512).map_err(|err| format!("{name}: {err}"))?;
        let v = verify_equation(&e, &s);
        ensure(v.lower_bound() >= 512, || format!("{name}: residual valuation {v}"))?;
        checked += 1;
    }
    Ok(format!("{checked} corpus equations vanish to order 512"))
}

fn numeric_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(|x| *x == 0.0) {
        c.pop();
    }
    let d = c.len().saturating_sub(1);
    if d == 0 {
        return Vec::new();
    }
    let lead = c[d];
    let comp = DMatrix::from_fn(d, d, |i, j| {
        if i == 0 {
            -c[d - 1 - j] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    comp.complex_eigenvalues().iter().map(|z| polish(&c, *z)).collect()
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn polish(c: &[f64], mut z: Complex64) -> Complex64 {
    for _ in 0..60 {
        let (p, dp) = horner(c, z);
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        z -= step;
        if step.norm() <= 1e-17 * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

fn regularity_certificates() -> Outcome {
    let alphas = [rat(1, 2), rat(-2, 3), rat(1, 3), rat(9, 10)];
    let mut certs = 0;
    for name in ["thue_morse", "powers2", "powers3", "cantor", "floor_log2"] {
        let e = eq(name);
        let sys = companion_system(&e);
        for a in &alphas {
            let rep = regularity(&sys, a).map_err(|err| err.to_string())?;
            ensure(rep.regular && rep.failure_k.is_none(), || format!("{name} at {a}: not regular"))?;
            let k = rep.checked_up_to;
            let x_k = pow_rat(&a.abs(), e.q().pow(k));
            ensure(x_k < rep.r_min, || format!("{name} at {a}: |alpha|^(q^K) >= r_min"))?;
            for j in 0..k {
                let x = pow_rat(a, e.q().pow(j));
                for p in &rep.singular_polys {
                    let v: Rat = p.coeffs().iter().rev().fold(Rat::zero(), |acc, c| acc * &x + c);
                    ensure(!v.is_zero(), || format!("{name}: singular at step {j}"))?;
                }
            }
            for p in &rep.singular_polys {
                let c: Vec<f64> = p.coeffs().iter().map(|c| c.to_f64().unwrap_or(0.0)).collect();
                for z in numeric_roots(&c) {
                    let bound = rep.r_min.to_f64().unwrap_or(0.0);
                    ensure(z.norm() >= bound * (1.0 - 1e-9), || format!("{name}: root {z} below r_min"))?;
                }
            }
            certs += 1;
        }
    }
    let rep = regularity(&companion_system(&eq("singular_demo")), &rat(1, 2)).map_err(|e| e.to_string())?;
    ensure(!rep.regular && rep.failure_k == Some(0), || "singular_demo not flagged at k = 0".into())?;
    let w = rep.witness.clone().ok_or("no witness")?;
    ensure(w == rat(1, 2), || format!("witness {w}"))?;
    let hits = rep
        .singular_polys
        .iter()
        .filter(|p| p.coeffs().iter().rev().fold(Rat::zero(), |acc, c| acc * &w + c).is_zero())
        .count();
    ensure(hits > 0, || "witness is not a root".into())?;
    Ok(format!("{certs} certificates re-checked, singular witness 1/2"))
}

fn siegel_construction() -> Outcome {
    let s = expand_series(&eq("powers2"), 256).map_err(|e| e.to_string())?;
    let res = aux_form(&[s.truncate(64)], 4, 24).map_err(|e| e.to_string())?;
    ensure(!res.form.is_zero(), || "zero form".into())?;
    ensure(res.form.is_integral(), || "form is not integral".into())?;
    let v = achieved_valuation(&res.form, &[s]);
    ensure(v.lower_bound() >= 24, || format!("achieved valuation {v}"))?;
    Ok(format!("nonzero integral form, valuation {v}"))
}

fn recursion_identity() -> Outcome {
    let order = 256;
    let n = 2;
    for name in ["thue_morse", "powers2"] {
        let e = eq(name);
        let ctx = IterContext::from_equation(&e, order).map_err(|err| err.to_string())?;
        let f = expand_series(&e, 64).map_err(|err| err.to_string())?;
        let r = aux_form(&[f], n, 8).map_err(|err| err.to_string())?.form;
        for k in 0..=3 {
            let rk = iterate_aux(&r, &ctx.system, &ctx.a, n, k).map_err(|err| err.to_string())?;
            let check = check_iterate_identity(&r, &rk, &ctx, n, k, order).map_err(|err| err.to_string())?;
            ensure(check.holds, || format!("{name}, k = {k}: mismatch at {:?}", check.first_mismatch))?;
        }
    }
    Ok("k = 0..3 on thue_morse and powers2 at order 256".into())
}

fn multiplicity_csv(e: &MahlerEquation, seed: u64) -> Result<(String, bool), String> {
    let res = multiplicity_scan(std::slice::from_ref(e), 6, 6, 8, seed).map_err(|err| err.to_string())?;
    let finite = res.rows.iter().all(|r| r.achieved_val.is_some()) && res.c_fit.is_some();
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    for r in &res.rows {
        w.write_record(r.csv_record()).map_err(|err| err.to_string())?;
    }
    w.write_record([res.c_fit_string()]).map_err(|err| err.to_string())?;
    Ok((String::from_utf8(w.into_inner().map_err(|err| err.to_string())?).unwrap(), finite))
}

fn multiplicity_experiment() -> Outcome {
    let mut fits = Vec::new();
    for name in ["thue_morse", "powers2", "powers3", "cantor", "floor_log2"] {
        let e = eq(name);
        let (a, finite) = multiplicity_csv(&e, 2024)?;
        ensure(finite, || format!("{name}: infinite valuation or missing C_fit"))?;
        let (b, _) = multiplicity_csv(&e, 2024)?;
        ensure(a == b, || format!("{name}: rerun differs"))?;
        fits.push(format!("{name}={}", a.lines().last().unwrap_or("")));
    }
    Ok(format!("C_fit {}", fits.join(" ")))
}

fn tm_partial_sum_at_half(terms: usize) -> Rat {
    (0..terms)
        .filter(|i| (*i as u64).count_ones() % 2 == 1)
        .map(|i| pow_rat(&rat(1, 2), i as u64))
        .sum()
}

fn route_agreement() -> Outcome {
    let width = Dyadic::pow2(-256);
    let alpha = rat(1, 2);
    for name in ["powers2", "thue_morse"] {
        let e = eq(name);
        let s = expand_series(&e, 512).map_err(|err| err.to_string())?;
        let profile = growth_profile(&s, Some(DeclaredBound::unit("coefficients in {0, 1}"))).map_err(|err| err.to_string())?;
        let a = eval_at(&e, &alpha, &profile, &width).map_err(|err| err.to_string())?;
        ensure(a.certified, || format!("{name}: series route not certified"))?;
        ensure(a.value.width() <= width, || format!("{name}: series width too large"))?;
        for k in 1..=6 {
            let b = eval_via_system(&companion_system(&e), &e, &alpha, k, &profile, &width).map_err(|err| err.to_string())?;
            ensure(b.certified, || format!("{name}: system route k = {k} not certified"))?;
            ensure(a.value.intersect(&b.value).is_some(), || format!("{name}: routes disjoint at k = {k}"))?;
        }
        if name == "thue_morse" {
            let ps = tm_partial_sum_at_half(400);
            let tail = pow_rat(&rat(1, 2), 399);
            let lo = Dyadic::from_rat_round(&(&ps - &tail), 512, mahler::algebra::Round::Down);
            let hi = Dyadic::from_rat_round(&(&ps + &tail), 512, mahler::algebra::Round::Up);
            ensure(a.value.lo() <= &hi && &lo <= a.value.hi(), || "disagrees with digit-parity sum".into())?;
        }
    }
    Ok("series and system (k = 1..6) enclosures intersect".into())
}

fn tower_identity() -> Outcome {
    let rep = growth_check(&ExponentSeq::tower(2, 5).map_err(|e| e.to_string())?, &int(4), 3).map_err(|e| e.to_string())?;
    let want = [int(2), int(32), pow_rat(&int(2), 25)];
    ensure(rep.rows.len() == 3, || format!("{} rows", rep.rows.len()))?;
    for (row, w) in rep.rows.iter().zip(&want) {
        ensure(&row.ratio == w && row.holds, || format!("n = {}: ratio {}", row.n, row.ratio))?;
    }
    Ok("ratios 2, 32, 2^25".into())
}

fn exponent_vectors(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    if nvars == 1 {
        return vec![vec![d]];
    }
    (0..=d)
        .flat_map(|first| {
            exponent_vectors(nvars - 1, d - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn random_form(rng: &mut ChaCha8Rng, nvars: usize, d: u32) -> AuxForm {
    loop {
        let terms: Vec<(Vec<u32>, Rat)> = exponent_vectors(nvars, d)
            .into_iter()
            .map(|e| (e, int(rng.gen_range(-4..=4))))
            .collect();
        let f = AuxForm::from_rat_terms(nvars, d, terms).expect("homogeneous");
        if !f.is_zero() {
            return f;
        }
    }
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    let n: i64 = rng.gen_range(-9..=9);
    let d: i64 = rng.gen_range(1..=9);
    rat(n, d)
}

fn qn_pn_algebra() -> Outcome {
    let tower = ExponentSeq::tower(2, 5).map_err(|e| e.to_string())?;
    let ladders = [
        (tower.clone(), 1usize),
        (ExponentSeq::explicit(&[1, 2, 5]).map_err(|e| e.to_string())?, 2),
        (ExponentSeq::explicit(&[1, 3, 4]).map_err(|e| e.to_string())?, 2),
        (ExponentSeq::explicit(&[2, 3, 7]).map_err(|e| e.to_string())?, 2),
    ];
    for (u, nmax) in &ladders {
        for n in 0..=*nmax {
            let q = qn_form(u, n).map_err(|e| e.to_string())?;
            let un = u.degree(n).map_err(|e| e.to_string())?;
            ensure(q.height() == Rat::one(), || format!("{}: height of Q_{n}", u.describe()))?;
            ensure(q.deg_x() == un, || format!("{}: degree of Q_{n}", u.describe()))?;
            ensure(q.term_count() == n + 1, || format!("{}: terms of Q_{n}", u.describe()))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for trial in 0..100 {
        let (u, nmax) = &ladders[1 + trial % 3];
        let n = rng.gen_range(0..=*nmax);
        let k = rng.gen_range(1..=2usize);
        let d = rng.gen_range(1..=2u32);
        let p = random_form(&mut rng, k + 1, d);
        let un = u.degree(n).map_err(|e| e.to_string())?;
        let pn = pn_build(&p, &qn_form(u, n).map_err(|e| e.to_string())?, un).map_err(|e| e.to_string())?;
        let r = k + 2;
        let mut xs: Vec<Rat> = (0..r).map(|_| random_rat(&mut rng)).collect();
        if xs[r - 1].is_zero() {
            xs[r - 1] = int(1);
        }
        let ratio = &xs[r - 2] / &xs[r - 1];
        let xi: Rat = (0..=n).map(|j| pow_rat(&ratio, u.degree(j).unwrap() as u64)).sum();
        let mut args = xs[..k].to_vec();
        args.push(xi);
        let p_val: Rat = p
            .terms()
            .map(|(e, c)| e.iter().zip(&args).fold(c.coeff(0), |acc, (&ei, x)| acc * pow_rat(x, ei as u64)))
            .sum();
        let rhs = pow_rat(&xs[r - 1], d as u64 * un as u64) * p_val;
        ensure(pn.eval(&xs) == rhs, || format!("identity fails on trial {trial}"))?;
    }
    Ok("Q_N invariants hold, P_N identity exact on 100 substitutions".into())
}

fn exact_min(xi: &Rat, d: u32, h: i64) -> Rat {
    let mut best: Option<Rat> = None;
    let mut c = vec![-h; d as usize + 1];
    loop {
        if c.iter().any(|x| *x != 0) {
            let v = c.iter().rev().fold(Rat::zero(), |acc, x| acc * xi + int(*x)).abs();
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
        }
        let mut i = 0;
        loop {
            if i == c.len() {
                return best.expect("nonempty range");
            }
            if c[i] < h {
                c[i] += 1;
                break;
            }
            c[i] = -h;
            i += 1;
        }
    }
}

fn scan_soundness() -> Outcome {
    let opts = ScanOptions::default();
    let ladder = default_ladder(20);
    let decoy = poly_min_scan(&rat(1, 2), 1, &ladder, None, &opts).map_err(|e| e.to_string())?;
    let found = decoy.relations.iter().any(|r| r.coeffs == vec![-1, 2] && r.exact);
    ensure(found, || format!("relation 2X - 1 not reported: {:?}", decoy.relations))?;

    let trunc = liouville_truncation(4);
    let s = expand_series(&eq("thue_morse"), 512).map_err(|e| e.to_string())?;
    let profile = growth_profile(&s, Some(DeclaredBound::unit("coefficients in {0, 1}"))).map_err(|e| e.to_string())?;
    let beta = eval_at(&eq("thue_morse"), &rat(1, 2), &profile, &Dyadic::pow2(-512)).map_err(|e| e.to_string())?;
    let sources: [(&str, &dyn XiSource); 2] = [("liouville", &trunc), ("thue_morse", &beta)];
    let mut rows = 0;
    for (name, xi) in sources {
        for d in 1..=2 {
            let scan = poly_min_scan(xi, d, &ladder, None, &opts).map_err(|e| e.to_string())?;
            ensure(scan.relations.is_empty(), || format!("{name}, d = {d}: spurious relation"))?;
            ensure(scan.certified, || format!("{name}: uncertified"))?;
            for w in scan.rows.windows(2) {
                ensure(w[1].min_abs_lo <= w[0].min_abs_lo, || format!("{name}, d = {d}: not monotone"))?;
            }
            for row in &scan.rows {
                ensure(row.min_abs_lo.is_positive(), || format!("{name}, d = {d}, H = {}: not positive", row.h))?;
                if name == "liouville" {
                    let m = exact_min(&trunc, d, row.h as i64);
                    ensure(row.min_abs_lo.to_rat() <= m, || format!("H = {}: bound above true minimum", row.h))?;
                    let rel = (&m - row.min_abs_lo.to_rat()) / &m;
                    ensure(rel < rat(1, 1 << 40), || format!("H = {}: bound loose", row.h))?;
                }
                rows += 1;
            }
        }
    }
    Ok(format!("decoy relation found, {rows} rows positive and monotone"))
}

fn exact_cf(x: &Rat) -> Vec<BigInt> {
    let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
    let mut out = Vec::new();
    while !d.is_zero() {
        let q = num_integer::Integer::div_floor(&n, &d);
        let r = &n - &q * &d;
        out.push(q);
        n = d;
        d = r;
    }
    out
}

fn cf_prefix() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let eps = Rat::new(BigInt::one(), BigInt::one() << 80);
    let mut shortest = usize::MAX;
    for _ in 0..20 {
        let x = Rat::new(BigInt::from(rng.gen_range(-1_000_000i64..1_000_000)), BigInt::from(rng.gen_range(1i64..1_000_000)));
        let want = exact_cf(&x);
        let got = continued_fraction(&(&x - &eps), &(&x + &eps), 200);
        ensure(want.starts_with(&got.quotients), || format!("{x}: prefix mismatch"))?;
        shortest = shortest.min(got.quotients.len());
        let point = continued_fraction(&x, &x, 200);
        ensure(point.quotients == want, || format!("{x}: point expansion differs"))?;
    }
    let lc = liouville_constant(4, &Dyadic::pow2(-200)).map_err(|e| e.to_string())?;
    let got = continued_fraction_of(&lc, 200);
    let want = exact_cf(&liouville_truncation(4));
    ensure(got.quotients.len() >= 8 && want.starts_with(&got.quotients), || "Liouville prefix mismatch".into())?;
    let head: Vec<String> = got.quotients.iter().take(8).map(|q| q.to_string()).collect();
    Ok(format!("shortest random prefix {shortest}, Liouville prefix [{}...]", head.join(", ")))
}

/// Squarefree part over the rationals, little-endian coefficients.
fn squarefree(c: &[Rat]) -> Vec<Rat> {
    fn trim(mut v: Vec<Rat>) -> Vec<Rat> {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        v
    }
    fn rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let mut r = a.to_vec();
        let lb = b.last().unwrap().clone();
        while r.len() >= b.len() && !r.is_empty() {
            let f = r.last().unwrap() / &lb;
            let shift = r.len() - b.len();
            for (i, bi) in b.iter().enumerate() {
                r[shift + i] -= &f * bi;
            }
            r = trim(r);
        }
        r
    }
    fn quo(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let mut r = a.to_vec();
        let mut q = vec![Rat::zero(); a.len() + 1 - b.len()];
        let lb = b.last().unwrap().clone();
        while r.len() >= b.len() && !r.is_empty() {
            let f = r.last().unwrap() / &lb;
            let shift = r.len() - b.len();
            for (i, bi) in b.iter().enumerate() {
                r[shift + i] -= &f * bi;
            }
            q[shift] = f;
            r = trim(r);
        }
        q
    }
    let a = trim(c.to_vec());
    if a.len() <= 2 {
        return a;
    }
    let da: Vec<Rat> = a.iter().enumerate().skip(1).map(|(i, x)| x * int(i as i64)).collect();
    let (mut g, mut h) = (a.clone(), trim(da));
    while !h.is_empty() {
        let r = rem(&g, &h);
        g = h;
        h = r;
    }
    quo(&a, &g)
}

fn brute_dist(coeffs: &[i64], omega: &[Rat]) -> f64 {
    let w0 = omega[0].to_f64().unwrap();
    let w1 = omega[1].to_f64().unwrap();
    let wn = w0.abs().max(w1.abs());
    let mut best = f64::INFINITY;
    if *coeffs.last().unwrap() == 0 {
        best = best.min(w0.abs() / wn);
    }
    let sf: Vec<f64> = squarefree(&coeffs.iter().map(|&c| int(c)).collect::<Vec<_>>())
        .iter()
        .map(|c| c.to_f64().unwrap())
        .collect();
    for t in numeric_roots(&sf) {
        let num = (t * w0 - w1).norm();
        best = best.min(num / (t.norm().max(1.0) * wn));
    }
    best
}

fn elimination_suite() -> Outcome {
    let (count, seed, prec) = (100, 42, 128);
    let rows = elim_suite(count, seed, 5, 10, prec).map_err(|e| e.to_string())?;
    let violated = rows.iter().filter(|r| r.report.verdict == Verdict::Violated).count();
    ensure(violated == 0, || format!("{violated} violations"))?;
    let tol = 2f64.powi(-40);
    let mut worst = 0f64;
    for row in &rows {
        let (coeffs, omega) = random_instance(row.seed, 5, 10);
        ensure(coeffs == row.coeffs && omega == row.omega, || "instance not reproducible".into())?;
        let point = ProjPoint::from_rats(&omega, prec).map_err(|e| e.to_string())?;
        let d = dist_p1(&binary_form(&coeffs), &point, 64).map_err(|e| e.to_string())?;
        let oracle = brute_dist(&coeffs, &omega);
        let (lo, hi) = (d.lo().to_f64(), d.hi().to_f64());
        let err = if oracle < lo { lo - oracle } else if oracle > hi { oracle - hi } else { 0.0 };
        worst = worst.max(err.max(hi - lo));
        ensure(err <= tol && hi - lo <= tol, || format!("{coeffs:?} at {omega:?}: [{lo}, {hi}] vs {oracle}"))?;
    }
    Ok(format!("0 violations in {count}, worst deviation {worst:.2e}"))
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = mahler::cli::run(std::iter::once("mahler").chain(args.iter().copied()), &mut out, &mut err);
    if code != 0 && code != 5 {
        return Err(format!("{args:?}: exit {code}: {}", String::from_utf8_lossy(&err)));
    }
    Ok(out)
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("mahler-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let experiments: [&[&str]; 5] = [
        &["multiplicity", "--eq", "thue_morse", "--mmax", "4", "--nmax", "4", "--trials", "4"],
        &["polyscan", "--xi", "liouville_constant", "--d", "2", "--hmax", "12"],
        &["polyscan", "--xi", "thue_morse", "--alpha", "1/2", "--unit-bound", "--d", "2", "--hmax", "8"],
        &["elimsuite", "--count", "40"],
        &["lacunary", "--beta", "thue_morse", "--alpha", "1/2", "--unit-bound", "--tower", "2", "5", "--terms", "2"],
    ];
    for (i, exp) in experiments.iter().enumerate() {
        let mut outputs = Vec::new();
        for threads in ["1", "1", "4"] {
            let csv = dir.join(format!("run{i}-{threads}.csv"));
            let csv_s = csv.to_string_lossy().to_string();
            let mut args = vec!["--seed", "5", "--threads", threads, "--out", &csv_s, "experiment"];
            args.extend_from_slice(exp);
            run_cli(&args)?;
            let a = std::fs::read(&csv).map_err(|e| e.to_string())?;
            let b = std::fs::read(csv.with_extension("plot.json")).map_err(|e| e.to_string())?;
            let mut stdout_args = vec!["--seed", "5", "--threads", threads];
            stdout_args.extend_from_slice(exp);
            let c = run_cli(&stdout_args)?;
            outputs.push((a, b, c));
        }
        ensure(outputs.windows(2).all(|w| w[0] == w[1]), || format!("{} differs across runs", exp[0]))?;
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{} experiments identical over 1, 1 and 4 workers", experiments.len()))
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() {
    let s = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, name: "series oracle equivalence", budget: Some(s(10)), run: series_oracles },
        Criterion { id: 2, name: "equation residuals", budget: None, run: residuals },
        Criterion { id: 3, name: "regularity certificates", budget: Some(s(1)), run: regularity_certificates },
        Criterion { id: 4, name: "siegel construction", budget: Some(s(5)), run: siegel_construction },
        Criterion { id: 5, name: "recursion identity", budget: None, run: recursion_identity },
        Criterion { id: 6, name: "multiplicity experiment", budget: Some(s(60)), run: multiplicity_experiment },
        Criterion { id: 7, name: "evaluation route agreement", budget: Some(s(5)), run: route_agreement },
        Criterion { id: 8, name: "tower growth identity", budget: Some(s(1)), run: tower_identity },
        Criterion { id: 9, name: "Q_N / P_N algebra", budget: Some(s(5)), run: qn_pn_algebra },
        Criterion { id: 10, name: "scan soundness", budget: Some(s(60)), run: scan_soundness },
        Criterion { id: 11, name: "continued fraction prefixes", budget: None, run: cf_prefix },
        Criterion { id: 12, name: "elimination suite", budget: Some(s(30)), run: elimination_suite },
        Criterion { id: 13, name: "determinism", budget: None, run: determinism },
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for c in &criteria {
        if !filter.is_empty() && !filter.iter().any(|f| c.name.contains(f.as_str()) || c.id.to_string() == *f) {
            continue;
        }
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let result = match (result, c.budget) {
            (Ok(_), Some(b)) if elapsed > b => Err(format!("took {elapsed:.2?}, budget {b:?}")),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("criterion {:>2} {}: PASS ({elapsed:.2?}) {detail}", c.id, c.name),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {}: FAIL ({elapsed:.2?}) {why}", c.id, c.name);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
