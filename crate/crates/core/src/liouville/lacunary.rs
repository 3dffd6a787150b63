use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::rat::pow_rat;
use crate::algebra::{AlgebraError, AuxForm, Dyadic, Enclosure, MPoly, Poly, Rat, Round};
use crate::evaluator::{working_precision, Route, ValueEnclosure};

use super::{ExponentSeq, LiouvilleError};

/// Base of a lacunary series.
#[derive(Clone, Debug)]
pub enum Beta {
    Exact(Rat),
    Enclosure(ValueEnclosure),
}

impl Beta {
    fn certified(&self) -> bool {
        match self {
            Beta::Exact(_) => true,
            Beta::Enclosure(v) => v.certified,
        }
    }

    fn abs_upper(&self, prec: u32) -> Dyadic {
        match self {
            Beta::Exact(r) => Dyadic::from_rat_round(&r.abs(), prec, Round::Up),
            Beta::Enclosure(v) => v.value.mag(),
        }
    }

    fn enclosure(&self, prec: u32) -> Enclosure {
        match self {
            Beta::Exact(r) => Enclosure::from_rat(r, prec),
            Beta::Enclosure(v) => v.value.clone(),
        }
    }
}

/// Exponents past this are replaced by it when bounding `|beta|^u` from
/// above, which is harmless since `|beta| < 1`.
const EXPONENT_CAP: u64 = 1 << 40;
/// Largest exponent raised exactly over the rationals.
const EXACT_EXPONENT_LIMIT: u64 = 1 << 14;

fn capped(e: &BigInt) -> u64 {
    e.to_u64().map_or(EXPONENT_CAP, |v| v.min(EXPONENT_CAP))
}

fn pow_upper(b: &Dyadic, e: &BigInt, prec: u32) -> Dyadic {
    Enclosure::point(b.clone(), prec).pow(capped(e)).hi().clone()
}

/// Enclosure of `xi = sum_n beta^{u_n}` from the first `terms` summands and
/// the tail bound `|beta|^{u_terms} / (1 - |beta|)`. When `u_terms` is not
/// known (an explicit list that ran out) the bound uses `u_{terms-1} + 1`,
/// which is valid for every increasing continuation.
pub fn xi_value(
    beta: &Beta,
    u: &ExponentSeq,
    terms: usize,
    target_width: &Dyadic,
) -> Result<ValueEnclosure, LiouvilleError> {
    let prec = working_precision(target_width);
    let b = beta.abs_upper(prec);
    if b >= Dyadic::one() {
        return Err(LiouvilleError::BetaNotContracting(b.to_decimal(12, Round::Up)));
    }

    let mut exact = match beta {
        Beta::Exact(_) => Some(Rat::zero()),
        Beta::Enclosure(_) => None,
    };
    let mut approx = Enclosure::from_int(0, prec);
    let base = beta.enclosure(prec);
    for n in 0..terms {
        let e = u.try_value(n)?;
        if let (Some(acc), Beta::Exact(r)) = (exact.as_mut(), beta) {
            if let Some(k) = e.to_u64().filter(|&k| k <= EXACT_EXPONENT_LIMIT) {
                *acc += pow_rat(r, k);
                continue;
            }
        }
        if let Some(acc) = exact.take() {
            approx = Enclosure::from_rat(&acc, prec);
        }
        let term = if e.to_u64().is_some_and(|k| k <= EXPONENT_CAP) {
            base.pow(capped(&e))
        } else {
            let t = pow_upper(&b, &e, prec);
            Enclosure::new(t.neg(), t, prec)
        };
        approx = approx.add(&term);
    }

    let next = match u.value(terms) {
        Some(v) => v,
        None if terms == 0 => BigInt::one(),
        None => u.try_value(terms - 1)? + 1,
    };
    let one_minus = Dyadic::one().sub(&b);
    let floor = Dyadic::pow2(-(prec as i64) - 16);
    let head = Dyadic::max(&pow_upper(&b, &next, prec), &floor);
    let tail = head.div_round(&one_minus, prec, Round::Up).to_rat();

    let value = match &exact {
        Some(s) => Enclosure::from_rat(s, prec).widen(&tail),
        None => approx.widen(&tail),
    };
    Ok(ValueEnclosure {
        value,
        terms_used: terms,
        tail_bound: tail,
        certified: beta.certified(),
        partial_sum: exact,
        route: Route::Series,
    })
}

/// `sum_{n < terms} 10^{-(n+1)!}`.
pub fn liouville_truncation(terms: usize) -> Rat {
    let ten = Rat::from_integer(BigInt::from(10));
    (0..terms)
        .map(|n| {
            let e = ExponentSeq::Factorial.value(n).expect("factorial").to_u64().expect("small");
            pow_rat(&ten, e).recip()
        })
        .sum()
}

/// Liouville's constant `sum_{n >= 1} 10^{-n!}` from `terms` summands.
pub fn liouville_constant(terms: usize, target_width: &Dyadic) -> Result<ValueEnclosure, LiouvilleError> {
    xi_value(
        &Beta::Exact(Rat::new(BigInt::one(), BigInt::from(10))),
        &ExponentSeq::Factorial,
        terms,
        target_width,
    )
}

/// `Q_N(X_0, X_1) = sum_{n <= N} X_0^{u_n} X_1^{u_N - u_n}`.
pub fn qn_form(u: &ExponentSeq, n: usize) -> Result<AuxForm, LiouvilleError> {
    let top = u.degree(n)?;
    let mut terms = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let e = u.degree(k)?;
        terms.push((vec![e, top - e], Poly::one()));
    }
    Ok(AuxForm::from_terms(2, top, terms).expect("homogeneous by construction"))
}

/// `P_N(X_1, ..., X_r) = P(X_1 X_r^{u_N}, ..., X_{r-2} X_r^{u_N}, Q_N(X_{r-1}, X_r))`
/// where `P` has variables `(X_1, ..., X_{r-2}, Y)`.
pub fn pn_build(p: &AuxForm, q_n: &AuxForm, u_n: u32) -> Result<MPoly, LiouvilleError> {
    if q_n.nvars() != 2 {
        return Err(LiouvilleError::Arity { expected: 2, got: q_n.nvars() });
    }
    if p.nvars() == 0 {
        return Err(LiouvilleError::Arity { expected: 1, got: 0 });
    }
    if !p.is_z_free() || !q_n.is_z_free() {
        return Err(AlgebraError::NotConstantInZ.into());
    }
    let k = p.nvars() - 1;
    let r = k + 2;
    let mut q = MPoly::zero(r);
    for (e, c) in q_n.terms() {
        let mut exps = vec![0; r];
        exps[r - 2] = e[0];
        exps[r - 1] = e[1];
        q = q.add(&MPoly::monomial(exps, c.coeff(0)));
    }
    let mut q_pows = vec![MPoly::one(r)];
    let mut out = MPoly::zero(r);
    for (e, c) in p.terms() {
        let ey = e[k] as usize;
        while q_pows.len() <= ey {
            let next = q_pows.last().expect("nonempty").mul(&q);
            q_pows.push(next);
        }
        let mut exps = vec![0; r];
        exps[..k].copy_from_slice(&e[..k]);
        exps[r - 1] = u_n * e[..k].iter().sum::<u32>();
        out = out.add(&MPoly::monomial(exps, c.coeff(0)).mul(&q_pows[ey]));
    }
    Ok(out)
}

/// Both sides of `P_N(x) = x_r^{d u_N} P(x_1, ..., x_{r-2}, xi_N)` with
/// `xi_N = sum_{n <= N} (x_{r-1} / x_r)^{u_n}`; `xs` holds `x_1..x_r` and
/// `x_r` must be nonzero.
pub fn pn_identity_sides(
    p: &AuxForm,
    u: &ExponentSeq,
    n: usize,
    xs: &[Rat],
) -> Result<(Rat, Rat), LiouvilleError> {
    let r = p.nvars() + 1;
    if xs.len() != r {
        return Err(LiouvilleError::Arity { expected: r, got: xs.len() });
    }
    let un = u.degree(n)?;
    let pn = pn_build(p, &qn_form(u, n)?, un)?;
    let lhs = pn.eval(xs);
    let xr = &xs[r - 1];
    assert!(!xr.is_zero(), "x_r must be nonzero");
    let ratio = &xs[r - 2] / xr;
    let mut xi = Rat::zero();
    for k in 0..=n {
        xi += pow_rat(&ratio, u.degree(k)? as u64);
    }
    let mut args: Vec<Rat> = xs[..r - 2].to_vec();
    args.push(xi);
    let rhs = pow_rat(xr, p.deg_x() as u64 * un as u64) * p.eval_const(&args);
    Ok((lhs, rhs))
}
