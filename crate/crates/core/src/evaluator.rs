//! Certified values `f(alpha)` of Mahler functions at rational points.
//!
//! A value is the exact rational partial sum `sum_{n <= N} u_n alpha^n`
//! widened by the geometric tail `kappa (rho |alpha|)^{N+1} / (1 - rho |alpha|)`
//! coming from a coefficient bound `|u_n| <= kappa rho^n`. The enclosure is a
//! certificate only when that bound was declared by the caller for a reason
//! (for instance 0/1 coefficients); fitted bounds are labelled uncertified.
//!
//! A second route evaluates the solution vector of a regular Mahler system at
//! the tiny point `alpha^{Q^k}` and pulls it back with exact inverse matrices.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::json;
use thiserror::Error;

use crate::algebra::rat::{pow_rat, rat_to_string};
use crate::algebra::{Dyadic, Enclosure, Rat, Round};
use crate::mahler::{
    expand_series, initial_block, regularity, MahlerEquation, MahlerError, MahlerSystem,
    TruncatedSeries,
};

#[derive(Debug, Clone, Error)]
pub enum EvalError {
    #[error("point {0} must satisfy 0 < |alpha| < 1")]
    PointOutOfRange(String),
    #[error("rho |alpha| = {0} is not below 1, the tail bound diverges")]
    TailDiverges(String),
    #[error("declared bound fails at coefficient {index}")]
    DeclaredBoundViolated { index: usize },
    #[error("declared bound needs kappa > 0 and rho > 0")]
    BadDeclaration,
    #[error("empty series")]
    EmptySeries,
    #[error("system is not regular at the point (fails at k = {failure_k})")]
    NotRegular { failure_k: u32 },
    #[error("system of size {size} does not match the equation (expected {expected})")]
    SystemMismatch { size: usize, expected: usize },
    #[error(transparent)]
    Mahler(#[from] MahlerError),
}

/// A coefficient bound `|u_n| <= kappa rho^n` supplied with a justification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeclaredBound {
    pub kappa: Rat,
    pub rho: Rat,
    pub reason: String,
}

impl DeclaredBound {
    pub fn new(kappa: Rat, rho: Rat, reason: impl Into<String>) -> Self {
        DeclaredBound {
            kappa,
            rho,
            reason: reason.into(),
        }
    }

    /// `|u_n| <= 1`, the bound of sequences with values in `{0, 1}` or
    /// `{-1, 0, 1}`.
    pub fn unit(reason: impl Into<String>) -> Self {
        DeclaredBound::new(Rat::one(), Rat::one(), reason)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthProfile {
    pub rho: Rat,
    pub kappa: Rat,
    /// Largest `n` at which the bound was checked exactly.
    pub verified_to: usize,
    pub certified: bool,
    pub reason: Option<String>,
    /// Bit length of the lcm of the denominators of the checked coefficients.
    pub denominator_bits: u64,
}

fn denominator_bits(s: &TruncatedSeries) -> u64 {
    crate::algebra::rat::bits(&crate::algebra::rat::lcm_denominators(s.coeffs())) - 1
}

/// Rough `log2 |x|` for a nonzero rational.
fn log2_abs(x: &Rat) -> f64 {
    fn log2_int(n: &BigInt) -> f64 {
        let b = n.bits() as i64;
        let shift = (b - 60).max(0);
        let top = (n.abs() >> shift as u64).to_f64().unwrap_or(1.0);
        top.log2() + shift as f64
    }
    log2_int(x.numer()) - log2_int(x.denom())
}

/// Checks a declared bound, or fits one to the available coefficients.
pub fn growth_profile(
    s: &TruncatedSeries,
    declared: Option<DeclaredBound>,
) -> Result<GrowthProfile, EvalError> {
    let n = s.guaranteed_order();
    if n == 0 {
        return Err(EvalError::EmptySeries);
    }
    let dbits = denominator_bits(s);
    if let Some(d) = declared {
        if !d.kappa.is_positive() || !d.rho.is_positive() {
            return Err(EvalError::BadDeclaration);
        }
        let mut bound = d.kappa.clone();
        for (i, u) in s.coeffs().iter().enumerate() {
            if u.abs() > bound {
                return Err(EvalError::DeclaredBoundViolated { index: i });
            }
            bound *= &d.rho;
        }
        return Ok(GrowthProfile {
            rho: d.rho,
            kappa: d.kappa,
            verified_to: n - 1,
            certified: true,
            reason: Some(d.reason),
            denominator_bits: dbits,
        });
    }

    // rho: the largest |u_n|^{1/n} over the upper half, rounded up to a
    // multiple of 2^-16.
    let lo = (n / 2).max(1);
    let est = (lo..n)
        .filter(|&i| !s.coeff(i).is_zero())
        .map(|i| (log2_abs(s.coeff(i)) / i as f64).exp2())
        .fold(0.0f64, f64::max);
    let grid = 65536.0;
    let rho_num = ((est * grid).ceil() as i64 + 1).max(1);
    let rho = Rat::new(BigInt::from(rho_num), BigInt::from(65536));

    // kappa: the smallest constant making the bound hold on every known
    // coefficient.
    let mut kappa = Rat::zero();
    let mut rho_pow = Rat::one();
    for u in s.coeffs() {
        let need = u.abs() / &rho_pow;
        if need > kappa {
            kappa = need;
        }
        rho_pow *= &rho;
    }
    if kappa.is_zero() {
        kappa = Rat::one();
    }
    Ok(GrowthProfile {
        rho,
        kappa,
        verified_to: n - 1,
        certified: false,
        reason: None,
        denominator_bits: dbits,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Route {
    Series,
    System { k: u32 },
}

impl Route {
    pub fn name(&self) -> String {
        match self {
            Route::Series => "series".into(),
            Route::System { k } => format!("system(k={k})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueEnclosure {
    pub value: Enclosure,
    pub terms_used: usize,
    pub tail_bound: Rat,
    pub certified: bool,
    /// The exact partial sum the series route widened.
    pub partial_sum: Option<Rat>,
    pub route: Route,
}

impl ValueEnclosure {
    /// An exactly known value.
    pub fn exact(x: &Rat, prec: u32) -> Self {
        ValueEnclosure {
            value: Enclosure::from_rat(x, prec),
            terms_used: 0,
            tail_bound: Rat::zero(),
            certified: true,
            partial_sum: Some(x.clone()),
            route: Route::Series,
        }
    }

    pub fn to_json(&self, digits: u32) -> serde_json::Value {
        json!({
            "value_lo": self.value.lo().to_decimal(digits, Round::Down),
            "value_hi": self.value.hi().to_decimal(digits, Round::Up),
            "terms_used": self.terms_used,
            "tail_bound": Dyadic::from_rat_round(&self.tail_bound, 32, Round::Up).to_decimal(8, Round::Up),
            "certified": self.certified,
            "route": self.route.name(),
        })
    }
}

fn check_point(alpha: &Rat) -> Result<(), EvalError> {
    if alpha.is_zero() || alpha.abs() >= Rat::one() {
        return Err(EvalError::PointOutOfRange(rat_to_string(alpha)));
    }
    Ok(())
}

pub(crate) fn working_precision(target: &Dyadic) -> u32 {
    let e = target.magnitude().unwrap_or(0);
    ((-e).max(0) as u32) + 64
}

/// `f(alpha)` by summing the series until the tail bound fits the target
/// width.
pub fn eval_at(
    eq: &MahlerEquation,
    alpha: &Rat,
    profile: &GrowthProfile,
    target_width: &Dyadic,
) -> Result<ValueEnclosure, EvalError> {
    check_point(alpha)?;
    assert!(target_width.is_positive(), "target width must be positive");
    let r = &profile.rho * alpha.abs();
    if r >= Rat::one() {
        return Err(EvalError::TailDiverges(rat_to_string(&r)));
    }
    let prec = working_precision(target_width);

    let ns = initial_block(eq);
    if eq.is_homogeneous() {
        let block = expand_series(eq, ns)?;
        if block.coeffs().iter().all(Zero::is_zero) {
            return Ok(ValueEnclosure {
                value: Enclosure::from_int(0, prec),
                terms_used: ns,
                tail_bound: Rat::zero(),
                certified: true,
                partial_sum: Some(Rat::zero()),
                route: Route::Series,
            });
        }
    }

    // Smallest N with 2 tail(N) below the target, leaving a sliver for the
    // rounding of the partial sum.
    let budget = target_width.to_rat() * Rat::new(BigInt::from(255), BigInt::from(512));
    let denom = Rat::one() - &r;
    let mut pow = r.clone();
    let mut n = 0usize;
    let tail = loop {
        let t = &profile.kappa * &pow / &denom;
        if t <= budget {
            break t;
        }
        pow *= &r;
        n += 1;
    };
    let s = expand_series(eq, n + 1)?;
    let sum = s.partial_sum(alpha, n + 1);
    let value = Enclosure::from_rat(&sum, prec).widen(&tail);
    debug_assert!(value.width() <= *target_width);
    Ok(ValueEnclosure {
        value,
        terms_used: n + 1,
        tail_bound: tail,
        certified: profile.certified,
        partial_sum: Some(sum),
        route: Route::Series,
    })
}

fn inf_norm(m: &crate::algebra::RatMatrix, size: usize) -> Rat {
    (0..size)
        .map(|i| m.row(i).iter().map(|x| x.abs()).sum::<Rat>())
        .max()
        .unwrap_or_else(Rat::zero)
}

/// `f(alpha)` through `Y(alpha) = A(alpha)^{-1} ... A(alpha^{Q^{k-1}})^{-1} Y(alpha^{Q^k})`
/// for the companion system of `eq` (or one of its iterates).
pub fn eval_via_system(
    sys: &MahlerSystem,
    eq: &MahlerEquation,
    alpha: &Rat,
    k: u32,
    profile: &GrowthProfile,
    target_width: &Dyadic,
) -> Result<ValueEnclosure, EvalError> {
    check_point(alpha)?;
    let expected = eq.order() + usize::from(!eq.is_homogeneous());
    if sys.size() != expected {
        return Err(EvalError::SystemMismatch {
            size: sys.size(),
            expected,
        });
    }
    let report = regularity(sys, alpha)?;
    if !report.regular {
        return Err(EvalError::NotRegular {
            failure_k: report.failure_k.expect("witness"),
        });
    }
    let big_q = sys.q();
    let q = eq.q();
    let size = sys.size();
    let offset = usize::from(!eq.is_homogeneous());

    // Points alpha^{Q^i} and the exact inverses at each of them.
    let mut points = vec![alpha.clone()];
    for _ in 0..k {
        let next = pow_rat(points.last().expect("nonempty"), big_q);
        points.push(next);
    }
    let inverses: Vec<_> = points[..k as usize]
        .iter()
        .map(|x| {
            sys.matrix()
                .eval(x)
                .and_then(|m| m.inverse())
                .expect("regular point: defined and invertible")
        })
        .collect();
    let amplification = inverses
        .iter()
        .fold(Rat::one(), |acc, m| acc * inf_norm(m, size).max(Rat::one()));

    let inner_target = Dyadic::from_rat_round(
        &(target_width.to_rat() / (amplification.clone() * Rat::from_integer(BigInt::from(4)))),
        32,
        Round::Down,
    );
    let prec = working_precision(&inner_target) + 16;
    let beta = points.last().expect("nonempty").clone();

    let mut y: Vec<Enclosure> = Vec::with_capacity(size);
    let mut terms = 0;
    let mut tail = Rat::zero();
    if offset == 1 {
        y.push(Enclosure::from_int(1, prec));
    }
    for j in 0..eq.order() {
        let x = pow_rat(&beta, q.pow(j as u32));
        let v = eval_at(eq, &x, profile, &inner_target)?;
        terms = terms.max(v.terms_used);
        if v.tail_bound > tail {
            tail = v.tail_bound.clone();
        }
        y.push(v.value.with_prec(prec));
    }
    for inv in inverses.iter().rev() {
        y = (0..size)
            .map(|i| {
                (0..size).fold(Enclosure::from_int(0, prec), |acc, j| {
                    acc.add(&y[j].mul_rat(inv.get(i, j)))
                })
            })
            .collect();
    }
    Ok(ValueEnclosure {
        value: y[offset].clone(),
        terms_used: terms,
        tail_bound: tail * amplification,
        certified: profile.certified,
        partial_sum: None,
        route: Route::System { k },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::{int, rat};
    use crate::algebra::{parse_ratfun, MatRF};
    use crate::mahler::{companion_system, corpus};

    fn unit_profile(name: &str, n: usize) -> (MahlerEquation, GrowthProfile) {
        let eq = corpus::get(name).unwrap();
        let s = expand_series(&eq, n).unwrap();
        let p = growth_profile(&s, Some(DeclaredBound::unit("0/1 coefficients"))).unwrap();
        (eq, p)
    }

    #[test]
    fn declared_and_fitted_profiles() {
        let (_, p) = unit_profile("thue_morse", 128);
        assert!(p.certified && p.verified_to == 127);
        let cantor = expand_series(&corpus::get("cantor").unwrap(), 200).unwrap();
        assert!(matches!(
            growth_profile(&cantor, Some(DeclaredBound::unit("wrong"))),
            Err(EvalError::DeclaredBoundViolated { index: 5 })
        ));
        let fit = growth_profile(&cantor, None).unwrap();
        assert!(!fit.certified);
        let mut bound = fit.kappa.clone();
        for u in cantor.coeffs() {
            assert!(u.abs() <= bound);
            bound *= &fit.rho;
        }
    }

    #[test]
    fn powers2_at_one_half() {
        let (eq, p) = unit_profile("powers2", 64);
        let w = Dyadic::pow2(-80);
        let v = eval_at(&eq, &rat(1, 2), &p, &w).unwrap();
        assert!(v.certified && v.value.width() <= w);
        // sum_{n<7} 2^{-2^n} plus the remaining powers up to 2^-64.
        let exact7: Rat = (0..7).map(|n| pow_rat(&rat(1, 2), 1u64 << n)).sum();
        assert!(v.value.contains_rat(&exact7));
        let s = v.partial_sum.clone().unwrap();
        assert!(v.value.lo().to_rat() <= &s - &v.tail_bound);
        assert!(v.value.hi().to_rat() >= &s + &v.tail_bound);
    }

    #[test]
    fn zero_solution_is_exact_zero() {
        let eq = corpus::get("cantor").unwrap().with_seeds(vec![int(0)]);
        let s = expand_series(&eq, 8).unwrap();
        let p = growth_profile(&s, Some(DeclaredBound::unit("zero"))).unwrap();
        let v = eval_at(&eq, &rat(1, 3), &p, &Dyadic::pow2(-20)).unwrap();
        assert!(v.value.is_point() && v.value.contains_rat(&int(0)));
    }

    #[test]
    fn coarser_targets_use_fewer_terms() {
        let (eq, p) = unit_profile("thue_morse", 64);
        let mut last = usize::MAX;
        for bits in [200, 100, 50, 10] {
            let v = eval_at(&eq, &rat(1, 2), &p, &Dyadic::pow2(-bits)).unwrap();
            assert!(v.terms_used <= last);
            last = v.terms_used;
        }
    }

    #[test]
    fn routes_agree() {
        for name in ["powers2", "thue_morse"] {
            let (eq, p) = unit_profile(name, 64);
            let sys = companion_system(&eq);
            let w = Dyadic::pow2(-256);
            let a = eval_at(&eq, &rat(1, 2), &p, &w).unwrap();
            for k in 0..=6 {
                let b = eval_via_system(&sys, &eq, &rat(1, 2), k, &p, &w).unwrap();
                assert!(a.value.intersect(&b.value).is_some(), "{name} k={k}");
                assert!(b.value.width() <= w);
            }
        }
    }

    #[test]
    fn errors() {
        let (eq, p) = unit_profile("powers2", 16);
        assert!(matches!(
            eval_at(&eq, &int(1), &p, &Dyadic::pow2(-8)),
            Err(EvalError::PointOutOfRange(_))
        ));
        let steep = GrowthProfile { rho: int(4), ..p.clone() };
        assert!(matches!(
            eval_at(&eq, &rat(1, 2), &steep, &Dyadic::pow2(-8)),
            Err(EvalError::TailDiverges(_))
        ));
        let pole = corpus::get("pole_demo").unwrap();
        let sys = MahlerSystem::new(2, MatRF::from_rows(vec![vec![parse_ratfun("1/(2*z-1)").unwrap()]])).unwrap();
        assert!(matches!(
            eval_via_system(&sys, &pole, &rat(1, 2), 0, &p, &Dyadic::pow2(-8)),
            Err(EvalError::NotRegular { failure_k: 0 })
        ));
    }
}
