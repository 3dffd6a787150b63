//! Mahler systems `Y(z^q) = A(z) Y(z)` and the regularity of points.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::rat::{pow_rat, rat_to_string};
use crate::algebra::{root_lower_bound, MatRF, Poly, Rat, RatFun};

use super::series::{TruncatedSeries, Valuation};
use super::{MahlerEquation, MahlerError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Raw,
    Companion,
    DirectSum,
    Iterate { ell: u32 },
}

/// A square matrix of rational functions with nonzero determinant and a
/// base `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MahlerSystem {
    q: u64,
    a: MatRF,
    provenance: Provenance,
    augmented: bool,
}

impl MahlerSystem {
    pub fn new(q: u64, a: MatRF) -> Result<Self, MahlerError> {
        Self::with_provenance(q, a, Provenance::Raw, false)
    }

    fn with_provenance(
        q: u64,
        a: MatRF,
        provenance: Provenance,
        augmented: bool,
    ) -> Result<Self, MahlerError> {
        if q < 2 {
            return Err(MahlerError::InvalidBase(q));
        }
        if !a.is_square() {
            return Err(MahlerError::NotSquare);
        }
        if a.det().is_zero() {
            return Err(MahlerError::SingularSystem);
        }
        Ok(MahlerSystem {
            q,
            a,
            provenance,
            augmented,
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn matrix(&self) -> &MatRF {
        &self.a
    }

    pub fn size(&self) -> usize {
        self.a.rows()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Whether the first coordinate is the constant function `1` (first row
    /// `(1, 0, ..., 0)`).
    pub fn is_augmented(&self) -> bool {
        self.augmented
    }

    pub fn det(&self) -> RatFun {
        self.a.det()
    }

    /// The system with a constant coordinate prepended, `1 (+) A`, unless
    /// it already has one.
    pub fn augmented(&self) -> MahlerSystem {
        if self.augmented {
            return self.clone();
        }
        MahlerSystem {
            q: self.q,
            a: MatRF::direct_sum(&[&MatRF::identity(1), &self.a]),
            provenance: self.provenance.clone(),
            augmented: true,
        }
    }

    /// Valuation of `D(z) (Y(z^q) - A(z) Y(z))` where `D` clears every
    /// denominator of `A`; vanishing to the window means the truncated
    /// vector satisfies the system.
    pub fn residual(&self, y: &[TruncatedSeries]) -> Valuation {
        assert_eq!(y.len(), self.size());
        let n = y.iter().map(|s| s.guaranteed_order()).min().unwrap_or(0);
        let d = self.a.denominator_lcm();
        let q = self.q as usize;
        let mut worst: Option<Valuation> = None;
        for i in 0..self.size() {
            let mut r = y[i].compose_power(q, n).mul_poly(&d);
            for (j, yj) in y.iter().enumerate() {
                let e = self.a.get(i, j);
                if e.is_zero() {
                    continue;
                }
                let cleared = (e.num() * &d).exact_div(e.den()).expect("lcm divisible");
                r = r.sub(&yj.truncate(n).mul_poly(&cleared));
            }
            let v = r.valuation();
            worst = Some(match worst {
                None => v,
                Some(w) if v.lower_bound() < w.lower_bound() => v,
                Some(w) => w,
            });
        }
        worst.unwrap_or(Valuation::Infinite { window: n })
    }
}

/// Companion system of an equation. Homogeneous equations give the
/// `m x m` matrix acting on `(f(z), ..., f(z^{q^{m-1}}))`; inhomogeneous
/// ones the `(m+1) x (m+1)` matrix acting on `(1, f(z), ..., f(z^{q^{m-1}}))`.
pub fn companion_system(eq: &MahlerEquation) -> MahlerSystem {
    let m = eq.order();
    let a = eq.coeffs();
    let am = &a[m];
    let ratio = |p: &Poly| -> RatFun { RatFun::new(-p, am.clone()) };
    if eq.is_homogeneous() {
        let mut mat = MatRF::zeros(m, m);
        for i in 0..m - 1 {
            mat.set(i, i + 1, RatFun::one());
        }
        for j in 0..m {
            mat.set(m - 1, j, ratio(&a[j]));
        }
        return MahlerSystem::with_provenance(eq.q(), mat, Provenance::Companion, false)
            .expect("companion determinant is +-a_0/a_m");
    }
    let size = m + 1;
    let mut mat = MatRF::zeros(size, size);
    mat.set(0, 0, RatFun::one());
    if m == 0 {
        return MahlerSystem::with_provenance(eq.q(), mat, Provenance::Companion, true)
            .expect("identity");
    }
    for i in 1..m {
        mat.set(i, i + 1, RatFun::one());
    }
    mat.set(m, 0, RatFun::new(eq.rhs().clone(), am.clone()));
    for j in 0..m {
        mat.set(m, j + 1, ratio(&a[j]));
    }
    MahlerSystem::with_provenance(eq.q(), mat, Provenance::Companion, true)
        .expect("companion determinant is +-a_0/a_m")
}

/// The vector of series on which [`companion_system`] acts.
pub fn companion_vector(eq: &MahlerEquation, f: &TruncatedSeries) -> Vec<TruncatedSeries> {
    let n = f.guaranteed_order();
    let q = eq.q() as usize;
    let mut out = Vec::new();
    if !eq.is_homogeneous() {
        out.push(TruncatedSeries::from_poly(&Poly::one(), n));
    }
    let mut qj = 1usize;
    for _ in 0..eq.order() {
        out.push(f.compose_power(qj.min(n.max(1)), n));
        qj = qj.saturating_mul(q);
    }
    out
}

/// Block-diagonal sum of systems sharing one base.
pub fn direct_sum(systems: &[&MahlerSystem]) -> Result<MahlerSystem, MahlerError> {
    let Some(first) = systems.first() else {
        return Err(MahlerError::EmptyEquation);
    };
    if let Some(bad) = systems.iter().find(|s| s.q != first.q) {
        return Err(MahlerError::MixedBase(first.q, bad.q));
    }
    let blocks: Vec<&MatRF> = systems.iter().map(|s| &s.a).collect();
    MahlerSystem::with_provenance(
        first.q,
        MatRF::direct_sum(&blocks),
        Provenance::DirectSum,
        first.augmented,
    )
}

/// The `q^ell` system `A(z^{q^{ell-1}}) ... A(z^q) A(z)`.
pub fn iterate_system(sys: &MahlerSystem, ell: u32) -> MahlerSystem {
    assert!(ell >= 1, "ell >= 1");
    if ell == 1 {
        return sys.clone();
    }
    let q = sys.q as usize;
    let mut acc = sys.a.clone();
    let mut qj = q;
    for _ in 1..ell {
        acc = sys.a.compose_power(qj).mul(&acc);
        qj *= q;
    }
    MahlerSystem {
        q: sys.q.pow(ell),
        a: acc,
        provenance: Provenance::Iterate { ell },
        augmented: sys.augmented,
    }
}

/// Outcome of the regularity decision at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityReport {
    pub regular: bool,
    /// Least `K` with `|alpha|^{q^K} < r_min`, or the failing index.
    pub checked_up_to: u32,
    pub failure_k: Option<u32>,
    /// The exact singular point `alpha^{q^k}` when not regular.
    pub witness: Option<Rat>,
    pub r_min: Rat,
    /// Common denominator of the entries and numerator of the determinant.
    pub singular_polys: Vec<Poly>,
}

impl RegularityReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "regular": self.regular,
            "checked_up_to": self.checked_up_to,
            "failure_k": self.failure_k,
            "witness": self.witness.as_ref().map(rat_to_string),
            "r_min": rat_to_string(&self.r_min),
            "singular_polys": self.singular_polys.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Decides whether `A` is defined and invertible at every `alpha^{q^k}`.
pub fn regularity(sys: &MahlerSystem, alpha: &Rat) -> Result<RegularityReport, MahlerError> {
    if alpha.is_zero() || alpha.abs() >= Rat::one() {
        return Err(MahlerError::PointOutOfRange(rat_to_string(alpha)));
    }
    let den = sys.a.denominator_lcm();
    let det_num = sys.a.det().num().clone();
    let s = &den * &det_num;
    let r_min = root_lower_bound(&s).expect("nonzero");

    let q = sys.q;
    let mut k = 0u32;
    let mut x = alpha.clone();
    loop {
        if s.eval(&x).is_zero() {
            return Ok(RegularityReport {
                regular: false,
                checked_up_to: k,
                failure_k: Some(k),
                witness: Some(x),
                r_min,
                singular_polys: vec![den, det_num],
            });
        }
        if x.abs() < r_min {
            return Ok(RegularityReport {
                regular: true,
                checked_up_to: k,
                failure_k: None,
                witness: None,
                r_min,
                singular_polys: vec![den, det_num],
            });
        }
        x = pow_rat(&x, q);
        k += 1;
    }
}

/// One attempt of [`find_regular_power`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerAttempt {
    pub ell: u32,
    pub report: RegularityReport,
}

#[derive(Clone, Debug)]
pub struct RegularPower {
    pub ell: u32,
    pub system: MahlerSystem,
    pub attempts: Vec<PowerAttempt>,
}

/// Smallest `ell <= lmax` whose iterated companion system is regular at
/// `alpha`, with the transcript of every attempt.
pub fn find_regular_power(
    eq: &MahlerEquation,
    alpha: &Rat,
    lmax: u32,
) -> Result<RegularPower, MahlerError> {
    let base = companion_system(eq);
    let mut attempts = Vec::new();
    for ell in 1..=lmax {
        let sys = iterate_system(&base, ell);
        let report = regularity(&sys, alpha)?;
        let ok = report.regular;
        attempts.push(PowerAttempt { ell, report });
        if ok {
            return Ok(RegularPower {
                ell,
                system: sys,
                attempts,
            });
        }
    }
    Err(MahlerError::NotFound { attempts })
}
