//! Truncated power series and the coefficient recurrence of a Mahler
//! equation.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{Poly, Rat};

use super::{MahlerEquation, MahlerError};

/// Exact prefix `u(0), ..., u(N-1)` of a power series; `N` is the
/// guaranteed order. The optional base records the `q` of the equation the
/// series came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Rat>,
    base: Option<u64>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<Rat>) -> Self {
        TruncatedSeries { coeffs, base: None }
    }

    pub fn with_base(mut self, q: u64) -> Self {
        self.base = Some(q);
        self
    }

    /// The exact expansion of a polynomial, to the given order.
    pub fn from_poly(p: &Poly, order: usize) -> Self {
        TruncatedSeries::new((0..order).map(|i| p.coeff(i)).collect())
    }

    pub fn base(&self) -> Option<u64> {
        self.base
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &Rat {
        &self.coeffs[n]
    }

    pub fn guaranteed_order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn truncate(&self, n: usize) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs[..n.min(self.coeffs.len())].to_vec(),
            base: self.base,
        }
    }

    /// Prefix as a polynomial.
    pub fn to_poly(&self) -> Poly {
        Poly::new(self.coeffs.clone())
    }

    /// `s(z^k)` with its guaranteed order `k N`, cut to at most `limit`.
    pub fn compose_power(&self, k: usize, limit: usize) -> TruncatedSeries {
        let n = (k * self.coeffs.len()).min(limit);
        let mut c = vec![Rat::zero(); n];
        for (i, u) in self.coeffs.iter().enumerate() {
            if i * k >= n {
                break;
            }
            c[i * k] = u.clone();
        }
        TruncatedSeries {
            coeffs: c,
            base: self.base,
        }
    }

    /// Product with a polynomial; the guaranteed order is unchanged.
    pub fn mul_poly(&self, p: &Poly) -> TruncatedSeries {
        let prod = self.to_poly().mul_trunc(p, self.coeffs.len());
        TruncatedSeries {
            coeffs: (0..self.coeffs.len()).map(|i| prod.coeff(i)).collect(),
            base: self.base,
        }
    }

    /// Product of two series, truncated to the smaller guaranteed order.
    pub fn mul(&self, o: &TruncatedSeries) -> TruncatedSeries {
        let n = self.coeffs.len().min(o.coeffs.len());
        let prod = self.to_poly().mul_trunc(&o.to_poly(), n);
        TruncatedSeries {
            coeffs: (0..n).map(|i| prod.coeff(i)).collect(),
            base: self.base.or(o.base),
        }
    }

    pub fn add(&self, o: &TruncatedSeries) -> TruncatedSeries {
        let n = self.coeffs.len().min(o.coeffs.len());
        TruncatedSeries {
            coeffs: (0..n).map(|i| &self.coeffs[i] + &o.coeffs[i]).collect(),
            base: self.base.or(o.base),
        }
    }

    pub fn sub(&self, o: &TruncatedSeries) -> TruncatedSeries {
        let n = self.coeffs.len().min(o.coeffs.len());
        TruncatedSeries {
            coeffs: (0..n).map(|i| &self.coeffs[i] - &o.coeffs[i]).collect(),
            base: self.base.or(o.base),
        }
    }

    /// Valuation of the prefix: the first nonzero index, or
    /// `Valuation::Infinite` when the whole prefix vanishes.
    pub fn valuation(&self) -> Valuation {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(i) => Valuation::Finite(i),
            None => Valuation::Infinite {
                window: self.coeffs.len(),
            },
        }
    }

    /// Exact value of the partial sum `sum_{n < N} u(n) x^n`.
    pub fn partial_sum(&self, x: &Rat, terms: usize) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs[..terms.min(self.coeffs.len())].iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

/// Valuation of a truncated quantity: either an exact finite value or the
/// statement that it vanishes on the whole known window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Valuation {
    Finite(usize),
    Infinite { window: usize },
}

impl Valuation {
    /// Guaranteed lower bound on the true valuation.
    pub fn lower_bound(&self) -> usize {
        match *self {
            Valuation::Finite(v) => v,
            Valuation::Infinite { window } => window,
        }
    }

    pub fn finite(&self) -> Option<usize> {
        match *self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite { .. } => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite { .. })
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite { window } => write!(f, ">={window}"),
        }
    }
}

/// Size of the initial block `n* = floor(v0/(q-1)) + 1` that the recurrence
/// cannot reach on its own.
pub fn initial_block(eq: &MahlerEquation) -> usize {
    let v0 = eq.coeffs()[0].valuation().expect("a_0 != 0");
    v0 / (eq.q() as usize - 1) + 1
}

/// Visits every `(index, a_j[i])` with `u(index)` appearing in the
/// coefficient of `z^k` of `sum_j a_j(z) f(z^{q^j})`.
fn order_k_terms(eq: &MahlerEquation, k: usize, mut visit: impl FnMut(usize, &Rat)) {
    let q = eq.q() as usize;
    let mut qj = Some(1usize);
    for a in eq.coeffs() {
        for (i, c) in a.coeffs().iter().enumerate().take(k + 1) {
            if c.is_zero() {
                continue;
            }
            let r = k - i;
            match qj {
                Some(p) if r.is_multiple_of(p) => visit(r / p, c),
                None if r == 0 => visit(0, c),
                _ => {}
            }
        }
        qj = qj.and_then(|p| p.checked_mul(q));
    }
}

/// Expands the unique power-series solution consistent with the seeds to
/// `n` coefficients.
pub fn expand_series(eq: &MahlerEquation, n: usize) -> Result<TruncatedSeries, MahlerError> {
    let ns = initial_block(eq);
    let v0 = eq.coeffs()[0].valuation().expect("a_0 != 0");
    let c = eq.coeffs()[0].coeff(v0);
    let len = n.max(ns).max(eq.seeds().len());
    let mut u = solve_initial_block(eq, ns)?;
    u.resize(len, Rat::zero());
    for m in ns..len {
        let k = m + v0;
        let mut acc = eq.rhs().coeff(k);
        order_k_terms(eq, k, |idx, coef| {
            if idx != m {
                debug_assert!(idx < m);
                acc -= coef * &u[idx];
            }
        });
        u[m] = acc / &c;
    }
    for (i, s) in eq.seeds().iter().enumerate() {
        if &u[i] != s {
            return Err(MahlerError::InconsistentSeeds {
                index: i,
                expected: crate::algebra::rat::rat_to_string(&u[i]),
            });
        }
    }
    u.truncate(n);
    Ok(TruncatedSeries::new(u).with_base(eq.q()))
}

/// Solves the equations of order `< n* + v0` together with the seeds that
/// fall inside the initial block.
fn solve_initial_block(eq: &MahlerEquation, ns: usize) -> Result<Vec<Rat>, MahlerError> {
    let v0 = eq.coeffs()[0].valuation().expect("a_0 != 0");
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for k in 0..ns + v0 {
        let mut row = vec![Rat::zero(); ns + 1];
        order_k_terms(eq, k, |idx, coef| {
            debug_assert!(idx < ns);
            row[idx] += coef;
        });
        row[ns] = eq.rhs().coeff(k);
        rows.push(row);
    }
    let given = eq.seeds().len().min(ns);
    for (i, s) in eq.seeds().iter().take(given).enumerate() {
        let mut row = vec![Rat::zero(); ns + 1];
        row[i] = Rat::one();
        row[ns] = s.clone();
        rows.push(row);
    }
    let base_rows = rows.len() - given;
    match solve_affine(rows.clone(), ns) {
        Affine::Unique(x) => Ok(x),
        Affine::Inconsistent => {
            // Blame the seeds when the equations alone are solvable.
            let eqs_only = rows[..base_rows].to_vec();
            if matches!(solve_affine(eqs_only, ns), Affine::Inconsistent) {
                Err(MahlerError::NoSeriesSolution)
            } else {
                Err(MahlerError::InconsistentSeeds {
                    index: given.saturating_sub(1),
                    expected: "a value compatible with the equation".into(),
                })
            }
        }
        Affine::Free => {
            let mut needed = 0;
            for extra in given + 1..=ns {
                let mut r = rows[..base_rows].to_vec();
                for i in 0..extra {
                    let mut row = vec![Rat::zero(); ns + 1];
                    row[i] = Rat::one();
                    r.push(row);
                }
                if matches!(solve_affine(r, ns), Affine::Unique(_) | Affine::Inconsistent) {
                    needed = extra - given;
                    break;
                }
            }
            Err(MahlerError::Underdetermined {
                given: eq.seeds().len(),
                needed,
            })
        }
    }
}

enum Affine {
    Unique(Vec<Rat>),
    Inconsistent,
    Free,
}

/// Gauss-Jordan on an augmented system with `n` unknowns.
fn solve_affine(mut rows: Vec<Vec<Rat>>, n: usize) -> Affine {
    let mut rank = 0;
    let mut pivots = Vec::new();
    for col in 0..n {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].recip();
        for v in rows[rank].iter_mut() {
            *v *= &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..=n {
                    let t = &f * &rows[rank][c];
                    rows[r][c] -= t;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if rows[rank..].iter().any(|r| !r[n].is_zero()) {
        return Affine::Inconsistent;
    }
    if rank < n {
        return Affine::Free;
    }
    Affine::Unique((0..n).map(|i| rows[i][n].clone()).collect())
}

/// Residual valuation of `sum_j a_j(z) s(z^{q^j}) - b(z)` on the window where
/// the truncated substitution is exact.
pub fn verify_equation(eq: &MahlerEquation, s: &TruncatedSeries) -> Valuation {
    let n = s.guaranteed_order();
    let q = eq.q() as usize;
    let mut residual = TruncatedSeries::from_poly(&-eq.rhs(), n);
    let mut qj = 1usize;
    for a in eq.coeffs() {
        let composed = s.compose_power(qj.min(n.max(1)), n);
        residual = residual.add(&composed.mul_poly(a));
        qj = qj.saturating_mul(q);
    }
    residual.valuation()
}
