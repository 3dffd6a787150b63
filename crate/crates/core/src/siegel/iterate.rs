use num_traits::One;

use crate::algebra::{AuxForm, Poly, Rat};
use crate::mahler::{
    companion_system, companion_vector, expand_series, MahlerEquation, MahlerSystem,
    TruncatedSeries,
};

use super::aux::compose_form;
use super::SiegelError;

/// The data the recursion needs: an augmented system `B`, a polynomial `a`
/// with `a B` polynomial, and the solution vector `Y = (1, ...)` expanded
/// to some order.
#[derive(Clone, Debug)]
pub struct IterContext {
    pub system: MahlerSystem,
    pub a: Poly,
    pub y: Vec<TruncatedSeries>,
}

impl IterContext {
    /// Companion context of an equation, with `Y = (1, f, f(z^q), ...)`.
    pub fn from_equation(eq: &MahlerEquation, order: usize) -> Result<Self, SiegelError> {
        let f = expand_series(eq, order)?;
        let base = companion_system(eq);
        let mut y = companion_vector(eq, &f);
        if !base.is_augmented() {
            y.insert(0, TruncatedSeries::from_poly(&Poly::one(), order));
        }
        let system = base.augmented();
        let a = system.matrix().denominator_lcm();
        Ok(IterContext { system, a, y })
    }

    pub fn q(&self) -> u64 {
        self.system.q()
    }

    /// `a_k(z) = a(z) a(z^q) ... a(z^{q^{k-1}})`.
    pub fn a_k(&self, k: u32) -> Poly {
        let q = self.q() as usize;
        (0..k).fold(Poly::one(), |acc, j| &acc * &self.a.compose_power(q.pow(j)))
    }
}

/// `a(z) B(z)` as a matrix of polynomials, or `None` when `a` does not clear
/// every denominator.
fn cleared(b: &MahlerSystem, a: &Poly) -> Option<Vec<Vec<Poly>>> {
    let m = b.matrix();
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let e = m.get(i, j);
                    (e.num() * a).exact_div(e.den())
                })
                .collect()
        })
        .collect()
}

/// Applies `R_{j+1}(z, X) = a(z)^N R_j(z^q, B(z) X)` `k` times. `B` is used
/// as given; pass an augmented system when `X_0` stands for the constant 1.
pub fn iterate_aux(
    r: &AuxForm,
    b: &MahlerSystem,
    a: &Poly,
    n: u32,
    k: u32,
) -> Result<AuxForm, SiegelError> {
    if b.size() != r.nvars() {
        return Err(SiegelError::Arity {
            expected: b.size(),
            got: r.nvars(),
        });
    }
    if r.deg_x() > n {
        return Err(SiegelError::DegreeExceedsN { deg: r.deg_x(), n });
    }
    let ab = cleared(b, a).ok_or(SiegelError::ClearingFailure)?;
    let size = b.size();
    let linear: Vec<AuxForm> = ab
        .iter()
        .map(|row| {
            let terms = row.iter().enumerate().map(|(l, p)| {
                let mut e = vec![0; size];
                e[l] = 1;
                (e, p.clone())
            });
            AuxForm::from_terms(size, 1, terms).expect("linear")
        })
        .collect();
    let extra = a.pow(n - r.deg_x());
    let q = b.q() as usize;
    let mut cur = r.clone();
    for _ in 0..k {
        cur = cur.compose_z_power(q).substitute(&linear).scale_poly(&extra);
    }
    Ok(cur)
}

/// Outcome of comparing both sides of `R_k(z, Y(z)) = a_k(z)^N R(z^{q^k}, Y(z^{q^k}))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub holds: bool,
    pub first_mismatch: Option<usize>,
    pub order: usize,
}

pub fn check_iterate_identity(
    r: &AuxForm,
    rk: &AuxForm,
    ctx: &IterContext,
    n: u32,
    k: u32,
    order: usize,
) -> Result<IdentityCheck, SiegelError> {
    let avail = ctx.y.iter().map(|s| s.guaranteed_order()).min().unwrap_or(0);
    if avail < order {
        return Err(SiegelError::InsufficientTruncation {
            needed: order,
            got: avail,
        });
    }
    let ys: Vec<TruncatedSeries> = ctx.y.iter().map(|s| s.truncate(order)).collect();
    let lhs = compose_form(rk, &ys);
    let qk = (ctx.q() as usize).pow(k);
    let inner_order = order.div_ceil(qk);
    let inner: Vec<TruncatedSeries> = ys.iter().map(|s| s.truncate(inner_order)).collect();
    let rhs = compose_form(r, &inner)
        .compose_power(qk, order)
        .mul_poly(&ctx.a_k(k).pow(n));
    let first = (0..order).find(|&i| lhs.coeff(i) != rhs.coeff(i));
    Ok(IdentityCheck {
        holds: first.is_none(),
        first_mismatch: first,
        order,
    })
}

/// Adds `z^at` to the first coefficient of a form; used to build
/// deliberately wrong iterates.
pub fn perturb(r: &AuxForm, at: usize) -> AuxForm {
    let (exps, _) = r.terms().next().expect("nonzero form");
    let bump = AuxForm::monomial(exps.clone(), Poly::monomial(Rat::one(), at));
    let out = r.add(&bump);
    debug_assert!(!out.sub(r).is_zero());
    out
}
