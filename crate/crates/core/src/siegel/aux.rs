use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::{kernel_basis, AuxForm, Poly, Rat, RatMatrix};
use crate::mahler::{TruncatedSeries, Valuation};

use super::SiegelError;

/// Every exponent vector of length `nvars` with entries summing to `d`, in
/// lexicographic order.
pub fn exponent_vectors(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, left: usize, d: u32, out: &mut Vec<Vec<u32>>) {
        if left == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=d {
            prefix.push(k);
            rec(prefix, left - 1, d - k, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), nvars, d, &mut out);
    out
}

/// Number of unknowns `(N+1) * C(N+t, t)` of a degree-`N` form in `t+1`
/// variables with coefficients of z-degree at most `N`.
pub fn unknown_count(t: usize, n: u32, deg_z: u32) -> usize {
    (deg_z as usize + 1) * exponent_vectors(t + 1, n).len()
}

pub(crate) fn common_base(series: &[TruncatedSeries]) -> Result<Option<u64>, SiegelError> {
    let mut base = None;
    for s in series {
        match (base, s.base()) {
            (Some(a), Some(b)) if a != b => return Err(SiegelError::MixedBase(a, b)),
            (None, Some(b)) => base = Some(b),
            _ => {}
        }
    }
    Ok(base)
}

/// Products `prod_i y_i^{e_i}` for every exponent vector, each truncated to
/// the window.
pub(crate) struct MonomialTable {
    window: usize,
    powers: Vec<Vec<TruncatedSeries>>,
}

impl MonomialTable {
    pub fn new(ys: &[TruncatedSeries], max_deg: u32, window: usize) -> Self {
        let powers = ys
            .iter()
            .map(|y| {
                let y = y.truncate(window);
                let mut v = vec![TruncatedSeries::from_poly(&Poly::one(), window)];
                for _ in 0..max_deg {
                    let next = v.last().expect("nonempty").mul(&y);
                    v.push(next);
                }
                v
            })
            .collect();
        MonomialTable { window, powers }
    }

    pub fn monomial(&self, exps: &[u32]) -> TruncatedSeries {
        exps.iter()
            .enumerate()
            .fold(
                TruncatedSeries::from_poly(&Poly::one(), self.window),
                |acc, (i, &e)| if e == 0 { acc } else { acc.mul(&self.powers[i][e as usize]) },
            )
    }
}

/// `R(z, y_0(z), ..., y_m(z))` on the common window of the inputs.
pub fn compose_form(r: &AuxForm, ys: &[TruncatedSeries]) -> TruncatedSeries {
    assert_eq!(ys.len(), r.nvars(), "one series per variable");
    let window = ys.iter().map(|s| s.guaranteed_order()).min().unwrap_or(0);
    let table = MonomialTable::new(ys, r.deg_x(), window);
    let mut acc = TruncatedSeries::new(vec![Rat::zero(); window]);
    for (exps, c) in r.terms() {
        acc = acc.add(&table.monomial(exps).mul_poly(c));
    }
    acc
}

fn with_unit(series: &[TruncatedSeries]) -> Vec<TruncatedSeries> {
    let n = series.iter().map(|s| s.guaranteed_order()).min().unwrap_or(0);
    let mut ys = vec![TruncatedSeries::from_poly(&Poly::one(), n)];
    ys.extend(series.iter().cloned());
    ys
}

/// Valuation of `R(z, 1, f_1(z), ..., f_t(z))`.
pub fn achieved_valuation(r: &AuxForm, series: &[TruncatedSeries]) -> Valuation {
    compose_form(r, &with_unit(series)).valuation()
}

/// Coefficient-matching matrix: rows are the orders `0..v`, columns the
/// unknowns `z^i * monomial`, ordered monomial-major.
pub(crate) fn matching_matrix(
    monomials: &[TruncatedSeries],
    deg_z: u32,
    v: usize,
) -> RatMatrix {
    let cols = monomials.len() * (deg_z as usize + 1);
    let mut data = vec![Rat::zero(); v * cols];
    for (mi, m) in monomials.iter().enumerate() {
        for i in 0..=deg_z as usize {
            let col = mi * (deg_z as usize + 1) + i;
            for row in i..v {
                data[row * cols + col] = m.coeff(row - i).clone();
            }
        }
    }
    RatMatrix::new(v, cols, data)
}

pub(crate) fn form_from_vector(
    exps: &[Vec<u32>],
    deg_z: u32,
    n: u32,
    vec: &[BigInt],
) -> AuxForm {
    let per = deg_z as usize + 1;
    let terms = exps.iter().enumerate().map(|(mi, e)| {
        let coeffs = vec[mi * per..(mi + 1) * per]
            .iter()
            .map(|c| Rat::from_integer(c.clone()))
            .collect();
        (e.clone(), Poly::new(coeffs))
    });
    let nvars = exps.first().map_or(1, |e| e.len());
    AuxForm::from_terms(nvars, n, terms).expect("exponents are homogeneous")
}

/// Result of [`aux_form`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxResult {
    pub form: AuxForm,
    pub valuation: Valuation,
    pub kernel_dim: usize,
    pub unknowns: usize,
    /// Every kernel vector composed to zero on the window; `form` is then
    /// a witness of an algebraic relation rather than an approximation.
    pub zero_composition: bool,
}

/// Nonzero integer form `R_0` of X-degree `N` and z-degree at most `N` with
/// `val_z R_0(z, 1, f_1, ..., f_t) >= v`.
pub fn aux_form(series: &[TruncatedSeries], n: u32, v: usize) -> Result<AuxResult, SiegelError> {
    common_base(series)?;
    let t = series.len();
    let exps = exponent_vectors(t + 1, n);
    let unknowns = exps.len() * (n as usize + 1);
    if unknowns <= v {
        return Err(SiegelError::TooManyConditions { unknowns, conditions: v });
    }
    let order = series.iter().map(|s| s.guaranteed_order()).min().unwrap_or(0);
    let needed = v + n as usize + 1;
    if order < needed {
        return Err(SiegelError::InsufficientTruncation { needed, got: order });
    }
    let ys = with_unit(series);
    let table = MonomialTable::new(&ys, n, order);
    let monomials: Vec<TruncatedSeries> = exps.iter().map(|e| table.monomial(e)).collect();
    let basis = kernel_basis(&matching_matrix(&monomials, n, v));
    assert!(!basis.is_empty(), "more unknowns than conditions");

    let mut witness = None;
    for vec in &basis {
        let form = form_from_vector(&exps, n, n, vec).primitive();
        let val = compose_form(&form, &ys).valuation();
        if !val.is_infinite() {
            return Ok(AuxResult {
                form,
                valuation: val,
                kernel_dim: basis.len(),
                unknowns,
                zero_composition: false,
            });
        }
        witness.get_or_insert((form, val));
    }
    let (form, valuation) = witness.expect("nonempty basis");
    Ok(AuxResult {
        form,
        valuation,
        kernel_dim: basis.len(),
        unknowns,
        zero_composition: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::int;
    use crate::mahler::{corpus, expand_series};

    #[test]
    fn exponent_vector_counts() {
        assert_eq!(exponent_vectors(2, 4).len(), 5);
        assert_eq!(exponent_vectors(3, 2).len(), 6);
        assert_eq!(exponent_vectors(3, 0), vec![vec![0, 0, 0]]);
        assert_eq!(unknown_count(1, 4, 4), 25);
    }

    #[test]
    fn powers2_form_reaches_its_conditions() {
        let f = expand_series(&corpus::get("powers2").unwrap(), 64).unwrap();
        let r = aux_form(std::slice::from_ref(&f), 4, 24).unwrap();
        assert!(!r.form.is_zero() && r.form.is_integral());
        assert_eq!(r.form.deg_x(), 4);
        assert!(r.form.deg_z() <= 4);
        assert!(r.valuation.lower_bound() >= 24);
        assert!(!r.zero_composition);
        assert_eq!(achieved_valuation(&r.form, &[f]), r.valuation);
    }

    #[test]
    fn dependent_input_yields_relation_witness() {
        // f = z: X_1 - z X_0 vanishes identically.
        let f = TruncatedSeries::from_poly(&Poly::z(), 10);
        let r = aux_form(std::slice::from_ref(&f), 1, 3).unwrap();
        assert!(r.zero_composition);
        assert!(r.valuation.is_infinite());
        assert!(achieved_valuation(&r.form, &[f]).is_infinite());
    }

    #[test]
    fn preconditions() {
        let f2 = expand_series(&corpus::get("powers2").unwrap(), 64).unwrap();
        let f3 = expand_series(&corpus::get("powers3").unwrap(), 64).unwrap();
        assert!(matches!(aux_form(&[f2.clone(), f3], 2, 5), Err(SiegelError::MixedBase(2, 3))));
        assert!(matches!(
            aux_form(&[f2.truncate(20)], 4, 24),
            Err(SiegelError::InsufficientTruncation { .. })
        ));
        assert!(matches!(
            aux_form(&[f2], 1, 4),
            Err(SiegelError::TooManyConditions { .. })
        ));
    }

    #[test]
    fn simple_valuations() {
        let f = expand_series(&corpus::get("powers2").unwrap(), 32).unwrap();
        assert_eq!(achieved_valuation(&AuxForm::var(2, 1), std::slice::from_ref(&f)), Valuation::Finite(1));
        assert_eq!(achieved_valuation(&AuxForm::var(2, 0), std::slice::from_ref(&f)), Valuation::Finite(0));
        let x1_minus_zx0 = AuxForm::from_terms(
            2,
            1,
            vec![(vec![0, 1], Poly::one()), (vec![1, 0], Poly::new(vec![int(0), int(-1)]))],
        )
        .unwrap();
        assert_eq!(achieved_valuation(&x1_minus_zx0, &[f]), Valuation::Finite(2));
    }
}
