//! Homogeneous forms in `X_0..X_m` with polynomial coefficients in `z`.
//!
//! Sparse: a map from exponent vectors (all summing to `deg_x`) to nonzero
//! [`Poly`] coefficients.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::parse::{parse_poly, ParseError};
use super::poly::Poly;
use super::rat::{gcd_numerators, lcm_denominators, pow_rat, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxForm {
    nvars: usize,
    deg_x: u32,
    terms: BTreeMap<Vec<u32>, Poly>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error("exponent vector {exps:?} has length {len}, expected {nvars}")]
    Arity { exps: Vec<u32>, len: usize, nvars: usize },
    #[error("term {exps:?} has degree {got}, form degree is {want}")]
    NotHomogeneous { exps: Vec<u32>, got: u32, want: u32 },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl AuxForm {
    pub fn zero(nvars: usize, deg_x: u32) -> Self {
        assert!(nvars >= 1);
        AuxForm {
            nvars,
            deg_x,
            terms: BTreeMap::new(),
        }
    }

    /// Single variable `X_i` in a form over `nvars` variables.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        AuxForm::monomial(e, Poly::one())
    }

    pub fn monomial(exps: Vec<u32>, coeff: Poly) -> Self {
        let deg_x = exps.iter().sum();
        let mut f = AuxForm::zero(exps.len(), deg_x);
        if !coeff.is_zero() {
            f.terms.insert(exps, coeff);
        }
        f
    }

    pub fn from_terms(
        nvars: usize,
        deg_x: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, Poly)>,
    ) -> Result<Self, FormError> {
        let mut f = AuxForm::zero(nvars, deg_x);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(FormError::Arity {
                    len: exps.len(),
                    exps,
                    nvars,
                });
            }
            let got: u32 = exps.iter().sum();
            if got != deg_x {
                return Err(FormError::NotHomogeneous {
                    exps,
                    got,
                    want: deg_x,
                });
            }
            f.add_term(exps, c);
        }
        Ok(f)
    }

    /// Form with constant (z-free) rational coefficients.
    pub fn from_rat_terms(
        nvars: usize,
        deg_x: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, Rat)>,
    ) -> Result<Self, FormError> {
        AuxForm::from_terms(
            nvars,
            deg_x,
            terms.into_iter().map(|(e, c)| (e, Poly::constant(c))),
        )
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Poly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(old) => {
                let s = &*old + &c;
                if s.is_zero() {
                    self.terms.remove(&exps);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn deg_x(&self) -> u32 {
        self.deg_x
    }

    /// Largest z-degree among the coefficients (0 for the zero form).
    pub fn deg_z(&self) -> usize {
        self.terms.values().map(Poly::deg0).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Poly)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> Poly {
        self.terms.get(exps).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_z_free(&self) -> bool {
        self.terms.values().all(Poly::is_constant)
    }

    pub fn add(&self, o: &AuxForm) -> AuxForm {
        assert_eq!(self.nvars, o.nvars, "arity mismatch");
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        assert_eq!(self.deg_x, o.deg_x, "degree mismatch");
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> AuxForm {
        self.scale_poly(&Poly::constant(-Rat::one()))
    }

    pub fn sub(&self, o: &AuxForm) -> AuxForm {
        self.add(&o.neg())
    }

    pub fn scale_poly(&self, p: &Poly) -> AuxForm {
        let mut out = AuxForm::zero(self.nvars, self.deg_x);
        if p.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * p);
        }
        out
    }

    pub fn scale(&self, r: &Rat) -> AuxForm {
        self.scale_poly(&Poly::constant(r.clone()))
    }

    pub fn mul(&self, o: &AuxForm) -> AuxForm {
        assert_eq!(self.nvars, o.nvars, "arity mismatch");
        let mut out = AuxForm::zero(self.nvars, self.deg_x + o.deg_x);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> AuxForm {
        let mut acc = AuxForm::monomial(vec![0; self.nvars], Poly::one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Substitutes `z -> z^k` in every coefficient.
    pub fn compose_z_power(&self, k: usize) -> AuxForm {
        let mut out = AuxForm::zero(self.nvars, self.deg_x);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.compose_power(k));
        }
        out
    }

    /// Replaces `X_i` by the form `subs[i]`. All substitutes must share one
    /// arity and one degree, so the result stays homogeneous.
    pub fn substitute(&self, subs: &[AuxForm]) -> AuxForm {
        assert_eq!(subs.len(), self.nvars, "one substitute per variable");
        let target = subs[0].nvars;
        let d = subs[0].deg_x;
        assert!(subs.iter().all(|s| s.nvars == target && s.deg_x == d));
        let mut cache: Vec<BTreeMap<u32, AuxForm>> = vec![BTreeMap::new(); self.nvars];
        let mut out = AuxForm::zero(target, self.deg_x * d);
        for (exps, c) in &self.terms {
            let mut prod = AuxForm::monomial(vec![0; target], c.clone());
            for (i, &k) in exps.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let p = cache[i]
                    .entry(k)
                    .or_insert_with(|| subs[i].pow(k))
                    .clone();
                prod = prod.mul(&p);
            }
            out = out.add(&prod);
        }
        out
    }

    /// Exact value at rational `z` and rational `X`.
    pub fn eval(&self, z: &Rat, xs: &[Rat]) -> Rat {
        assert_eq!(xs.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(xs)
                    .fold(c.eval(z), |acc, (&k, x)| acc * pow_rat(x, k as u64))
            })
            .sum()
    }

    /// Exact value of a z-free form.
    pub fn eval_const(&self, xs: &[Rat]) -> Rat {
        self.eval(&Rat::zero(), xs)
    }

    /// All coefficients (of every z-power) are integers.
    pub fn is_integral(&self) -> bool {
        self.terms
            .values()
            .all(|p| p.coeffs().iter().all(|c| c.is_integer()))
    }

    /// Rescales to integer coefficients with content 1 whose first nonzero
    /// coefficient (in term order) is positive.
    pub fn primitive(&self) -> AuxForm {
        if self.is_zero() {
            return self.clone();
        }
        let all: Vec<&Rat> = self.terms.values().flat_map(|p| p.coeffs()).collect();
        let l = lcm_denominators(all.iter().copied());
        let ints: Vec<BigInt> = all
            .iter()
            .map(|c| (*c * Rat::from_integer(l.clone())).to_integer())
            .collect();
        let mut g = gcd_numerators(ints.iter());
        let first = self
            .terms
            .values()
            .next()
            .and_then(|p| p.coeffs().iter().find(|c| !c.is_zero()))
            .expect("nonzero form");
        if first.is_negative() {
            g = -g;
        }
        self.scale(&Rat::new(l, g))
    }

    /// Max absolute value of the (rational) coefficients.
    pub fn height(&self) -> Rat {
        self.terms
            .values()
            .flat_map(|p| p.coeffs())
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rat::zero)
    }

    pub fn to_doc(&self) -> FormDoc {
        FormDoc {
            nvars: self.nvars,
            deg_x: self.deg_x,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermDoc {
                    exps: e.clone(),
                    poly: c.to_string(),
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: &FormDoc) -> Result<AuxForm, FormError> {
        let terms = doc
            .terms
            .iter()
            .map(|t| Ok((t.exps.clone(), parse_poly(&t.poly)?)))
            .collect::<Result<Vec<_>, FormError>>()?;
        AuxForm::from_terms(doc.nvars, doc.deg_x, terms)
    }
}

/// JSON form document: `{nvars, deg_X, terms: [{exps, poly}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormDoc {
    pub nvars: usize,
    #[serde(rename = "deg_X")]
    pub deg_x: u32,
    pub terms: Vec<TermDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub exps: Vec<u32>,
    pub poly: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::{int, rat};

    fn binary(coeffs: &[(u32, u32, i64)]) -> AuxForm {
        let d = coeffs[0].0 + coeffs[0].1;
        AuxForm::from_rat_terms(2, d, coeffs.iter().map(|&(a, b, c)| (vec![a, b], int(c))))
            .unwrap()
    }

    #[test]
    fn rejects_inhomogeneous_terms() {
        let err = AuxForm::from_rat_terms(2, 2, vec![(vec![1, 0], int(1))]).unwrap_err();
        assert!(matches!(err, FormError::NotHomogeneous { .. }));
    }

    #[test]
    fn multiplication_and_substitution() {
        let f = binary(&[(1, 0, 1), (0, 1, -1)]); // X0 - X1
        let g = binary(&[(1, 0, 1), (0, 1, 1)]); // X0 + X1
        let h = f.mul(&g);
        assert_eq!(h, binary(&[(2, 0, 1), (0, 2, -1)]));
        // X0 -> X0 + X1, X1 -> X1 turns X0 - X1 into X0.
        let s = f.substitute(&[g.clone(), AuxForm::var(2, 1)]);
        assert_eq!(s, AuxForm::var(2, 0));
        assert_eq!(h.eval_const(&[int(3), int(2)]), int(5));
    }

    #[test]
    fn primitive_clears_denominators() {
        let f = AuxForm::from_rat_terms(2, 1, vec![(vec![1, 0], rat(-2, 3)), (vec![0, 1], rat(4, 9))])
            .unwrap();
        let p = f.primitive();
        // First term in exponent order is X1, whose coefficient is positive.
        assert_eq!(p, binary(&[(1, 0, -3), (0, 1, 2)]));
        assert!(p.is_integral());
    }

    #[test]
    fn doc_round_trip() {
        let f = AuxForm::from_terms(
            2,
            2,
            vec![(vec![2, 0], Poly::from_ints(&[1, -1])), (vec![1, 1], Poly::z())],
        )
        .unwrap();
        let doc = f.to_doc();
        let json = serde_json::to_string(&doc).unwrap();
        assert!(json.contains("\"deg_X\":2"));
        let back: FormDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(AuxForm::from_doc(&back).unwrap(), f);
    }
}
