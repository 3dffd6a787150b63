//! Root bounds and certified root enclosures.
//!
//! Roots of binary forms are isolated by Aberth iteration in dyadic
//! arithmetic and then certified with the Weierstrass inclusion disks
//! `D(z_i, n |p(z_i)| / |c_n prod_{j!=i} (z_i - z_j)|)`: their union holds all
//! roots, and pairwise disjoint disks hold exactly one root each.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::dyadic::{Dyadic, Round};
use super::enclosure::{CEnclosure, Enclosure};
use super::form::AuxForm;
use super::poly::Poly;
use super::rat::Rat;
use super::AlgebraError;

/// Positive `r` with `|beta| >= r` for every nonzero complex root `beta` of
/// `p`; `1` when `p` has no nonzero root.
///
/// Cauchy's bound applied to the reversal of `p / z^val`.
pub fn root_lower_bound(p: &Poly) -> Result<Rat, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let g = p.strip_z();
    if g.deg0() == 0 {
        return Ok(Rat::one());
    }
    let g0 = g.coeff(0);
    let m = g.coeffs()[1..]
        .iter()
        .map(|c| (c / &g0).abs())
        .max()
        .expect("degree >= 1");
    Ok((Rat::one() + m).recip())
}

/// Certified enclosure of one projective root `(x0 : x1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjRoot {
    pub x0: CEnclosure,
    pub x1: CEnclosure,
    /// Radius of the inclusion disk around the centre of the affine
    /// coordinate (zero for exact roots).
    pub radius: Dyadic,
}

impl ProjRoot {
    fn infinity(prec: u32) -> Self {
        ProjRoot {
            x0: CEnclosure::real(Enclosure::from_int(0, prec)),
            x1: CEnclosure::real(Enclosure::from_int(1, prec)),
            radius: Dyadic::zero(),
        }
    }

    fn affine(x: CEnclosure, radius: Dyadic) -> Self {
        let prec = x.re.prec();
        ProjRoot {
            x0: CEnclosure::real(Enclosure::from_int(1, prec)),
            x1: x,
            radius,
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.x0.re.sign() == Some(Ordering::Equal)
    }
}

/// Every projective root of a nonzero z-free binary form, each in its own
/// enclosure, with affine disks of radius at most `2^-width_bits`.
pub fn binary_form_roots(f: &AuxForm, width_bits: u32) -> Result<Vec<ProjRoot>, AlgebraError> {
    if f.nvars() != 2 {
        return Err(AlgebraError::NotBinary(f.nvars()));
    }
    if !f.is_z_free() {
        return Err(AlgebraError::NotConstantInZ);
    }
    if f.is_zero() {
        return Err(AlgebraError::ZeroForm);
    }
    let d = f.deg_x() as usize;
    // F(1, x) = sum c_j x^j with c_j the coefficient of X0^(d-j) X1^j.
    let affine = Poly::new(
        (0..=d)
            .map(|j| f.coeff(&[(d - j) as u32, j as u32]).coeff(0))
            .collect(),
    );
    let prec = width_bits + 32;
    let mut out: Vec<ProjRoot> = isolate_roots(&affine, width_bits)?
        .into_iter()
        .map(|(x, r)| ProjRoot::affine(x, r))
        .collect();
    if affine.deg0() < d {
        out.push(ProjRoot::infinity(prec));
    }
    Ok(out)
}

/// Certified complex roots of a nonzero rational polynomial (distinct roots
/// only), as boxes around disks of radius at most `2^-width_bits`.
pub fn isolate_roots(p: &Poly, width_bits: u32) -> Result<Vec<(CEnclosure, Dyadic)>, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let sf = p.squarefree();
    let n = sf.deg0();
    let prec = width_bits + 32;
    match n {
        0 => Ok(Vec::new()),
        1 => {
            let r = -sf.coeff(0) / sf.coeff(1);
            let x = CEnclosure::real(Enclosure::from_rat(&r, prec));
            let rad = x.re.width();
            Ok(vec![(x, rad)])
        }
        _ => aberth_certified(&sf, width_bits),
    }
}

#[derive(Clone, Debug)]
struct Cx {
    re: Dyadic,
    im: Dyadic,
}

impl Cx {
    fn add(&self, o: &Cx, p: u32) -> Cx {
        Cx {
            re: self.re.add(&o.re).round(p, Round::Down),
            im: self.im.add(&o.im).round(p, Round::Down),
        }
    }
    fn sub(&self, o: &Cx, p: u32) -> Cx {
        Cx {
            re: self.re.sub(&o.re).round(p, Round::Down),
            im: self.im.sub(&o.im).round(p, Round::Down),
        }
    }
    fn mul(&self, o: &Cx, p: u32) -> Cx {
        Cx {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)).round(p, Round::Down),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)).round(p, Round::Down),
        }
    }
    fn norm2(&self) -> Dyadic {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }
    fn div(&self, o: &Cx, p: u32) -> Option<Cx> {
        let den = o.norm2();
        if den.is_zero() {
            return None;
        }
        let num_re = self.re.mul(&o.re).add(&self.im.mul(&o.im));
        let num_im = self.im.mul(&o.re).sub(&self.re.mul(&o.im));
        Some(Cx {
            re: num_re.div_round(&den, p, Round::Down),
            im: num_im.div_round(&den, p, Round::Down),
        })
    }
    fn one() -> Cx {
        Cx {
            re: Dyadic::one(),
            im: Dyadic::zero(),
        }
    }
    fn to_enclosure(&self, prec: u32) -> CEnclosure {
        CEnclosure::new(
            Enclosure::point(self.re.clone(), prec),
            Enclosure::point(self.im.clone(), prec),
        )
    }
}

fn horner_with_derivative(c: &[BigInt], z: &Cx, p: u32) -> (Cx, Cx) {
    let zero = Cx {
        re: Dyadic::zero(),
        im: Dyadic::zero(),
    };
    let mut val = zero.clone();
    let mut der = zero;
    for a in c.iter().rev() {
        der = der.mul(z, p).add(&val, p);
        val = val.mul(z, p).add(
            &Cx {
                re: Dyadic::from_bigint(a.clone()),
                im: Dyadic::zero(),
            },
            p,
        );
    }
    (val, der)
}

fn aberth_certified(p: &Poly, width_bits: u32) -> Result<Vec<(CEnclosure, Dyadic)>, AlgebraError> {
    let (ints, _) = p.integer_primitive().expect("nonzero");
    let n = ints.len() - 1;
    let lead = ints[n].abs();

    // Starting points on a circle whose radius is the Cauchy bound.
    let cauchy = 1.0
        + ints[..n]
            .iter()
            .map(|c| Dyadic::div_int_round(c, &lead, 53, Round::Up).to_f64().abs())
            .fold(0.0, f64::max);
    let mut z: Vec<Cx> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * (k as f64 + 0.3) / n as f64 + 0.4;
            Cx {
                re: Dyadic::from_f64(0.5 * cauchy * t.cos()),
                im: Dyadic::from_f64(0.5 * cauchy * t.sin()),
            }
        })
        .collect();

    let target = Dyadic::pow2(-(width_bits as i64));
    let mut prec: u32 = 64;
    while prec <= 1 << 14 {
        for _ in 0..(200 + 4 * n) {
            let moved = aberth_step(&ints, &mut z, prec);
            if !moved {
                break;
            }
        }
        if let Some(disks) = certify(&ints, &z, prec + 32) {
            if disks.iter().all(|(_, r)| r <= &target) {
                return Ok(disks);
            }
        }
        prec *= 2;
    }
    Err(AlgebraError::RootIsolationFailed)
}

/// One simultaneous Aberth update; returns whether any point moved
/// noticeably at the working precision.
fn aberth_step(c: &[BigInt], z: &mut [Cx], p: u32) -> bool {
    let n = z.len();
    let mut moved = false;
    let tol_exp = -(p as i64) + 8;
    for i in 0..n {
        let (v, d) = horner_with_derivative(c, &z[i], p);
        if v.re.is_zero() && v.im.is_zero() {
            continue;
        }
        let Some(w) = v.div(&d, p) else {
            // Derivative vanished at the iterate: nudge it.
            z[i].re = z[i].re.add(&Dyadic::pow2(tol_exp));
            moved = true;
            continue;
        };
        let mut s = Cx {
            re: Dyadic::zero(),
            im: Dyadic::zero(),
        };
        for j in 0..n {
            if j != i {
                if let Some(t) = Cx::one().div(&z[i].sub(&z[j], p), p) {
                    s = s.add(&t, p);
                }
            }
        }
        let den = Cx::one().sub(&w.mul(&s, p), p);
        let step = w.div(&den, p).unwrap_or(w);
        let scale = z[i].norm2().magnitude().map_or(0, |m| m / 2).max(0);
        if step.norm2().magnitude().is_some_and(|m| m / 2 > tol_exp + scale) {
            moved = true;
        }
        z[i] = z[i].sub(&step, p);
    }
    moved
}

fn certify(c: &[BigInt], z: &[Cx], prec: u32) -> Option<Vec<(CEnclosure, Dyadic)>> {
    let n = z.len();
    let poly = Poly::new(c.iter().cloned().map(Rat::from_integer).collect());
    let lead = Enclosure::from_bigint(&c[n].abs(), prec);
    let nn = Enclosure::from_int(n as i64, prec);
    let pts: Vec<CEnclosure> = z.iter().map(|x| x.to_enclosure(prec)).collect();

    let mut radii = Vec::with_capacity(n);
    let mut dists = vec![vec![Dyadic::zero(); n]; n];
    for i in 0..n {
        let val = CEnclosure::eval_poly(&poly, &pts[i]).abs();
        let mut prod = lead.clone();
        for j in 0..n {
            if j == i {
                continue;
            }
            let dij = pts[i].sub(&pts[j]).abs();
            if !dij.lo().is_positive() {
                return None;
            }
            dists[i][j] = dij.lo().clone();
            prod = prod.mul(&dij);
        }
        let r = nn.mul(&val).div(&prod)?;
        radii.push(r.hi().clone());
    }
    for i in 0..n {
        for j in i + 1..n {
            if dists[i][j] <= radii[i].add(&radii[j]) {
                return None;
            }
        }
    }
    let mut out: Vec<(CEnclosure, Dyadic)> = z
        .iter()
        .zip(radii)
        .map(|(x, r)| (CEnclosure::disk_box(&x.re, &x.im, &r, prec), r))
        .collect();
    out.sort_by(|a, b| {
        (a.0.re.mid(), a.0.im.mid())
            .partial_cmp(&(b.0.re.mid(), b.0.im.mid()))
            .expect("total order")
    });
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::{int, rat};
    use num_traits::Zero;

    #[test]
    fn lower_bound_examples() {
        let r = root_lower_bound(&Poly::new(vec![rat(-1, 2), int(1)])).unwrap();
        assert!(r > Rat::zero() && r <= rat(1, 2));
        assert_eq!(root_lower_bound(&Poly::from_ints(&[0, 0, 0, 1])).unwrap(), int(1));
        let r = root_lower_bound(&Poly::from_ints(&[1, -3, 2])).unwrap();
        assert!(r > Rat::zero() && r <= rat(1, 2));
        assert!(root_lower_bound(&Poly::zero()).is_err());
    }

    #[test]
    fn lower_bound_sound_on_rational_root_corpus() {
        let roots = [rat(1, 2), rat(-3, 7), rat(5, 1), rat(1, 100), rat(-2, 3)];
        for k in 1..=roots.len() {
            let mut p = Poly::from_ints(&[0, 0, 1]); // z^2 factor is stripped
            for r in &roots[..k] {
                p = &p * &Poly::new(vec![-r.clone(), int(1)]);
            }
            let bound = root_lower_bound(&p).unwrap();
            let min = roots[..k].iter().map(|r| r.abs()).min().unwrap();
            assert!(bound <= min, "bound {bound} exceeds min root {min}");
        }
    }

    fn form(coeffs: &[(u32, u32, i64)]) -> AuxForm {
        let d = coeffs[0].0 + coeffs[0].1;
        AuxForm::from_rat_terms(2, d, coeffs.iter().map(|&(a, b, c)| (vec![a, b], int(c))))
            .unwrap()
    }

    #[test]
    fn linear_and_monomial_forms() {
        let roots = binary_form_roots(&form(&[(0, 1, 1), (1, 0, -1)]), 40).unwrap();
        assert_eq!(roots.len(), 1);
        assert!(roots[0].x1.re.contains_rat(&int(1)));

        let roots = binary_form_roots(&form(&[(1, 1, 1)]), 40).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots[0].x1.re.contains_rat(&int(0)));
        assert!(roots[1].is_infinite());
    }

    #[test]
    fn sqrt_two_to_requested_width() {
        let roots = binary_form_roots(&form(&[(0, 2, 1), (2, 0, -2)]), 40).unwrap();
        assert_eq!(roots.len(), 2);
        for (root, sign) in roots.iter().zip([-1, 1]) {
            assert!(root.radius <= Dyadic::pow2(-40));
            // Residual oracle: the box straddles the root of x^2 - 2.
            let re = &root.x1.re;
            let (lo, hi) = (re.lo().to_rat() * int(sign), re.hi().to_rat() * int(sign));
            let (lo, hi) = if lo < hi { (lo, hi) } else { (hi, lo) };
            assert!(&lo * &lo < int(2) && &hi * &hi > int(2));
            assert!(root.x1.im.contains_rat(&int(0)));
        }
    }

    #[test]
    fn complex_and_repeated_roots() {
        // (x^2 + 1)^2 (x - 3): distinct roots i, -i, 3.
        let p = &(&Poly::from_ints(&[1, 0, 1]) * &Poly::from_ints(&[1, 0, 1]))
            * &Poly::from_ints(&[-3, 1]);
        let roots = isolate_roots(&p, 50).unwrap();
        assert_eq!(roots.len(), 3);
        let has = |re: i64, im: i64| {
            roots
                .iter()
                .any(|(b, _)| b.re.contains_rat(&int(re)) && b.im.contains_rat(&int(im)))
        };
        assert!(has(0, 1) && has(0, -1) && has(3, 0));
    }

    #[test]
    fn rejects_bad_forms() {
        let f = AuxForm::from_terms(2, 1, vec![(vec![1, 0], Poly::z())]).unwrap();
        assert_eq!(binary_form_roots(&f, 20), Err(AlgebraError::NotConstantInZ));
        assert_eq!(
            binary_form_roots(&AuxForm::zero(2, 3), 20),
            Err(AlgebraError::ZeroForm)
        );
        assert_eq!(
            binary_form_roots(&AuxForm::var(3, 0), 20),
            Err(AlgebraError::NotBinary(3))
        );
    }
}
