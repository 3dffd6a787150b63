//! Dyadic intervals with outward rounding.
//!
//! Every operation rounds the lower end down and the upper end up to the
//! working precision (significant bits) of the result, so the true value of
//! any expression evaluated on enclosures of its inputs stays inside.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::dyadic::{Dyadic, Round};
use super::poly::Poly;
use super::rat::Rat;

pub const MIN_PRECISION: u32 = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl Enclosure {
    /// Panics when `lo > hi`.
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "inverted enclosure");
        let prec = prec.max(MIN_PRECISION);
        Enclosure {
            lo: lo.round(prec, Round::Down),
            hi: hi.round(prec, Round::Up),
            prec,
        }
    }

    pub fn point(x: Dyadic, prec: u32) -> Self {
        Enclosure::new(x.clone(), x, prec)
    }

    pub fn from_int(n: i64, prec: u32) -> Self {
        Enclosure::point(Dyadic::from_int(n), prec)
    }

    pub fn from_bigint(n: &BigInt, prec: u32) -> Self {
        Enclosure::point(Dyadic::from_bigint(n.clone()), prec)
    }

    pub fn from_rat(r: &Rat, prec: u32) -> Self {
        let prec = prec.max(MIN_PRECISION);
        Enclosure {
            lo: Dyadic::from_rat_round(r, prec, Round::Down),
            hi: Dyadic::from_rat_round(r, prec, Round::Up),
            prec,
        }
    }

    /// `[lo, hi]` from rational bounds, rounded outward.
    pub fn from_rat_bounds(lo: &Rat, hi: &Rat, prec: u32) -> Self {
        assert!(lo <= hi, "inverted bounds");
        let prec = prec.max(MIN_PRECISION);
        Enclosure {
            lo: Dyadic::from_rat_round(lo, prec, Round::Down),
            hi: Dyadic::from_rat_round(hi, prec, Round::Up),
            prec,
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Enclosure {
        Enclosure::new(self.lo.clone(), self.hi.clone(), prec)
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn mid(&self) -> Dyadic {
        self.lo.add(&self.hi).ldexp(-1)
    }

    pub fn contains_rat(&self, r: &Rat) -> bool {
        &self.lo.to_rat() <= r && r <= &self.hi.to_rat()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Certified sign: `Some` only when the whole interval lies on one side of
    /// zero (or is exactly zero).
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn intersect(&self, o: &Enclosure) -> Option<Enclosure> {
        let lo = Dyadic::max(&self.lo, &o.lo);
        let hi = Dyadic::min(&self.hi, &o.hi);
        (lo <= hi).then(|| Enclosure {
            lo,
            hi,
            prec: self.prec.max(o.prec),
        })
    }

    pub fn hull(&self, o: &Enclosure) -> Enclosure {
        Enclosure {
            lo: Dyadic::min(&self.lo, &o.lo),
            hi: Dyadic::max(&self.hi, &o.hi),
            prec: self.prec.max(o.prec),
        }
    }

    /// Widens symmetrically by a nonnegative rational radius.
    pub fn widen(&self, radius: &Rat) -> Enclosure {
        let p = self.prec;
        let r_up = Dyadic::from_rat_round(radius, p, Round::Up);
        Enclosure::new(self.lo.sub(&r_up), self.hi.add(&r_up), p)
    }

    fn p2(&self, o: &Enclosure) -> u32 {
        self.prec.max(o.prec)
    }

    pub fn add(&self, o: &Enclosure) -> Enclosure {
        let p = self.p2(o);
        Enclosure {
            lo: self.lo.add_round(&o.lo, p, Round::Down),
            hi: self.hi.add_round(&o.hi, p, Round::Up),
            prec: p,
        }
    }

    pub fn sub(&self, o: &Enclosure) -> Enclosure {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            prec: self.prec,
        }
    }

    pub fn mul(&self, o: &Enclosure) -> Enclosure {
        let p = self.p2(o);
        let cands = [
            self.lo.mul(&o.lo),
            self.lo.mul(&o.hi),
            self.hi.mul(&o.lo),
            self.hi.mul(&o.hi),
        ];
        let lo = cands.iter().min().expect("four").clone();
        let hi = cands.iter().max().expect("four").clone();
        Enclosure {
            lo: lo.round(p, Round::Down),
            hi: hi.round(p, Round::Up),
            prec: p,
        }
    }

    pub fn mul_rat(&self, r: &Rat) -> Enclosure {
        self.mul(&Enclosure::from_rat(r, self.prec))
    }

    /// `None` when the divisor contains zero.
    pub fn div(&self, o: &Enclosure) -> Option<Enclosure> {
        if o.contains_zero() {
            return None;
        }
        let p = self.p2(o);
        let mut lo: Option<Dyadic> = None;
        let mut hi: Option<Dyadic> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&o.lo, &o.hi] {
                let d = a.div_round(b, p, Round::Down);
                let u = a.div_round(b, p, Round::Up);
                lo = Some(lo.map_or(d.clone(), |x| Dyadic::min(&x, &d)));
                hi = Some(hi.map_or(u.clone(), |x| Dyadic::max(&x, &u)));
            }
        }
        Some(Enclosure {
            lo: lo.expect("set"),
            hi: hi.expect("set"),
            prec: p,
        })
    }

    pub fn recip(&self) -> Option<Enclosure> {
        Enclosure::from_int(1, self.prec).div(self)
    }

    pub fn abs(&self) -> Enclosure {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            Enclosure {
                lo: Dyadic::zero(),
                hi: Dyadic::max(&self.lo.abs(), &self.hi),
                prec: self.prec,
            }
        }
    }

    /// Upper bound of `|x|`.
    pub fn mag(&self) -> Dyadic {
        Dyadic::max(&self.lo.abs(), &self.hi.abs())
    }

    /// Lower bound of `|x|`.
    pub fn mig(&self) -> Dyadic {
        if self.contains_zero() {
            Dyadic::zero()
        } else {
            Dyadic::min(&self.lo.abs(), &self.hi.abs())
        }
    }

    pub fn sqr(&self) -> Enclosure {
        let p = self.prec;
        let (a, b) = (self.mig(), self.mag());
        Enclosure {
            lo: a.mul(&a).round(p, Round::Down),
            hi: b.mul(&b).round(p, Round::Up),
            prec: p,
        }
    }

    pub fn pow(&self, e: u64) -> Enclosure {
        if e == 0 {
            return Enclosure::from_int(1, self.prec);
        }
        let mut acc: Option<Enclosure> = None;
        let mut base = self.clone();
        let mut e = e;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.sqr();
        }
        acc.expect("e > 0")
    }

    pub fn sqrt(&self) -> Enclosure {
        assert!(!self.hi.is_negative(), "sqrt of a negative enclosure");
        let p = self.prec;
        let lo = if self.lo.is_positive() {
            self.lo.sqrt_round(p, Round::Down)
        } else {
            Dyadic::zero()
        };
        Enclosure {
            lo,
            hi: self.hi.sqrt_round(p, Round::Up),
            prec: p,
        }
    }

    /// `exp(x)`, evaluated endpoint-wise by halving, a Taylor polynomial with
    /// Lagrange remainder, and repeated squaring.
    pub fn exp(&self) -> Enclosure {
        let p = self.prec;
        let lo = exp_point(&self.lo, p).lo;
        let hi = exp_point(&self.hi, p).hi;
        Enclosure { lo, hi, prec: p }
    }

    /// Natural logarithm; `None` unless the interval is strictly positive.
    pub fn ln(&self) -> Option<Enclosure> {
        if !self.lo.is_positive() {
            return None;
        }
        let p = self.prec;
        let lo = ln_point(&self.lo, p).lo;
        let hi = ln_point(&self.hi, p).hi;
        Some(Enclosure { lo, hi, prec: p })
    }

    /// Interval Horner evaluation of a rational polynomial.
    pub fn eval_poly(p: &Poly, x: &Enclosure) -> Enclosure {
        let prec = x.prec;
        let mut acc = Enclosure::from_int(0, prec);
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(x).add(&Enclosure::from_rat(c, prec));
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            self.lo.to_decimal(12, Round::Down),
            self.hi.to_decimal(12, Round::Up)
        )
    }
}

fn exp_point(x: &Dyadic, prec: u32) -> Enclosure {
    if x.is_zero() {
        return Enclosure::from_int(1, prec);
    }
    // Halve until |r| <= 1/2.
    let s = x.magnitude().map_or(0, |m| (m + 2).max(0));
    let w = prec + s as u32 + 24;
    let r = Enclosure::point(x.ldexp(-s), w);
    let mut sum = Enclosure::from_int(1, w);
    let mut term = Enclosure::from_int(1, w);
    let mut k: i64 = 1;
    let eps = Dyadic::pow2(-(w as i64) - 4);
    loop {
        term = term.mul(&r).div(&Enclosure::from_int(k, w)).expect("k > 0");
        sum = sum.add(&term);
        k += 1;
        if term.mag() < eps {
            break;
        }
    }
    // Remainder after the last term: |r|^k / k! * e^{|r|} <= 2 * |term| * |r|.
    let rem = term.mag().mul(&r.mag()).ldexp(1);
    let mut out = Enclosure::new(sum.lo.sub(&rem), sum.hi.add(&rem), w);
    for _ in 0..s {
        out = out.sqr();
    }
    out.with_prec(prec)
}

/// `2 * atanh(t)` for a point `0 <= t <= 1/3`.
fn atanh2(t: &Enclosure) -> Enclosure {
    let w = t.prec;
    if t.sign() == Some(Ordering::Equal) {
        return Enclosure::from_int(0, w);
    }
    let t2 = t.sqr();
    let mut pow = t.clone();
    let mut sum = t.clone();
    let eps = Dyadic::pow2(-(w as i64) - 4);
    let mut j: i64 = 1;
    loop {
        pow = pow.mul(&t2);
        let term = pow.div(&Enclosure::from_int(2 * j + 1, w)).expect("odd");
        sum = sum.add(&term);
        j += 1;
        if term.mag() < eps {
            break;
        }
    }
    // Tail after the last term is below |term| * t^2 / (1 - t^2) <= |term| / 8.
    let rem = pow.mul(&t2).mag().ldexp(-2);
    let sum = Enclosure::new(sum.lo.sub(&rem), sum.hi.add(&rem), w);
    sum.add(&sum)
}

pub fn ln2(prec: u32) -> Enclosure {
    let w = prec + 8;
    atanh2(&Enclosure::from_int(1, w).div(&Enclosure::from_int(3, w)).expect("3")).with_prec(prec)
}

fn ln_point(x: &Dyadic, prec: u32) -> Enclosure {
    let k = x.magnitude().expect("positive");
    let kbits = 64 - k.unsigned_abs().leading_zeros();
    let w = prec + kbits + 16;
    let y = Enclosure::point(x.ldexp(-k), w);
    let one = Enclosure::from_int(1, w);
    let t = y.sub(&one).div(&y.add(&one)).expect("y >= 1");
    let ly = atanh2(&t);
    let lk = ln2(w).mul(&Enclosure::from_int(k, w));
    ly.add(&lk).with_prec(prec)
}

/// Rectangle in the complex plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CEnclosure {
    pub re: Enclosure,
    pub im: Enclosure,
}

impl CEnclosure {
    pub fn new(re: Enclosure, im: Enclosure) -> Self {
        CEnclosure { re, im }
    }

    pub fn real(re: Enclosure) -> Self {
        let p = re.prec();
        CEnclosure {
            re,
            im: Enclosure::from_int(0, p),
        }
    }

    pub fn add(&self, o: &CEnclosure) -> CEnclosure {
        CEnclosure::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &CEnclosure) -> CEnclosure {
        CEnclosure::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn mul(&self, o: &CEnclosure) -> CEnclosure {
        CEnclosure::new(
            self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        )
    }

    pub fn scale(&self, r: &Enclosure) -> CEnclosure {
        CEnclosure::new(self.re.mul(r), self.im.mul(r))
    }

    /// Enclosure of the modulus.
    pub fn abs(&self) -> Enclosure {
        self.re.sqr().add(&self.im.sqr()).sqrt()
    }

    pub fn eval_poly(p: &Poly, x: &CEnclosure) -> CEnclosure {
        let prec = x.re.prec();
        let mut acc = CEnclosure::real(Enclosure::from_int(0, prec));
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(x).add(&CEnclosure::real(Enclosure::from_rat(c, prec)));
        }
        acc
    }

    /// Square box of half-width `r` around a dyadic centre.
    pub fn disk_box(re: &Dyadic, im: &Dyadic, r: &Dyadic, prec: u32) -> Self {
        CEnclosure::new(
            Enclosure::new(re.sub(r), re.add(r), prec),
            Enclosure::new(im.sub(r), im.add(r), prec),
        )
    }

    pub fn is_zero_free(&self) -> bool {
        !self.re.contains_zero() || !self.im.contains_zero()
    }
}

impl Zero for Enclosure {
    fn zero() -> Self {
        Enclosure::from_int(0, 64)
    }
    fn is_zero(&self) -> bool {
        self.sign() == Some(Ordering::Equal)
    }
}

impl std::ops::Add for Enclosure {
    type Output = Enclosure;
    fn add(self, rhs: Enclosure) -> Enclosure {
        Enclosure::add(&self, &rhs)
    }
}
