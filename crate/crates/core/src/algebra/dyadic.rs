//! Dyadic rationals `mant * 2^exp` with directed rounding helpers.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use super::rat::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

impl Round {
    pub fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// Normalized so that the mantissa is odd, or zero with exponent 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn floor_shr(m: &BigInt, s: u64) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    m.div_floor(&(BigInt::one() << s))
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Dyadic::zero();
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        Dyadic {
            mant: mant >> tz,
            exp: exp + tz as i64,
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic::new(BigInt::from(n), 0)
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Dyadic::new(n, 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Dyadic::new(BigInt::one(), e)
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn sign(&self) -> Ordering {
        match self.mant.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// Exponent of the leading bit: `2^m <= |x| < 2^(m+1)`.
    pub fn magnitude(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.mant.bits() as i64 - 1 + self.exp)
    }

    pub fn ldexp(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: self.mant.clone(),
            exp: self.exp + k,
        }
    }

    pub fn to_rat(&self) -> Rat {
        let m = Rat::from_integer(self.mant.clone());
        if self.exp >= 0 {
            m * Rat::from_integer(BigInt::one() << self.exp as u64)
        } else {
            m / Rat::from_integer(BigInt::one() << (-self.exp) as u64)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = self.mant.bits() as i64;
        let shift = (b - 60).max(0);
        let m = (&self.mant >> shift as u64).to_f64().unwrap_or(0.0);
        let e = self.exp + shift;
        if e > 1100 {
            return m.signum() * f64::INFINITY;
        }
        if e < -1200 {
            return 0.0;
        }
        let half = e / 2;
        m * 2f64.powi(half as i32) * 2f64.powi((e - half) as i32)
    }

    /// Exact dyadic value of a finite float.
    pub fn from_f64(x: f64) -> Dyadic {
        assert!(x.is_finite());
        if x == 0.0 {
            return Dyadic::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Dyadic::new(BigInt::from(m) * sign, e)
    }

    fn align(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = a.exp.min(b.exp);
        (
            &a.mant << (a.exp - e) as u64,
            &b.mant << (b.exp - e) as u64,
            e,
        )
    }

    pub fn add(&self, o: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let (a, b, e) = Dyadic::align(self, o);
        Dyadic::new(a + b, e)
    }

    /// `self + o` rounded to `prec` bits. An operand far below the rounding
    /// grid of the other is replaced by a sticky bit of the same sign, so
    /// the cost does not depend on the exponent gap.
    pub fn add_round(&self, o: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        if self.is_zero() || o.is_zero() {
            return self.add(o).round(prec, dir);
        }
        let (big, small) = if self.magnitude() >= o.magnitude() { (self, o) } else { (o, self) };
        let (mb, ms) = (big.magnitude().expect("nonzero"), small.magnitude().expect("nonzero"));
        let floor = mb - prec as i64 - 4;
        if ms + 1 < floor && big.exp > ms + 1 {
            let e = big.exp.min(floor);
            let unit = Dyadic::pow2(e - 1);
            let sticky = if small.is_negative() { unit.neg() } else { unit };
            return big.add(&sticky).round(prec, dir);
        }
        self.add(o).round(prec, dir)
    }

    pub fn sub(&self, o: &Dyadic) -> Dyadic {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn mul(&self, o: &Dyadic) -> Dyadic {
        if self.is_zero() || o.is_zero() {
            return Dyadic::zero();
        }
        Dyadic {
            mant: &self.mant * &o.mant,
            exp: self.exp + o.exp,
        }
    }

    /// Rounds to at most `prec` significant bits in direction `dir`.
    pub fn round(&self, prec: u32, dir: Round) -> Dyadic {
        let b = self.mant.bits();
        if b <= prec as u64 {
            return self.clone();
        }
        let s = b - prec as u64;
        let m = match dir {
            Round::Down => floor_shr(&self.mant, s),
            Round::Up => -floor_shr(&-&self.mant, s),
        };
        Dyadic::new(m, self.exp + s as i64)
    }

    /// Quotient `n / d` of big integers rounded to `prec` bits.
    pub fn div_int_round(n: &BigInt, d: &BigInt, prec: u32, dir: Round) -> Dyadic {
        assert!(!d.is_zero(), "division by zero");
        if n.is_zero() {
            return Dyadic::zero();
        }
        let (n, d) = if d.is_negative() {
            (-n, -d)
        } else {
            (n.clone(), d.clone())
        };
        let e = n.bits() as i64 - d.bits() as i64 - prec as i64 - 2;
        let (num, den) = if e <= 0 {
            (n << (-e) as u64, d)
        } else {
            (n, d << e as u64)
        };
        let q = match dir {
            Round::Down => num.div_floor(&den),
            Round::Up => -(-num).div_floor(&den),
        };
        Dyadic::new(q, e).round(prec, dir)
    }

    pub fn from_rat_round(r: &Rat, prec: u32, dir: Round) -> Dyadic {
        Dyadic::div_int_round(r.numer(), r.denom(), prec, dir)
    }

    pub fn div_round(&self, o: &Dyadic, prec: u32, dir: Round) -> Dyadic {
        Dyadic::div_int_round(&self.mant, &o.mant, prec, dir).ldexp(self.exp - o.exp)
    }

    /// Square root of a nonnegative value rounded in direction `dir`.
    pub fn sqrt_round(&self, prec: u32, dir: Round) -> Dyadic {
        assert!(!self.is_negative(), "sqrt of a negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let mut m = self.mant.clone();
        let mut e = self.exp;
        if e.rem_euclid(2) == 1 {
            m <<= 1u32;
            e -= 1;
        }
        let want = 2 * prec as i64 + 4;
        let have = m.bits() as i64;
        let s = ((want - have).max(0) + 1) / 2;
        m <<= (2 * s) as u64;
        e -= 2 * s;
        let r = m.sqrt();
        let exact = &r * &r == m;
        let r = if !exact && dir == Round::Up { r + 1 } else { r };
        Dyadic::new(r, e / 2).round(prec, dir)
    }

    pub fn min(a: &Dyadic, b: &Dyadic) -> Dyadic {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn max(a: &Dyadic, b: &Dyadic) -> Dyadic {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    /// Scientific decimal string with about `digits` significant digits,
    /// rounded in direction `dir` (so a lower bound prints below the value).
    pub fn to_decimal(&self, digits: u32, dir: Round) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mag2 = self.magnitude().expect("nonzero");
        // floor(log10 |x|) estimate, off by at most one.
        let e10 = ((mag2 as f64) * std::f64::consts::LOG10_2).floor() as i64;
        let shift = e10 - digits as i64;
        let x = self.to_rat();
        let ten = BigInt::from(10);
        let scaled = if shift >= 0 {
            x / Rat::from_integer(ten.pow(shift as u64))
        } else {
            x * Rat::from_integer(ten.pow((-shift) as u64))
        };
        let m = match dir {
            Round::Down => scaled.floor().to_integer(),
            Round::Up => scaled.ceil().to_integer(),
        };
        if m.is_zero() {
            return "0".to_string();
        }
        let neg = m.is_negative();
        let s = m.abs().to_string();
        let exp10 = shift + s.len() as i64 - 1;
        let (head, tail) = s.split_at(1);
        let tail = tail.trim_end_matches('0');
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(head);
        if !tail.is_empty() {
            out.push('.');
            out.push_str(tail);
        }
        out.push_str(&format!("e{exp10}"));
        out
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.sign(), other.sign()) {
            (a, b) if a != b => a.cmp(&b),
            (Ordering::Equal, _) => Ordering::Equal,
            (sign, _) => {
                let (ma, mb) = (self.magnitude(), other.magnitude());
                if ma != mb {
                    let by_size = ma.cmp(&mb);
                    return if sign == Ordering::Less { by_size.reverse() } else { by_size };
                }
                let (a, b, _) = Dyadic::align(self, other);
                a.cmp(&b)
            }
        }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20, Round::Down))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat;

    #[test]
    fn rounded_add_matches_exact_sum() {
        let bigs = [Dyadic::new(BigInt::from(0b1011), -3), Dyadic::from_int(1), Dyadic::new(BigInt::from(-77), 5)];
        for big in &bigs {
            for gap in [10i64, 70, 75, 200, 1000] {
                for small in [Dyadic::pow2(-gap), Dyadic::new(BigInt::from(-3), -gap), Dyadic::new(BigInt::from(5), -gap - 1)] {
                    for dir in [Round::Down, Round::Up] {
                        assert_eq!(big.add_round(&small, 64, dir), big.add(&small).round(64, dir));
                    }
                }
            }
        }
        let tiny = Dyadic::pow2(-(1i64 << 45));
        let one = Dyadic::one();
        assert!(one.add_round(&tiny, 64, Round::Up) > one);
        assert_eq!(one.add_round(&tiny, 64, Round::Down), one);
        assert_eq!(one.add_round(&tiny.neg(), 64, Round::Up), one);
        assert!(tiny < one && tiny.neg() > one.neg() && tiny > Dyadic::zero());
    }

    #[test]
    fn normalization_and_order() {
        let a = Dyadic::new(BigInt::from(12), 0);
        assert_eq!(a, Dyadic::new(BigInt::from(3), 2));
        assert!(Dyadic::from_int(-3) < Dyadic::pow2(-5));
        assert!(Dyadic::pow2(-5) < Dyadic::pow2(-4));
        assert_eq!(Dyadic::pow2(-1).to_rat(), rat(1, 2));
    }

    #[test]
    fn directed_rounding_brackets() {
        let third = rat(1, 3);
        let lo = Dyadic::from_rat_round(&third, 30, Round::Down);
        let hi = Dyadic::from_rat_round(&third, 30, Round::Up);
        assert!(lo.to_rat() < third && third < hi.to_rat());
        assert!(hi.sub(&lo) <= Dyadic::pow2(-30));
        let neg = rat(-1, 3);
        assert!(Dyadic::from_rat_round(&neg, 10, Round::Down).to_rat() < neg);
        assert!(Dyadic::from_rat_round(&neg, 10, Round::Up).to_rat() > neg);
    }

    #[test]
    fn sqrt_brackets() {
        let two = Dyadic::from_int(2);
        let lo = two.sqrt_round(64, Round::Down);
        let hi = two.sqrt_round(64, Round::Up);
        assert!(lo.mul(&lo) < two && hi.mul(&hi) > two);
        assert_eq!(Dyadic::from_int(9).sqrt_round(8, Round::Up), Dyadic::from_int(3));
    }

    #[test]
    fn decimal_strings_bracket_value() {
        let x = Dyadic::from_rat_round(&rat(1, 7), 80, Round::Down);
        assert_eq!(x.to_decimal(6, Round::Down), "1.428571e-1");
        assert_eq!(x.to_decimal(6, Round::Up), "1.428572e-1");
        assert_eq!(Dyadic::from_int(-1000).to_decimal(4, Round::Down), "-1e3");
    }

    #[test]
    fn float_round_trip() {
        for x in [0.5, -3.25, 1e-300, 12345.678] {
            assert_eq!(Dyadic::from_f64(x).to_f64(), x);
        }
    }
}
