use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::Rat;

use super::LiouvilleError;

/// A strictly increasing sequence of positive integers `u_0 < u_1 < ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExponentSeq {
    /// Finitely many given values.
    Explicit(Vec<BigInt>),
    /// `u_n = b^(c^n)`.
    Tower { b: u32, c: u32 },
    /// `u_n = (n+1)!`, so that `sum 10^{-u_n}` is Liouville's constant.
    Factorial,
}

impl ExponentSeq {
    pub fn explicit(values: &[u64]) -> Result<Self, LiouvilleError> {
        if values.first() == Some(&0) {
            return Err(LiouvilleError::InvalidSequence("values must be positive".into()));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LiouvilleError::InvalidSequence("values must increase strictly".into()));
        }
        Ok(ExponentSeq::Explicit(values.iter().map(|&v| BigInt::from(v)).collect()))
    }

    pub fn tower(b: u32, c: u32) -> Result<Self, LiouvilleError> {
        if b < 2 || c < 2 {
            return Err(LiouvilleError::InvalidSequence("tower needs b >= 2 and c >= 2".into()));
        }
        Ok(ExponentSeq::Tower { b, c })
    }

    /// `u_n`, or `None` past the end of an explicit list or when a tower
    /// exponent `c^n` exceeds 32 bits.
    pub fn value(&self, n: usize) -> Option<BigInt> {
        match self {
            ExponentSeq::Explicit(v) => v.get(n).cloned(),
            ExponentSeq::Tower { b, c } => {
                let e = (*c as u64).checked_pow(u32::try_from(n).ok()?)?;
                let e = u32::try_from(e).ok()?;
                Some(BigInt::from(*b).pow(e))
            }
            ExponentSeq::Factorial => Some((2..=n as u64 + 1).fold(BigInt::one(), |acc, k| acc * k)),
        }
    }

    pub fn try_value(&self, n: usize) -> Result<BigInt, LiouvilleError> {
        self.value(n).ok_or(LiouvilleError::ExponentUnavailable { index: n })
    }

    /// `u_n` as a polynomial degree.
    pub fn degree(&self, n: usize) -> Result<u32, LiouvilleError> {
        self.try_value(n)?
            .to_u32()
            .ok_or(LiouvilleError::ExponentTooLarge { index: n })
    }

    pub fn describe(&self) -> String {
        match self {
            ExponentSeq::Explicit(v) => {
                let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                format!("explicit[{}]", s.join(","))
            }
            ExponentSeq::Tower { b, c } => format!("tower({b},{c})"),
            ExponentSeq::Factorial => "factorial".to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthRow {
    pub n: usize,
    /// `u_{n+1}^r / u_n^p` for `C = p/r`; equals `u_{n+1} / u_n^C` when `C`
    /// is an integer.
    pub ratio: Rat,
    /// `u_{n+1} > u_n^C`.
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthReport {
    pub c: Rat,
    pub rows: Vec<GrowthRow>,
    /// The ratios increase strictly over the checked range.
    pub increasing: bool,
}

/// Compares `u_{n+1}` with `u_n^C` exactly for `n < upto`.
pub fn growth_check(u: &ExponentSeq, c: &Rat, upto: usize) -> Result<GrowthReport, LiouvilleError> {
    if !c.is_positive() {
        return Err(LiouvilleError::BadGrowthExponent(c.to_string()));
    }
    let p = c.numer().to_u32().ok_or_else(|| LiouvilleError::BadGrowthExponent(c.to_string()))?;
    let r = c.denom().to_u32().ok_or_else(|| LiouvilleError::BadGrowthExponent(c.to_string()))?;
    let mut rows = Vec::with_capacity(upto);
    let mut cur = u.try_value(0)?;
    for n in 0..upto {
        let next = u.try_value(n + 1)?;
        let ratio = Rat::new(next.pow(r), cur.pow(p));
        let holds = ratio > Rat::one();
        rows.push(GrowthRow { n, ratio, holds });
        cur = next;
    }
    let increasing = rows.windows(2).all(|w| w[0].ratio < w[1].ratio);
    debug_assert!(rows.iter().all(|row| !row.ratio.is_zero()));
    Ok(GrowthReport {
        c: c.clone(),
        rows,
        increasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::{int, rat};

    #[test]
    fn sequences() {
        let t = ExponentSeq::tower(2, 5).unwrap();
        assert_eq!(t.value(0), Some(BigInt::from(2)));
        assert_eq!(t.value(1), Some(BigInt::from(32)));
        assert_eq!(t.degree(2).unwrap(), 1 << 25);
        assert!(matches!(t.degree(3), Err(LiouvilleError::ExponentTooLarge { index: 3 })));
        let f = ExponentSeq::Factorial;
        let v: Vec<_> = (0..5).map(|n| f.value(n).unwrap()).collect();
        assert_eq!(v, [1, 2, 6, 24, 120].map(BigInt::from));
        assert!(ExponentSeq::explicit(&[1, 1]).is_err());
        assert!(ExponentSeq::explicit(&[0, 1]).is_err());
        assert!(ExponentSeq::tower(2, 1).is_err());
        assert_eq!(ExponentSeq::explicit(&[3]).unwrap().value(1), None);
    }

    #[test]
    fn tower_ratios() {
        let rep = growth_check(&ExponentSeq::tower(2, 5).unwrap(), &int(4), 3).unwrap();
        let want = [int(2), int(32), Rat::from_integer(BigInt::from(2).pow(25))];
        assert_eq!(rep.rows.iter().map(|r| r.ratio.clone()).collect::<Vec<_>>(), want);
        assert!(rep.increasing && rep.rows.iter().all(|r| r.holds));
    }

    #[test]
    fn explicit_and_fractional() {
        let u = ExponentSeq::explicit(&[1, 2, 5, 26]).unwrap();
        let rep = growth_check(&u, &int(2), 3).unwrap();
        assert!(rep.rows.iter().all(|r| r.holds));
        assert_eq!(rep.rows[2].ratio, rat(26, 25));
        // 5^2 = 25 < 2^5 = 32 at C = 5/2.
        let rep = growth_check(&u, &rat(5, 2), 2).unwrap();
        assert_eq!(rep.rows[1].ratio, rat(25, 32));
        assert!(!rep.rows[1].holds);
        assert!(growth_check(&u, &int(2), 4).is_err());
        assert!(growth_check(&u, &int(0), 1).is_err());
    }

    #[test]
    fn factorial_ratios_increase() {
        let rep = growth_check(&ExponentSeq::Factorial, &int(1), 5).unwrap();
        for r in &rep.rows {
            assert_eq!(r.ratio, int(r.n as i64 + 2));
        }
        assert!(rep.increasing);
    }
}
