use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::json;

use crate::algebra::rat::{floor, rat_to_string};
use crate::algebra::{Dyadic, Rat, Round};
use crate::evaluator::ValueEnclosure;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfStop {
    /// The interval was a single rational and its expansion ended.
    Complete,
    /// The floor is not constant on the remaining interval.
    Ambiguous,
    MaxTerms,
}

impl CfStop {
    pub fn name(self) -> &'static str {
        match self {
            CfStop::Complete => "complete",
            CfStop::Ambiguous => "ambiguous",
            CfStop::MaxTerms => "max_terms",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfExpansion {
    pub quotients: Vec<BigInt>,
    pub stop: CfStop,
    /// Width of the remainder interval when the expansion stopped.
    pub width_at_stop: Rat,
}

impl CfExpansion {
    pub fn to_json(&self) -> serde_json::Value {
        let w = if self.width_at_stop.is_zero() {
            "0".to_string()
        } else {
            Dyadic::from_rat_round(&self.width_at_stop, 32, Round::Up).to_decimal(8, Round::Up)
        };
        json!({
            "quotients": self.quotients.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
            "count": self.quotients.len(),
            "stop": self.stop.name(),
            "width_at_stop": w,
        })
    }
}

/// Partial quotients shared by every real number in `[lo, hi]`.
pub fn continued_fraction(lo: &Rat, hi: &Rat, max_terms: usize) -> CfExpansion {
    assert!(lo <= hi, "empty interval {} > {}", rat_to_string(lo), rat_to_string(hi));
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    let mut quotients = Vec::new();
    let stop = loop {
        if quotients.len() >= max_terms {
            break CfStop::MaxTerms;
        }
        let a = floor(&lo);
        if floor(&hi) != a {
            break CfStop::Ambiguous;
        }
        let a_r = Rat::from_integer(a.clone());
        let (flo, fhi) = (&lo - &a_r, &hi - &a_r);
        if flo.is_zero() {
            if fhi.is_zero() {
                quotients.push(a);
                lo = Rat::zero();
                hi = Rat::zero();
                break CfStop::Complete;
            }
            break CfStop::Ambiguous;
        }
        quotients.push(a);
        lo = Rat::one() / fhi;
        hi = Rat::one() / flo;
    };
    CfExpansion {
        quotients,
        stop,
        width_at_stop: hi - lo,
    }
}

/// Expansion of an enclosed value, using the exact partial sum and tail
/// bound when they are available.
pub fn continued_fraction_of(xi: &ValueEnclosure, max_terms: usize) -> CfExpansion {
    let (lo, hi) = match &xi.partial_sum {
        Some(s) => (s - &xi.tail_bound, s + &xi.tail_bound),
        None => (xi.value.lo().to_rat(), xi.value.hi().to_rat()),
    };
    continued_fraction(&lo, &hi, max_terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat;
    use crate::algebra::Enclosure;

    fn qs(e: &CfExpansion) -> Vec<i64> {
        e.quotients.iter().map(|q| q.try_into().unwrap()).collect()
    }

    #[test]
    fn ten_sevenths() {
        let e = continued_fraction(&rat(10, 7), &rat(10, 7), 10);
        assert_eq!(qs(&e), vec![1, 2, 3]);
        assert_eq!(e.stop, CfStop::Complete);
        let e = continued_fraction(&rat(10, 7), &rat(10, 7), 2);
        assert_eq!(e.stop, CfStop::MaxTerms);
        let w = continued_fraction_of(&ValueEnclosure::exact(&rat(10, 7), 64), 10);
        assert_eq!(qs(&w), vec![1, 2, 3]);
    }

    #[test]
    fn tight_interval_stops_at_ambiguity() {
        let eps = rat(1, 1 << 40);
        let e = continued_fraction(&(rat(10, 7) - &eps), &(rat(10, 7) + &eps), 10);
        assert_eq!(qs(&e), vec![1, 2]);
        assert_eq!(e.stop, CfStop::Ambiguous);
    }

    #[test]
    fn golden_ratio() {
        let five = Enclosure::from_int(5, 256).sqrt();
        let phi = five.sub(&Enclosure::from_int(1, 256)).mul_rat(&rat(1, 2));
        let e = continued_fraction(&phi.lo().to_rat(), &phi.hi().to_rat(), 1000);
        assert!(e.quotients.len() > 150);
        assert_eq!(e.quotients[0], BigInt::zero());
        assert!(e.quotients[1..].iter().all(|q| *q == BigInt::one()));
        assert_eq!(e.stop, CfStop::Ambiguous);
    }

    #[test]
    fn negative_values() {
        let e = continued_fraction(&rat(-7, 3), &rat(-7, 3), 5);
        assert_eq!(qs(&e), vec![-3, 1, 2]);
    }
}
