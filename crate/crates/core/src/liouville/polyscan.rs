use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::algebra::rat::int;
use crate::algebra::{Dyadic, Enclosure, Rat, Round};
use crate::evaluator::ValueEnclosure;

use super::LiouvilleError;

/// A real number that can be enclosed to a requested number of bits.
pub trait XiSource: Sync {
    /// The exact value, when it is rational and known.
    fn exact(&self) -> Option<Rat> {
        None
    }
    /// An enclosure aiming at width about `2^-bits`; sources that cannot
    /// refine return their best enclosure.
    fn enclosure(&self, bits: u32) -> Enclosure;
    fn certified(&self) -> bool {
        true
    }
}

impl XiSource for Rat {
    fn exact(&self) -> Option<Rat> {
        Some(self.clone())
    }
    fn enclosure(&self, bits: u32) -> Enclosure {
        Enclosure::from_rat(self, bits)
    }
}

impl XiSource for ValueEnclosure {
    fn exact(&self) -> Option<Rat> {
        match &self.partial_sum {
            Some(s) if self.tail_bound.is_zero() => Some(s.clone()),
            _ => None,
        }
    }
    fn enclosure(&self, _bits: u32) -> Enclosure {
        self.value.clone()
    }
    fn certified(&self) -> bool {
        self.certified
    }
}

/// A source backed by a refinement closure.
pub struct FnSource<F: Fn(u32) -> Enclosure + Sync>(pub F);

impl<F: Fn(u32) -> Enclosure + Sync> XiSource for FnSource<F> {
    fn enclosure(&self, bits: u32) -> Enclosure {
        (self.0)(bits)
    }
}

/// Shape `H^{-c1 d^tau} e^{-c1 d^{2 tau + 2}}` of a lower bound for
/// `|P(xi)|`, with caller-chosen constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundProfile {
    pub c1: Rat,
    pub tau: u32,
}

impl BoundProfile {
    pub fn new(c1: Rat, tau: u32) -> Result<Self, LiouvilleError> {
        if !c1.is_positive() || tau == 0 {
            return Err(LiouvilleError::BadBoundProfile);
        }
        Ok(BoundProfile { c1, tau })
    }
}

/// `-c1 d^tau ln H - c1 d^{2 tau + 2}`.
pub fn bound_profile_log(bp: &BoundProfile, d: u32, h: u64, prec: u32) -> Enclosure {
    assert!(d >= 1 && h >= 1);
    let dt = Rat::from_integer(BigInt::from(d).pow(bp.tau));
    let d2 = Rat::from_integer(BigInt::from(d).pow(2 * bp.tau + 2));
    let ln_h = Enclosure::from_bigint(&BigInt::from(h), prec)
        .ln()
        .expect("H >= 1");
    ln_h.mul_rat(&(-&bp.c1 * dt))
        .sub(&Enclosure::from_rat(&(&bp.c1 * d2), prec))
}

pub fn bound_profile_eval(bp: &BoundProfile, d: u32, h: u64, prec: u32) -> Enclosure {
    bound_profile_log(bp, d, h, prec).exp()
}

/// `2, 4, 8, ...` up to `hmax`, ending with `hmax` itself.
pub fn default_ladder(hmax: u64) -> Vec<u64> {
    let mut v: Vec<u64> = std::iter::successors(Some(2u64), |&h| h.checked_mul(2))
        .take_while(|&h| h < hmax)
        .collect();
    v.push(hmax.max(1));
    v
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanOptions {
    pub initial_bits: u32,
    pub max_bits: u32,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            initial_bits: 64,
            max_bits: 4096,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRow {
    pub d: u32,
    pub h: u64,
    /// Certified lower bound of `min |P(xi)|` over the scanned polynomials
    /// that do not vanish at `xi`.
    pub min_abs_lo: Dyadic,
    /// Coefficients `c_0, ..., c_d` of the minimizer.
    pub argmin: Vec<i64>,
    pub predicted: Option<Enclosure>,
    pub precision_bits: u32,
}

pub const SCAN_CSV_HEADER: [&str; 7] = [
    "d",
    "H",
    "min_abs_lo",
    "argmin_coeffs",
    "predicted_lo",
    "predicted_hi",
    "precision_bits",
];

impl ScanRow {
    pub fn csv_record(&self) -> Vec<String> {
        let coeffs: Vec<String> = self.argmin.iter().map(|c| c.to_string()).collect();
        let (plo, phi) = match &self.predicted {
            Some(e) => (e.lo().to_decimal(12, Round::Down), e.hi().to_decimal(12, Round::Up)),
            None => (String::new(), String::new()),
        };
        vec![
            self.d.to_string(),
            self.h.to_string(),
            self.min_abs_lo.to_decimal(12, Round::Down),
            coeffs.join(" "),
            plo,
            phi,
            self.precision_bits.to_string(),
        ]
    }
}

/// A primitive polynomial whose value at `xi` could not be separated from
/// zero: `exact` when it vanishes at an exactly known `xi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateRelation {
    pub coeffs: Vec<i64>,
    pub exact: bool,
    pub precision_bits: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyScan {
    pub rows: Vec<ScanRow>,
    pub relations: Vec<CandidateRelation>,
    /// The enclosures of `xi` were certified.
    pub certified: bool,
}

#[derive(Clone, Debug)]
struct Best {
    lo: Dyadic,
    index: u64,
    bits: u32,
}

impl Best {
    fn better(a: Option<Best>, b: Option<Best>) -> Option<Best> {
        match (a, b) {
            (None, x) | (x, None) => x,
            (Some(a), Some(b)) => {
                let ord = a.lo.cmp(&b.lo).then(a.index.cmp(&b.index));
                let bits = a.bits.max(b.bits);
                let mut w = if ord == Ordering::Greater { b } else { a };
                w.bits = bits;
                Some(w)
            }
        }
    }
}

struct Enumeration {
    d: u32,
    h: i64,
    base: u64,
    total: u64,
}

impl Enumeration {
    fn new(d: u32, h: u64) -> Self {
        let base = 2 * h + 1;
        Enumeration {
            d,
            h: h as i64,
            base,
            total: base.pow(d + 1),
        }
    }

    fn decode(&self, mut idx: u64) -> Vec<i64> {
        (0..=self.d)
            .map(|_| {
                let c = (idx % self.base) as i64 - self.h;
                idx /= self.base;
                c
            })
            .collect()
    }
}

/// Leading nonzero coefficient positive; `P` and `-P` take the same
/// absolute value.
fn normalized(c: &[i64]) -> bool {
    c.iter().rev().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

fn height(c: &[i64]) -> u64 {
    c.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
}

fn primitive(c: &[i64]) -> bool {
    c.iter().fold(0i64, |g, &x| g.gcd(&x)) == 1
}

enum Outcome {
    Lower(Dyadic, u32),
    Vanishes,
    Unresolved(u32),
}

struct Evaluator<'a> {
    xi: &'a dyn XiSource,
    exact_powers: Option<Vec<Rat>>,
    encl: Vec<(u32, Vec<Enclosure>)>,
    opts: ScanOptions,
}

impl<'a> Evaluator<'a> {
    fn new(xi: &'a dyn XiSource, d: u32, opts: ScanOptions) -> Self {
        let exact_powers = xi.exact().map(|x| {
            std::iter::successors(Some(int(1)), |p| Some(p * &x))
                .take(d as usize + 1)
                .collect()
        });
        let mut encl = Vec::new();
        if exact_powers.is_none() {
            let mut bits = opts.initial_bits;
            loop {
                let x = xi.enclosure(bits);
                let pows = std::iter::successors(Some(Enclosure::from_int(1, bits)), |p| Some(p.mul(&x)))
                    .take(d as usize + 1)
                    .collect();
                encl.push((bits, pows));
                if bits >= opts.max_bits {
                    break;
                }
                bits = (bits * 2).min(opts.max_bits);
            }
        }
        Evaluator {
            xi,
            exact_powers,
            encl,
            opts,
        }
    }

    fn eval(&self, c: &[i64]) -> Outcome {
        if let Some(pows) = &self.exact_powers {
            let v: Rat = c.iter().zip(pows).map(|(&k, p)| p * int(k)).sum();
            if v.is_zero() {
                return Outcome::Vanishes;
            }
            let bits = self.opts.initial_bits;
            return Outcome::Lower(Dyadic::from_rat_round(&v.abs(), bits, Round::Down), bits);
        }
        let mut last = self.opts.initial_bits;
        for (bits, pows) in &self.encl {
            last = *bits;
            let mut acc = Enclosure::from_int(0, *bits);
            for (&k, p) in c.iter().zip(pows) {
                if k != 0 {
                    acc = acc.add(&p.mul_rat(&int(k)));
                }
            }
            if !acc.contains_zero() {
                return Outcome::Lower(acc.mig(), *bits);
            }
        }
        Outcome::Unresolved(last)
    }
}

/// Exhaustive scan of the integer polynomials of degree at most `d` and
/// height at most `H` for each `H` of `ladder`, recording the smallest
/// certified `|P(xi)|`.
pub fn poly_min_scan(
    xi: &dyn XiSource,
    d: u32,
    ladder: &[u64],
    bp: Option<&BoundProfile>,
    opts: &ScanOptions,
) -> Result<PolyScan, LiouvilleError> {
    if d == 0 || ladder.is_empty() || ladder.contains(&0) {
        return Err(LiouvilleError::BadScan);
    }
    let mut ladder = ladder.to_vec();
    ladder.sort_unstable();
    ladder.dedup();
    let hmax = *ladder.last().expect("nonempty");
    let en = Enumeration::new(d, hmax);
    let ev = Evaluator::new(xi, d, opts.clone());

    const CHUNK: u64 = 4096;
    let chunks: Vec<u64> = (0..en.total.div_ceil(CHUNK)).collect();
    let parts: Vec<(Vec<Option<Best>>, Vec<CandidateRelation>)> = chunks
        .par_iter()
        .map(|&ch| {
            let mut best: Vec<Option<Best>> = vec![None; hmax as usize + 1];
            let mut rel = Vec::new();
            for idx in ch * CHUNK..((ch + 1) * CHUNK).min(en.total) {
                let c = en.decode(idx);
                if !normalized(&c) {
                    continue;
                }
                let h = height(&c) as usize;
                match ev.eval(&c) {
                    Outcome::Lower(lo, bits) => {
                        let cand = Some(Best { lo, index: idx, bits });
                        best[h] = Best::better(best[h].take(), cand);
                    }
                    Outcome::Vanishes if primitive(&c) => rel.push(CandidateRelation {
                        coeffs: c,
                        exact: true,
                        precision_bits: opts.initial_bits,
                    }),
                    Outcome::Unresolved(bits) if primitive(&c) => rel.push(CandidateRelation {
                        coeffs: c,
                        exact: false,
                        precision_bits: bits,
                    }),
                    _ => {}
                }
            }
            (best, rel)
        })
        .collect();

    let mut per_height: Vec<Option<Best>> = vec![None; hmax as usize + 1];
    let mut relations = Vec::new();
    for (best, rel) in parts {
        for (slot, b) in per_height.iter_mut().zip(best) {
            *slot = Best::better(slot.take(), b);
        }
        relations.extend(rel);
    }
    relations.sort_by_key(|r| (height(&r.coeffs), r.coeffs.clone()));

    let prec = opts.initial_bits;
    let mut rows = Vec::new();
    let mut running: Option<Best> = None;
    let mut h_done = 0usize;
    for &h in &ladder {
        while h_done < h as usize {
            h_done += 1;
            running = Best::better(running.take(), per_height[h_done].clone());
        }
        let Some(b) = &running else { continue };
        rows.push(ScanRow {
            d,
            h,
            min_abs_lo: b.lo.clone(),
            argmin: en.decode(b.index),
            predicted: bp.map(|bp| bound_profile_eval(bp, d, h, prec)),
            precision_bits: b.bits,
        });
    }
    Ok(PolyScan { rows, relations, certified: ev.xi.certified() })
}
