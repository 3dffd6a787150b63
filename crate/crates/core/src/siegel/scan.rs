//! Empirical multiplicity estimates: how large can `val_z R(z, 1, f)` be for
//! nonzero forms of bounded degrees?

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::rat::rat_to_string;
use crate::algebra::{kernel_basis, Rat};
use crate::mahler::{expand_series, MahlerEquation, TruncatedSeries, Valuation};

use super::aux::{exponent_vectors, form_from_vector, matching_matrix, MonomialTable};
use super::SiegelError;

/// Largest window the scan is willing to expand to before declaring a
/// composition identically zero.
pub const MAX_WINDOW: usize = 1 << 13;

/// Best trial of one `(M, N)` cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityRow {
    pub m: u32,
    pub n: u32,
    pub trial: u32,
    pub seed: u64,
    /// `None` when every trial composed to zero on the largest window.
    pub achieved_val: Option<usize>,
    /// `achieved_val / (M N^t)`.
    pub ratio: Option<Rat>,
}

impl MultiplicityRow {
    pub fn flag(&self) -> &'static str {
        if self.achieved_val.is_some() {
            "ok"
        } else {
            "all_zero"
        }
    }

    pub fn csv_record(&self) -> Vec<String> {
        let (num, den) = match &self.ratio {
            Some(r) => (r.numer().to_string(), r.denom().to_string()),
            None => (String::new(), String::new()),
        };
        vec![
            self.m.to_string(),
            self.n.to_string(),
            self.trial.to_string(),
            self.seed.to_string(),
            self.achieved_val.map(|v| v.to_string()).unwrap_or_default(),
            num,
            den,
            self.flag().to_string(),
        ]
    }
}

pub const CSV_HEADER: [&str; 8] = [
    "M", "N", "trial", "seed", "achieved_val", "ratio_num", "ratio_den", "flag",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanResult {
    pub rows: Vec<MultiplicityRow>,
    /// Maximum observed ratio, when at least one cell produced a value.
    pub c_fit: Option<Rat>,
}

impl ScanResult {
    pub fn c_fit_string(&self) -> String {
        self.c_fit.as_ref().map(rat_to_string).unwrap_or_default()
    }
}

/// Seed of one trial, a SplitMix64 mix of the run seed and the cell key.
pub fn trial_seed(seed: u64, m: u32, n: u32, trial: u32) -> u64 {
    let mut x = seed
        ^ (m as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (n as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F)
        ^ (trial as u64).wrapping_mul(0x1656_67B1_9E37_79F9);
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

struct Cell<'a> {
    eqs: &'a [MahlerEquation],
    m: u32,
    n: u32,
    exps: Vec<Vec<u32>>,
    window: usize,
    series: Vec<TruncatedSeries>,
    monomials: Vec<TruncatedSeries>,
}

impl<'a> Cell<'a> {
    fn new(eqs: &'a [MahlerEquation], m: u32, n: u32) -> Result<Self, SiegelError> {
        let exps = exponent_vectors(eqs.len() + 1, n);
        let unknowns = exps.len() * (m as usize + 1);
        let window = (2 * unknowns + 16).next_power_of_two();
        let mut c = Cell {
            eqs,
            m,
            n,
            exps,
            window: 0,
            series: Vec::new(),
            monomials: Vec::new(),
        };
        c.expand_to(window)?;
        Ok(c)
    }

    fn expand_to(&mut self, window: usize) -> Result<(), SiegelError> {
        let mut ys = vec![TruncatedSeries::from_poly(&crate::algebra::Poly::one(), window)];
        for eq in self.eqs {
            ys.push(expand_series(eq, window)?);
        }
        let table = MonomialTable::new(&ys, self.n, window);
        self.monomials = self.exps.iter().map(|e| table.monomial(e)).collect();
        self.series = ys;
        self.window = window;
        Ok(())
    }

    fn unknowns(&self) -> usize {
        self.exps.len() * (self.m as usize + 1)
    }

    /// A random nonzero integer vector in the kernel of a random-length
    /// prefix of the matching conditions.
    fn random_vector(&self, rng: &mut ChaCha8Rng) -> Vec<BigInt> {
        let u = self.unknowns();
        let v = rng.gen_range(0..u);
        let basis = kernel_basis(&matching_matrix(&self.monomials, self.m, v));
        loop {
            let mut acc = vec![BigInt::zero(); u];
            for b in &basis {
                let c = BigInt::from(rng.gen_range(-3i64..=3));
                for (a, x) in acc.iter_mut().zip(b) {
                    *a += &c * x;
                }
            }
            if acc.iter().any(|x| !x.is_zero()) {
                return acc;
            }
        }
    }

    fn measure(&mut self, vec: &[BigInt]) -> Result<Valuation, SiegelError> {
        let form = form_from_vector(&self.exps, self.m, self.n, vec);
        loop {
            let mut acc = TruncatedSeries::new(vec![Rat::zero(); self.window]);
            for (exps, c) in form.terms() {
                let mi = self.exps.iter().position(|e| e == exps).expect("exponent of the cell");
                acc = acc.add(&self.monomials[mi].mul_poly(c));
            }
            let val = acc.valuation();
            if !val.is_infinite() || self.window >= MAX_WINDOW {
                return Ok(val);
            }
            self.expand_to(self.window * 2)?;
        }
    }
}

fn scan_cell(
    eqs: &[MahlerEquation],
    m: u32,
    n: u32,
    trials: u32,
    seed: u64,
) -> Result<MultiplicityRow, SiegelError> {
    let t = eqs.len() as u32;
    let mut cell = Cell::new(eqs, m, n)?;
    let mut best: Option<(usize, u32, u64)> = None;
    for trial in 0..trials {
        let ts = trial_seed(seed, m, n, trial);
        let mut rng = ChaCha8Rng::seed_from_u64(ts);
        let vec = cell.random_vector(&mut rng);
        if let Valuation::Finite(v) = cell.measure(&vec)? {
            if best.is_none_or(|(b, _, _)| v > b) {
                best = Some((v, trial, ts));
            }
        }
    }
    let scale = BigInt::from(m) * BigInt::from(n).pow(t);
    Ok(match best {
        Some((v, trial, ts)) => MultiplicityRow {
            m,
            n,
            trial,
            seed: ts,
            achieved_val: Some(v),
            ratio: Some(Rat::new(BigInt::from(v), scale)),
        },
        None => MultiplicityRow {
            m,
            n,
            trial: 0,
            seed: trial_seed(seed, m, n, 0),
            achieved_val: None,
            ratio: None,
        },
    })
}

/// Scans the grid `1 <= M <= mmax`, `1 <= N <= nmax` for the functions
/// defined by `eqs` (so `t = eqs.len()`). Rows come back sorted by `(M, N)`
/// whatever the thread pool.
pub fn multiplicity_scan(
    eqs: &[MahlerEquation],
    mmax: u32,
    nmax: u32,
    trials: u32,
    seed: u64,
) -> Result<ScanResult, SiegelError> {
    if let Some(first) = eqs.first() {
        if let Some(bad) = eqs.iter().find(|e| e.q() != first.q()) {
            return Err(SiegelError::MixedBase(first.q(), bad.q()));
        }
    }
    let cells: Vec<(u32, u32)> = (1..=mmax)
        .flat_map(|m| (1..=nmax).map(move |n| (m, n)))
        .collect();
    let mut rows = cells
        .par_iter()
        .map(|&(m, n)| scan_cell(eqs, m, n, trials, seed))
        .collect::<Result<Vec<_>, _>>()?;
    rows.sort_by_key(|r| (r.m, r.n));
    let c_fit = rows.iter().filter_map(|r| r.ratio.clone()).max();
    Ok(ScanResult { rows, c_fit })
}
