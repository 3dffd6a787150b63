//! Matrices over rational functions and exact rational linear algebra.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::Poly;
use super::rat::{gcd_numerators, lcm_denominators, Rat};
use super::ratfun::RatFun;

/// Rectangular grid of rational functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatRF {
    rows: usize,
    cols: usize,
    entries: Vec<RatFun>,
}

impl MatRF {
    pub fn new(rows: usize, cols: usize, entries: Vec<RatFun>) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        assert_eq!(entries.len(), rows * cols, "entry count");
        MatRF {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_rows(rows: Vec<Vec<RatFun>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        MatRF::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatRF::new(rows, cols, vec![RatFun::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = MatRF::zeros(n, n);
        for i in 0..n {
            m.set(i, i, RatFun::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFun {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RatFun) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = &RatFun> {
        self.entries.iter()
    }

    pub fn mul(&self, rhs: &MatRF) -> MatRF {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = MatRF::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = RatFun::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = rhs.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn compose_power(&self, k: usize) -> MatRF {
        MatRF::new(
            self.rows,
            self.cols,
            self.entries.iter().map(|e| e.compose_power(k)).collect(),
        )
    }

    /// Block-diagonal sum.
    pub fn direct_sum(blocks: &[&MatRF]) -> MatRF {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = MatRF::zeros(r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Determinant by Gaussian elimination over the rational-function field.
    pub fn det(&self) -> RatFun {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a: Vec<Vec<RatFun>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut det = RatFun::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return RatFun::zero();
            };
            if p != col {
                a.swap(p, col);
                det = -&det;
            }
            let pivot = a[col][col].clone();
            det = &det * &pivot;
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = &a[r][col] / &pivot;
                for c in col..n {
                    let t = &f * &a[col][c];
                    a[r][c] = &a[r][c] - &t;
                }
            }
        }
        det
    }

    /// Monic lcm of all entry denominators.
    pub fn denominator_lcm(&self) -> Poly {
        self.entries
            .iter()
            .fold(Poly::one(), |acc, e| acc.lcm(e.den()))
    }

    /// Exact evaluation at a rational point; `None` if some entry has a pole.
    pub fn eval(&self, x: &Rat) -> Option<RatMatrix> {
        let vals: Option<Vec<Rat>> = self.entries.iter().map(|e| e.eval(x)).collect();
        Some(RatMatrix::new(self.rows, self.cols, vals?))
    }
}

impl fmt::Display for MatRF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Dense matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rat>) -> Self {
        assert_eq!(data.len(), rows * cols);
        RatMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Exact inverse by Gauss-Jordan; `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a: Vec<Vec<Rat>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut inv: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let p = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(p, col);
            inv.swap(p, col);
            let piv = a[col][col].recip();
            for c in 0..n {
                a[col][c] *= &piv;
                inv[col][c] *= &piv;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for c in 0..n {
                    let t = &f * &a[col][c];
                    a[r][c] -= t;
                    let t = &f * &inv[col][c];
                    inv[r][c] -= t;
                }
            }
        }
        Some(RatMatrix::from_rows(inv))
    }
}

/// Basis of the right kernel of `m`, each vector scaled to coprime integers.
///
/// Rows are cleared to integers and reduced fraction-free (cross
/// multiplication followed by content stripping) to a reduced echelon form.
/// The first nonzero entry of each returned vector is positive.
pub fn kernel_basis(m: &RatMatrix) -> Vec<Vec<BigInt>> {
    let cols = m.cols;
    let mut rows: Vec<Vec<BigInt>> = (0..m.rows)
        .filter_map(|i| integer_row(m.row(i)))
        .collect();

    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        let pv = pivot_row[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for c in 0..cols {
                row[c] = &row[c] * &pv - &f * &pivot_row[c];
            }
            strip_content(row);
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);

    let pivot_lcm = rows
        .iter()
        .zip(&pivots)
        .fold(BigInt::one(), |acc, (row, &c)| acc.lcm(&row[c]));

    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigInt::zero(); cols];
        v[free] = pivot_lcm.clone();
        for (row, &pc) in rows.iter().zip(&pivots) {
            v[pc] = -(&row[free] * &pivot_lcm) / &row[pc];
        }
        strip_content(&mut v);
        if v.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
            v.iter_mut().for_each(|x| *x = -&*x);
        }
        basis.push(v);
    }
    basis
}

fn integer_row(row: &[Rat]) -> Option<Vec<BigInt>> {
    if row.iter().all(Zero::is_zero) {
        return None;
    }
    let l = lcm_denominators(row);
    let mut v: Vec<BigInt> = row
        .iter()
        .map(|c| (c * Rat::from_integer(l.clone())).to_integer())
        .collect();
    strip_content(&mut v);
    Some(v)
}

fn strip_content(v: &mut [BigInt]) {
    let g = gcd_numerators(v.iter());
    if !g.is_zero() && !g.is_one() {
        v.iter_mut().for_each(|x| *x = &*x / &g);
    }
}
