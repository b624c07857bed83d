//! Dense linear algebra over small prime fields and subspace enumeration.

use crate::error::{Error, Result};

/// Primes accepted wherever a field is chosen.
pub const PRIMES: [u32; 6] = [2, 3, 5, 7, 11, 13];

pub fn check_prime(p: u32) -> Result<()> {
    if PRIMES.contains(&p) {
        Ok(())
    } else {
        Err(Error::UnsupportedField(p))
    }
}

fn inv(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    let mut r = 1u32;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Row-major matrix with entries reduced modulo the prime in use.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: &[Vec<u32>]) -> Mat {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend_from_slice(r);
        }
        Mat { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: u32) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn reduce(&mut self, p: u32) {
        for x in &mut self.data {
            *x %= p;
        }
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat, p: u32) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * other.cols + c;
                    out.data[idx] = (out.data[idx] + a * other.get(k, c)) % p;
                }
            }
        }
        out
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols, "shape mismatch in vstack");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Columns `start..end` as a new matrix.
    pub fn col_block(&self, start: usize, end: usize) -> Mat {
        let mut m = Mat::zeros(self.rows, end - start);
        for r in 0..self.rows {
            for c in start..end {
                m.set(r, c - start, self.get(r, c));
            }
        }
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, p: u32) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| m.get(r, col) != 0) else { continue };
            if piv != row {
                for c in 0..m.cols {
                    m.data.swap(piv * m.cols + c, row * m.cols + c);
                }
            }
            let s = inv(m.get(row, col), p);
            for c in col..m.cols {
                let v = m.get(row, c) * s % p;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let f = m.get(r, col);
                if f == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = (m.get(r, c) + (p - f) * m.get(row, c)) % p;
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, p: u32) -> usize {
        self.rref(p).1.len()
    }

    /// Basis (as rows) of `{x : self * x = 0}`.
    pub fn nullspace(&self, p: u32) -> Mat {
        let (r, pivots) = self.rref(p);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Mat::zeros(free.len(), self.cols);
        for (b, &f) in free.iter().enumerate() {
            basis.set(b, f, 1);
            for (pr, &pc) in pivots.iter().enumerate() {
                let v = r.get(pr, f);
                basis.set(b, pc, (p - v) % p);
            }
        }
        basis
    }

    /// Basis (as rows, in reduced echelon form) of the row space.
    pub fn row_space(&self, p: u32) -> Mat {
        let (r, pivots) = self.rref(p);
        Mat { rows: pivots.len(), cols: self.cols, data: r.data[..pivots.len() * self.cols].to_vec() }
    }

    /// Solves `x * self = b` for a row vector `x`, if possible.
    pub fn solve_left(&self, b: &[u32], p: u32) -> Option<Vec<u32>> {
        // x * A = b  <=>  A^T x^T = b^T
        let at = self.transpose();
        let mut aug = Mat::zeros(at.rows, at.cols + 1);
        for r in 0..at.rows {
            for c in 0..at.cols {
                aug.set(r, c, at.get(r, c));
            }
            aug.set(r, at.cols, b[r] % p);
        }
        let (red, pivots) = aug.rref(p);
        if pivots.last() == Some(&at.cols) {
            return None;
        }
        let mut x = vec![0; at.cols];
        for (pr, &pc) in pivots.iter().enumerate() {
            x[pc] = red.get(pr, at.cols);
        }
        Some(x)
    }
}

/// Number of `k`-dimensional subspaces of `F_p^n`.
pub fn gaussian_count(n: usize, k: usize, p: u32) -> u128 {
    if k > n {
        return 0;
    }
    let p = p as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for j in 0..k {
        num *= p.pow((n - j) as u32) - 1;
        den *= p.pow((j + 1) as u32) - 1;
    }
    num / den
}

/// Calls `f` on every `k`-dimensional subspace of `F_p^n`, each given once by
/// its reduced echelon basis.
pub fn for_each_subspace<F>(n: usize, k: usize, p: u32, mut f: F) -> Result<()>
where
    F: FnMut(&Mat) -> Result<()>,
{
    if k > n {
        return Ok(());
    }
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // free positions: (row, col) with col > pivot[row] and col not a pivot
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| {
                let piv = &pivots;
                (piv[r] + 1..n).filter(move |c| !piv.contains(c)).map(move |c| (r, c))
            })
            .collect();
        let mut m = Mat::zeros(k, n);
        for (r, &c) in pivots.iter().enumerate() {
            m.set(r, c, 1);
        }
        let mut digits = vec![0u32; free.len()];
        loop {
            for (d, &(r, c)) in digits.iter().zip(&free) {
                m.set(r, c, *d);
            }
            f(&m)?;
            let mut pos = 0;
            while pos < digits.len() {
                digits[pos] += 1;
                if digits[pos] < p {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
            if pos == digits.len() {
                break;
            }
        }
        // next pivot combination
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if pivots[i] < n - k + i {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Calls `f` on every subspace `W` with `S <= W <= U` and `dim W = w`.
///
/// `s` and `u` are spanning sets given as rows in ambient coordinates; `s`
/// must lie in the span of `u`. Each `W` is passed as a basis of rows in
/// ambient coordinates, starting with a basis of `S`.
pub fn for_each_between<F>(s: &Mat, u: &Mat, w: usize, p: u32, mut f: F) -> Result<()>
where
    F: FnMut(&Mat) -> Result<()>,
{
    let sb = s.row_space(p);
    let (ds, cols) = (sb.rows(), u.cols());
    let mut basis = sb.clone();
    let mut complement: Vec<Vec<u32>> = Vec::new();
    for r in 0..u.rows() {
        let cand = basis.vstack(&Mat::from_rows(cols, &[u.row(r).to_vec()]));
        if cand.rank(p) > basis.rows() {
            basis = cand;
            complement.push(u.row(r).to_vec());
        }
    }
    let c = complement.len();
    if w < ds || w > ds + c {
        return Ok(());
    }
    let comp = Mat::from_rows(cols, &complement);
    for_each_subspace(c, w - ds, p, |r| {
        let extra = r.mul(&comp, p);
        f(&sb.vstack(&extra))
    })
}
