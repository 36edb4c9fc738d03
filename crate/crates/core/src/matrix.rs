//! Dense exact matrices over Z or F_p, with Smith normal form.
//!
//! Over the integers the reduction uses arbitrary-precision arithmetic;
//! intermediate entries can blow up even at desk scale, so no fixed-width
//! path exists. Over F_p the same interface is backed by Gaussian
//! elimination with pivots normalized to 1, so D is diag(1,..,1,0,..,0).

use crate::ring::Ring;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix {
    pub ring: Ring,
    pub rows: usize,
    pub cols: usize,
    entries: Vec<BigInt>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} ({:?})", self.rows, self.cols, self.ring)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.at(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Result of a Smith normal form computation: `u * a * v = d` with `u`, `v`
/// invertible over the ring and `d` diagonal with divisibility chain.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: Matrix,
    pub d: Matrix,
    pub v: Matrix,
}

impl Matrix {
    pub fn zero(ring: Ring, rows: usize, cols: usize) -> Self {
        Matrix { ring, rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(ring: Ring, n: usize) -> Self {
        let mut m = Matrix::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(ring: Ring, rows: Vec<Vec<BigInt>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        let entries = rows.into_iter().flatten().map(|x| ring.normalize(&x)).collect();
        Matrix { ring, rows: nrows, cols: ncols, entries }
    }

    pub fn from_fn(ring: Ring, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut m = Matrix::zero(ring, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    pub fn from_i64_rows(ring: Ring, rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            ring,
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        )
    }

    pub fn scalar(ring: Ring, n: usize, x: &BigInt) -> Self {
        let mut m = Matrix::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: BigInt) {
        self.entries[r * self.cols + c] = self.ring.normalize(&x);
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn columns(&self) -> impl Iterator<Item = Vec<BigInt>> + '_ {
        (0..self.cols).map(|c| self.column(c))
    }

    pub fn from_columns(ring: Ring, rows: usize, cols: &[Vec<BigInt>]) -> Self {
        let mut m = Matrix::zero(ring, rows, cols.len());
        for (c, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, x) in col.iter().enumerate() {
                m.set(r, c, x.clone());
            }
        }
        m
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.ring, self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        assert_eq!(self.ring, other.ring, "ring mismatch in mul");
        let mut out = Matrix::zero(self.ring, self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += self.at(r, k) * other.at(k, c);
                }
                out.set(r, c, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|r| {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += self.at(r, k) * &v[k];
                }
                self.ring.normalize(&acc)
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.ring, self.rows, self.cols, |r, c| self.at(r, c) + other.at(r, c))
    }

    pub fn neg(&self) -> Matrix {
        Matrix::from_fn(self.ring, self.rows, self.cols, |r, c| -self.at(r, c))
    }

    pub fn scale(&self, x: &BigInt) -> Matrix {
        Matrix::from_fn(self.ring, self.rows, self.cols, |r, c| self.at(r, c) * x)
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.ring, other.ring);
        Matrix::from_fn(self.ring, self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols { self.at(r, c).clone() } else { other.at(r, c - self.cols).clone() }
        })
    }

    /// Vertical concatenation [self; other].
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        assert_eq!(self.ring, other.ring);
        Matrix::from_fn(self.ring, self.rows + other.rows, self.cols, |r, c| {
            if r < self.rows { self.at(r, c).clone() } else { other.at(r - self.rows, c).clone() }
        })
    }

    /// Block diagonal [self 0; 0 other].
    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.ring, other.ring);
        Matrix::from_fn(self.ring, self.rows + other.rows, self.cols + other.cols, |r, c| {
            if r < self.rows && c < self.cols {
                self.at(r, c).clone()
            } else if r >= self.rows && c >= self.cols {
                other.at(r - self.rows, c - self.cols).clone()
            } else {
                BigInt::zero()
            }
        })
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        Matrix::from_fn(self.ring, rows.len(), cols.len(), |r, c| {
            self.at(rows.start + r, cols.start + c).clone()
        })
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// row_i += q * row_j
    fn row_op(&mut self, i: usize, j: usize, q: &BigInt) {
        for c in 0..self.cols {
            let x = self.at(i, c) + q * self.at(j, c);
            self.set(i, c, x);
        }
    }

    /// col_i += q * col_j
    fn col_op(&mut self, i: usize, j: usize, q: &BigInt) {
        for r in 0..self.rows {
            let x = self.at(r, i) + q * self.at(r, j);
            self.set(r, i, x);
        }
    }

    fn scale_row(&mut self, i: usize, x: &BigInt) {
        for c in 0..self.cols {
            let v = self.at(i, c) * x;
            self.set(i, c, v);
        }
    }

    /// Smith normal form `u * self * v = d`. Over F_p this is Gaussian
    /// elimination producing D = diag(1,...,1,0,...,0); over Z the diagonal
    /// entries are nonnegative and satisfy d_1 | d_2 | ... .
    pub fn smith_normal_form(&self) -> Snf {
        let mut d = self.clone();
        let mut u = Matrix::identity(self.ring, self.rows);
        let mut v = Matrix::identity(self.ring, self.cols);
        let n = self.rows.min(self.cols);

        match self.ring {
            Ring::Fp(_) => {
                let mut t = 0;
                for _ in 0..n {
                    // find any nonzero pivot in the remaining block
                    let mut pivot = None;
                    'search: for r in t..d.rows {
                        for c in t..d.cols {
                            if !d.at(r, c).is_zero() {
                                pivot = Some((r, c));
                                break 'search;
                            }
                        }
                    }
                    let Some((pr, pc)) = pivot else { break };
                    d.swap_rows(t, pr);
                    u.swap_rows(t, pr);
                    d.swap_cols(t, pc);
                    v.swap_cols(t, pc);
                    let inv = self.ring.inverse(d.at(t, t)).expect("nonzero pivot");
                    d.scale_row(t, &inv);
                    u.scale_row(t, &inv);
                    for r in 0..d.rows {
                        if r != t && !d.at(r, t).is_zero() {
                            let q = -d.at(r, t).clone();
                            d.row_op(r, t, &q);
                            u.row_op(r, t, &q);
                        }
                    }
                    for c in 0..d.cols {
                        if c != t && !d.at(t, c).is_zero() {
                            let q = -d.at(t, c).clone();
                            d.col_op(c, t, &q);
                            v.col_op(c, t, &q);
                        }
                    }
                    t += 1;
                }
            }
            Ring::Int => {
                let mut t = 0;
                while t < n {
                    // minimal nonzero |entry| in the remaining block
                    let mut pivot: Option<(usize, usize)> = None;
                    for r in t..d.rows {
                        for c in t..d.cols {
                            if !d.at(r, c).is_zero()
                                && pivot.is_none_or(|(pr, pc)| d.at(r, c).abs() < d.at(pr, pc).abs())
                            {
                                pivot = Some((r, c));
                            }
                        }
                    }
                    let Some((pr, pc)) = pivot else { break };
                    d.swap_rows(t, pr);
                    u.swap_rows(t, pr);
                    d.swap_cols(t, pc);
                    v.swap_cols(t, pc);

                    let mut dirty = false;
                    for r in t + 1..d.rows {
                        if !d.at(r, t).is_zero() {
                            let q = -(d.at(r, t) / d.at(t, t));
                            d.row_op(r, t, &q);
                            u.row_op(r, t, &q);
                            if !d.at(r, t).is_zero() {
                                dirty = true;
                            }
                        }
                    }
                    for c in t + 1..d.cols {
                        if !d.at(t, c).is_zero() {
                            let q = -(d.at(t, c) / d.at(t, t));
                            d.col_op(c, t, &q);
                            v.col_op(c, t, &q);
                            if !d.at(t, c).is_zero() {
                                dirty = true;
                            }
                        }
                    }
                    if dirty {
                        continue; // smaller remainders appeared; re-pivot
                    }
                    // pivot divides its whole row and column; check the rest
                    // of the block for divisibility, else fold a bad row in
                    let mut fixed = true;
                    'div: for r in t + 1..d.rows {
                        for c in t + 1..d.cols {
                            if !(d.at(r, c) % d.at(t, t)).is_zero() {
                                d.row_op(t, r, &BigInt::one());
                                u.row_op(t, r, &BigInt::one());
                                fixed = false;
                                break 'div;
                            }
                        }
                    }
                    if !fixed {
                        continue;
                    }
                    if d.at(t, t).is_negative() {
                        let m1 = BigInt::from(-1);
                        d.scale_row(t, &m1);
                        u.scale_row(t, &m1);
                    }
                    t += 1;
                }
            }
        }
        Snf { u, d, v }
    }

    /// Diagonal of the SNF, padded with zeros to min(rows, cols).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let snf = self.smith_normal_form();
        (0..self.rows.min(self.cols)).map(|i| snf.d.at(i, i).clone()).collect()
    }

    /// A basis for the kernel lattice {x : self * x = 0} (columns).
    /// Over Z the columns form a lattice basis; over F_p a vector space basis.
    pub fn kernel_basis(&self) -> Matrix {
        let snf = self.smith_normal_form();
        let mut cols = Vec::new();
        for c in 0..self.cols {
            let diag = if c < self.rows.min(self.cols) { snf.d.at(c, c).clone() } else { BigInt::zero() };
            if diag.is_zero() {
                cols.push(snf.v.column(c));
            }
        }
        Matrix::from_columns(self.ring, self.cols, &cols)
    }

    /// Solve self * x = b exactly; None if no solution over the ring.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let snf = self.smith_normal_form();
        self.solve_with_snf(&snf, b)
    }

    /// Solve against a precomputed SNF (for batches of right-hand sides).
    pub fn solve_with_snf(&self, snf: &Snf, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(b.len(), self.rows, "dimension mismatch in solve");
        let c = snf.u.mul_vec(b);
        let mut y = vec![BigInt::zero(); self.cols];
        let n = self.rows.min(self.cols);
        for i in 0..self.rows {
            let di = if i < n { snf.d.at(i, i).clone() } else { BigInt::zero() };
            if i < self.cols {
                y[i] = self.ring.try_div(&c[i], &di)?;
            } else if !self.ring.is_zero(&c[i]) {
                return None;
            }
        }
        // rows beyond n with nonzero rhs already rejected above
        for (i, ci) in c.iter().enumerate().take(self.rows) {
            if i >= self.cols && !self.ring.is_zero(ci) {
                return None;
            }
        }
        Some(snf.v.mul_vec(&y))
    }

    /// Solve self * X = B columnwise with one SNF; None entries mark
    /// unsolvable columns.
    pub fn solve_multi(&self, b: &Matrix) -> Vec<Option<Vec<BigInt>>> {
        assert_eq!(b.rows, self.rows, "dimension mismatch in solve_multi");
        let snf = self.smith_normal_form();
        (0..b.cols).map(|j| self.solve_with_snf(&snf, &b.column(j))).collect()
    }

    /// Inverse of a square matrix invertible over the ring.
    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let mut cols = Vec::with_capacity(self.cols);
        for i in 0..self.cols {
            let mut e = vec![BigInt::zero(); self.rows];
            e[i] = BigInt::one();
            cols.push(self.solve(&e)?);
        }
        Some(Matrix::from_columns(self.ring, self.rows, &cols))
    }

    /// A basis (columns) for the lattice spanned by the columns of self.
    /// Over F_p, a linear basis of the column space.
    pub fn image_basis(&self) -> Matrix {
        let snf = self.smith_normal_form();
        let uinv = snf.u.inverse().expect("U unimodular");
        let mut cols = Vec::new();
        for i in 0..self.rows.min(self.cols) {
            let d = snf.d.at(i, i);
            if !d.is_zero() {
                let col = uinv.column(i).iter().map(|x| self.ring.normalize(&(x * d))).collect();
                cols.push(col);
            }
        }
        Matrix::from_columns(self.ring, self.rows, &cols)
    }

    /// |det| for square matrices, via SNF diagonal (sign is discarded).
    pub fn det_abs(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let snf = self.smith_normal_form();
        let mut acc = BigInt::one();
        for i in 0..self.rows {
            acc *= snf.d.at(i, i);
        }
        acc.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(m: &Matrix) {
        let snf = m.smith_normal_form();
        assert_eq!(snf.u.mul(m).mul(&snf.v), snf.d, "UmV != D for {m:?}");
        // diagonal with divisibility chain
        for r in 0..snf.d.rows {
            for c in 0..snf.d.cols {
                if r != c {
                    assert!(snf.d.at(r, c).is_zero());
                }
            }
        }
        let n = m.rows.min(m.cols);
        for i in 1..n {
            let prev = snf.d.at(i - 1, i - 1);
            let cur = snf.d.at(i, i);
            if !prev.is_zero() {
                assert!((cur % prev).is_zero(), "no divisibility chain");
            } else {
                assert!(cur.is_zero());
            }
        }
        if m.ring == Ring::Int {
            assert_eq!(snf.u.det_abs(), BigInt::one());
            assert_eq!(snf.v.det_abs(), BigInt::one());
        }
    }

    #[test]
    fn snf_identity() {
        let m = Matrix::identity(Ring::Int, 2);
        let snf = m.smith_normal_form();
        assert_eq!(snf.d, m);
        check_snf(&m);
    }

    #[test]
    fn snf_diag_2_3() {
        // oracle: gcd reduction by hand gives diag(1, 6)
        let m = Matrix::from_i64_rows(Ring::Int, &[&[2, 0], &[0, 3]]);
        check_snf(&m);
        let snf = m.smith_normal_form();
        assert_eq!(snf.d.at(0, 0), &BigInt::from(1));
        assert_eq!(snf.d.at(1, 1), &BigInt::from(6));
    }

    #[test]
    fn snf_zero() {
        let m = Matrix::zero(Ring::Int, 3, 2);
        let snf = m.smith_normal_form();
        assert!(snf.d.is_zero());
        check_snf(&m);
    }

    #[test]
    fn snf_random_int() {
        // seeded LCG so the test is deterministic
        let mut state: u64 = 0x9e3779b97f4a7c15;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 11) as i64 - 5
        };
        for _ in 0..200 {
            let rows = 1 + (next().unsigned_abs() as usize % 6);
            let cols = 1 + (next().unsigned_abs() as usize % 6);
            let m = Matrix::from_fn(Ring::Int, rows, cols, |_, _| BigInt::from(next()));
            check_snf(&m);
        }
    }

    #[test]
    fn snf_random_fp() {
        let mut state: u64 = 12345;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as i64 % 7
        };
        for _ in 0..100 {
            let rows = 1 + (next().unsigned_abs() as usize % 5);
            let cols = 1 + (next().unsigned_abs() as usize % 5);
            let m = Matrix::from_fn(Ring::Fp(7), rows, cols, |_, _| BigInt::from(next()));
            check_snf(&m);
            // all nonzero invariant factors are 1 over a field
            for f in m.invariant_factors() {
                assert!(f.is_zero() || f.is_one());
            }
        }
    }

    #[test]
    fn solve_scalar_divisibility() {
        let m = Matrix::from_i64_rows(Ring::Int, &[&[2]]);
        assert_eq!(m.solve(&[BigInt::from(4)]), Some(vec![BigInt::from(2)]));
        assert_eq!(m.solve(&[BigInt::from(3)]), None);
    }

    #[test]
    fn solve_diag() {
        // brute force over a small box confirms (1,0) solves diag(2,3)x=(2,0)
        let m = Matrix::from_i64_rows(Ring::Int, &[&[2, 0], &[0, 3]]);
        let x = m.solve(&[BigInt::from(2), BigInt::zero()]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![BigInt::from(2), BigInt::zero()]);
        assert_eq!(x, vec![BigInt::from(1), BigInt::zero()]);
    }

    #[test]
    fn solve_nonsquare_and_kernel() {
        let m = Matrix::from_i64_rows(Ring::Int, &[&[2, 4, 1], &[0, 2, 0]]);
        let b = vec![BigInt::from(3), BigInt::from(2)];
        let x = m.solve(&b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
        let k = m.kernel_basis();
        for col in k.columns() {
            assert!(m.mul_vec(&col).iter().all(|v| v.is_zero()));
        }
    }

    #[test]
    fn kernel_full() {
        let m = Matrix::from_i64_rows(Ring::Int, &[&[1, 2], &[2, 4]]);
        let k = m.kernel_basis();
        assert_eq!(k.cols, 1);
        assert!(m.mul(&k).is_zero());
    }
}
