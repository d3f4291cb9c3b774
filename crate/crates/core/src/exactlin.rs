//! Exact linear algebra over prime fields and over the integers.
//!
//! Everything downstream (hom spaces, syzygies, rank sequences) reduces to
//! the row reductions in this module. All arithmetic is exact; there is no
//! floating point anywhere in the crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A dense matrix over the prime field `F_p`, stored row-major.
///
/// Residues are kept reduced in `[0, p)`. The modulus must be prime and at
/// most `2^31` so that products of residues fit in a `u64`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Mat {
    pub fn zero(p: u64, rows: usize, cols: usize) -> Mat {
        debug_assert!(is_prime(p) && p <= 1 << 31);
        Mat { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Mat {
        let mut m = Mat::zero(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: u64, rows: &[Vec<u64>]) -> Mat {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Mat::zero(p, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, &x) in r.iter().enumerate() {
                m.set(i, j, x % p);
            }
        }
        m
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols, self.p), (other.rows, other.cols, other.p));
        let mut m = self.clone();
        for (a, &b) in m.data.iter_mut().zip(&other.data) {
            *a = (*a + b) % self.p;
        }
        m
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols, self.p), (other.rows, other.cols, other.p));
        let mut m = self.clone();
        for (a, &b) in m.data.iter_mut().zip(&other.data) {
            *a = (*a + self.p - b) % self.p;
        }
        m
    }

    pub fn scale(&self, c: u64) -> Mat {
        let c = c % self.p;
        let mut m = self.clone();
        for a in m.data.iter_mut() {
            *a = *a * c % self.p;
        }
        m
    }

    pub fn neg(&self) -> Mat {
        self.scale(self.p - 1)
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        assert_eq!(self.p, other.p);
        let mut m = Mat::zero(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = (m.get(i, j) + a * other.get(k, j)) % self.p;
                    m.data[i * m.cols + j] = v;
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for j in 0..self.cols {
                    acc = (acc + self.get(i, j) * (v[j] % self.p)) % self.p;
                }
                acc
            })
            .collect()
    }

    /// Stack `self` on top of `other`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        assert_eq!(self.p, other.p);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { p: self.p, rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.p, other.p);
        let mut m = Mat::zero(self.p, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j));
            }
        }
        m
    }

    /// Assemble a block matrix from a grid of blocks. Row `i` of blocks must
    /// share a common row count, column `j` a common column count.
    pub fn from_blocks(p: u64, grid: &[Vec<Mat>]) -> Mat {
        let block_rows: Vec<usize> = grid.iter().map(|r| r.first().map_or(0, |b| b.rows)).collect();
        let block_cols: Vec<usize> = if let Some(first) = grid.first() {
            first.iter().map(|b| b.cols).collect()
        } else {
            Vec::new()
        };
        let rows: usize = block_rows.iter().sum();
        let cols: usize = block_cols.iter().sum();
        let mut m = Mat::zero(p, rows, cols);
        let mut roff = 0;
        for (bi, row) in grid.iter().enumerate() {
            let mut coff = 0;
            for (bj, b) in row.iter().enumerate() {
                assert_eq!(b.rows, block_rows[bi]);
                assert_eq!(b.cols, block_cols[bj]);
                for i in 0..b.rows {
                    for j in 0..b.cols {
                        m.set(roff + i, coff + j, b.get(i, j));
                    }
                }
                coff += b.cols;
            }
            roff += block_rows[bi];
        }
        m
    }

    fn inv_scalar(&self, a: u64) -> u64 {
        // Fermat: a^(p-2) mod p.
        let p = self.p;
        let mut base = a % p;
        let mut exp = p - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        acc
    }

    /// Reduced row echelon form; returns (rref, pivot columns).
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let p = self.p;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let piv = (r..m.rows).find(|&i| m.get(i, c) != 0);
            let piv = match piv {
                Some(i) => i,
                None => continue,
            };
            if piv != r {
                for j in 0..m.cols {
                    let (a, b) = (m.get(r, j), m.get(piv, j));
                    m.set(r, j, b);
                    m.set(piv, j, a);
                }
            }
            let inv = m.inv_scalar(m.get(r, c));
            for j in 0..m.cols {
                let v = m.get(r, j) * inv % p;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && m.get(i, c) != 0 {
                    let f = m.get(i, c);
                    for j in 0..m.cols {
                        let v = (m.get(i, j) + (p - f) * m.get(r, j)) % p;
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space `{v : self * v = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let (rr, pivots) = self.rref();
        let p = self.p;
        let mut basis = Vec::new();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (pi, &pc) in pivots.iter().enumerate() {
                let coef = rr.get(pi, free);
                if coef != 0 {
                    v[pc] = p - coef;
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Some solution of `self * x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Mat::zero(self.p, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let (rr, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![0u64; self.cols];
        for (pi, &pc) in pivots.iter().enumerate() {
            x[pc] = rr.get(pi, self.cols);
        }
        Some(x)
    }

    /// Solve `self * X = B` columnwise; `None` if any column is inconsistent.
    pub fn solve_matrix(&self, b: &Mat) -> Option<Mat> {
        assert_eq!(self.rows, b.rows);
        let mut x = Mat::zero(self.p, self.cols, b.cols);
        for j in 0..b.cols {
            let col: Vec<u64> = (0..b.rows).map(|i| b.get(i, j)).collect();
            let sol = self.solve(&col)?;
            for i in 0..self.cols {
                x.set(i, j, sol[i]);
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        if self.rank() != self.rows {
            return None;
        }
        self.solve_matrix(&Mat::identity(self.p, self.rows))
    }

    /// A matrix whose columns are a basis of the column space.
    pub fn column_space_basis(&self) -> Mat {
        // pivot columns of self are independent and span the column space
        let (_, pivots) = self.rref();
        let mut m = Mat::zero(self.p, self.rows, pivots.len());
        for (k, &c) in pivots.iter().enumerate() {
            for i in 0..self.rows {
                m.set(i, k, self.get(i, c));
            }
        }
        m
    }

    /// Flatten row-major into a vector.
    pub fn flatten(&self) -> Vec<u64> {
        self.data.clone()
    }

    pub fn entries(&self) -> &[u64] {
        &self.data
    }
}

/// Express each column of `v` in the basis given by the columns of `basis`.
/// Panics if a column lies outside the span; callers guarantee membership.
pub fn coords_in_basis(basis: &Mat, v: &Mat) -> Mat {
    basis
        .solve_matrix(v)
        .expect("vector outside span of claimed basis")
}

/// An integer matrix with arbitrary-precision entries, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> IntMat {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> IntMat {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = IntMat::zero(rows.len(), cols);
        for (i, r) in rows.into_iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, x) in r.into_iter().enumerate() {
                m.data[i * cols + j] = x;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    fn to_rational(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| BigRational::from(self.get(i, j).clone())).collect())
            .collect()
    }

    /// Rank over the rationals; equals the rank of the subgroup of `Z^cols`
    /// generated by the rows.
    pub fn rank(&self) -> usize {
        let mut m = self.to_rational();
        rational_rank(&mut m, self.cols)
    }

    /// Integer basis of the left kernel `{a : a * self = 0}`, primitive
    /// (content 1) with deterministic sign.
    pub fn left_kernel_basis(&self) -> Vec<Vec<BigInt>> {
        // kernel of the transpose acting on row vectors
        let mut m: Vec<Vec<BigRational>> = (0..self.cols)
            .map(|j| (0..self.rows).map(|i| BigRational::from(self.get(i, j).clone())).collect())
            .collect();
        let n = self.rows;
        let pivots = rational_rref(&mut m, n);
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..n {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![BigRational::zero(); n];
            v[free] = BigRational::one();
            for (pi, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[pi][free].clone();
            }
            basis.push(clear_denominators(&v));
        }
        basis
    }
}

fn rational_rref(m: &mut Vec<Vec<BigRational>>, cols: usize) -> Vec<usize> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let piv = (r..rows).find(|&i| !m[i][c].is_zero());
        let piv = match piv {
            Some(i) => i,
            None => continue,
        };
        m.swap(r, piv);
        let inv = m[r][c].clone();
        for j in 0..cols {
            m[r][j] = &m[r][j] / &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let sub = &f * &m[r][j];
                    m[i][j] = &m[i][j] - &sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn rational_rank(m: &mut Vec<Vec<BigRational>>, cols: usize) -> usize {
    rational_rref(m, cols).len()
}

fn clear_denominators(v: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        let d = x.denom();
        let g = gcd(lcm.clone(), d.clone());
        lcm = &lcm / &g * d;
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from(lcm.clone())).to_integer()).collect();
    let mut content = BigInt::zero();
    for x in &ints {
        content = gcd(content, x.abs());
    }
    if content.is_zero() || content.is_one() {
        return ints;
    }
    ints.into_iter().map(|x| x / &content).collect()
}

fn gcd(mut a: BigInt, mut b: BigInt) -> BigInt {
    a = a.abs();
    b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn rank_empty_matrix() {
        assert_eq!(Mat::zero(2, 0, 0).rank(), 0);
    }

    #[test]
    fn rank_identity() {
        assert_eq!(Mat::identity(2, 3).rank(), 3);
    }

    #[test]
    fn rank_equal_rows_f2() {
        let m = Mat::from_rows(2, &[vec![1, 1], vec![1, 1]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(Mat::identity(3, 2).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_zero_is_full() {
        assert_eq!(Mat::zero(5, 2, 3).kernel_basis().len(), 3);
    }

    #[test]
    fn kernel_sum_vector_f2() {
        let m = Mat::from_rows(2, &[vec![1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k, vec![vec![1, 1]]);
    }

    #[test]
    fn solve_identity() {
        let m = Mat::identity(7, 3);
        assert_eq!(m.solve(&[1, 2, 3]), Some(vec![1, 2, 3]));
    }

    #[test]
    fn solve_inconsistent() {
        let m = Mat::zero(3, 2, 2);
        assert_eq!(m.solve(&[1, 0]), None);
    }

    #[test]
    fn solve_underdetermined() {
        let m = Mat::from_rows(5, &[vec![1, 0], vec![0, 0]]);
        let x = m.solve(&[1, 0]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![1, 0]);
    }

    #[test]
    fn int_rank_examples() {
        let m = IntMat::from_rows(vec![
            vec![BigInt::from(1), BigInt::from(0)],
            vec![BigInt::from(0), BigInt::from(1)],
        ]);
        assert_eq!(m.rank(), 2);
        let m = IntMat::from_rows(vec![
            vec![BigInt::from(2), BigInt::from(4)],
            vec![BigInt::from(1), BigInt::from(2)],
        ]);
        assert_eq!(m.rank(), 1);
        assert_eq!(IntMat::zero(0, 2).rank(), 0);
    }

    #[test]
    fn left_kernel_proportional_rows() {
        let m = IntMat::from_rows(vec![
            vec![BigInt::from(2), BigInt::from(4)],
            vec![BigInt::from(1), BigInt::from(2)],
        ]);
        let k = m.left_kernel_basis();
        assert_eq!(k.len(), 1);
        let v = &k[0];
        // a*row0 + b*row1 = 0
        assert_eq!(&v[0] * 2 + &v[1] * 1, BigInt::from(0));
        assert_eq!(&v[0] * 4 + &v[1] * 2, BigInt::from(0));
    }

    #[test]
    fn rank_plus_nullity() {
        let m = Mat::from_rows(3, &[vec![1, 2, 0, 1], vec![2, 1, 1, 0], vec![0, 0, 0, 0]]);
        assert_eq!(m.rank() + m.kernel_basis().len(), m.cols());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Mat::from_rows(5, &[vec![1, 2], vec![3, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(5, 2));
    }
}
