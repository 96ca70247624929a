//! Exact dense linear algebra over prime fields F_p.
//!
//! Every homology computation in this crate bottoms out in [`Matrix::rank`],
//! [`Matrix::kernel_basis`] or [`Matrix::solve`]. Arithmetic is exact: entries
//! are kept reduced modulo `p` and `p < 2^31` keeps all intermediate products
//! inside `u64`.

use crate::error::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// A prime field F_p with 2 <= p < 2^31. Primality is checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..1 << 31).contains(&p) {
            return Err(Error::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    /// Reduce a signed integer into [0, p).
    pub fn reduce(&self, a: i64) -> u64 {
        let p = self.p as i64;
        (a.rem_euclid(p)) as u64
    }

    /// Multiplicative inverse of a nonzero element, via Fermat.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p));
        self.pow(a, self.p - 2)
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        base %= self.p;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

/// Dense row-major matrix over F_p. Immutable after construction in practice;
/// all operations return fresh matrices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix {
    p: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl Matrix {
    pub fn zero(field: PrimeField, rows: usize, cols: usize) -> Self {
        Matrix { p: field.modulus(), rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    /// Build from signed integer rows, reducing mod p.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let entries = rows.iter().flatten().map(|&e| field.reduce(e)).collect();
        Ok(Matrix { p: field.modulus(), rows: r, cols: c, entries })
    }

    pub fn from_fn(field: PrimeField, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u64) -> Self {
        let mut m = Self::zero(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.entries[i * cols + j] = f(i, j) % field.modulus();
            }
        }
        m
    }

    pub fn random(field: PrimeField, rows: usize, cols: usize, rng: &mut impl Rng) -> Self {
        Self::from_fn(field, rows, cols, |_, _| rng.gen_range(0..field.modulus()))
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { p: self.p }
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

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.entries[i * self.cols + j] = v % self.p;
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    /// Copy `block` into self with upper-left corner at (r0, c0).
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert_eq!(self.p, block.p, "modulus mismatch in set_block");
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.entries[(r0 + i) * self.cols + c0 + j] = block.entries[i * block.cols + j];
            }
        }
    }

    fn check_same_field(&self, other: &Matrix) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p, other.p));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "add: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| (a + b) % self.p)
            .collect();
        Ok(Matrix { p: self.p, rows: self.rows, cols: self.cols, entries })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Matrix {
        let entries = self.entries.iter().map(|&a| (self.p - a) % self.p).collect();
        Matrix { p: self.p, rows: self.rows, cols: self.cols, entries }
    }

    pub fn scale(&self, c: u64) -> Matrix {
        let c = c % self.p;
        let entries = self.entries.iter().map(|&a| a * c % self.p).collect();
        Matrix { p: self.p, rows: self.rows, cols: self.cols, entries }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "mul: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zero(self.field(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entries[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let row = &other.entries[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.entries[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d = (*d + a * b) % self.p;
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.field(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.entries[i * self.cols + j];
            }
        }
        out
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_field(other)?;
        if self.rows != other.rows {
            return Err(Error::Dimension("hstack: row mismatch".into()));
        }
        let mut out = Matrix::zero(self.field(), self.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(0, self.cols, other);
        Ok(out)
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_field(other)?;
        if self.cols != other.cols {
            return Err(Error::Dimension("vstack: column mismatch".into()));
        }
        let mut out = Matrix::zero(self.field(), self.rows + other.rows, self.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, 0, other);
        Ok(out)
    }

    /// Kronecker product, block structure (a_{ij} * b).
    pub fn kron(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_field(other)?;
        let mut out = Matrix::zero(self.field(), self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.entries[i * self.cols + j];
                if a == 0 {
                    continue;
                }
                for r in 0..other.rows {
                    for c in 0..other.cols {
                        let v = a * other.entries[r * other.cols + c] % self.p;
                        out.entries[(i * other.rows + r) * out.cols + j * other.cols + c] = v;
                    }
                }
            }
        }
        Ok(out)
    }

    /// In-place row reduction to reduced row echelon form; returns pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let field = self.field();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            // find a pivot in this column
            let Some(pr) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for j in 0..self.cols {
                    self.entries.swap(row * self.cols + j, pr * self.cols + j);
                }
            }
            let inv = field.inv(self.get(row, col));
            for j in col..self.cols {
                let v = self.get(row, j) * inv % self.p;
                self.entries[row * self.cols + j] = v;
            }
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let f = self.get(r, col);
                if f == 0 {
                    continue;
                }
                for j in col..self.cols {
                    let v = (self.get(r, j) + (self.p - f) * self.get(row, j)) % self.p;
                    self.entries[r * self.cols + j] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    /// Rank over F_p by exact row reduction.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.rref().len()
    }

    /// Columns spanning ker(self); column count = cols - rank.
    pub fn kernel_basis(&self) -> Matrix {
        let mut work = self.clone();
        let pivots = work.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zero(self.field(), self.cols, free.len());
        for (kidx, &fc) in free.iter().enumerate() {
            out.set(fc, kidx, 1);
            for (prow, &pc) in pivots.iter().enumerate() {
                let v = work.get(prow, fc);
                out.set(pc, kidx, (self.p - v) % self.p);
            }
        }
        out
    }

    /// Solve self * X = rhs. Returns a particular solution (free variables set
    /// to zero) when the system is consistent, `None` otherwise.
    pub fn solve(&self, rhs: &Matrix) -> Result<Option<Matrix>> {
        self.check_same_field(rhs)?;
        if self.rows != rhs.rows {
            return Err(Error::Dimension(format!(
                "solve: lhs has {} rows, rhs has {}",
                self.rows, rhs.rows
            )));
        }
        let mut work = self.hstack(rhs)?;
        let pivots = work.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zero(self.field(), self.cols, rhs.cols);
        for (prow, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, work.get(prow, self.cols + j));
            }
        }
        Ok(Some(x))
    }

    /// Inverse of a square invertible matrix, `None` if singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        if self.rank() != self.rows {
            return None;
        }
        self.solve(&Matrix::identity(self.field(), self.rows)).expect("square system")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn primality_checked() {
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(2147483648).is_err());
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(2147483647).is_ok());
    }

    #[test]
    fn rank_identity_and_zero() {
        assert_eq!(Matrix::identity(f(2), 2).rank(), 2);
        assert_eq!(Matrix::zero(f(7), 3, 5).rank(), 0);
    }

    #[test]
    fn rank_ones_f2() {
        let m = Matrix::from_rows(f(2), &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let k = Matrix::identity(f(3), 4).kernel_basis();
        assert_eq!(k.cols(), 0);
    }

    #[test]
    fn kernel_of_zero_is_full() {
        let k = Matrix::zero(f(5), 3, 3).kernel_basis();
        assert_eq!(k.cols(), 3);
        assert_eq!(k.rank(), 3);
    }

    #[test]
    fn kernel_row_f3() {
        // x + y = 0 mod 3 has kernel spanned by (1, 2)
        let m = Matrix::from_rows(f(3), &[vec![1, 1]]).unwrap();
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).unwrap().is_zero());
        let scaled = k.scale(f(3).inv(k.get(0, 0)));
        assert_eq!((scaled.get(0, 0), scaled.get(1, 0)), (1, 2));
    }

    #[test]
    fn solve_identity_and_inconsistent() {
        let b = Matrix::from_rows(f(7), &[vec![3], vec![5]]).unwrap();
        let x = Matrix::identity(f(7), 2).solve(&b).unwrap().unwrap();
        assert_eq!(x, b);
        let a = Matrix::zero(f(7), 2, 2);
        assert!(a.solve(&b).unwrap().is_none());
    }

    #[test]
    fn solve_back_substitution_f2() {
        let a = Matrix::from_rows(f(2), &[vec![1, 1], vec![0, 1]]).unwrap();
        let b = Matrix::from_rows(f(2), &[vec![0], vec![1]]).unwrap();
        let x = a.solve(&b).unwrap().unwrap();
        assert_eq!(x, Matrix::from_rows(f(2), &[vec![1], vec![1]]).unwrap());
    }

    #[test]
    fn solve_rejects_row_mismatch() {
        let a = Matrix::zero(f(2), 2, 2);
        let b = Matrix::zero(f(2), 3, 1);
        assert!(a.solve(&b).is_err());
    }

    #[test]
    fn modulus_mixing_is_an_error() {
        let a = Matrix::identity(f(2), 2);
        let b = Matrix::identity(f(3), 2);
        assert!(a.mul(&b).is_err());
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn kron_identities() {
        let id2 = Matrix::identity(f(5), 2);
        let id3 = Matrix::identity(f(5), 3);
        assert_eq!(id2.kron(&id3).unwrap(), Matrix::identity(f(5), 6));
        let z = Matrix::zero(f(5), 1, 1);
        assert!(id2.kron(&z).unwrap().is_zero());
    }

    #[test]
    fn kron_expands_blocks() {
        let a = Matrix::from_rows(f(2), &[vec![1, 1]]).unwrap();
        let b = Matrix::from_rows(f(2), &[vec![1], vec![1]]).unwrap();
        let got = a.kron(&b).unwrap();
        assert_eq!(got, Matrix::from_rows(f(2), &[vec![1, 1], vec![1, 1]]).unwrap());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_rows(f(5), &[vec![1, 2], vec![3, 4]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(f(5), 2));
        let s = Matrix::from_rows(f(5), &[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(s.inverse().is_none());
    }

    proptest! {
        #[test]
        fn rank_nullity(seed in 0u64..500, rows in 0usize..7, cols in 0usize..7, pidx in 0usize..3) {
            let p = [2u64, 3, 5][pidx];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = Matrix::random(f(p), rows, cols, &mut rng);
            let k = m.kernel_basis();
            prop_assert_eq!(m.rank() + k.cols(), cols);
            prop_assert!(m.mul(&k).unwrap().is_zero());
            prop_assert_eq!(k.rank(), k.cols());
        }

        #[test]
        fn rank_of_product_bounded(seed in 0u64..200, n in 1usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
            let a = Matrix::random(f(3), n, n, &mut rng);
            let b = Matrix::random(f(3), n, n, &mut rng);
            let r = a.mul(&b).unwrap().rank();
            prop_assert!(r <= a.rank().min(b.rank()));
        }

        #[test]
        fn solve_is_exact_or_rank_jumps(seed in 0u64..300, rows in 1usize..6, cols in 1usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x77);
            let a = Matrix::random(f(3), rows, cols, &mut rng);
            let b = Matrix::random(f(3), rows, 1, &mut rng);
            match a.solve(&b).unwrap() {
                Some(x) => prop_assert_eq!(a.mul(&x).unwrap(), b),
                None => prop_assert!(a.hstack(&b).unwrap().rank() > a.rank()),
            }
        }

        #[test]
        fn kron_associative_up_to_reindexing(seed in 0u64..100) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1234);
            let a = Matrix::random(f(5), 2, 1, &mut rng);
            let b = Matrix::random(f(5), 1, 2, &mut rng);
            let c = Matrix::random(f(5), 2, 2, &mut rng);
            // flat index sets coincide, so associativity is entry-wise equality
            prop_assert_eq!(a.kron(&b).unwrap().kron(&c).unwrap(),
                            a.kron(&b.kron(&c).unwrap()).unwrap());
        }
    }
}
