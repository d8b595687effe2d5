//! Dense matrices of arbitrary-precision integers with exact linear algebra:
//! fraction-free determinants, unimodularity and symplectic tests, and the
//! signature of a symmetric form via rational congruence diagonalization.
//!
//! No floating point anywhere; every operation is exact.

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Row-major dense matrix over the integers. The 0x0 matrix is a legal value.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

/// Build an [`IntMatrix`] from integer literals: `imat![[1, 0], [0, 1]]`.
/// `imat![]` is the empty (0x0) matrix.
#[macro_export]
macro_rules! imat {
    () => { $crate::matrix::IntMatrix::empty() };
    ($([$($x:expr),* $(,)?]),* $(,)?) => {
        $crate::matrix::IntMatrix::from_i64_rows(&[$(vec![$($x as i64),*]),*])
            .expect("well-formed matrix literal")
    };
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::EntryCount {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn empty() -> Self {
        IntMatrix {
            rows: 0,
            cols: 0,
            entries: Vec::new(),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, entries }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Error::RaggedRows { row: i });
            }
        }
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| BigInt::from(x)))
            .collect();
        IntMatrix::new(r, c, entries)
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

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.entry(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self.entry(j, i).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.entry(i, j) == self.entry(j, i)))
    }

    pub fn add(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        self.check_same_shape(rhs)?;
        Ok(IntMatrix::from_fn(self.rows, self.cols, |i, j| {
            self.entry(i, j) + rhs.entry(i, j)
        }))
    }

    pub fn sub(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        self.check_same_shape(rhs)?;
        Ok(IntMatrix::from_fn(self.rows, self.cols, |i, j| {
            self.entry(i, j) - rhs.entry(i, j)
        }))
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| -self.entry(i, j))
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: rhs.rows,
            });
        }
        Ok(IntMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = BigInt::zero();
            for k in 0..self.cols {
                acc += self.entry(i, k) * rhs.entry(k, j);
            }
            acc
        }))
    }

    /// `P^t * self * P`, dimensions checked.
    pub fn congruence(&self, p: &IntMatrix) -> Result<IntMatrix> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if p.rows != self.rows || p.cols != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: p.rows,
            });
        }
        p.transpose().mul(self)?.mul(p)
    }

    /// Copy of the `h x w` block with upper-left corner `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> IntMatrix {
        assert!(r0 + h <= self.rows && c0 + w <= self.cols, "block out of range");
        IntMatrix::from_fn(h, w, |i, j| self.entry(r0 + i, c0 + j).clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &IntMatrix) {
        assert!(
            r0 + b.rows <= self.rows && c0 + b.cols <= self.cols,
            "block out of range"
        );
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.entry(i, j).clone());
            }
        }
    }

    pub fn block_diag(blocks: &[&IntMatrix]) -> IntMatrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = IntMatrix::zeros(n, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Permutation matrix sending basis element `i` to `images[i]`.
    pub fn permutation(images: &[usize]) -> IntMatrix {
        let n = images.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, &j) in images.iter().enumerate() {
            assert!(j < n, "permutation image out of range");
            m.set(i, j, BigInt::one());
        }
        m
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    /// The 0x0 determinant is 1 (empty product).
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    // Exact by the Bareiss identity: every entry is a minor
                    // of the original matrix.
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if sign < 0 { -d } else { d })
    }

    /// True iff the matrix is square with determinant +1 or -1.
    pub fn is_unimodular(&self) -> bool {
        match self.det() {
            Ok(d) => d == BigInt::one() || d == -BigInt::one(),
            Err(_) => false,
        }
    }

    /// Exact inverse of a unimodular matrix. The inverse of an integer matrix
    /// with determinant +-1 is again integral.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let d = self.det()?;
        if !(d == BigInt::one() || d == -BigInt::one()) {
            return Err(Error::NotUnimodular { det: d });
        }
        let n = self.rows;
        // Gauss-Jordan over the rationals on [self | I].
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..2 * n)
                    .map(|j| {
                        if j < n {
                            BigRational::from_integer(self.entry(i, j).clone())
                        } else if j - n == i {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for k in 0..n {
            let pivot_row = (k..n)
                .find(|&r| !a[r][k].is_zero())
                .expect("unimodular matrix has full rank");
            a.swap(k, pivot_row);
            let pivot = a[k][k].clone();
            for j in k..2 * n {
                a[k][j] = &a[k][j] / &pivot;
            }
            for i in 0..n {
                if i == k || a[i][k].is_zero() {
                    continue;
                }
                let f = a[i][k].clone();
                for j in k..2 * n {
                    a[i][j] = &a[i][j] - &f * &a[k][j];
                }
            }
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in &a {
            for q in &row[n..] {
                debug_assert!(q.is_integer());
                entries.push(q.to_integer());
            }
        }
        IntMatrix::new(n, n, entries)
    }

    /// The standard skew form of genus `g`: the 2g x 2g block sum of
    /// `(0 -1; 1 0)`.
    pub fn standard_sym(g: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(2 * g, 2 * g);
        for k in 0..g {
            m.set(2 * k, 2 * k + 1, -BigInt::one());
            m.set(2 * k + 1, 2 * k, BigInt::one());
        }
        m
    }

    /// True iff `self^t * Sym * self == Sym` for the standard genus-`g` form.
    pub fn is_symplectic(&self, g: usize) -> Result<bool> {
        if self.rows != 2 * g || self.cols != 2 * g {
            return Err(Error::DimensionMismatch {
                expected: 2 * g,
                got: self.rows,
            });
        }
        let sym = IntMatrix::standard_sym(g);
        Ok(sym.congruence(self)? == sym)
    }

    /// Signature of an integer symmetric form: positive minus negative
    /// inertia index, computed by exact congruence diagonalization over the
    /// rationals. A zero pivot whose row is not yet zero is resolved by the
    /// hyperbolic-pair trick (add a row/column to create a nonzero diagonal
    /// entry), which contributes a (+1, -1) pair and keeps everything exact.
    pub fn signature(&self) -> Result<i64> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if let Some((i, j)) = self.first_asymmetry() {
            return Err(Error::NotSymmetric { row: i, col: j });
        }
        let n = self.rows;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| BigRational::from_integer(x.clone()))
                    .collect()
            })
            .collect();
        let mut sig = 0i64;
        for k in 0..n {
            if a[k][k].is_zero() {
                if let Some(i) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                    // Symmetric swap of basis elements k and i.
                    a.swap(k, i);
                    for row in a.iter_mut() {
                        row.swap(k, i);
                    }
                } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                    // All remaining diagonal entries vanish; a[k][j] spans a
                    // hyperbolic plane. Adding basis element j to k makes the
                    // diagonal entry 2*a[k][j] != 0.
                    for col in k..n {
                        let add = a[j][col].clone();
                        a[k][col] += add;
                    }
                    for row in k..n {
                        let add = a[row][j].clone();
                        a[row][k] += add;
                    }
                } else {
                    // Null direction: contributes nothing.
                    continue;
                }
            }
            let pivot = a[k][k].clone();
            sig += if pivot.is_positive() { 1 } else { -1 };
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &pivot;
                for j in k + 1..n {
                    a[i][j] = &a[i][j] - &f * &a[k][j];
                }
                a[i][k] = BigRational::zero();
            }
            for j in k + 1..n {
                a[k][j] = BigRational::zero();
            }
        }
        Ok(sig)
    }

    fn first_asymmetry(&self) -> Option<(usize, usize)> {
        for i in 0..self.rows {
            for j in 0..i {
                if self.entry(i, j) != self.entry(j, i) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    fn check_same_shape(&self, rhs: &IntMatrix) -> Result<()> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: rhs.rows,
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        self.entry(i, j)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows == 0 || self.cols == 0 {
            return write!(f, "[{}x{}]", self.rows, self.cols);
        }
        let width = self
            .entries
            .iter()
            .map(|e| e.to_string().len())
            .max()
            .unwrap_or(1);
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>width$}", self.entry(i, j), width = width)?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix({}x{})\n{}", self.rows, self.cols, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use rand::Rng;

    /// Independent determinant oracle: cofactor expansion along the first row.
    fn det_cofactor(m: &IntMatrix) -> BigInt {
        assert!(m.is_square());
        let n = m.rows();
        if n == 0 {
            return BigInt::one();
        }
        if n == 1 {
            return m.entry(0, 0).clone();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            if m.entry(0, j).is_zero() {
                continue;
            }
            let minor = IntMatrix::from_fn(n - 1, n - 1, |r, c| {
                m.entry(r + 1, if c < j { c } else { c + 1 }).clone()
            });
            let term = m.entry(0, j) * det_cofactor(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn det_empty_is_one() {
        assert_eq!(IntMatrix::empty().det().unwrap(), BigInt::one());
    }

    #[test]
    fn det_triangular() {
        assert_eq!(imat![[1, 1], [0, 1]].det().unwrap(), BigInt::from(1));
    }

    #[test]
    fn det_rank_one() {
        // 2x2 cofactor formula: (-2)(-2) - (-2)(-2) = 0.
        assert_eq!(imat![[-2, -2], [-2, -2]].det().unwrap(), BigInt::zero());
    }

    #[test]
    fn det_non_square() {
        let m = IntMatrix::zeros(2, 3);
        assert_eq!(m.det(), Err(Error::NonSquare { rows: 2, cols: 3 }));
    }

    #[test]
    fn det_matches_cofactor_oracle() {
        let mut rng = sample::rng(11);
        for _ in 0..200 {
            let n = rng.gen_range(0..=5);
            let m = sample::random_matrix(n, n, 9, &mut rng);
            assert_eq!(m.det().unwrap(), det_cofactor(&m));
        }
    }

    #[test]
    fn det_is_multiplicative() {
        let mut rng = sample::rng(12);
        for _ in 0..100 {
            let n = rng.gen_range(0..=6);
            let a = sample::random_matrix(n, n, 6, &mut rng);
            let b = sample::random_matrix(n, n, 6, &mut rng);
            assert_eq!(
                a.mul(&b).unwrap().det().unwrap(),
                a.det().unwrap() * b.det().unwrap()
            );
        }
    }

    #[test]
    fn unimodular_cases() {
        assert!(IntMatrix::identity(4).is_unimodular());
        assert!(imat![[1, 1], [0, 1]].is_unimodular());
        assert!(!imat![[2, 0], [0, 1]].is_unimodular());
        assert!(!IntMatrix::zeros(2, 3).is_unimodular());
    }

    #[test]
    fn inverse_unimodular_roundtrip() {
        let mut rng = sample::rng(13);
        for _ in 0..50 {
            let n = rng.gen_range(1..=5);
            let p = sample::random_unimodular(n, 6, 3, &mut rng);
            let inv = p.inverse_unimodular().unwrap();
            assert_eq!(p.mul(&inv).unwrap(), IntMatrix::identity(n));
        }
    }

    #[test]
    fn inverse_rejects_non_unimodular() {
        assert_eq!(
            imat![[2, 0], [0, 1]].inverse_unimodular(),
            Err(Error::NotUnimodular {
                det: BigInt::from(2)
            })
        );
    }

    #[test]
    fn standard_sym_shapes() {
        assert_eq!(IntMatrix::standard_sym(0), IntMatrix::empty());
        assert_eq!(IntMatrix::standard_sym(1), imat![[0, -1], [1, 0]]);
        assert_eq!(
            IntMatrix::standard_sym(2),
            imat![
                [0, -1, 0, 0],
                [1, 0, 0, 0],
                [0, 0, 0, -1],
                [0, 0, 1, 0]
            ]
        );
    }

    #[test]
    fn symplectic_cases() {
        let sym = IntMatrix::standard_sym(1);
        assert!(sym.is_symplectic(1).unwrap());
        assert!(imat![[1, 1], [0, 1]].is_symplectic(1).unwrap());
        assert!(!imat![[2, 0], [0, 1]].is_symplectic(1).unwrap());
        assert!(IntMatrix::empty().is_symplectic(0).unwrap());
        assert!(imat![[1, 1], [0, 1]].is_symplectic(2).is_err());
    }

    #[test]
    fn symplectic_closed_under_products() {
        let mut rng = sample::rng(14);
        for _ in 0..50 {
            let g = rng.gen_range(1..=3);
            let s1 = sample::random_symplectic(g, 6, 2, &mut rng);
            let s2 = sample::random_symplectic(g, 6, 2, &mut rng);
            assert!(s1.is_symplectic(g).unwrap());
            assert!(s2.is_symplectic(g).unwrap());
            assert!(s1.mul(&s2).unwrap().is_symplectic(g).unwrap());
        }
    }

    #[test]
    fn signature_cases() {
        assert_eq!(IntMatrix::empty().signature().unwrap(), 0);
        assert_eq!(IntMatrix::identity(2).signature().unwrap(), 2);
        // Diagonalizes to diag(-2, 0).
        assert_eq!(imat![[-2, -2], [-2, -2]].signature().unwrap(), -1);
        // Pure hyperbolic plane.
        assert_eq!(imat![[0, 3], [3, 0]].signature().unwrap(), 0);
        assert_eq!(
            imat![[0, 1], [0, 0]].signature(),
            Err(Error::NotSymmetric { row: 1, col: 0 })
        );
    }

    #[test]
    fn signature_is_a_congruence_invariant() {
        let mut rng = sample::rng(15);
        for _ in 0..100 {
            let n = rng.gen_range(0..=5);
            let m = sample::random_symmetric(n, 5, &mut rng);
            let p = sample::random_unimodular(n, 6, 3, &mut rng);
            let conj = m.congruence(&p).unwrap();
            assert_eq!(conj.signature().unwrap(), m.signature().unwrap());
        }
    }

    #[test]
    fn permutation_congruence_permutes_entries() {
        let m = imat![[1, 2, 3], [4, 5, 6], [7, 8, 9]];
        // Swap basis elements 0 and 2.
        let p = IntMatrix::permutation(&[2, 1, 0]);
        let c = m.congruence(&p).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let (si, sj) = (2 - i, 2 - j);
                assert_eq!(c.entry(i, j), m.entry(si, sj));
            }
        }
    }
}
