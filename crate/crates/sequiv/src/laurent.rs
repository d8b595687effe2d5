//! Exact Laurent polynomials in one variable `t` over the integers, and a
//! fraction-free determinant over the Laurent ring. This is the carrier for
//! the Conway polynomial computation.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Laurent polynomial in canonical form: no stored zero coefficients; the
/// zero polynomial is the empty map.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::term(0, BigInt::one())
    }

    /// `c * t^exp`.
    pub fn term(exp: i64, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        LaurentPoly { coeffs }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        LaurentPoly::term(0, c)
    }

    /// `t - t^-1`, the variable of the Conway normalization.
    pub fn z() -> Self {
        &LaurentPoly::term(1, 1) - &LaurentPoly::term(-1, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    fn insert(&mut self, exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(exp).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        let mut acc = LaurentPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        let d_max = divisor.max_exp().unwrap();
        let d_lead = divisor.coeff(d_max);
        // Quotient exponents can only lie in this window.
        let min_q = self.min_exp().unwrap() - divisor.min_exp().unwrap();
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero();
        while !rem.is_zero() {
            let r_max = rem.max_exp().unwrap();
            let e = r_max - d_max;
            if e < min_q {
                return None;
            }
            let (q, r) = rem.coeff(r_max).div_rem(&d_lead);
            if !r.is_zero() {
                return None;
            }
            let t = LaurentPoly::term(e, q);
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Constant-embedding of an integer matrix into the Laurent ring.
    pub fn embed_matrix(m: &IntMatrix) -> Vec<Vec<LaurentPoly>> {
        (0..m.rows())
            .map(|i| {
                (0..m.cols())
                    .map(|j| LaurentPoly::constant(m.entry(i, j).clone()))
                    .collect()
            })
            .collect()
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.insert(e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.insert(e, -c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        &LaurentPoly::zero() - self
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.insert(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().rev() {
            if first {
                if c.sign() == num_bigint::Sign::Minus {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.sign() == num_bigint::Sign::Minus {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.magnitude();
            match e {
                0 => write!(f, "{mag}")?,
                1 if mag.is_one() => write!(f, "t")?,
                1 => write!(f, "{mag}*t")?,
                _ if mag.is_one() => write!(f, "t^{e}")?,
                _ => write!(f, "{mag}*t^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

/// Exact determinant of a square matrix of Laurent polynomials by
/// fraction-free elimination; every intermediate division is exact over the
/// Laurent ring.
pub fn laurent_det(m: &[Vec<LaurentPoly>]) -> Result<LaurentPoly> {
    let n = m.len();
    for (i, row) in m.iter().enumerate() {
        if row.len() != n {
            return Err(Error::NonSquare {
                rows: n,
                cols: m[i].len(),
            });
        }
    }
    if n == 0 {
        return Ok(LaurentPoly::one());
    }
    let mut a: Vec<Vec<LaurentPoly>> = m.to_vec();
    let mut negate = false;
    let mut prev = LaurentPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Ok(LaurentPoly::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .exact_div(&prev)
                    .expect("Bareiss division is exact over an integral domain");
            }
            a[i][k] = LaurentPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -&d } else { d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use rand::Rng;

    fn t(e: i64, c: i64) -> LaurentPoly {
        LaurentPoly::term(e, c)
    }

    #[test]
    fn canonical_form_drops_zeros() {
        let p = &t(2, 3) - &t(2, 3);
        assert!(p.is_zero());
        assert_eq!(p, LaurentPoly::zero());
    }

    #[test]
    fn det_empty_is_one() {
        assert_eq!(laurent_det(&[]).unwrap(), LaurentPoly::one());
    }

    #[test]
    fn det_one_by_one() {
        let p = LaurentPoly::z();
        assert_eq!(laurent_det(&[vec![p.clone()]]).unwrap(), p);
    }

    #[test]
    fn det_two_by_two() {
        // [[-t + 1/t, t], [-1/t, -t + 1/t]] has determinant (t - 1/t)^2 + 1.
        let a = &t(1, -1) + &t(-1, 1);
        let m = vec![vec![a.clone(), t(1, 1)], vec![t(-1, -1), a]];
        let expected = &LaurentPoly::z().pow(2) + &LaurentPoly::one();
        assert_eq!(laurent_det(&m).unwrap(), expected);
    }

    #[test]
    fn det_ragged_rejected() {
        let m = vec![vec![LaurentPoly::one()], vec![]];
        assert!(laurent_det(&m).is_err());
    }

    #[test]
    fn det_agrees_with_integer_det_under_embedding() {
        let mut rng = sample::rng(21);
        for _ in 0..100 {
            let n = rng.gen_range(0..=5);
            let m = sample::random_matrix(n, n, 7, &mut rng);
            let ld = laurent_det(&LaurentPoly::embed_matrix(&m)).unwrap();
            assert_eq!(ld, LaurentPoly::constant(m.det().unwrap()));
        }
    }

    #[test]
    fn exact_div_roundtrip() {
        let mut rng = sample::rng(22);
        for _ in 0..200 {
            let a = sample::random_laurent(&mut rng, 4, 5);
            let b = sample::random_laurent(&mut rng, 4, 5);
            if b.is_zero() {
                continue;
            }
            let prod = &a * &b;
            assert_eq!(prod.exact_div(&b).unwrap(), a);
        }
    }

    #[test]
    fn exact_div_detects_non_divisibility() {
        let p = &t(1, 1) + &LaurentPoly::one();
        assert!(LaurentPoly::one().exact_div(&p).is_none());
        assert!(t(0, 3).exact_div(&t(0, 2)).is_none());
    }
}
