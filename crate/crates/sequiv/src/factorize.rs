//! Change-of-basis decomposition for ordered bases: a legal basis change on
//! an `m`-component, genus-`g` surface has block shape `(I B; 0 S)` with `S`
//! symplectic, stabilizes the reference intersection form
//! `X = (0 0; 0 Sym)`, and factors as `D * E` with `D = (I 0; 0 S)` and `E`
//! a commuting product of elementary matrices adding a boundary class to a
//! genus class.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Validated change of basis `C = (I B; 0 S)` with `S` symplectic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChangeOfBasis {
    c: IntMatrix,
    m: usize,
    g: usize,
    b_block: IntMatrix,
    s_block: IntMatrix,
}

impl ChangeOfBasis {
    pub fn matrix(&self) -> &IntMatrix {
        &self.c
    }

    pub fn components(&self) -> usize {
        self.m
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    /// The `(m-1) x 2g` upper-right block.
    pub fn b_block(&self) -> &IntMatrix {
        &self.b_block
    }

    /// The symplectic `2g x 2g` lower-right block.
    pub fn s_block(&self) -> &IntMatrix {
        &self.s_block
    }
}

/// The reference intersection form `X = (0 0; 0 Sym)` on `m - 1 + 2g`
/// coordinates.
pub fn x_matrix(m: usize, g: usize) -> IntMatrix {
    let n = m - 1 + 2 * g;
    let mut x = IntMatrix::zeros(n, n);
    x.set_block(m - 1, m - 1, &IntMatrix::standard_sym(g));
    x
}

/// Split and validate the block structure of a candidate change of basis.
pub fn split_blocks(c: &IntMatrix, m: usize, g: usize) -> Result<ChangeOfBasis> {
    if m == 0 {
        return Err(Error::InvalidComponentCount);
    }
    let n = m - 1 + 2 * g;
    if c.rows() != n || c.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: c.rows(),
        });
    }
    let b = m - 1;
    for i in 0..b {
        for j in 0..b {
            let expect = BigInt::from(u8::from(i == j));
            if c.entry(i, j) != &expect {
                return Err(Error::NotBlockForm {
                    detail: format!("upper-left block is not the identity at ({i}, {j})"),
                });
            }
        }
    }
    for i in b..n {
        for j in 0..b {
            if !c.entry(i, j).is_zero() {
                return Err(Error::NotBlockForm {
                    detail: format!("lower-left block nonzero at ({i}, {j})"),
                });
            }
        }
    }
    let b_block = c.block(0, b, b, 2 * g);
    let s_block = c.block(b, b, 2 * g, 2 * g);
    if !s_block.is_symplectic(g)? {
        return Err(Error::SNotSymplectic);
    }
    Ok(ChangeOfBasis {
        c: c.clone(),
        m,
        g,
        b_block,
        s_block,
    })
}

/// True iff `C^t * X * C == X`.
pub fn stabilizes_x(c: &IntMatrix, m: usize, g: usize) -> Result<bool> {
    let n = m - 1 + 2 * g;
    if c.rows() != n || c.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: c.rows(),
        });
    }
    let x = x_matrix(m, g);
    Ok(x.congruence(c)? == x)
}

/// `C = D * E` with `D = (I 0; 0 S)` and `E = (I B; 0 I)`.
pub fn factor_de(cb: &ChangeOfBasis) -> (IntMatrix, IntMatrix) {
    let n = cb.m - 1 + 2 * cb.g;
    let b = cb.m - 1;
    let mut d = IntMatrix::identity(n);
    d.set_block(b, b, &cb.s_block);
    let mut e = IntMatrix::identity(n);
    e.set_block(0, b, &cb.b_block);
    debug_assert_eq!(d.mul(&e).expect("square"), *cb.matrix());
    (d, e)
}

/// One factor `(E_{i,j})^exponent`: the identity plus `exponent` in row `i`,
/// column `j + m - 1` (both 1-indexed, `1 <= i <= m-1`, `1 <= j <= 2g`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryFactor {
    pub i: usize,
    pub j: usize,
    pub exponent: BigInt,
}

impl ElementaryFactor {
    pub fn matrix(&self, m: usize, g: usize) -> IntMatrix {
        assert!(1 <= self.i && self.i < m, "boundary index out of range");
        assert!(1 <= self.j && self.j <= 2 * g, "genus index out of range");
        let n = m - 1 + 2 * g;
        let mut e = IntMatrix::identity(n);
        e.set(self.i - 1, m - 1 + self.j - 1, self.exponent.clone());
        e
    }
}

impl fmt::Display for ElementaryFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E[{},{}]^{}", self.i, self.j, self.exponent)
    }
}

/// The nonzero entries of `B` as commuting elementary factors, row-major;
/// their product in any order is `E = (I B; 0 I)`.
pub fn elementary_factorization(cb: &ChangeOfBasis) -> Vec<ElementaryFactor> {
    let mut factors = Vec::new();
    for i in 0..cb.m - 1 {
        for j in 0..2 * cb.g {
            let entry = cb.b_block.entry(i, j);
            if !entry.is_zero() {
                factors.push(ElementaryFactor {
                    i: i + 1,
                    j: j + 1,
                    exponent: entry.clone(),
                });
            }
        }
    }
    factors
}
