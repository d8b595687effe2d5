//! Equivalence invariants of ordered Seifert matrices: the pairwise linking
//! table, the Conway polynomial, the signature, and the determinant, bundled
//! into a fingerprint with a canonical byte serialization.
//!
//! Convention: the Conway polynomial is `det(t*M - t^-1*M^t)` rewritten in
//! `z = t - t^-1`. Any consistent convention is constant on strong
//! equivalence classes; this one is fixed for the whole crate.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::laurent::{laurent_det, LaurentPoly};
use crate::matrix::IntMatrix;
use crate::seifert::{LinkingTable, OrderedSeifertMatrix};

/// All four invariants of one matrix. Stable under every strong move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantFingerprint {
    pub linking: LinkingTable,
    /// Conway coefficients, low degree to high; empty means the zero
    /// polynomial.
    pub conway: Vec<BigInt>,
    pub signature: i64,
    pub determinant: BigInt,
}

/// `det(t*M - t^-1*M^t)` rewritten in `z`, for a bare square matrix.
pub fn conway_of_matrix(m: &IntMatrix) -> Result<Vec<BigInt>> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let t = LaurentPoly::term(1, 1);
    let t_inv = LaurentPoly::term(-1, 1);
    let mut entries = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let a = &t * &LaurentPoly::constant(m.entry(i, j).clone());
            let b = &t_inv * &LaurentPoly::constant(m.entry(j, i).clone());
            row.push(&a - &b);
        }
        entries.push(row);
    }
    laurent_to_z(&laurent_det(&entries)?)
}

/// Rewrite a Laurent polynomial as a polynomial in `z = t - t^-1` by the
/// top-degree coefficient recurrence: the `t^d` coefficient of `z^d` is 1,
/// so the leading z-coefficient can be read off and subtracted, strictly
/// lowering the top degree. A nonzero final remainder means the input is not
/// expressible in `z`.
pub fn laurent_to_z(f: &LaurentPoly) -> Result<Vec<BigInt>> {
    let z = LaurentPoly::z();
    let mut rem = f.clone();
    let mut coeffs: Vec<BigInt> = Vec::new();
    let mut z_pow_cache: Vec<LaurentPoly> = vec![LaurentPoly::one()];
    while !rem.is_zero() {
        let d = rem.max_exp().expect("nonzero");
        if d < 0 {
            return Err(Error::NotAConwayPolynomial);
        }
        let d = d as usize;
        while z_pow_cache.len() <= d {
            let next = &z_pow_cache[z_pow_cache.len() - 1] * &z;
            z_pow_cache.push(next);
        }
        let c = rem.coeff(d as i64);
        if coeffs.len() <= d {
            coeffs.resize(d + 1, BigInt::zero());
        }
        coeffs[d] = c.clone();
        rem = &rem - &(&z_pow_cache[d] * &LaurentPoly::constant(c));
        if let Some(new_top) = rem.max_exp() {
            debug_assert!(new_top < d as i64);
        }
    }
    Ok(coeffs)
}

/// Signature of the symmetrized form `M + M^t` of a bare square matrix.
pub fn signature_of_matrix(m: &IntMatrix) -> Result<i64> {
    m.add(&m.transpose())?.signature()
}

/// `|det(M + M^t)|` of a bare square matrix.
pub fn determinant_of_matrix(m: &IntMatrix) -> Result<BigInt> {
    Ok(m.add(&m.transpose())?.det()?.abs())
}

pub fn conway(s: &OrderedSeifertMatrix) -> Result<Vec<BigInt>> {
    conway_of_matrix(s.matrix())
}

pub fn signature_invariant(s: &OrderedSeifertMatrix) -> i64 {
    signature_of_matrix(s.matrix()).expect("square by construction")
}

pub fn determinant_invariant(s: &OrderedSeifertMatrix) -> BigInt {
    determinant_of_matrix(s.matrix()).expect("square by construction")
}

/// All four invariants; requires strict validation.
pub fn fingerprint(s: &OrderedSeifertMatrix) -> Result<InvariantFingerprint> {
    s.require_strictly_valid()?;
    Ok(InvariantFingerprint {
        linking: s.linking_numbers()?,
        conway: conway(s)?,
        signature: signature_invariant(s),
        determinant: determinant_invariant(s),
    })
}

impl InvariantFingerprint {
    /// Canonical byte serialization: component count, sorted linking pairs,
    /// Conway coefficients low-to-high, signature, determinant. Equal
    /// fingerprints have equal bytes; used as a hash/comparison key and as
    /// the machine-readable fingerprint rendering.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = format!("m={};lk=", self.linking.components());
        for (i, j, v) in self.linking.pairs() {
            out.push_str(&format!("{i},{j}:{v};"));
        }
        out.push_str(";cw=");
        for (k, c) in self.conway.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            out.push_str(&c.to_string());
        }
        out.push_str(&format!(";sg={};dt={}", self.signature, self.determinant));
        out.into_bytes()
    }

    pub fn conway_string(&self) -> String {
        render_z_poly(&self.conway)
    }
}

/// Render z-coefficients (low-to-high) as a readable polynomial.
pub fn render_z_poly(coeffs: &[BigInt]) -> String {
    if coeffs.iter().all(|c| c.is_zero()) {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let body = match k {
            0 => format!("{mag}"),
            1 if mag.is_one() => "z".to_string(),
            1 => format!("{mag}*z"),
            _ if mag.is_one() => format!("z^{k}"),
            _ => format!("{mag}*z^{k}"),
        };
        if parts.is_empty() {
            parts.push(if c.is_negative() {
                format!("-{body}")
            } else {
                body
            });
        } else {
            parts.push(format!("{} {body}", if c.is_negative() { "-" } else { "+" }));
        }
    }
    parts.join(" ")
}

/// Which fingerprint parts differ between two matrices with the same
/// component count. An empty report does not prove equivalence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinguishReport {
    pub differing: Vec<&'static str>,
    pub left: InvariantFingerprint,
    pub right: InvariantFingerprint,
}

impl DistinguishReport {
    pub fn is_empty(&self) -> bool {
        self.differing.is_empty()
    }
}

impl fmt::Display for DistinguishReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "not distinguished by any invariant")
        } else {
            write!(f, "differs in: {}", self.differing.join(", "))
        }
    }
}

pub fn distinguishes(
    s1: &OrderedSeifertMatrix,
    s2: &OrderedSeifertMatrix,
) -> Result<DistinguishReport> {
    if s1.components() != s2.components() {
        return Err(Error::ComponentCountMismatch {
            left: s1.components(),
            right: s2.components(),
        });
    }
    let left = fingerprint(s1)?;
    let right = fingerprint(s2)?;
    let differing = differing_parts(&left, &right);
    Ok(DistinguishReport {
        differing,
        left,
        right,
    })
}

pub(crate) fn differing_parts(
    left: &InvariantFingerprint,
    right: &InvariantFingerprint,
) -> Vec<&'static str> {
    let mut differing = Vec::new();
    if left.linking != right.linking {
        differing.push("linking");
    }
    if left.conway != right.conway {
        differing.push("conway");
    }
    if left.signature != right.signature {
        differing.push("signature");
    }
    if left.determinant != right.determinant {
        differing.push("determinant");
    }
    differing
}
