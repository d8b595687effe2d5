//! The ordered Seifert matrix domain model: block-structure validation and
//! extraction of pairwise linking numbers.
//!
//! An ordered Seifert matrix for an `m`-component link of genus `g` is an
//! `(m-1+2g) x (m-1+2g)` integer matrix whose first `m-1` basis elements are
//! the boundary classes of the first `m-1` components, in order, followed by
//! `2g` genus classes. The upper-left `(m-1) x (m-1)` block (the lambda
//! block) is determined by the pairwise linking numbers: it is symmetric off
//! the diagonal, and each diagonal entry is the negated row sum shifted by
//! the linking number with the last component.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Build an [`OrderedSeifertMatrix`] from literals:
/// `osm!(3, 0, [[-1, -1], [-1, -1]])`.
#[macro_export]
macro_rules! osm {
    ($m:expr, $g:expr, [$([$($x:expr),* $(,)?]),* $(,)?]) => {
        $crate::seifert::OrderedSeifertMatrix::new(
            $m,
            $g,
            $crate::matrix::IntMatrix::from_i64_rows(&[$(vec![$($x as i64),*]),*])
                .expect("well-formed matrix literal"),
        )
        .expect("consistent ordered Seifert matrix literal")
    };
}

#[derive(Clone, PartialEq, Eq)]
pub struct OrderedSeifertMatrix {
    m: usize,
    g: usize,
    matrix: IntMatrix,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ValidationMode {
    /// All ordered-structure invariants must hold.
    Strict,
    /// Only squareness is checked; used when a matrix is viewed without
    /// component data, as in classical S-equivalence.
    Classical,
}

/// Result of one validation check. Failures are data, not errors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub mode: ValidationMode,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed { "pass" } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(f, "{status}  {}", c.name)?;
            } else {
                writeln!(f, "{status}  {} ({})", c.name, c.detail)?;
            }
        }
        Ok(())
    }
}

/// Pairwise linking numbers of an `m`-component link, keyed by unordered
/// pairs `{i, j}` with `1 <= i < j <= m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkingTable {
    m: usize,
    lk: BTreeMap<(usize, usize), BigInt>,
}

impl LinkingTable {
    pub fn new(m: usize, lk: BTreeMap<(usize, usize), BigInt>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidComponentCount);
        }
        let expected = m * (m - 1) / 2;
        if lk.len() != expected {
            return Err(Error::EntryCount {
                expected,
                got: lk.len(),
            });
        }
        for &(i, j) in lk.keys() {
            if !(1 <= i && i < j && j <= m) {
                return Err(Error::Parse {
                    message: format!("linking pair ({i}, {j}) out of range for m = {m}"),
                });
            }
        }
        Ok(LinkingTable { m, lk })
    }

    pub fn components(&self) -> usize {
        self.m
    }

    /// Linking number of components `i` and `j` (1-indexed, `i != j`).
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        let key = if i < j { (i, j) } else { (j, i) };
        &self.lk[&key]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.lk.iter().map(|(&(i, j), v)| (i, j, v))
    }

    /// The unique lambda block with these pairwise linking numbers:
    /// off-diagonal entries are the linking numbers themselves and each
    /// diagonal entry makes the full row sum equal `-lk(i, m)`.
    pub fn lambda_matrix(&self) -> IntMatrix {
        let m = self.m;
        IntMatrix::from_fn(m - 1, m - 1, |i, j| {
            if i != j {
                self.get(i + 1, j + 1).clone()
            } else {
                let mut d = -self.get(i + 1, m).clone();
                for k in 0..m - 1 {
                    if k != i {
                        d -= self.get(i + 1, k + 1);
                    }
                }
                d
            }
        })
    }
}

/// Inverse of [`OrderedSeifertMatrix::linking_numbers`]: rebuild the lambda
/// block from a linking table.
pub fn lambda_from_linking(table: &LinkingTable) -> IntMatrix {
    table.lambda_matrix()
}

impl OrderedSeifertMatrix {
    /// `matrix` must be `(m-1+2g) x (m-1+2g)`; deeper structure is checked by
    /// [`validate`](Self::validate), not construction.
    pub fn new(m: usize, g: usize, matrix: IntMatrix) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidComponentCount);
        }
        let n = m - 1 + 2 * g;
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: matrix.rows(),
            });
        }
        Ok(OrderedSeifertMatrix { m, g, matrix })
    }

    pub fn components(&self) -> usize {
        self.m
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn dim(&self) -> usize {
        self.m - 1 + 2 * self.g
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.matrix
    }

    pub fn lambda_block(&self) -> IntMatrix {
        self.matrix.block(0, 0, self.m - 1, self.m - 1)
    }

    /// `M - M^t`.
    pub fn intersection_form(&self) -> IntMatrix {
        self.matrix
            .sub(&self.matrix.transpose())
            .expect("same shape")
    }

    pub fn validate(&self, mode: ValidationMode) -> ValidationReport {
        let mut checks = vec![Check {
            name: "square",
            passed: true,
            detail: format!("{0}x{0}", self.dim()),
        }];
        if mode == ValidationMode::Classical {
            return ValidationReport { mode, checks };
        }
        checks.push(Check {
            name: "size-consistency",
            passed: true,
            detail: format!("m = {}, g = {}, dim = {}", self.m, self.g, self.dim()),
        });

        let b = self.m - 1;
        let lambda_failure = (0..b)
            .flat_map(|i| (0..i).map(move |j| (i, j)))
            .find(|&(i, j)| self.matrix.entry(i, j) != self.matrix.entry(j, i));
        checks.push(match lambda_failure {
            None => Check {
                name: "lambda-symmetry",
                passed: true,
                detail: String::new(),
            },
            Some((i, j)) => Check {
                name: "lambda-symmetry",
                passed: false,
                detail: format!("entries ({i}, {j}) and ({j}, {i}) differ"),
            },
        });

        let skew = self.intersection_form();
        let boundary_failure = (0..b)
            .flat_map(|i| (0..self.dim()).map(move |j| (i, j)))
            .find(|&(i, j)| !skew.entry(i, j).is_zero());
        checks.push(match boundary_failure {
            None => Check {
                name: "boundary-rows",
                passed: true,
                detail: String::new(),
            },
            Some((i, j)) => Check {
                name: "boundary-rows",
                passed: false,
                detail: format!("intersection form nonzero at ({i}, {j})"),
            },
        });

        let genus_block = skew.block(b, b, 2 * self.g, 2 * self.g);
        let det = genus_block.det().expect("square block");
        checks.push(Check {
            name: "genus-block",
            passed: det == BigInt::one(),
            detail: format!("det = {det}"),
        });

        ValidationReport {
            mode: ValidationMode::Strict,
            checks,
        }
    }

    pub fn is_strictly_valid(&self) -> bool {
        self.validate(ValidationMode::Strict).all_passed()
    }

    pub(crate) fn require_strictly_valid(&self) -> Result<()> {
        let report = self.validate(ValidationMode::Strict);
        match report.first_failure() {
            None => Ok(()),
            Some(check) => Err(Error::InvalidMatrix {
                check: check.name.to_string(),
            }),
        }
    }

    /// Full pairwise linking table. Off-diagonal lambda entries are linking
    /// numbers directly; linking with the last component is the negated row
    /// sum of the lambda block.
    pub fn linking_numbers(&self) -> Result<LinkingTable> {
        self.require_strictly_valid()?;
        let m = self.m;
        let mut lk = BTreeMap::new();
        for i in 1..m {
            for j in i + 1..m {
                lk.insert((i, j), self.matrix.entry(i - 1, j - 1).clone());
            }
            let mut row_sum = BigInt::zero();
            for j in 0..m - 1 {
                row_sum += self.matrix.entry(i - 1, j);
            }
            lk.insert((i, m), -row_sum);
        }
        LinkingTable::new(m, lk)
    }

    /// True iff the intersection form is exactly `(0 0; 0 Sym)`.
    pub fn is_semi_symplectic(&self) -> bool {
        let mut x = IntMatrix::zeros(self.dim(), self.dim());
        x.set_block(self.m - 1, self.m - 1, &IntMatrix::standard_sym(self.g));
        self.intersection_form() == x
    }
}

impl fmt::Display for OrderedSeifertMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m = {}, g = {}\n{}", self.m, self.g, self.matrix)
    }
}

impl fmt::Debug for OrderedSeifertMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrderedSeifertMatrix({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use crate::imat;
    use rand::Rng;

    fn table(m: usize, entries: &[((usize, usize), i64)]) -> LinkingTable {
        LinkingTable::new(
            m,
            entries
                .iter()
                .map(|&(k, v)| (k, BigInt::from(v)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn counterexample_pair_validates() {
        let m0 = osm!(3, 0, [[-1, -1], [-1, -1]]);
        assert!(m0.is_strictly_valid());
        let m1 = osm!(3, 0, [[-1, 0], [0, 0]]);
        assert!(m1.is_strictly_valid());
    }

    #[test]
    fn asymmetric_lambda_fails() {
        let s = osm!(3, 0, [[0, 1], [0, 0]]);
        let report = s.validate(ValidationMode::Strict);
        assert!(!report.all_passed());
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect();
        assert!(failed.contains(&"lambda-symmetry"));
    }

    #[test]
    fn genus_one_knot_matrix_validates() {
        let s = osm!(1, 1, [[0, 1], [0, 0]]);
        assert!(s.is_strictly_valid());
    }

    #[test]
    fn classical_mode_checks_squareness_only() {
        let s = osm!(3, 0, [[0, 1], [0, 0]]);
        assert!(s.validate(ValidationMode::Classical).all_passed());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let mat = imat![[0, 1, 0], [0, 0, 0], [0, 0, 0]];
        assert!(matches!(
            OrderedSeifertMatrix::new(3, 0, mat),
            Err(Error::DimensionMismatch { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn linking_numbers_of_counterexample_pair() {
        let m0 = osm!(3, 0, [[-1, -1], [-1, -1]]);
        let t0 = m0.linking_numbers().unwrap();
        assert_eq!(t0.get(1, 2), &BigInt::from(-1));
        assert_eq!(t0.get(1, 3), &BigInt::from(2));
        assert_eq!(t0.get(2, 3), &BigInt::from(2));

        let m1 = osm!(3, 0, [[-1, 0], [0, 0]]);
        let t1 = m1.linking_numbers().unwrap();
        assert_eq!(t1.get(1, 2), &BigInt::from(0));
        assert_eq!(t1.get(1, 3), &BigInt::from(1));
        assert_eq!(t1.get(2, 3), &BigInt::from(0));
    }

    #[test]
    fn linking_numbers_of_zero_matrix() {
        let s = osm!(3, 0, [[0, 0], [0, 0]]);
        let t = s.linking_numbers().unwrap();
        assert!(t.pairs().all(|(_, _, v)| v.is_zero()));
    }

    #[test]
    fn lambda_from_linking_matches_counterexample_pair() {
        let t0 = table(3, &[((1, 2), -1), ((1, 3), 2), ((2, 3), 2)]);
        assert_eq!(lambda_from_linking(&t0), imat![[-1, -1], [-1, -1]]);

        let t1 = table(3, &[((1, 2), 0), ((1, 3), 1), ((2, 3), 0)]);
        assert_eq!(lambda_from_linking(&t1), imat![[-1, 0], [0, 0]]);

        let zero = table(3, &[((1, 2), 0), ((1, 3), 0), ((2, 3), 0)]);
        assert_eq!(lambda_from_linking(&zero), IntMatrix::zeros(2, 2));
    }

    #[test]
    fn linking_roundtrip_on_random_tables() {
        let mut rng = sample::rng(31);
        for _ in 0..200 {
            let m = rng.gen_range(1..=6);
            let mut lk = BTreeMap::new();
            for i in 1..=m {
                for j in i + 1..=m {
                    lk.insert((i, j), sample::random_int(10, &mut rng));
                }
            }
            let t = LinkingTable::new(m, lk).unwrap();
            let lambda = t.lambda_matrix();
            let s = OrderedSeifertMatrix::new(m, 0, lambda).unwrap();
            assert_eq!(s.linking_numbers().unwrap(), t);
        }
    }

    #[test]
    fn intersection_form_cases() {
        let m0 = osm!(3, 0, [[-1, -1], [-1, -1]]);
        assert_eq!(m0.intersection_form(), IntMatrix::zeros(2, 2));
        let s = osm!(1, 1, [[0, 1], [0, 0]]);
        assert_eq!(s.intersection_form(), imat![[0, 1], [-1, 0]]);
    }

    #[test]
    fn semi_symplectic_cases() {
        assert!(osm!(3, 0, [[-1, -1], [-1, -1]]).is_semi_symplectic());
        // M - M^t = -Sym here, which is not Sym.
        assert!(!osm!(1, 1, [[0, 1], [0, 0]]).is_semi_symplectic());
        assert!(osm!(1, 1, [[0, 0], [1, 0]]).is_semi_symplectic());
    }

    #[test]
    fn semi_symplectic_implies_strictly_valid() {
        let mut rng = sample::rng(32);
        for _ in 0..100 {
            let m = rng.gen_range(1..=4);
            let g = rng.gen_range(0..=2);
            let s = sample::random_valid_osm(m, g, 4, &mut rng);
            if s.is_semi_symplectic() {
                assert!(s.is_strictly_valid());
            }
        }
    }

    #[test]
    fn valid_osm_has_zero_boundary_rows() {
        let mut rng = sample::rng(33);
        for _ in 0..100 {
            let m = rng.gen_range(1..=4);
            let g = rng.gen_range(0..=3);
            let s = sample::random_valid_osm(m, g, 5, &mut rng);
            assert!(s.is_strictly_valid());
            let skew = s.intersection_form();
            for i in 0..m - 1 {
                for j in 0..s.dim() {
                    assert!(skew.entry(i, j).is_zero());
                    assert!(skew.entry(j, i).is_zero());
                }
            }
        }
    }
}
