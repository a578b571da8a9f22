//! Enumerated finite supports closed under multiplication, their translation
//! permutations, and the matrices of left and right convolution by a measure
//! carried on the support.
//!
//! Matrices index rows by output atom and columns by input atom. With
//! `α` the weights of `μ` in table order:
//!
//! * `L[j][l] = α(g_j g_l⁻¹)`, so `weights(μ ⋆ ν) = L · weights(ν)`;
//! * `R[j][k] = α(g_k⁻¹ g_j)`, so `weights(ν ⋆ μ) = R · weights(ν)`.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{ElementIndex, Group, GroupElement};
use crate::linalg::RationalMatrix;
use crate::measure::Measure;
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportTable {
    elements: Vec<GroupElement>,
    mult: Vec<Vec<usize>>,
    inv: Vec<usize>,
    abelian: bool,
}

impl SupportTable {
    /// Builds the table for a support containing the identity and closed
    /// under multiplication. The identity is moved to index 0; the other
    /// elements keep their given order.
    pub fn build(group: &Group, support: &[GroupElement]) -> Result<Self> {
        let identity = group.identity();
        let mut index = ElementIndex::new(group);
        let mut has_identity = false;
        for g in support {
            if group.equal(g, &identity)? {
                has_identity = true;
            }
        }
        if !has_identity {
            return Err(Error::IdentityMissing);
        }
        index.insert(identity.clone())?;
        for g in support {
            if !group.equal(g, &identity)? {
                index.insert(g.clone())?;
            }
        }
        let elements = index.elements().to_vec();
        let n = elements.len();
        let mut mult = vec![vec![0; n]; n];
        for (j, x) in elements.iter().enumerate() {
            for (k, y) in elements.iter().enumerate() {
                let xy = group.multiply(x, y)?;
                mult[j][k] = index.find(&xy)?.ok_or_else(|| Error::NotClosed {
                    left: x.to_string(),
                    right: y.to_string(),
                    product: xy.to_string(),
                })?;
            }
        }
        let inv = (0..n)
            .map(|k| {
                mult[k]
                    .iter()
                    .position(|&p| p == 0)
                    .expect("closed finite support is a subgroup")
            })
            .collect();
        let abelian = (0..n).all(|j| (0..n).all(|k| mult[j][k] == mult[k][j]));
        Ok(SupportTable {
            elements,
            mult,
            inv,
            abelian,
        })
    }

    /// Size `n + 1` of the support.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn product(&self, j: usize, k: usize) -> usize {
        self.mult[j][k]
    }

    pub fn inverse_index(&self, k: usize) -> usize {
        self.inv[k]
    }

    /// `S_j` with `g_j g_k = g_{S_j(k)}`.
    pub fn left_permutation(&self, j: usize) -> &[usize] {
        &self.mult[j]
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    /// Weights of `mu` in table order; `mu` must be supported in the table.
    pub fn weights_of(&self, group: &Group, mu: &Measure) -> Result<Vec<Rational>> {
        let mut index = ElementIndex::new(group);
        for g in &self.elements {
            index.insert(g.clone())?;
        }
        let mut out = vec![Rational::zero(); self.len()];
        for (g, w) in mu.atoms() {
            let i = index.find(g)?.ok_or_else(|| {
                Error::DimensionMismatch(format!("atom {g} lies outside the support table"))
            })?;
            out[i] += w;
        }
        Ok(out)
    }

    /// The measure with the given table-order weights, dropping zeros.
    pub fn measure_from_weights(&self, group: &Group, weights: &[Rational]) -> Result<Measure> {
        if weights.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for a support of size {}",
                weights.len(),
                self.len()
            )));
        }
        Measure::from_atoms(
            group,
            self.elements
                .iter()
                .zip(weights)
                .filter(|(_, w)| !w.is_zero())
                .map(|(g, w)| (g.clone(), w.clone())),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Matrix of convolution by a fixed measure on one side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorMatrix {
    pub side: Side,
    pub matrix: RationalMatrix,
}

impl OperatorMatrix {
    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_doubly_stochastic(&self) -> bool {
        let m = &self.matrix;
        let n = m.rows();
        let nonneg = (0..n).all(|i| (0..n).all(|j| !m.get(i, j).is_negative()));
        let rows = (0..n).all(|i| rational::sum(m.row(i)).is_one());
        let cols = (0..n).all(|j| rational::sum(&m.column(j)).is_one());
        nonneg && rows && cols
    }
}

fn check_alpha(alpha: &[Rational], table: &SupportTable) -> Result<()> {
    if alpha.len() != table.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} weights for a support of size {}",
            alpha.len(),
            table.len()
        )));
    }
    if alpha.iter().any(|a| a.is_negative()) || !rational::sum(alpha).is_one() {
        return Err(Error::InvalidMeasure(
            "operator weights must be nonnegative and sum to 1".into(),
        ));
    }
    Ok(())
}

/// `L[j][l] = α(g_j g_l⁻¹)`.
pub fn left_operator(alpha: &[Rational], table: &SupportTable) -> Result<OperatorMatrix> {
    check_alpha(alpha, table)?;
    let n = table.len();
    let mut matrix = RationalMatrix::zeros(n, n);
    for j in 0..n {
        for l in 0..n {
            matrix.set(
                j,
                l,
                alpha[table.product(j, table.inverse_index(l))].clone(),
            );
        }
    }
    Ok(OperatorMatrix {
        side: Side::Left,
        matrix,
    })
}

/// `R[j][k] = α(g_k⁻¹ g_j)`.
pub fn right_operator(alpha: &[Rational], table: &SupportTable) -> Result<OperatorMatrix> {
    check_alpha(alpha, table)?;
    let n = table.len();
    let mut matrix = RationalMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            matrix.set(
                j,
                k,
                alpha[table.product(table.inverse_index(k), j)].clone(),
            );
        }
    }
    Ok(OperatorMatrix {
        side: Side::Right,
        matrix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builtin;
    use crate::linalg::mat_mul;
    use crate::rational::frac;

    fn c(i: u32) -> GroupElement {
        GroupElement::Cayley(i)
    }

    #[test]
    fn z4_subgroup_table() {
        let z4 = builtin::z4();
        let t = SupportTable::build(&z4, &[c(0), c(2)]).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.left_permutation(0), &[0, 1]);
        assert_eq!(t.left_permutation(1), &[1, 0]);
        assert_eq!(t.inverse_index(1), 1);
    }

    #[test]
    fn trivial_table() {
        let z4 = builtin::z4();
        let t = SupportTable::build(&z4, &[c(0)]).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.product(0, 0), 0);
    }

    #[test]
    fn build_errors() {
        let z4 = builtin::z4();
        assert_eq!(
            SupportTable::build(&z4, &[c(1), c(2)]),
            Err(Error::IdentityMissing)
        );
        assert_eq!(
            SupportTable::build(&z4, &[c(0), c(1)]),
            Err(Error::NotClosed {
                left: "1".into(),
                right: "1".into(),
                product: "2".into()
            })
        );
    }

    #[test]
    fn identity_moves_to_front() {
        let z4 = builtin::z4();
        let t = SupportTable::build(&z4, &[c(2), c(0)]).unwrap();
        assert_eq!(t.elements(), &[c(0), c(2)]);
    }

    #[test]
    fn s3_translations_do_not_commute() {
        let s3 = builtin::s3();
        let all = s3.elements(10).unwrap();
        let t = SupportTable::build(&s3, &all).unwrap();
        assert_eq!(t.len(), 6);
        assert!(!t.is_abelian());
        let compose =
            |a: &[usize], b: &[usize]| -> Vec<usize> { (0..6).map(|k| a[b[k]]).collect() };
        let found = (0..6).any(|j| {
            (0..6).any(|k| {
                compose(t.left_permutation(j), t.left_permutation(k))
                    != compose(t.left_permutation(k), t.left_permutation(j))
            })
        });
        assert!(found);
        for j in 0..6 {
            let mut sorted = t.left_permutation(j).to_vec();
            sorted.sort();
            assert_eq!(sorted, (0..6).collect::<Vec<_>>());
        }
        assert_eq!(t.left_permutation(0), &[0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn z2_operator_examples() {
        let z2 = builtin::z2();
        let t = SupportTable::build(&z2, &[c(0), c(1)]).unwrap();
        let half = left_operator(&[frac(1, 2), frac(1, 2)], &t).unwrap();
        assert_eq!(
            half.matrix,
            RationalMatrix::from_rows(vec![
                vec![frac(1, 2), frac(1, 2)],
                vec![frac(1, 2), frac(1, 2)]
            ])
            .unwrap()
        );
        let skew = left_operator(&[frac(3, 4), frac(1, 4)], &t).unwrap();
        assert_eq!(
            skew.matrix,
            RationalMatrix::from_rows(vec![
                vec![frac(3, 4), frac(1, 4)],
                vec![frac(1, 4), frac(3, 4)]
            ])
            .unwrap()
        );
        assert!(skew.is_doubly_stochastic());
        let right = right_operator(&[frac(3, 4), frac(1, 4)], &t).unwrap();
        assert_eq!(right.matrix, skew.matrix);
        assert_eq!(right.side, Side::Right);
    }

    #[test]
    fn dirac_identity_gives_identity_matrices() {
        let d4 = builtin::d4();
        let all = d4.elements(10).unwrap();
        let t = SupportTable::build(&d4, &all).unwrap();
        let mut alpha = vec![frac(0, 1); 8];
        alpha[0] = frac(1, 1);
        assert_eq!(
            left_operator(&alpha, &t).unwrap().matrix,
            RationalMatrix::identity(8)
        );
        assert_eq!(
            right_operator(&alpha, &t).unwrap().matrix,
            RationalMatrix::identity(8)
        );
    }

    #[test]
    fn s3_left_and_right_differ() {
        let s3 = builtin::s3();
        let all = s3.elements(10).unwrap();
        let t = SupportTable::build(&s3, &all).unwrap();
        // Half on e and half on the transposition (0 1), index 1.
        let mut alpha = vec![frac(0, 1); 6];
        alpha[0] = frac(1, 2);
        alpha[1] = frac(1, 2);
        let l = left_operator(&alpha, &t).unwrap();
        let r = right_operator(&alpha, &t).unwrap();
        assert_ne!(l.matrix, r.matrix);
        assert_eq!(
            mat_mul(&l.matrix, &r.matrix).unwrap(),
            mat_mul(&r.matrix, &l.matrix).unwrap()
        );
    }

    #[test]
    fn operator_errors() {
        let z2 = builtin::z2();
        let t = SupportTable::build(&z2, &[c(0), c(1)]).unwrap();
        assert!(matches!(
            left_operator(&[frac(1, 1)], &t),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(right_operator(&[frac(1, 2), frac(1, 4)], &t).is_err());
    }
}
