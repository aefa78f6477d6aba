//! Products of chain complexes: tensor (total complex of the double
//! complex), balanced over a free cyclic action, and fiber bundles twisted
//! by a connection.
//!
//! Every product carries a [`ProductBasis`] that records, for each basis
//! element of the result, the pair of factor basis elements it came from.
//! Within grade `n` the summands `C_p ⊗ D_q` appear in order of decreasing
//! `p`, and each summand is laid out left index major, right index minor.

mod action;
mod balanced;

pub use action::{ComplexAutomorphism, Connection, GroupAction, Orbits, Permutation};
pub use balanced::{
    balanced_kunneth_dim, balanced_product, derive_connection, fiber_bundle_product,
    quotient_complex,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{ChainComplex, ComplexError};
use crate::gf2::Gf2Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProductError {
    #[error("input complex is invalid: {0}")]
    InvalidInput(#[from] ComplexError),
    #[error("not a permutation: {0:?}")]
    InvalidPermutation(Vec<usize>),
    #[error("invalid group action: {0}")]
    InvalidAction(String),
    #[error("action has grade sizes {got:?}, complex has {expected:?}")]
    ActionShape {
        expected: Vec<usize>,
        got: Vec<usize>,
    },
    #[error("action does not commute with ∂_{grade}")]
    NonCommuting { grade: usize },
    #[error("action is not free on grade {grade}")]
    NotFree { grade: usize },
    #[error("group orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("base complex must have 2 terms, got {terms}")]
    BaseNotTwoTerm { terms: usize },
    #[error("connection has no automorphism for incidence ({b1}, {b0})")]
    ConnectionMissing { b1: usize, b0: usize },
    #[error("connection has an entry for ({b1}, {b0}), which is not a base incidence")]
    ConnectionExtra { b1: usize, b0: usize },
    #[error("connection automorphism at ({b1}, {b0}) is invalid: {reason}")]
    ConnectionInvalid {
        b1: usize,
        b0: usize,
        reason: String,
    },
    #[error("orbit of {b1} meets orbit of {b0} more than once; no permutation connection exists")]
    MultipleIncidences { b1: usize, b0: usize },
    #[error("grade {grade} out of range 0..={top}")]
    GradeOutOfRange { grade: usize, top: usize },
    #[error("balanced Künneth formula needs an odd group order, got {order}")]
    FormulaInapplicable { order: usize },
}

/// One basis element of a product: `left ⊗ right` in summand `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProductBasisIndex {
    pub p: usize,
    pub q: usize,
    pub left: usize,
    pub right: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProductKind {
    Tensor,
    /// Orbits of `left ⊗ right` under the diagonal action; each element is
    /// named by its orbit's smallest member.
    Balanced { order: usize },
    /// Left factor is the base, right factor the fiber.
    FiberBundle,
}

/// Provenance of every basis element of a product complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductBasis {
    pub kind: ProductKind,
    /// Grade sizes of the factors, grade 0 first.
    pub left_dims: Vec<usize>,
    pub right_dims: Vec<usize>,
    /// `grades[n][i]` describes basis element `i` of grade `n`.
    pub grades: Vec<Vec<ProductBasisIndex>>,
}

impl ProductBasis {
    pub fn get(&self, grade: usize, index: usize) -> Option<&ProductBasisIndex> {
        self.grades.get(grade)?.get(index)
    }

    pub fn grade(&self, grade: usize) -> &[ProductBasisIndex] {
        self.grades.get(grade).map_or(&[], Vec::as_slice)
    }
}

/// A product complex together with its basis table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Product {
    pub complex: ChainComplex,
    pub basis: ProductBasis,
}

/// Start of summand `(p, n - p)` inside grade `n`, for every `p`.
struct SummandOffsets {
    /// `offsets[n][p]`, `None` if the summand is absent.
    offsets: Vec<Vec<Option<usize>>>,
    dims: Vec<usize>,
}

impl SummandOffsets {
    fn new(left: &[usize], right: &[usize]) -> Self {
        let top = left.len() + right.len() - 2;
        let mut offsets = Vec::with_capacity(top + 1);
        let mut dims = Vec::with_capacity(top + 1);
        for n in 0..=top {
            let mut row = vec![None; left.len()];
            let mut acc = 0;
            for p in (0..left.len()).rev() {
                if n >= p && n - p < right.len() {
                    row[p] = Some(acc);
                    acc += left[p] * right[n - p];
                }
            }
            offsets.push(row);
            dims.push(acc);
        }
        Self { offsets, dims }
    }

    #[inline]
    fn get(&self, n: usize, p: usize) -> usize {
        self.offsets[n][p].expect("summand present")
    }

    fn summands(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.offsets[n].len())
            .rev()
            .filter(move |&p| self.offsets[n][p].is_some())
    }
}

/// Total complex of `left ⊠ right`. `twist(p, hi, lo, q, r)` gives the right
/// index that `hi ⊗ r` lands on in the `lo ⊗ ·` term of `∂^left ⊗ id`; the
/// plain tensor product returns `r`.
fn assemble(
    left: &ChainComplex,
    right: &ChainComplex,
    kind: ProductKind,
    twist: impl Fn(usize, usize, usize, usize, usize) -> usize,
) -> Product {
    let (ld, rd) = (left.dims(), right.dims());
    let offs = SummandOffsets::new(ld, rd);
    let top = offs.dims.len() - 1;
    // Column supports of every factor boundary.
    let left_cols: Vec<Gf2Matrix> = left.boundaries().iter().map(Gf2Matrix::transpose).collect();
    let right_cols: Vec<Gf2Matrix> = right.boundaries().iter().map(Gf2Matrix::transpose).collect();

    let mut boundaries = Vec::with_capacity(top);
    for n in 1..=top {
        let mut b = Gf2Matrix::zeros(offs.dims[n - 1], offs.dims[n]);
        for p in offs.summands(n) {
            let q = n - p;
            let col0 = offs.get(n, p);
            for a in 0..ld[p] {
                for r in 0..rd[q] {
                    let col = col0 + a * rd[q] + r;
                    if p > 0 {
                        let row0 = offs.get(n - 1, p - 1);
                        for lo in left_cols[p - 1].row_ones(a) {
                            let r2 = twist(p, a, lo, q, r);
                            b.flip(row0 + lo * rd[q] + r2, col);
                        }
                    }
                    if q > 0 {
                        let row0 = offs.get(n - 1, p);
                        for lo in right_cols[q - 1].row_ones(r) {
                            b.flip(row0 + a * rd[q - 1] + lo, col);
                        }
                    }
                }
            }
        }
        boundaries.push(b);
    }

    let mut grades = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut g = Vec::with_capacity(offs.dims[n]);
        for p in offs.summands(n) {
            let q = n - p;
            for left in 0..ld[p] {
                for right in 0..rd[q] {
                    g.push(ProductBasisIndex { p, q, left, right });
                }
            }
        }
        grades.push(g);
    }

    let mut complex =
        ChainComplex::new(offs.dims.clone(), boundaries).expect("product shapes chain");
    if let (Some(ll), Some(rl)) = (left.labels(), right.labels()) {
        let labels = grades
            .iter()
            .map(|g| {
                g.iter()
                    .map(|e| format!("{}⊗{}", ll[e.p][e.left], rl[e.q][e.right]))
                    .collect()
            })
            .collect();
        complex = complex.with_labels(labels).expect("labels match dims");
    }
    Product {
        complex,
        basis: ProductBasis {
            kind,
            left_dims: ld.to_vec(),
            right_dims: rd.to_vec(),
            grades,
        },
    }
}

/// Tensor product `Tot(C ⊠ D)` with `∂ = ∂^C ⊗ id + id ⊗ ∂^D`.
pub fn tensor_product(c: &ChainComplex, d: &ChainComplex) -> Result<Product, ProductError> {
    c.validate()?;
    d.validate()?;
    Ok(assemble(c, d, ProductKind::Tensor, |_, _, _, _, r| r))
}

/// `Σ_{p+q=n} dim H_p(C) · dim H_q(D)`.
pub fn kunneth_homology_dim(
    c: &ChainComplex,
    d: &ChainComplex,
    n: usize,
) -> Result<usize, ProductError> {
    let top = c.top_grade() + d.top_grade();
    if n > top {
        return Err(ProductError::GradeOutOfRange { grade: n, top });
    }
    c.validate()?;
    d.validate()?;
    let mut total = 0;
    for p in 0..=c.top_grade().min(n) {
        let q = n - p;
        if q > d.top_grade() {
            continue;
        }
        total += c.homology(p, false)?.dim_homology * d.homology(q, false)?.dim_homology;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{
        random_ldpc_complex, repetition_complex, steane_complex, surface_complex, LdpcShape,
        Topology,
    };

    fn unit() -> ChainComplex {
        ChainComplex::new(vec![1], vec![]).unwrap()
    }

    #[test]
    fn three_d_surface_dims() {
        for l in 2..=5 {
            let e = tensor_product(
                &repetition_complex(l, Topology::Cyclic).unwrap(),
                &surface_complex(l).unwrap(),
            )
            .unwrap()
            .complex;
            e.validate().unwrap();
            let n = l * (l * l - l) + l * (2 * (l * l - l) + 1);
            assert_eq!(e.dim(1), n);
            assert_eq!(n, 3 * l * (l * l - l) + l);
            assert_eq!(e.homology(1, false).unwrap().dim_homology, 1);
        }
    }

    #[test]
    fn unit_complex_is_neutral() {
        let s = surface_complex(3).unwrap().without_labels();
        assert_eq!(tensor_product(&unit(), &s).unwrap().complex, s);
        assert_eq!(tensor_product(&s, &unit()).unwrap().complex, s);
    }

    #[test]
    fn summand_order_is_decreasing_p() {
        let c = repetition_complex(2, Topology::Open).unwrap();
        let d = repetition_complex(3, Topology::Open).unwrap();
        let prod = tensor_product(&c, &d).unwrap();
        let g1 = prod.basis.grade(1);
        assert_eq!(g1.len(), 2 * 2 + 3);
        assert_eq!((g1[0].p, g1[0].q), (1, 0));
        assert_eq!((g1[0].left, g1[0].right), (0, 0));
        assert_eq!((g1[1].left, g1[1].right), (0, 1));
        assert_eq!((g1[4].p, g1[4].q), (0, 1));
        assert_eq!(prod.complex.label(1, 0), Some("b0⊗c0"));
    }

    #[test]
    fn kunneth_on_seeded_pairs() {
        let shape = LdpcShape::new(4, 7, 4, 3);
        for seed in 0..6 {
            let a = random_ldpc_complex(&shape, 3 + (seed as usize % 2), seed).unwrap();
            let b = steane_complex();
            let e = tensor_product(&a, &b).unwrap().complex;
            for n in 0..=e.top_grade() {
                assert_eq!(
                    kunneth_homology_dim(&a, &b, n).unwrap(),
                    e.homology(n, false).unwrap().dim_homology
                );
            }
        }
        assert!(kunneth_homology_dim(&steane_complex(), &steane_complex(), 5).is_err());
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        let h = Gf2Matrix::from_rows(&[[1, 1]]);
        let bad = ChainComplex::from_boundaries(vec![h.clone(), Gf2Matrix::from_rows(&[[1], [0]])])
            .unwrap();
        assert!(matches!(
            tensor_product(&bad, &unit()),
            Err(ProductError::InvalidInput(ComplexError::NotAComplex { .. }))
        ));
    }
}
