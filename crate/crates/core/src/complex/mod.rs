//! Chain complexes of based F2 vector spaces.
//!
//! Grade 0 is always the rightmost space. A complex with top grade `t` has
//! boundary maps `∂_j : C_j → C_{j-1}` for `1 ≤ j ≤ t`, each stored as a
//! `dim C_{j-1} × dim C_j` matrix. Boundaries outside that range are zero maps.

mod builders;
mod tanner;

pub use builders::{
    group_symmetric_ldpc_complex, random_ldpc_complex, repetition_complex, steane_complex,
    surface_complex, LdpcShape, Topology, MAX_SAMPLING_ATTEMPTS,
};
pub use tanner::{CheckNode, TannerEdge, TannerGraph};

use thiserror::Error;

use crate::gf2::{EchelonBasis, Gf2Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("boundary ∂_{grade} has shape {got:?}, expected {expected:?}")]
    ShapeMismatch {
        grade: usize,
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("a complex needs at least one grade")]
    Empty,
    #[error("∂∂ ≠ 0 at grade pairs {pairs:?}")]
    NotAComplex { pairs: Vec<(usize, usize)> },
    #[error("grade {grade} out of range 0..={top}")]
    GradeOutOfRange { grade: usize, top: usize },
    #[error("label table does not match grade dimensions")]
    LabelMismatch,
    #[error("invalid builder parameter: {0}")]
    InvalidParameter(String),
    #[error("no sample accepted after {attempts} attempts")]
    SamplingBudgetExhausted { attempts: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    dims: Vec<usize>,
    boundaries: Vec<Gf2Matrix>,
    labels: Option<Vec<Vec<String>>>,
}

/// Dimensions of cycles, boundaries and homology at one grade.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyReport {
    pub grade: usize,
    pub dim_cycles: usize,
    pub dim_boundaries: usize,
    pub dim_homology: usize,
    /// Rows are cycles representing linearly independent homology classes.
    pub representatives: Option<Gf2Matrix>,
}

impl ChainComplex {
    /// Builds a complex from grade dimensions and boundaries, both listed
    /// from grade 0 upwards (`boundaries[j - 1]` is `∂_j`). Shapes are
    /// checked here; `∂∂ = 0` is checked by [`ChainComplex::validate`].
    pub fn new(dims: Vec<usize>, boundaries: Vec<Gf2Matrix>) -> Result<Self, ComplexError> {
        if dims.is_empty() {
            return Err(ComplexError::Empty);
        }
        if boundaries.len() + 1 != dims.len() {
            return Err(ComplexError::InvalidParameter(format!(
                "{} grades need {} boundaries, got {}",
                dims.len(),
                dims.len() - 1,
                boundaries.len()
            )));
        }
        for (i, b) in boundaries.iter().enumerate() {
            let grade = i + 1;
            let expected = (dims[grade - 1], dims[grade]);
            if b.shape() != expected {
                return Err(ComplexError::ShapeMismatch {
                    grade,
                    expected,
                    got: b.shape(),
                });
            }
        }
        Ok(Self {
            dims,
            boundaries,
            labels: None,
        })
    }

    /// Builds a complex from `[∂_1, ∂_2, ...]`, reading dimensions off the shapes.
    pub fn from_boundaries(boundaries: Vec<Gf2Matrix>) -> Result<Self, ComplexError> {
        let Some(first) = boundaries.first() else {
            return Err(ComplexError::Empty);
        };
        let mut dims = vec![first.rows()];
        dims.extend(boundaries.iter().map(Gf2Matrix::cols));
        Self::new(dims, boundaries)
    }

    /// Two-term complex `C_1 --H--> C_0` of a classical code.
    pub fn from_parity_check(h: Gf2Matrix) -> Self {
        Self::from_boundaries(vec![h]).expect("single boundary always chains")
    }

    /// Three-term complex `C_2 --H_Zᵀ--> C_1 --H_X--> C_0` of a CSS code.
    pub fn from_css(h_x: &Gf2Matrix, h_z: &Gf2Matrix) -> Result<Self, ComplexError> {
        Self::from_boundaries(vec![h_x.clone(), h_z.transpose()])
    }

    /// Attaches per-grade basis labels, listed from grade 0 upwards.
    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self, ComplexError> {
        if labels.len() != self.dims.len()
            || labels.iter().zip(&self.dims).any(|(l, &d)| l.len() != d)
        {
            return Err(ComplexError::LabelMismatch);
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    pub fn labels(&self) -> Option<&[Vec<String>]> {
        self.labels.as_deref()
    }

    pub fn label(&self, grade: usize, index: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[grade][index].as_str())
    }

    #[inline]
    pub fn top_grade(&self) -> usize {
        self.dims.len() - 1
    }

    /// Number of grades (a classical code is a 2-term complex).
    #[inline]
    pub fn num_terms(&self) -> usize {
        self.dims.len()
    }

    /// `dim C_grade`, zero outside the stored range.
    #[inline]
    pub fn dim(&self, grade: usize) -> usize {
        self.dims.get(grade).copied().unwrap_or(0)
    }

    /// Grade dimensions from grade 0 upwards.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Grade dimensions listed top grade first.
    pub fn dims_top_first(&self) -> Vec<usize> {
        self.dims.iter().rev().copied().collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `∂_grade`, or `None` when it is a zero map off the ends of the complex.
    pub fn boundary(&self, grade: usize) -> Option<&Gf2Matrix> {
        if grade == 0 {
            None
        } else {
            self.boundaries.get(grade - 1)
        }
    }

    /// `∂_grade` as a matrix, including the empty maps at both ends.
    pub fn boundary_or_zero(&self, grade: usize) -> Gf2Matrix {
        match self.boundary(grade) {
            Some(b) => b.clone(),
            None if grade == 0 => Gf2Matrix::zeros(0, self.dim(0)),
            None => Gf2Matrix::zeros(self.dim(grade - 1), self.dim(grade)),
        }
    }

    pub fn boundaries(&self) -> &[Gf2Matrix] {
        &self.boundaries
    }

    fn check_grade(&self, grade: usize) -> Result<(), ComplexError> {
        if grade > self.top_grade() {
            Err(ComplexError::GradeOutOfRange {
                grade,
                top: self.top_grade(),
            })
        } else {
            Ok(())
        }
    }

    /// Checks `∂_j ∂_{j+1} = 0` for every consecutive pair, reporting every
    /// offending `(j + 1, j)`.
    pub fn validate(&self) -> Result<(), ComplexError> {
        let mut pairs = Vec::new();
        for j in 1..self.top_grade() {
            let lower = &self.boundaries[j - 1];
            let upper = &self.boundaries[j];
            let composed = lower.multiply(upper).map_err(|_| ComplexError::ShapeMismatch {
                grade: j + 1,
                expected: (lower.cols(), upper.cols()),
                got: upper.shape(),
            })?;
            if !composed.is_zero() {
                pairs.push((j + 1, j));
            }
        }
        if pairs.is_empty() {
            Ok(())
        } else {
            Err(ComplexError::NotAComplex { pairs })
        }
    }

    /// Rank of `∂_grade`, zero for the maps off the ends.
    pub fn boundary_rank(&self, grade: usize) -> usize {
        self.boundary(grade).map_or(0, Gf2Matrix::rank)
    }

    /// Homology at `grade` by rank–nullity; with `with_representatives`, also
    /// a basis of cycles completing the boundaries.
    pub fn homology(
        &self,
        grade: usize,
        with_representatives: bool,
    ) -> Result<HomologyReport, ComplexError> {
        self.check_grade(grade)?;
        let dim_cycles = self.dim(grade) - self.boundary_rank(grade);
        let dim_boundaries = self.boundary_rank(grade + 1);
        let representatives = with_representatives.then(|| self.homology_representatives(grade));
        Ok(HomologyReport {
            grade,
            dim_cycles,
            dim_boundaries,
            dim_homology: dim_cycles - dim_boundaries,
            representatives,
        })
    }

    /// Basis of `im ∂_{grade+1}` as an echelon basis over `C_grade`.
    pub fn boundary_space(&self, grade: usize) -> EchelonBasis {
        match self.boundary(grade + 1) {
            Some(b) => EchelonBasis::from_matrix_rows(&b.transpose()),
            None => EchelonBasis::new(self.dim(grade)),
        }
    }

    /// Basis of `ker ∂_grade`, one cycle per row.
    pub fn cycle_basis(&self, grade: usize) -> Gf2Matrix {
        match self.boundary(grade) {
            Some(b) => b.kernel_basis(),
            None => Gf2Matrix::identity(self.dim(grade)),
        }
    }

    fn homology_representatives(&self, grade: usize) -> Gf2Matrix {
        let mut span = self.boundary_space(grade);
        let cycles = self.cycle_basis(grade);
        let reps: Vec<_> = (0..cycles.rows())
            .map(|r| cycles.row(r))
            .filter(|z| span.insert(z))
            .collect();
        Gf2Matrix::from_bitvec_rows(self.dim(grade), &reps)
    }

    /// The dual complex: every boundary transposed and the grading reversed,
    /// so grade `i` here becomes grade `top - i` there.
    pub fn transpose(&self) -> ChainComplex {
        let top = self.top_grade();
        let dims = self.dims.iter().rev().copied().collect();
        let boundaries = (1..=top)
            .map(|j| self.boundaries[top - j].transpose())
            .collect();
        let labels = self
            .labels
            .as_ref()
            .map(|l| l.iter().rev().cloned().collect());
        ChainComplex {
            dims,
            boundaries,
            labels,
        }
    }

    /// Cohomology at `grade`, computed as homology of the dual complex.
    pub fn cohomology(&self, grade: usize) -> Result<HomologyReport, ComplexError> {
        self.check_grade(grade)?;
        let mut report = self.transpose().homology(self.top_grade() - grade, false)?;
        report.grade = grade;
        Ok(report)
    }

    pub fn tanner_graph(&self, qubit_grade: usize) -> Result<TannerGraph, ComplexError> {
        self.check_grade(qubit_grade)?;
        Ok(TannerGraph::from_complex(self, qubit_grade))
    }
}
