//! CSS codes read off one grade of a chain complex.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::ChainComplex;
use crate::distance::DistanceResult;
use crate::gf2::Gf2Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CssError {
    #[error("qubit grade {grade} out of range 0..={top}")]
    InvalidGrade { grade: usize, top: usize },
    #[error("H_X and H_Z have {x} and {z} columns")]
    ColumnMismatch { x: usize, z: usize },
    #[error("H_X · H_Zᵀ ≠ 0 ({nonzero} nonzero entries)")]
    NotCommuting { nonzero: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub source: String,
    pub qubit_grade: usize,
}

/// `h_x = ∂_g` and `h_z = ∂_{g+1}ᵀ` for qubits at grade `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CssCode {
    pub h_x: Gf2Matrix,
    pub h_z: Gf2Matrix,
    pub n: usize,
    pub provenance: Option<Provenance>,
}

impl CssCode {
    pub fn new(h_x: Gf2Matrix, h_z: Gf2Matrix) -> Result<Self, CssError> {
        if h_x.cols() != h_z.cols() {
            return Err(CssError::ColumnMismatch {
                x: h_x.cols(),
                z: h_z.cols(),
            });
        }
        let overlap = h_x.multiply(&h_z.transpose()).expect("columns agree");
        if !overlap.is_zero() {
            return Err(CssError::NotCommuting {
                nonzero: overlap.nnz(),
            });
        }
        Ok(Self {
            n: h_x.cols(),
            h_x,
            h_z,
            provenance: None,
        })
    }

    pub fn with_provenance(mut self, source: impl Into<String>, qubit_grade: usize) -> Self {
        self.provenance = Some(Provenance {
            source: source.into(),
            qubit_grade,
        });
        self
    }

    /// The 3-term complex `F2^{mz} --H_Zᵀ--> F2^n --H_X--> F2^{mx}`.
    pub fn to_complex(&self) -> ChainComplex {
        ChainComplex::from_css(&self.h_x, &self.h_z).expect("shapes chain")
    }
}

/// CSS code with qubits on `qubit_grade`. A check matrix is empty (zero
/// rows) when the neighboring grade does not exist.
pub fn css_from_complex(e: &ChainComplex, qubit_grade: usize) -> Result<CssCode, CssError> {
    if qubit_grade > e.top_grade() {
        return Err(CssError::InvalidGrade {
            grade: qubit_grade,
            top: e.top_grade(),
        });
    }
    let n = e.dim(qubit_grade);
    let h_x = e
        .boundary(qubit_grade)
        .cloned()
        .unwrap_or_else(|| Gf2Matrix::zeros(0, n));
    let h_z = e
        .boundary(qubit_grade + 1)
        .map(Gf2Matrix::transpose)
        .unwrap_or_else(|| Gf2Matrix::zeros(0, n));
    Ok(CssCode::new(h_x, h_z)?.with_provenance("complex", qubit_grade))
}

/// `k = n − rank H_X − rank H_Z`.
pub fn logical_count(code: &CssCode) -> usize {
    code.n - code.h_x.rank() - code.h_z.rank()
}

/// Code parameters; distances are optional and always carry their kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qubit_grade: Option<usize>,
    pub n: usize,
    pub k: usize,
    /// Minimum weight of a nontrivial cycle (a Z logical).
    pub d_z: Option<DistanceResult>,
    /// Minimum weight of a nontrivial cocycle (an X logical).
    pub d_x: Option<DistanceResult>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CodeParams {
    pub fn of(code: &CssCode) -> Self {
        Self {
            qubit_grade: code.provenance.as_ref().map(|p| p.qubit_grade),
            n: code.n,
            k: logical_count(code),
            d_z: None,
            d_x: None,
            notes: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixWeights {
    pub rows: usize,
    pub cols: usize,
    pub min_row: usize,
    pub max_row: usize,
    pub mean_row: f64,
    pub max_col: usize,
    pub mean_col: f64,
    /// Rows heavier than the audit bound.
    pub heavy_rows: Vec<usize>,
    /// Columns heavier than the audit bound.
    pub heavy_cols: Vec<usize>,
}

impl MatrixWeights {
    fn of(m: &Gf2Matrix, bound: usize) -> Self {
        let rw = m.row_weights();
        let cw = m.col_weights();
        let mean = |w: &[usize]| {
            if w.is_empty() {
                0.0
            } else {
                w.iter().sum::<usize>() as f64 / w.len() as f64
            }
        };
        let heavy = |w: &[usize]| {
            w.iter()
                .enumerate()
                .filter(|(_, &x)| x > bound)
                .map(|(i, _)| i)
                .collect()
        };
        Self {
            rows: m.rows(),
            cols: m.cols(),
            min_row: rw.iter().copied().min().unwrap_or(0),
            max_row: rw.iter().copied().max().unwrap_or(0),
            mean_row: mean(&rw),
            max_col: cw.iter().copied().max().unwrap_or(0),
            mean_col: mean(&cw),
            heavy_rows: heavy(&rw),
            heavy_cols: heavy(&cw),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightAudit {
    pub ldpc_bound: usize,
    pub x: MatrixWeights,
    pub z: MatrixWeights,
}

impl WeightAudit {
    /// No check and no qubit exceeds the bound in either matrix.
    pub fn within_bound(&self) -> bool {
        [&self.x, &self.z]
            .iter()
            .all(|w| w.heavy_rows.is_empty() && w.heavy_cols.is_empty())
    }
}

pub fn weight_audit(code: &CssCode, ldpc_bound: usize) -> WeightAudit {
    WeightAudit {
        ldpc_bound,
        x: MatrixWeights::of(&code.h_x, ldpc_bound),
        z: MatrixWeights::of(&code.h_z, ldpc_bound),
    }
}
