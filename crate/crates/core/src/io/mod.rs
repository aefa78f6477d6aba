//! File formats: alist and MatrixMarket for single matrices, JSON documents
//! for complexes, layouts and reports.
//!
//! Documents list grades top first (`dims[0]` is the top grade), matching
//! how complexes are usually written down. Coordinates are sorted so that
//! equal objects serialize to identical bytes.

mod text;

pub use text::{read_alist, read_mtx, write_alist, write_mtx, FormatError};

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::architecture::AssignmentReport;
use crate::complex::ChainComplex;
use crate::css::{CodeParams, WeightAudit};
use crate::distance::{DistanceKind, DistanceResult};
use crate::gf2::Gf2Matrix;
use crate::product::{
    ComplexAutomorphism, Connection, GroupAction, Permutation, ProductBasis, ProductBasisIndex,
    ProductKind,
};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{path}: field `{field}`: {message}")]
    Invalid {
        path: PathBuf,
        field: String,
        message: String,
    },
}

/// A document field that fails validation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("field `{field}`: {message}")]
pub struct DocumentError {
    pub field: String,
    pub message: String,
}

impl DocumentError {
    fn new(field: impl Into<String>, message: impl ToString) -> Self {
        Self {
            field: field.into(),
            message: message.to_string(),
        }
    }

    pub fn at(self, path: &Path) -> IoError {
        IoError::Invalid {
            path: path.to_path_buf(),
            field: self.field,
            message: self.message,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    /// `[row, col]` pairs, 0-based, sorted row-major.
    pub entries: Vec<[usize; 2]>,
}

impl SparseMatrix {
    pub fn from_matrix(m: &Gf2Matrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().map(|(r, c)| [r, c]).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<Gf2Matrix, String> {
        let mut m = Gf2Matrix::zeros(self.rows, self.cols);
        for &[r, c] in &self.entries {
            if r >= self.rows || c >= self.cols {
                return Err(format!("entry ({r}, {c}) outside {}x{}", self.rows, self.cols));
            }
            if m.get(r, c) {
                return Err(format!("entry ({r}, {c}) repeated"));
            }
            m.set(r, c, true);
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryEntry {
    /// `∂_grade : C_grade → C_{grade-1}`.
    pub grade: usize,
    #[serde(flatten)]
    pub matrix: SparseMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupActionDocument {
    pub order: usize,
    /// Generator images on each grade, top grade first.
    pub generator: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectionEntry {
    pub b1: usize,
    pub b0: usize,
    /// Fiber permutation on each grade, top grade first.
    pub automorphism: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectionDocument {
    pub format_version: u32,
    pub entries: Vec<ConnectionEntry>,
}

impl ConnectionDocument {
    pub fn from_connection(phi: &Connection) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            entries: phi
                .entries()
                .map(|(&(b1, b0), auto)| ConnectionEntry {
                    b1,
                    b0,
                    automorphism: perms_top_first(auto.permutations()),
                })
                .collect(),
        }
    }

    pub fn to_connection(&self) -> Result<Connection, DocumentError> {
        let mut phi = Connection::default();
        for (i, e) in self.entries.iter().enumerate() {
            let perms = perms_from_top_first(&e.automorphism)
                .map_err(|m| DocumentError::new(format!("entries[{i}].automorphism"), m))?;
            if phi.get(e.b1, e.b0).is_some() {
                return Err(DocumentError::new(
                    format!("entries[{i}]"),
                    format!("incidence ({}, {}) repeated", e.b1, e.b0),
                ));
            }
            phi.set(e.b1, e.b0, ComplexAutomorphism::new(perms));
        }
        Ok(phi)
    }
}

fn perms_top_first(perms: &[Permutation]) -> Vec<Vec<usize>> {
    perms.iter().rev().map(|p| p.images().to_vec()).collect()
}

fn perms_from_top_first(images: &[Vec<usize>]) -> Result<Vec<Permutation>, String> {
    images
        .iter()
        .rev()
        .map(|v| Permutation::from_images(v.clone()).map_err(|e| e.to_string()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductBasisDocument {
    #[serde(flatten)]
    pub kind: ProductKind,
    pub left_dims: Vec<usize>,
    pub right_dims: Vec<usize>,
    /// `[p, q, left, right]` for every basis element, top grade first.
    pub grades: Vec<Vec<[usize; 4]>>,
}

impl ProductBasisDocument {
    pub fn from_basis(b: &ProductBasis) -> Self {
        Self {
            kind: b.kind,
            left_dims: b.left_dims.iter().rev().copied().collect(),
            right_dims: b.right_dims.iter().rev().copied().collect(),
            grades: b
                .grades
                .iter()
                .rev()
                .map(|g| g.iter().map(|e| [e.p, e.q, e.left, e.right]).collect())
                .collect(),
        }
    }

    pub fn to_basis(&self) -> ProductBasis {
        ProductBasis {
            kind: self.kind,
            left_dims: self.left_dims.iter().rev().copied().collect(),
            right_dims: self.right_dims.iter().rev().copied().collect(),
            grades: self
                .grades
                .iter()
                .rev()
                .map(|g| {
                    g.iter()
                        .map(|&[p, q, left, right]| ProductBasisIndex { p, q, left, right })
                        .collect()
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDocument {
    pub format_version: u32,
    /// Grade dimensions, top grade first.
    pub dims: Vec<usize>,
    /// Boundaries, highest grade first.
    pub boundaries: Vec<BoundaryEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_action: Option<GroupActionDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connection: Option<ConnectionDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub product_basis: Option<ProductBasisDocument>,
}

/// A complex with whatever structure its document carried.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadedComplex {
    pub complex: ChainComplex,
    pub action: Option<GroupAction>,
    pub connection: Option<Connection>,
    pub basis: Option<ProductBasis>,
}

impl LoadedComplex {
    pub fn plain(complex: ChainComplex) -> Self {
        Self {
            complex,
            action: None,
            connection: None,
            basis: None,
        }
    }
}

impl ComplexDocument {
    pub fn from_complex(c: &ChainComplex) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            dims: c.dims_top_first(),
            boundaries: (1..=c.top_grade())
                .rev()
                .map(|grade| BoundaryEntry {
                    grade,
                    matrix: SparseMatrix::from_matrix(c.boundary(grade).expect("in range")),
                })
                .collect(),
            labels: c.labels().map(|l| l.iter().rev().cloned().collect()),
            group_action: None,
            connection: None,
            product_basis: None,
        }
    }

    pub fn from_loaded(l: &LoadedComplex) -> Self {
        let mut doc = Self::from_complex(&l.complex);
        doc.group_action = l.action.as_ref().map(|a| GroupActionDocument {
            order: a.order(),
            generator: perms_top_first(a.generator().permutations()),
        });
        doc.connection = l.connection.as_ref().map(ConnectionDocument::from_connection);
        doc.product_basis = l.basis.as_ref().map(ProductBasisDocument::from_basis);
        doc
    }

    /// Rebuilds the complex and checks shapes, `∂∂ = 0`, the group action
    /// and the basis table.
    pub fn to_loaded(&self) -> Result<LoadedComplex, DocumentError> {
        if self.format_version != FORMAT_VERSION {
            return Err(DocumentError::new(
                "format_version",
                format!("unsupported version {}", self.format_version),
            ));
        }
        let top = self
            .dims
            .len()
            .checked_sub(1)
            .ok_or_else(|| DocumentError::new("dims", "no grades"))?;
        if self.boundaries.len() != top {
            return Err(DocumentError::new(
                "boundaries",
                format!("expected {top} boundaries, got {}", self.boundaries.len()),
            ));
        }
        let mut boundaries = vec![None; top];
        for (i, b) in self.boundaries.iter().enumerate() {
            let field = format!("boundaries[{i}]");
            if b.grade == 0 || b.grade > top || boundaries[b.grade - 1].is_some() {
                return Err(DocumentError::new(field, format!("bad grade {}", b.grade)));
            }
            boundaries[b.grade - 1] =
                Some(b.matrix.to_matrix().map_err(|m| DocumentError::new(field, m))?);
        }
        let dims: Vec<usize> = self.dims.iter().rev().copied().collect();
        let mut complex = ChainComplex::new(dims, boundaries.into_iter().map(Option::unwrap).collect())
            .map_err(|e| DocumentError::new("boundaries", e))?;
        complex.validate().map_err(|e| DocumentError::new("boundaries", e))?;
        if let Some(labels) = &self.labels {
            complex = complex
                .with_labels(labels.iter().rev().cloned().collect())
                .map_err(|e| DocumentError::new("labels", e))?;
        }
        let action = match &self.group_action {
            None => None,
            Some(g) => {
                let perms = perms_from_top_first(&g.generator)
                    .map_err(|m| DocumentError::new("group_action.generator", m))?;
                let action = GroupAction::new(g.order, ComplexAutomorphism::new(perms))
                    .map_err(|e| DocumentError::new("group_action", e))?;
                action
                    .check_commutes(&complex)
                    .map_err(|e| DocumentError::new("group_action", e))?;
                Some(action)
            }
        };
        let connection = self.connection.as_ref().map(ConnectionDocument::to_connection).transpose()?;
        let basis = match &self.product_basis {
            None => None,
            Some(b) => {
                let basis = b.to_basis();
                let sizes: Vec<usize> = basis.grades.iter().map(Vec::len).collect();
                if sizes != complex.dims() {
                    return Err(DocumentError::new(
                        "product_basis.grades",
                        format!("sizes {sizes:?} differ from grade dims"),
                    ));
                }
                let fits = basis.grades.iter().enumerate().all(|(n, g)| {
                    g.iter().all(|e| {
                        e.p + e.q == n
                            && e.left < basis.left_dims.get(e.p).copied().unwrap_or(0)
                            && e.right < basis.right_dims.get(e.q).copied().unwrap_or(0)
                    })
                });
                if !fits {
                    return Err(DocumentError::new(
                        "product_basis.grades",
                        "entry outside the factor dimensions",
                    ));
                }
                Some(basis)
            }
        };
        Ok(LoadedComplex {
            complex,
            action,
            connection,
            basis,
        })
    }
}

/// Architecture verification in a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArchitectureSummary {
    pub modules: usize,
    pub qubits_per_module: usize,
    pub intra_edges_used: usize,
    pub inter_edges_used: usize,
    pub twisted_edges_used: usize,
    pub violations: usize,
    pub respects: bool,
}

impl ArchitectureSummary {
    pub fn new(report: &AssignmentReport, modules: usize, qubits_per_module: usize) -> Self {
        Self {
            modules,
            qubits_per_module,
            intra_edges_used: report.intra_edges_used,
            inter_edges_used: report.inter_edges_used,
            twisted_edges_used: report.twisted_edges_used,
            violations: report.violations.len(),
            respects: report.respects(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KunnethCheck {
    pub predicted: usize,
    pub computed: usize,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceEntry {
    pub method: String,
    pub grade: usize,
    pub cohomological: bool,
    pub result: DistanceResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<CodeParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kunneth: Option<KunnethCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight_audit: Option<WeightAudit>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub distances: Vec<DistanceEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub architecture: Option<ArchitectureSummary>,
}

impl ReportDocument {
    pub fn new() -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            source: None,
            seed: None,
            params: None,
            kunneth: None,
            weight_audit: None,
            distances: Vec::new(),
            architecture: None,
        }
    }

    /// Appends a distance entry and, when it concerns the qubit grade of
    /// `params`, keeps the better of it and the recorded `d_z`/`d_x`: an
    /// exact value wins, otherwise the smaller upper bound.
    pub fn add_distance(&mut self, entry: DistanceEntry) {
        if let Some(params) = self.params.as_mut().filter(|p| p.qubit_grade == Some(entry.grade)) {
            let slot = if entry.cohomological { &mut params.d_x } else { &mut params.d_z };
            let better = match (slot.as_ref(), &entry.result) {
                (_, r) if r.value.is_none() => false,
                (None, _) => true,
                (Some(old), new) => match (old.kind, new.kind) {
                    (DistanceKind::Exact, _) => false,
                    (_, DistanceKind::Exact) => true,
                    (DistanceKind::UpperBound, DistanceKind::UpperBound) => {
                        old.value.is_none() || new.value < old.value
                    }
                    _ => false,
                },
            };
            if better {
                *slot = Some(entry.result.clone());
            }
        }
        self.distances.push(entry);
    }
}

impl Default for ReportDocument {
    fn default() -> Self {
        Self::new()
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    std::fs::write(path, text).map_err(|source| IoError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T, IoError> {
    serde_json::from_str(&read_text(path)?).map_err(|e| IoError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn save_json<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    write_text(path, &to_json(value))
}

pub fn load_complex(path: &Path) -> Result<LoadedComplex, IoError> {
    load_json::<ComplexDocument>(path)?
        .to_loaded()
        .map_err(|e| e.at(path))
}

pub fn save_complex(path: &Path, complex: &LoadedComplex) -> Result<(), IoError> {
    save_json(path, &ComplexDocument::from_loaded(complex))
}
