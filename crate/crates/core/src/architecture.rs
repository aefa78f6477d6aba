//! Modular architectures: identical modules of `n` qubits with fixed
//! intra-module couplings, joined by inter-module links that pair qubit `s`
//! of one module with qubit `τ(s)` of the other.
//!
//! A product code sits on such an architecture with one module per basis
//! element of the module factor (all grades) and one slot per basis element
//! of the slot factor (all grades).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::ChainComplex;
use crate::product::{Connection, Permutation, Product, ProductError, ProductKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArchError {
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error("twisted layouts need a 2-term module complex, got {terms} terms")]
    TwistedNeedsTwoTerm { terms: usize },
    #[error("product factor shapes {factor:?} do not match the layout ({expected} {what})")]
    ShapeMismatch {
        what: &'static str,
        expected: usize,
        factor: Vec<usize>,
    },
    #[error("loop table needs {0}")]
    NotLoopProduct(&'static str),
}

/// A basis element of a factor complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellId {
    pub grade: usize,
    pub index: usize,
}

/// Directed link between two modules. Qubit `s` of `from` couples to qubit
/// `twist[s]` of `to`; the reverse direction uses the inverse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterEdge {
    pub from: usize,
    pub to: usize,
    pub twist: Permutation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArchitectureLayout {
    /// Module `m` hosts the module-factor cell `modules[m]`; top grade first.
    pub modules: Vec<CellId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module_labels: Option<Vec<String>>,
    pub qubits_per_module: usize,
    /// Slot `s` of every module holds the slot-factor cell `slots[s]`.
    pub slots: Vec<CellId>,
    /// Unordered slot pairs `(a, b)` with `a < b` coupled inside a module.
    pub intra_edges: BTreeSet<(usize, usize)>,
    pub inter_edges: Vec<InterEdge>,
}

fn cells_top_first(dims: &[usize]) -> Vec<CellId> {
    (0..dims.len())
        .rev()
        .flat_map(|grade| (0..dims[grade]).map(move |index| CellId { grade, index }))
        .collect()
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl ArchitectureLayout {
    pub fn num_modules(&self) -> usize {
        self.modules.len()
    }

    pub fn module_of(&self, cell: CellId) -> Option<usize> {
        self.modules.binary_search_by(|m| cmp_top_first(m, &cell)).ok()
    }

    pub fn slot_of(&self, cell: CellId) -> Option<usize> {
        self.slots.binary_search_by(|s| cmp_top_first(s, &cell)).ok()
    }

    /// Whether a link between `x` and `y` pairs slot `a` of `x` with slot
    /// `b` of `y`, among the links listed in `candidates`.
    fn link(&self, candidates: &[usize], x: usize, a: usize, b: usize) -> Link {
        for &i in candidates {
            let e = &self.inter_edges[i];
            let hit = if e.from == x {
                e.twist.apply(a) == b
            } else {
                e.twist.apply(b) == a
            };
            if hit {
                return Link::Matched(i);
            }
        }
        candidates.first().map_or(Link::Absent, |&i| Link::Mismatched(i))
    }

    pub fn remove_intra_edge(&mut self, a: usize, b: usize) -> bool {
        self.intra_edges.remove(&ordered(a, b))
    }

    pub fn add_intra_edge(&mut self, a: usize, b: usize) -> bool {
        self.intra_edges.insert(ordered(a, b))
    }

    /// Removes every link between the two modules, in either direction.
    pub fn remove_inter_edges(&mut self, x: usize, y: usize) -> usize {
        let before = self.inter_edges.len();
        self.inter_edges
            .retain(|e| !((e.from == x && e.to == y) || (e.from == y && e.to == x)));
        before - self.inter_edges.len()
    }
}

fn cmp_top_first(a: &CellId, b: &CellId) -> std::cmp::Ordering {
    b.grade.cmp(&a.grade).then(a.index.cmp(&b.index))
}

enum Link {
    Matched(usize),
    Mismatched(usize),
    Absent,
}

/// Layout for codes built from slot complex `c` and module complex `d`.
/// Intra edges are the Tanner edges of `c`, inter edges those of `d`
/// (from the higher-grade module down), with twists taken from `twists`
/// when `d` is the base of a fiber bundle.
pub fn derive_layout(
    c: &ChainComplex,
    d: &ChainComplex,
    twists: Option<&Connection>,
) -> Result<ArchitectureLayout, ArchError> {
    c.validate().map_err(ProductError::from)?;
    d.validate().map_err(ProductError::from)?;
    if let Some(phi) = twists {
        if d.num_terms() != 2 {
            return Err(ArchError::TwistedNeedsTwoTerm {
                terms: d.num_terms(),
            });
        }
        phi.check(d, c)?;
    }
    let mut layout = layout_from_code(d);
    layout.slots = cells_top_first(c.dims());
    layout.qubits_per_module = layout.slots.len();
    for grade in 1..=c.top_grade() {
        let b = c.boundary(grade).expect("grade in range");
        for (r, col) in b.entries() {
            let hi = layout.slot_of(CellId { grade, index: col }).expect("slot");
            let lo = layout.slot_of(CellId { grade: grade - 1, index: r }).expect("slot");
            layout.intra_edges.insert(ordered(hi, lo));
        }
    }
    let slots = layout.slots.clone();
    for e in &mut layout.inter_edges {
        let (from, to) = (layout.modules[e.from], layout.modules[e.to]);
        e.twist = match twists {
            None => Permutation::identity(slots.len()),
            Some(phi) => {
                let auto = phi.get(from.index, to.index).expect("checked above");
                let images = slots
                    .iter()
                    .map(|s| {
                        let image = CellId {
                            grade: s.grade,
                            index: auto.permutation(s.grade).apply(s.index),
                        };
                        slots.binary_search_by(|x| cmp_top_first(x, &image)).expect("slot")
                    })
                    .collect();
                Permutation::from_images(images).expect("automorphisms permute slots")
            }
        };
    }
    Ok(layout)
}

/// Module graph of `d` alone: one module per basis element, one link per
/// incidence, no qubits yet.
pub fn layout_from_code(d: &ChainComplex) -> ArchitectureLayout {
    let modules = cells_top_first(d.dims());
    let module_labels = d.labels().map(|labels| {
        modules
            .iter()
            .map(|m| labels[m.grade][m.index].clone())
            .collect()
    });
    let mut layout = ArchitectureLayout {
        modules,
        module_labels,
        qubits_per_module: 0,
        slots: Vec::new(),
        intra_edges: BTreeSet::new(),
        inter_edges: Vec::new(),
    };
    for grade in 1..=d.top_grade() {
        let b = d.boundary(grade).expect("grade in range");
        let cols = b.transpose();
        for col in 0..cols.rows() {
            for r in cols.row_ones(col) {
                let from = layout.module_of(CellId { grade, index: col }).expect("module");
                let to = layout.module_of(CellId { grade: grade - 1, index: r }).expect("module");
                layout.inter_edges.push(InterEdge {
                    from,
                    to,
                    twist: Permutation::identity(0),
                });
            }
        }
    }
    layout
}

/// Which product factor labels the modules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModuleFactor {
    Left,
    Right,
}

impl ModuleFactor {
    /// The natural choice for a product: the base of a fiber bundle, the
    /// right factor otherwise.
    pub fn default_for(kind: ProductKind) -> Self {
        match kind {
            ProductKind::FiberBundle => ModuleFactor::Left,
            _ => ModuleFactor::Right,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Placement {
    pub module: usize,
    pub slot: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationKind {
    /// Same module, but the two slots are not coupled.
    MissingIntraEdge,
    /// The modules are not linked at all.
    NoInterEdge,
    /// The modules are linked, but the link pairs slot `from.slot` with
    /// `expected_slot` instead of `to.slot`.
    TwistMismatch { edge: usize, expected_slot: usize },
}

/// A Tanner edge of the product (entry `(row, col)` of `∂_grade`) that the
/// layout does not support.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub grade: usize,
    pub row: usize,
    pub col: usize,
    pub from: Placement,
    pub to: Placement,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentReport {
    /// `assignment[n][i]` places basis element `i` of product grade `n`.
    pub assignment: Vec<Vec<Placement>>,
    pub intra_edges_used: usize,
    pub inter_edges_used: usize,
    /// Edges carried by links with a nontrivial twist.
    pub twisted_edges_used: usize,
    pub violations: Vec<Violation>,
}

impl AssignmentReport {
    pub fn respects(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn placement(&self, grade: usize, index: usize) -> Placement {
        self.assignment[grade][index]
    }
}

/// Places every basis element of the product on the layout and classifies
/// every nonzero entry of every boundary. All violations are reported.
pub fn verify_respects(
    product: &Product,
    layout: &ArchitectureLayout,
    module_factor: ModuleFactor,
) -> Result<AssignmentReport, ArchError> {
    let basis = &product.basis;
    let (module_dims, slot_dims) = match module_factor {
        ModuleFactor::Left => (&basis.left_dims, &basis.right_dims),
        ModuleFactor::Right => (&basis.right_dims, &basis.left_dims),
    };
    if module_dims.iter().sum::<usize>() != layout.modules.len() {
        return Err(ArchError::ShapeMismatch {
            what: "modules",
            expected: layout.modules.len(),
            factor: module_dims.clone(),
        });
    }
    if slot_dims.iter().sum::<usize>() != layout.slots.len() {
        return Err(ArchError::ShapeMismatch {
            what: "slots",
            expected: layout.slots.len(),
            factor: slot_dims.clone(),
        });
    }
    let assignment: Vec<Vec<Placement>> = basis
        .grades
        .iter()
        .map(|g| {
            g.iter()
                .map(|e| {
                    let (m, s) = match module_factor {
                        ModuleFactor::Left => ((e.p, e.left), (e.q, e.right)),
                        ModuleFactor::Right => ((e.q, e.right), (e.p, e.left)),
                    };
                    Placement {
                        module: layout
                            .module_of(CellId { grade: m.0, index: m.1 })
                            .expect("module cell exists"),
                        slot: layout
                            .slot_of(CellId { grade: s.0, index: s.1 })
                            .expect("slot cell exists"),
                    }
                })
                .collect()
        })
        .collect();

    let mut report = AssignmentReport {
        assignment,
        intra_edges_used: 0,
        inter_edges_used: 0,
        twisted_edges_used: 0,
        violations: Vec::new(),
    };
    let mut links: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, e) in layout.inter_edges.iter().enumerate() {
        links.entry(ordered(e.from, e.to)).or_default().push(i);
    }
    for grade in 1..=product.complex.top_grade() {
        let b = product.complex.boundary(grade).expect("grade in range");
        for (row, col) in b.entries() {
            let from = report.assignment[grade][col];
            let to = report.assignment[grade - 1][row];
            let kind = if from.module == to.module {
                if layout.intra_edges.contains(&ordered(from.slot, to.slot)) {
                    report.intra_edges_used += 1;
                    continue;
                }
                ViolationKind::MissingIntraEdge
            } else {
                let candidates = links
                    .get(&ordered(from.module, to.module))
                    .map_or(&[][..], Vec::as_slice);
                match layout.link(candidates, from.module, from.slot, to.slot) {
                    Link::Matched(i) => {
                        report.inter_edges_used += 1;
                        if !layout.inter_edges[i].twist.is_identity() {
                            report.twisted_edges_used += 1;
                        }
                        continue;
                    }
                    Link::Mismatched(edge) => {
                        let e = &layout.inter_edges[edge];
                        let expected_slot = if e.from == from.module {
                            e.twist.apply(from.slot)
                        } else {
                            e.twist.inverse().apply(from.slot)
                        };
                        ViolationKind::TwistMismatch {
                            edge,
                            expected_slot,
                        }
                    }
                    Link::Absent => ViolationKind::NoInterEdge,
                }
            };
            report.violations.push(Violation {
                grade,
                row,
                col,
                from,
                to,
                kind,
            });
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopLabel {
    Face,
    Edge,
    Vertex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotRole {
    Data,
    XStab,
    ZStab,
    Unused,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Odd,
    Even,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopSlot {
    /// 1-based position along the loop.
    pub position: usize,
    pub parity: Parity,
    pub role: SlotRole,
    /// Product grade and index of the element held here.
    pub grade: usize,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopRow {
    pub module: CellId,
    pub label: LoopLabel,
    pub slots: Vec<LoopSlot>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopAssignmentTable {
    pub loop_length: usize,
    pub qubit_grade: usize,
    pub loops: Vec<LoopRow>,
}

impl LoopAssignmentTable {
    /// Role of every loop with the given label, by position; all loops with
    /// the same label agree.
    pub fn roles(&self, label: LoopLabel) -> Option<Vec<SlotRole>> {
        let mut rows = self.loops.iter().filter(|l| l.label == label);
        let first: Vec<SlotRole> = rows.next()?.slots.iter().map(|s| s.role).collect();
        rows.all(|l| l.slots.iter().map(|s| s.role).eq(first.iter().copied()))
            .then_some(first)
    }
}

/// Qubit roles around each loop of a cyclic-repetition ⊗ surface product.
///
/// Loop positions alternate check, bit, check, ... starting at 1: bit `j`
/// of the repetition code sits at position `2j + 2` and check `j`, which
/// joins bits `j` and `j + 1`, at the odd position right after it. A slot's
/// role depends on the product grade it holds relative to the qubit grade:
/// one below is an X check, equal is data, one above is a Z check.
pub fn loop_assignment_table(
    product: &Product,
    qubit_grade: usize,
) -> Result<LoopAssignmentTable, ArchError> {
    let basis = &product.basis;
    if basis.kind != ProductKind::Tensor {
        return Err(ArchError::NotLoopProduct("a tensor product"));
    }
    if basis.left_dims.len() != 2 || basis.left_dims[0] != basis.left_dims[1] {
        return Err(ArchError::NotLoopProduct(
            "a cyclic repetition complex as left factor",
        ));
    }
    if basis.right_dims.len() != 3 {
        return Err(ArchError::NotLoopProduct("a 3-term right factor"));
    }
    let m = basis.left_dims[0];
    let len = 2 * m;
    // (grade, index) of the product element at each (module, loop slot).
    let mut cell = BTreeMap::new();
    for (n, g) in basis.grades.iter().enumerate() {
        for (i, e) in g.iter().enumerate() {
            let position = if e.p == 1 {
                2 * e.left + 2
            } else {
                (2 * e.left + 2) % len + 1
            };
            cell.insert((e.q, e.right, position), (n, i));
        }
    }
    let mut loops = Vec::new();
    for q in (0..3).rev() {
        let label = [LoopLabel::Vertex, LoopLabel::Edge, LoopLabel::Face][q];
        for right in 0..basis.right_dims[q] {
            let slots = (1..=len)
                .map(|position| {
                    let (grade, index) = cell[&(q, right, position)];
                    let role = match grade as isize - qubit_grade as isize {
                        -1 => SlotRole::XStab,
                        0 => SlotRole::Data,
                        1 => SlotRole::ZStab,
                        _ => SlotRole::Unused,
                    };
                    LoopSlot {
                        position,
                        parity: if position % 2 == 1 { Parity::Odd } else { Parity::Even },
                        role,
                        grade,
                        index,
                    }
                })
                .collect();
            loops.push(LoopRow {
                module: CellId { grade: q, index: right },
                label,
                slots,
            });
        }
    }
    Ok(LoopAssignmentTable {
        loop_length: len,
        qubit_grade,
        loops,
    })
}
