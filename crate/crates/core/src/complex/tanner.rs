use serde::{Deserialize, Serialize};

use super::ChainComplex;

/// A check vertex: Z checks live one grade above the qubits, X checks one below.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CheckNode {
    Z(usize),
    X(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TannerEdge {
    pub check: CheckNode,
    pub qubit: usize,
}

/// Tripartite graph `P_Z ⊔ Q ⊔ P_X` read off the two boundaries adjacent to
/// the qubit grade. One side is empty when the qubit grade sits at an end of
/// the complex; a 2-term complex yields a bipartite graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TannerGraph {
    pub z_checks: usize,
    pub qubits: usize,
    pub x_checks: usize,
    pub edges: Vec<TannerEdge>,
    pub bipartite_only: bool,
}

impl TannerGraph {
    pub(super) fn from_complex(complex: &ChainComplex, qubit_grade: usize) -> Self {
        let mut edges = Vec::new();
        let z_checks = complex.dim(qubit_grade + 1);
        if let Some(up) = complex.boundary(qubit_grade + 1) {
            let cols = up.transpose();
            for f in 0..cols.rows() {
                edges.extend(cols.row_ones(f).map(|q| TannerEdge {
                    check: CheckNode::Z(f),
                    qubit: q,
                }));
            }
        }
        let x_checks = if qubit_grade == 0 {
            0
        } else {
            complex.dim(qubit_grade - 1)
        };
        if let Some(down) = complex.boundary(qubit_grade) {
            for x in 0..down.rows() {
                edges.extend(down.row_ones(x).map(|q| TannerEdge {
                    check: CheckNode::X(x),
                    qubit: q,
                }));
            }
        }
        Self {
            z_checks,
            qubits: complex.dim(qubit_grade),
            x_checks,
            edges,
            bipartite_only: complex.num_terms() <= 2,
        }
    }

    pub fn partition_sizes(&self) -> (usize, usize, usize) {
        (self.z_checks, self.qubits, self.x_checks)
    }

    pub fn qubit_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.qubits];
        for e in &self.edges {
            deg[e.qubit] += 1;
        }
        deg
    }

    pub fn check_degree(&self, check: CheckNode) -> usize {
        self.edges.iter().filter(|e| e.check == check).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{repetition_complex, steane_complex, surface_complex, Topology};

    #[test]
    fn steane_graph_is_tripartite() {
        let g = steane_complex().tanner_graph(1).unwrap();
        assert_eq!(g.partition_sizes(), (3, 7, 3));
        assert!(!g.bipartite_only);
        // Hamming checks have weight 4 on both sides.
        assert_eq!(g.edges.len(), 24);
        for i in 0..3 {
            assert_eq!(g.check_degree(CheckNode::Z(i)), 4);
            assert_eq!(g.check_degree(CheckNode::X(i)), 4);
        }
    }

    #[test]
    fn open_repetition_graph_is_a_path() {
        let g = repetition_complex(4, Topology::Open).unwrap().tanner_graph(1).unwrap();
        assert!(g.bipartite_only);
        assert_eq!(g.partition_sizes(), (0, 4, 3));
        let mut edges: Vec<_> = g
            .edges
            .iter()
            .map(|e| match e.check {
                CheckNode::X(x) => (x, e.qubit),
                CheckNode::Z(_) => unreachable!(),
            })
            .collect();
        edges.sort();
        assert_eq!(edges, vec![(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 3)]);
    }

    #[test]
    fn surface_degrees_are_bounded() {
        let s = surface_complex(2).unwrap();
        let g = s.tanner_graph(1).unwrap();
        assert!(g.qubit_degrees().iter().all(|&d| d <= 4));
        let nnz = s.boundary(1).unwrap().nnz() + s.boundary(2).unwrap().nnz();
        assert_eq!(g.edges.len(), nnz);
        // Checks of a planar code have weight at most 4.
        for f in 0..g.z_checks {
            assert!(g.check_degree(CheckNode::Z(f)) <= 4);
        }
        for v in 0..g.x_checks {
            assert!(g.check_degree(CheckNode::X(v)) <= 4);
        }
    }

    #[test]
    fn edges_at_the_ends_of_a_complex() {
        let s = surface_complex(3).unwrap();
        let top = s.tanner_graph(2).unwrap();
        assert_eq!(top.partition_sizes(), (0, 6, 13));
        let bottom = s.tanner_graph(0).unwrap();
        assert_eq!(bottom.partition_sizes(), (13, 6, 0));
        assert_eq!(top.edges.len(), bottom.edges.len());
    }
}
