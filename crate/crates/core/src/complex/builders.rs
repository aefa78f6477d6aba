//! Seed complexes: repetition codes, planar surface codes, the Steane code and
//! random (optionally group-symmetric) sparse classical codes.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ChainComplex, ComplexError};
use crate::gf2::Gf2Matrix;
use crate::product::GroupAction;

/// Upper bound on rejection-sampling attempts in the random builders.
pub const MAX_SAMPLING_ATTEMPTS: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Open,
    Cyclic,
}

/// Repetition code as a 2-term complex. Check `i` is `x_i + x_{i+1}`; the
/// cyclic variant wraps the last check around to bit 0.
pub fn repetition_complex(length: usize, topology: Topology) -> Result<ChainComplex, ComplexError> {
    let (checks, min) = match topology {
        Topology::Open => (length.saturating_sub(1), 1),
        Topology::Cyclic => (length, 2),
    };
    if length < min {
        return Err(ComplexError::InvalidParameter(format!(
            "{topology:?} repetition code needs length >= {min}, got {length}"
        )));
    }
    let coords = (0..checks).flat_map(|i| [(i, i), (i, (i + 1) % length)]);
    let h = Gf2Matrix::from_coords(checks, length, coords).expect("indices in range");
    let labels = vec![
        (0..checks).map(|i| format!("c{i}")).collect(),
        (0..length).map(|i| format!("b{i}")).collect(),
    ];
    Ok(ChainComplex::from_parity_check(h)
        .with_labels(labels)
        .expect("label counts match"))
}

/// Planar (unrotated) surface code of distance `l` as a 3-term complex
/// `faces → edges → vertices`.
///
/// Cells sit on a `(2l-1) × (2l-1)` grid. Positions with `i + j` even are
/// edges (data qubits), `i` odd / `j` even are faces (Z checks) and `i` even
/// / `j` odd are vertices (X checks). A face or vertex is incident to the
/// edges directly above, below, left and right of it that lie on the grid.
/// Every cell type is numbered row-major. This gives `l(l-1)` faces,
/// `2(l²-l)+1` edges and `l(l-1)` vertices with both boundary maps of full
/// rank, so `H_2 = H_0 = 0` and `H_1 = F2`.
pub fn surface_complex(l: usize) -> Result<ChainComplex, ComplexError> {
    if l < 2 {
        return Err(ComplexError::InvalidParameter(format!(
            "surface code needs L >= 2, got {l}"
        )));
    }
    let side = 2 * l - 1;
    let mut edge_id = vec![usize::MAX; side * side];
    let (mut edges, mut faces, mut vertices) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..side {
        for j in 0..side {
            match (i % 2, j % 2) {
                (a, b) if a == b => {
                    edge_id[i * side + j] = edges.len();
                    edges.push((i, j));
                }
                (1, 0) => faces.push((i, j)),
                _ => vertices.push((i, j)),
            }
        }
    }
    let neighbours = |(i, j): (usize, usize)| {
        let mut out = Vec::with_capacity(4);
        if i > 0 {
            out.push(edge_id[(i - 1) * side + j]);
        }
        if i + 1 < side {
            out.push(edge_id[(i + 1) * side + j]);
        }
        if j > 0 {
            out.push(edge_id[i * side + j - 1]);
        }
        if j + 1 < side {
            out.push(edge_id[i * side + j + 1]);
        }
        out
    };
    let h_x = Gf2Matrix::from_coords(
        vertices.len(),
        edges.len(),
        vertices
            .iter()
            .enumerate()
            .flat_map(|(v, &p)| neighbours(p).into_iter().map(move |e| (v, e))),
    )
    .expect("indices in range");
    let d2 = Gf2Matrix::from_coords(
        edges.len(),
        faces.len(),
        faces
            .iter()
            .enumerate()
            .flat_map(|(f, &p)| neighbours(p).into_iter().map(move |e| (e, f))),
    )
    .expect("indices in range");
    let name = |prefix: char, cells: &[(usize, usize)]| {
        cells
            .iter()
            .map(|(i, j)| format!("{prefix}({i},{j})"))
            .collect::<Vec<_>>()
    };
    let labels = vec![name('v', &vertices), name('e', &edges), name('f', &faces)];
    Ok(ChainComplex::from_boundaries(vec![h_x, d2])
        .expect("shapes chain")
        .with_labels(labels)
        .expect("label counts match"))
}

/// The 7-qubit Steane code: both check matrices are the `[7,4,3]` Hamming code.
pub fn steane_complex() -> ChainComplex {
    let hamming = Gf2Matrix::from_rows(&[
        [1, 0, 1, 0, 1, 0, 1],
        [0, 1, 1, 0, 0, 1, 1],
        [0, 0, 0, 1, 1, 1, 1],
    ]);
    ChainComplex::from_css(&hamming, &hamming).expect("shapes chain")
}

/// Shape and weight limits for random sparse parity-check matrices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LdpcShape {
    pub rows: usize,
    pub cols: usize,
    pub min_row_wt: usize,
    pub max_row_wt: usize,
    pub min_col_wt: usize,
    pub max_col_wt: usize,
}

impl LdpcShape {
    /// Row weights are drawn uniformly from `[min(2, max_row_wt), max_row_wt]`;
    /// columns have no lower weight limit.
    pub fn new(rows: usize, cols: usize, max_row_wt: usize, max_col_wt: usize) -> Self {
        Self {
            rows,
            cols,
            min_row_wt: max_row_wt.min(2),
            max_row_wt,
            min_col_wt: 0,
            max_col_wt,
        }
    }

    pub fn with_row_weights(mut self, min: usize, max: usize) -> Self {
        self.min_row_wt = min;
        self.max_row_wt = max;
        self
    }

    pub fn with_min_col_wt(mut self, min: usize) -> Self {
        self.min_col_wt = min;
        self
    }

    fn check(&self) -> Result<(), ComplexError> {
        let bad = |msg: String| Err(ComplexError::InvalidParameter(msg));
        if self.min_row_wt > self.max_row_wt || self.min_col_wt > self.max_col_wt {
            return bad(format!("weight range inverted in {self:?}"));
        }
        if self.max_row_wt > self.cols || self.max_col_wt > self.rows {
            return bad(format!("weights exceed matrix size in {self:?}"));
        }
        if self.rows * self.min_row_wt > self.cols * self.max_col_wt
            || self.cols * self.min_col_wt > self.rows * self.max_row_wt
        {
            return bad(format!("weight limits cannot be met together in {self:?}"));
        }
        Ok(())
    }

    /// Draws row supports, or `None` when the greedy fill gets stuck.
    fn sample(&self, rng: &mut ChaCha8Rng) -> Option<Vec<Vec<usize>>> {
        let targets: Vec<usize> = (0..self.rows)
            .map(|_| rng.random_range(self.min_row_wt..=self.max_row_wt))
            .collect();
        let mut supports: Vec<Vec<usize>> = vec![Vec::new(); self.rows];
        let mut col_wt = vec![0usize; self.cols];

        let mut col_order: Vec<usize> = (0..self.cols).collect();
        col_order.shuffle(rng);
        for &c in &col_order {
            for _ in 0..self.min_col_wt {
                let open: Vec<usize> = (0..self.rows)
                    .filter(|&r| supports[r].len() < targets[r] && !supports[r].contains(&c))
                    .collect();
                if open.is_empty() {
                    return None;
                }
                let r = open[rng.random_range(0..open.len())];
                supports[r].push(c);
                col_wt[c] += 1;
            }
        }
        for r in 0..self.rows {
            while supports[r].len() < targets[r] {
                let open: Vec<usize> = (0..self.cols)
                    .filter(|&c| col_wt[c] < self.max_col_wt && !supports[r].contains(&c))
                    .collect();
                if open.is_empty() {
                    return None;
                }
                let c = open[rng.random_range(0..open.len())];
                supports[r].push(c);
                col_wt[c] += 1;
            }
            supports[r].sort_unstable();
        }
        Some(supports)
    }
}

/// Runs the rejection loop. Attempt `a` draws from the ChaCha8 stream `a` of
/// the key derived from `seed`, so the accepted sample does not depend on
/// platform or on how many values earlier attempts consumed.
fn rejection_sample<T>(
    seed: u64,
    mut attempt_fn: impl FnMut(&mut ChaCha8Rng) -> Option<T>,
) -> Result<T, ComplexError> {
    for attempt in 0..MAX_SAMPLING_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt);
        if let Some(out) = attempt_fn(&mut rng) {
            return Ok(out);
        }
    }
    Err(ComplexError::SamplingBudgetExhausted {
        attempts: MAX_SAMPLING_ATTEMPTS,
    })
}

/// Random sparse parity-check matrix of exact rank `target_rank`, as a 2-term complex.
pub fn random_ldpc_complex(
    shape: &LdpcShape,
    target_rank: usize,
    seed: u64,
) -> Result<ChainComplex, ComplexError> {
    let (complex, _) = group_symmetric_ldpc_complex(shape, 1, Some(target_rank), seed)?;
    Ok(complex)
}

/// Random quasi-cyclic parity-check matrix.
///
/// `shape` describes the quotient matrix. Each of its nonzero entries is
/// lifted to a `group_order × group_order` cyclic permutation matrix with a
/// random shift, so lifted row and column weights equal the quotient ones.
/// Entry `(i·m + a, j·m + b)` is set when quotient entry `(i, j)` carries shift
/// `s` and `a ≡ b + s (mod m)`. The returned action shifts every block by one
/// on both bits and checks. When `target_rank` is given, only lifted matrices
/// of exactly that rank are accepted.
pub fn group_symmetric_ldpc_complex(
    shape: &LdpcShape,
    group_order: usize,
    target_rank: Option<usize>,
    seed: u64,
) -> Result<(ChainComplex, GroupAction), ComplexError> {
    if group_order == 0 {
        return Err(ComplexError::InvalidParameter("group order must be >= 1".into()));
    }
    shape.check()?;
    let m = group_order;
    let (rows, cols) = (shape.rows * m, shape.cols * m);
    if let Some(t) = target_rank {
        if t > rows.min(cols) {
            return Err(ComplexError::InvalidParameter(format!(
                "target rank {t} exceeds min({rows}, {cols})"
            )));
        }
    }
    let h = rejection_sample(seed, |rng| {
        let supports = shape.sample(rng)?;
        let mut h = Gf2Matrix::zeros(rows, cols);
        for (i, support) in supports.iter().enumerate() {
            for &j in support {
                let shift = if m > 1 { rng.random_range(0..m) } else { 0 };
                for b in 0..m {
                    h.set(i * m + (b + shift) % m, j * m + b, true);
                }
            }
        }
        match target_rank {
            Some(t) if h.rank() != t => None,
            _ => Some(h),
        }
    })?;
    let action = GroupAction::block_cyclic(m, &[rows, cols]).expect("block sizes divide");
    Ok((ChainComplex::from_parity_check(h), action))
}
