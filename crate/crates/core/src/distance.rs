//! Homological and cohomological distances.
//!
//! `d_i` is the least weight of a cycle at grade `i` that is not a boundary,
//! and `∞` when `H_i` is trivial. `d^i` is the same on the dual complex.

use std::cmp::Ordering;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{ChainComplex, ComplexError};
use crate::gf2::{BitVec, EchelonBasis, Gf2Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistanceError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("search needs more than {budget} candidate vectors")]
    BudgetExceeded { budget: u64 },
    #[error("column {column} of ∂_{grade} has more than two ones")]
    NotGraphlike { grade: usize, column: usize },
    #[error("second factor must have 2 terms, got {terms}")]
    NotTwoTerm { terms: usize },
    #[error("{factor} distance at grade {grade} is {kind}, not exact")]
    NotExact {
        factor: &'static str,
        grade: usize,
        kind: DistanceKind,
    },
    #[error("{factor} distances cover {got} grades, complex has {expected}")]
    DistanceCount {
        factor: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{factor} distance at grade {grade} has no value")]
    Missing { factor: &'static str, grade: usize },
}

/// A distance: a positive count or `∞`, ordered with `∞` last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    /// `∞ · x = ∞`.
    pub fn times(self, other: Distance) -> Distance {
        match (self, other) {
            (Distance::Finite(a), Distance::Finite(b)) => Distance::Finite(a * b),
            _ => Distance::Infinite,
        }
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Distance::Infinite
    }
}

impl Ord for Distance {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Distance::Finite(a), Distance::Finite(b)) => a.cmp(b),
            (Distance::Finite(_), Distance::Infinite) => Ordering::Less,
            (Distance::Infinite, Distance::Finite(_)) => Ordering::Greater,
            (Distance::Infinite, Distance::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Distance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Distance {
    type Err = String;

    /// A positive count, or `inf`.
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "inf" | "∞" => Ok(Distance::Infinite),
            t => match t.parse::<usize>() {
                Ok(0) | Err(_) => Err(format!("bad distance {t:?}")),
                Ok(d) => Ok(Distance::Finite(d)),
            },
        }
    }
}

impl Serialize for Distance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Distance::Finite(d) => s.serialize_u64(*d as u64),
            Distance::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Distance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(usize),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(n) => Ok(Distance::Finite(n)),
            Raw::Str(s) if s == "inf" => Ok(Distance::Infinite),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad distance {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceKind {
    Exact,
    UpperBound,
    LowerBound,
}

impl fmt::Display for DistanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DistanceKind::Exact => "exact",
            DistanceKind::UpperBound => "upper bound",
            DistanceKind::LowerBound => "lower bound",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceResult {
    /// `None` when no bound was found (e.g. zero trials).
    pub value: Option<Distance>,
    pub kind: DistanceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Support of a nontrivial cycle of weight `value`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
}

impl DistanceResult {
    pub fn exact(value: Distance) -> Self {
        Self {
            value: Some(value),
            kind: DistanceKind::Exact,
            trials: None,
            seed: None,
            witness: None,
        }
    }

    fn with_witness(mut self, w: &BitVec) -> Self {
        self.witness = Some(w.iter_ones().collect());
        self
    }
}

/// Cycle space split as boundaries plus homology representatives.
struct CycleData {
    n: usize,
    boundaries: EchelonBasis,
    /// Rows: a basis of `B_i`.
    boundary_basis: Vec<BitVec>,
    reps: Vec<BitVec>,
}

impl CycleData {
    fn new(c: &ChainComplex, grade: usize) -> Result<Self, DistanceError> {
        let report = c.homology(grade, true)?;
        let boundaries = c.boundary_space(grade);
        let boundary_basis = (0..boundaries.rank()).map(|i| boundaries.basis_vector(i)).collect();
        let reps = report.representatives.expect("requested");
        Ok(Self {
            n: c.dim(grade),
            boundary_basis,
            reps: (0..reps.rows()).map(|r| reps.row(r)).collect(),
            boundaries,
        })
    }

    fn dim_cycles(&self) -> usize {
        self.boundary_basis.len() + self.reps.len()
    }
}

/// Exact distance at `grade`, examining at most `budget` candidate vectors.
///
/// When the whole cycle space fits in the budget it is swept in Gray-code
/// order over a basis of boundaries plus homology representatives, and a
/// vector is nontrivial iff it uses some representative. Otherwise vectors
/// are enumerated by increasing weight until a nontrivial cycle appears.
pub fn exhaustive_distance(
    c: &ChainComplex,
    grade: usize,
    budget: u64,
) -> Result<DistanceResult, DistanceError> {
    let data = CycleData::new(c, grade)?;
    if data.reps.is_empty() {
        return Ok(DistanceResult::exact(Distance::Infinite));
    }
    let dim = data.dim_cycles();
    let (weight, witness) = if dim < 64 && (1u64 << dim) <= budget {
        gray_sweep(&data)
    } else {
        let b = c.boundary_or_zero(grade);
        increasing_weight_search(&b, &data, budget)?
    };
    Ok(DistanceResult::exact(Distance::Finite(weight)).with_witness(&witness))
}

fn gray_sweep(data: &CycleData) -> (usize, BitVec) {
    let basis: Vec<&BitVec> = data.boundary_basis.iter().chain(&data.reps).collect();
    let first_rep = data.boundary_basis.len();
    let mut v = BitVec::zeros(data.n);
    let mut rep_mask = 0u64;
    let mut best: Option<(usize, BitVec)> = None;
    for i in 1u64..(1u64 << basis.len()) {
        let j = i.trailing_zeros() as usize;
        v.xor_assign(basis[j]);
        if j >= first_rep {
            rep_mask ^= 1 << (j - first_rep);
        }
        if rep_mask != 0 {
            let w = v.weight();
            if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
                best = Some((w, v.clone()));
            }
        }
    }
    best.expect("homology is nontrivial")
}

/// Walks weight-`w` supports in lexicographic order for `w = 1, 2, ...`,
/// keeping the syndrome up to date incrementally.
fn increasing_weight_search(
    b: &Gf2Matrix,
    data: &CycleData,
    budget: u64,
) -> Result<(usize, BitVec), DistanceError> {
    let n = data.n;
    let cols: Vec<BitVec> = {
        let t = b.transpose();
        (0..n).map(|i| t.row(i)).collect()
    };
    let mut spent = 0u64;
    for w in 1..=n {
        let mut support: Vec<usize> = Vec::with_capacity(w);
        let mut syndromes = vec![BitVec::zeros(b.rows())];
        let found = search_level(&cols, data, w, 0, &mut support, &mut syndromes, &mut spent, budget)?;
        if let Some(v) = found {
            return Ok((w, v));
        }
    }
    unreachable!("a nontrivial class has a representative of weight <= n")
}

#[allow(clippy::too_many_arguments)]
fn search_level(
    cols: &[BitVec],
    data: &CycleData,
    w: usize,
    start: usize,
    support: &mut Vec<usize>,
    syndromes: &mut Vec<BitVec>,
    spent: &mut u64,
    budget: u64,
) -> Result<Option<BitVec>, DistanceError> {
    let remaining = w - support.len();
    for i in start..=cols.len() - remaining {
        let mut s = syndromes.last().expect("nonempty").clone();
        s.xor_assign(&cols[i]);
        support.push(i);
        if remaining == 1 {
            *spent += 1;
            if *spent > budget {
                return Err(DistanceError::BudgetExceeded { budget });
            }
            if s.is_zero() {
                let v = BitVec::from_support(data.n, support.iter().copied());
                if !data.boundaries.contains(&v) {
                    return Ok(Some(v));
                }
            }
        } else {
            syndromes.push(s);
            let found = search_level(cols, data, w, i + 1, support, syndromes, spent, budget)?;
            syndromes.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        support.pop();
    }
    Ok(None)
}

/// Upper bound on the distance at `grade` from random information sets.
///
/// Trial `t` shuffles the coordinates with ChaCha8 stream `t` of `seed`,
/// brings a cycle basis to reduced echelon form in that order, and keeps its
/// rows that are not boundaries. Trials are independent, so the result
/// does not depend on how they are scheduled across threads.
pub fn randomized_distance_upper(
    c: &ChainComplex,
    grade: usize,
    trials: u64,
    seed: u64,
) -> Result<DistanceResult, DistanceError> {
    let data = CycleData::new(c, grade)?;
    if data.reps.is_empty() {
        let mut r = DistanceResult::exact(Distance::Infinite);
        r.trials = Some(trials);
        r.seed = Some(seed);
        return Ok(r);
    }
    let cycles = Gf2Matrix::from_bitvec_rows(
        data.n,
        &data.boundary_basis.iter().chain(&data.reps).cloned().collect::<Vec<_>>(),
    );
    let best = (0..trials)
        .into_par_iter()
        .filter_map(|t| information_set_trial(&cycles, &data, seed, t).map(|(w, v)| (w, t, v)))
        .min_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    let mut result = DistanceResult {
        value: best.as_ref().map(|(w, _, _)| Distance::Finite(*w)),
        kind: DistanceKind::UpperBound,
        trials: Some(trials),
        seed: Some(seed),
        witness: None,
    };
    if let Some((_, _, v)) = best {
        result = result.with_witness(&v);
    }
    Ok(result)
}

fn information_set_trial(
    cycles: &Gf2Matrix,
    data: &CycleData,
    seed: u64,
    trial: u64,
) -> Option<(usize, BitVec)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let mut order: Vec<usize> = (0..data.n).collect();
    order.shuffle(&mut rng);
    let reduced = cycles.select_columns(&order).row_reduce().transformed;
    let mut best: Option<(usize, BitVec)> = None;
    for r in 0..reduced.rows() {
        let w = reduced.row_weight(r);
        if w == 0 || best.as_ref().is_some_and(|(bw, _)| w >= *bw) {
            continue;
        }
        let v = BitVec::from_support(data.n, reduced.row_ones(r).map(|i| order[i]));
        if !data.boundaries.contains(&v) {
            best = Some((w, v));
        }
    }
    best
}

/// Exact distance at a grade whose boundary map has at most two ones per
/// column, so that the grade is the edge set of a graph (with one extra
/// vertex closing columns of weight below two).
///
/// Every edge carries the `k`-bit vector of its pairings with cohomology
/// representatives; a cycle is nontrivial iff these sum to nonzero. The
/// shortest closed walk with nonzero label sum, found by breadth-first search
/// over (vertex, label) pairs, has the weight of a lightest nontrivial cycle.
/// Runs in `O(V · (V + E) · 2^k)`; `max_states` caps `V · 2^k`.
pub fn graphlike_distance(
    c: &ChainComplex,
    grade: usize,
    max_states: u64,
) -> Result<DistanceResult, DistanceError> {
    check_grade(c, grade)?;
    let n = c.dim(grade);
    let co = c.transpose().homology(c.top_grade() - grade, true)?;
    let k = co.dim_homology;
    if k == 0 {
        return Ok(DistanceResult::exact(Distance::Infinite));
    }
    let virt = if grade == 0 { 0 } else { c.dim(grade - 1) };
    let vertices = virt + 1;
    let states = (vertices as u64).saturating_mul(1u64.checked_shl(k as u32).unwrap_or(u64::MAX));
    if k >= 32 || states > max_states {
        return Err(DistanceError::BudgetExceeded { budget: max_states });
    }
    let reps = co.representatives.expect("requested");
    let mut label = vec![0u32; n];
    for j in 0..k {
        for e in reps.row_ones(j) {
            label[e] |= 1 << j;
        }
    }
    let mut ends = vec![Vec::with_capacity(2); n];
    if let Some(b) = c.boundary(grade) {
        for (r, e) in b.entries() {
            ends[e].push(r);
        }
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vertices];
    for (e, vs) in ends.iter().enumerate() {
        let (u, v) = match vs[..] {
            [] => (virt, virt),
            [u] => (u, virt),
            [u, v] => (u, v),
            _ => return Err(DistanceError::NotGraphlike { grade, column: e }),
        };
        adj[u].push((v, e));
        if u != v {
            adj[v].push((u, e));
        }
    }

    let width = 1usize << k;
    let mut best: Option<(usize, BitVec)> = None;
    let mut dist = vec![usize::MAX; vertices * width];
    let mut parent = vec![(usize::MAX, usize::MAX); vertices * width];
    let mut queue = std::collections::VecDeque::new();
    for start in 0..vertices {
        dist.fill(usize::MAX);
        dist[start * width] = 0;
        queue.clear();
        queue.push_back(start * width);
        let bound = best.as_ref().map_or(usize::MAX, |b| b.0);
        let mut hit = None;
        while let Some(s) = queue.pop_front() {
            let (v, l) = (s / width, s % width);
            if dist[s] + 1 >= bound {
                break;
            }
            for &(w, e) in &adj[v] {
                let t = w * width + (l ^ label[e] as usize);
                if dist[t] == usize::MAX {
                    dist[t] = dist[s] + 1;
                    parent[t] = (s, e);
                    if w == start && t != start * width {
                        hit = Some(t);
                        break;
                    }
                    queue.push_back(t);
                }
            }
            if hit.is_some() {
                break;
            }
        }
        if let Some(mut t) = hit {
            let mut x = BitVec::zeros(n);
            while t != start * width {
                let (s, e) = parent[t];
                x.flip(e);
                t = s;
            }
            best = Some((dist[hit.unwrap()], x));
        }
    }
    let (_, x) = best.expect("a nontrivial class has a cycle");
    // Cancelling repeated edges can only lighten the walk, and it stays
    // nontrivial, so the reduced walk is optimal.
    Ok(DistanceResult::exact(Distance::Finite(x.weight())).with_witness(&x))
}

/// `d^grade` from [`graphlike_distance`] on the dual complex.
pub fn cohomological_graphlike_distance(
    c: &ChainComplex,
    grade: usize,
    max_states: u64,
) -> Result<DistanceResult, DistanceError> {
    check_grade(c, grade)?;
    graphlike_distance(&c.transpose(), c.top_grade() - grade, max_states)
}

/// `d^grade`: exhaustive distance on the dual complex.
pub fn cohomological_exhaustive_distance(
    c: &ChainComplex,
    grade: usize,
    budget: u64,
) -> Result<DistanceResult, DistanceError> {
    check_grade(c, grade)?;
    exhaustive_distance(&c.transpose(), c.top_grade() - grade, budget)
}

/// `d^grade` upper bound on the dual complex.
pub fn cohomological_randomized_distance_upper(
    c: &ChainComplex,
    grade: usize,
    trials: u64,
    seed: u64,
) -> Result<DistanceResult, DistanceError> {
    check_grade(c, grade)?;
    randomized_distance_upper(&c.transpose(), c.top_grade() - grade, trials, seed)
}

fn check_grade(c: &ChainComplex, grade: usize) -> Result<(), DistanceError> {
    if grade > c.top_grade() {
        Err(ComplexError::GradeOutOfRange {
            grade,
            top: c.top_grade(),
        }
        .into())
    } else {
        Ok(())
    }
}

/// `min(d_{i−1}(A)·d_1(B), d_i(A)·d_0(B))`, with distances at grades
/// outside `A` taken as `∞`.
pub fn zp_formula(a: &[Distance], b: [Distance; 2], i: usize) -> Distance {
    let da = |g: Option<usize>| g.and_then(|g| a.get(g).copied()).unwrap_or(Distance::Infinite);
    let lower = da(i.checked_sub(1)).times(b[1]);
    let same = da(Some(i)).times(b[0]);
    lower.min(same)
}

/// Exact distance of `A ⊗ B` at grade `i` for a 2-term `B`, from exact
/// distances of the factors listed grade 0 first. Feeding cohomological
/// distances gives the cohomological distance of the product.
pub fn zp_product_distance(
    a: &ChainComplex,
    b: &ChainComplex,
    i: usize,
    a_distances: &[DistanceResult],
    b_distances: &[DistanceResult],
) -> Result<DistanceResult, DistanceError> {
    if b.num_terms() != 2 {
        return Err(DistanceError::NotTwoTerm {
            terms: b.num_terms(),
        });
    }
    let a_vals = exact_values("first", a_distances, a.num_terms())?;
    let b_vals = exact_values("second", b_distances, 2)?;
    Ok(DistanceResult::exact(zp_formula(&a_vals, [b_vals[0], b_vals[1]], i)))
}

/// Cohomological twin of [`zp_product_distance`]; same formula on `d^i`.
pub fn zp_product_codistance(
    a: &ChainComplex,
    b: &ChainComplex,
    i: usize,
    a_codistances: &[DistanceResult],
    b_codistances: &[DistanceResult],
) -> Result<DistanceResult, DistanceError> {
    zp_product_distance(a, b, i, a_codistances, b_codistances)
}

fn exact_values(
    factor: &'static str,
    ds: &[DistanceResult],
    expected: usize,
) -> Result<Vec<Distance>, DistanceError> {
    if ds.len() != expected {
        return Err(DistanceError::DistanceCount {
            factor,
            expected,
            got: ds.len(),
        });
    }
    ds.iter()
        .enumerate()
        .map(|(grade, d)| {
            if d.kind != DistanceKind::Exact {
                return Err(DistanceError::NotExact {
                    factor,
                    grade,
                    kind: d.kind,
                });
            }
            d.value.ok_or(DistanceError::Missing { factor, grade })
        })
        .collect()
}
