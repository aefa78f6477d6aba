//! Brute-force oracles that share no code with the library beyond reading
//! matrix entries.

#![allow(dead_code)]

use modqec::complex::{
    random_ldpc_complex, repetition_complex, steane_complex, surface_complex, ChainComplex,
    LdpcShape, Topology,
};
use modqec::gf2::Gf2Matrix;
use modqec::product::tensor_product;

/// Largest grade the Gray-code sweep will enumerate.
pub const MAX_BITS: usize = 24;

/// Rows of `m` as bitmasks (`m.cols() ≤ 128`).
fn rows_u128(m: &Gf2Matrix) -> Vec<u128> {
    assert!(m.cols() <= 128);
    let mut rows = vec![0u128; m.rows()];
    for (r, c) in m.entries() {
        rows[r] |= 1 << c;
    }
    rows
}

/// Columns of `m` as bitmasks (`m.rows() ≤ 128`).
fn cols_u128(m: &Gf2Matrix) -> Vec<u128> {
    assert!(m.rows() <= 128);
    let mut cols = vec![0u128; m.cols()];
    for (r, c) in m.entries() {
        cols[c] |= 1 << r;
    }
    cols
}

/// Basis of `{y ∈ F2^n : y·v = 0 for all v in vs}`.
pub fn orthogonal_complement(vs: &[u128], n: usize) -> Vec<u128> {
    let mut pivots: Vec<(usize, u128)> = Vec::new();
    for &v in vs {
        let mut v = v;
        for &(p, row) in &pivots {
            if v >> p & 1 == 1 {
                v ^= row;
            }
        }
        if v == 0 {
            continue;
        }
        let p = v.trailing_zeros() as usize;
        for (_, row) in pivots.iter_mut() {
            if *row >> p & 1 == 1 {
                *row ^= v;
            }
        }
        pivots.push((p, v));
    }
    let is_pivot = |j: usize| pivots.iter().any(|&(p, _)| p == j);
    (0..n)
        .filter(|&j| !is_pivot(j))
        .map(|free| {
            let mut y = 1u128 << free;
            for &(p, row) in &pivots {
                if row >> free & 1 == 1 {
                    y |= 1 << p;
                }
            }
            y
        })
        .collect()
}

/// Least weight of `x ∈ F2^n` with zero syndrome that pairs oddly with some
/// test vector; `None` if there is none.
fn sweep(n: usize, syndrome: &[u128], tests: &[u128]) -> Option<usize> {
    assert!(n <= MAX_BITS, "{n} bits is too many to enumerate");
    assert!(tests.len() <= 64);
    let pair: Vec<u64> = (0..n)
        .map(|e| {
            tests
                .iter()
                .enumerate()
                .filter(|(_, t)| *t >> e & 1 == 1)
                .fold(0u64, |acc, (j, _)| acc | 1 << j)
        })
        .collect();
    let (mut s, mut p, mut x) = (0u128, 0u64, 0u32);
    let mut best: Option<usize> = None;
    for i in 1u32..(1u32 << n) {
        let b = i.trailing_zeros() as usize;
        s ^= syndrome[b];
        p ^= pair[b];
        x ^= 1 << b;
        if s == 0 && p != 0 {
            let w = x.count_ones() as usize;
            if best.is_none_or(|d| w < d) {
                best = Some(w);
            }
        }
    }
    best
}

/// `d_grade(c)` by enumerating all of `C_grade`.
pub fn brute_distance(c: &ChainComplex, grade: usize) -> Option<usize> {
    let n = c.dim(grade);
    let syndrome = match c.boundary(grade) {
        Some(b) => cols_u128(b),
        None => vec![0; n],
    };
    let boundaries = c.boundary(grade + 1).map(cols_u128).unwrap_or_default();
    sweep(n, &syndrome, &orthogonal_complement(&boundaries, n))
}

/// `d^grade(c)` by enumerating all of `C^grade`.
pub fn brute_codistance(c: &ChainComplex, grade: usize) -> Option<usize> {
    let n = c.dim(grade);
    let syndrome = match c.boundary(grade + 1) {
        Some(b) => rows_u128(b),
        None => vec![0; n],
    };
    let coboundaries = c.boundary(grade).map(rows_u128).unwrap_or_default();
    sweep(n, &syndrome, &orthogonal_complement(&coboundaries, n))
}

/// Minimum weight of a nonzero vector in `ker h` by enumerating the kernel
/// span (`h.cols() ≤ 128`, kernel dimension ≤ 24). `None` for a trivial kernel.
pub fn brute_distance_via_kernel(h: &Gf2Matrix) -> Option<usize> {
    let basis = orthogonal_complement(&rows_u128(h), h.cols());
    assert!(basis.len() <= MAX_BITS);
    let mut v = 0u128;
    let mut best: Option<usize> = None;
    for i in 1u32..(1u32 << basis.len()) {
        v ^= basis[i.trailing_zeros() as usize];
        let w = v.count_ones() as usize;
        if best.is_none_or(|d| w < d) {
            best = Some(w);
        }
    }
    best
}

/// Rank over F2 by elimination on bitmasks.
pub fn brute_rank(m: &Gf2Matrix) -> usize {
    let rows = rows_u128(m);
    m.cols() - orthogonal_complement(&rows, m.cols()).len()
}

fn random_pcm(rows: usize, cols: usize, rank: usize, seed: u64) -> ChainComplex {
    random_ldpc_complex(&LdpcShape::new(rows, cols, cols.min(3), rows.min(2)), rank, seed).unwrap()
}

/// Small (3-term A, 2-term B) pairs whose product has every grade small
/// enough to enumerate.
pub fn zp_pairs() -> Vec<(String, ChainComplex, ChainComplex)> {
    let rep = |l, t| repetition_complex(l, t).unwrap();
    let open2 = rep(2, Topology::Open);
    let open3 = rep(3, Topology::Open);
    let cyc2 = rep(2, Topology::Cyclic);
    let cyc3 = rep(3, Topology::Cyclic);
    let tensor = |a: &ChainComplex, b: &ChainComplex| tensor_product(a, b).unwrap().complex;
    let mut pairs: Vec<(String, ChainComplex, ChainComplex)> = [
        ("surface(2) x cyclic(3)", surface_complex(2).unwrap(), cyc3.clone()),
        ("surface(2) x open(3)", surface_complex(2).unwrap(), open3.clone()),
        ("surface(2) x cyclic(2)", surface_complex(2).unwrap(), cyc2.clone()),
        ("steane x cyclic(2)", steane_complex(), cyc2.clone()),
        ("steane x open(2)", steane_complex(), open2.clone()),
        ("(open2 x cyclic3) x open(2)", tensor(&open2, &cyc3), open2.clone()),
        ("(cyclic2 x cyclic2) x open(2)", tensor(&cyc2, &cyc2), open2.clone()),
        ("(open2 x open3) x open(2)", tensor(&open2, &open3), open2.clone()),
    ]
    .into_iter()
    .map(|(n, a, b)| (n.to_string(), a, b))
    .collect();
    for seed in 0..4 {
        let c = random_pcm(1, 3, 1, seed + 10);
        let a = if seed % 2 == 0 { tensor(&c, &open2) } else { tensor(&open2, &c) };
        pairs.push((format!("random pair {seed}"), a, random_pcm(1, 3, 1, seed)));
    }
    pairs
}

/// Compares `zp` (the library's product formula fed brute-force factor
/// distances) with brute force on the product, at every grade, both
/// homologically and cohomologically. Returns the number of grade checks.
pub fn check_zp_pair(
    a: &ChainComplex,
    b: &ChainComplex,
    zp: impl Fn(&[Option<usize>], &[Option<usize>], usize, bool) -> Option<usize>,
) -> Result<usize, String> {
    let e = tensor_product(a, b).map_err(|e| e.to_string())?.complex;
    let mut checks = 0;
    for co in [false, true] {
        let d = |c: &ChainComplex, g| if co { brute_codistance(c, g) } else { brute_distance(c, g) };
        let da: Vec<_> = (0..a.num_terms()).map(|g| d(a, g)).collect();
        let db: Vec<_> = (0..b.num_terms()).map(|g| d(b, g)).collect();
        for i in 0..e.num_terms() {
            if e.dim(i) > MAX_BITS {
                return Err(format!("grade {i} has {} elements", e.dim(i)));
            }
            let brute = d(&e, i);
            let formula = zp(&da, &db, i, co);
            if brute != formula {
                return Err(format!(
                    "{} grade {i}: brute force {brute:?}, formula {formula:?} (A {da:?}, B {db:?})",
                    if co { "cohomological" } else { "homological" }
                ));
            }
            checks += 1;
        }
    }
    Ok(checks)
}
