//! Dense bit-packed linear algebra over F2.
//!
//! Rows are stored as runs of 64-bit words. Bits past the last column of a
//! row are always zero, so derived `PartialEq`/`Hash` compare matrices by value.

use std::fmt;

use thiserror::Error;

pub(crate) const WORD_BITS: usize = 64;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

#[inline]
fn tail_mask(bits: usize) -> u64 {
    match bits % WORD_BITS {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("{op}: incompatible shapes {left:?} and {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{op}: vector of length {got} where {expected} was expected")]
    LengthMismatch {
        op: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("entry ({row}, {col}) lies outside a {rows}x{cols} matrix")]
    OutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
}

/// A bit-packed vector over F2.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Builds a vector from its support. Repeated indices cancel.
    pub fn from_support(len: usize, support: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in support {
            assert!(i < len, "index {i} out of range for length {len}");
            v.flip(i);
        }
        v
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        Self::from_support(
            bits.len(),
            bits.iter()
                .enumerate()
                .filter(|(_, &b)| b & 1 == 1)
                .map(|(i, _)| i),
        )
    }

    pub(crate) fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(len);
        }
        Self { len, words }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Inner product over F2.
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        iter_word_ones(&self.words)
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec[")?;
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        write!(f, "]")
    }
}

pub(crate) fn iter_word_ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD_BITS + b)
            }
        })
    })
}

#[inline]
fn xor_words(dst: &mut [u64], src: &[u64]) {
    for (a, b) in dst.iter_mut().zip(src) {
        *a ^= b;
    }
}

/// Dense binary matrix, row-major, 64 entries per word.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

/// Reduced row echelon form of a matrix together with its pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowEchelonResult {
    pub rank: usize,
    pub pivot_columns: Vec<usize>,
    pub transformed: Gf2Matrix,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from dense 0/1 rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "ragged row {i}");
            for (j, &b) in row.iter().enumerate() {
                if b & 1 == 1 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Builds a matrix from coordinates of its nonzero entries. Repeated
    /// coordinates cancel in pairs, matching addition over F2.
    pub fn from_coords(
        rows: usize,
        cols: usize,
        coords: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, Gf2Error> {
        let mut m = Self::zeros(rows, cols);
        for (r, c) in coords {
            if r >= rows || c >= cols {
                return Err(Gf2Error::OutOfBounds {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            m.flip(r, c);
        }
        Ok(m)
    }

    /// Stacks vectors of equal length as rows.
    pub fn from_bitvec_rows(cols: usize, rows: &[BitVec]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, v) in rows.iter().enumerate() {
            assert_eq!(v.len(), cols, "row {i} has the wrong length");
            m.row_words_mut(i).copy_from_slice(v.words());
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "({r}, {c}) out of bounds");
        let w = &mut self.data[r * self.stride + c / WORD_BITS];
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        assert!(r < self.rows && c < self.cols, "({r}, {c}) out of bounds");
        self.data[r * self.stride + c / WORD_BITS] ^= 1u64 << (c % WORD_BITS);
    }

    #[inline]
    pub(crate) fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub(crate) fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVec {
        BitVec::from_words(self.cols, self.row_words(r).to_vec())
    }

    pub fn row_ones(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        iter_word_ones(self.row_words(r))
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn row_weights(&self) -> Vec<usize> {
        (0..self.rows).map(|r| self.row_weight(r)).collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for (_, c) in self.entries() {
            w[c] += 1;
        }
        w
    }

    /// Number of nonzero entries.
    pub fn nnz(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Nonzero coordinates in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows).flat_map(move |r| self.row_ones(r).map(move |c| (r, c)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (r, c) in self.entries() {
            t.set(c, r, true);
        }
        t
    }

    /// Matrix product `self * other`.
    pub fn multiply(&self, other: &Gf2Matrix) -> Result<Gf2Matrix, Gf2Error> {
        if self.cols != other.rows {
            return Err(Gf2Error::DimensionMismatch {
                op: "multiply",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let (lo, hi) = (r * out.stride, (r + 1) * out.stride);
            for k in self.row_ones(r) {
                xor_words(&mut out.data[lo..hi], other.row_words(k));
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `self * v`.
    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec, Gf2Error> {
        if v.len() != self.cols {
            return Err(Gf2Error::LengthMismatch {
                op: "mul_vec",
                expected: self.cols,
                got: v.len(),
            });
        }
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self
                .row_words(r)
                .iter()
                .zip(v.words())
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones());
            if parity & 1 == 1 {
                out.flip(r);
            }
        }
        Ok(out)
    }

    /// Entrywise sum over F2.
    pub fn add(&self, other: &Gf2Matrix) -> Result<Gf2Matrix, Gf2Error> {
        if self.shape() != other.shape() {
            return Err(Gf2Error::DimensionMismatch {
                op: "add",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = self.clone();
        xor_words(&mut out.data, &other.data);
        Ok(out)
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Gf2Matrix) -> Result<Gf2Matrix, Gf2Error> {
        if self.rows != other.rows {
            return Err(Gf2Error::DimensionMismatch {
                op: "hstack",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for (r, c) in self.entries() {
            out.set(r, c, true);
        }
        for (r, c) in other.entries() {
            out.set(r, self.cols + c, true);
        }
        Ok(out)
    }

    /// Places `other` below `self`.
    pub fn vstack(&self, other: &Gf2Matrix) -> Result<Gf2Matrix, Gf2Error> {
        if self.cols != other.cols {
            return Err(Gf2Error::DimensionMismatch {
                op: "vstack",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            stride: self.stride,
            data,
        })
    }

    /// Kronecker product `self ⊗ other`; row `(i, k)` maps to `i * other.rows + k`.
    pub fn kron(&self, other: &Gf2Matrix) -> Gf2Matrix {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for (i, j) in self.entries() {
            for (k, l) in other.entries() {
                out.set(i * other.rows + k, j * other.cols + l, true);
            }
        }
        out
    }

    /// Copy with columns reordered so that new column `j` is old column `order[j]`.
    pub fn select_columns(&self, order: &[usize]) -> Gf2Matrix {
        let mut out = Self::zeros(self.rows, order.len());
        for r in 0..self.rows {
            for (j, &src) in order.iter().enumerate() {
                if self.get(r, src) {
                    out.set(r, j, true);
                }
            }
        }
        out
    }

    /// Rank over F2.
    ///
    /// Rows are inserted one by one into an echelon basis. Each stored row
    /// remembers the extent of its nonzero words, so banded and block-sparse
    /// matrices only touch the words they occupy.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let mut basis = EchelonBasis::new(self.cols);
        let mut scratch = vec![0u64; self.stride];
        for r in 0..self.rows {
            scratch.copy_from_slice(self.row_words(r));
            basis.insert_words(&mut scratch);
            if basis.rank() == self.cols {
                break;
            }
        }
        basis.rank()
    }

    /// Reduced row echelon form. Pivots are chosen as the first row (in order)
    /// with a nonzero entry in the current column, so output is deterministic.
    pub fn row_reduce(&self) -> RowEchelonResult {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let wi = c / WORD_BITS;
            let mask = 1u64 << (c % WORD_BITS);
            let Some(p) = (r..self.rows).find(|&i| m.data[i * m.stride + wi] & mask != 0) else {
                continue;
            };
            if p != r {
                for w in 0..m.stride {
                    m.data.swap(p * m.stride + w, r * m.stride + w);
                }
            }
            let pivot: Vec<u64> = m.row_words(r)[wi..].to_vec();
            for i in 0..self.rows {
                if i != r && m.data[i * m.stride + wi] & mask != 0 {
                    let start = i * m.stride + wi;
                    xor_words(&mut m.data[start..start + pivot.len()], &pivot);
                }
            }
            pivots.push(c);
            r += 1;
        }
        RowEchelonResult {
            rank: pivots.len(),
            pivot_columns: pivots,
            transformed: m,
        }
    }

    /// Basis of the right kernel `{x : self * x = 0}`, one vector per row.
    ///
    /// A matrix with no rows has the identity as kernel basis.
    pub fn kernel_basis(&self) -> Gf2Matrix {
        let rref = self.row_reduce();
        let mut is_pivot = vec![false; self.cols];
        for &p in &rref.pivot_columns {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut out = Self::zeros(free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            out.set(k, f, true);
            for (row, &p) in rref.pivot_columns.iter().enumerate() {
                if rref.transformed.get(row, f) {
                    out.set(k, p, true);
                }
            }
        }
        out
    }

    /// Whether `v` lies in the span of the rows.
    pub fn in_row_space(&self, v: &BitVec) -> Result<bool, Gf2Error> {
        if v.len() != self.cols {
            return Err(Gf2Error::LengthMismatch {
                op: "in_row_space",
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok(EchelonBasis::from_matrix_rows(self).contains(v))
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows.min(64) {
            write!(f, "  ")?;
            for c in 0..self.cols.min(128) {
                write!(f, "{}", self.get(r, c) as u8)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            for c in 0..self.cols {
                write!(f, "{}", if self.get(r, c) { '1' } else { '.' })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

const NO_PIVOT: u32 = u32::MAX;

/// Incrementally built echelon basis of a subspace of F2^n.
///
/// Every stored row has a distinct leading column; rows are not back-reduced.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    len: usize,
    stride: usize,
    data: Vec<u64>,
    leads: Vec<usize>,
    extents: Vec<usize>,
    pivot_of_col: Vec<u32>,
}

impl EchelonBasis {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            stride: words_for(len),
            data: Vec::new(),
            leads: Vec::new(),
            extents: Vec::new(),
            pivot_of_col: vec![NO_PIVOT; len],
        }
    }

    pub fn from_matrix_rows(m: &Gf2Matrix) -> Self {
        let mut basis = Self::new(m.cols());
        let mut scratch = vec![0u64; m.stride];
        for r in 0..m.rows() {
            scratch.copy_from_slice(m.row_words(r));
            basis.insert_words(&mut scratch);
        }
        basis
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.leads.len()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.leads.is_empty()
    }

    pub fn leading_columns(&self) -> &[usize] {
        &self.leads
    }

    pub fn basis_vector(&self, i: usize) -> BitVec {
        BitVec::from_words(self.len, self.data[i * self.stride..(i + 1) * self.stride].to_vec())
    }

    /// Eliminates pivots from `v` in place until its lowest set bit has no
    /// pivot. Returns that bit, or `None` when `v` reduced to zero.
    fn reduce_words(&self, v: &mut [u64]) -> Option<usize> {
        let mut extent = v.iter().rposition(|&w| w != 0)? + 1;
        let mut wi = 0;
        loop {
            while wi < extent && v[wi] == 0 {
                wi += 1;
            }
            if wi == extent {
                return None;
            }
            let c = wi * WORD_BITS + v[wi].trailing_zeros() as usize;
            let p = self.pivot_of_col[c];
            if p == NO_PIVOT {
                return Some(c);
            }
            let p = p as usize;
            let pe = self.extents[p];
            let row = &self.data[p * self.stride..p * self.stride + pe];
            xor_words(&mut v[wi..pe], &row[wi..]);
            extent = extent.max(pe);
        }
    }

    pub(crate) fn insert_words(&mut self, v: &mut [u64]) -> bool {
        debug_assert_eq!(v.len(), self.stride);
        match self.reduce_words(v) {
            None => false,
            Some(lead) => {
                let extent = v.iter().rposition(|&w| w != 0).map_or(0, |e| e + 1);
                self.pivot_of_col[lead] = self.leads.len() as u32;
                self.leads.push(lead);
                self.extents.push(extent);
                self.data.extend_from_slice(v);
                true
            }
        }
    }

    /// Adds `v` to the basis; returns false when it was already in the span.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        assert_eq!(v.len(), self.len, "vector length does not match basis");
        let mut w = v.words().to_vec();
        self.insert_words(&mut w)
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        assert_eq!(v.len(), self.len, "vector length does not match basis");
        let mut w = v.words().to_vec();
        self.reduce_words(&mut w).is_none()
    }

    /// `v` minus basis vectors, stopped at the first set bit without a pivot.
    /// All bits below the returned vector's lowest set bit are zero.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.len, "vector length does not match basis");
        let mut w = v.words().to_vec();
        self.reduce_words(&mut w);
        BitVec::from_words(self.len, w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rows: usize, cols: usize, density: f64, seed: u64) -> Gf2Matrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = Gf2Matrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if rng.random_bool(density) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    // Independent elimination over Vec<Vec<u8>>; shares nothing with the
    // packed implementation.
    fn naive_rank(m: &Gf2Matrix) -> usize {
        let mut a: Vec<Vec<u8>> = (0..m.rows())
            .map(|r| (0..m.cols()).map(|c| m.get(r, c) as u8).collect())
            .collect();
        let mut rank = 0;
        for c in 0..m.cols() {
            if let Some(p) = (rank..a.len()).find(|&r| a[r][c] == 1) {
                a.swap(rank, p);
                for r in 0..a.len() {
                    if r != rank && a[r][c] == 1 {
                        for k in 0..m.cols() {
                            a[r][k] ^= a[rank][k];
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    fn hamming_pcm() -> Gf2Matrix {
        Gf2Matrix::from_rows(&[
            [1, 0, 1, 0, 1, 0, 1],
            [0, 1, 1, 0, 0, 1, 1],
            [0, 0, 0, 1, 1, 1, 1],
        ])
    }

    #[test]
    fn identity_is_a_left_unit() {
        let m = random_matrix(3, 10, 0.5, 1);
        assert_eq!(Gf2Matrix::identity(3).multiply(&m).unwrap(), m);
    }

    #[test]
    fn two_bit_parity_product() {
        let a = Gf2Matrix::from_rows(&[[1, 1], [0, 1]]);
        let b = Gf2Matrix::from_rows(&[[1], [1]]);
        assert_eq!(a.multiply(&b).unwrap(), Gf2Matrix::from_rows(&[[0], [1]]));
    }

    #[test]
    fn multiply_reports_both_shapes() {
        let err = Gf2Matrix::zeros(2, 3).multiply(&Gf2Matrix::zeros(2, 3)).unwrap_err();
        assert_eq!(
            err,
            Gf2Error::DimensionMismatch {
                op: "multiply",
                left: (2, 3),
                right: (2, 3)
            }
        );
        assert!(err.to_string().contains("(2, 3)"));
    }

    #[test]
    fn rank_edge_cases() {
        assert_eq!(Gf2Matrix::zeros(5, 5).rank(), 0);
        assert_eq!(Gf2Matrix::zeros(0, 7).rank(), 0);
        assert_eq!(Gf2Matrix::zeros(7, 0).rank(), 0);
        let cyclic = Gf2Matrix::from_coords(15, 15, (0..15).flat_map(|i| [(i, i), (i, (i + 1) % 15)])).unwrap();
        assert_eq!(cyclic.rank(), 14);
    }

    #[test]
    fn kernel_basis_small_cases() {
        assert_eq!(Gf2Matrix::identity(4).kernel_basis().rows(), 0);
        let parity = Gf2Matrix::from_rows(&[[1, 1]]);
        assert_eq!(parity.kernel_basis(), Gf2Matrix::from_rows(&[[1, 1]]));
        let empty = Gf2Matrix::zeros(0, 3);
        assert_eq!(empty.kernel_basis(), Gf2Matrix::identity(3));
    }

    #[test]
    fn hamming_kernel_matches_enumeration() {
        let h = hamming_pcm();
        let kernel = h.kernel_basis();
        assert_eq!(kernel.rows(), 4);
        assert!(h.multiply(&kernel.transpose()).unwrap().is_zero());
        // Enumerate all 128 words and compare the code to the span of the basis.
        let span = EchelonBasis::from_matrix_rows(&kernel);
        let mut codewords = 0;
        for x in 0u32..128 {
            let v = BitVec::from_support(7, (0..7).filter(|i| x >> i & 1 == 1));
            let in_code = h.mul_vec(&v).unwrap().is_zero();
            assert_eq!(in_code, span.contains(&v));
            codewords += in_code as usize;
        }
        assert_eq!(codewords, 16);
    }

    #[test]
    fn row_reduce_examples() {
        let reduced = Gf2Matrix::from_rows(&[[1, 0, 1], [0, 1, 1]]);
        let res = reduced.row_reduce();
        assert_eq!(res.transformed, reduced);
        assert_eq!(res.pivot_columns, vec![0, 1]);

        let res = Gf2Matrix::from_rows(&[[1, 1], [1, 1]]).row_reduce();
        assert_eq!(res.rank, 1);
        assert_eq!(res.pivot_columns, vec![0]);
    }

    #[test]
    fn row_reduce_rank_matches_naive_oracle() {
        for seed in 0..20 {
            let m = random_matrix(20, 30, 0.2, seed);
            let res = m.row_reduce();
            assert_eq!(res.rank, naive_rank(&m), "seed {seed}");
            assert_eq!(m.rank(), res.rank);
            assert!(res.pivot_columns.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn in_row_space_examples() {
        let v = BitVec::from_bits(&[1, 0, 1, 1]);
        assert!(Gf2Matrix::identity(4).in_row_space(&v).unwrap());
        let m = Gf2Matrix::from_rows(&[[1, 1]]);
        assert!(!m.in_row_space(&BitVec::from_bits(&[1, 0])).unwrap());
        assert!(m.in_row_space(&BitVec::from_bits(&[1, 1])).unwrap());
        assert!(matches!(
            m.in_row_space(&BitVec::zeros(3)),
            Err(Gf2Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn padding_bits_stay_clear() {
        let m = random_matrix(5, 70, 0.5, 9);
        for r in 0..5 {
            assert_eq!(m.row_words(r)[1] >> 6, 0);
        }
        let t = m.transpose().transpose();
        assert_eq!(t, m);
    }

    #[test]
    fn kron_shape_and_entries() {
        let a = Gf2Matrix::from_rows(&[[1, 1]]);
        let b = Gf2Matrix::identity(2);
        let k = a.kron(&b);
        assert_eq!(k, Gf2Matrix::from_rows(&[[1, 0, 1, 0], [0, 1, 0, 1]]));
    }

    fn arb_matrix(max: usize) -> impl Strategy<Value = Gf2Matrix> {
        (0..max, 0..max, any::<u64>()).prop_map(|(r, c, seed)| random_matrix(r, c, 0.3, seed))
    }

    proptest! {
        #[test]
        fn multiply_is_associative_and_distributive(
            (a, b, b2, c) in (1usize..12, 1usize..12, 1usize..12, 1usize..12, any::<u64>())
                .prop_map(|(m, n, p, q, s)| (
                    random_matrix(m, n, 0.4, s),
                    random_matrix(n, p, 0.4, s ^ 1),
                    random_matrix(n, p, 0.4, s ^ 2),
                    random_matrix(p, q, 0.4, s ^ 3),
                ))
        ) {
            let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            let sum = a.multiply(&b.add(&b2).unwrap()).unwrap();
            let parts = a.multiply(&b).unwrap().add(&a.multiply(&b2).unwrap()).unwrap();
            prop_assert_eq!(sum, parts);
        }

        #[test]
        fn rank_is_transpose_invariant(m in arb_matrix(40)) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn rank_nullity(m in arb_matrix(40)) {
            let kernel = m.kernel_basis();
            prop_assert_eq!(m.rank() + kernel.rows(), m.cols());
            prop_assert!(m.multiply(&kernel.transpose()).unwrap().is_zero());
        }

        #[test]
        fn row_reduce_is_idempotent(m in arb_matrix(40)) {
            let once = m.row_reduce();
            let twice = once.transformed.row_reduce();
            prop_assert_eq!(&once.transformed, &twice.transformed);
            prop_assert_eq!(once.pivot_columns, twice.pivot_columns);
        }

        #[test]
        fn row_space_membership_matches_echelon(m in arb_matrix(20), seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            // A random combination of rows is always in the span.
            let mut v = BitVec::zeros(m.cols());
            for r in 0..m.rows() {
                if rng.random_bool(0.5) {
                    v.xor_assign(&m.row(r));
                }
            }
            prop_assert!(m.in_row_space(&v).unwrap());
            let mut extended = m.clone();
            if m.cols() > 0 {
                let u = BitVec::from_support(m.cols(), [rng.random_range(0..m.cols())]);
                let inside = m.in_row_space(&u).unwrap();
                extended = extended.vstack(&Gf2Matrix::from_bitvec_rows(m.cols(), &[u])).unwrap();
                prop_assert_eq!(inside, extended.rank() == m.rank());
            }
        }
    }
}
