//! Basis permutations acting on complexes: automorphisms, cyclic group
//! actions, and connections that twist a fiber along a base.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ProductError;
use crate::complex::ChainComplex;

/// A bijection on `0..n`, stored as the image of each index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl TryFrom<Vec<usize>> for Permutation {
    type Error = ProductError;

    fn try_from(images: Vec<usize>) -> Result<Self, Self::Error> {
        Self::from_images(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, ProductError> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(ProductError::InvalidPermutation(images));
            }
        }
        Ok(Self(images))
    }

    /// `i ↦ i + shift (mod n)` inside every consecutive block of `n` indices.
    pub fn block_shift(len: usize, n: usize, shift: usize) -> Self {
        Self(
            (0..len)
                .map(|i| i - i % n + (i % n + shift) % n)
                .collect(),
        )
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Self(inv)
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(self.len(), other.len(), "composing permutations of different sizes");
        Self(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::identity(self.len());
        for _ in 0..k {
            out = self.compose(&out);
        }
        out
    }

    /// Cycle lengths, in order of each cycle's smallest element.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i];
                len += 1;
            }
            out.push(len);
        }
        out
    }
}

/// One permutation per grade (grade 0 first) that commutes with every
/// boundary of the complex it acts on.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComplexAutomorphism {
    perms: Vec<Permutation>,
}

impl ComplexAutomorphism {
    pub fn new(perms: Vec<Permutation>) -> Self {
        Self { perms }
    }

    pub fn identity(complex: &ChainComplex) -> Self {
        Self {
            perms: complex.dims().iter().map(|&d| Permutation::identity(d)).collect(),
        }
    }

    /// The same block shift on every grade.
    pub fn block_shift(dims: &[usize], block: usize, shift: usize) -> Self {
        Self {
            perms: dims
                .iter()
                .map(|&d| Permutation::block_shift(d, block, shift))
                .collect(),
        }
    }

    pub fn permutation(&self, grade: usize) -> &Permutation {
        &self.perms[grade]
    }

    pub fn permutations(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn num_grades(&self) -> usize {
        self.perms.len()
    }

    pub fn is_identity(&self) -> bool {
        self.perms.iter().all(Permutation::is_identity)
    }

    pub fn inverse(&self) -> Self {
        Self {
            perms: self.perms.iter().map(Permutation::inverse).collect(),
        }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            perms: self
                .perms
                .iter()
                .zip(&other.perms)
                .map(|(a, b)| a.compose(b))
                .collect(),
        }
    }

    pub fn pow(&self, k: usize) -> Self {
        Self {
            perms: self.perms.iter().map(|p| p.pow(k)).collect(),
        }
    }

    /// Checks that grade sizes match and `∂_j P_j = P_{j-1} ∂_j` for every `j`.
    pub fn check_on(&self, complex: &ChainComplex) -> Result<(), ProductError> {
        if self.perms.len() != complex.num_terms()
            || self.perms.iter().zip(complex.dims()).any(|(p, &d)| p.len() != d)
        {
            return Err(ProductError::ActionShape {
                expected: complex.dims().to_vec(),
                got: self.perms.iter().map(Permutation::len).collect(),
            });
        }
        for grade in 1..=complex.top_grade() {
            let b = complex.boundary(grade).expect("grade in range");
            let (down, up) = (&self.perms[grade - 1], &self.perms[grade]);
            // A permutation pair preserves the matrix iff it maps its support
            // into itself.
            if b.entries().any(|(r, c)| !b.get(down.apply(r), up.apply(c))) {
                return Err(ProductError::NonCommuting { grade });
            }
        }
        Ok(())
    }
}

/// Action of the cyclic group `Z_order` on a based complex, given by the
/// permutation of a generator on every grade.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupAction {
    order: usize,
    generator: ComplexAutomorphism,
}

impl GroupAction {
    pub fn new(order: usize, generator: ComplexAutomorphism) -> Result<Self, ProductError> {
        if order == 0 {
            return Err(ProductError::InvalidAction("group order must be >= 1".into()));
        }
        for (grade, p) in generator.permutations().iter().enumerate() {
            if !p.pow(order).is_identity() {
                return Err(ProductError::InvalidAction(format!(
                    "generator order does not divide {order} on grade {grade}"
                )));
            }
        }
        Ok(Self { order, generator })
    }

    pub fn trivial(complex: &ChainComplex) -> Self {
        Self {
            order: 1,
            generator: ComplexAutomorphism::identity(complex),
        }
    }

    /// Shift by one inside consecutive blocks of `order` basis elements on
    /// every grade; `dims` lists grade sizes from grade 0 upwards.
    pub fn block_cyclic(order: usize, dims: &[usize]) -> Result<Self, ProductError> {
        if order == 0 || dims.iter().any(|d| d % order != 0) {
            return Err(ProductError::InvalidAction(format!(
                "grade sizes {dims:?} are not multiples of {order}"
            )));
        }
        Self::new(order, ComplexAutomorphism::block_shift(dims, order, 1))
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn generator(&self) -> &ComplexAutomorphism {
        &self.generator
    }

    pub fn permutation(&self, grade: usize) -> &Permutation {
        self.generator.permutation(grade)
    }

    /// Action of `g^k`.
    pub fn element(&self, k: usize) -> ComplexAutomorphism {
        self.generator.pow(k % self.order)
    }

    pub fn check_commutes(&self, complex: &ChainComplex) -> Result<(), ProductError> {
        self.generator.check_on(complex)
    }

    /// No nontrivial group element fixes a basis vector, i.e. every cycle of
    /// the generator has length exactly `order`.
    pub fn is_free(&self) -> bool {
        self.generator
            .permutations()
            .iter()
            .all(|p| p.cycle_lengths().iter().all(|&l| l == self.order))
    }

    pub(crate) fn check_free(&self) -> Result<(), ProductError> {
        for (grade, p) in self.generator.permutations().iter().enumerate() {
            if p.cycle_lengths().iter().any(|&l| l != self.order) {
                return Err(ProductError::NotFree { grade });
            }
        }
        Ok(())
    }

    /// Orbit data on one grade: orbits are numbered by their smallest element.
    pub fn orbits(&self, grade: usize) -> Orbits {
        Orbits::of(self.permutation(grade))
    }
}

/// Orbit decomposition of a permutation's cyclic group on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbits {
    /// Smallest element of each orbit, increasing.
    pub representatives: Vec<usize>,
    /// Orbit number of every element.
    pub orbit_of: Vec<usize>,
    /// `k` such that element `i` equals `g^k` applied to its representative.
    pub offset: Vec<usize>,
}

impl Orbits {
    pub fn of(p: &Permutation) -> Self {
        let n = p.len();
        let mut orbit_of = vec![usize::MAX; n];
        let mut offset = vec![0; n];
        let mut representatives = Vec::new();
        for start in 0..n {
            if orbit_of[start] != usize::MAX {
                continue;
            }
            let id = representatives.len();
            representatives.push(start);
            let (mut i, mut k) = (start, 0);
            while orbit_of[i] == usize::MAX {
                orbit_of[i] = id;
                offset[i] = k;
                i = p.apply(i);
                k += 1;
            }
        }
        Self {
            representatives,
            orbit_of,
            offset,
        }
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}

/// Fiber automorphisms attached to the incidences `(b1, b0)` of a 2-term
/// base complex, where `b0` is in the boundary of `b1`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Connection {
    entries: BTreeMap<(usize, usize), ComplexAutomorphism>,
}

impl Connection {
    /// The untwisted connection: identity on every base incidence.
    pub fn identity(base: &ChainComplex, fiber: &ChainComplex) -> Self {
        let id = ComplexAutomorphism::identity(fiber);
        Self {
            entries: base_incidences(base)
                .into_iter()
                .map(|inc| (inc, id.clone()))
                .collect(),
        }
    }

    pub fn from_entries(
        entries: impl IntoIterator<Item = ((usize, usize), ComplexAutomorphism)>,
    ) -> Self {
        Self {
            entries: entries.into_iter().collect(),
        }
    }

    /// Replaces the automorphism on incidence `(b1, b0)`.
    pub fn set(&mut self, b1: usize, b0: usize, automorphism: ComplexAutomorphism) {
        self.entries.insert((b1, b0), automorphism);
    }

    pub fn get(&self, b1: usize, b0: usize) -> Option<&ComplexAutomorphism> {
        self.entries.get(&(b1, b0))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &ComplexAutomorphism)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Incidences whose automorphism is not the identity.
    pub fn twisted_incidences(&self) -> Vec<(usize, usize)> {
        self.entries
            .iter()
            .filter(|(_, a)| !a.is_identity())
            .map(|(&k, _)| k)
            .collect()
    }

    /// Checks that the entries cover exactly the base incidences and that
    /// each automorphism commutes with the fiber boundaries.
    pub fn check(&self, base: &ChainComplex, fiber: &ChainComplex) -> Result<(), ProductError> {
        let incidences = base_incidences(base);
        for inc in &incidences {
            let Some(auto) = self.entries.get(inc) else {
                return Err(ProductError::ConnectionMissing {
                    b1: inc.0,
                    b0: inc.1,
                });
            };
            auto.check_on(fiber).map_err(|e| ProductError::ConnectionInvalid {
                b1: inc.0,
                b0: inc.1,
                reason: e.to_string(),
            })?;
        }
        if self.entries.len() != incidences.len() {
            let extra = self
                .entries
                .keys()
                .find(|k| incidences.binary_search(k).is_err())
                .expect("an entry outside the incidences");
            return Err(ProductError::ConnectionExtra {
                b1: extra.0,
                b0: extra.1,
            });
        }
        Ok(())
    }
}

/// Sorted `(b1, b0)` pairs with `∂[b0, b1] = 1` for a 2-term complex.
pub(crate) fn base_incidences(base: &ChainComplex) -> Vec<(usize, usize)> {
    let mut out: Vec<_> = base
        .boundary(1)
        .map(|b| b.entries().map(|(r, c)| (c, r)).collect())
        .unwrap_or_default();
    out.sort_unstable();
    out
}
