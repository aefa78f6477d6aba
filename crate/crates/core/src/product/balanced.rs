//! Quotients by free permutation actions, balanced products, and fiber
//! bundles.

use super::action::{base_incidences, ComplexAutomorphism, Orbits};
use super::{assemble, tensor_product, Connection, GroupAction, Permutation, Product, ProductBasis,
    ProductError, ProductKind};
use crate::complex::ChainComplex;
use crate::gf2::{BitVec, EchelonBasis, Gf2Matrix};

fn check_action(c: &ChainComplex, action: &GroupAction) -> Result<(), ProductError> {
    action.check_commutes(c)?;
    action.check_free()
}

/// Quotient by a free action together with the orbit data of every grade.
fn quotient_with_orbits(
    c: &ChainComplex,
    perms: &[Permutation],
) -> (ChainComplex, Vec<Orbits>) {
    let orbits: Vec<Orbits> = perms.iter().map(Orbits::of).collect();
    let dims = orbits.iter().map(Orbits::len).collect();
    let boundaries = (1..=c.top_grade())
        .map(|j| {
            let b = c.boundary(j).expect("grade in range");
            let (lo, hi) = (&orbits[j - 1], &orbits[j]);
            let cols = b.transpose();
            let mut q = Gf2Matrix::zeros(lo.len(), hi.len());
            // Q[o', o] counts the members of o' in the boundary of rep(o).
            for (o, &rep) in hi.representatives.iter().enumerate() {
                for e in cols.row_ones(rep) {
                    q.flip(lo.orbit_of[e], o);
                }
            }
            q
        })
        .collect();
    let mut quotient = ChainComplex::new(dims, boundaries).expect("quotient shapes chain");
    if let Some(labels) = c.labels() {
        let reps = orbits
            .iter()
            .zip(labels)
            .map(|(o, l)| o.representatives.iter().map(|&r| l[r].clone()).collect())
            .collect();
        quotient = quotient.with_labels(reps).expect("labels match dims");
    }
    (quotient, orbits)
}

/// Complex of coinvariants `C_i / ⟨cg − c⟩` under a free commuting action.
/// Orbit `k` of grade `i` is the `k`-th smallest orbit representative.
pub fn quotient_complex(c: &ChainComplex, action: &GroupAction) -> Result<ChainComplex, ProductError> {
    c.validate()?;
    check_action(c, action)?;
    Ok(quotient_with_orbits(c, action.generator().permutations()).0)
}

/// Balanced product `C ⊗_G D`: the tensor product modulo `cg ⊗ d ∼ c ⊗ gd`,
/// i.e. the quotient of `C ⊗ D` by the diagonal action `(g, g⁻¹)`.
pub fn balanced_product(
    c: &ChainComplex,
    d: &ChainComplex,
    action_c: &GroupAction,
    action_d: &GroupAction,
) -> Result<Product, ProductError> {
    if action_c.order() != action_d.order() {
        return Err(ProductError::OrderMismatch {
            left: action_c.order(),
            right: action_d.order(),
        });
    }
    c.validate()?;
    d.validate()?;
    check_action(c, action_c)?;
    check_action(d, action_d)?;

    let tensor = tensor_product(c, d)?;
    let inv_d = action_d.generator().inverse();
    let perms: Vec<Permutation> = tensor
        .basis
        .grades
        .iter()
        .map(|grade| {
            // Position of every (left, right) pair inside its summand block.
            let mut start = 0;
            let mut images = Vec::with_capacity(grade.len());
            let mut i = 0;
            while i < grade.len() {
                let (p, q) = (grade[i].p, grade[i].q);
                let rd = tensor.basis.right_dims[q];
                let block = tensor.basis.left_dims[p] * rd;
                for e in &grade[i..i + block] {
                    let l = action_c.permutation(p).apply(e.left);
                    let r = inv_d.permutation(q).apply(e.right);
                    images.push(start + l * rd + r);
                }
                start += block;
                i += block;
            }
            Permutation::from_images(images).expect("diagonal action permutes the basis")
        })
        .collect();

    let (complex, orbits) = quotient_with_orbits(&tensor.complex, &perms);
    let grades = orbits
        .iter()
        .zip(&tensor.basis.grades)
        .map(|(o, g)| o.representatives.iter().map(|&r| g[r]).collect())
        .collect();
    Ok(Product {
        complex,
        basis: ProductBasis {
            kind: ProductKind::Balanced {
                order: action_c.order(),
            },
            left_dims: tensor.basis.left_dims,
            right_dims: tensor.basis.right_dims,
            grades,
        },
    })
}

/// Fiber bundle over a 2-term base: `∂(b₁ ⊗ f) = Σ_{b₀ ∈ ∂b₁} b₀ ⊗ φ(b₁, b₀)f + b₁ ⊗ ∂f`.
pub fn fiber_bundle_product(
    base: &ChainComplex,
    fiber: &ChainComplex,
    phi: &Connection,
) -> Result<Product, ProductError> {
    if base.num_terms() != 2 {
        return Err(ProductError::BaseNotTwoTerm {
            terms: base.num_terms(),
        });
    }
    fiber.validate()?;
    phi.check(base, fiber)?;
    Ok(assemble(base, fiber, ProductKind::FiberBundle, |_, b1, b0, q, f| {
        phi.get(b1, b0)
            .expect("connection covers base incidences")
            .permutation(q)
            .apply(f)
    }))
}

/// Recasts `C ⊗_G D` for a 2-term `C` as a fiber bundle over `C/G` with
/// fiber `D`. Returns the base and a connection with
/// `φ(b₁, b₀) = g^k` on `D`, where the boundary of the representative of `b₁`
/// meets orbit `b₀` at `g^k` applied to its representative.
///
/// Requires every orbit pair to meet at most once, as in block matrices of
/// single cyclic shifts.
pub fn derive_connection(
    c: &ChainComplex,
    d: &ChainComplex,
    action_c: &GroupAction,
    action_d: &GroupAction,
) -> Result<(ChainComplex, Connection), ProductError> {
    if c.num_terms() != 2 {
        return Err(ProductError::BaseNotTwoTerm {
            terms: c.num_terms(),
        });
    }
    if action_c.order() != action_d.order() {
        return Err(ProductError::OrderMismatch {
            left: action_c.order(),
            right: action_d.order(),
        });
    }
    check_action(d, action_d)?;
    let base = quotient_complex(c, action_c)?;
    let (lo, hi) = (action_c.orbits(0), action_c.orbits(1));
    let cols = c.boundary(1).expect("2-term complex").transpose();
    let powers: Vec<ComplexAutomorphism> =
        (0..action_c.order()).map(|k| action_d.element(k)).collect();
    let mut phi = Connection::default();
    for (b1, &rep) in hi.representatives.iter().enumerate() {
        for x0 in cols.row_ones(rep) {
            let b0 = lo.orbit_of[x0];
            if phi.get(b1, b0).is_some() {
                return Err(ProductError::MultipleIncidences { b1, b0 });
            }
            phi.set(b1, b0, powers[lo.offset[x0]].clone());
        }
    }
    debug_assert_eq!(phi.len(), base_incidences(&base).len());
    Ok((base, phi))
}

/// Matrix of a chain automorphism on `H_grade`, in the basis of the
/// complex's homology representatives. Column `i` holds the image of
/// representative `i`.
fn homology_action(c: &ChainComplex, grade: usize, perm: &Permutation) -> Gf2Matrix {
    let reps = c
        .homology(grade, true)
        .expect("grade in range")
        .representatives
        .expect("requested");
    let (n, k) = (c.dim(grade), reps.rows());
    // Augmented vectors [v | coordinates]: reducing the image of a
    // representative leaves only its coordinates once the cycle part is gone.
    let aug = |v: &BitVec, coord: Option<usize>| {
        BitVec::from_support(n + k, v.iter_ones().chain(coord.map(|i| n + i)))
    };
    let mut span = EchelonBasis::new(n + k);
    if let Some(b) = c.boundary(grade + 1) {
        let bt = b.transpose();
        for r in 0..bt.rows() {
            span.insert(&aug(&bt.row(r), None));
        }
    }
    for i in 0..k {
        span.insert(&aug(&reps.row(i), Some(i)));
    }
    let mut m = Gf2Matrix::zeros(k, k);
    for i in 0..k {
        let image = BitVec::from_support(n, reps.row_ones(i).map(|x| perm.apply(x)));
        let rest = span.reduce(&aug(&image, None));
        for bit in rest.iter_ones() {
            debug_assert!(bit >= n, "image of a cycle must be a cycle");
            m.set(bit - n, i, true);
        }
    }
    m
}

/// `dim H_n(C ⊗_G D)` predicted from the homology of the factors:
/// `Σ_{p+q=n} dim (H_p(C) ⊗_G H_q(D))`, where the coinvariants of
/// `H_p ⊗ H_q` have dimension `dim − rank(A ⊗ I + I ⊗ B)` for the generator's
/// matrices `A`, `B` on homology. Valid only for groups of odd order.
pub fn balanced_kunneth_dim(
    c: &ChainComplex,
    d: &ChainComplex,
    action_c: &GroupAction,
    action_d: &GroupAction,
    n: usize,
) -> Result<usize, ProductError> {
    if action_c.order() != action_d.order() {
        return Err(ProductError::OrderMismatch {
            left: action_c.order(),
            right: action_d.order(),
        });
    }
    if action_c.order().is_multiple_of(2) {
        return Err(ProductError::FormulaInapplicable {
            order: action_c.order(),
        });
    }
    let top = c.top_grade() + d.top_grade();
    if n > top {
        return Err(ProductError::GradeOutOfRange { grade: n, top });
    }
    c.validate()?;
    d.validate()?;
    check_action(c, action_c)?;
    check_action(d, action_d)?;
    let mut total = 0;
    for p in 0..=c.top_grade().min(n) {
        let q = n - p;
        if q > d.top_grade() {
            continue;
        }
        let a = homology_action(c, p, action_c.permutation(p));
        let b = homology_action(d, q, action_d.permutation(q));
        let (ka, kb) = (a.rows(), b.rows());
        if ka == 0 || kb == 0 {
            continue;
        }
        let t = a
            .kron(&Gf2Matrix::identity(kb))
            .add(&Gf2Matrix::identity(ka).kron(&b))
            .expect("same shape");
        total += ka * kb - t.rank();
    }
    Ok(total)
}
