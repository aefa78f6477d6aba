mod common;

use proptest::prelude::*;

use modqec::architecture::{derive_layout, verify_respects, ArchitectureLayout, ModuleFactor};
use modqec::complex::{
    group_symmetric_ldpc_complex, random_ldpc_complex, repetition_complex, surface_complex,
    ChainComplex, LdpcShape, Topology,
};
use modqec::css::{css_from_complex, logical_count};
use modqec::distance::{exhaustive_distance, randomized_distance_upper};
use modqec::gf2::Gf2Matrix;
use modqec::io::{
    read_alist, read_mtx, to_json, write_alist, write_mtx, ComplexDocument, ConnectionDocument,
    LoadedComplex,
};
use modqec::product::{
    balanced_kunneth_dim, balanced_product, derive_connection, fiber_bundle_product,
    kunneth_homology_dim, tensor_product, Connection, GroupAction,
};

fn small_complex() -> impl Strategy<Value = ChainComplex> {
    (1usize..5, 2usize..6, any::<u64>()).prop_map(|(rows, cols, seed)| {
        let shape = LdpcShape::new(rows, cols, cols.min(3), rows);
        group_symmetric_ldpc_complex(&shape, 1, None, seed).unwrap().0
    })
}

fn any_small_complex() -> impl Strategy<Value = ChainComplex> {
    prop_oneof![
        small_complex(),
        (2usize..4).prop_map(|l| surface_complex(l).unwrap()),
        (2usize..6).prop_map(|l| repetition_complex(l, Topology::Cyclic).unwrap()),
        (small_complex(), small_complex())
            .prop_map(|(a, b)| tensor_product(&a, &b).unwrap().complex),
    ]
}

fn matrix() -> impl Strategy<Value = Gf2Matrix> {
    (0usize..12, 0usize..100).prop_flat_map(|(r, c)| {
        proptest::collection::vec(any::<bool>(), r * c).prop_map(move |bits| {
            Gf2Matrix::from_coords(r, c, (0..r * c).filter(|&i| bits[i]).map(|i| (i / c, i % c)))
                .unwrap()
        })
    })
}

/// Symmetric 2-term complex with a free `Z_m` action.
fn symmetric(m: usize, seed: u64) -> (ChainComplex, GroupAction) {
    group_symmetric_ldpc_complex(&LdpcShape::new(2, 3, 3, 2), m, None, seed).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 48,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn tensor_products_are_complexes_obeying_kunneth(a in any_small_complex(), b in any_small_complex()) {
        let e = tensor_product(&a, &b).unwrap();
        prop_assert!(e.complex.validate().is_ok());
        for n in 0..e.complex.num_terms() {
            let direct = e.complex.homology(n, false).unwrap().dim_homology;
            prop_assert_eq!(direct, kunneth_homology_dim(&a, &b, n).unwrap());
            let expected: usize = (0..a.num_terms())
                .filter(|&p| n >= p && n - p < b.num_terms())
                .map(|p| a.dim(p) * b.dim(n - p))
                .sum();
            prop_assert_eq!(e.complex.dim(n), expected);
        }
    }

    #[test]
    fn css_codes_commute_and_count_homology(c in any_small_complex()) {
        for g in 0..c.num_terms() {
            let code = css_from_complex(&c, g).unwrap();
            prop_assert!(code.h_x.multiply(&code.h_z.transpose()).unwrap().is_zero());
            prop_assert_eq!(logical_count(&code), c.homology(g, false).unwrap().dim_homology);
        }
    }

    #[test]
    fn rank_matches_independent_elimination(m in matrix()) {
        prop_assume!(m.cols() <= 128);
        prop_assert_eq!(m.rank(), common::brute_rank(&m));
        prop_assert_eq!(m.rank(), m.transpose().rank());
        let k = m.kernel_basis();
        prop_assert_eq!(k.rows(), m.cols() - m.rank());
        prop_assert!(m.multiply(&k.transpose()).unwrap().is_zero());
    }

    #[test]
    fn matrix_formats_round_trip(m in matrix()) {
        prop_assert_eq!(read_alist(&write_alist(&m)).unwrap(), m.clone());
        prop_assert_eq!(read_mtx(&write_mtx(&m)).unwrap(), m);
    }

    #[test]
    fn trivial_group_and_identity_connection_give_the_tensor_product(
        a in any_small_complex(),
        b in small_complex(),
    ) {
        let t = tensor_product(&a, &b).unwrap();
        let bal = balanced_product(&a, &b, &GroupAction::trivial(&a), &GroupAction::trivial(&b)).unwrap();
        prop_assert_eq!(bal.complex.boundaries(), t.complex.boundaries());
        prop_assert_eq!(&bal.basis.grades, &t.basis.grades);
        let fib = fiber_bundle_product(&b, &a, &Connection::identity(&b, &a)).unwrap();
        let t2 = tensor_product(&b, &a).unwrap();
        prop_assert_eq!(fib.complex.boundaries(), t2.complex.boundaries());
    }

    #[test]
    fn balanced_products_match_derived_bundles(m in prop::sample::select(vec![3usize, 5, 7]), seed in any::<u64>()) {
        let (c, gc) = symmetric(m, seed);
        let d = repetition_complex(m, Topology::Cyclic).unwrap();
        let gd = GroupAction::block_cyclic(m, d.dims()).unwrap();
        let bal = balanced_product(&c, &d, &gc, &gd).unwrap();
        prop_assert!(bal.complex.validate().is_ok());
        let (base, phi) = derive_connection(&c, &d, &gc, &gd).unwrap();
        let fib = fiber_bundle_product(&base, &d, &phi).unwrap();
        prop_assert_eq!(fib.complex.boundaries(), bal.complex.boundaries());
        for n in 0..bal.complex.num_terms() {
            prop_assert_eq!(
                bal.complex.homology(n, false).unwrap().dim_homology,
                balanced_kunneth_dim(&c, &d, &gc, &gd, n).unwrap()
            );
        }
        let layout = derive_layout(&d, &base, Some(&phi)).unwrap();
        prop_assert!(verify_respects(&fib, &layout, ModuleFactor::Left).unwrap().respects());
    }

    #[test]
    fn documents_round_trip(m in prop::sample::select(vec![3usize, 5]), seed in any::<u64>()) {
        let (c, gc) = symmetric(m, seed);
        let d = repetition_complex(m, Topology::Cyclic).unwrap();
        let gd = GroupAction::block_cyclic(m, d.dims()).unwrap();
        let (base, phi) = derive_connection(&c, &d, &gc, &gd).unwrap();
        let fib = fiber_bundle_product(&base, &d, &phi).unwrap();
        let docs = [
            LoadedComplex { action: Some(gc), ..LoadedComplex::plain(c) },
            LoadedComplex { connection: Some(phi.clone()), basis: Some(fib.basis), ..LoadedComplex::plain(fib.complex) },
        ];
        for l in docs {
            let text = to_json(&ComplexDocument::from_loaded(&l));
            let back: ComplexDocument = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(&to_json(&back), &text);
            prop_assert_eq!(back.to_loaded().unwrap(), l);
        }
        let phi_doc = to_json(&ConnectionDocument::from_connection(&phi));
        let back: ConnectionDocument = serde_json::from_str(&phi_doc).unwrap();
        prop_assert_eq!(back.to_connection().unwrap(), phi.clone());
        let layout = derive_layout(&d, &base, Some(&phi)).unwrap();
        let text = to_json(&layout);
        let back: ArchitectureLayout = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, layout);
    }

    #[test]
    fn randomized_search_never_undercuts(c in small_complex(), seed in any::<u64>()) {
        let exact = exhaustive_distance(&c, 1, 1 << 20).unwrap();
        let upper = randomized_distance_upper(&c, 1, 20, seed).unwrap();
        prop_assert!(upper.value.unwrap() >= exact.value.unwrap());
    }

    #[test]
    fn rank_targets_are_met(rows in 2usize..6, extra in 1usize..5, seed in any::<u64>()) {
        let cols = rows + extra;
        let shape = LdpcShape::new(rows, cols, 3, rows.min(3));
        let c = random_ldpc_complex(&shape, rows - 1, seed).unwrap();
        prop_assert_eq!(c.boundary(1).unwrap().rank(), rows - 1);
    }
}
