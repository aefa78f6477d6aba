mod common;

use modqec::complex::{repetition_complex, surface_complex, Topology};
use modqec::distance::{
    exhaustive_distance, graphlike_distance, zp_product_codistance, zp_product_distance, Distance,
    DistanceResult,
};
use modqec::product::tensor_product;

use common::{brute_codistance, brute_distance, brute_rank, check_zp_pair, zp_pairs};

fn exact(d: &[Option<usize>]) -> Vec<DistanceResult> {
    d.iter()
        .map(|d| DistanceResult::exact(d.map_or(Distance::Infinite, Distance::Finite)))
        .collect()
}

#[test]
fn product_distance_formula_matches_brute_force() {
    let pairs = zp_pairs();
    assert!(pairs.len() >= 10);
    for (name, a, b) in &pairs {
        let checks = check_zp_pair(a, b, |da, db, i, co| {
            let r = if co {
                zp_product_codistance(a, b, i, &exact(da), &exact(db))
            } else {
                zp_product_distance(a, b, i, &exact(da), &exact(db))
            }
            .unwrap();
            r.value.unwrap().finite()
        })
        .unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(checks, 2 * (a.num_terms() + 1), "{name}");
    }
}

#[test]
fn oracle_agrees_with_library_searches() {
    for l in 2..=4 {
        let s = surface_complex(l).unwrap();
        for g in 0..=2 {
            if s.dim(g) > common::MAX_BITS {
                continue;
            }
            let lib = exhaustive_distance(&s, g, 1 << 24).unwrap().value.unwrap().finite();
            assert_eq!(brute_distance(&s, g), lib, "L={l} grade {g}");
            let fast = graphlike_distance(&s, g, 1 << 20).unwrap().value.unwrap().finite();
            assert_eq!(brute_distance(&s, g), fast, "L={l} grade {g}");
        }
    }
    let rep = repetition_complex(6, Topology::Cyclic).unwrap();
    assert_eq!(brute_distance(&rep, 1), Some(6));
    assert_eq!(brute_distance(&rep, 0), Some(1));
    assert_eq!(brute_codistance(&rep, 1), Some(1));
    assert_eq!(brute_codistance(&rep, 0), Some(6));
    let open = repetition_complex(6, Topology::Open).unwrap();
    assert_eq!(brute_distance(&open, 0), None);
    assert_eq!(brute_codistance(&open, 0), None);
}

#[test]
fn oracle_rank_agrees() {
    let e = tensor_product(
        &surface_complex(3).unwrap(),
        &repetition_complex(3, Topology::Cyclic).unwrap(),
    )
    .unwrap()
    .complex;
    for b in e.boundaries() {
        if b.cols() <= 128 {
            assert_eq!(brute_rank(b), b.rank());
        }
    }
}
