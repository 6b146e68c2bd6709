use berry_core::berry::{berry_factor, BerryOptions, BerryResult, BranchSelection};
use berry_core::lattice::{path_catalog, LatticeGeometry, PathSpec};
use berry_core::meanfield::{DecouplingMode, ModelParams};
use berry_core::Error;
use proptest::prelude::*;

const NS: usize = 17;

fn factor_of(coords: &[[i64; 2]], p: &ModelParams) -> BerryResult {
    let geom = LatticeGeometry::default();
    let spec = PathSpec::from_coords(&geom, "loop", coords, NS).unwrap();
    berry_factor(&geom, p, &spec, &BerryOptions::default()).unwrap()
}

const TRIANGLE: [[i64; 2]; 3] = [[0, 0], [1, 1], [2, 0]];
const SQUARE: [[i64; 2]; 4] = [[0, 0], [1, 1], [2, 0], [1, 3]];

#[test]
fn reversed_and_rotated_loops_keep_the_factor() {
    let p = ModelParams::default();
    let base = factor_of(&TRIANGLE, &p);
    assert_eq!(base.factor, -1);

    let mut reversed = TRIANGLE;
    reversed.reverse();
    let r = factor_of(&reversed, &p);
    assert_eq!(r.factor, base.factor);
    assert!((r.raw_product - base.raw_product).abs() < 1e-9);

    let mut rotated = TRIANGLE;
    rotated.rotate_left(1);
    let r = factor_of(&rotated, &p);
    assert_eq!(r.factor, base.factor);
    assert!((r.raw_product - base.raw_product).abs() < 1e-9);
}

#[test]
fn square_reversed_keeps_the_factor() {
    let p = ModelParams::default();
    let mut reversed = SQUARE;
    reversed.reverse();
    assert_eq!(factor_of(&SQUARE, &p).factor, 1);
    assert_eq!(factor_of(&reversed, &p).factor, 1);
}

#[test]
fn factor_is_robust_to_breathing_amplitude() {
    for d in [0.05, 0.1, 0.2] {
        let p = ModelParams {
            d,
            ..ModelParams::default()
        };
        let tri = factor_of(&TRIANGLE, &p);
        let sq = factor_of(&SQUARE, &p);
        assert_eq!((tri.factor, sq.factor), (-1, 1), "d = {d}");
        assert!(tri.parity_consistent && sq.parity_consistent, "d = {d}");
    }
}

#[test]
fn hole_spin_and_decoupling_mode_agree() {
    let base = factor_of(&TRIANGLE, &ModelParams::default());
    let down = ModelParams {
        n_up: 8,
        n_down: 7,
        ..ModelParams::default()
    };
    let nc = ModelParams {
        mode: DecouplingMode::Noncollinear,
        ..ModelParams::default()
    };
    for p in [down, nc] {
        let r = factor_of(&TRIANGLE, &p);
        assert_eq!(r.factor, -1);
        assert!((r.raw_product - base.raw_product).abs() < 1e-8);
    }
}

#[test]
fn continuation_branch_gives_the_same_sign() {
    let geom = LatticeGeometry::default();
    let spec = path_catalog(&geom, "triangle", NS).unwrap();
    let opts = BerryOptions {
        selection: BranchSelection::Continuation,
        ..BerryOptions::default()
    };
    let r = berry_factor(&geom, &ModelParams::default(), &spec, &opts).unwrap();
    assert_eq!(r.factor, -1);
    assert_eq!(r.switches, 0);
}

#[test]
fn nearest_neighbour_loops_are_unresolved() {
    let geom = LatticeGeometry::default();
    for name in ["triangle-nn", "plaquette"] {
        let spec = path_catalog(&geom, name, NS).unwrap();
        let err = berry_factor(&geom, &ModelParams::default(), &spec, &BerryOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Resolution { .. }), "{name}: {err}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 4, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn lattice_translation_leaves_the_product_unchanged(tx in 0i64..4, ty in 0i64..4) {
        let p = ModelParams::default();
        let base = factor_of(&TRIANGLE, &p);
        let moved: Vec<[i64; 2]> = TRIANGLE.iter().map(|c| [(c[0] + tx).rem_euclid(4), (c[1] + ty).rem_euclid(4)]).collect();
        let r = factor_of(&moved, &p);
        prop_assert_eq!(r.factor, base.factor);
        prop_assert!((r.raw_product - base.raw_product).abs() < 1e-9);
    }
}
