use thx_core::freegla::{bracketing_span_dims, free_super_dim, FreeAlgebra};

#[test]
fn every_bracketing_spans_the_built_levels() {
    for n in 1..=3 {
        let built = FreeAlgebra::build(n, vec![], 5).unwrap();
        assert_eq!(bracketing_span_dims(n, 5), built.dims(), "dim V = {n}");
    }
}

#[test]
fn two_generators() {
    assert_eq!(bracketing_span_dims(2, 3), vec![2, 3, 2]);
}

#[test]
fn one_generator_dies_after_its_square() {
    assert_eq!(bracketing_span_dims(1, 4), vec![1, 1, 0, 0]);
}

#[test]
fn levels_follow_the_necklace_count() {
    let f = FreeAlgebra::build(3, vec![], 6).unwrap();
    for k in 1..=6 {
        assert_eq!(f.dim(k), free_super_dim(3, k), "k = {k}");
    }
}

#[test]
fn chevalley_eilenberg_sequences_are_exact() {
    for n in 1..=3 {
        let f = FreeAlgebra::build(n, vec![], 6).unwrap();
        for level in 2..=6 {
            let r = f.exactness(level);
            assert!(r.exact(), "dim V = {n}: {r:?}");
        }
    }
}
