mod support;

use linecover_core::cohomology::{h0_h1, hilbert_rank_with, RankMethod};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn library_rank_matches_affine_oracle() {
    let compared = support::check_oracle(240, 20_240_611).unwrap();
    assert!(compared >= 240 * 3);
}

#[test]
fn rank_methods_agree_on_random_schemes() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..60 {
        let z = support::scheme(&support::random_scheme(&mut rng));
        for t in 0..7 {
            assert_eq!(hilbert_rank_with(&z, t, RankMethod::Modular), hilbert_rank_with(&z, t, RankMethod::FractionFree));
        }
    }
}

#[test]
fn five_general_double_points_impose_fifteen_conditions_on_quartics_but_not_fourteen() {
    // the classical exception: the conic through five points doubled is a quartic
    let z = support::scheme(&[([1, 0, 0], 2), ([0, 1, 0], 2), ([0, 0, 1], 2), ([1, 1, 1], 2), ([1, 2, 3], 2)]);
    assert_eq!(h0_h1(&z, 4), (1, 1));
    assert_eq!(support::oracle_rank(&[([1, 0, 0], 2), ([0, 1, 0], 2), ([0, 0, 1], 2), ([1, 1, 1], 2), ([1, 2, 3], 2)], 4), 14);
}
