use proptest::prelude::*;
use rand::Rng;
use skewcubes::cubes::{is_valid, random_tuple, tuple_deviation, GroupTag, SkewCube, SkewCubeTuple};
use skewcubes::linalg::Vector;
use skewcubes::rng::stream;

const TOL: f64 = 1e-9;

fn tag(i: usize) -> GroupTag {
    [GroupTag::Lambda, GroupTag::OLambda, GroupTag::SOLambda][i % 3].clone()
}

/// Points of the open cube pushed through cube `i` must stay in the cube and
/// miss every other cube.
fn monte_carlo_disjoint(t: &SkewCubeTuple, samples: usize, seed: u64) -> bool {
    let rng = &mut stream(seed, "monte-carlo", 0);
    let inverses: Vec<_> = t.cubes.iter().map(|c| c.g.matrix.clone().try_inverse().expect("invertible")).collect();
    for (i, c) in t.cubes.iter().enumerate() {
        for _ in 0..samples {
            let x = Vector::from_fn(t.m, |_, _| rng.gen_range(-1.0..1.0));
            let y = &c.g.matrix * &x + &c.v;
            if y.amax() >= 1.0 {
                return false;
            }
            for (j, d) in t.cubes.iter().enumerate() {
                if j != i && (&inverses[j] * (&y - &d.v)).amax() < 1.0 {
                    return false;
                }
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_tuples_are_valid_and_disjoint(seed in any::<u64>(), m in 1usize..=3, g in 0usize..3, k in 0usize..=5) {
        let t = random_tuple(&mut stream(seed, "tuple", 0), m, &tag(g), k).unwrap();
        prop_assert!(is_valid(&t, TOL).unwrap());
        prop_assert!(monte_carlo_disjoint(&t, 200, seed));
    }

    #[test]
    fn json_round_trip_is_exact(seed in any::<u64>(), m in 1usize..=3, g in 0usize..3, k in 0usize..=4) {
        let t = random_tuple(&mut stream(seed, "tuple", 0), m, &tag(g), k).unwrap();
        let back = SkewCubeTuple::parse(&t.to_json_string()).unwrap();
        prop_assert_eq!(tuple_deviation(&t, &back), 0.0);
    }
}

#[test]
fn overlapping_cubes_are_rejected() {
    let t = random_tuple(&mut stream(7, "tuple", 0), 2, &GroupTag::OLambda, 1).unwrap();
    let c = t.cubes[0].clone();
    let shifted = SkewCube::new(&c.v + Vector::from_element(2, 1e-3), c.g.clone()).unwrap();
    let twice = SkewCubeTuple::new(2, GroupTag::OLambda, vec![c, shifted]).unwrap();
    assert!(!is_valid(&twice, TOL).unwrap());
    assert!(!monte_carlo_disjoint(&twice, 500, 1));
}
