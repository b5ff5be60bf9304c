use proptest::prelude::*;
use skewcubes::conf::{check_complete_weiss, check_weiss_cover, neighborhoods, BoxRegion, CoverSpec};

const GAPPY: &str = r#"{
  "kind": "explicit",
  "region": {"m": 1, "boxes": [{"lo": [-1.0], "hi": [1.0]}]},
  "members": [
    {"m": 1, "boxes": [{"lo": [-1.0], "hi": [0.0]}]},
    {"m": 1, "boxes": [{"lo": [0.0], "hi": [1.0]}]}
  ]
}"#;

#[test]
fn cover_specs_parse_from_json() {
    let cover: CoverSpec = serde_json::from_str(GAPPY).unwrap();
    cover.validate().unwrap();
    let bad = GAPPY.replace(r#""hi": [0.0]"#, r#""hi": [2.0]"#);
    let cover: CoverSpec = serde_json::from_str(&bad).unwrap();
    assert!(cover.validate().is_err());
    assert!(serde_json::from_str::<BoxRegion>(r#"{"m": 1, "boxes": [{"lo": [0.0], "hi": [0.0]}]}"#).is_err());
}

#[test]
fn two_halves_miss_the_midpoint() {
    let cover: CoverSpec = serde_json::from_str(GAPPY).unwrap();
    let r = check_weiss_cover(&cover, 2, 200, 5).unwrap();
    assert!(!r.pass);
    let witness = r.witness.expect("a witness");
    // one point in each half, or a point at 0 which lies in neither
    assert!(witness.len() <= 2 && !witness.is_empty());
}

#[test]
fn disk_products_are_complete() {
    let cover = CoverSpec::DiskProduct {
        region_m: BoxRegion::unit_cube(1),
        region_n: BoxRegion::unit_cube(1),
        max_components: 3,
    };
    assert!(check_weiss_cover(&cover, 3, 100, 2).unwrap().pass);
    assert!(check_complete_weiss(&cover, 2, 3, 10, 10, 2).unwrap().pass);
    let too_few = CoverSpec::DiskProduct {
        region_m: BoxRegion::unit_cube(1),
        region_n: BoxRegion::unit_cube(1),
        max_components: 2,
    };
    let r = check_weiss_cover(&too_few, 3, 100, 2).unwrap();
    assert!(!r.pass);
    assert_eq!(r.witness.unwrap().len(), 3);
}

proptest! {
    #[test]
    fn neighborhoods_separate_points(xs in prop::collection::vec((-0.99f64..0.99, -0.99f64..0.99), 1..8)) {
        let region = BoxRegion::unit_cube(2);
        let points: Vec<Vec<f64>> = xs.iter().map(|&(a, b)| vec![a, b]).collect();
        let u = neighborhoods(&points, &region).unwrap();
        prop_assert!(region.contains_region(&u));
        for p in &points {
            prop_assert_eq!(u.boxes.iter().filter(|b| b.contains(p)).count(), 1);
        }
        for i in 0..u.boxes.len() {
            for j in i + 1..u.boxes.len() {
                prop_assert!(u.boxes[i].disjoint(&u.boxes[j]));
            }
        }
    }
}
