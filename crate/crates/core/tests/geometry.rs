mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use untangle::geom3::{
    distance, select_lollipop_side, select_minor_side, seg_disk_crossing, Circle, DiskCrossing, Point2, Point3, Segment,
    Shape, Triangle, EPS,
};

fn point() -> impl Strategy<Value = Point3> {
    (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64).prop_map(|(x, y, z)| Point3::new(x, y, z))
}

fn unit() -> impl Strategy<Value = Point3> {
    point().prop_filter_map("zero vector", |v| v.normalized())
}

fn shape() -> impl Strategy<Value = Shape> {
    prop_oneof![
        point().prop_map(Shape::Point),
        (point(), point()).prop_filter_map("degenerate", |(a, b)| Segment::new(a, b).ok().map(Shape::Segment)),
        (point(), point(), point())
            .prop_filter_map("degenerate", |(a, b, c)| Triangle::new(a, b, c).ok().map(Shape::Triangle)),
        (point(), 0.1..2.0f64, unit())
            .prop_filter_map("degenerate", |(c, r, n)| Circle::wire(c, r, n).ok().map(Shape::Circle)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn distance_is_symmetric(a in shape(), b in shape()) {
        let (ab, ba) = (distance(&a, &b).unwrap(), distance(&b, &a).unwrap());
        prop_assert!((ab - ba).abs() <= 1e-9, "{ab} vs {ba}");
        prop_assert!(ab >= 0.0);
    }

    // Between sets, d(A, C) ≤ d(A, B) + d(B, C) only holds when B is a point.
    #[test]
    fn triangle_inequality_through_a_point(a in shape(), m in point(), c in shape()) {
        let m = Shape::Point(m);
        let direct = distance(&a, &c).unwrap();
        let via = distance(&a, &m).unwrap() + distance(&m, &c).unwrap();
        prop_assert!(direct <= via + 1e-9, "{direct} > {via}");
    }

    #[test]
    fn disk_crossing_flips_with_orientation(a in point(), b in point(), c in point(), r in 0.2..2.0f64, n in unit()) {
        let disk = Circle::wire(c, r, n).unwrap().disk();
        prop_assume!(a.dist(b) > 1e-6);
        // Keep endpoints off the plane, where the half-open convention is
        // deliberately asymmetric.
        let h = |p: Point3| (p - c).dot(n);
        prop_assume!(h(a).abs() > 1e-6 && h(b).abs() > 1e-6);
        let fwd = seg_disk_crossing(&Segment::new(a, b).unwrap(), &disk, EPS);
        let back = seg_disk_crossing(&Segment::new(b, a).unwrap(), &disk, EPS);
        match fwd {
            DiskCrossing::Cross(s) => prop_assert_eq!(back, DiskCrossing::Cross(-s)),
            other => prop_assert_eq!(back, other),
        }
        if h(a).signum() == h(b).signum() {
            prop_assert_eq!(fwd, DiskCrossing::None);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // A million samples per case, as the selector's contract is stated.
    #[test]
    fn minor_side_holds_less_than_half_the_circle(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (c, r, a, b) = random_chord(&mut rng);
        let side = select_minor_side(c, r, a, b, EPS).unwrap();
        prop_assert!(arc_fraction(c, r, a, b, side, 1_000_000) < 0.5);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn minor_side_is_the_side_away_from_the_centre(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (c, r, a, b) = random_chord(&mut rng);
        prop_assert_eq!(select_minor_side(c, r, a, b, EPS).unwrap(), label_of(a, b, c).flip());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn lollipop_side_matches_the_region_oracle(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = random_lollipop_segment(&mut rng);
        if let Ok(side) = select_lollipop_side(a, b, EPS) {
            prop_assert_eq!(Some(side), lollipop_region_oracle(a, b), "segment {:?} -> {:?}", a, b);
        }
    }
}

const MARGIN: f64 = 2e-3;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn minor_side_label_is_continuous(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ok = |c, r, a, b| select_minor_side(c, r, a, b, MARGIN).is_ok() && select_minor_side(c, r, a, b, EPS).is_ok();
        let (c, r, a, b) = loop {
            let (c, r, a, b) = random_chord(&mut rng);
            if ok(c, r, a, b) {
                break (c, r, a, b);
            }
        };
        let valid = |a, b| ok(c, r, a, b);
        let path = walk(&mut rng, a, b, 1_000, valid);
        let labels: Vec<_> = path.iter().map(|(a, b)| select_minor_side(c, r, *a, *b, EPS).unwrap()).collect();
        prop_assert!(labels.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn lollipop_label_is_continuous(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = random_lollipop_segment(&mut rng);
        // A short segment far from the base is a long lever: a small step
        // of its ends swings its line across the base by much more than the
        // step. Bounding the lever keeps the margin meaningful.
        const LEVER_MARGIN: f64 = 0.02;
        prop_assume!(a.dist(b) >= 0.5);
        let valid = |a: Point2, b: Point2| {
            a.dist(b) >= 0.5 && select_lollipop_side(a, b, LEVER_MARGIN).is_ok() && select_lollipop_side(a, b, EPS).is_ok()
        };
        prop_assume!(valid(a, b));
        let path = walk(&mut rng, a, b, 1_000, valid);
        let labels: Vec<_> = path.iter().map(|(a, b)| select_lollipop_side(*a, *b, EPS).unwrap()).collect();
        prop_assert!(labels.windows(2).all(|w| w[0] == w[1]));
    }
}
