use cwe_core::geom2d::{
    difference, intersection, polygonize, union, union_all, Capsule, Circle, Point2, PointClass, Region2D, SNAP,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tol_area(a: &Region2D, b: &Region2D) -> f64 {
    (SNAP * (a.perimeter() + b.perimeter())).max(1e-9)
}

fn random_blob(rng: &mut ChaCha8Rng, parts: usize) -> Region2D {
    let mut acc = Region2D::empty();
    for _ in 0..parts {
        let piece = match rng.gen_range(0..3) {
            0 => {
                let x = rng.gen_range(-20.0..20.0);
                let y = rng.gen_range(-20.0..20.0);
                Region2D::rect(
                    Point2::new(x, y),
                    Point2::new(x + rng.gen_range(0.5..15.0), y + rng.gen_range(0.5..15.0)),
                )
            }
            1 => {
                let c = Circle::new(
                    Point2::new(rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0)),
                    rng.gen_range(0.5..8.0),
                )
                .unwrap();
                polygonize(c, 1e-2).unwrap()
            }
            _ => {
                let a = Point2::new(rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0));
                let b = a + Point2::new(rng.gen_range(-15.0..15.0), rng.gen_range(-15.0..15.0));
                polygonize(Capsule::new(a, b, rng.gen_range(0.5..5.0)).unwrap(), 1e-2).unwrap()
            }
        };
        acc = if rng.gen_bool(0.75) || acc.is_empty() {
            union(&acc, &piece).unwrap()
        } else {
            difference(&acc, &piece).unwrap()
        };
    }
    acc
}

fn combine(op: u8, a: bool, b: bool) -> bool {
    match op {
        0 => a && !b,
        1 => a && b,
        _ => a || b,
    }
}

fn check_pair(a: &Region2D, b: &Region2D, rng: &mut ChaCha8Rng) {
    a.validate().unwrap();
    b.validate().unwrap();
    let d = difference(a, b).unwrap();
    let i = intersection(a, b).unwrap();
    let u = union(a, b).unwrap();
    for r in [&d, &i, &u] {
        r.validate().unwrap_or_else(|e| panic!("invalid result: {e}"));
    }
    let tol = tol_area(a, b);
    let e1 = (a.area() - i.area() - d.area()).abs();
    assert!(e1 <= tol, "a = a∩b + a\\b violated by {e1} (tol {tol})");
    let e2 = (u.area() - a.area() - b.area() + i.area()).abs();
    assert!(e2 <= tol, "inclusion-exclusion violated by {e2} (tol {tol})");

    let bb = a.bbox().unwrap_or(b.bbox().unwrap());
    let bb = b.bbox().map_or(bb, |x| x.union(&bb)).inflate(1.0);
    for _ in 0..300 {
        let p = Point2::new(
            rng.gen_range(bb.min.x..bb.max.x),
            rng.gen_range(bb.min.y..bb.max.y),
        );
        let (ca, cb) = (a.point_in(p), b.point_in(p));
        if ca == PointClass::OnBoundary || cb == PointClass::OnBoundary {
            continue;
        }
        let (ia, ib) = (ca == PointClass::Inside, cb == PointClass::Inside);
        for (op, r) in [(0u8, &d), (1, &i), (2, &u)] {
            let cr = r.point_in(p);
            if cr == PointClass::OnBoundary {
                continue;
            }
            assert_eq!(cr == PointClass::Inside, combine(op, ia, ib), "op {op} at {p}");
        }
    }
}

#[test]
fn random_blob_algebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..60 {
        let n = rng.gen_range(1..6);
        let a = random_blob(&mut rng, n);
        let n = rng.gen_range(1..6);
        let b = random_blob(&mut rng, n);
        check_pair(&a, &b, &mut rng);
    }
}

#[test]
fn difference_with_empty_is_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let a = random_blob(&mut rng, 5);
    let d = difference(&a, &Region2D::empty()).unwrap();
    assert_eq!(d.area(), a.area());
    for _ in 0..1000 {
        let p = Point2::new(rng.gen_range(-25.0..40.0), rng.gen_range(-25.0..40.0));
        assert_eq!(d.point_in(p), a.point_in(p));
    }
}

#[test]
fn repeated_capsule_subtraction_stays_valid() {
    // Overlapping passes with shared tangents and coincident endpoints, the
    // typical history of a slice.
    let mut region = Region2D::rect(Point2::new(0.0, 0.0), Point2::new(100.0, 100.0));
    let r = 5.0;
    let mut removed = 0.0;
    let start = region.area();
    for row in 0..6 {
        let y = 10.0 + row as f64 * 7.5;
        let mut x = 0.0;
        while x < 100.0 {
            let cap = Capsule::new(Point2::new(x, y), Point2::new(x + 2.5, y), r).unwrap();
            let before = region.area();
            region = difference(&region, &polygonize(cap, 1e-3).unwrap()).unwrap();
            removed += before - region.area();
            x += 2.5;
        }
    }
    region.validate().unwrap();
    assert!((start - region.area() - removed).abs() < 1e-9);
    let swath = 6.0 * 7.5 - 7.5 + 2.0 * r;
    assert!(((start - region.area()) - 100.0 * swath).abs() < 1.0);
}

#[test]
fn rectangle_minus_capsule_example() {
    let square = Region2D::rect(Point2::new(0.0, 0.0), Point2::new(100.0, 100.0));
    let cap = Capsule::new(Point2::new(40.0, 50.0), Point2::new(60.0, 50.0), 5.0).unwrap();
    let d = difference(&square, &polygonize(cap, 1e-4).unwrap()).unwrap();
    let expected = 10_000.0 - (std::f64::consts::PI * 25.0 + 200.0);
    assert!((expected - 9721.46).abs() < 5e-3);
    assert!((d.area() - expected).abs() < 2.0 * 1e-4 * (2.0 * std::f64::consts::PI * 5.0 + 40.0));
}

#[test]
fn union_all_of_disks_matches_pairwise() {
    let disks: Vec<Region2D> = (0..9)
        .map(|k| polygonize(Circle::new(Point2::new(k as f64 * 1.25, 0.0), 5.0).unwrap(), 1e-3).unwrap())
        .collect();
    let a = union_all(disks.clone()).unwrap();
    let b = disks.iter().fold(Region2D::empty(), |acc, d| union(&acc, d).unwrap());
    assert!((a.area() - b.area()).abs() < 1e-9);
    a.validate().unwrap();
}

#[test]
fn near_degenerate_offsets() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for k in 0..700 {
        // Operands that touch or nearly touch at sub-grid distances.
        let base = Region2D::rect(Point2::new(0.0, 0.0), Point2::new(10.0, 10.0));
        let eps = [0.0, 1e-8, 5e-8, 1e-7, 1.5e-7, 3e-7, 1e-6][k % 7] * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let r = rng.gen_range(1.0..4.0);
        let y = [0.0, 10.0, 5.0, r, 10.0 - r][rng.gen_range(0..5)] + eps;
        let x0 = rng.gen_range(-3.0..5.0);
        let cap = Capsule::new(Point2::new(x0, y), Point2::new(x0 + rng.gen_range(0.0..8.0), y + eps * rng.gen_range(-3.0..3.0)), r).unwrap();
        let b = polygonize(cap, 1e-3).unwrap().rotated([0.0, 1e-9, std::f64::consts::FRAC_PI_2][k % 3]);
        check_pair(&base, &b, &mut rng);
        let d = difference(&base, &b).unwrap();
        let b2 = b.translated(Point2::new(eps, 2.0 * r - eps));
        check_pair(&d, &b2, &mut rng);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn squares_algebra(
        x0 in -10.0f64..10.0, y0 in -10.0f64..10.0, w0 in 0.1f64..10.0, h0 in 0.1f64..10.0,
        x1 in -10.0f64..10.0, y1 in -10.0f64..10.0, w1 in 0.1f64..10.0, h1 in 0.1f64..10.0,
        angle in 0.0f64..std::f64::consts::TAU,
    ) {
        let a = Region2D::rect(Point2::new(x0, y0), Point2::new(x0 + w0, y0 + h0));
        let b = Region2D::rect(Point2::new(x1, y1), Point2::new(x1 + w1, y1 + h1)).rotated(angle);
        let mut rng = ChaCha8Rng::seed_from_u64(x0.to_bits());
        check_pair(&a, &b, &mut rng);
    }

    #[test]
    fn intersection_with_self_keeps_area(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_blob(&mut rng, 3);
        let i = intersection(&a, &a).unwrap();
        prop_assert!((i.area() - a.area()).abs() <= tol_area(&a, &a));
        prop_assert!(difference(&a, &a).unwrap().is_empty());
    }
}
