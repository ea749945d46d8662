mod common;

use chowtool_core::arith::{rat, ratio};
use chowtool_core::catalog;
use chowtool_core::ehrhart::{count, ehrhart_polynomial, interpolate, moment_polynomials, moment_sum};
use chowtool_core::{Polytope, Rational};
use num_bigint::BigInt;
use proptest::prelude::*;

use common::*;

fn poly(name: &str) -> Polytope {
    catalog::get(name).unwrap().polytope
}

fn coeffs(p: &Polytope) -> Vec<Rational> {
    ehrhart_polynomial(p).unwrap().coefficients
}

#[test]
fn count_examples() {
    assert_eq!(count(&cube(2), 3), BigInt::from(49));
    assert_eq!(count(&poly("X3"), 2), BigInt::from(10));
    assert_eq!(count(&poly("X9"), 1), BigInt::from(10));
    assert_eq!(count(&poly("X9"), 0), BigInt::from(1));
}

#[test]
fn polynomial_examples() {
    assert_eq!(coeffs(&poly("X3")), vec![rat(1), ratio(3, 2), ratio(3, 2)]);
    assert_eq!(coeffs(&cube(2)), vec![rat(1), rat(4), rat(4)]);
    assert_eq!(coeffs(&cube(3)), vec![rat(1), rat(6), rat(12), rat(8)]);
    assert_eq!(ehrhart_polynomial(&poly("X3")).unwrap().render(), "3/2 k^2 + 3/2 k + 1");
    let x3: Vec<BigInt> = (0..=4).map(|k| count(&poly("X3"), k)).collect();
    assert_eq!(x3, [1, 4, 10, 19, 31].map(BigInt::from));
}

#[test]
fn moment_examples() {
    assert_eq!(moment_sum(&poly("X4"), 1).sums, vec![BigInt::from(0), BigInt::from(0)]);
    let t = Polytope::new(vec![vec![0, 0], vec![2, 0], vec![0, 1]]).unwrap();
    assert_eq!(moment_sum(&t, 1).sums, vec![BigInt::from(3), BigInt::from(1)]);
    let s = Polytope::new(vec![vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
    let m = moment_sum(&s, 2);
    assert_eq!(m.count, BigInt::from(6));
    assert_eq!(m.sums, vec![BigInt::from(4), BigInt::from(4)]);
}

#[test]
fn interpolation_recovers_polynomials() {
    let xs = [0, 1, 2, 3];
    let ys: Vec<Rational> = xs.iter().map(|&x| rat(2 * x * x * x - x + 5)).collect();
    assert_eq!(interpolate(&xs, &ys), vec![rat(5), rat(-1), rat(0), rat(2)]);
}

#[test]
fn polynomial_predicts_counts_out_of_sample() {
    for e in catalog::entries() {
        let p = &e.polytope;
        let n = p.dim() as i64;
        if n > 5 {
            continue;
        }
        let poly = ehrhart_polynomial(p).unwrap();
        for k in n + 1..=n + 3 {
            assert_eq!(poly.eval(k), Rational::from_integer(p.count(k)), "{} k={k}", e.name);
        }
    }
}

#[test]
fn planar_entries_follow_pick() {
    for e in catalog::entries().into_iter().filter(|e| e.polytope.dim() == 2) {
        let h = convex_polygon(e.polytope.vertices());
        let c = coeffs(&e.polytope);
        assert_eq!(c, vec![rat(1), rat(lattice_perimeter(&h)) / rat(2), shoelace(&h)], "{}", e.name);
    }
}

#[test]
fn moment_polynomials_extrapolate() {
    for e in catalog::entries() {
        let p = &e.polytope;
        let n = p.dim() as i64;
        if n > 4 {
            continue;
        }
        let polys = moment_polynomials(p);
        for k in [n + 2, n + 3] {
            let m = p.moment(k);
            for (i, c) in polys.iter().enumerate() {
                let v = chowtool_core::ehrhart::eval_poly(c, &rat(k));
                assert_eq!(v, Rational::from_integer(m.sums[i].clone()), "{} k={k}", e.name);
            }
        }
    }
}

proptest! {
    #[test]
    fn random_polygons_follow_pick(pts in prop::collection::vec(prop::collection::vec(-5i64..=5, 2), 3..10), k in 1i64..6) {
        if let Ok(p) = Polytope::new(pts) {
            let h = convex_polygon(p.vertices());
            let e = ehrhart_polynomial(&p).unwrap();
            prop_assert_eq!(e.eval(k), Rational::from_integer(brute_count_polygon(&h, k).into()));
        }
    }

    #[test]
    fn random_solids_match_box_scan(pts in prop::collection::vec(prop::collection::vec(-2i64..=2, 3), 4..9), k in 1i64..4) {
        if let Ok(p) = Polytope::new(pts) {
            prop_assert_eq!(p.count(k), brute_count(&p, k));
            let sums = brute_points(&p, k).iter().fold(vec![0i64; 3], |mut a, x| {
                a.iter_mut().zip(x).for_each(|(s, c)| *s += c);
                a
            });
            let m = p.moment(k);
            prop_assert_eq!(m.sums, sums.into_iter().map(BigInt::from).collect::<Vec<_>>());
        }
    }
}
