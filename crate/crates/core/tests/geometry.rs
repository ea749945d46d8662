mod common;

use std::collections::BTreeSet;

use chowtool_core::arith::{rat, ratio};
use chowtool_core::catalog;
use chowtool_core::geometry::PolytopeData;
use chowtool_core::{Error, Point, Polytope};
use num_bigint::BigInt;
use proptest::prelude::*;

use common::*;

fn poly(name: &str) -> Polytope {
    catalog::get(name).unwrap().polytope
}

fn hull(points: &[&[i64]]) -> Polytope {
    Polytope::new(points.iter().map(|p| p.to_vec()).collect()).unwrap()
}

fn vertex_set(p: &Polytope) -> BTreeSet<Point> {
    p.vertices().iter().cloned().collect()
}

fn facet_pairs(p: &Polytope) -> BTreeSet<(Point, i64)> {
    p.facets().iter().map(|f| (f.normal.clone(), f.offset)).collect()
}

fn set(points: &[&[i64]]) -> BTreeSet<Point> {
    points.iter().map(|p| p.to_vec()).collect()
}

#[test]
fn x4_facets_match_sign_pattern_search() {
    let p = poly("X4");
    let mut oracle = BTreeSet::new();
    for a in [-1i64, 0, 1] {
        for b in [-1i64, 0, 1] {
            if a == 0 && b == 0 {
                continue;
            }
            let vals: Vec<i64> = p.vertices().iter().map(|v| a * v[0] + b * v[1]).collect();
            let m = *vals.iter().min().unwrap();
            if vals.iter().filter(|&&v| v == m).count() == 2 {
                oracle.insert((vec![a, b], -m));
            }
        }
    }
    assert_eq!(facet_pairs(&p), oracle);
    assert_eq!(oracle.len(), 4);
    assert!(oracle.iter().all(|(_, o)| *o == 1));
}

#[test]
fn standard_triangle_facets() {
    let p = hull(&[&[0, 0], &[1, 0], &[0, 1]]);
    let expected: BTreeSet<(Point, i64)> = [(vec![1, 0], 0), (vec![0, 1], 0), (vec![-1, -1], 1)].into_iter().collect();
    assert_eq!(facet_pairs(&p), expected);
}

#[test]
fn cube_facets() {
    let p = cube(3);
    assert_eq!(p.facets().len(), 6);
    for f in p.facets() {
        assert_eq!(f.offset, 1);
        assert_eq!(f.normal.iter().map(|x| x.abs()).sum::<i64>(), 1);
    }
}

#[test]
fn lattice_point_examples() {
    let x3 = poly("X3");
    assert_eq!(
        x3.lattice_points(1).into_iter().collect::<BTreeSet<_>>(),
        set(&[&[0, 0], &[-1, -1], &[1, 0], &[0, 1]])
    );
    let c = cube(2);
    for k in 1..=5 {
        assert_eq!(c.lattice_points(k).len() as i64, (2 * k + 1).pow(2));
    }
    assert_eq!(vertex_set(&poly("X9")), set(&[&[-1, -1], &[2, -1], &[-1, 2]]));
    assert_eq!(poly("X9").lattice_points(1).len(), 10);
}

#[test]
fn volume_examples() {
    let mut fact = 1i64;
    for n in 1..=6usize {
        fact *= n as i64;
        let mut pts = vec![vec![0; n]];
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            pts.push(e);
        }
        assert_eq!(Polytope::new(pts).unwrap().volume(), ratio(1, fact));
    }
    assert_eq!(poly("X3").volume(), ratio(3, 2));
    assert_eq!(cube(6).volume(), rat(64));
}

#[test]
fn boundary_volume_examples() {
    assert_eq!(cube(2).boundary_volume().unwrap(), rat(8));
    assert_eq!(poly("X3").boundary_volume().unwrap(), rat(3));
    assert_eq!(cube(3).boundary_volume().unwrap(), rat(24));
    assert_eq!(cube(1).boundary_volume(), Err(Error::DimensionTooSmall(1)));
}

#[test]
fn planar_boundary_volume_is_lattice_perimeter() {
    for e in catalog::entries().into_iter().filter(|e| e.polytope.dim() == 2) {
        let h = convex_polygon(e.polytope.vertices());
        assert_eq!(e.polytope.boundary_volume().unwrap(), rat(lattice_perimeter(&h)), "{}", e.name);
        assert_eq!(e.polytope.volume(), shoelace(&h), "{}", e.name);
    }
}

#[test]
fn reflexivity_examples() {
    for n in 1..=5 {
        assert!(cube(n).is_reflexive());
    }
    assert!(!hull(&[&[0, 0], &[2, 0], &[0, 1]]).is_reflexive());
    for n in 2..=5 {
        assert!(poly(&format!("A{n}")).is_reflexive());
    }
}

#[test]
fn product_examples() {
    let sq = Polytope::product(&cube(1), &cube(1));
    assert_eq!(vertex_set(&sq), vertex_set(&poly("X8")));
    let prism = Polytope::product(&poly("X3"), &cube(1));
    assert_eq!(prism.vertices().len(), 6);
    assert_eq!(prism, poly("X3_x_segment"));
    assert_eq!(Polytope::product(&poly("X4"), &cube(1)).volume(), rat(4));
}

#[test]
fn dual_examples() {
    assert_eq!(vertex_set(&cube(6).dual().unwrap()), vertex_set(&poly("D6")));
    assert_eq!(vertex_set(&poly("X4").dual().unwrap()), vertex_set(&poly("X8")));
    for n in 2..=5usize {
        let d = poly(&format!("A{n}")).dual().unwrap();
        let mut expected: BTreeSet<Point> = [vec![-1; n]].into_iter().collect();
        for i in 0..n {
            let mut v = vec![-1; n];
            v[i] = n as i64;
            expected.insert(v);
        }
        assert_eq!(vertex_set(&d), expected);
    }
    assert_eq!(hull(&[&[0, 0], &[2, 0], &[0, 1]]).dual(), Err(Error::NotReflexive));
}

#[test]
fn double_cone_examples() {
    let d = Polytope::double_cone(&poly("X4")).unwrap();
    assert_eq!(vertex_set(&d), vertex_set(&poly("D3")));
    assert_eq!(Polytope::double_cone(&cube(2)).unwrap().count(1), BigInt::from(11));
    assert_eq!(vertex_set(&Polytope::double_cone(&cube(1)).unwrap()), vertex_set(&poly("X4")));
}

#[test]
fn shell_examples() {
    let sizes = |p: &Polytope, k| p.lattice_shells(k).unwrap().values().map(Vec::len).collect::<Vec<_>>();
    assert_eq!(sizes(&poly("X4"), 2), vec![1, 4, 8]);
    assert_eq!(sizes(&cube(2), 1), vec![1, 8]);
    assert_eq!(sizes(&poly("X3"), 2), vec![1, 3, 6]);
    assert_eq!(hull(&[&[0, 0], &[2, 0], &[0, 1]]).lattice_shells(1), Err(Error::NotReflexive));
}

#[test]
fn lattice_points_match_box_scan() {
    for e in catalog::entries() {
        let p = &e.polytope;
        let kmax = match p.dim() {
            0..=3 => 6,
            4 => 3,
            _ => 1,
        };
        for k in 1..=kmax {
            let scan: BTreeSet<Point> = brute_points(&p.dilate(k), 1).into_iter().collect();
            let got: BTreeSet<Point> = p.lattice_points(k).into_iter().collect();
            assert_eq!(got, scan, "{} k={k}", e.name);
            assert_eq!(p.count(k), BigInt::from(scan.len()), "{} k={k}", e.name);
        }
    }
}

#[test]
fn reflexive_entries_satisfy_boundary_identity_and_double_duality() {
    for e in catalog::entries() {
        let p = &e.polytope;
        if !p.is_reflexive() {
            continue;
        }
        if p.dim() >= 2 {
            assert_eq!(p.boundary_volume().unwrap(), rat(p.dim() as i64) * p.volume(), "{}", e.name);
        }
        let dd = p.dual().unwrap().dual().unwrap();
        assert_eq!(vertex_set(&dd), vertex_set(p), "{}", e.name);
    }
}

#[test]
fn double_cone_slice_formula() {
    for name in ["X3", "X4", "X6", "X9", "cube1", "cube2", "A3"] {
        let q = poly(name);
        let d = Polytope::double_cone(&q).unwrap();
        let hull_d = Polytope::new(d.vertices().to_vec()).unwrap();
        for k in 1..=4i64 {
            let slices: BigInt = (-k..=k).map(|h| q.count(k - h.abs())).sum();
            assert_eq!(d.count(k), slices, "{name} k={k}");
            assert_eq!(hull_d.count(k), slices, "{name} k={k}");
        }
        assert_eq!(d.volume(), hull_d.volume());
    }
}

#[test]
fn invalid_inputs() {
    assert!(matches!(Polytope::new(vec![vec![0, 0], vec![1, 0], vec![2, 0]]), Err(Error::NotFullDimensional(_))));
    assert!(matches!(Polytope::new(vec![vec![0, 0], vec![1]]), Err(Error::Parse(_))));
    assert!(matches!(Polytope::new(vec![vec![0, 0], vec![1 << 30, 0], vec![0, 1]]), Err(Error::Overflow(_))));
    assert!(matches!(Polytope::new(vec![vec![0; 9]]), Err(Error::UnsupportedDimension(9))));
    let data = PolytopeData { name: None, dim: 3, vertices: vec![vec![0, 0], vec![1, 0], vec![0, 1]] };
    assert!(matches!(Polytope::from_data(&data), Err(Error::Parse(_))));
}

#[test]
fn dilate_matches_counts() {
    let p = poly("X6");
    for d in 1..=3 {
        for k in 1..=3 {
            assert_eq!(p.dilate(d).count(k), p.count(d * k));
        }
    }
}

fn cloud(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-4i64..=4, n), n + 1..12)
}

proptest! {
    #[test]
    fn hull_contains_input_and_vertices_are_tight(pts in cloud(3)) {
        if let Ok(p) = Polytope::new(pts.clone()) {
            for x in &pts {
                prop_assert!(p.contains(x, 1));
            }
            for v in p.vertices() {
                prop_assert!(pts.contains(v));
                prop_assert!(p.facets().iter().filter(|f| f.slack(v, 1) == 0).count() >= 3);
            }
            for f in p.facets() {
                prop_assert!(p.vertices().iter().filter(|v| f.slack(v, 1) == 0).count() >= 3);
            }
        }
    }

    #[test]
    fn planar_volume_and_count_match_oracles(pts in cloud(2), k in 1i64..4) {
        if let Ok(p) = Polytope::new(pts) {
            let h = convex_polygon(p.vertices());
            prop_assert_eq!(p.volume(), shoelace(&h));
            prop_assert_eq!(p.count(k), BigInt::from(brute_count_polygon(&h, k)));
            prop_assert_eq!(p.boundary_volume().unwrap(), rat(lattice_perimeter(&h)));
        }
    }

    #[test]
    fn product_is_multiplicative(a in 0usize..5, b in 0usize..5, k in 1i64..4) {
        let names = ["cube1", "X3", "X4", "X9", "segment2"];
        let p = poly(names[a]);
        let q = poly(names[b]);
        let pq = Polytope::product(&p, &q);
        prop_assert_eq!(pq.volume(), p.volume() * q.volume());
        prop_assert_eq!(pq.count(k), p.count(k) * q.count(k));
        prop_assert_eq!(brute_count(&pq, k), pq.count(k));
    }

    #[test]
    fn unimodular_images_keep_counts(m in unimodular_matrix(3, 5), t in prop::collection::vec(-3i64..=3, 3), k in 1i64..4) {
        let p = poly("D_X6");
        let q = p.transform(&m, &t).unwrap();
        prop_assert_eq!(q.count(k), p.count(k));
        prop_assert_eq!(q.volume(), p.volume());
        prop_assert_eq!(q.boundary_volume().unwrap(), p.boundary_volume().unwrap());
    }
}
