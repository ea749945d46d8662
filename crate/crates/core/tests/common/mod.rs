//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use chowtool_core::arith::rat;
use chowtool_core::catalog;
use chowtool_core::stability::{carrier, PLFunction};
use chowtool_core::{Point, Polytope, Rational};
use num_bigint::BigInt;
use proptest::prelude::*;

pub fn cube(n: usize) -> Polytope {
    catalog::get(&format!("cube{n}")).unwrap().polytope
}

pub fn cross(o: &[i64], a: &[i64], b: &[i64]) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Counter-clockwise hull of planar points by the monotone chain.
pub fn convex_polygon(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

pub fn shoelace(hull: &[Point]) -> Rational {
    let m = hull.len();
    let twice: i64 = (0..m).map(|i| hull[i][0] * hull[(i + 1) % m][1] - hull[(i + 1) % m][0] * hull[i][1]).sum();
    Rational::new(twice.into(), 2.into())
}

pub fn lattice_perimeter(hull: &[Point]) -> i64 {
    let m = hull.len();
    (0..m)
        .map(|i| {
            let (a, b) = (&hull[i], &hull[(i + 1) % m]);
            num_integer::gcd((b[0] - a[0]).abs(), (b[1] - a[1]).abs())
        })
        .sum()
}

pub fn brute_points_polygon(hull: &[Point], k: i64) -> Vec<Point> {
    let h: Vec<Point> = hull.iter().map(|v| v.iter().map(|c| c * k).collect()).collect();
    let (lo, hi) = bounds(&h);
    let m = h.len();
    let mut out = Vec::new();
    for x in lo[0]..=hi[0] {
        for y in lo[1]..=hi[1] {
            let p = vec![x, y];
            if (0..m).all(|i| cross(&h[i], &h[(i + 1) % m], &p) >= 0) {
                out.push(p);
            }
        }
    }
    out
}

pub fn brute_count_polygon(hull: &[Point], k: i64) -> i64 {
    brute_points_polygon(hull, k).len() as i64
}

fn bounds(points: &[Point]) -> (Vec<i64>, Vec<i64>) {
    let n = points[0].len();
    let lo = (0..n).map(|i| points.iter().map(|p| p[i]).min().unwrap()).collect();
    let hi = (0..n).map(|i| points.iter().map(|p| p[i]).max().unwrap()).collect();
    (lo, hi)
}

/// Box scan of `kP` against its facet inequalities.
pub fn brute_points(p: &Polytope, k: i64) -> Vec<Point> {
    let scaled: Vec<Point> = p.vertices().iter().map(|v| v.iter().map(|c| c * k).collect()).collect();
    let (lo, hi) = bounds(&scaled);
    let n = p.dim();
    let mut out = Vec::new();
    let mut x = lo.clone();
    loop {
        if p.facets().iter().all(|f| f.slack(&x, k) >= 0) {
            out.push(x.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if x[i] < hi[i] {
                x[i] += 1;
                for (j, xj) in x.iter_mut().enumerate().skip(i + 1) {
                    *xj = lo[j];
                }
                break;
            }
        }
    }
}

pub fn brute_count(p: &Polytope, k: i64) -> BigInt {
    brute_points(p, k).len().into()
}

/// Whether `x` lies on the boundary of `iP` (the origin for `i = 0`).
pub fn on_dilate_boundary(p: &Polytope, x: &[i64], i: i64) -> bool {
    if i == 0 {
        return x.iter().all(|&c| c == 0);
    }
    p.facets().iter().all(|f| f.slack(x, i) >= 0) && p.facets().iter().any(|f| f.slack(x, i) == 0)
}

/// Lattice points of `kTₙ`.
pub fn simplex_points(n: usize, k: i64) -> Vec<Point> {
    fn go(n: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Point>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur.push(v);
            go(n, left - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, &mut Vec::new(), &mut out);
    out
}

pub fn in_kernel(points: &[Point], v: &[i64]) -> bool {
    let n = points[0].len();
    v.iter().sum::<i64>() == 0 && (0..n).all(|j| points.iter().zip(v).map(|(p, c)| p[j] * c).sum::<i64>() == 0)
}

/// Row Hermite normal form with zero rows dropped.
pub fn hermite_rows(mut m: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        loop {
            let nz: Vec<usize> = (r..m.len()).filter(|&i| m[i][c] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let piv = *nz.iter().min_by_key(|&&i| m[i][c].abs()).unwrap();
            m.swap(r, piv);
            if m[r][c] < 0 {
                m[r].iter_mut().for_each(|x| *x = -*x);
            }
            let mut done = true;
            for i in r + 1..m.len() {
                let q = m[i][c].div_euclid(m[r][c]);
                if q != 0 {
                    let row = m[r].clone();
                    m[i].iter_mut().zip(&row).for_each(|(x, y)| *x -= q * y);
                }
                done &= m[i][c] == 0;
            }
            if done {
                for i in 0..r {
                    let q = m[i][c].div_euclid(m[r][c]);
                    let row = m[r].clone();
                    m[i].iter_mut().zip(&row).for_each(|(x, y)| *x -= q * y);
                }
                r += 1;
                break;
            }
        }
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    m
}

/// Products of random elementary and swap matrices.
pub fn unimodular_matrix(n: usize, steps: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec((0..n, 0..n, -2i64..=2, any::<bool>()), 1..=steps).prop_map(move |ops| {
        let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        for (i, j, c, swap) in ops {
            if i != j {
                let row = m[j].clone();
                m[i].iter_mut().zip(&row).for_each(|(x, y)| *x += c * y);
            }
            if swap {
                m.swap(0, n - 1);
            }
        }
        m
    })
}

/// `x ↦ ⟨a, x⟩ + c` on `kP`.
pub fn affine_function(p: &Polytope, k: i64, a: &[i64], c: i64) -> PLFunction {
    let (_, cells) = carrier(p, k).unwrap();
    let values: HashMap<Point, Rational> = cells
        .iter()
        .flat_map(|s| s.vertices.iter())
        .map(|x| (x.clone(), rat(x.iter().zip(a).map(|(u, v)| u * v).sum::<i64>() + c)))
        .collect();
    PLFunction::interpolate(p, k, cells, &values).unwrap()
}
