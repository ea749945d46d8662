//! Lattice-point enumeration with exact projection pruning.
//!
//! Coordinates are fixed left to right; the admissible range of coordinate `i`
//! comes from the facets of the projection of `P` onto the first `i + 1`
//! coordinates, so every visited prefix extends to a real point of `kP`.

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;

use super::{hull, Construction, Facet, Point, Polytope};

/// Lattice-point count of `kP` with the coordinate sums of its points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Moment {
    pub count: BigInt,
    pub sums: Vec<BigInt>,
}

pub(super) fn projection_facets(p: &Polytope) -> Vec<Vec<Facet>> {
    let n = p.dim;
    let mut out = Vec::with_capacity(n);
    for i in 0..n - 1 {
        let mut pts: Vec<Point> = p.vertices.iter().map(|v| v[..=i].to_vec()).collect();
        pts.sort();
        pts.dedup();
        let ineq = hull::facet_inequalities(&pts, i + 1)
            .expect("projection of a full-dimensional polytope is full-dimensional");
        out.push(
            ineq.into_iter()
                .map(|(normal, offset)| Facet { normal, offset })
                .collect(),
        );
    }
    out.push(p.facets.clone());
    out
}

fn interval(facets: &[Facet], prefix: &[i64], k: i64) -> Option<(i64, i64)> {
    let i = prefix.len();
    let mut lo = i64::MIN;
    let mut hi = i64::MAX;
    for f in facets {
        let s: i64 = f.normal[..i].iter().zip(prefix).map(|(a, b)| a * b).sum::<i64>() + k * f.offset;
        let a = f.normal[i];
        if a > 0 {
            lo = lo.max(Integer::div_ceil(&(-s), &a));
        } else if a < 0 {
            hi = hi.min(Integer::div_floor(&s, &(-a)));
        } else if s < 0 {
            return None;
        }
    }
    (lo <= hi).then_some((lo, hi))
}

fn walk_points(proj: &[Vec<Facet>], prefix: &mut Vec<i64>, k: i64, out: &mut Vec<Point>) {
    let i = prefix.len();
    let Some((lo, hi)) = interval(&proj[i], prefix, k) else {
        return;
    };
    for x in lo..=hi {
        prefix.push(x);
        if i + 1 == proj.len() {
            out.push(prefix.clone());
        } else {
            walk_points(proj, prefix, k, out);
        }
        prefix.pop();
    }
}

fn walk_moment(proj: &[Vec<Facet>], prefix: &mut Vec<i64>, k: i64, cnt: &mut i128, sums: &mut [i128]) {
    let i = prefix.len();
    let Some((lo, hi)) = interval(&proj[i], prefix, k) else {
        return;
    };
    if i + 1 == proj.len() {
        let c = (hi - lo + 1) as i128;
        *cnt += c;
        for (s, &x) in sums.iter_mut().zip(prefix.iter()) {
            *s += x as i128 * c;
        }
        sums[i] += (lo as i128 + hi as i128) * c / 2;
        return;
    }
    for x in lo..=hi {
        prefix.push(x);
        walk_moment(proj, prefix, k, cnt, sums);
        prefix.pop();
    }
}

fn first_range(p: &Polytope, k: i64) -> Vec<i64> {
    match interval(&p.projections()[0], &[], k) {
        Some((lo, hi)) => (lo..=hi).collect(),
        None => Vec::new(),
    }
}

pub(super) fn points(p: &Polytope, k: i64) -> Vec<Point> {
    if k == 0 {
        return vec![vec![0; p.dim]];
    }
    match &p.construction {
        Construction::Product(a, b) => {
            let pa = a.lattice_points(k);
            let pb = b.lattice_points(k);
            let mut out = Vec::with_capacity(pa.len() * pb.len());
            for x in &pa {
                for y in &pb {
                    let mut z = x.clone();
                    z.extend_from_slice(y);
                    out.push(z);
                }
            }
            out
        }
        Construction::DoubleCone(q) => {
            let mut out = Vec::new();
            for h in -k..=k {
                for x in q.lattice_points(k - h.abs()) {
                    let mut z = x;
                    z.push(h);
                    out.push(z);
                }
            }
            out.sort();
            out
        }
        Construction::Hull => {
            let proj = p.projections();
            if proj.len() == 1 {
                let mut out = Vec::new();
                walk_points(proj, &mut Vec::new(), k, &mut out);
                return out;
            }
            let chunks: Vec<Vec<Point>> = first_range(p, k)
                .into_par_iter()
                .map(|x0| {
                    let mut out = Vec::new();
                    walk_points(proj, &mut vec![x0], k, &mut out);
                    out
                })
                .collect();
            chunks.concat()
        }
    }
}

pub(super) fn moment(p: &Polytope, k: i64) -> Moment {
    let n = p.dim;
    if k == 0 {
        return Moment { count: BigInt::from(1), sums: vec![BigInt::from(0); n] };
    }
    match &p.construction {
        Construction::Product(a, b) => {
            let ma = a.moment(k);
            let mb = b.moment(k);
            let mut sums: Vec<BigInt> = ma.sums.iter().map(|s| s * &mb.count).collect();
            sums.extend(mb.sums.iter().map(|s| s * &ma.count));
            Moment { count: ma.count * mb.count, sums }
        }
        Construction::DoubleCone(q) => {
            let mut count = BigInt::from(0);
            let mut sums = vec![BigInt::from(0); n];
            for h in -k..=k {
                let m = q.moment(k - h.abs());
                count += m.count;
                for (s, x) in sums.iter_mut().zip(m.sums) {
                    *s += x;
                }
            }
            Moment { count, sums }
        }
        Construction::Hull => {
            let proj = p.projections();
            if proj.len() == 1 {
                let mut cnt = 0i128;
                let mut sums = vec![0i128; n];
                walk_moment(proj, &mut Vec::new(), k, &mut cnt, &mut sums);
                return Moment { count: cnt.into(), sums: sums.into_iter().map(BigInt::from).collect() };
            }
            let parts: Vec<(i128, Vec<i128>)> = first_range(p, k)
                .into_par_iter()
                .map(|x0| {
                    let mut cnt = 0i128;
                    let mut sums = vec![0i128; n];
                    walk_moment(proj, &mut vec![x0], k, &mut cnt, &mut sums);
                    (cnt, sums)
                })
                .collect();
            let mut count = BigInt::from(0);
            let mut sums = vec![BigInt::from(0); n];
            for (c, s) in parts {
                count += c;
                for (acc, x) in sums.iter_mut().zip(s) {
                    *acc += x;
                }
            }
            Moment { count, sums }
        }
    }
}
