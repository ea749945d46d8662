//! Full triangulations of planar lattice polygons, in `ℤ²` coordinates.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

pub type P2 = [i64; 2];

fn cross(o: P2, a: P2, b: P2) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Counter-clockwise boundary cycle of the hull, including lattice points in
/// the relative interior of edges.
pub fn boundary_cycle(points: &[P2]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by_key(|&i| points[i]);
    if idx.len() < 3 {
        return idx;
    }
    let mut hull: Vec<usize> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let seq: Vec<usize> = if pass == 0 { idx.clone() } else { idx.iter().rev().copied().collect() };
        for &i in &seq {
            while hull.len() >= start + 2
                && cross(points[hull[hull.len() - 2]], points[hull[hull.len() - 1]], points[i]) <= 0
            {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    let m = hull.len();
    let mut out = Vec::new();
    for e in 0..m {
        let a = points[hull[e]];
        let b = points[hull[(e + 1) % m]];
        let mut on: Vec<(i64, usize)> = (0..points.len())
            .filter(|&i| {
                let p = points[i];
                cross(a, b, p) == 0
                    && (p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1]) >= 0
                    && (p[0] - b[0]) * (a[0] - b[0]) + (p[1] - b[1]) * (a[1] - b[1]) > 0
            })
            .map(|i| {
                let p = points[i];
                ((p[0] - a[0]).abs() + (p[1] - a[1]).abs(), i)
            })
            .collect();
        on.sort();
        out.extend(on.into_iter().map(|(_, i)| i));
    }
    out
}

/// Strict hull vertices in counter-clockwise order.
pub fn hull_vertices(points: &[P2]) -> Vec<usize> {
    let cyc = boundary_cycle(points);
    let m = cyc.len();
    (0..m)
        .filter(|&i| cross(points[cyc[(i + m - 1) % m]], points[cyc[i]], points[cyc[(i + 1) % m]]) != 0)
        .map(|i| cyc[i])
        .collect()
}

/// A triangulation using every point: fan from the first hull vertex, then
/// stellar subdivision at each remaining point in index order. Triangles are
/// counter-clockwise.
pub fn placing_stellar(points: &[P2]) -> Vec<[usize; 3]> {
    let hull = hull_vertices(points);
    if hull.len() < 3 {
        return Vec::new();
    }
    let mut tris: Vec<[usize; 3]> = (1..hull.len() - 1).map(|i| [hull[0], hull[i], hull[i + 1]]).collect();
    let mut placed = vec![false; points.len()];
    hull.iter().for_each(|&h| placed[h] = true);
    for p in 0..points.len() {
        if placed[p] {
            continue;
        }
        placed[p] = true;
        let mut next = Vec::with_capacity(tris.len() + 2);
        for t in tris {
            let c: Vec<i64> = (0..3).map(|i| cross(points[t[i]], points[t[(i + 1) % 3]], points[p])).collect();
            if c.iter().any(|&x| x < 0) {
                next.push(t);
                continue;
            }
            for i in 0..3 {
                if c[i] > 0 {
                    next.push([t[i], t[(i + 1) % 3], p]);
                }
            }
        }
        tris = next;
    }
    tris.iter_mut().for_each(|t| *t = canonical(*t));
    tris.sort();
    tris
}

fn canonical(t: [usize; 3]) -> [usize; 3] {
    let r = (0..3).min_by_key(|&i| t[i]).unwrap();
    [t[r], t[(r + 1) % 3], t[(r + 2) % 3]]
}

fn separated(points: &[P2], s: &[usize; 3], t: &[usize; 3]) -> bool {
    let by = |a: &[usize; 3], b: &[usize; 3]| {
        (0..3).any(|i| {
            let (u, v) = (points[a[i]], points[a[(i + 1) % 3]]);
            b.iter().all(|&w| cross(u, v, points[w]) <= 0)
        })
    };
    by(s, t) || by(t, s)
}

/// Every triangulation of the polygon into unimodular triangles, in a
/// deterministic order. Fails with `Budget` past `limit` results.
pub fn unimodular_triangulations(points: &[P2], limit: usize) -> Result<Vec<Vec<[usize; 3]>>> {
    let mut out = Vec::new();
    let complete = visit_unimodular_triangulations(points, &mut |t| {
        out.push(t);
        out.len() <= limit
    });
    if !complete {
        return Err(Error::Budget(format!("more than {limit} planar triangulations")));
    }
    Ok(out)
}

/// Calls `visit` on each unimodular triangulation in the order of
/// [`unimodular_triangulations`] until it returns `false`. Returns whether the
/// enumeration ran to completion.
pub fn visit_unimodular_triangulations(points: &[P2], visit: &mut dyn FnMut(Vec<[usize; 3]>) -> bool) -> bool {
    let cyc = boundary_cycle(points);
    if cyc.len() < 3 {
        return true;
    }
    let mut open: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..cyc.len() {
        open.insert((cyc[i], cyc[(i + 1) % cyc.len()]));
    }
    advance(points, &mut open, &mut Vec::new(), visit)
}

fn advance(
    points: &[P2],
    open: &mut BTreeSet<(usize, usize)>,
    tris: &mut Vec<[usize; 3]>,
    visit: &mut dyn FnMut(Vec<[usize; 3]>) -> bool,
) -> bool {
    let Some(&(a, b)) = open.iter().next() else {
        let mut t: Vec<[usize; 3]> = tris.iter().map(|&t| canonical(t)).collect();
        t.sort();
        return visit(t);
    };
    for c in 0..points.len() {
        if cross(points[a], points[b], points[c]) != 1 {
            continue;
        }
        let t = [a, b, c];
        if !tris.iter().all(|s| separated(points, s, &t)) {
            continue;
        }
        let mut removed = Vec::new();
        let mut added = Vec::new();
        for (u, v) in [(a, b), (b, c), (c, a)] {
            if open.remove(&(u, v)) {
                removed.push((u, v));
            } else if open.insert((v, u)) {
                added.push((v, u));
            }
        }
        tris.push(t);
        let go_on = advance(points, open, tris, visit);
        tris.pop();
        for e in added {
            open.remove(&e);
        }
        for e in removed {
            open.insert(e);
        }
        if !go_on {
            return false;
        }
    }
    true
}
