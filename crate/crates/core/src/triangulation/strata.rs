//! Stratum incidences. After Kuhn refinement at dilation `k`, the number of
//! cells at a lattice point depends only on the face of the dilation-one
//! triangulation whose relative interior contains the point.

use std::collections::BTreeMap;

use super::kuhn::kuhn_incidence;
use crate::error::{Error, Result};
use crate::geometry::Point;

/// Stratum (sorted point ids) to incidence count.
pub type StratumMap = BTreeMap<Vec<u32>, u64>;

/// Incidence of every stratum of `cells`, each given in its refinement order.
pub fn stratum_incidence(cells: &[Vec<u32>]) -> Result<StratumMap> {
    let work: usize = cells.iter().map(|c| 1usize << c.len().min(40)).sum();
    if work > 50_000_000 {
        return Err(Error::Budget(format!("{} cells for stratum analysis", cells.len())));
    }
    let mut out = StratumMap::new();
    for c in cells {
        let d = c.len() - 1;
        for mask in 1u64..(1u64 << c.len()) {
            let pos: Vec<usize> = (0..c.len()).filter(|&i| mask >> i & 1 == 1).collect();
            let mut key: Vec<u32> = pos.iter().map(|&i| c[i]).collect();
            key.sort_unstable();
            *out.entry(key).or_insert(0) += kuhn_incidence(d, &pos);
        }
    }
    Ok(out)
}

/// Lattice points in the relative interior of `k·σ` for a unimodular `σ`:
/// the combinations `Σ aᵢ vᵢ` with positive integers `aᵢ` summing to `k`.
pub fn stratum_points(vertices: &[Point], k: i64) -> Vec<Point> {
    let r = vertices.len();
    let n = vertices[0].len();
    let mut out = Vec::new();
    if (r as i64) > k {
        return out;
    }
    let mut a = vec![1i64; r];
    fn go(i: usize, left: i64, a: &mut Vec<i64>, v: &[Point], n: usize, out: &mut Vec<Point>) {
        let r = a.len();
        if i == r - 1 {
            a[i] = left;
            let mut x = vec![0i64; n];
            for (ai, vi) in a.iter().zip(v) {
                for c in 0..n {
                    x[c] += ai * vi[c];
                }
            }
            out.push(x);
            return;
        }
        let rest = (r - 1 - i) as i64;
        for t in 1..=(left - rest) {
            a[i] = t;
            go(i + 1, left - t, a, v, n, out);
        }
    }
    go(0, k, &mut a, vertices, n, &mut out);
    out.sort();
    out
}
