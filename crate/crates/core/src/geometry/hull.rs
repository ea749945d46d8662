//! Facet enumeration by the double description method.
//!
//! The homogenized cone `{(a, b) : ⟨a, p⟩ + b ≥ 0 for all input points p}` is
//! pointed for a full-dimensional point set and its extreme rays are exactly
//! the facet inequalities.

use super::bits::Bits;
use crate::arith::{det, gcd_slice, rank};
use crate::error::{Error, Result};
use num_traits::ToPrimitive;

struct Ray {
    v: Vec<i64>,
    zeros: Bits,
}

/// Indices of `n + 1` affinely independent points, chosen greedily in input order.
pub fn affine_basis(points: &[Vec<i64>], n: usize) -> std::result::Result<Vec<usize>, usize> {
    let mut chosen = Vec::new();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let mut h = p.clone();
        h.push(1);
        rows.push(h);
        if rank(&rows) == rows.len() {
            chosen.push(i);
            if chosen.len() == n + 1 {
                return Ok(chosen);
            }
        } else {
            rows.pop();
        }
    }
    Err(chosen.len().saturating_sub(1))
}

fn make_primitive(v: &mut [i64]) {
    let g = gcd_slice(v);
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

/// Facet inequalities `(normal, offset)` with `⟨normal, x⟩ + offset ≥ 0` on the
/// hull of `points`; normals are primitive and the list is sorted.
pub fn facet_inequalities(points: &[Vec<i64>], n: usize) -> Result<Vec<(Vec<i64>, i64)>> {
    if n == 0 {
        return Err(Error::UnsupportedDimension(0));
    }
    let basis = affine_basis(points, n).map_err(Error::NotFullDimensional)?;
    let m = points.len();
    let hom: Vec<Vec<i64>> = points
        .iter()
        .map(|p| {
            let mut h = p.clone();
            h.push(1);
            h
        })
        .collect();
    let d = n + 1;
    let h0: Vec<Vec<i64>> = basis.iter().map(|&i| hom[i].clone()).collect();
    let sign: i64 = if det(&h0) > 0.into() { 1 } else { -1 };
    let mut rays: Vec<Ray> = Vec::with_capacity(d);
    for j in 0..d {
        // column j of the adjugate: cofactors C_{j,i}
        let mut v = vec![0i64; d];
        for (i, slot) in v.iter_mut().enumerate() {
            let minor: Vec<Vec<i64>> = (0..d)
                .filter(|&r| r != j)
                .map(|r| (0..d).filter(|&c| c != i).map(|c| h0[r][c]).collect())
                .collect();
            let c = det(&minor);
            let c = if (i + j) % 2 == 0 { c } else { -c };
            *slot = (c * sign)
                .to_i64()
                .ok_or(Error::Overflow("facet enumeration"))?;
        }
        make_primitive(&mut v);
        let mut zeros = Bits::new(m);
        for (r, &bi) in basis.iter().enumerate() {
            if r != j {
                zeros.set(bi);
            }
        }
        rays.push(Ray { v, zeros });
    }
    let in_basis: Bits = {
        let mut b = Bits::new(m);
        basis.iter().for_each(|&i| b.set(i));
        b
    };
    for idx in 0..m {
        if in_basis.get(idx) {
            continue;
        }
        let h = &hom[idx];
        let vals: Vec<i128> = rays
            .iter()
            .map(|r| r.v.iter().zip(h).map(|(&a, &b)| a as i128 * b as i128).sum())
            .collect();
        if vals.iter().all(|&s| s >= 0) {
            for (r, &s) in rays.iter_mut().zip(&vals) {
                if s == 0 {
                    r.zeros.set(idx);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] < 0).collect();
        let mut fresh: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].zeros.and(&rays[q].zeros);
                if common.count() + 1 < n {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(t, r)| t == p || t == q || !common.is_subset(&r.zeros));
                if !adjacent {
                    continue;
                }
                let sp = vals[p];
                let sq = vals[q];
                let mut v = Vec::with_capacity(d);
                for c in 0..d {
                    let x = sp
                        .checked_mul(rays[q].v[c] as i128)
                        .and_then(|a| a.checked_sub((sq).checked_mul(rays[p].v[c] as i128)?))
                        .ok_or(Error::Overflow("facet enumeration"))?;
                    v.push(x);
                }
                let g = v.iter().fold(0i128, |g, &x| num_integer::gcd(g, x));
                let v: Vec<i64> = v
                    .iter()
                    .map(|&x| (x / g.max(1)).to_i64())
                    .collect::<Option<_>>()
                    .ok_or(Error::Overflow("facet enumeration"))?;
                let mut zeros = common;
                zeros.set(idx);
                fresh.push(Ray { v, zeros });
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (r, &s) in rays.into_iter().zip(&vals) {
            if s > 0 {
                kept.push(r);
            } else if s == 0 {
                let mut r = r;
                r.zeros.set(idx);
                kept.push(r);
            }
        }
        kept.extend(fresh);
        rays = kept;
    }
    let mut out: Vec<(Vec<i64>, i64)> = rays
        .into_iter()
        .filter(|r| r.v[..n].iter().any(|&x| x != 0))
        .map(|r| (r.v[..n].to_vec(), r.v[n]))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}
