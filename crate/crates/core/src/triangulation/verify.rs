//! Exact certificates that a simplex list triangulates `∂(kP)` or `kP`.
//!
//! Coverage compares summed relative volumes with the target; face
//! compatibility is checked ridge by ridge: inside one facet (or inside `kP`)
//! every ridge borders exactly two cells lying on opposite sides, and a
//! ridge borders a single cell only on the boundary of the region. Together
//! with exact volume these make the cells a triangulation.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::Triangulation;
use crate::arith::{det, factorial, factorial_u64, ser_rat, sub};
use crate::geometry::{Point, Polytope};

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryReport {
    pub k: i64,
    pub simplices: usize,
    #[serde(serialize_with = "ser_rat")]
    pub covered: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub expected: BigRational,
    pub coverage_ok: bool,
    pub non_unimodular: usize,
    pub face_errors: Vec<String>,
    pub max_incidence: usize,
    pub bound: u64,
    /// Points above the bound, largest first (at most eight).
    pub offenders: Vec<(Point, usize)>,
    pub regular: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FullReport {
    pub k: i64,
    pub simplices: usize,
    #[serde(serialize_with = "ser_rat")]
    pub covered: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub expected: BigRational,
    pub coverage_ok: bool,
    pub non_unimodular: usize,
    pub face_errors: Vec<String>,
    pub valid: bool,
}

fn push_err(errs: &mut Vec<String>, e: String) {
    if errs.len() < 8 {
        errs.push(e);
    }
}

struct Ids(HashMap<Point, u32>);

impl Ids {
    fn get(&mut self, p: &Point) -> u32 {
        let n = self.0.len() as u32;
        *self.0.entry(p.clone()).or_insert(n)
    }
}

/// Check that `t` is a face-compatible triangulation of `∂(kP)` into
/// unimodular simplices meeting every lattice point at most `n!` times.
pub fn verify_regular_boundary(p: &Polytope, t: &Triangulation, k: i64) -> BoundaryReport {
    let n = p.dim();
    let bound = factorial_u64(n);
    let mut errs = Vec::new();
    let expected = p.boundary_volume().unwrap_or_else(|_| BigRational::zero())
        * BigRational::from_integer(BigInt::from(k).pow((n - 1) as u32));
    if t.dim + 1 != n {
        push_err(&mut errs, format!("simplices have dimension {}, expected {}", t.dim, n - 1));
    }
    let mut covered_norm = vec![BigInt::zero(); p.facets().len()];
    let mut non_unimodular = 0;
    let mut ids = Ids(HashMap::new());
    let mut ridges: HashMap<Vec<u32>, Vec<(usize, Point, usize)>> = HashMap::new();
    if t.dim + 1 == n {
        for (si, s) in t.simplices.iter().enumerate() {
            let Some(f) = p.facets().iter().position(|f| s.vertices.iter().all(|v| f.slack(v, k) == 0)) else {
                push_err(&mut errs, format!("simplex {:?} is not contained in a facet", s.vertices));
                continue;
            };
            let u = &p.facets()[f].normal;
            let uu: i64 = u.iter().map(|x| x * x).sum();
            let mut rows = s.edges();
            rows.push(u.clone());
            let vol = det(&rows).abs();
            let (q, r) = vol.div_rem(&BigInt::from(uu));
            if !r.is_zero() || q.is_zero() {
                push_err(&mut errs, format!("simplex {:?} is degenerate in its facet", s.vertices));
                continue;
            }
            if q != BigInt::from(1) {
                non_unimodular += 1;
            }
            covered_norm[f] += q;
            let vid: Vec<u32> = s.vertices.iter().map(|v| ids.get(v)).collect();
            for drop in 0..s.vertices.len() {
                let mut key: Vec<u32> = (0..vid.len()).filter(|&i| i != drop).map(|i| vid[i]).collect();
                key.sort_unstable();
                ridges.entry(key).or_default().push((si, s.vertices[drop].clone(), f));
            }
        }
    }
    let rf = factorial(n.saturating_sub(1));
    let mut coverage_ok = errs.is_empty();
    for (f, c) in covered_norm.iter().enumerate() {
        let want = p.facet_volume(f) * BigRational::from_integer(BigInt::from(k).pow((n - 1) as u32));
        if BigRational::new(c.clone(), rf.clone()) != want {
            coverage_ok = false;
        }
    }
    let covered = BigRational::new(covered_norm.iter().sum(), rf);
    coverage_ok &= covered == expected;
    let by_id: HashMap<u32, Point> = ids.0.iter().map(|(p, &i)| (i, p.clone())).collect();
    let mut keys: Vec<&Vec<u32>> = ridges.keys().collect();
    keys.sort();
    for key in keys {
        let list = &ridges[key];
        match list.as_slice() {
            [(_, a, f), (_, b, g)] if f == g => {
                let r: Vec<&Point> = key.iter().map(|i| &by_id[i]).collect();
                let side = |x: &Point| {
                    let mut rows: Vec<Point> = r[1..].iter().map(|q| sub(q, r[0])).collect();
                    rows.push(sub(x, r[0]));
                    rows.push(p.facets()[*f].normal.clone());
                    det(&rows)
                };
                let (sa, sb) = (side(a), side(b));
                if sa.is_zero() || sb.is_zero() || sa.is_positive() == sb.is_positive() {
                    push_err(&mut errs, format!("cells overlap across ridge {:?}", r));
                }
            }
            [_, _] => {}
            _ => {
                let r: Vec<&Point> = key.iter().map(|i| &by_id[i]).collect();
                push_err(&mut errs, format!("ridge {:?} borders {} cells", r, list.len()));
            }
        }
    }
    if n == 1 {
        let mut want: Vec<Point> = p.vertices().iter().map(|v| vec![v[0] * k]).collect();
        want.sort();
        let got: Vec<Point> = t.simplices.iter().map(|s| s.vertices[0].clone()).collect();
        if got != want {
            push_err(&mut errs, "boundary of a segment is its two endpoints".into());
        }
        coverage_ok = got == want;
    }
    let inc = t.incidence();
    let max_incidence = inc.values().copied().max().unwrap_or(0);
    let mut offenders: Vec<(Point, usize)> = inc.into_iter().filter(|(_, c)| *c as u64 > bound).collect();
    offenders.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    offenders.truncate(8);
    let regular = coverage_ok && non_unimodular == 0 && errs.is_empty() && max_incidence as u64 <= bound;
    BoundaryReport {
        k,
        simplices: t.simplices.len(),
        covered,
        expected,
        coverage_ok,
        non_unimodular,
        face_errors: errs,
        max_incidence,
        bound,
        offenders,
        regular,
    }
}

/// Check that `t` triangulates `kP`.
pub fn verify_full(p: &Polytope, t: &Triangulation, k: i64) -> FullReport {
    let n = p.dim();
    let mut errs = Vec::new();
    let expected = p.volume() * BigRational::from_integer(BigInt::from(k).pow(n as u32));
    if t.dim != n {
        push_err(&mut errs, format!("simplices have dimension {}, expected {n}", t.dim));
    }
    let mut total = BigInt::zero();
    let mut non_unimodular = 0;
    let mut ids = Ids(HashMap::new());
    let mut ridges: HashMap<Vec<u32>, Vec<Point>> = HashMap::new();
    for s in t.simplices.iter().filter(|_| t.dim == n) {
        if let Some(v) = s.vertices.iter().find(|v| !p.contains(v, k)) {
            push_err(&mut errs, format!("vertex {v:?} lies outside"));
        }
        let vol = det(&s.edges()).abs();
        if vol.is_zero() {
            push_err(&mut errs, format!("simplex {:?} is degenerate", s.vertices));
            continue;
        }
        if vol != BigInt::from(1) {
            non_unimodular += 1;
        }
        total += vol;
        let vid: Vec<u32> = s.vertices.iter().map(|v| ids.get(v)).collect();
        for drop in 0..vid.len() {
            let mut key: Vec<u32> = (0..vid.len()).filter(|&i| i != drop).map(|i| vid[i]).collect();
            key.sort_unstable();
            ridges.entry(key).or_default().push(s.vertices[drop].clone());
        }
    }
    let covered = BigRational::new(total, factorial(n));
    let coverage_ok = covered == expected && t.dim == n;
    let by_id: HashMap<u32, Point> = ids.0.iter().map(|(p, &i)| (i, p.clone())).collect();
    let mut keys: Vec<&Vec<u32>> = ridges.keys().collect();
    keys.sort();
    for key in keys {
        let r: Vec<&Point> = key.iter().map(|i| &by_id[i]).collect();
        match ridges[key].as_slice() {
            [_] => {
                let on_facet = p.facets().iter().any(|f| r.iter().all(|x| f.slack(x, k) == 0));
                if !on_facet {
                    push_err(&mut errs, format!("interior ridge {r:?} borders one cell"));
                }
            }
            [a, b] => {
                let side = |x: &Point| {
                    let mut rows: Vec<Point> = r[1..].iter().map(|q| sub(q, r[0])).collect();
                    rows.push(sub(x, r[0]));
                    det(&rows)
                };
                let (sa, sb) = (side(a), side(b));
                if sa.is_positive() == sb.is_positive() {
                    push_err(&mut errs, format!("cells overlap across ridge {r:?}"));
                }
            }
            list => push_err(&mut errs, format!("ridge {r:?} borders {} cells", list.len())),
        }
    }
    let valid = coverage_ok && errs.is_empty();
    FullReport {
        k,
        simplices: t.simplices.len(),
        covered,
        expected,
        coverage_ok,
        non_unimodular,
        face_errors: errs,
        valid,
    }
}
