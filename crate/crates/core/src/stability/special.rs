//! Reflexive, weakly symmetric polytopes with a regular boundary.

use num_rational::BigRational;

use super::{Certificate, Check, StabilityVerdict, Status};
use crate::arith::{factorial, factorial_u64, fmt_rat, rank, sub};
use crate::error::{Error, Result};
use crate::geometry::{Point, Polytope};
use crate::symmetry::is_weakly_symmetric;
use crate::triangulation::{refine, stratum_incidence, verify_regular_boundary, BoundaryBuilder, StratumMap, Triangulation};

/// Largest refined triangulation verified cell by cell.
pub(crate) const EXPLICIT_BUDGET: usize = 300_000;

pub(crate) fn weak_symmetry_check(p: &Polytope) -> Check {
    let ws = is_weakly_symmetric(p);
    let n = p.dim() as i64;
    let mut c = Check::new("weakly symmetric", ws.holds).input("k", format!("1..={}", n + 3));
    if let Some(w) = &ws.witness {
        c = c
            .value("witness_functional", format!("x{}", w.coordinate + 1))
            .value("witness_k", w.k)
            .rational("fo", &w.value);
    } else {
        c = c.detail("moment identity holds at n+3 dilations, hence for every k");
    }
    c
}

/// Ids of a user triangulation's points, keeping the vertex order.
pub(crate) fn t1_ids(b: &BoundaryBuilder, t: &Triangulation) -> Result<Vec<Vec<u32>>> {
    t.simplices
        .iter()
        .map(|s| {
            s.vertices
                .iter()
                .map(|v| b.id(v).ok_or_else(|| Error::InvalidArgument(format!("{v:?} is not a lattice point of P"))))
                .collect()
        })
        .collect()
}

/// Facets in which every lattice point except `v` lies on the hyperplane
/// spanned by the other vertices: every unimodular simplex of such a facet
/// contains `v`, so their normalized volumes bound `m(v)` from below.
fn pyramid_bound(b: &BoundaryBuilder) -> Option<(Point, BigRational)> {
    let p = b.polytope();
    let n = p.dim();
    if n < 2 {
        return None;
    }
    let faces = b.facet_faces();
    let rf = BigRational::from_integer(factorial(n - 1));
    let mut best: Option<(Point, BigRational)> = None;
    for (vi, v) in p.vertices().iter().enumerate() {
        let mut total = BigRational::from_integer(0.into());
        for (fi, face) in faces.iter().enumerate() {
            if !face.get(vi) {
                continue;
            }
            let others: Vec<Point> = b
                .points_of(&b.face_points(face))
                .into_iter()
                .filter(|x| x != v)
                .collect();
            let rows: Vec<Point> = others[1..].iter().map(|x| sub(x, &others[0])).collect();
            if rank(&rows) <= n - 2 {
                total += p.facet_volume(fi) * &rf;
            }
        }
        if best.as_ref().map(|(_, t)| &total > t).unwrap_or(true) {
            best = Some((v.clone(), total));
        }
    }
    best
}

/// Largest stratum incidence among strata with at most `k` vertices.
pub(crate) fn strata_max(map: &StratumMap, k: i64) -> u64 {
    map.iter().filter(|(s, _)| s.len() as i64 <= k).map(|(_, &c)| c).max().unwrap_or(0)
}

pub fn check_special(p: &Polytope, k_max: i64) -> StabilityVerdict {
    check_special_with(p, k_max, None)
}

/// As [`check_special`], with a user triangulation of `∂P` whose simplex
/// vertex orders are used for refinement.
pub fn check_special_with(p: &Polytope, k_max: i64, t1: Option<&Triangulation>) -> StabilityVerdict {
    let n = p.dim();
    let mut checks = vec![Check::new("reflexive", p.is_reflexive())
        .value("facet_offsets", format!("{:?}", p.facets().iter().map(|f| f.offset).collect::<Vec<_>>()))];
    checks.push(weak_symmetry_check(p));
    let ok = regular_boundary(p, k_max, t1, &mut checks);
    let pass = ok && checks.iter().all(|c| c.pass);
    let status = if pass { Status::Polystable } else { Status::Inconclusive };
    let mut v = StabilityVerdict::new(p.to_data(None), status, checks);
    if pass {
        v.theorem = Some("special polytope theorem".into());
        v.certificate = Some(Certificate::Criterion {
            theorem: format!("reflexive, weakly symmetric, regular boundary with incidence at most {n}! = {}", factorial(n)),
        });
    }
    v
}

fn regular_boundary(p: &Polytope, k_max: i64, user: Option<&Triangulation>, checks: &mut Vec<Check>) -> bool {
    let n = p.dim();
    let bound = factorial_u64(n);
    let b = BoundaryBuilder::new(p);
    if user.is_none() {
        if let Some((v, lower)) = pyramid_bound(&b) {
            let pass = lower <= BigRational::from_integer(bound.into());
            checks.push(
                Check::new("pyramid facets", pass)
                    .input("vertex", format!("{v:?}"))
                    .rational("incidence_lower_bound", &lower)
                    .value("bound", bound)
                    .detail(if pass {
                        String::new()
                    } else {
                        format!("not regular boundary; witness incidence {} > {}", fmt_rat(&lower), bound)
                    }),
            );
            if !pass {
                return false;
            }
        }
    }
    let t1 = match user {
        Some(t) => t1_ids(&b, t),
        None => {
            let mut b = BoundaryBuilder::new(p);
            let r = if n == 3 { b.balance_planar_facets() } else { Ok(()) };
            r.and_then(|_| b.boundary_t1())
        }
    };
    let t1 = match t1 {
        Ok(t) => t,
        Err(e) => {
            checks.push(Check::new("boundary triangulation", false).detail(e.to_string()));
            return false;
        }
    };
    let strata = match stratum_incidence(&t1) {
        Ok(s) => s,
        Err(e) => {
            checks.push(Check::new("boundary strata", false).detail(e.to_string()));
            return false;
        }
    };
    let (worst, max) = strata
        .iter()
        .max_by_key(|(s, c)| (**c, std::cmp::Reverse((*s).clone())))
        .map(|(s, &c)| (s.clone(), c))
        .unwrap_or_default();
    let pass = max <= bound;
    let mut c = Check::new("boundary strata", pass)
        .input("t1_simplices", t1.len())
        .value("max_incidence", max)
        .value("bound", bound)
        .value("worst_stratum", format!("{:?}", b.points_of(&worst)));
    if !pass {
        c = c.detail(format!("not regular boundary; witness incidence {max} > {bound}"));
    }
    checks.push(c);
    if !pass {
        return false;
    }
    let ordered: Vec<Vec<Point>> = t1.iter().map(|s| b.points_of(s)).collect();
    let mut all = true;
    for k in 1..=k_max.max(1) {
        let size = t1.len().saturating_mul((k as usize).saturating_pow(n.saturating_sub(1) as u32));
        if k > 1 && size > EXPLICIT_BUDGET {
            checks.push(
                Check::new("regular boundary", true)
                    .input("k", k)
                    .value("cells", size)
                    .detail("beyond the explicit budget; covered by the stratum count"),
            );
            break;
        }
        let t = Triangulation::new(n - 1, refine(&ordered, k));
        let r = verify_regular_boundary(p, &t, k);
        let predicted = strata_max(&strata, k);
        let agree = r.max_incidence as u64 == predicted;
        let pass = r.regular && agree;
        let mut c = Check::new("regular boundary", pass)
            .input("k", k)
            .value("simplices", r.simplices)
            .value("max_incidence", r.max_incidence)
            .value("stratum_prediction", predicted)
            .value("bound", r.bound)
            .rational("covered", &r.covered)
            .rational("expected", &r.expected);
        if !r.face_errors.is_empty() {
            c = c.detail(r.face_errors.join("; "));
        } else if let Some((x, m)) = r.offenders.first() {
            c = c.detail(format!("not regular boundary; witness incidence {m} > {} at {x:?}", r.bound));
        } else if !agree {
            c = c.detail("explicit incidence disagrees with the stratum count");
        }
        checks.push(c);
        all &= pass;
        if !pass {
            break;
        }
    }
    all
}
