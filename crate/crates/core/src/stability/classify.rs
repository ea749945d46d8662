//! The verdict pipeline.

use num_traits::Signed;
use rayon::prelude::*;

use super::falsify::falsify_lp;
use super::gap::{chow_gap, PLFunction};
use super::instability::double_cone_instability;
use super::special::check_special_with;
use super::sufficient::check_sufficient_with;
use super::{vertex_cap_instability, Certificate, Check, StabilityVerdict, Status};
use crate::catalog::identify;
use crate::error::Result;
use crate::geometry::faces::FaceLattice;
use crate::geometry::{Construction, Point, Polytope};
use crate::symmetry::{automorphism_group, fo_polynomial, is_weakly_symmetric, nonvanishing_from, point_orbits, Mode};
use crate::triangulation::{LatticeSimplex, Triangulation};

/// Splits of the coordinates under which `P` is a product of its two
/// projections, applied recursively. Each factor lists its coordinates.
pub fn product_factors(p: &Polytope) -> Vec<(Vec<usize>, Polytope)> {
    let n = p.dim();
    let project = |coords: &[usize]| -> Vec<Point> {
        let mut v: Vec<Point> = p.vertices().iter().map(|x| coords.iter().map(|&c| x[c]).collect()).collect();
        v.sort();
        v.dedup();
        v
    };
    for mask in 1u32..(1u32 << (n - 1)) {
        // coordinate n − 1 always lies in the second part
        let s: Vec<usize> = (0..n).filter(|&c| mask >> c & 1 == 1).collect();
        let t: Vec<usize> = (0..n).filter(|&c| mask >> c & 1 == 0).collect();
        let (a, b) = (project(&s), project(&t));
        if a.len() * b.len() != p.vertices().len() {
            continue;
        }
        let (Ok(pa), Ok(pb)) = (Polytope::new(a), Polytope::new(b)) else { continue };
        if pa.vertices().len() * pb.vertices().len() != p.vertices().len() {
            continue;
        }
        let mut out = Vec::new();
        for (coords, q) in [(s, pa), (t, pb)] {
            for (sub, f) in product_factors(&q) {
                out.push((sub.iter().map(|&i| coords[i]).collect(), f));
            }
        }
        return out;
    }
    vec![((0..n).collect(), p.clone())]
}

/// An affine coordinate with a nonzero FO invariant, as a convex function
/// with a negative gap.
fn fo_certificate(p: &Polytope) -> Option<(Check, Certificate)> {
    let ws = is_weakly_symmetric(p);
    let w = ws.witness?;
    let persists = nonvanishing_from(&fo_polynomial(p, w.coordinate));
    let mut check = Check::new("fo invariants vanish", false)
        .input("k", format!("1..={}", p.dim() + 3))
        .value("witness_functional", format!("x{}", w.coordinate + 1))
        .value("witness_k", w.k)
        .rational("fo", &w.value);
    if let Some(k0) = persists {
        check = check.value("nonzero_for_all_k_from", k0);
    }
    let k = w.k;
    let fl = FaceLattice::new(p);
    let cells: Vec<LatticeSimplex> = fl
        .pulling(&fl.full())
        .iter()
        .map(|s| LatticeSimplex::new(s.iter().map(|&i| crate::arith::scale(&p.vertices()[i], k)).collect()))
        .collect();
    for sign in [1i64, -1] {
        let values = p
            .lattice_points(k)
            .into_iter()
            .map(|x| {
                let v = crate::arith::rat(sign * x[w.coordinate]);
                (x, v)
            })
            .collect();
        let f = PLFunction { k, values, triangulation: Triangulation::new(p.dim(), cells.clone()) };
        if let Ok(g) = chow_gap(p, &f) {
            if g.is_negative() {
                check = check.rational("affine_gap", &g).input("sign", sign);
                return Some((check, Certificate::Function { k, gap: g, persists_from: persists, function: f }));
            }
        }
    }
    Some((check, Certificate::FoWitness { witness: w, persists_from: persists }))
}

fn swap_last(x: &[i64], j: usize) -> Point {
    let mut y = x.to_vec();
    let n = y.len();
    y.swap(j, n - 1);
    y
}

/// Double-cone structure: `±e_j` are vertices and the others lie on `x_j = 0`.
fn double_cone_base(p: &Polytope) -> Option<(usize, Polytope)> {
    if let Construction::DoubleCone(q) = p.construction() {
        return Some((p.dim() - 1, (**q).clone()));
    }
    let n = p.dim();
    (0..n).rev().find_map(|j| {
        let e = |s: i64| -> Point { (0..n).map(|i| if i == j { s } else { 0 }).collect() };
        let (up, down) = (e(1), e(-1));
        let ok = p.vertices().contains(&up)
            && p.vertices().contains(&down)
            && p.vertices().iter().all(|v| v == &up || v == &down || v[j] == 0);
        if !ok || n < 2 {
            return None;
        }
        let base: Vec<Point> = p
            .vertices()
            .iter()
            .filter(|v| **v != up && **v != down)
            .map(|v| (0..n).filter(|&c| c != j).map(|c| v[c]).collect())
            .collect();
        Polytope::new(base).ok().map(|q| (j, q))
    })
}

fn relabel(mut v: StabilityVerdict, p: &Polytope, j: usize) -> StabilityVerdict {
    v.polytope = p.to_data(None);
    if j + 1 != p.dim() {
        if let Some(Certificate::Function { function, .. }) = &mut v.certificate {
            function.values = std::mem::take(&mut function.values).into_iter().map(|(x, y)| (swap_last(&x, j), y)).collect();
            let cells = function
                .triangulation
                .simplices
                .iter()
                .map(|s| LatticeSimplex::new(s.vertices.iter().map(|x| swap_last(x, j)).collect()))
                .collect();
            function.triangulation = Triangulation::new(function.triangulation.dim, cells);
        }
    }
    v
}

fn cap_verdicts(p: &Polytope, checks: &mut Vec<Check>) -> Option<StabilityVerdict> {
    if let Some((j, q)) = double_cone_base(p) {
        let v = double_cone_instability(&q);
        checks.extend(v.checks.iter().cloned());
        if v.status == Status::NotSemistable {
            return Some(relabel(v, p, j));
        }
    }
    let gens = automorphism_group(p, Mode::Affine).map(|g| g.generators).unwrap_or_default();
    let labels = point_orbits(p.vertices(), &gens, 1);
    let mut seen = std::collections::BTreeSet::new();
    for (v, l) in p.vertices().iter().zip(&labels) {
        if !seen.insert(*l) {
            continue;
        }
        match vertex_cap_instability(p, v) {
            Ok(r) if r.status == Status::NotSemistable => {
                checks.extend(r.checks.iter().cloned());
                return Some(r);
            }
            Ok(r) => checks.extend(r.checks.into_iter().take(1)),
            Err(e) => checks.push(Check::new("vertex cap threshold", false).input("vertex", format!("{v:?}")).detail(e.to_string())),
        }
    }
    None
}

pub fn classify(p: &Polytope, k_max: i64) -> StabilityVerdict {
    classify_with(p, k_max, None)
}

/// The pipeline: FO necessity, product factors, the special-polytope
/// theorem, the stratum criterion, cap functions, then the LP falsifier.
/// The first decisive result wins; every attempted check is recorded.
pub fn classify_with(p: &Polytope, k_max: i64, t1: Option<&Triangulation>) -> StabilityVerdict {
    let data = p.to_data(None);
    let mut checks: Vec<Check> = Vec::new();
    let finish = |mut v: StabilityVerdict, mut checks: Vec<Check>| {
        checks.append(&mut v.checks);
        v.checks = checks;
        v.polytope = data.clone();
        v
    };

    if let Some((check, cert)) = fo_certificate(p) {
        let mut v = StabilityVerdict::new(data.clone(), Status::NotSemistable, vec![check]);
        v.theorem = Some("vanishing FO invariants are necessary".into());
        v.certificate = Some(cert);
        return v;
    }
    checks.push(Check::new("fo invariants vanish", true).input("k", format!("1..={}", p.dim() + 3)));

    let factors = product_factors(p);
    if factors.len() > 1 && t1.is_none() {
        let verdicts: Vec<StabilityVerdict> = factors
            .iter()
            .map(|(coords, q)| {
                let mut v = classify(q, k_max);
                v.polytope.name = identify(q);
                v.checks.insert(0, Check::new("factor coordinates", true).value("coordinates", format!("{coords:?}")));
                v
            })
            .collect();
        let status = if verdicts.iter().all(|v| v.status == Status::Polystable) {
            Status::Polystable
        } else if verdicts.iter().any(|v| v.status == Status::NotSemistable) {
            Status::NotSemistable
        } else {
            Status::Inconclusive
        };
        let names: Vec<String> = verdicts
            .iter()
            .map(|v| v.polytope.name.clone().unwrap_or_else(|| format!("{}-dimensional factor", v.polytope.dim)))
            .collect();
        checks.push(
            Check::new("product rule", status != Status::Inconclusive)
                .value("factors", names.join(" x "))
                .value("statuses", format!("{:?}", verdicts.iter().map(|v| v.status).collect::<Vec<_>>())),
        );
        if status != Status::Inconclusive {
            let mut v = StabilityVerdict::new(data.clone(), status, checks);
            v.theorem = Some("product rule".into());
            v.certificate = Some(Certificate::Product { factors: verdicts });
            return v;
        }
    }

    let special = check_special_with(p, k_max, t1);
    if special.status == Status::Polystable {
        return finish(special, checks);
    }
    checks.extend(special.checks);

    if p.origin_interior() {
        let suff = check_sufficient_with(p, k_max, t1);
        if suff.status == Status::Polystable {
            return finish(suff, checks);
        }
        checks.extend(suff.checks);
    }

    if let Some(v) = cap_verdicts(p, &mut checks) {
        let mut v = v;
        v.checks = checks;
        v.polytope = data.clone();
        return v;
    }

    let runs: Vec<(i64, Result<super::falsify::Falsification>)> =
        (1..=k_max.max(1)).into_par_iter().map(|k| (k, falsify_lp(p, k))).collect();
    let mut certificate = None;
    for (k, r) in runs {
        match r {
            Ok(f) => {
                let hit = f.certificate.is_some();
                checks.push(
                    Check::new("falsifier", !hit)
                        .input("k", k)
                        .input("carrier", f.carrier)
                        .value("cells", f.cells)
                        .value("variables", f.variables)
                        .rational("optimum", &f.optimum),
                );
                if hit && certificate.is_none() {
                    certificate = f.certificate;
                }
            }
            Err(e) => checks.push(Check::new("falsifier", false).input("k", k).detail(e.to_string())),
        }
    }
    let mut v = StabilityVerdict::new(data, Status::Inconclusive, checks);
    v.certificate = certificate;
    v
}
