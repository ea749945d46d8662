//! Cap functions: a convex function supported near one vertex (or a vertex
//! orbit) whose lattice sum is small compared with its integral.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::gap::{chow_gap, PLFunction};
use super::{positive_from, Certificate, Check, StabilityVerdict, Status};
use crate::arith::{big_rat, dot, primitive, rat, sub};
use crate::ehrhart::{eval_poly, interpolate};
use crate::error::{Error, Result};
use crate::geometry::faces::FaceLattice;
use crate::geometry::{Point, Polytope};
use crate::symmetry::{automorphism_group, point_orbits, Mode};
use crate::triangulation::LatticeSimplex;

fn pulling_cells(p: &Polytope) -> Vec<LatticeSimplex> {
    let fl = FaceLattice::new(p);
    fl.pulling(&fl.full())
        .iter()
        .map(|s| LatticeSimplex::new(s.iter().map(|&i| p.vertices()[i].clone()).collect()))
        .collect()
}

fn with_last(x: &[i64], t: i64) -> Point {
    let mut y = x.to_vec();
    y.push(t);
    y
}

/// `χ(kP)` as a polynomial in `k`.
fn count_polynomial(p: &Polytope) -> Vec<BigRational> {
    let xs: Vec<i64> = (0..=p.dim() as i64).collect();
    let ys: Vec<BigRational> = xs.iter().map(|&k| big_rat(p.count(k))).collect();
    interpolate(&xs, &ys)
}

/// Smallest `k ≤ K` with `h(k) > 0`, where `h > 0` from `K` on.
fn first_positive(h: &[BigRational]) -> Option<(i64, i64)> {
    let from = positive_from(h)?;
    let first = (1..=from).find(|&k| eval_poly(h, &rat(k)).is_positive())?;
    Some((first, from))
}

/// The cap `f(x) = max(0, |x_{n+1}| − (k − 1))` on `kD(Q)`, carried by cones
/// from the two apexes and, for `k ≥ 2`, the two frustums between them.
pub fn cap_function(q: &Polytope, k: i64) -> Result<(Polytope, PLFunction)> {
    if k < 1 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let n = q.dim();
    if !q.contains(&vec![0; n], 1) {
        return Err(Error::OriginMissing);
    }
    let d = Polytope::double_cone(q)?;
    let base = pulling_cells(q);
    let mut cells = Vec::new();
    for s in [1i64, -1] {
        let apex = with_last(&vec![0; n], s * k);
        for c in &base {
            let mut v: Vec<Point> = c.vertices.iter().map(|x| with_last(x, s * (k - 1))).collect();
            v.insert(0, apex.clone());
            cells.push(LatticeSimplex::new(v));
        }
        if k >= 2 {
            let mut pts: Vec<Point> = q.vertices().iter().map(|x| with_last(x, s * (k - 1))).collect();
            pts.extend(q.vertices().iter().map(|x| with_last(&crate::arith::scale(x, k), 0)));
            cells.extend(pulling_cells(&Polytope::new(pts)?));
        }
    }
    let values: BTreeMap<Point, BigRational> = d
        .lattice_points(k)
        .into_iter()
        .map(|x| {
            let v = (x[n].abs() - (k - 1)).max(0);
            (x, rat(v))
        })
        .collect();
    let f = PLFunction { k, values, triangulation: crate::triangulation::Triangulation::new(n + 1, cells) };
    Ok((d, f))
}

fn inconclusive(p: &Polytope, checks: Vec<Check>) -> StabilityVerdict {
    StabilityVerdict::new(p.to_data(None), Status::Inconclusive, checks)
}

/// The double cone over `Q` with the cap certificate when
/// `Vol(Q) ≥ (n+2)(n+1)`.
pub fn double_cone_instability(q: &Polytope) -> StabilityVerdict {
    let n = q.dim() as i64;
    let d = match Polytope::double_cone(q) {
        Ok(d) => d,
        Err(e) => {
            return inconclusive(q, vec![Check::new("double cone", false).detail(e.to_string())]);
        }
    };
    let mut checks = Vec::new();
    let has_origin = q.contains(&vec![0; q.dim()], 1);
    checks.push(Check::new("base contains origin", has_origin));
    if !has_origin {
        return inconclusive(&d, checks);
    }
    let vol = q.volume();
    let threshold = rat((n + 2) * (n + 1));
    let pass = vol >= threshold;
    checks.push(
        Check::new("double cone volume threshold", pass)
            .input("n", n)
            .rational("vol_base", &vol)
            .rational("threshold", &threshold),
    );
    if !pass {
        return inconclusive(&d, checks);
    }
    // gap < 0  ⟺  χ(kD) > 2(n+2) k^{n+1}
    let mut h = count_polynomial(&d);
    h.resize(n as usize + 2, BigRational::zero());
    h[n as usize + 1] -= rat(2 * (n + 2));
    let Some((k, from)) = first_positive(&h) else {
        checks.push(Check::new("cap gap sign", false).detail("gap never becomes negative"));
        return inconclusive(&d, checks);
    };
    finish_cap(d, checks, k, from, |k| cap_function(q, k).map(|(_, f)| f))
}

fn finish_cap(
    p: Polytope,
    mut checks: Vec<Check>,
    k: i64,
    from: i64,
    build: impl Fn(i64) -> Result<PLFunction>,
) -> StabilityVerdict {
    let chi = p.count(k);
    let f = build(k).and_then(|f| chow_gap(&p, &f).map(|g| (f, g)));
    match f {
        Ok((f, gap)) if gap.is_negative() => {
            checks.push(
                Check::new("cap gap", true)
                    .input("k", k)
                    .value("chi", chi)
                    .rational("gap", &gap)
                    .value("negative_for_all_k_from", from),
            );
            let mut v = StabilityVerdict::new(p.to_data(None), Status::NotSemistable, checks);
            v.theorem = Some("cap function instability".into());
            v.certificate = Some(Certificate::Function { k, gap, persists_from: Some(from), function: f });
            v
        }
        Ok((_, gap)) => {
            checks.push(Check::new("cap gap", false).input("k", k).rational("gap", &gap));
            inconclusive(&p, checks)
        }
        Err(e) => {
            checks.push(Check::new("cap gap", false).input("k", k).detail(e.to_string()));
            inconclusive(&p, checks)
        }
    }
}

/// The unit cut at a vertex: the base `Q_v` of the pyramid cut off by
/// `⟨w, x⟩ = ⟨w, v⟩ − 1`.
#[derive(Clone, Debug)]
pub struct VertexCap {
    pub vertex: Point,
    pub direction: Point,
    /// Vertices of `Q_v − v`.
    pub offsets: Vec<Point>,
    /// Volume of `Q_v` in its own lattice hyperplane.
    pub relative_volume: BigRational,
}

impl VertexCap {
    pub fn new(p: &Polytope, v: &[i64]) -> Result<Self> {
        let vi = p
            .vertices()
            .iter()
            .position(|x| x == v)
            .ok_or_else(|| Error::InvalidArgument(format!("{v:?} is not a vertex")))?;
        let n = p.dim();
        let mut w = vec![0i64; n];
        for f in p.facets().iter().filter(|f| f.slack(v, 1) == 0) {
            for (a, b) in w.iter_mut().zip(&f.normal) {
                *a -= b;
            }
        }
        let w = primitive(&w);
        let bits = p.incidence_bits();
        let mut offsets = Vec::new();
        for (ui, u) in p.vertices().iter().enumerate() {
            if ui == vi {
                continue;
            }
            let mut face: Option<crate::geometry::bits::Bits> = None;
            for b in bits.iter().filter(|b| b.get(vi) && b.get(ui)) {
                face = Some(match face {
                    None => b.clone(),
                    Some(f) => f.and(b),
                });
            }
            let is_edge = face.map(|f| f.count() == 2).unwrap_or(false);
            if !is_edge {
                continue;
            }
            let e = sub(u, v);
            let t = -dot(&w, &e);
            if t <= 0 || e.iter().any(|x| x % t != 0) {
                return Err(Error::NonIntegralCut);
            }
            offsets.push(e.iter().map(|x| x / t).collect::<Point>());
        }
        let mut pts = offsets.clone();
        pts.push(vec![0; n]);
        let pyramid = Polytope::new(pts)?;
        let relative_volume = pyramid.volume() * rat(n as i64);
        Ok(VertexCap { vertex: v.to_vec(), direction: w, offsets, relative_volume })
    }

    /// `max(0, ⟨w, x⟩ − ⟨w, kv⟩ + 1)`.
    pub fn eval(&self, x: &[i64], k: i64) -> i64 {
        (dot(&self.direction, x) - k * dot(&self.direction, &self.vertex) + 1).max(0)
    }

    fn base(&self, k: i64) -> Vec<Point> {
        let kv = crate::arith::scale(&self.vertex, k);
        self.offsets.iter().map(|o| crate::arith::add(&kv, o)).collect()
    }
}

fn orbit_caps(p: &Polytope, v: &[i64]) -> Result<Vec<VertexCap>> {
    let g = automorphism_group(p, Mode::Affine)?;
    let labels = point_orbits(p.vertices(), &g.generators, 1);
    let vi = p.vertices().iter().position(|x| x == v).ok_or(Error::NonIntegralCut)?;
    p.vertices()
        .iter()
        .zip(&labels)
        .filter(|(_, &l)| l == labels[vi])
        .map(|(u, _)| VertexCap::new(p, u))
        .collect()
}

fn orbit_function(p: &Polytope, caps: &[VertexCap], k: i64) -> Result<PLFunction> {
    let n = p.dim();
    let mut cells = Vec::new();
    let mut rest: Vec<Point> = p
        .vertices()
        .iter()
        .filter(|x| !caps.iter().any(|c| &c.vertex == *x))
        .map(|x| crate::arith::scale(x, k))
        .collect();
    for c in caps {
        let base = c.base(k);
        let mut pts = base.clone();
        pts.push(crate::arith::scale(&c.vertex, k));
        cells.extend(pulling_cells(&Polytope::new(pts)?));
        rest.extend(base);
    }
    rest.sort();
    rest.dedup();
    match Polytope::new(rest) {
        Ok(r) => cells.extend(pulling_cells(&r)),
        Err(Error::NotFullDimensional(_)) => {}
        Err(e) => return Err(e),
    }
    let values: BTreeMap<Point, BigRational> = p
        .lattice_points(k)
        .into_iter()
        .map(|x| {
            let s: i64 = caps.iter().map(|c| c.eval(&x, k)).sum();
            (x, rat(s))
        })
        .collect();
    Ok(PLFunction { k, values, triangulation: crate::triangulation::Triangulation::new(n, cells) })
}

/// Cap-function test at the orbit of `v`. The criterion
/// `relvol(Q_v) ≥ d(d+1)` is an informal one; the certificate is exact.
pub fn vertex_cap_instability(p: &Polytope, v: &[i64]) -> Result<StabilityVerdict> {
    let cap = VertexCap::new(p, v)?;
    let d = p.dim() as i64;
    let threshold = rat(d * (d + 1));
    let pass = cap.relative_volume >= threshold;
    let mut checks = vec![Check::new("vertex cap threshold", pass)
        .input("vertex", format!("{v:?}"))
        .input("direction", format!("{:?}", cap.direction))
        .rational("relvol_base", &cap.relative_volume)
        .rational("threshold", &threshold)
        .detail("informal criterion")];
    if !pass {
        return Ok(inconclusive(p, checks));
    }
    let caps = orbit_caps(p, v)?;
    // each cap has lattice sum 1 and integral relvol / (d(d+1))
    let c = &cap.relative_volume / &threshold;
    let vol = p.volume();
    let mut h: Vec<BigRational> = count_polynomial(p).into_iter().map(|x| x * &c).collect();
    h.resize(d as usize + 1, BigRational::zero());
    h[d as usize] -= &vol;
    checks.push(Check::new("cap orbit", true).value("orbit_size", caps.len()).rational("cap_integral", &c));
    let Some((k0, from)) = first_positive(&h) else {
        checks.push(Check::new("cap gap sign", false).detail("gap never becomes negative"));
        return Ok(inconclusive(p, checks));
    };
    // overlapping caps at small k leave no carrier; move to the next dilation
    let mut last = Check::new("cap gap", false);
    for k in k0..k0 + 4 {
        let gap = orbit_function(p, &caps, k).and_then(|f| chow_gap(p, &f).map(|g| (f, g)));
        match gap {
            Ok((f, g)) if g.is_negative() => {
                let expected = rat(caps.len() as i64)
                    * (BigRational::new(1.into(), p.count(k)) - &c / (&vol * big_rat(BigInt::from(k).pow(d as u32))));
                checks.push(
                    Check::new("cap gap", g == expected)
                        .input("k", k)
                        .rational("gap", &g)
                        .rational("closed_form", &expected)
                        .value("negative_for_all_k_from", from),
                );
                let mut out = StabilityVerdict::new(p.to_data(None), Status::NotSemistable, checks);
                out.theorem = Some("vertex cap instability".into());
                out.certificate = Some(Certificate::Function { k, gap: g, persists_from: Some(from.max(k)), function: f });
                return Ok(out);
            }
            Ok((_, g)) => last = Check::new("cap gap", false).input("k", k).rational("gap", &g),
            Err(e) => last = Check::new("cap gap", false).input("k", k).detail(e.to_string()),
        }
    }
    checks.push(last);
    Ok(inconclusive(p, checks))
}
