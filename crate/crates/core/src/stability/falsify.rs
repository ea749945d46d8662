//! Search for a convex function with a negative gap by exact linear programming.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::gap::{chow_gap, interior_ridges, locate, CellFrame, PLFunction};
use super::Certificate;
use crate::arith::{big_rat, factorial, rat};
use crate::error::{Error, Result};
use crate::geometry::faces::FaceLattice;
use crate::geometry::{Point, Polytope};
use crate::lp::maximize;
use crate::symmetry::{automorphism_group, point_orbits, Mode};
use crate::triangulation::planar::{placing_stellar, P2};
use crate::triangulation::{refine, BoundaryBuilder, LatticeSimplex};

/// Cells of the finest carrier attempted.
const FINE_LIMIT: usize = 5_000;
/// Cells of any carrier.
const CARRIER_LIMIT: usize = 50_000;
/// Lattice points of `kP`.
const POINT_LIMIT: u64 = 100_000;

#[derive(Clone, Debug)]
pub struct Falsification {
    pub k: i64,
    /// Largest `(1/Vol)∫f − (1/χ)Σf` over the normalized convex functions on the carrier.
    pub optimum: BigRational,
    pub carrier: &'static str,
    pub cells: usize,
    pub variables: usize,
    pub rows: usize,
    pub certificate: Option<Certificate>,
}

/// Unimodular triangulations where cheap, otherwise the pulling
/// triangulation of `P` scaled by `k`.
pub fn carrier(p: &Polytope, k: i64) -> Result<(&'static str, Vec<LatticeSimplex>)> {
    let n = p.dim();
    if n == 1 {
        let pts = p.lattice_points(k);
        let cells = pts.windows(2).map(|w| LatticeSimplex::new(w.to_vec())).collect();
        return Ok(("unit segments", cells));
    }
    if n == 2 {
        let pts = p.lattice_points(k);
        let p2: Vec<P2> = pts.iter().map(|x| [x[0], x[1]]).collect();
        let cells = placing_stellar(&p2)
            .into_iter()
            .map(|t| LatticeSimplex::new(t.iter().map(|&i| pts[i].clone()).collect()))
            .collect();
        return Ok(("placing triangulation", cells));
    }
    if p.is_reflexive() {
        let mut b = BoundaryBuilder::new(p);
        let t1 = if n == 3 { b.balance_planar_facets().and_then(|_| b.boundary_t1()) } else { b.boundary_t1() };
        if let Ok(t1) = t1 {
            let size = t1.len().saturating_mul((k as usize).saturating_pow(n as u32));
            if size <= FINE_LIMIT {
                let origin = b.id(&vec![0; n]).expect("origin");
                let cells: Vec<Vec<Point>> = t1
                    .iter()
                    .map(|s| {
                        let mut c = s.clone();
                        c.push(origin);
                        c.sort_unstable();
                        b.points_of(&c)
                    })
                    .collect();
                return Ok(("refined cone triangulation", refine(&cells, k)));
            }
        }
    }
    let fl = FaceLattice::new(p);
    let cells: Vec<LatticeSimplex> = fl
        .pulling(&fl.full())
        .iter()
        .map(|s| LatticeSimplex::new(s.iter().map(|&i| crate::arith::scale(&p.vertices()[i], k)).collect()))
        .collect();
    if cells.len() > CARRIER_LIMIT {
        return Err(Error::NoTriangulation(format!("{} cells", cells.len())));
    }
    Ok(("pulling triangulation", cells))
}

/// `0` when interior, else the lattice point of `kP` nearest `k·centroid`.
fn anchor(p: &Polytope, k: i64, points: &[Point]) -> Point {
    let n = p.dim();
    if p.is_interior(&vec![0; n], k) {
        return vec![0; n];
    }
    let c: Vec<BigRational> = p.centroid().into_iter().map(|x| x * rat(k)).collect();
    points
        .iter()
        .min_by(|a, b| {
            let d = |x: &Point| -> BigRational {
                x.iter().zip(&c).map(|(xi, ci)| (rat(*xi) - ci) * (rat(*xi) - ci)).sum()
            };
            d(a).cmp(&d(b)).then_with(|| a.cmp(b))
        })
        .cloned()
        .expect("kP has a lattice point")
}

fn integer_row(row: &[BigRational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let v: Vec<BigInt> = row.iter().map(|x| (x * big_rat(l.clone())).to_integer()).collect();
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        v
    } else {
        v.into_iter().map(|x| x / &g).collect()
    }
}

/// Maximizes `(1/Vol)∫f − (1/χ)Σf` over convex functions on the carrier that
/// are constant on symmetry orbits of carrier vertices, with `0 ≤ f ≤ 1` and
/// `f(anchor) = 0`.
pub fn falsify_lp(p: &Polytope, k: i64) -> Result<Falsification> {
    if k < 1 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let n = p.dim();
    let chi = p.count(k);
    if chi > BigInt::from(POINT_LIMIT) {
        return Err(Error::Budget(format!("{chi} lattice points in kP")));
    }
    let (name, cells) = carrier(p, k)?;
    let frames: Vec<CellFrame> = cells.iter().map(CellFrame::new).collect::<Result<_>>()?;
    let mut verts: Vec<Point> = cells.iter().flat_map(|c| c.vertices.iter().cloned()).collect();
    verts.sort();
    verts.dedup();
    let gens = automorphism_group(p, Mode::Affine)?.generators;
    let labels = point_orbits(&verts, &gens, k);
    let nvar = labels.iter().copied().max().map(|m| m + 1).unwrap_or(0);
    let var: HashMap<&Point, usize> = verts.iter().zip(&labels).map(|(v, &l)| (v, l)).collect();

    let mut rows: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    for (a, _, b, ib) in interior_ridges(&cells) {
        // Σ λᵢ f(aᵢ) − f(apex of b) ≤ 0, scaled by det
        let w = frames[a].bary(&cells[b].vertices[ib]);
        let mut row = vec![BigRational::zero(); nvar];
        for (v, wi) in cells[a].vertices.iter().zip(&w) {
            row[var[v]] += BigRational::new(BigInt::from(*wi), BigInt::one());
        }
        row[var[&cells[b].vertices[ib]]] -= big_rat(BigInt::from(frames[a].det()));
        if row.iter().any(|x| !x.is_zero()) {
            rows.insert(integer_row(&row));
        }
    }
    let points = p.lattice_points(k);
    let loc = locate(&points, &cells, &frames)?;
    let anchor_pt = anchor(p, k, &points);
    let ai = points.binary_search(&anchor_pt).expect("anchor is a lattice point");
    let mut anchor_row = vec![BigRational::zero(); nvar];
    let (ci, w) = &loc[ai];
    for (v, wi) in cells[*ci].vertices.iter().zip(w) {
        anchor_row[var[v]] += BigRational::new(BigInt::from(*wi), BigInt::from(frames[*ci].det()));
    }
    let mut lp_rows: Vec<(Vec<BigRational>, BigRational)> = rows
        .into_iter()
        .map(|r| (r.into_iter().map(big_rat).collect(), BigRational::zero()))
        .collect();
    lp_rows.push((anchor_row, BigRational::zero()));
    for j in 0..nvar {
        let mut r = vec![BigRational::zero(); nvar];
        r[j] = BigRational::one();
        lp_rows.push((r, BigRational::one()));
    }

    let vol = p.volume() * big_rat(BigInt::from(k).pow(n as u32));
    let chi = big_rat(chi);
    let mut c = vec![BigRational::zero(); nvar];
    let scale = big_rat(factorial(n) * BigInt::from(n + 1)) * &vol;
    for cell in &cells {
        let d = big_rat(crate::arith::det(&cell.edges()).abs());
        for v in &cell.vertices {
            c[var[v]] += &d / &scale;
        }
    }
    for (ci, w) in &loc {
        let det = BigInt::from(frames[*ci].det());
        for (v, wi) in cells[*ci].vertices.iter().zip(w) {
            if *wi != 0 {
                c[var[v]] -= BigRational::new(BigInt::from(*wi), det.clone()) / &chi;
            }
        }
    }
    let sol = maximize(&c, &lp_rows)?;
    let mut out = Falsification {
        k,
        optimum: sol.value.clone(),
        carrier: name,
        cells: cells.len(),
        variables: nvar,
        rows: lp_rows.len(),
        certificate: None,
    };
    if sol.value.is_positive() {
        let values: HashMap<Point, BigRational> = verts.iter().map(|v| (v.clone(), sol.x[var[v]].clone())).collect();
        let f = PLFunction::interpolate(p, k, cells, &values)?;
        let gap = chow_gap(p, &f)?;
        let defects = f.convexity_defects()?;
        if gap.is_negative() && defects.is_empty() {
            out.certificate = Some(Certificate::Function { k, gap, persists_from: None, function: f });
        }
    }
    Ok(out)
}

/// A convex function with a negative gap at `k`, re-verified through
/// [`chow_gap`], or `None` when the carrier admits none.
pub fn falsify(p: &Polytope, k: i64) -> Result<Option<Certificate>> {
    Ok(falsify_lp(p, k)?.certificate)
}
