//! Lattice triangulations: Kuhn refinements of dilated simplices, boundary
//! triangulations built face by face, exact verification and incidence counts.

pub mod kuhn;
pub mod planar;
mod strata;
mod strategy;
mod verify;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{det_i128, det, solve, sub};
use crate::error::{Error, Result};
use crate::geometry::{Point, Polytope};

pub use kuhn::{kuhn_incidence, Refiner};
pub use strata::{stratum_incidence, stratum_points, StratumMap};
pub use strategy::BoundaryBuilder;
pub use verify::{verify_full, verify_regular_boundary, BoundaryReport, FullReport};

/// A lattice simplex; the vertex order is the one used for refinement.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeSimplex {
    pub vertices: Vec<Point>,
}

fn combinations(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, d: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, d, &mut Vec::new(), &mut out);
    out
}

impl LatticeSimplex {
    pub fn new(vertices: Vec<Point>) -> Self {
        LatticeSimplex { vertices }
    }

    pub fn dim(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn edges(&self) -> Vec<Point> {
        self.vertices[1..].iter().map(|v| sub(v, &self.vertices[0])).collect()
    }

    /// `d!` times the volume relative to the lattice of the affine span: the
    /// gcd of the maximal minors of the edge matrix. Zero when degenerate.
    pub fn normalized_volume(&self) -> BigInt {
        let d = self.dim();
        if d == 0 {
            return BigInt::one();
        }
        let e = self.edges();
        let n = e[0].len();
        let mut g = BigInt::zero();
        for cols in combinations(n, d) {
            let m: Vec<Vec<i64>> = e.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect();
            let v = match det_i128(&m) {
                Some(x) => BigInt::from(x),
                None => det(&m),
            };
            g = g.gcd(&v);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn is_unimodular(&self) -> bool {
        self.normalized_volume().is_one()
    }

    /// Closed-cell membership.
    pub fn contains(&self, x: &[i64]) -> bool {
        let d = self.dim();
        if d == 0 {
            return self.vertices[0] == x;
        }
        let e = self.edges();
        let n = e[0].len();
        let t = sub(x, &self.vertices[0]);
        let Some(cols) = combinations(n, d).into_iter().find(|cols| {
            let m: Vec<Vec<i64>> = e.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect();
            !det(&m).is_zero()
        }) else {
            return false;
        };
        let a: Vec<Vec<BigRational>> = cols
            .iter()
            .map(|&c| e.iter().map(|r| BigRational::from_integer(r[c].into())).collect())
            .collect();
        let b: Vec<BigRational> = cols.iter().map(|&c| BigRational::from_integer(t[c].into())).collect();
        let Some(lam) = solve(&a, &b) else {
            return false;
        };
        for c in 0..n {
            let s: BigRational = lam.iter().zip(&e).map(|(l, r)| l * BigRational::from_integer(r[c].into())).sum();
            if s != BigRational::from_integer(t[c].into()) {
                return false;
            }
        }
        let total: BigRational = lam.iter().sum();
        lam.iter().all(|l| !l.is_negative()) && total <= BigRational::one()
    }

    /// Lattice points of the closed cell.
    pub fn lattice_points(&self) -> Vec<Point> {
        if self.is_unimodular() {
            let mut v = self.vertices.clone();
            v.sort();
            return v;
        }
        let n = self.vertices[0].len();
        let lo: Vec<i64> = (0..n).map(|c| self.vertices.iter().map(|v| v[c]).min().unwrap()).collect();
        let hi: Vec<i64> = (0..n).map(|c| self.vertices.iter().map(|v| v[c]).max().unwrap()).collect();
        let mut out = Vec::new();
        let mut x = lo.clone();
        loop {
            if self.contains(&x) {
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
                    break;
                }
                x[i] = lo[i];
            }
        }
    }
}

/// A set of `dim`-simplices. JSON: `{"dim": d, "simplices": [[[..], ..], ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triangulation {
    pub dim: usize,
    pub simplices: Vec<LatticeSimplex>,
}

impl Triangulation {
    /// Canonical form: vertices sorted within each simplex, simplices sorted.
    pub fn new(dim: usize, simplices: Vec<LatticeSimplex>) -> Self {
        let mut simplices: Vec<LatticeSimplex> = simplices
            .into_iter()
            .map(|mut s| {
                s.vertices.sort();
                s
            })
            .collect();
        simplices.sort();
        Triangulation { dim, simplices }
    }

    /// Shape check for deserialized input, then canonical form.
    pub fn validated(self) -> Result<Self> {
        let t = self;
        let amb = t.simplices.first().map(|s| s.vertices.first().map(|v| v.len()).unwrap_or(0));
        for s in &t.simplices {
            if s.vertices.len() != t.dim + 1 || s.vertices.iter().any(|v| Some(v.len()) != amb) {
                return Err(Error::Parse("simplex shape does not match dim".into()));
            }
        }
        Ok(Triangulation::new(t.dim, t.simplices))
    }

    /// For every lattice point in the union, the number of closed cells containing it.
    pub fn incidence(&self) -> BTreeMap<Point, usize> {
        let mut m = BTreeMap::new();
        for s in &self.simplices {
            for p in s.lattice_points() {
                *m.entry(p).or_insert(0) += 1;
            }
        }
        m
    }

    pub fn max_incidence(&self) -> usize {
        self.incidence().values().copied().max().unwrap_or(0)
    }

    pub fn all_unimodular(&self) -> bool {
        self.simplices.iter().all(|s| s.is_unimodular())
    }

    /// `Σ normalized volumes / d!`.
    pub fn relative_volume(&self) -> BigRational {
        let s: BigInt = self.simplices.iter().map(|s| s.normalized_volume()).sum();
        BigRational::new(s, crate::arith::factorial(self.dim))
    }
}

/// Kuhn cells of every ordered simplex of `t1` dilated by `k`.
pub fn refine(t1: &[Vec<Point>], k: i64) -> Vec<LatticeSimplex> {
    let mut refiners: BTreeMap<usize, Refiner> = BTreeMap::new();
    let mut out = Vec::new();
    for s in t1 {
        let d = s.len() - 1;
        let r = refiners.entry(d).or_insert_with(|| Refiner::new(d, k));
        out.extend(r.apply(s).into_iter().map(LatticeSimplex::new));
    }
    out
}

/// The Kuhn triangulation of `kTₙ`, `Tₙ = conv{0, e₁, …, eₙ}`.
pub fn standard_simplex_triangulation(n: usize, k: i64) -> Triangulation {
    let mut verts = vec![vec![0i64; n]];
    for i in 0..n {
        let mut e = vec![0i64; n];
        e[i] = 1;
        verts.push(e);
    }
    Triangulation::new(n, refine(&[verts], k))
}

/// Triangulation of `∂(kP)` from the face strategies.
pub fn boundary_triangulation(p: &Polytope, k: i64) -> Result<Triangulation> {
    let mut b = BoundaryBuilder::new(p);
    if p.dim() == 3 {
        b.balance_planar_facets()?;
    }
    let t1 = b.boundary_t1()?;
    let ordered: Vec<Vec<Point>> = t1.iter().map(|s| b.points_of(s)).collect();
    Ok(Triangulation::new(p.dim().saturating_sub(1), refine(&ordered, k)))
}

/// Cones from the origin over a boundary triangulation of a reflexive polytope.
pub fn cone_over_boundary(p: &Polytope, boundary: &Triangulation) -> Result<Triangulation> {
    if !p.is_reflexive() {
        return Err(Error::NotReflexive);
    }
    let n = p.dim();
    let origin = vec![0i64; n];
    let mut out = Vec::with_capacity(boundary.simplices.len());
    for s in &boundary.simplices {
        if s.vertices.contains(&origin) {
            return Err(Error::InvalidArgument("boundary simplex contains the origin".into()));
        }
        let mut v = vec![origin.clone()];
        v.extend(s.vertices.iter().cloned());
        out.push(LatticeSimplex::new(v));
    }
    Ok(Triangulation::new(n, out))
}
