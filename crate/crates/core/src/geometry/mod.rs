//! Integral polytopes: vertex and facet descriptions, constructors, lattice
//! points, volumes and shells.

pub mod bits;
pub mod faces;
pub mod hull;
mod lattice;

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{dot, factorial, rank, rat};
use crate::error::{Error, Result};
use bits::Bits;

pub use lattice::Moment;

/// A lattice point or integer vector.
pub type Point = Vec<i64>;

/// Largest absolute coordinate accepted from user input.
pub const COORD_LIMIT: i64 = 1 << 24;

/// Highest dimension handled.
pub const MAX_DIM: usize = 8;

/// `{x : ⟨normal, x⟩ ≥ −offset}` with a primitive inward normal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Facet {
    pub normal: Point,
    pub offset: i64,
}

impl Facet {
    /// Lattice distance of `x` from the facet hyperplane of `kP`.
    pub fn slack(&self, x: &[i64], k: i64) -> i64 {
        dot(&self.normal, x) + k * self.offset
    }
}

/// How a polytope was built; enables closed forms for counts and volumes.
#[derive(Clone, Debug)]
pub enum Construction {
    Hull,
    Product(Arc<Polytope>, Arc<Polytope>),
    /// `D(Q)` with `0 ∈ Q`, so every height slice is `(1 − |q|)Q`.
    DoubleCone(Arc<Polytope>),
}

/// Serialized form: `{"name": optional, "dim": n, "vertices": [[..], ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeData {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    pub vertices: Vec<Point>,
}

#[derive(Clone, Debug)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Point>,
    facets: Vec<Facet>,
    /// vertex indices on each facet
    incidence: Vec<Bits>,
    construction: Construction,
    projections: Arc<OnceLock<Vec<Vec<Facet>>>>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl Eq for Polytope {}

impl Polytope {
    /// Convex hull of a point set; non-vertices are dropped.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let n = points.first().map(|p| p.len()).unwrap_or(0);
        if n == 0 || n > MAX_DIM {
            return Err(Error::UnsupportedDimension(n));
        }
        if points.iter().any(|p| p.len() != n) {
            return Err(Error::Parse("inconsistent coordinate lengths".into()));
        }
        if points.iter().flatten().any(|x| x.abs() > COORD_LIMIT) {
            return Err(Error::Overflow("input coordinates"));
        }
        let mut pts = points;
        pts.sort();
        pts.dedup();
        let ineq = hull::facet_inequalities(&pts, n)?;
        let facets: Vec<Facet> = ineq
            .into_iter()
            .map(|(normal, offset)| Facet { normal, offset })
            .collect();
        let vertices: Vec<Point> = pts
            .into_iter()
            .filter(|p| {
                let tight: Vec<Vec<i64>> = facets
                    .iter()
                    .filter(|f| f.slack(p, 1) == 0)
                    .map(|f| f.normal.clone())
                    .collect();
                tight.len() >= n && rank(&tight) == n
            })
            .collect();
        Ok(Self::from_parts(n, vertices, facets, Construction::Hull))
    }

    pub fn from_data(data: &PolytopeData) -> Result<Self> {
        if data.vertices.iter().any(|v| v.len() != data.dim) {
            return Err(Error::Parse(format!(
                "every vertex must have {} coordinates",
                data.dim
            )));
        }
        Self::new(data.vertices.clone())
    }

    pub fn to_data(&self, name: Option<&str>) -> PolytopeData {
        PolytopeData {
            name: name.map(str::to_string),
            dim: self.dim,
            vertices: self.vertices.clone(),
        }
    }

    fn from_parts(
        dim: usize,
        mut vertices: Vec<Point>,
        mut facets: Vec<Facet>,
        construction: Construction,
    ) -> Self {
        vertices.sort();
        facets.sort();
        let incidence = facets
            .iter()
            .map(|f| {
                Bits::from_indices(
                    vertices.len(),
                    vertices
                        .iter()
                        .enumerate()
                        .filter(|(_, v)| f.slack(v, 1) == 0)
                        .map(|(i, _)| i),
                )
            })
            .collect();
        Polytope {
            dim,
            vertices,
            facets,
            incidence,
            construction,
            projections: Arc::new(OnceLock::new()),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Facets in lexicographic order of their normals.
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Vertex indices lying on facet `i`.
    pub fn facet_vertices(&self, i: usize) -> Vec<usize> {
        self.incidence[i].iter().collect()
    }

    pub(crate) fn incidence_bits(&self) -> &[Bits] {
        &self.incidence
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    pub fn contains(&self, x: &[i64], k: i64) -> bool {
        self.facets.iter().all(|f| f.slack(x, k) >= 0)
    }

    pub fn is_interior(&self, x: &[i64], k: i64) -> bool {
        self.facets.iter().all(|f| f.slack(x, k) > 0)
    }

    pub fn on_boundary(&self, x: &[i64], k: i64) -> bool {
        self.contains(x, k) && !self.is_interior(x, k)
    }

    pub fn origin_interior(&self) -> bool {
        self.facets.iter().all(|f| f.offset > 0)
    }

    /// `P × Q` with vertices the Cartesian products of vertex sets.
    pub fn product(p: &Polytope, q: &Polytope) -> Polytope {
        let (a, b) = (p.dim, q.dim);
        let mut vertices = Vec::with_capacity(p.vertices.len() * q.vertices.len());
        for v in &p.vertices {
            for w in &q.vertices {
                let mut x = v.clone();
                x.extend_from_slice(w);
                vertices.push(x);
            }
        }
        let mut facets: Vec<Facet> = p
            .facets
            .iter()
            .map(|f| {
                let mut normal = f.normal.clone();
                normal.extend(std::iter::repeat_n(0, b));
                Facet { normal, offset: f.offset }
            })
            .collect();
        facets.extend(q.facets.iter().map(|f| {
            let mut normal = vec![0; a];
            normal.extend_from_slice(&f.normal);
            Facet { normal, offset: f.offset }
        }));
        Self::from_parts(
            a + b,
            vertices,
            facets,
            Construction::Product(Arc::new(p.clone()), Arc::new(q.clone())),
        )
    }

    /// `D(P) = conv{(P, 0), ±e_{n+1}}`.
    pub fn double_cone(p: &Polytope) -> Result<Polytope> {
        let n = p.dim;
        if n + 1 > MAX_DIM {
            return Err(Error::UnsupportedDimension(n + 1));
        }
        let mut vertices: Vec<Point> = p
            .vertices
            .iter()
            .map(|v| {
                let mut x = v.clone();
                x.push(0);
                x
            })
            .collect();
        let mut apex = vec![0; n + 1];
        apex[n] = 1;
        vertices.push(apex.clone());
        apex[n] = -1;
        vertices.push(apex);
        if p.origin_interior() {
            let mut facets = Vec::with_capacity(2 * p.facets.len());
            for f in &p.facets {
                for s in [1, -1] {
                    let mut normal = f.normal.clone();
                    normal.push(s * f.offset);
                    facets.push(Facet { normal, offset: f.offset });
                }
            }
            return Ok(Self::from_parts(
                n + 1,
                vertices,
                facets,
                Construction::DoubleCone(Arc::new(p.clone())),
            ));
        }
        let hull = Polytope::new(vertices)?;
        if p.contains(&vec![0; n], 1) {
            return Ok(Self::from_parts(
                n + 1,
                hull.vertices,
                hull.facets,
                Construction::DoubleCone(Arc::new(p.clone())),
            ));
        }
        Ok(hull)
    }

    /// The dual `{y : ⟨x, y⟩ ≥ −1 on P}` of a reflexive polytope.
    pub fn dual(&self) -> Result<Polytope> {
        if !self.facets.iter().all(|f| f.offset == 1) {
            return Err(Error::NotReflexive);
        }
        Polytope::new(self.facets.iter().map(|f| f.normal.clone()).collect())
    }

    /// `kP` as an explicit polytope.
    pub fn dilate(&self, k: i64) -> Polytope {
        let construction = match &self.construction {
            Construction::Product(a, b) => {
                Construction::Product(Arc::new(a.dilate(k)), Arc::new(b.dilate(k)))
            }
            _ => Construction::Hull,
        };
        Self::from_parts(
            self.dim,
            self.vertices.iter().map(|v| crate::arith::scale(v, k)).collect(),
            self.facets
                .iter()
                .map(|f| Facet { normal: f.normal.clone(), offset: f.offset * k })
                .collect(),
            construction,
        )
    }

    /// Image under `x ↦ A x + t` for a unimodular `A` given by rows.
    pub fn transform(&self, a: &[Vec<i64>], t: &[i64]) -> Result<Polytope> {
        let img = self
            .vertices
            .iter()
            .map(|v| {
                a.iter()
                    .zip(t)
                    .map(|(row, ti)| dot(row, v) + ti)
                    .collect::<Point>()
            })
            .collect();
        Polytope::new(img)
    }

    /// Exact Euclidean volume.
    pub fn volume(&self) -> BigRational {
        match &self.construction {
            Construction::Product(a, b) => a.volume() * b.volume(),
            Construction::DoubleCone(q) if q.origin_interior() => {
                q.volume() * rat(2) / rat(q.dim as i64 + 1)
            }
            _ => faces::volume_and_moment(self).0,
        }
    }

    /// Exact centroid `∫x dV / Vol`.
    pub fn centroid(&self) -> Vec<BigRational> {
        match &self.construction {
            Construction::Product(a, b) => {
                let mut c = a.centroid();
                c.extend(b.centroid());
                c
            }
            Construction::DoubleCone(q) if q.origin_interior() => {
                let n = q.dim as i64;
                let s = BigRational::new((n + 1).into(), (n + 2).into());
                let mut c: Vec<BigRational> = q.centroid().into_iter().map(|x| x * &s).collect();
                c.push(BigRational::zero());
                c
            }
            _ => {
                let (vol, m) = faces::volume_and_moment(self);
                m.into_iter().map(|x| x / &vol).collect()
            }
        }
    }

    /// Sum of facet volumes, each measured in the facet's own lattice.
    pub fn boundary_volume(&self) -> Result<BigRational> {
        if self.dim < 2 {
            return Err(Error::DimensionTooSmall(self.dim));
        }
        let mut total = BigRational::zero();
        for i in 0..self.facets.len() {
            total += self.facet_volume(i);
        }
        Ok(total)
    }

    /// Relative lattice volume of facet `i`.
    pub fn facet_volume(&self, i: usize) -> BigRational {
        let f = &self.facets[i];
        let n = self.dim;
        let fl = faces::FaceLattice::new(self);
        let simplices = fl.pulling(&self.incidence[i]);
        let u2: i64 = f.normal.iter().map(|x| x * x).sum();
        let mut acc = BigInt::zero();
        for s in simplices.iter() {
            let v0 = &self.vertices[s[0]];
            let mut rows: Vec<Vec<i64>> = s[1..]
                .iter()
                .map(|&j| crate::arith::sub(&self.vertices[j], v0))
                .collect();
            rows.push(f.normal.clone());
            let d = crate::arith::det(&rows);
            acc += if d < BigInt::zero() { -d } else { d };
        }
        BigRational::new(acc, BigInt::from(u2) * factorial(n - 1))
    }

    pub fn is_reflexive(&self) -> bool {
        let by_offsets = self.facets.iter().all(|f| f.offset == 1);
        if by_offsets {
            debug_assert_eq!(self.interior_points(1), vec![vec![0; self.dim]]);
        }
        by_offsets
    }

    /// Lattice points of `kP`, sorted lexicographically.
    pub fn lattice_points(&self, k: i64) -> Vec<Point> {
        lattice::points(self, k)
    }

    pub fn interior_points(&self, k: i64) -> Vec<Point> {
        self.lattice_points(k)
            .into_iter()
            .filter(|p| self.is_interior(p, k))
            .collect()
    }

    pub fn boundary_points(&self, k: i64) -> Vec<Point> {
        self.lattice_points(k)
            .into_iter()
            .filter(|p| !self.is_interior(p, k))
            .collect()
    }

    /// `|kP ∩ ℤⁿ|`, with `count(0) = 1`.
    pub fn count(&self, k: i64) -> BigInt {
        lattice::moment(self, k).count
    }

    /// Count together with the coordinate sums over `kP ∩ ℤⁿ`.
    pub fn moment(&self, k: i64) -> Moment {
        lattice::moment(self, k)
    }

    /// Shells of a reflexive polytope: `i ↦ (∂iP) ∩ ℤⁿ` for `i = 0..=k`.
    pub fn lattice_shells(&self, k: i64) -> Result<BTreeMap<i64, Vec<Point>>> {
        if !self.is_reflexive() {
            return Err(Error::NotReflexive);
        }
        let mut shells: BTreeMap<i64, Vec<Point>> = (0..=k).map(|i| (i, Vec::new())).collect();
        for p in self.lattice_points(k) {
            let i = self
                .facets
                .iter()
                .map(|f| -dot(&f.normal, &p))
                .max()
                .unwrap_or(0)
                .max(0);
            shells.entry(i).or_default().push(p);
        }
        Ok(shells)
    }

    /// Facet normals of the projection onto the first `i + 1` coordinates.
    pub(crate) fn projections(&self) -> &[Vec<Facet>] {
        self.projections.get_or_init(|| lattice::projection_facets(self))
    }
}
