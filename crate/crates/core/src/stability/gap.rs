//! Piecewise-linear functions on triangulated dilates and the exact gap
//! between their lattice average and their integral average.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{big_rat, det, factorial, fmt_rat, sub};
use crate::error::{Error, Result};
use crate::geometry::{Point, Polytope};
use crate::triangulation::{LatticeSimplex, Triangulation};

/// A function on `kP ∩ ℤⁿ`, extended linearly over the cells of `triangulation`.
#[derive(Clone, Debug)]
pub struct PLFunction {
    pub k: i64,
    pub values: BTreeMap<Point, BigRational>,
    pub triangulation: Triangulation,
}

impl Serialize for PLFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let support: Vec<(&Point, String)> = self
            .values
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(p, v)| (p, fmt_rat(v)))
            .collect();
        let mut st = s.serialize_struct("PLFunction", 4)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("support", &support)?;
        st.serialize_field("lattice_points", &self.values.len())?;
        st.serialize_field("cells", &self.triangulation.simplices.len())?;
        st.end()
    }
}

/// Barycentric coordinates in one full-dimensional cell:
/// `x = v₀ + M μ`, `μ = adj(M)(x − v₀) / det M`.
pub(crate) struct CellFrame {
    v0: Point,
    adj: Vec<Vec<i128>>,
    det: i128,
}

impl CellFrame {
    pub(crate) fn new(cell: &LatticeSimplex) -> Result<CellFrame> {
        let n = cell.vertices[0].len();
        let v0 = cell.vertices[0].clone();
        let edges: Vec<Point> = cell.vertices[1..].iter().map(|v| sub(v, &v0)).collect();
        // M[r][c] = edges[c][r]
        let m: Vec<Vec<i64>> = (0..n).map(|r| (0..n).map(|c| edges[c][r]).collect()).collect();
        let d = det(&m).to_i128().ok_or(Error::Overflow("cell determinant"))?;
        if d == 0 {
            return Err(Error::InvalidFunction("degenerate cell".into()));
        }
        let mut adj = vec![vec![0i128; n]; n];
        for i in 0..n {
            for j in 0..n {
                let minor: Vec<Vec<i64>> = (0..n)
                    .filter(|&r| r != j)
                    .map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c]).collect())
                    .collect();
                let c = if minor.is_empty() { BigInt::from(1) } else { det(&minor) };
                let c = c.to_i128().ok_or(Error::Overflow("cell adjugate"))?;
                adj[i][j] = if (i + j) % 2 == 0 { c } else { -c };
            }
        }
        let (adj, d) = if d < 0 {
            (adj.into_iter().map(|r| r.into_iter().map(|x| -x).collect()).collect(), -d)
        } else {
            (adj, d)
        };
        Ok(CellFrame { v0, adj, det: d })
    }

    /// Numerators of the barycentric coordinates over the positive denominator `det`.
    pub(crate) fn bary(&self, x: &[i64]) -> Vec<i128> {
        let t = sub(x, &self.v0);
        let mu: Vec<i128> = self
            .adj
            .iter()
            .map(|row| row.iter().zip(&t).map(|(a, b)| a * *b as i128).sum())
            .collect();
        let mut out = vec![self.det - mu.iter().sum::<i128>()];
        out.extend(mu);
        out
    }

    pub(crate) fn det(&self) -> i128 {
        self.det
    }
}

fn ratio(n: i128, d: i128) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// For each lattice point of `kP`, a containing cell with barycentric weights.
pub(crate) fn locate(
    points: &[Point],
    cells: &[LatticeSimplex],
    frames: &[CellFrame],
) -> Result<Vec<(usize, Vec<i128>)>> {
    let mut vertex_cell: HashMap<&Point, (usize, usize)> = HashMap::new();
    for (ci, c) in cells.iter().enumerate() {
        for (vi, v) in c.vertices.iter().enumerate() {
            vertex_cell.entry(v).or_insert((ci, vi));
        }
    }
    points
        .iter()
        .map(|p| {
            if let Some(&(ci, vi)) = vertex_cell.get(p) {
                let mut w = vec![0i128; cells[ci].vertices.len()];
                w[vi] = frames[ci].det();
                return Ok((ci, w));
            }
            for (ci, f) in frames.iter().enumerate() {
                let b = f.bary(p);
                if b.iter().all(|&x| x >= 0) {
                    return Ok((ci, b));
                }
            }
            Err(Error::CoverageError { expected: format!("a cell containing {p:?}"), found: "none".into() })
        })
        .collect()
}

impl PLFunction {
    /// Values at the cell vertices, extended to every lattice point of `kP`
    /// by linear interpolation.
    pub fn interpolate(p: &Polytope, k: i64, cells: Vec<LatticeSimplex>, vertex_values: &HashMap<Point, BigRational>) -> Result<Self> {
        let frames: Vec<CellFrame> = cells.iter().map(CellFrame::new).collect::<Result<_>>()?;
        let points = p.lattice_points(k);
        let loc = locate(&points, &cells, &frames)?;
        let mut values = BTreeMap::new();
        for (x, (ci, w)) in points.into_iter().zip(loc) {
            let mut v = BigRational::zero();
            for (vert, wi) in cells[ci].vertices.iter().zip(&w) {
                if *wi != 0 {
                    let fv = vertex_values
                        .get(vert)
                        .ok_or_else(|| Error::InvalidFunction(format!("no value at vertex {vert:?}")))?;
                    v += fv * ratio(*wi, frames[ci].det());
                }
            }
            values.insert(x, v);
        }
        Ok(PLFunction { k, values, triangulation: Triangulation::new(p.dim(), cells) })
    }

    /// Exact integral of the linear extension over the cells.
    pub fn integral(&self) -> Result<BigRational> {
        self.integral_where(|_| true)
    }

    /// Integral over the cells satisfying `keep`.
    pub fn integral_where(&self, keep: impl Fn(&LatticeSimplex) -> bool) -> Result<BigRational> {
        let n = self.triangulation.dim;
        let mut acc = BigRational::zero();
        for c in self.triangulation.simplices.iter().filter(|c| keep(c)) {
            let vol = det(&c.edges()).abs();
            let mut s = BigRational::zero();
            for v in &c.vertices {
                s += self
                    .values
                    .get(v)
                    .ok_or_else(|| Error::InvalidFunction(format!("no value at vertex {v:?}")))?;
            }
            acc += big_rat(vol) * s;
        }
        Ok(acc / big_rat(factorial(n) * BigInt::from(n + 1)))
    }

    /// Interior ridges where the linear extension fails to bend upward,
    /// together with values disagreeing with the interpolation.
    pub fn convexity_defects(&self) -> Result<Vec<String>> {
        let cells = &self.triangulation.simplices;
        let frames: Vec<CellFrame> = cells.iter().map(CellFrame::new).collect::<Result<_>>()?;
        let mut out = Vec::new();
        for (a, ia, b, ib) in interior_ridges(cells) {
            let w = frames[a].bary(&cells[b].vertices[ib]);
            let mut lin = BigRational::zero();
            for (v, wi) in cells[a].vertices.iter().zip(&w) {
                lin += &self.values[v] * ratio(*wi, frames[a].det());
            }
            if self.values[&cells[b].vertices[ib]] < lin {
                out.push(format!("fold across ridge opposite {:?}", cells[a].vertices[ia]));
            }
        }
        let points: Vec<Point> = self.values.keys().cloned().collect();
        let loc = locate(&points, cells, &frames)?;
        for (x, (ci, w)) in points.iter().zip(loc) {
            let mut v = BigRational::zero();
            for (vert, wi) in cells[ci].vertices.iter().zip(&w) {
                v += &self.values[vert] * ratio(*wi, frames[ci].det());
            }
            if v != self.values[x] {
                out.push(format!("value at {x:?} differs from the interpolation"));
            }
        }
        Ok(out)
    }
}

/// Pairs of cells sharing a ridge: `(cell a, apex index in a, cell b, apex index in b)`.
pub(crate) fn interior_ridges(cells: &[LatticeSimplex]) -> Vec<(usize, usize, usize, usize)> {
    let mut map: HashMap<Vec<&Point>, Vec<(usize, usize)>> = HashMap::new();
    for (ci, c) in cells.iter().enumerate() {
        for drop in 0..c.vertices.len() {
            let mut key: Vec<&Point> = c.vertices.iter().enumerate().filter(|(i, _)| *i != drop).map(|(_, v)| v).collect();
            key.sort();
            map.entry(key).or_default().push((ci, drop));
        }
    }
    let mut out: Vec<(usize, usize, usize, usize)> = map
        .into_values()
        .filter(|l| l.len() == 2)
        .map(|l| (l[0].0, l[0].1, l[1].0, l[1].1))
        .collect();
    out.sort();
    out
}

/// `(1/χ(kP)) Σ f(p) − (1/Vol(kP)) ∫ f`; nonnegative values mean the
/// inequality holds at this `k` for this `f`.
pub fn chow_gap(p: &Polytope, f: &PLFunction) -> Result<BigRational> {
    let n = p.dim();
    let k = f.k;
    let t = &f.triangulation;
    if t.dim != n {
        return Err(Error::InvalidFunction(format!("cells of dimension {} in dimension {n}", t.dim)));
    }
    let vol_k = p.volume() * big_rat(BigInt::from(k).pow(n as u32));
    let covered = t.relative_volume();
    if covered != vol_k {
        return Err(Error::CoverageError { expected: fmt_rat(&vol_k), found: fmt_rat(&covered) });
    }
    for c in &t.simplices {
        if let Some(v) = c.vertices.iter().find(|v| !p.contains(v, k)) {
            return Err(Error::InvalidFunction(format!("cell vertex {v:?} lies outside")));
        }
    }
    let integral = f.integral()?;
    let points = p.lattice_points(k);
    let mut sum = BigRational::zero();
    for x in &points {
        sum += f
            .values
            .get(x)
            .ok_or_else(|| Error::InvalidFunction(format!("no value at {x:?}")))?;
    }
    let chi = big_rat(BigInt::from(points.len()));
    Ok(sum / chi - integral / vol_k)
}
