//! Face-by-face construction of a triangulation of `∂P` at dilation one.
//!
//! Each face receives one triangulation, memoized, so shared faces agree.
//! Rules, first match wins: points and segments; unimodular simplices; cones
//! from the first vertex when every opposite facet is at lattice distance
//! one; dilated unimodular simplices (Kuhn); lattice parallelepipeds
//! (Freudenthal along lexicographically positive edge directions); polygons
//! (placing then stellar refinement).

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_traits::ToPrimitive;

use super::kuhn::{permutations, Refiner};
use super::planar::{self, P2};
use super::LatticeSimplex;
use crate::arith::{gcd_slice, int_coords_in, integer_kernel, saturated_basis, sub};
use crate::error::{Error, Result};
use crate::geometry::bits::Bits;
use crate::geometry::faces::FaceLattice;
use crate::geometry::{Point, Polytope};

type Cells = Rc<Vec<Vec<u32>>>;

struct Frame {
    origin: Point,
    basis: Vec<Point>,
}

impl Frame {
    fn of(points: &[Point]) -> Frame {
        let n = points[0].len();
        let diffs: Vec<Point> = points[1..].iter().map(|p| sub(p, &points[0])).collect();
        let basis = saturated_basis(&diffs, n).expect("face basis fits in i64");
        Frame { origin: points[0].clone(), basis }
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn coords(&self, x: &[i64]) -> Point {
        int_coords_in(&self.basis, &sub(x, &self.origin)).expect("point lies in the face lattice")
    }
}

/// Strategy triangulations of the faces of one polytope, over the lattice
/// points of `P` indexed in lexicographic order.
pub struct BoundaryBuilder<'a> {
    p: &'a Polytope,
    faces: FaceLattice<'a>,
    points: Vec<Point>,
    index: HashMap<Point, u32>,
    tight: Vec<Bits>,
    vertex_ids: Vec<u32>,
    memo: RefCell<HashMap<Bits, Cells>>,
    overrides: HashMap<Bits, Cells>,
}

impl<'a> BoundaryBuilder<'a> {
    pub fn new(p: &'a Polytope) -> Self {
        let points = p.lattice_points(1);
        let index: HashMap<Point, u32> = points.iter().enumerate().map(|(i, x)| (x.clone(), i as u32)).collect();
        let m = p.facets().len();
        let tight = points
            .iter()
            .map(|x| Bits::from_indices(m, (0..m).filter(|&j| p.facets()[j].slack(x, 1) == 0)))
            .collect();
        let vertex_ids = p.vertices().iter().map(|v| index[v]).collect();
        BoundaryBuilder {
            p,
            faces: FaceLattice::new(p),
            points,
            index,
            tight,
            vertex_ids,
            memo: RefCell::new(HashMap::new()),
            overrides: HashMap::new(),
        }
    }

    pub fn polytope(&self) -> &Polytope {
        self.p
    }

    /// Lattice points of `P`, lexicographically sorted; ids index this list.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn id(&self, x: &[i64]) -> Option<u32> {
        self.index.get(x).copied()
    }

    pub fn points_of(&self, ids: &[u32]) -> Vec<Point> {
        ids.iter().map(|&i| self.points[i as usize].clone()).collect()
    }

    /// Vertex sets of the facets of `P`.
    pub fn facet_faces(&self) -> Vec<Bits> {
        (0..self.p.facets().len())
            .map(|j| Bits::from_indices(self.p.vertices().len(), self.p.facet_vertices(j)))
            .collect()
    }

    /// Ids of the lattice points of a face.
    pub fn face_points(&self, face: &Bits) -> Vec<u32> {
        let m = self.p.facets().len();
        let containing = Bits::from_indices(
            m,
            (0..m).filter(|&j| face.is_subset(&Bits::from_indices(self.p.vertices().len(), self.p.facet_vertices(j)))),
        );
        (0..self.points.len() as u32)
            .filter(|&i| containing.is_subset(&self.tight[i as usize]))
            .collect()
    }

    fn face_vertices(&self, face: &Bits) -> Vec<u32> {
        face.iter().map(|v| self.vertex_ids[v]).collect()
    }

    /// Replace the triangulation chosen for a face.
    pub fn set_override(&mut self, face: Bits, cells: Vec<Vec<u32>>) {
        self.memo.borrow_mut().clear();
        self.overrides.insert(face, Rc::new(cells));
    }

    /// Maximal simplices triangulating a face, each as sorted point ids.
    pub fn face_triangulation(&self, face: &Bits) -> Result<Cells> {
        if let Some(t) = self.overrides.get(face) {
            return Ok(t.clone());
        }
        if let Some(t) = self.memo.borrow().get(face) {
            return Ok(t.clone());
        }
        let mut cells = self.build(face)?;
        for c in cells.iter_mut() {
            c.sort_unstable();
        }
        cells.sort();
        let cells = Rc::new(cells);
        self.memo.borrow_mut().insert(face.clone(), cells.clone());
        Ok(cells)
    }

    /// Union of the facet triangulations.
    pub fn boundary_t1(&self) -> Result<Vec<Vec<u32>>> {
        let mut out = Vec::new();
        for f in self.facet_faces() {
            out.extend(self.face_triangulation(&f)?.iter().cloned());
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    fn build(&self, face: &Bits) -> Result<Vec<Vec<u32>>> {
        let verts = self.face_vertices(face);
        let vpts = self.points_of(&verts);
        let frame = Frame::of(&vpts);
        let d = frame.dim();
        if d == 0 {
            return Ok(vec![verts]);
        }
        let pts = self.face_points(face);
        if d == 1 {
            return Ok(pts.windows(2).map(|w| w.to_vec()).collect());
        }
        if verts.len() == d + 1 && LatticeSimplex::new(vpts.clone()).is_unimodular() {
            return Ok(vec![verts]);
        }
        if let Some(c) = self.pyramid(face, &frame)? {
            return Ok(c);
        }
        if verts.len() == d + 1 {
            if let Some(c) = self.dilated_simplex(&vpts) {
                return Ok(c);
            }
        }
        if verts.len() == 1 << d {
            if let Some(c) = self.parallelepiped(face, &verts) {
                return Ok(c);
            }
        }
        if d == 2 {
            let coords: Vec<P2> = pts
                .iter()
                .map(|&i| {
                    let c = frame.coords(&self.points[i as usize]);
                    [c[0], c[1]]
                })
                .collect();
            return Ok(planar::placing_stellar(&coords)
                .into_iter()
                .map(|t| t.iter().map(|&j| pts[j]).collect())
                .collect());
        }
        Err(Error::NoStrategy(format!(
            "{d}-dimensional face with {} vertices and {} lattice points",
            verts.len(),
            pts.len()
        )))
    }

    fn pyramid(&self, face: &Bits, frame: &Frame) -> Result<Option<Vec<Vec<u32>>>> {
        let apex_vertex = face.first().expect("nonempty face");
        let apex = &self.p.vertices()[apex_vertex];
        let ca = frame.coords(apex);
        let opposite: Vec<Bits> = self.faces.facets_of(face).into_iter().filter(|g| !g.get(apex_vertex)).collect();
        for g in &opposite {
            let gc: Vec<Point> = g.iter().map(|v| frame.coords(&self.p.vertices()[v])).collect();
            let rows: Vec<Point> = gc[1..].iter().map(|c| sub(c, &gc[0])).collect();
            let ker = integer_kernel(&rows, frame.dim());
            if ker.len() != 1 {
                return Ok(None);
            }
            let w: Vec<i64> = ker[0].iter().map(|x| x.to_i64().unwrap_or(i64::MAX)).collect();
            let h = sub(&ca, &gc[0]);
            let dist: i128 = w.iter().zip(&h).map(|(&a, &b)| a as i128 * b as i128).sum();
            if dist.abs() != 1 {
                return Ok(None);
            }
        }
        let apex_id = self.vertex_ids[apex_vertex];
        let mut out = Vec::new();
        for g in &opposite {
            for s in self.face_triangulation(g)?.iter() {
                let mut c = vec![apex_id];
                c.extend_from_slice(s);
                out.push(c);
            }
        }
        Ok(Some(out))
    }

    fn dilated_simplex(&self, vpts: &[Point]) -> Option<Vec<Vec<u32>>> {
        let edges: Vec<Point> = vpts[1..].iter().map(|v| sub(v, &vpts[0])).collect();
        let m = gcd_slice(&edges[0]);
        if m < 2 || edges.iter().any(|e| gcd_slice(e) != m) {
            return None;
        }
        let steps: Vec<Point> = vpts
            .windows(2)
            .map(|w| sub(&w[1], &w[0]).into_iter().map(|x| x / m).collect())
            .collect();
        let mut unit = vec![vec![0i64; vpts[0].len()]];
        for s in &steps {
            let last = unit.last().unwrap().clone();
            unit.push(last.iter().zip(s).map(|(a, b)| a + b).collect());
        }
        if !LatticeSimplex::new(unit).is_unimodular() {
            return None;
        }
        let r = Refiner::new(steps.len(), m);
        r.apply_steps(&vpts[0], &steps)
            .into_iter()
            .map(|cell| cell.iter().map(|x| self.id(x)).collect::<Option<Vec<u32>>>())
            .collect()
    }

    fn parallelepiped(&self, face: &Bits, verts: &[u32]) -> Option<Vec<Vec<u32>>> {
        let d = verts.len().trailing_zeros() as usize;
        let nv = self.p.vertices().len();
        let v0 = face.first()?;
        let base = self.p.vertices()[v0].clone();
        let mut dirs: Vec<Point> = Vec::new();
        for u in face.iter().filter(|&u| u != v0) {
            let pair = Bits::from_indices(nv, [v0, u]);
            let mut smallest = Bits::from_indices(nv, 0..nv);
            for g in self.p.incidence_bits() {
                if pair.is_subset(g) {
                    smallest = smallest.and(g);
                }
            }
            if smallest == pair {
                dirs.push(sub(&self.p.vertices()[u], &base));
            }
        }
        if dirs.len() != d {
            return None;
        }
        let mut corners: Vec<Point> = Vec::new();
        for mask in 0..(1usize << d) {
            let mut x = base.clone();
            for (i, w) in dirs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    x = x.iter().zip(w).map(|(a, b)| a + b).collect();
                }
            }
            corners.push(x);
        }
        corners.sort();
        let mut actual = self.points_of(verts);
        actual.sort();
        if corners != actual {
            return None;
        }
        let lens: Vec<i64> = dirs.iter().map(|w| gcd_slice(w)).collect();
        let unit: Vec<Point> = dirs.iter().zip(&lens).map(|(w, &l)| w.iter().map(|x| x / l).collect()).collect();
        let mut simplex = vec![vec![0i64; base.len()]];
        simplex.extend(unit.iter().cloned());
        if !LatticeSimplex::new(simplex).is_unimodular() {
            return None;
        }
        let perms = permutations(d);
        let mut out = Vec::new();
        let mut z = vec![0i64; d];
        loop {
            let mut corner = base.clone();
            for (zi, w) in z.iter().zip(&unit) {
                corner = corner.iter().zip(w).map(|(a, b)| a + zi * b).collect();
            }
            for p in &perms {
                let mut x = corner.clone();
                let mut cell = vec![self.id(&x)?];
                for &i in p {
                    x = x.iter().zip(&unit[i]).map(|(a, b)| a + b).collect();
                    cell.push(self.id(&x)?);
                }
                out.push(cell);
            }
            let mut i = 0;
            loop {
                if i == d {
                    return Some(out);
                }
                z[i] += 1;
                if z[i] < lens[i] {
                    break;
                }
                z[i] = 0;
                i += 1;
            }
        }
    }

    /// For three-dimensional polytopes: choose, facet by facet, among all
    /// unimodular triangulations of the facet polygon so that the largest
    /// number of triangles at a boundary point is as small as possible.
    pub fn balance_planar_facets(&mut self) -> Result<()> {
        if self.p.dim() != 3 {
            return Ok(());
        }
        let facets = self.facet_faces();
        let mut cands: Vec<Vec<Cells>> = Vec::new();
        let mut choice: Vec<usize> = Vec::new();
        for f in &facets {
            let default = self.face_triangulation(f)?;
            let pts = self.face_points(f);
            let frame = Frame::of(&self.points_of(&pts));
            let coords: Vec<P2> = pts
                .iter()
                .map(|&i| {
                    let c = frame.coords(&self.points[i as usize]);
                    [c[0], c[1]]
                })
                .collect();
            let mut list: Vec<Cells> = match planar::unimodular_triangulations(&coords, 2000) {
                Ok(all) => all
                    .into_iter()
                    .map(|t| {
                        let mut cells: Vec<Vec<u32>> = t
                            .iter()
                            .map(|tri| {
                                let mut c: Vec<u32> = tri.iter().map(|&j| pts[j]).collect();
                                c.sort_unstable();
                                c
                            })
                            .collect();
                        cells.sort();
                        Rc::new(cells)
                    })
                    .collect(),
                Err(Error::Budget(_)) => Vec::new(),
                Err(e) => return Err(e),
            };
            let at = match list.iter().position(|c| c == &default) {
                Some(i) => i,
                None => {
                    list.insert(0, default);
                    0
                }
            };
            cands.push(list);
            choice.push(at);
        }
        let score = |choice: &[usize]| -> (u32, u32, u64) {
            let mut deg: HashMap<u32, u32> = HashMap::new();
            for (f, &c) in choice.iter().enumerate() {
                for t in cands[f][c].iter() {
                    for &v in t {
                        *deg.entry(v).or_insert(0) += 1;
                    }
                }
            }
            let max = deg.values().copied().max().unwrap_or(0);
            let excess = deg.values().map(|&m| m.saturating_sub(6)).sum();
            let sq = deg.values().map(|&m| (m as u64) * (m as u64)).sum();
            (max, excess, sq)
        };
        let mut best = score(&choice);
        for _round in 0..100 {
            let mut improved = false;
            for f in 0..facets.len() {
                for c in 0..cands[f].len() {
                    if c == choice[f] {
                        continue;
                    }
                    let prev = choice[f];
                    choice[f] = c;
                    let s = score(&choice);
                    if s < best {
                        best = s;
                        improved = true;
                    } else {
                        choice[f] = prev;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        for (f, face) in facets.into_iter().enumerate() {
            let cells = cands[f][choice[f]].as_ref().clone();
            self.set_override(face, cells);
        }
        Ok(())
    }
}

