//! Face lattice queries and pulling triangulations of faces.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::bits::Bits;
use super::Polytope;
use crate::arith::{det, factorial, sub};

/// Faces are vertex-index sets; every face is an intersection of facets.
pub struct FaceLattice<'a> {
    p: &'a Polytope,
    memo: RefCell<HashMap<Bits, Rc<Vec<Vec<usize>>>>>,
}

impl<'a> FaceLattice<'a> {
    pub fn new(p: &'a Polytope) -> Self {
        FaceLattice { p, memo: RefCell::new(HashMap::new()) }
    }

    pub fn polytope(&self) -> &Polytope {
        self.p
    }

    pub fn full(&self) -> Bits {
        Bits::from_indices(self.p.vertices().len(), 0..self.p.vertices().len())
    }

    /// Facets of a face: the maximal proper nonempty intersections with facets of `P`.
    pub fn facets_of(&self, face: &Bits) -> Vec<Bits> {
        let mut cands: Vec<Bits> = self
            .p
            .incidence_bits()
            .iter()
            .map(|g| face.and(g))
            .filter(|c| !c.is_empty() && c != face)
            .collect();
        cands.sort();
        cands.dedup();
        let maximal: Vec<Bits> = cands
            .iter()
            .filter(|c| !cands.iter().any(|d| d != *c && c.is_subset(d)))
            .cloned()
            .collect();
        maximal
    }

    /// Pulling triangulation of a face from its first vertex, recursively.
    pub fn pulling(&self, face: &Bits) -> Rc<Vec<Vec<usize>>> {
        if let Some(t) = self.memo.borrow().get(face) {
            return t.clone();
        }
        let verts: Vec<usize> = face.iter().collect();
        let out = if verts.len() == 1 {
            vec![verts]
        } else {
            let v0 = verts[0];
            let mut out = Vec::new();
            for g in self.facets_of(face) {
                if g.get(v0) {
                    continue;
                }
                for s in self.pulling(&g).iter() {
                    let mut t = Vec::with_capacity(s.len() + 1);
                    t.push(v0);
                    t.extend_from_slice(s);
                    out.push(t);
                }
            }
            out
        };
        let out = Rc::new(out);
        self.memo.borrow_mut().insert(face.clone(), out.clone());
        out
    }
}

/// Volume and first moment `∫x dV` from the pulling triangulation.
pub(crate) fn volume_and_moment(p: &Polytope) -> (BigRational, Vec<BigRational>) {
    let n = p.dim();
    let fl = FaceLattice::new(p);
    let simplices = fl.pulling(&fl.full());
    let verts = p.vertices();
    let mut vol = BigInt::zero();
    let mut mom = vec![BigInt::zero(); n];
    for s in simplices.iter() {
        let v0 = &verts[s[0]];
        let rows: Vec<Vec<i64>> = s[1..].iter().map(|&j| sub(&verts[j], v0)).collect();
        let d = det(&rows).abs();
        for (i, m) in mom.iter_mut().enumerate() {
            let c: i64 = s.iter().map(|&j| verts[j][i]).sum();
            *m += &d * BigInt::from(c);
        }
        vol += d;
    }
    let nf = factorial(n);
    let volume = BigRational::new(vol, nf.clone());
    let moment = mom
        .into_iter()
        .map(|m| BigRational::new(m, &nf * BigInt::from(n + 1)))
        .collect();
    (volume, moment)
}
