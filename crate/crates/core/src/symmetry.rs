//! Lattice automorphisms, symmetry predicates, centroids and Futaki–Ono invariants.

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, HashSet};
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{big_rat, det, fmt_rat, rank, rat, sub};
use crate::ehrhart::interpolate;
use crate::error::{Error, Result};
use crate::geometry::{hull, Point, Polytope};

/// `x ↦ A x + t`; linear automorphisms have `t = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LatticeAutomorphism {
    pub matrix: Vec<Vec<i64>>,
    pub translation: Vec<i64>,
}

impl LatticeAutomorphism {
    pub fn identity(n: usize) -> Self {
        LatticeAutomorphism {
            matrix: (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect(),
            translation: vec![0; n],
        }
    }

    /// Image of `x` as a point of `kP` (the translation scales with `k`).
    pub fn apply(&self, x: &[i64], k: i64) -> Point {
        self.matrix
            .iter()
            .zip(&self.translation)
            .map(|(row, t)| row.iter().zip(x).map(|(a, b)| a * b).sum::<i64>() + k * t)
            .collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.matrix.len();
        let matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|l| self.matrix[i][l] * other.matrix[l][j]).sum())
                    .collect()
            })
            .collect();
        let translation = self.apply(&other.translation, 1);
        LatticeAutomorphism { matrix, translation }
    }

    pub fn determinant(&self) -> BigInt {
        det(&self.matrix)
    }

    pub fn is_linear(&self) -> bool {
        self.translation.iter().all(|&t| t == 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// `GL(n, ℤ)` stabilizer of `P`.
    Linear,
    /// Affine lattice maps preserving `P`.
    Affine,
}

/// A group given by a strong generating set along an affine vertex base.
#[derive(Clone, Debug, Serialize)]
pub struct AutomorphismGroup {
    pub order: u64,
    pub generators: Vec<LatticeAutomorphism>,
    /// Orbit sizes along the base; their product is the order.
    pub basic_orbits: Vec<usize>,
}

struct Search<'a> {
    p: &'a Polytope,
    mode: Mode,
    base: Vec<usize>,
    sig: Vec<u64>,
    pair: Vec<Vec<u64>>,
    vset: HashSet<Point>,
    binv_adj: Vec<Vec<i64>>,
    bdet: i64,
}

fn hash_of<T: Hash>(t: &T) -> u64 {
    let mut h = DefaultHasher::new();
    t.hash(&mut h);
    h.finish()
}

impl<'a> Search<'a> {
    fn new(p: &'a Polytope, mode: Mode) -> Result<Self> {
        let verts = p.vertices();
        let n = p.dim();
        let base = hull::affine_basis(verts, n).map_err(Error::NotFullDimensional)?;
        let slacks: Vec<Vec<i64>> = verts
            .iter()
            .map(|v| p.facets().iter().map(|f| f.slack(v, 1)).collect())
            .collect();
        let sig = slacks
            .iter()
            .map(|s| {
                let mut s = s.clone();
                s.sort();
                hash_of(&s)
            })
            .collect();
        let m = verts.len();
        let mut pair = vec![vec![0u64; m]; m];
        for i in 0..m {
            for j in 0..m {
                let mut pr: Vec<(i64, i64)> =
                    slacks[i].iter().zip(&slacks[j]).map(|(&a, &b)| (a, b)).collect();
                pr.sort();
                pair[i][j] = hash_of(&pr);
            }
        }
        // B has columns b_i − b_0; keep adj(B) and det(B) to form A = C adj(B) / det(B)
        let cols: Vec<Vec<i64>> = base[1..].iter().map(|&b| sub(&verts[b], &verts[base[0]])).collect();
        let bmat: Vec<Vec<i64>> = (0..n).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
        let bdet = det(&bmat).to_i64().ok_or(Error::Overflow("automorphism base"))?;
        let mut adj = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let minor: Vec<Vec<i64>> = (0..n)
                    .filter(|&r| r != j)
                    .map(|r| (0..n).filter(|&c| c != i).map(|c| bmat[r][c]).collect())
                    .collect();
                let c = det(&minor).to_i64().ok_or(Error::Overflow("automorphism base"))?;
                adj[i][j] = if (i + j) % 2 == 0 { c } else { -c };
            }
        }
        Ok(Search {
            p,
            mode,
            base,
            sig,
            pair,
            vset: verts.iter().cloned().collect(),
            binv_adj: adj,
            bdet,
        })
    }

    fn candidates(&self, images: &[usize]) -> Vec<usize> {
        let i = images.len();
        let b = self.base[i];
        (0..self.p.vertices().len())
            .filter(|&c| {
                self.sig[c] == self.sig[b]
                    && !images.contains(&c)
                    && images
                        .iter()
                        .enumerate()
                        .all(|(j, &cj)| self.pair[c][cj] == self.pair[b][self.base[j]])
            })
            .collect()
    }

    fn leaf(&self, images: &[usize]) -> Option<LatticeAutomorphism> {
        let verts = self.p.vertices();
        let n = self.p.dim();
        let c0 = &verts[images[0]];
        let cols: Vec<Vec<i64>> = images[1..].iter().map(|&c| sub(&verts[c], c0)).collect();
        let cmat: Vec<Vec<i64>> = (0..n).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
        let mut a = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                let s: i128 = (0..n)
                    .map(|l| cmat[i][l] as i128 * self.binv_adj[l][j] as i128)
                    .sum();
                if s % self.bdet as i128 != 0 {
                    return None;
                }
                a[i][j] = (s / self.bdet as i128) as i64;
            }
        }
        let d = det(&a);
        if d.abs() != BigInt::one() {
            return None;
        }
        let b0 = &verts[self.base[0]];
        let t: Vec<i64> = (0..n)
            .map(|i| c0[i] - a[i].iter().zip(b0).map(|(x, y)| x * y).sum::<i64>())
            .collect();
        if self.mode == Mode::Linear && t.iter().any(|&x| x != 0) {
            return None;
        }
        let g = LatticeAutomorphism { matrix: a, translation: t };
        verts
            .iter()
            .all(|v| self.vset.contains(&g.apply(v, 1)))
            .then_some(g)
    }

    fn complete(&self, images: &mut Vec<usize>) -> Option<LatticeAutomorphism> {
        if images.len() == self.base.len() {
            return self.leaf(images);
        }
        for c in self.candidates(images) {
            images.push(c);
            let r = self.complete(images);
            images.pop();
            if r.is_some() {
                return r;
            }
        }
        None
    }

    fn all(&self, images: &mut Vec<usize>, out: &mut Vec<LatticeAutomorphism>, limit: usize) -> bool {
        if images.len() == self.base.len() {
            if let Some(g) = self.leaf(images) {
                out.push(g);
            }
            return out.len() <= limit;
        }
        for c in self.candidates(images) {
            images.push(c);
            let ok = self.all(images, out, limit);
            images.pop();
            if !ok {
                return false;
            }
        }
        true
    }
}

fn check_mode(p: &Polytope, mode: Mode) -> Result<()> {
    if mode == Mode::Linear && !p.origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    Ok(())
}

/// Strong generating set and order of the automorphism group.
pub fn automorphism_group(p: &Polytope, mode: Mode) -> Result<AutomorphismGroup> {
    check_mode(p, mode)?;
    let s = Search::new(p, mode)?;
    let mut generators = Vec::new();
    let mut basic_orbits = Vec::new();
    let mut order: u64 = 1;
    for i in 0..s.base.len() {
        let mut prefix: Vec<usize> = s.base[..i].to_vec();
        let mut orbit = 0;
        for c in s.candidates(&prefix) {
            if c == s.base[i] {
                orbit += 1;
                continue;
            }
            prefix.push(c);
            if let Some(g) = s.complete(&mut prefix) {
                orbit += 1;
                generators.push(g);
            }
            prefix.pop();
        }
        basic_orbits.push(orbit);
        order = order.checked_mul(orbit as u64).ok_or(Error::Overflow("group order"))?;
    }
    Ok(AutomorphismGroup { order, generators, basic_orbits })
}

/// Every element of the group, for groups of at most `limit` elements.
pub fn group_elements(p: &Polytope, mode: Mode, limit: usize) -> Result<Vec<LatticeAutomorphism>> {
    check_mode(p, mode)?;
    let s = Search::new(p, mode)?;
    let mut out = Vec::new();
    if !s.all(&mut Vec::new(), &mut out, limit) {
        return Err(Error::Budget(format!("automorphism group exceeds {limit} elements")));
    }
    out.sort_by(|a, b| a.matrix.cmp(&b.matrix).then(a.translation.cmp(&b.translation)));
    Ok(out)
}

/// The full `GL(n, ℤ)` stabilizer of `P`.
pub fn automorphisms(p: &Polytope) -> Result<Vec<LatticeAutomorphism>> {
    group_elements(p, Mode::Linear, 1 << 20)
}

/// True when the linear automorphism group fixes only the origin.
pub fn is_symmetric(p: &Polytope) -> Result<bool> {
    let g = automorphism_group(p, Mode::Linear)?;
    let n = p.dim();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for h in &g.generators {
        for i in 0..n {
            let mut r = h.matrix[i].clone();
            r[i] -= 1;
            rows.push(r);
        }
    }
    Ok(rank(&rows) == n)
}

/// Orbit labels of `points` (lattice points of `kP`) under the group generated by `gens`.
pub fn point_orbits(points: &[Point], gens: &[LatticeAutomorphism], k: i64) -> Vec<usize> {
    let index: HashMap<&Point, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut parent: Vec<usize> = (0..points.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for g in gens {
        for (i, p) in points.iter().enumerate() {
            if let Some(&j) = index.get(&g.apply(p, k)) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut label = HashMap::new();
    (0..points.len())
        .map(|i| {
            let r = find(&mut parent, i);
            let next = label.len();
            *label.entry(r).or_insert(next)
        })
        .collect()
}

/// Exact centroid of `P`.
pub fn centroid(p: &Polytope) -> Vec<BigRational> {
    p.centroid()
}

/// `a(x) = Σ aᵢ xᵢ + a₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineFunctional {
    pub linear: Vec<BigRational>,
    pub constant: BigRational,
}

impl AffineFunctional {
    pub fn coordinate(n: usize, i: usize) -> Self {
        AffineFunctional {
            linear: (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect(),
            constant: BigRational::zero(),
        }
    }

    pub fn eval(&self, x: &[BigRational]) -> BigRational {
        self.linear.iter().zip(x).map(|(a, b)| a * b).fold(self.constant.clone(), |s, t| s + t)
    }
}

/// `FO_P(a, k)`: the average of `a` over `(1/k)(kP ∩ ℤⁿ)` minus its average over `P`.
pub fn fo_invariant(p: &Polytope, a: &AffineFunctional, k: i64) -> BigRational {
    let m = p.moment(k);
    let chi = big_rat(m.count.clone());
    let disc: BigRational = a
        .linear
        .iter()
        .zip(&m.sums)
        .map(|(ai, s)| ai * big_rat(s.clone()))
        .fold(BigRational::zero(), |x, y| x + y)
        / (rat(k) * &chi)
        + &a.constant;
    disc - a.eval(&p.centroid())
}

/// A coordinate functional and dilation with nonzero FO invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoWitness {
    pub coordinate: usize,
    pub k: i64,
    pub value: BigRational,
}

impl Serialize for FoWitness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("FoWitness", 3)?;
        st.serialize_field("functional", &format!("x{}", self.coordinate + 1))?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("value", &fmt_rat(&self.value))?;
        st.end()
    }
}

/// One evaluation of `moment_i(k) = k · centroid_i · χ(k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub k: i64,
    pub coordinate: usize,
    pub moment: BigInt,
    pub expected: BigRational,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        big_rat(self.moment.clone()) == self.expected
    }
}

/// Weak symmetry with its polynomial-identity certificate.
#[derive(Clone, Debug)]
pub struct WeakSymmetry {
    pub holds: bool,
    pub checks: Vec<IdentityCheck>,
    pub witness: Option<FoWitness>,
}

/// Evaluates the moment identity at the given dilations.
pub fn identity_checks(p: &Polytope, ks: impl IntoIterator<Item = i64>) -> Vec<IdentityCheck> {
    let c = p.centroid();
    let mut out = Vec::new();
    for k in ks {
        let m = p.moment(k);
        let chi = big_rat(m.count.clone());
        for (i, s) in m.sums.into_iter().enumerate() {
            out.push(IdentityCheck { k, coordinate: i, moment: s, expected: rat(k) * &c[i] * &chi });
        }
    }
    out
}

/// Both sides of the identity are polynomials of degree `≤ n + 1` vanishing at
/// `k = 0`, so agreement at `k = 1..=n+3` proves it for every `k`.
pub fn is_weakly_symmetric(p: &Polytope) -> WeakSymmetry {
    let n = p.dim() as i64;
    let checks = identity_checks(p, 1..=n + 3);
    let witness = checks.iter().find(|c| !c.holds()).map(|c| {
        let a = AffineFunctional::coordinate(p.dim(), c.coordinate);
        FoWitness { coordinate: c.coordinate, k: c.k, value: fo_invariant(p, &a, c.k) }
    });
    WeakSymmetry { holds: witness.is_none(), checks, witness }
}

/// `h(k) = moment_i(k) − k · centroid_i · χ(k)` as a polynomial in `k`.
pub fn fo_polynomial(p: &Polytope, i: usize) -> Vec<BigRational> {
    let n = p.dim() as i64;
    let xs: Vec<i64> = (0..=n + 2).collect();
    let c = p.centroid();
    let ys: Vec<BigRational> = xs
        .iter()
        .map(|&k| {
            let m = p.moment(k);
            big_rat(m.sums[i].clone()) - rat(k) * &c[i] * big_rat(m.count)
        })
        .collect();
    interpolate(&xs, &ys)
}

/// Smallest `K ≥ 1` with `h(k) ≠ 0` for every integer `k ≥ K`, for a nonzero polynomial.
pub fn nonvanishing_from(h: &[BigRational]) -> Option<i64> {
    let lead = h.iter().rposition(|c| !c.is_zero())?;
    if lead == 0 {
        return Some(1);
    }
    // Cauchy bound: every root has |r| < 1 + max |c_j / c_lead|
    let bound = h[..lead]
        .iter()
        .map(|c| (c / &h[lead]).abs())
        .fold(BigRational::zero(), |a, b| if b > a { b } else { a })
        + BigRational::one();
    let top = bound.ceil().to_integer().to_i64()?;
    let mut from = 1;
    for k in 1..=top {
        if crate::ehrhart::eval_poly(h, &rat(k)).is_zero() {
            from = k + 1;
        }
    }
    Some(from)
}
