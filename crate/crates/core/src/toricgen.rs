//! Binomial equations of the projective toric variety of a lattice polytope
//! containing the origin, read off from integer relations among its points.
//!
//! Points are indexed with the origin as `z0` followed by the other lattice
//! points in lexicographic order.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::integer_kernel;
use crate::error::{Error, Result};
use crate::geometry::{Point, Polytope};

pub const HEADER: &str =
    "kernel-basis generators — cuts out the torus-closure birationally, not certified to generate the full toric ideal";

/// `Π z_i^{c_i} = Π z_j^{b_j} · z0^a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinomialEquation {
    pub lhs_exponents: BTreeMap<usize, u64>,
    pub rhs_exponents: BTreeMap<usize, u64>,
    pub z0_power: u64,
}

impl BinomialEquation {
    /// The relation as a vector over point indices: lhs positive, rhs and `z0` negative.
    pub fn relation(&self, len: usize) -> Vec<i64> {
        let mut v = vec![0i64; len];
        for (&i, &c) in &self.lhs_exponents {
            v[i] += c as i64;
        }
        for (&j, &b) in &self.rhs_exponents {
            v[j] -= b as i64;
        }
        v[0] -= self.z0_power as i64;
        v
    }

    pub fn degree(&self) -> u64 {
        self.lhs_exponents.values().sum()
    }

    fn from_relation(x: &[BigInt]) -> Result<Self> {
        let flip = x[0].is_positive() || (x[0].is_zero() && x.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative()));
        let mut lhs = BTreeMap::new();
        let mut rhs = BTreeMap::new();
        for (i, v) in x.iter().enumerate().skip(1) {
            let v = if flip { -v } else { v.clone() };
            let e = v.abs().to_u64().ok_or(Error::Overflow("binomial exponent"))?;
            if v.is_positive() {
                lhs.insert(i, e);
            } else if v.is_negative() {
                rhs.insert(i, e);
            }
        }
        let z0_power = x[0].abs().to_u64().ok_or(Error::Overflow("binomial exponent"))?;
        Ok(BinomialEquation { lhs_exponents: lhs, rhs_exponents: rhs, z0_power })
    }
}

fn monomial(f: &mut fmt::Formatter<'_>, m: &BTreeMap<usize, u64>, z0: u64) -> fmt::Result {
    let mut parts: Vec<String> = m
        .iter()
        .map(|(i, e)| if *e == 1 { format!("z{i}") } else { format!("z{i}^{e}") })
        .collect();
    match z0 {
        0 => {}
        1 => parts.push("z0".into()),
        a => parts.push(format!("z0^{a}")),
    }
    if parts.is_empty() {
        parts.push("1".into());
    }
    write!(f, "{}", parts.join(" "))
}

impl fmt::Display for BinomialEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        monomial(f, &self.lhs_exponents, 0)?;
        write!(f, " = ")?;
        monomial(f, &self.rhs_exponents, self.z0_power)
    }
}

/// A basis of the integer relations `Σ xᵢ pᵢ = 0`, `Σ xᵢ = 0` among the points,
/// size-reduced. `points[0]` is expected to be the origin.
pub fn relation_basis(points: &[Point]) -> Vec<Vec<BigInt>> {
    let Some(n) = points.first().map(|p| p.len()) else {
        return Vec::new();
    };
    let mut rows: Vec<Vec<i64>> = (0..n).map(|c| points.iter().map(|p| p[c]).collect()).collect();
    rows.push(vec![1; points.len()]);
    integer_kernel(&rows, points.len())
}

/// The origin followed by the other lattice points of `P` in lexicographic order.
pub fn indexed_points(p: &Polytope) -> Result<Vec<Point>> {
    let origin = vec![0i64; p.dim()];
    if !p.contains(&origin, 1) {
        return Err(Error::OriginMissing);
    }
    let mut out = vec![origin.clone()];
    out.extend(p.lattice_points(1).into_iter().filter(|x| *x != origin));
    Ok(out)
}

/// One binomial per relation-basis vector, over [`indexed_points`].
pub fn binomial_equations(p: &Polytope) -> Result<Vec<BinomialEquation>> {
    let pts = indexed_points(p)?;
    relation_basis(&pts).iter().map(|x| BinomialEquation::from_relation(x)).collect()
}
