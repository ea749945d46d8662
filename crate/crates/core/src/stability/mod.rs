//! Stability verdicts: the gap evaluator, the special-polytope and stratum
//! criteria, cap-function instability certificates, the LP falsifier and the
//! classification pipeline.

mod classify;
mod falsify;
mod gap;
mod instability;
mod special;
mod sufficient;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{fmt_rat, rat, ser_rat};
use crate::ehrhart::eval_poly;
use crate::geometry::PolytopeData;
use crate::symmetry::FoWitness;

pub use classify::{classify, classify_with, product_factors};
pub use falsify::{carrier, falsify, falsify_lp, Falsification};
pub use gap::{chow_gap, PLFunction};
pub use instability::{cap_function, double_cone_instability, vertex_cap_instability, VertexCap};
pub use special::{check_special, check_special_with};
pub use sufficient::{check_sufficient, check_sufficient_with};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Status {
    Polystable,
    NotSemistable,
    Inconclusive,
}

/// One named predicate with the exact numbers it was decided on.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub inputs: BTreeMap<String, String>,
    pub exact_values: BTreeMap<String, String>,
    pub pass: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, pass: bool) -> Self {
        Check { name: name.into(), inputs: BTreeMap::new(), exact_values: BTreeMap::new(), pass, detail: String::new() }
    }

    pub fn input(mut self, key: &str, value: impl ToString) -> Self {
        self.inputs.insert(key.into(), value.to_string());
        self
    }

    pub fn value(mut self, key: &str, value: impl ToString) -> Self {
        self.exact_values.insert(key.into(), value.to_string());
        self
    }

    pub fn rational(self, key: &str, value: &BigRational) -> Self {
        self.value(key, fmt_rat(value))
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = d.into();
        self
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// A convex function with a negative gap at dilation `k`.
    Function {
        k: i64,
        #[serde(serialize_with = "ser_rat")]
        gap: BigRational,
        /// The same construction stays negative for every dilation from here on.
        persists_from: Option<i64>,
        function: PLFunction,
    },
    /// A nonzero FO invariant; the polynomial in `k` has no integer roots past `persists_from`.
    FoWitness { witness: FoWitness, persists_from: Option<i64> },
    /// The hypotheses of a sufficient criterion, recorded by `checks`.
    Criterion { theorem: String },
    /// Verdicts of the factors of a lattice product.
    Product { factors: Vec<StabilityVerdict> },
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityVerdict {
    pub polytope: PolytopeData,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem: Option<String>,
    pub checks: Vec<Check>,
    pub certificate: Option<Certificate>,
}

impl StabilityVerdict {
    pub(crate) fn new(polytope: PolytopeData, status: Status, checks: Vec<Check>) -> Self {
        StabilityVerdict { polytope, status, theorem: None, checks, certificate: None }
    }

    /// Name of the first failing check, if any.
    pub fn failing(&self) -> Option<&str> {
        self.checks.iter().find(|c| !c.pass).map(|c| c.name.as_str())
    }
}

/// Smallest `K ≥ 1` with `h(k) > 0` for every integer `k ≥ K`, if `h` is
/// eventually positive.
pub(crate) fn positive_from(h: &[BigRational]) -> Option<i64> {
    let lead = h.iter().rposition(|c| !c.is_zero())?;
    if !h[lead].is_positive() {
        return None;
    }
    let bound = h[..lead]
        .iter()
        .map(|c| (c / &h[lead]).abs())
        .fold(BigRational::zero(), |a, b| if b > a { b } else { a })
        + BigRational::one();
    let top = bound.ceil().to_integer().to_i64()?;
    let mut from = 1;
    for k in 1..=top {
        if !eval_poly(h, &rat(k)).is_positive() {
            from = k + 1;
        }
    }
    Some(from)
}
