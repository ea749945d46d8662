//! Lattice-point counts, Ehrhart polynomials and coordinate moment sums.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{big_rat, fmt_rat, rat};
use crate::error::{Error, Result};
use crate::geometry::{Moment, Polytope};

/// `χ(kP) = Σ cᵢ kⁱ` with exact rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EhrhartPolynomial {
    pub coefficients: Vec<BigRational>,
}

impl EhrhartPolynomial {
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn eval(&self, k: i64) -> BigRational {
        eval_poly(&self.coefficients, &rat(k))
    }

    /// Human-readable form, highest degree first, e.g. `3/2 k^2 + 3/2 k + 1`.
    pub fn render(&self) -> String {
        render_poly(&self.coefficients, "k")
    }
}

impl Serialize for EhrhartPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coefficients.iter().map(fmt_rat).collect();
        v.serialize(s)
    }
}

pub fn eval_poly(c: &[BigRational], x: &BigRational) -> BigRational {
    c.iter()
        .rev()
        .fold(BigRational::zero(), |acc, a| acc * x + a)
}

pub fn render_poly(c: &[BigRational], var: &str) -> String {
    let mut terms = Vec::new();
    for (i, a) in c.iter().enumerate().rev() {
        if a.is_zero() {
            continue;
        }
        let coef = fmt_rat(a);
        terms.push(match i {
            0 => coef,
            1 if a.is_one() => var.to_string(),
            1 => format!("{coef} {var}"),
            _ if a.is_one() => format!("{var}^{i}"),
            _ => format!("{coef} {var}^{i}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ").replace("+ -", "- ")
    }
}

/// Coefficients of the interpolating polynomial through `(xs[i], ys[i])`.
pub fn interpolate(xs: &[i64], ys: &[BigRational]) -> Vec<BigRational> {
    let m = xs.len();
    let mut coeffs = vec![BigRational::zero(); m];
    for i in 0..m {
        // basis polynomial ∏_{j≠i} (x − xⱼ)/(xᵢ − xⱼ)
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for j in 0..m {
            if i == j {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (d, b) in basis.iter().enumerate() {
                next[d + 1] += b;
                next[d] -= b * rat(xs[j]);
            }
            basis = next;
            denom *= rat(xs[i] - xs[j]);
        }
        let scale = &ys[i] / denom;
        for (c, b) in coeffs.iter_mut().zip(&basis) {
            *c += b * &scale;
        }
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    coeffs
}

/// `|kP ∩ ℤⁿ|`.
pub fn count(p: &Polytope, k: i64) -> BigInt {
    p.count(k)
}

/// `Σ v` over `kP ∩ ℤⁿ`, with the count.
pub fn moment_sum(p: &Polytope, k: i64) -> Moment {
    p.moment(k)
}

/// Interpolates through `k = 0..n` and checks the leading coefficients
/// against the volume and boundary volume.
pub fn ehrhart_polynomial(p: &Polytope) -> Result<EhrhartPolynomial> {
    let n = p.dim();
    let xs: Vec<i64> = (0..=n as i64).collect();
    let ys: Vec<BigRational> = xs.iter().map(|&k| big_rat(p.count(k))).collect();
    let mut coefficients = interpolate(&xs, &ys);
    coefficients.resize(n + 1, BigRational::zero());
    let poly = EhrhartPolynomial { coefficients };
    let vol = p.volume();
    if poly.coefficients[n] != vol {
        return Err(Error::CoefficientMismatch(format!(
            "leading coefficient {} but volume {}",
            fmt_rat(&poly.coefficients[n]),
            fmt_rat(&vol)
        )));
    }
    if n >= 2 {
        let half = p.boundary_volume()? / rat(2);
        if poly.coefficients[n - 1] != half {
            return Err(Error::CoefficientMismatch(format!(
                "second coefficient {} but half boundary volume {}",
                fmt_rat(&poly.coefficients[n - 1]),
                fmt_rat(&half)
            )));
        }
    }
    if !poly.coefficients[0].is_one() {
        return Err(Error::CoefficientMismatch("constant term is not 1".into()));
    }
    Ok(poly)
}

/// Per-coordinate moment polynomials of degree `n + 1`, interpolated from
/// `k = 0..=n+1`.
pub fn moment_polynomials(p: &Polytope) -> Vec<Vec<BigRational>> {
    let n = p.dim();
    let xs: Vec<i64> = (0..=n as i64 + 1).collect();
    let moments: Vec<Moment> = xs.iter().map(|&k| p.moment(k)).collect();
    (0..n)
        .map(|i| {
            let ys: Vec<BigRational> = moments.iter().map(|m| big_rat(m.sums[i].clone())).collect();
            interpolate(&xs, &ys)
        })
        .collect()
}
