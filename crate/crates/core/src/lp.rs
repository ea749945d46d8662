//! Exact rational simplex method with Bland's rule.
//!
//! Solves `max cᵀx` subject to `Ax ≤ b`, `x ≥ 0` with `b ≥ 0`, so the slack
//! basis is feasible from the start.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub value: BigRational,
    pub x: Vec<BigRational>,
    pub pivots: usize,
}

/// Maximize `c·x` over `{x ≥ 0 : a·x ≤ b}`; every `b` must be nonnegative.
pub fn maximize(c: &[BigRational], rows: &[(Vec<BigRational>, BigRational)]) -> Result<LpSolution> {
    let n = c.len();
    let m = rows.len();
    if rows.iter().any(|(a, b)| a.len() != n || b.is_negative()) {
        return Err(Error::InvalidArgument("constraint rows must have length n and b ≥ 0".into()));
    }
    let width = n + m + 1;
    let mut t: Vec<Vec<BigRational>> = rows
        .iter()
        .enumerate()
        .map(|(i, (a, b))| {
            let mut r = vec![BigRational::zero(); width];
            r[..n].clone_from_slice(a);
            r[n + i] = BigRational::from_integer(1.into());
            r[width - 1] = b.clone();
            r
        })
        .collect();
    // reduced costs of the objective row: z − c·x
    let mut z: Vec<BigRational> = vec![BigRational::zero(); width];
    for j in 0..n {
        z[j] = -c[j].clone();
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut pivots = 0;
    while let Some(enter) = (0..width - 1).find(|&j| z[j].is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][width - 1] / &t[i][enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let Some((r, _)) = leave else {
            return Err(Error::Budget("linear program is unbounded".into()));
        };
        let piv = t[r][enter].clone();
        for v in t[r].iter_mut() {
            *v = &*v / &piv;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == r || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        if !z[enter].is_zero() {
            let f = z[enter].clone();
            for (v, p) in z.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        basis[r] = enter;
        pivots += 1;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            x[b] = t[i][width - 1].clone();
        }
    }
    Ok(LpSolution { value: z[width - 1].clone(), x, pivots })
}
