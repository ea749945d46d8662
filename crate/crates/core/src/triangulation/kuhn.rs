//! Kuhn (Freudenthal) refinement of dilated ordered simplices.
//!
//! For an ordered unimodular simplex `u₀, …, u_d`, the points of its `k`-fold
//! dilate are `k·u₀ + Σ yᵢ (uᵢ − uᵢ₋₁)` with `k ≥ y₁ ≥ … ≥ y_d ≥ 0`. The cells
//! are the unit-cube Freudenthal simplices of that staircase region; the
//! refinement restricts to the Kuhn refinement of every face under the
//! induced order.

use crate::arith::factorial_u64;
use crate::geometry::Point;

/// Kuhn cells of the staircase `{k ≥ y₁ ≥ … ≥ y_d ≥ 0}` as chains of `y`-vectors.
pub fn staircase_cells(d: usize, k: i64) -> Vec<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    let mut z = vec![0i64; d];
    fn bases(i: usize, d: usize, k: i64, z: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
        if i == d {
            f(z);
            return;
        }
        let top = if i == 0 { k - 1 } else { z[i - 1] };
        for v in 0..=top {
            z[i] = v;
            bases(i + 1, d, k, z, f);
        }
    }
    let perms = permutations(d);
    if d == 0 {
        return vec![vec![vec![]]];
    }
    bases(0, d, k, &mut z, &mut |z: &[i64]| {
        for p in &perms {
            let mut pos = vec![0; d];
            for (r, &i) in p.iter().enumerate() {
                pos[i] = r;
            }
            if (0..d - 1).any(|i| z[i] == z[i + 1] && pos[i] > pos[i + 1]) {
                continue;
            }
            let mut y = z.to_vec();
            let mut cell = vec![y.clone()];
            for &i in p {
                y[i] += 1;
                cell.push(y.clone());
            }
            out.push(cell);
        }
    });
    out
}

pub fn permutations(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(d - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, d - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Precomputed staircase cells for one `(d, k)`.
pub struct Refiner {
    pub d: usize,
    pub k: i64,
    cells: Vec<Vec<Vec<i64>>>,
}

impl Refiner {
    pub fn new(d: usize, k: i64) -> Self {
        Refiner { d, k, cells: staircase_cells(d, k) }
    }

    pub fn cells_per_simplex(&self) -> usize {
        self.cells.len()
    }

    /// Cells of the `k`-dilate of the ordered simplex `u`, each as a vertex list.
    pub fn apply(&self, u: &[Point]) -> Vec<Vec<Point>> {
        let n = u[0].len();
        let steps: Vec<Vec<i64>> = (1..u.len())
            .map(|i| (0..n).map(|c| u[i][c] - u[i - 1][c]).collect())
            .collect();
        let base: Vec<i64> = u[0].iter().map(|x| x * self.k).collect();
        self.apply_steps(&base, &steps)
    }

    /// Cells of `{base + Σ yᵢ stepsᵢ : k ≥ y₁ ≥ … ≥ y_d ≥ 0}`.
    pub fn apply_steps(&self, base: &[i64], steps: &[Vec<i64>]) -> Vec<Vec<Point>> {
        let n = base.len();
        self.cells
            .iter()
            .map(|cell| {
                cell.iter()
                    .map(|y| {
                        let mut x = base.to_vec();
                        for (yi, s) in y.iter().zip(steps) {
                            for c in 0..n {
                                x[c] += yi * s[c];
                            }
                        }
                        x
                    })
                    .collect()
            })
            .collect()
    }
}

/// Number of Kuhn cells of a `d`-simplex containing a point in the relative
/// interior of the face spanned by `positions` (indices into the simplex's
/// vertex order): `(d+1)! / ∏ cⱼ!` where the `cⱼ − 1` are the lengths of the
/// maximal cyclic runs of missing positions.
pub fn kuhn_incidence(d: usize, positions: &[usize]) -> u64 {
    let m = d + 1;
    let mut present = vec![false; m];
    for &p in positions {
        present[p] = true;
    }
    let Some(start) = (0..m).find(|&i| present[i]) else {
        return 0;
    };
    let mut denom = 1u64;
    let mut run = 0usize;
    for step in 1..=m {
        let i = (start + step) % m;
        if present[i] {
            denom *= factorial_u64(run + 1);
            run = 0;
        } else {
            run += 1;
        }
    }
    factorial_u64(m) / denom
}
