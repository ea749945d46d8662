//! Exact integer and rational linear algebra on small dense matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn big_rat(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// `n!` as a big integer.
pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn factorial_u64(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Renders a rational as `p/q`, or `p` when integral.
pub fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde helper: a rational as its `p/q` string.
pub fn ser_rat<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rat(r))
}

/// Serde helper: a list of rationals as strings.
pub fn ser_rats<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(fmt_rat))
}

pub fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Divides out the content of an integer vector. The zero vector is returned unchanged.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = gcd_slice(v);
    if g <= 1 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_i128(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

pub fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[i64], k: i64) -> Vec<i64> {
    a.iter().map(|x| x * k).collect()
}

/// Fraction-free Bareiss determinant in `i128`; `None` on overflow.
pub fn det_i128(rows: &[Vec<i64>]) -> Option<i128> {
    let n = rows.len();
    if n == 0 {
        return Some(1);
    }
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return Some(0);
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[i][j].checked_mul(m[k][k])?;
                let b = m[i][k].checked_mul(m[k][j])?;
                m[i][j] = a.checked_sub(b)? / prev;
            }
        }
        prev = m[k][k];
    }
    Some(sign * m[n - 1][n - 1])
}

/// Determinant of a square integer matrix, exact. Zero rows yield zero.
pub fn det(rows: &[Vec<i64>]) -> BigInt {
    if rows.iter().any(|r| r.iter().all(|&x| x == 0)) {
        return BigInt::zero();
    }
    match det_i128(rows) {
        Some(d) => BigInt::from(d),
        None => det_big(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        ),
    }
}

pub fn det_big(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(s) => {
                    m.swap(k, s);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Rank of an integer matrix given by rows.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    rank_big(&mut m)
}

fn rank_big(m: &mut [Vec<BigInt>]) -> usize {
    let rows = m.len();
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let a = m[r][c].clone();
            let b = m[i][c].clone();
            for j in c..cols {
                let v = &m[i][j] * &a - &m[r][j] * &b;
                m[i][j] = v;
            }
            let g = m[i].iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !g.is_zero() && !g.is_one() {
                for x in m[i].iter_mut() {
                    *x = &*x / &g;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Solves the square system `a x = b` over the rationals; `None` if singular.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for j in c..=n {
            m[c][j] = &m[c][j] * &inv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=n {
                    let v = &m[i][j] - &f * &m[c][j];
                    m[i][j] = v;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// Coordinates of `v` with respect to the columns `basis` (given as a list of
/// vectors), when `v` lies in their rational span.
pub fn coords_in(basis: &[Vec<i64>], v: &[i64]) -> Option<Vec<BigRational>> {
    let d = basis.len();
    if d == 0 {
        return v.iter().all(|&x| x == 0).then(Vec::new);
    }
    let n = v.len();
    // pick d independent coordinate rows
    let mut chosen: Vec<usize> = Vec::new();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for i in 0..n {
        let row: Vec<i64> = basis.iter().map(|b| b[i]).collect();
        let mut trial = rows.clone();
        trial.push(row.clone());
        if rank(&trial) > rows.len() {
            rows = trial;
            chosen.push(i);
            if rows.len() == d {
                break;
            }
        }
    }
    if rows.len() < d {
        return None;
    }
    let a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| rat(x)).collect())
        .collect();
    let b: Vec<BigRational> = chosen.iter().map(|&i| rat(v[i])).collect();
    let x = solve(&a, &b)?;
    for i in 0..n {
        let s: BigRational = basis
            .iter()
            .zip(&x)
            .map(|(bv, c)| c * rat(bv[i]))
            .fold(BigRational::zero(), |a, b| a + b);
        if s != rat(v[i]) {
            return None;
        }
    }
    Some(x)
}

/// Integer coordinates of `v` in a lattice basis, when they exist.
pub fn int_coords_in(basis: &[Vec<i64>], v: &[i64]) -> Option<Vec<i64>> {
    coords_in(basis, v)?
        .into_iter()
        .map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None })
        .collect()
}

fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

/// A basis of the integer kernel `{x ∈ ℤᴺ : M x = 0}` for `M` given by rows of
/// length `ncols`. Basis vectors are size-reduced against each other.
pub fn integer_kernel(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut u: Vec<Vec<BigInt>> = (0..ncols)
        .map(|i| {
            (0..ncols)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    // column operations: column j of `a` and column j of `u` move together
    let col_op = |a: &mut Vec<Vec<BigInt>>,
                  u: &mut Vec<Vec<BigInt>>,
                  p: usize,
                  q: usize,
                  m: [[BigInt; 2]; 2]| {
        for row in a.iter_mut().chain(u.iter_mut()) {
            let x = row[p].clone();
            let y = row[q].clone();
            row[p] = &m[0][0] * &x + &m[1][0] * &y;
            row[q] = &m[0][1] * &x + &m[1][1] * &y;
        }
    };
    let mut piv = 0;
    for r in 0..a.len() {
        if piv == ncols {
            break;
        }
        for q in piv + 1..ncols {
            if a[r][q].is_zero() {
                continue;
            }
            let x = a[r][piv].clone();
            let y = a[r][q].clone();
            let (g, s, t) = ext_gcd(&x, &y);
            // [x y] * [[s, -y/g], [t, x/g]] = [g 0], determinant 1
            let m = [[s, -(&y / &g)], [t, &x / &g]];
            col_op(&mut a, &mut u, piv, q, m);
        }
        if !a[r][piv].is_zero() {
            piv += 1;
        }
    }
    let mut basis: Vec<Vec<BigInt>> = (piv..ncols)
        .map(|j| (0..ncols).map(|i| u[i][j].clone()).collect())
        .collect();
    size_reduce(&mut basis);
    for b in basis.iter_mut() {
        if let Some(first) = b.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                for x in b.iter_mut() {
                    *x = -&*x;
                }
            }
        }
    }
    basis
}

fn norm2(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x * x).sum()
}

/// Pairwise Gauss-style reduction; keeps the lattice and shrinks entries.
pub fn size_reduce(basis: &mut [Vec<BigInt>]) {
    let k = basis.len();
    for _ in 0..64 {
        let mut changed = false;
        for i in 0..k {
            for j in 0..k {
                if i == j {
                    continue;
                }
                let nj = norm2(&basis[j]);
                if nj.is_zero() {
                    continue;
                }
                let d: BigInt = basis[i].iter().zip(&basis[j]).map(|(x, y)| x * y).sum();
                // nearest integer to d / nj
                let q = (BigInt::from(2) * &d + &nj).div_floor(&(BigInt::from(2) * &nj));
                if q.is_zero() {
                    continue;
                }
                let cand: Vec<BigInt> = basis[i]
                    .iter()
                    .zip(&basis[j])
                    .map(|(x, y)| x - &q * y)
                    .collect();
                if norm2(&cand) < norm2(&basis[i]) {
                    basis[i] = cand;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
}

pub fn to_i64_vec(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(|x| x.to_i64()).collect()
}

/// Lattice basis of `span(vectors) ∩ ℤⁿ`.
pub fn saturated_basis(vectors: &[Vec<i64>], n: usize) -> Option<Vec<Vec<i64>>> {
    let nonzero: Vec<Vec<i64>> = vectors.iter().filter(|v| v.iter().any(|&x| x != 0)).cloned().collect();
    if nonzero.is_empty() {
        return Some(Vec::new());
    }
    let perp = integer_kernel(&nonzero, n);
    if perp.is_empty() {
        return Some(
            (0..n)
                .map(|i| (0..n).map(|j| (i == j) as i64).collect())
                .collect(),
        );
    }
    let perp: Vec<Vec<i64>> = perp.iter().map(|v| to_i64_vec(v)).collect::<Option<_>>()?;
    integer_kernel(&perp, n).iter().map(|v| to_i64_vec(v)).collect()
}

/// Sign of an `i128`-or-big determinant.
pub fn det_sign(rows: &[Vec<i64>]) -> i32 {
    let d = det(rows);
    if d.is_positive() {
        1
    } else if d.is_negative() {
        -1
    } else {
        0
    }
}

/// Exact `|x|` of a big integer as u64 if it fits.
pub fn abs_u64(x: &BigInt) -> Option<u64> {
    x.abs().to_u64()
}
