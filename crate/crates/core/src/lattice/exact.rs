//! Exact integer and rational matrix helpers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::IntMat;

/// Leading principal minors of a square integer matrix via fraction-free
/// (Bareiss) elimination without pivoting. Stops at the first zero minor, so a
/// full-length result with all entries positive certifies positive definiteness
/// of a symmetric input.
pub fn leading_minors(a: &IntMat) -> Vec<BigInt> {
    let n = a.len();
    let mut m: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut prev = BigInt::one();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let piv = m[k][k].clone();
        out.push(piv.clone());
        if piv.is_zero() {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &piv - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = piv;
    }
    out
}

pub fn is_positive_definite(a: &IntMat) -> bool {
    let n = a.len();
    let symmetric = (0..n).all(|i| a[i].len() == n && (0..i).all(|j| a[i][j] == a[j][i]));
    if !symmetric || n == 0 {
        return false;
    }
    let minors = leading_minors(a);
    minors.len() == n && minors.iter().all(Signed::is_positive)
}

/// Determinant of a positive-definite integer matrix.
pub fn det_pd(a: &IntMat) -> BigInt {
    leading_minors(a).pop().unwrap_or_else(BigInt::one)
}

/// Natural log of a positive big integer, accurate for any size.
pub fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().expect("finite").ln();
    }
    let shift = bits - 900;
    let top: BigInt = x >> shift;
    top.to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
}

/// Inverse of an integer matrix over the rationals, or `None` if singular.
pub fn inverse(a: &IntMat) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let q = |x: i64| BigRational::from_integer(BigInt::from(x));
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<BigRational> = r.iter().map(|&x| q(x)).collect();
            row.extend((0..n).map(|j| q((i == j) as i64)));
            row
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, piv);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in 0..2 * n {
                    let v = &f * &m[c][j];
                    m[r][j] -= v;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solves `x · a = v` for a row vector `x` over the rationals, where `a` has
/// full row rank. Returns `None` if `v` is not in the row space.
pub fn solve_left(a: &IntMat, v: &[i64]) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let cols = v.len();
    let q = |x: i64| BigRational::from_integer(BigInt::from(x));
    // Work on the transposed system aᵀ xᵀ = vᵀ, augmented.
    let mut m: Vec<Vec<BigRational>> = (0..cols)
        .map(|c| {
            let mut row: Vec<BigRational> = (0..rows).map(|r| q(a[r][c])).collect();
            row.push(q(v[c]));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..rows {
        let Some(piv) = (r..cols).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..cols {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=rows {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[rows].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); rows];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][rows].clone();
    }
    Some(x)
}

/// Clears denominators of a rational matrix: returns `(N, d)` with `M = N / d`,
/// `d > 0` minimal.
pub fn clear_denominators(m: &[Vec<BigRational>]) -> (Vec<Vec<BigInt>>, BigInt) {
    let d = m
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let n = m
        .iter()
        .map(|r| r.iter().map(|x| x.numer() * (&d / x.denom())).collect())
        .collect();
    (n, d)
}

/// Rank over the rationals, tracked incrementally with fraction-free rows.
#[derive(Debug, Clone, Default)]
pub struct RankTracker {
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl RankTracker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v`; returns true when it increased the rank.
    pub fn insert(&mut self, v: &[i64]) -> bool {
        let mut w: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        for (pc, row) in &self.rows {
            if w[*pc].is_zero() {
                continue;
            }
            let f = w[*pc].clone();
            let pv = &row[*pc];
            for (x, y) in w.iter_mut().zip(row) {
                *x = &*x * pv - &f * y;
            }
            normalize_row(&mut w);
        }
        match w.iter().position(|x| !x.is_zero()) {
            Some(pc) => {
                self.rows.push((pc, w));
                true
            }
            None => false,
        }
    }
}

fn normalize_row(w: &mut [BigInt]) {
    let g = w.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g > BigInt::one() {
        for x in w.iter_mut() {
            *x = &*x / &g;
        }
    }
}
