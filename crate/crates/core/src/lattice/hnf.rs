//! Hermite normal form modulo a multiple of the determinant.

use crate::arith::egcd;
use crate::error::{Error, Result};
use crate::IntMat;

/// Symmetric residue in `(-r/2, r/2]`.
fn smod(x: i128, r: i128) -> i128 {
    let y = x.rem_euclid(r);
    if 2 * y > r {
        y - r
    } else {
        y
    }
}

/// Hermite normal form of the lattice spanned by the rows of `gens` in `ℤ^n`,
/// given a positive `d` with `d·ℤ^n` contained in that lattice (for example
/// `p` when the lattice contains `pℤ^n`).
///
/// Returns `n` rows forming a lower-triangular basis: row `i` has a positive
/// pivot in column `i`, zeros after it, and every entry below a pivot lies in
/// `[0, pivot)`. All work is done modulo `d`, so intermediate values stay
/// below `d²`.
pub fn hnf(gens: &IntMat, n: usize, d: i64) -> Result<IntMat> {
    if d <= 0 {
        return Err(Error::InvalidParameter("hnf modulus must be positive".into()));
    }
    if gens.iter().any(|r| r.len() != n) {
        return Err(Error::Mismatch(format!("generators must have length {n}")));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let d = d as i128;
    let mut cols: Vec<Vec<i128>> = gens
        .iter()
        .map(|r| r.iter().map(|&x| smod(x as i128, d)).collect::<Vec<_>>())
        .filter(|c| c.iter().any(|&x| x != 0))
        .collect();
    let mut w: Vec<Vec<i128>> = vec![vec![0; n]; n];
    for i in (0..n).rev() {
        // gather row i into a single pivot column by unimodular column steps
        let mut piv: Option<usize> = None;
        for j in 0..cols.len() {
            if cols[j][i] == 0 {
                continue;
            }
            let Some(k) = piv else {
                piv = Some(j);
                continue;
            };
            let (g, u, v) = egcd(cols[k][i], cols[j][i]);
            let (ak, aj) = (cols[k][i] / g, cols[j][i] / g);
            let b: Vec<i128> = (0..n).map(|t| smod(u * cols[k][t] + v * cols[j][t], d)).collect();
            let nj: Vec<i128> = (0..n).map(|t| smod(ak * cols[j][t] - aj * cols[k][t], d)).collect();
            cols[j] = nj;
            cols[k] = b;
        }
        // combine the pivot column with d·e_i
        let p = piv.map_or(vec![0; n], |k| cols[k].clone());
        let (g, u, _) = egcd(p[i], d);
        w[i] = p.iter().map(|&x| smod(u * x, d)).collect();
        w[i][i] = g;
        if let Some(k) = piv {
            let f = d / g;
            cols[k] = p.iter().map(|&x| smod(f * x, d)).collect();
            cols[k][i] = 0;
        }
        cols.retain(|c| c.iter().any(|&x| x != 0));
    }
    // reduce entries below each pivot into [0, pivot)
    for row in 1..n {
        for c in (0..row).rev() {
            let q = w[row][c].div_euclid(w[c][c]);
            if q != 0 {
                for t in 0..n {
                    w[row][t] -= q * w[c][t];
                }
            }
        }
    }
    Ok(w.into_iter().map(|row| row.into_iter().map(|x| x as i64).collect()).collect())
}
