//! Integral LLL on a Gram matrix.
//!
//! Fraction-free variant: all Gram-Schmidt data is kept as the integers
//! `d_i` (leading principal minors) and `λ_{k,j} = d_{j} μ_{k,j}`, so the
//! reduction is exact for any positive-definite integer Gram.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::IntMat;

/// LLL-reduces the basis with Gram `gram` using Lovász parameter
/// `delta = delta_num / delta_den` (must lie in `(1/4, 1]`).
///
/// Returns `(reduced_gram, transform)` where row `i` of `transform` holds the
/// coordinates of the `i`-th reduced vector in the input basis, so
/// `reduced_gram = T · gram · Tᵀ` and `|det T| = 1`.
pub fn lll_gram(gram: &IntMat, delta_num: i64, delta_den: i64) -> (IntMat, IntMat) {
    assert!(
        4 * delta_num > delta_den && delta_num <= delta_den && delta_den > 0,
        "delta must lie in (1/4, 1]"
    );
    let n = gram.len();
    let mut st = State {
        g: gram.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        t: (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect()).collect(),
        d: vec![BigInt::zero(); n + 1],
        lam: vec![vec![BigInt::zero(); n + 1]; n + 1],
    };
    if n > 1 {
        st.run(n, &BigInt::from(delta_num), &BigInt::from(delta_den));
    }
    let to_i64 = |m: &Vec<Vec<BigInt>>| -> IntMat {
        m.iter()
            .map(|r| r.iter().map(|x| x.to_i64().expect("reduced entry fits i64")).collect())
            .collect()
    };
    (to_i64(&st.g), to_i64(&st.t))
}

struct State {
    /// current Gram (0-based)
    g: Vec<Vec<BigInt>>,
    /// current transform (0-based rows)
    t: Vec<Vec<BigInt>>,
    /// d[0] = 1, d[i] = det of leading i×i Gram minor (1-based)
    d: Vec<BigInt>,
    /// lam[k][j], 1-based, j < k
    lam: Vec<Vec<BigInt>>,
}

impl State {
    fn dot(&self, i: usize, j: usize) -> BigInt {
        self.g[i - 1][j - 1].clone()
    }

    fn run(&mut self, n: usize, a: &BigInt, b: &BigInt) {
        self.d[0] = BigInt::from(1);
        self.d[1] = self.dot(1, 1);
        let mut k = 2;
        let mut kmax = 1;
        while k <= n {
            if k > kmax {
                kmax = k;
                for j in 1..=k {
                    let mut u = self.dot(k, j);
                    for i in 1..j {
                        u = (&self.d[i] * &u - &self.lam[k][i] * &self.lam[j][i]) / &self.d[i - 1];
                    }
                    if j < k {
                        self.lam[k][j] = u;
                    } else {
                        assert!(u.is_positive(), "Gram matrix is not positive definite");
                        self.d[k] = u;
                    }
                }
            }
            self.red(k, k - 1);
            let l = &self.lam[k][k - 1];
            let lhs = b * (&self.d[k] * &self.d[k - 2] + l * l);
            let rhs = a * &self.d[k - 1] * &self.d[k - 1];
            if lhs < rhs {
                self.swap(k, kmax);
                k = (k - 1).max(2);
            } else {
                for l in (1..k - 1).rev() {
                    self.red(k, l);
                }
                k += 1;
            }
        }
    }

    fn red(&mut self, k: usize, l: usize) {
        let two_lam: BigInt = &self.lam[k][l] * 2;
        if two_lam.abs() <= self.d[l] {
            return;
        }
        // q = round(lam / d_l)
        let q = (two_lam + &self.d[l]).div_floor(&(&self.d[l] * 2));
        // b_k <- b_k - q b_l
        let (rk, rl) = (k - 1, l - 1);
        let n = self.g.len();
        for c in 0..n {
            let v = &q * &self.g[rl][c];
            self.g[rk][c] -= v;
            let v = &q * &self.t[rl][c];
            self.t[rk][c] -= v;
        }
        for r in 0..n {
            let v = &q * &self.g[r][rl];
            self.g[r][rk] -= v;
        }
        let dl = &q * &self.d[l];
        self.lam[k][l] -= dl;
        for i in 1..l {
            let v = &q * &self.lam[l][i];
            self.lam[k][i] -= v;
        }
    }

    fn swap(&mut self, k: usize, kmax: usize) {
        let (rk, rj) = (k - 1, k - 2);
        self.g.swap(rk, rj);
        for row in self.g.iter_mut() {
            row.swap(rk, rj);
        }
        self.t.swap(rk, rj);
        for j in 1..k - 1 {
            let tmp = std::mem::take(&mut self.lam[k][j]);
            self.lam[k][j] = std::mem::replace(&mut self.lam[k - 1][j], tmp);
        }
        let lam = self.lam[k][k - 1].clone();
        let bb = (&self.d[k - 2] * &self.d[k] + &lam * &lam) / &self.d[k - 1];
        for i in k + 1..=kmax {
            let t = self.lam[i][k].clone();
            self.lam[i][k] = (&self.d[k] * &self.lam[i][k - 1] - &lam * &t) / &self.d[k - 1];
            self.lam[i][k - 1] = (&bb * &t + &lam * &self.lam[i][k]) / &self.d[k];
        }
        self.d[k - 1] = bb;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn mul(a: &IntMat, b: &IntMat) -> IntMat {
        a.iter()
            .map(|r| (0..b[0].len()).map(|c| r.iter().zip(b).map(|(x, row)| x * row[c]).sum()).collect())
            .collect()
    }

    fn transpose(a: &IntMat) -> IntMat {
        (0..a[0].len()).map(|c| a.iter().map(|r| r[c]).collect()).collect()
    }

    /// Independent check of size reduction and the Lovász condition using
    /// rational Gram-Schmidt from scratch.
    fn is_lll_reduced(g: &IntMat, dn: i64, dd: i64) -> bool {
        let n = g.len();
        let q = |x: i64| BigRational::from_integer(BigInt::from(x));
        let mut mu = vec![vec![q(0); n]; n];
        let mut bstar = vec![q(0); n];
        for i in 0..n {
            for j in 0..i {
                let mut s = q(g[i][j]);
                for k in 0..j {
                    s -= &mu[j][k] * &mu[i][k] * &bstar[k];
                }
                mu[i][j] = s / &bstar[j];
            }
            let mut s = q(g[i][i]);
            for k in 0..i {
                s -= &mu[i][k] * &mu[i][k] * &bstar[k];
            }
            bstar[i] = s;
        }
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let delta = BigRational::new(BigInt::from(dn), BigInt::from(dd));
        for i in 0..n {
            for j in 0..i {
                if mu[i][j].abs() > half {
                    return false;
                }
            }
            if i > 0 && bstar[i] < (&delta - &mu[i][i - 1] * &mu[i][i - 1]) * &bstar[i - 1] {
                return false;
            }
        }
        true
    }

    fn det(m: &IntMat) -> i64 {
        let n = m.len();
        if n == 1 {
            return m[0][0];
        }
        (0..n)
            .map(|c| {
                let minor: IntMat = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if c % 2 == 0 { 1 } else { -1 };
                sign * m[0][c] * det(&minor)
            })
            .sum()
    }

    #[test]
    fn identity_unchanged() {
        let id: IntMat = (0..4).map(|i| (0..4).map(|j| (i == j) as i64).collect()).collect();
        let (g, t) = lll_gram(&id, 99, 100);
        assert_eq!(g, id);
        assert_eq!(t, id);
    }

    #[test]
    fn skewed_square_lattice() {
        // basis (1,0), (10,1)
        let g = vec![vec![1, 10], vec![10, 101]];
        let (r, t) = lll_gram(&g, 99, 100);
        assert_eq!(r, vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(mul(&mul(&t, &g), &transpose(&t)), r);
    }

    #[test]
    fn scrambled_hexagonal() {
        let a2 = vec![vec![2, 1], vec![1, 2]];
        let u = vec![vec![7, 5], vec![4, 3]]; // det 1
        let g = mul(&mul(&u, &a2), &transpose(&u));
        let (r, t) = lll_gram(&g, 99, 100);
        assert_eq!((r[0][0], r[1][1]), (2, 2));
        assert_eq!(mul(&mul(&t, &g), &transpose(&t)), r);
    }

    proptest! {
        #[test]
        fn reduction_is_unimodular_and_reduced(
            entries in proptest::collection::vec(-6i64..=6, 16),
        ) {
            let b: IntMat = entries.chunks(4).map(|c| c.to_vec()).collect();
            prop_assume!(det(&b) != 0);
            let g = mul(&b, &transpose(&b));
            let (r, t) = lll_gram(&g, 99, 100);
            prop_assert_eq!(mul(&mul(&t, &g), &transpose(&t)), r.clone());
            prop_assert_eq!(det(&t).abs(), 1);
            prop_assert!(is_lll_reduced(&r, 99, 100));
        }
    }
}
