use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::linalg::{nullspace, rref, FpMat};
use crate::error::{Error, Result};

/// An `(n, k, p)` linear code, stored by the reduced row-echelon form of a
/// generator matrix. Two codes are equal iff their stored forms are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawCode")]
pub struct LinearCode {
    p: u64,
    n: usize,
    k: usize,
    gen: FpMat,
}

#[derive(Deserialize)]
struct RawCode {
    p: u64,
    n: usize,
    k: usize,
    gen: FpMat,
}

impl TryFrom<RawCode> for LinearCode {
    type Error = Error;

    fn try_from(raw: RawCode) -> Result<Self> {
        if raw.gen.iter().flatten().any(|&x| x >= raw.p) {
            return Err(Error::InvalidParameter("code entries must lie in [0, p)".into()));
        }
        let code = LinearCode::from_generators(raw.p, raw.n, &raw.gen)?;
        if code.k != raw.k {
            return Err(Error::InvalidParameter(format!(
                "declared k = {} but generators have rank {}",
                raw.k, code.k
            )));
        }
        Ok(code)
    }
}

impl LinearCode {
    /// Span of the given rows (any rank, zero rows allowed).
    pub fn from_generators(p: u64, n: usize, rows: &FpMat) -> Result<Self> {
        super::check_prime(p)?;
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Mismatch(format!("generator rows must have length {n}")));
        }
        let (gen, k) = rref(rows, p);
        Ok(LinearCode { p, n, k, gen })
    }

    /// The zero code `{0}` of length `n`.
    pub fn zero(p: u64, n: usize) -> Result<Self> {
        Self::from_generators(p, n, &vec![])
    }

    /// The full space `F_p^n`.
    pub fn full(p: u64, n: usize) -> Result<Self> {
        let id: FpMat = (0..n).map(|i| (0..n).map(|j| (i == j) as u64).collect()).collect();
        Self::from_generators(p, n, &id)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn generator(&self) -> &FpMat {
        &self.gen
    }

    /// `p^k`, when it fits.
    pub fn size(&self) -> Option<u64> {
        self.p.checked_pow(self.k as u32)
    }

    /// Rows spanning the dual code (a parity-check matrix).
    pub fn parity_check(&self) -> FpMat {
        nullspace(&self.gen, self.n, self.p)
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let h = self.parity_check();
        h.iter()
            .all(|row| row.iter().zip(v).fold(0, |acc, (a, b)| (acc + a * (b % self.p)) % self.p) == 0)
    }

    /// All `p^k` codewords, in the order of their message vectors.
    pub fn codewords(&self) -> Vec<Vec<u64>> {
        let total = self.size().expect("codeword count overflows u64");
        let mut out = Vec::with_capacity(total as usize);
        let mut msg = vec![0u64; self.k];
        for _ in 0..total {
            let mut w = vec![0u64; self.n];
            for (m, row) in msg.iter().zip(&self.gen) {
                for (wj, gj) in w.iter_mut().zip(row) {
                    *wj = (*wj + m * gj) % self.p;
                }
            }
            out.push(w);
            for d in msg.iter_mut() {
                *d += 1;
                if *d < self.p {
                    break;
                }
                *d = 0;
            }
        }
        out
    }
}

/// Number of `k`-dimensional subspaces of `F_p^n`:
/// `∏_{i<k} (p^n - p^i) / (p^k - p^i)`.
pub fn gaussian_binomial(n: usize, k: usize, p: u64) -> BigUint {
    assert!(k <= n, "gaussian_binomial needs k <= n");
    let p = BigUint::from(p);
    let pow = |e: usize| p.pow(e as u32);
    let (mut num, mut den) = (BigUint::one(), BigUint::one());
    for i in 0..k {
        num *= pow(n) - pow(i);
        den *= pow(k) - pow(i);
    }
    num / den
}

/// A uniformly random `k`-dimensional code: i.i.d. uniform `k × n` matrices are
/// drawn until one has rank `k`, then canonicalised. Every subspace has the
/// same number of full-rank generator matrices, so the result is uniform.
pub fn sample_code(p: u64, n: usize, k: usize, seed: u64) -> Result<LinearCode> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_code_with(p, n, k, &mut rng)
}

pub(crate) fn sample_code_with<R: Rng>(p: u64, n: usize, k: usize, rng: &mut R) -> Result<LinearCode> {
    super::check_prime(p)?;
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    loop {
        let m: FpMat = (0..k).map(|_| (0..n).map(|_| rng.gen_range(0..p)).collect()).collect();
        let (gen, rank) = rref(&m, p);
        if rank == k {
            return Ok(LinearCode { p, n, k, gen });
        }
    }
}

/// Every `k`-dimensional subspace of `F_p^n` exactly once, as canonical forms.
/// Refuses (with the exact count) when the number of codes exceeds `cap`.
pub fn enumerate_codes(p: u64, n: usize, k: usize, cap: u64) -> Result<Vec<LinearCode>> {
    super::check_prime(p)?;
    if k > n {
        return Err(Error::InvalidParameter(format!("need k <= n, got k = {k}, n = {n}")));
    }
    let count = gaussian_binomial(n, k, p);
    if count.to_u64().is_none_or(|c| c > cap) {
        return Err(Error::CapExceeded {
            what: "code enumeration",
            needed: count.to_string(),
            cap,
        });
    }
    let mut out = Vec::with_capacity(count.to_usize().unwrap_or(0));
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        push_rref_family(p, n, &pivots, &mut out);
        // next k-subset in lexicographic order
        let Some(i) = (0..k).rev().find(|&i| pivots[i] < n - k + i) else {
            break;
        };
        pivots[i] += 1;
        for j in i + 1..k {
            pivots[j] = pivots[j - 1] + 1;
        }
    }
    Ok(out)
}

/// All RREF matrices with the given pivot columns.
fn push_rref_family(p: u64, n: usize, pivots: &[usize], out: &mut Vec<LinearCode>) {
    let k = pivots.len();
    let free: Vec<(usize, usize)> = (0..k)
        .flat_map(|r| {
            ((pivots[r] + 1)..n)
                .filter(|c| !pivots.contains(c))
                .map(move |c| (r, c))
        })
        .collect();
    let mut digits = vec![0u64; free.len()];
    loop {
        let mut gen = vec![vec![0u64; n]; k];
        for (r, &c) in pivots.iter().enumerate() {
            gen[r][c] = 1;
        }
        for (&(r, c), &d) in free.iter().zip(&digits) {
            gen[r][c] = d;
        }
        out.push(LinearCode { p, n, k, gen });
        let mut carry = true;
        for d in digits.iter_mut() {
            *d += 1;
            if *d < p {
                carry = false;
                break;
            }
            *d = 0;
        }
        if carry {
            break;
        }
    }
}
