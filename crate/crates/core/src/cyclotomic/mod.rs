//! Prime-conductor cyclotomic fields `K = Q(ζ_q)`.
//!
//! Elements of `ℤ[ζ]` are integer vectors in the power basis
//! `1, ζ, …, ζ^{q-2}`. The trace form `Tr(x ȳ)` gives integer Gram matrices,
//! so no complex embedding is ever computed.

mod kminima;
mod rogers;

pub use kminima::{k_successive_minima, KSuccessiveMinima};
pub use rogers::{rogers_density_search, rogers_threshold, RogersParams, RogersReport, RogersRow};

use crate::arith::{is_prime, pow_mod};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::lattice::{gram_of_basis, IntLattice};
use crate::reduction::Reduction;
use crate::IntMat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycField {
    q: u64,
}

impl CycField {
    pub fn new(q: u64) -> Result<Self> {
        if q < 3 || q > 1000 || !is_prime(q) {
            return Err(Error::InvalidParameter(format!("conductor {q} must be an odd prime below 1000")));
        }
        Ok(CycField { q })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `[K : Q] = q - 1`.
    pub fn degree(&self) -> usize {
        self.q as usize - 1
    }

    /// Number of roots of unity `±ζ^j`, i.e. `2q`.
    pub fn roots_of_unity(&self) -> u64 {
        2 * self.q
    }

    pub fn one(&self) -> Vec<i64> {
        let mut v = vec![0; self.degree()];
        v[0] = 1;
        v
    }

    /// `ζ^j` in the power basis (`j` taken mod `q`).
    pub fn zeta_pow(&self, j: i64) -> Vec<i64> {
        let mut full = vec![0i64; self.q as usize];
        full[j.rem_euclid(self.q as i64) as usize] = 1;
        self.reduce(&full)
    }

    /// Reduces a vector over `1, ζ, …, ζ^{q-1}` with `ζ^{q-1} = -(1 + … + ζ^{q-2})`.
    pub fn reduce(&self, full: &[i64]) -> Vec<i64> {
        let n = self.degree();
        let top = full.get(n).copied().unwrap_or(0);
        (0..n).map(|i| full.get(i).copied().unwrap_or(0) - top).collect()
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn mul(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let q = self.q as usize;
        let mut full = vec![0i64; q];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                full[(i + j) % q] += x * y;
            }
        }
        self.reduce(&full)
    }

    pub fn pow(&self, a: &[i64], e: u32) -> Vec<i64> {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self, a: &[i64]) -> Vec<i64> {
        let q = self.q as usize;
        let mut full = vec![0i64; q];
        for (i, &x) in a.iter().enumerate() {
            full[(q - i) % q] += x;
        }
        self.reduce(&full)
    }

    /// `Tr(a) = (q-1) a_0 - Σ_{i≥1} a_i`.
    pub fn trace(&self, a: &[i64]) -> i64 {
        self.q as i64 * a[0] - a.iter().sum::<i64>()
    }

    /// `Tr(a b̄) = q ⟨a, b⟩ - (Σ a)(Σ b)`.
    pub fn trace_form(&self, a: &[i64], b: &[i64]) -> i128 {
        let dot: i128 = a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum();
        let sa: i128 = a.iter().map(|&x| x as i128).sum();
        let sb: i128 = b.iter().map(|&x| x as i128).sum();
        self.q as i128 * dot - sa * sb
    }

    /// Trace Gram of `ℤ[ζ]` in the power basis: `q I - J`.
    pub fn trace_gram(&self) -> IntMat {
        let n = self.degree();
        let q = self.q as i64;
        (0..n).map(|i| (0..n).map(|j| if i == j { q - 1 } else { -1 }).collect()).collect()
    }

    /// Matrix of multiplication by `x`: row `i` is `x ζ^i`.
    pub fn mult_matrix(&self, x: &[i64]) -> IntMat {
        (0..self.degree()).map(|i| self.mul(x, &self.zeta_pow(i as i64))).collect()
    }

    pub fn is_zero(a: &[i64]) -> bool {
        a.iter().all(|&x| x == 0)
    }
}

/// `l = round(n / (2 ln(n+1)))`, at least 1.
pub fn craig_parameter_schedule(n: usize) -> usize {
    let x = n as f64 / (2.0 * (n as f64 + 1.0).ln());
    (x.round() as usize).max(1)
}

/// The Craig lattice: the ideal `(1-ζ)^l ℤ[ζ_q]` with the trace form scaled by `1/q`.
/// Its basis rows are `(1-ζ)^l ζ^i` in the power basis.
pub fn craig_lattice(q: u64, l: usize) -> Result<IntLattice> {
    let k = CycField::new(q)?;
    if l == 0 || 2 * l >= q as usize {
        return Err(Error::InvalidParameter(format!("need 1 <= l < q/2, got l = {l}")));
    }
    let one_minus = k.sub(&k.one(), &k.zeta_pow(1));
    let gen = k.pow(&one_minus, l as u32);
    let basis = k.mult_matrix(&gen);
    let gram = gram_of_basis(&basis, &k.trace_gram())?;
    IntLattice::new(gram, 1, q as i64)?.with_basis(basis)
}

/// `(ℤ[ζ])^t` with the block-diagonal trace form and identity basis.
pub fn trace_lattice(q: u64, t: usize) -> Result<IntLattice> {
    let k = CycField::new(q)?;
    let n = k.degree();
    let g = k.trace_gram();
    let m = n * t;
    let gram: IntMat = (0..m)
        .map(|i| (0..m).map(|j| if i / n == j / n { g[i % n][j % n] } else { 0 }).collect())
        .collect();
    let id: IntMat = (0..m).map(|i| (0..m).map(|j| (i == j) as i64).collect()).collect();
    IntLattice::new(gram, 1, 1)?.with_basis(id)
}

/// Elements of order `q` in `F_p^*` for a prime `p ≡ 1 (mod q)`.
pub fn roots_of_order_q(q: u64, p: u64) -> Vec<u64> {
    if !is_prime(p) || p % q != 1 {
        return Vec::new();
    }
    let mut out: Vec<u64> = (2..p).filter(|&g| pow_mod(g, q, p) == 1).collect();
    out.sort_unstable();
    out
}

/// The first `count` primes `p ≥ start` with `p ≡ 1 (mod q)`, each with a root
/// `g = a^{(p-1)/q} ≠ 1` for the least base `a ≥ 2` that gives one.
/// Searches no further than `limit`.
pub fn split_primes(q: u64, count: usize, start: u64, limit: u64) -> Result<Vec<(u64, u64)>> {
    CycField::new(q)?;
    let mut out = Vec::with_capacity(count);
    // least p ≥ start with p ≡ 1 (mod q)
    let mut p = start.max(2);
    p += (q + 1 - p % q) % q;
    while out.len() < count {
        if p > limit {
            return Err(Error::CapExceeded {
                what: "split prime search",
                needed: format!("{count} primes"),
                cap: limit,
            });
        }
        if is_prime(p) {
            let g = (2..p).map(|a| pow_mod(a, (p - 1) / q, p)).find(|&g| g != 1).expect("p ≡ 1 mod q");
            out.push((p, g));
        }
        p += q;
    }
    Ok(out)
}

/// Reduction `ℤ[ζ]^t → F_p^t` through `ℤ[ζ]/(p, ζ - g) ≅ F_p`, blockwise.
pub fn ideal_reduction(q: u64, t: usize, p: u64, g: u64) -> Result<Reduction> {
    let k = CycField::new(q)?;
    if t == 0 {
        return Err(Error::InvalidParameter("t must be positive".into()));
    }
    if !is_prime(p) || p % q != 1 || g % p == 1 || pow_mod(g % p, q, p) != 1 {
        return Err(Error::InvalidParameter(format!(
            "(p, g) = ({p}, {g}) does not define a degree-one prime above p in Q(ζ_{q})"
        )));
    }
    let n = k.degree();
    let mut map = vec![vec![0i64; n * t]; t];
    for (b, row) in map.iter_mut().enumerate() {
        for i in 0..n {
            row[b * n + i] = pow_mod(g, i as u64, p) as i64;
        }
    }
    Reduction::new(trace_lattice(q, t)?, p, &map)
}

/// Multiplication by `μ` applied blockwise to an element of `ℤ[ζ]^t`.
pub fn scale_blocks(k: &CycField, mu: &[i64], x: &[i64]) -> Vec<i64> {
    x.chunks(k.degree()).flat_map(|b| k.mul(mu, b)).collect()
}

/// Orbit data for the minimal vectors of a lattice inside `ℤ[ζ]^t` (basis rows
/// in power-basis coordinates).
#[derive(Debug, Clone, PartialEq)]
pub struct MinimalOrbits {
    /// number of minimal vectors, both signs counted
    pub count: usize,
    /// the set is mapped into itself by `x ↦ ζ x`
    pub closed: bool,
    /// `count / 2q`
    pub orbits: usize,
}

pub fn minimal_vector_orbits(k: &CycField, lat: &IntLattice, caps: &Caps) -> Result<MinimalOrbits> {
    if lat.basis().is_none() {
        return Err(Error::InvalidParameter("lattice needs a power-basis coordinate basis".into()));
    }
    let mins = lat.minimal_vectors(caps)?;
    let zeta = k.zeta_pow(1);
    let mut closed = true;
    for v in &mins {
        let amb = lat.ambient(&v.coords).expect("basis present");
        let img = scale_blocks(k, &zeta, &amb);
        match lat.coords_of(&img) {
            Some(c) if lat.form(&c) == v.form => {}
            _ => closed = false,
        }
    }
    let count = 2 * mins.len();
    Ok(MinimalOrbits { count, closed, orbits: count / (2 * k.q() as usize) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::exact::det_pd;
    use num_bigint::BigInt;

    #[test]
    fn traces() {
        for q in [3u64, 5, 7, 11] {
            let k = CycField::new(q).unwrap();
            assert_eq!(k.trace(&k.one()), q as i64 - 1);
            for j in 1..q as i64 {
                assert_eq!(k.trace(&k.zeta_pow(j)), -1);
            }
        }
        let k = CycField::new(7).unwrap();
        let a = k.sub(&k.one(), &k.zeta_pow(1));
        // Tr(2 - ζ - ζ^{-1}) = 2·6 + 1 + 1
        assert_eq!(k.trace(&k.mul(&a, &k.conj(&a))), 14);
        assert_eq!(k.trace_form(&a, &a), 14);
    }

    #[test]
    fn trace_form_matches_trace_of_product() {
        let k = CycField::new(5).unwrap();
        let a = vec![1, -2, 0, 3];
        let b = vec![0, 1, 4, -1];
        assert_eq!(k.trace_form(&a, &b), k.trace(&k.mul(&a, &k.conj(&b))) as i128);
    }

    #[test]
    fn discriminants() {
        for q in [3u64, 5, 7, 11] {
            let k = CycField::new(q).unwrap();
            assert_eq!(det_pd(&k.trace_gram()), BigInt::from(q).pow(q as u32 - 2));
        }
    }

    #[test]
    fn zeta_is_an_isometry() {
        for q in [5u64, 7] {
            let k = CycField::new(q).unwrap();
            let g = k.trace_gram();
            let t = k.mult_matrix(&k.zeta_pow(1));
            assert_eq!(gram_of_basis(&t, &g).unwrap(), g);
            let craig = craig_lattice(q, 2).unwrap();
            // ζ maps the ideal to itself with the same form
            let b = craig.basis().unwrap();
            let images: IntMat = b.iter().map(|r| k.mul(&k.zeta_pow(1), r)).collect();
            assert_eq!(gram_of_basis(&images, &g).unwrap(), gram_of_basis(b, &g).unwrap());
        }
    }

    #[test]
    fn schedule() {
        assert_eq!(craig_parameter_schedule(6), 2); // 6 / (2 ln 7) ≈ 1.54
        assert_eq!(craig_parameter_schedule(100), 11); // 100 / (2 ln 101) ≈ 10.83
        assert_eq!(craig_parameter_schedule(2), 1);
    }

    #[test]
    fn split_prime_search() {
        let s = split_primes(5, 3, 2, 10_000).unwrap();
        assert_eq!(s.iter().map(|x| x.0).collect::<Vec<_>>(), vec![11, 31, 41]);
        assert_eq!(split_primes(7, 1, 2, 10_000).unwrap()[0].0, 29);
        assert_eq!(roots_of_order_q(5, 11), vec![3, 4, 5, 9]);
        for (p, g) in split_primes(11, 5, 100, 100_000).unwrap() {
            assert_eq!(pow_mod(g, 11, p), 1);
            assert_ne!(g, 1);
        }
        assert!(split_primes(5, 10, 2, 50).is_err());
    }

    #[test]
    fn ideal_kernels() {
        let caps = Caps::default();
        let r = ideal_reduction(5, 1, 11, 3).unwrap();
        let (kernel, cert) = r.kernel_lattice(&caps).unwrap();
        assert!((kernel.volume() / r.base().volume() - 11.0).abs() < 1e-9);
        // minimum norm at least sqrt(n) p^{1/n}
        let bound = 4.0 * 11f64.sqrt();
        assert!(cert.lambda1 * cert.lambda1 >= bound - 1e-9);
        assert!(ideal_reduction(5, 1, 11, 1).is_err());
        assert!(ideal_reduction(5, 1, 13, 3).is_err());
        for (p, g) in split_primes(7, 3, 2, 10_000).unwrap() {
            let (_, cert) = ideal_reduction(7, 1, p, g).unwrap().kernel_lattice(&caps).unwrap();
            assert!(cert.lambda1 >= 6f64.sqrt() * (p as f64).powf(1.0 / 6.0) - 1e-9);
        }
    }

    /// Points of A_6 = {x ∈ ℤ^7 : Σx = 0} with Σx² = 2j, by brute force.
    fn a6_shells() -> [u64; 4] {
        let mut counts = [0u64; 4];
        let mut x = [0i64; 7];
        fn rec(i: usize, x: &mut [i64; 7], counts: &mut [u64; 4]) {
            if i == 7 {
                let s: i64 = x.iter().sum();
                let n: i64 = x.iter().map(|v| v * v).sum();
                if s == 0 && n > 0 && n <= 8 {
                    counts[(n / 2 - 1) as usize] += 1;
                }
                return;
            }
            for v in -2..=2 {
                x[i] = v;
                rec(i + 1, x, counts);
            }
        }
        rec(0, &mut x, &mut counts);
        counts
    }

    #[test]
    fn craig_l1_is_a6() {
        let caps = Caps::default();
        let l = craig_lattice(7, 1).unwrap();
        let mins = l.successive_minima(2, &caps).unwrap();
        assert_eq!(mins, vec![num_rational::Ratio::from_integer(2); 2]);
        let mut shells = [0u64; 4];
        for pt in l.short_points(8 * 7, &caps).unwrap() {
            // forms are 7× the scaled norm; one point per ± pair
            shells[(pt.form / 14 - 1) as usize] += 2;
        }
        assert_eq!(shells, a6_shells());
        assert!((l.volume() - 7f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn craig_l2_hermite_bound() {
        let caps = Caps::default();
        let (n, l) = (6.0f64, 2.0f64);
        let rep = craig_lattice(7, 2).unwrap().density_report(1, &caps).unwrap();
        // λ₁² ≥ 2l and V = q^{(2l-1)/2}; equality holds here
        let bound = (2.0 * l).sqrt() / (n + 1.0).powf((2.0 * l - 1.0) / (2.0 * n));
        assert!(rep.hermite >= bound - 1e-9, "{} < {bound}", rep.hermite);
        assert!((rep.lambda1 * rep.lambda1 - 4.0).abs() < 1e-12);
    }

    #[test]
    fn craig_determinant() {
        for (q, l) in [(7u64, 1usize), (7, 2), (11, 3)] {
            let c = craig_lattice(q, l).unwrap();
            // det of the unscaled Gram is q^{q-2} · q^{2l}
            assert_eq!(c.det_gram(), BigInt::from(q).pow((q - 2) as u32 + 2 * l as u32));
        }
    }

    #[test]
    fn minimal_vectors_form_unit_orbits() {
        let caps = Caps::default();
        let k = CycField::new(5).unwrap();
        let r = ideal_reduction(5, 2, 11, 3).unwrap();
        for seed in 0..4 {
            let c = crate::galois::sample_code(11, 2, 1, seed).unwrap();
            let lift = r.lift_code(&c).unwrap();
            let o = minimal_vector_orbits(&k, &lift, &caps).unwrap();
            assert!(o.closed);
            assert_eq!(o.count % 10, 0);
        }
        let o = minimal_vector_orbits(&k, &craig_lattice(5, 1).unwrap(), &caps).unwrap();
        assert!(o.closed && o.count % 10 == 0);
    }
}
