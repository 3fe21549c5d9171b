//! Surjections `φ_p: Λ → F_p^n`, their kernels, and lattices lifted from codes.
//!
//! A reduction is an `n×m` matrix `M` over `F_p` acting on the coordinates of
//! the base lattice. Lifted lattices carry a basis in those coordinates.

use num_bigint::BigInt;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::galois::{self, FpMat, LinearCode};
use crate::lattice::{gram_of_basis, hnf, IntLattice};
use crate::IntMat;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawReduction", into = "RawReduction")]
pub struct Reduction {
    p: u64,
    n: usize,
    map: FpMat,
    base: IntLattice,
}

#[derive(Serialize, Deserialize)]
struct RawReduction {
    p: u64,
    n: usize,
    #[serde(rename = "M")]
    map: IntMat,
    base: IntLattice,
}

impl TryFrom<RawReduction> for Reduction {
    type Error = Error;
    fn try_from(r: RawReduction) -> Result<Self> {
        if r.map.len() != r.n {
            return Err(Error::Mismatch(format!("n = {} but M has {} rows", r.n, r.map.len())));
        }
        Reduction::new(r.base, r.p, &r.map)
    }
}

impl From<Reduction> for RawReduction {
    fn from(r: Reduction) -> Self {
        RawReduction {
            p: r.p,
            n: r.n,
            map: r.map.iter().map(|row| row.iter().map(|&x| x as i64).collect()).collect(),
            base: r.base,
        }
    }
}

/// Shortest-vector data of a kernel lattice `Λ_p = ker φ_p`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelCert {
    pub p: u64,
    pub n: usize,
    pub m: usize,
    /// exact `λ_1(Λ_p)²` (scale of the base included)
    pub lambda1_sq: String,
    pub lambda1: f64,
    /// Hermite parameter `λ_1 / V^{1/m}`
    pub gamma: f64,
    /// `λ_1(Λ_p) / p^{n/m}`
    pub ratio: f64,
}

impl KernelCert {
    /// Checks `λ_1(Λ_p) ≥ c · p^{(n-k)/m + α}`.
    pub fn exponent_check(&self, c: f64, alpha: f64, k: usize) -> bool {
        let e = (self.n as f64 - k as f64) / self.m as f64 + alpha;
        self.lambda1 >= c * (self.p as f64).powf(e) * (1.0 - 1e-12)
    }
}

/// Kernel ratios over a list of primes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NondegeneracyTable {
    pub rows: Vec<KernelCert>,
    /// least-squares slope of `ln λ_1(Λ_p)` against `ln p`
    pub slope: f64,
    /// true when the slope is at least half of the ideal exponent `n/m`
    pub nondegenerate: bool,
}

impl Reduction {
    /// Validates that `M mod p` has rank `n` (surjectivity).
    pub fn new(base: IntLattice, p: u64, map: &IntMat) -> Result<Self> {
        galois::PrimeField::new(p)?;
        let m = base.rank();
        let n = map.len();
        if n == 0 || n > m || map.iter().any(|r| r.len() != m) {
            return Err(Error::Mismatch(format!("M must be n×{m} with 1 <= n <= {m}")));
        }
        let map: FpMat = map.iter().map(|r| r.iter().map(|&x| crate::arith::reduce(x, p)).collect()).collect();
        if galois::rank(&map, p) != n {
            return Err(Error::InvalidParameter("M is not surjective mod p".into()));
        }
        Ok(Reduction { p, n, map, base })
    }

    /// `φ_p(x_i) = e_i`.
    pub fn natural(base: IntLattice, p: u64) -> Result<Self> {
        let m = base.rank();
        let id: IntMat = (0..m).map(|i| (0..m).map(|j| (i == j) as i64).collect()).collect();
        Reduction::new(base, p, &id)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn m(&self) -> usize {
        self.base.rank()
    }
    pub fn matrix(&self) -> &FpMat {
        &self.map
    }
    pub fn base(&self) -> &IntLattice {
        &self.base
    }

    /// `φ_p(x) = M x mod p` for base coordinates `x`.
    pub fn apply(&self, x: &[i64]) -> Vec<u64> {
        let p = self.p;
        self.map
            .iter()
            .map(|row| row.iter().zip(x).fold(0u64, |acc, (&a, &b)| (acc + a * crate::arith::reduce(b, p)) % p))
            .collect()
    }

    /// Basis (rows, base coordinates, lower-triangular HNF) of `φ_p^{-1}(C)`.
    pub fn lift_basis(&self, code: &LinearCode) -> Result<IntMat> {
        if code.p() != self.p || code.n() != self.n {
            return Err(Error::Mismatch(format!(
                "code is over F_{}^{}, reduction targets F_{}^{}",
                code.p(),
                code.n(),
                self.p,
                self.n
            )));
        }
        let m = self.m();
        let p = self.p;
        // preimage subspace W = {x : H M x = 0}
        let h = code.parity_check();
        let w: FpMat = if h.is_empty() {
            (0..m).map(|i| (0..m).map(|j| (i == j) as u64).collect()).collect()
        } else {
            galois::nullspace(&galois::mat_mul_mod(&h, &self.map, p), m, p)
        };
        let mut gens: IntMat = w.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
        for i in 0..m {
            let mut e = vec![0i64; m];
            e[i] = p as i64;
            gens.push(e);
        }
        hnf(&gens, m, p as i64)
    }

    /// `Λ_p(C) = φ_p^{-1}(C)` with Gram `B G Bᵀ` and basis `B` in base coordinates.
    pub fn lift_code(&self, code: &LinearCode) -> Result<IntLattice> {
        let b = self.lift_basis(code)?;
        let gram = gram_of_basis(&b, self.base.gram())?;
        let s = self.base.scale();
        IntLattice::new(gram, *s.numer(), *s.denom())?.dilate(self.base.dilation())?.with_basis(b)
    }

    /// The kernel `Λ_p` (lift of the zero code) with its certificate.
    pub fn kernel_lattice(&self, caps: &Caps) -> Result<(IntLattice, KernelCert)> {
        let kernel = self.lift_code(&LinearCode::zero(self.p, self.n)?)?;
        let sv = kernel.shortest_vector(caps)?;
        let lambda1 = kernel.real_sqnorm(&sv).sqrt();
        let m = self.m();
        let cert = KernelCert {
            p: self.p,
            n: self.n,
            m,
            lambda1_sq: ratio_string(&sv.sqnorm),
            lambda1,
            gamma: lambda1 / (kernel.ln_volume() / m as f64).exp(),
            ratio: lambda1 / (self.p as f64).powf(self.n as f64 / m as f64),
        };
        Ok((kernel, cert))
    }

    /// Index `[Λ : Λ_p(C)]` computed from Gram determinants; equals `p^{n-k}`.
    pub fn lift_index(&self, code: &LinearCode) -> Result<BigInt> {
        let b = self.lift_basis(code)?;
        Ok(b.iter().enumerate().map(|(i, r)| BigInt::from(r[i])).product())
    }
}

/// Kernel certificates for `build(p)` over the given primes.
pub fn nondegeneracy_table(
    build: &dyn Fn(u64) -> Result<Reduction>,
    primes: &[u64],
    caps: &Caps,
) -> Result<NondegeneracyTable> {
    let mut rows = Vec::with_capacity(primes.len());
    for &p in primes {
        rows.push(build(p)?.kernel_lattice(caps)?.1);
    }
    let xs: Vec<f64> = rows.iter().map(|r| (r.p as f64).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.lambda1.ln()).collect();
    let slope = least_squares_slope(&xs, &ys);
    let ideal = rows.first().map_or(0.0, |r| r.n as f64 / r.m as f64);
    Ok(NondegeneracyTable { nondegenerate: slope >= 0.5 * ideal, slope, rows })
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return f64::NAN;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

pub(crate) fn ratio_string(q: &Ratio<i128>) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::{enumerate_codes, sample_code};
    use proptest::prelude::*;

    fn a2() -> IntLattice {
        IntLattice::new(vec![vec![2, 1], vec![1, 2]], 1, 1).unwrap()
    }

    #[test]
    fn natural_kernels() {
        let caps = Caps::default();
        for p in [2, 3, 7] {
            let r = Reduction::natural(IntLattice::integer(3), p).unwrap();
            let (k, cert) = r.kernel_lattice(&caps).unwrap();
            assert_eq!(cert.lambda1_sq, (p * p).to_string());
            assert!((cert.ratio - 1.0).abs() < 1e-12);
            assert!((k.volume() - (p as f64).powi(3)).abs() < 1e-9);
        }
        let r = Reduction::natural(a2(), 5).unwrap();
        let (k, _) = r.kernel_lattice(&caps).unwrap();
        assert_eq!(k.gram(), &vec![vec![50, 25], vec![25, 50]]);
        assert!((k.volume() / a2().volume() - 25.0).abs() < 1e-10);
    }

    #[test]
    fn lifts_of_trivial_codes() {
        let r = Reduction::natural(a2(), 3).unwrap();
        let full = r.lift_code(&LinearCode::full(3, 2).unwrap()).unwrap();
        assert_eq!(full.gram(), a2().gram());
        let zero = r.lift_code(&LinearCode::zero(3, 2).unwrap()).unwrap();
        assert_eq!(zero.gram(), &vec![vec![18, 9], vec![9, 18]]);
    }

    #[test]
    fn lift_example_in_z2() {
        let caps = Caps::default();
        let r = Reduction::natural(IntLattice::integer(2), 3).unwrap();
        let c = LinearCode::from_generators(3, 2, &vec![vec![1, 1]]).unwrap();
        let l = r.lift_code(&c).unwrap();
        assert_eq!(l.basis().unwrap(), &vec![vec![3, 0], vec![1, 1]]);
        assert!((l.volume() - 3.0).abs() < 1e-12);
        assert_eq!(l.shortest_vector(&caps).unwrap().form, 2);
        let (n, beta) = l.normalize(1.0).unwrap();
        assert!((beta - 3f64.powf(-0.5)).abs() < 1e-14);
        assert!((n.volume() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_map_is_flagged() {
        // M = (0 1) kills e_1 for every p
        let build = |p: u64| Reduction::new(IntLattice::integer(2), p, &vec![vec![0, 1]]);
        let t = nondegeneracy_table(&build, &[11, 31, 101, 307], &Caps::default()).unwrap();
        assert!(t.rows.iter().all(|r| r.lambda1_sq == "1"));
        assert!(!t.nondegenerate);
        let nat = |p: u64| Reduction::natural(IntLattice::integer(2), p);
        let t = nondegeneracy_table(&nat, &[11, 31, 101, 307], &Caps::default()).unwrap();
        assert!(t.nondegenerate);
        assert!((t.slope - 1.0).abs() < 1e-9);
    }

    #[test]
    fn surjectivity_checked() {
        assert!(Reduction::new(IntLattice::integer(2), 3, &vec![vec![1, 1], vec![2, 2]]).is_err());
        assert!(Reduction::new(IntLattice::integer(2), 4, &vec![vec![1, 0]]).is_err());
    }

    #[test]
    fn exponent_check() {
        let r = Reduction::natural(IntLattice::integer(4), 11).unwrap();
        let (_, cert) = r.kernel_lattice(&Caps::default()).unwrap();
        // λ1 = 11 ≥ 11^{(4-2)/4 + 1/2}
        assert!(cert.exponent_check(1.0, 0.5, 2));
        assert!(!cert.exponent_check(1.0, 0.6, 2));
    }

    #[test]
    fn json_round_trip() {
        let r = Reduction::new(a2(), 5, &vec![vec![1, 2]]).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"M\":[[1,2]]"));
        let back: Reduction = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }

    /// Checks nesting, the volume tower, φ(Λ_p(C)) = C and |Λ_p(C)/Λ_p| = p^k.
    fn check_invariants(r: &Reduction, c: &LinearCode) {
        let p = r.p();
        let kernel = r.lift_basis(&LinearCode::zero(p, r.n()).unwrap()).unwrap();
        let lift = r.lift_basis(c).unwrap();
        let lift_lat = IntLattice::integer(r.m()).transform(&lift).unwrap();
        for v in &kernel {
            assert!(lift_lat.contains(v));
        }
        // base coordinates are integral by construction, so Λ_p(C) ⊆ Λ
        let images: Vec<Vec<u64>> = lift.iter().map(|v| r.apply(v)).collect();
        for img in &images {
            assert!(c.contains(img));
        }
        assert_eq!(galois::rank(&images, p), c.k());
        let idx = r.lift_index(c).unwrap();
        assert_eq!(idx, BigInt::from(p).pow((r.n() - c.k()) as u32));
        let kidx = r.lift_index(&LinearCode::zero(p, r.n()).unwrap()).unwrap();
        assert_eq!(kidx / idx, BigInt::from(p).pow(c.k() as u32));
        let l = r.lift_code(c).unwrap();
        let tower = r.base().volume() * (p as f64).powi((r.n() - c.k()) as i32);
        assert!((l.volume() / tower - 1.0).abs() < 1e-12);
    }

    #[test]
    fn invariants_over_all_small_codes() {
        let base = IntLattice::new(vec![vec![2, 1, 0], vec![1, 2, 1], vec![0, 1, 2]], 1, 1).unwrap();
        let r = Reduction::new(base, 3, &vec![vec![1, 0, 2], vec![0, 1, 1]]).unwrap();
        for k in 0..=2 {
            let codes = if k == 0 {
                vec![LinearCode::zero(3, 2).unwrap()]
            } else {
                enumerate_codes(3, 2, k, 1000).unwrap()
            };
            for c in &codes {
                check_invariants(&r, c);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn invariants_for_sampled_codes(seed in 0u64..10_000, pi in 0usize..3, k in 1usize..=3) {
            let p = [2u64, 5, 7][pi];
            let r = Reduction::natural(IntLattice::integer(4), p).unwrap();
            let c = sample_code(p, 4, k, seed).unwrap();
            check_invariants(&r, &c);
        }
    }
}
