//! Averages over the lattice ensembles `{β Λ_p(C)}` and density searches.

mod mh;

pub use mh::{certify, mh_radius, mh_search, MhCertificate, MhReport};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::gcd_slice;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::galois::{enumerate_codes, gaussian_binomial, sample_code, LinearCode};
use crate::lattice::{IntLattice, TestFunction};
use crate::reduction::Reduction;
use crate::special::zeta;

/// `(1/|C_{n,k}|) Σ_C Σ_{c ∈ C∖0} g(c)` and `(p^k - 1)/(p^n - 1) Σ_{v ≠ 0} g(v)`,
/// both exact.
pub fn loeliger_lhs_rhs(
    p: u64,
    n: usize,
    k: usize,
    g: &dyn Fn(&[u64]) -> BigRational,
    caps: &Caps,
) -> Result<(BigRational, BigRational)> {
    let codes = enumerate_codes(p, n, k, caps.codes)?;
    let space = p
        .checked_pow(n as u32)
        .filter(|&s| s <= caps.points)
        .ok_or_else(|| Error::CapExceeded { what: "ambient space size", needed: format!("{p}^{n}"), cap: caps.points })?;
    let mut total = BigRational::zero();
    for c in &codes {
        for w in c.codewords() {
            if w.iter().any(|&x| x != 0) {
                total += g(&w);
            }
        }
    }
    let lhs = total / BigRational::from_integer(BigInt::from(codes.len()));
    let mut all = BigRational::zero();
    for idx in 1..space {
        let v: Vec<u64> = (0..n).map(|i| idx / p.pow(i as u32) % p).collect();
        all += g(&v);
    }
    let ratio = BigRational::new(BigInt::from(p.pow(k as u32) - 1), BigInt::from(space - 1));
    Ok((lhs, ratio * all))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnsembleMode {
    /// every `(n, k)` code once
    Exhaustive,
    /// `trials` uniform codes, trial `i` seeded with `seed ^ i`
    MonteCarlo { trials: u64, seed: u64 },
}

impl std::str::FromStr for EnsembleMode {
    type Err = Error;
    /// `exhaustive` or `mc:TRIALS:SEED`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["exhaustive"] => Ok(EnsembleMode::Exhaustive),
            ["mc", t, s] => match (t.parse(), s.parse()) {
                (Ok(trials), Ok(seed)) if trials > 0 => Ok(EnsembleMode::MonteCarlo { trials, seed }),
                _ => Err(Error::InvalidParameter(format!("bad mode '{s}'"))),
            },
            _ => Err(Error::InvalidParameter(format!("mode must be 'exhaustive' or 'mc:TRIALS:SEED', got '{s}'"))),
        }
    }
}

/// The ensemble `{β Λ_p(C) : C an (n, k) code}` normalised to volume `volume`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub reduction: Reduction,
    pub k: usize,
    #[serde(default = "one")]
    pub volume: f64,
    #[serde(default = "exhaustive")]
    pub mode: EnsembleMode,
}

fn one() -> f64 {
    1.0
}
fn exhaustive() -> EnsembleMode {
    EnsembleMode::Exhaustive
}

/// A member of the ensemble: its seed (Monte Carlo) and index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Member<'a> {
    Code(u64, &'a LinearCode),
    Seed(u64, u64),
}

impl EnsembleSpec {
    pub fn new(reduction: Reduction, k: usize, volume: f64, mode: EnsembleMode) -> Result<Self> {
        let s = EnsembleSpec { reduction, k, volume, mode };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.reduction.n();
        if self.k == 0 || self.k > n {
            return Err(Error::InvalidParameter(format!("need 1 <= k <= n = {n}, got k = {}", self.k)));
        }
        if !(self.volume.is_finite() && self.volume > 0.0) {
            return Err(Error::InvalidParameter("volume must be positive".into()));
        }
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.reduction.p()
    }

    pub fn m(&self) -> usize {
        self.reduction.m()
    }

    /// Number of codes in the full ensemble.
    pub fn family_size(&self) -> num_bigint::BigUint {
        gaussian_binomial(self.reduction.n(), self.k, self.p())
    }

    /// `β` with `V(β Λ_p(C)) = volume`, common to all codes.
    pub fn beta(&self) -> f64 {
        let m = self.m() as f64;
        let ln_lift = self.reduction.base().ln_volume() + (self.reduction.n() - self.k) as f64 * (self.p() as f64).ln();
        ((self.volume.ln() - ln_lift) / m).exp()
    }

    /// Codes of an exhaustive run (empty in Monte Carlo mode).
    pub(crate) fn exhaustive_codes(&self, caps: &Caps) -> Result<Vec<LinearCode>> {
        match self.mode {
            EnsembleMode::Exhaustive => enumerate_codes(self.p(), self.reduction.n(), self.k, caps.codes),
            EnsembleMode::MonteCarlo { .. } => Ok(Vec::new()),
        }
    }

    pub(crate) fn members<'a>(&self, codes: &'a [LinearCode]) -> Vec<Member<'a>> {
        match self.mode {
            EnsembleMode::Exhaustive => codes.iter().enumerate().map(|(i, c)| Member::Code(i as u64, c)).collect(),
            EnsembleMode::MonteCarlo { trials, seed } => (0..trials).map(|i| Member::Seed(i, seed ^ i)).collect(),
        }
    }

    /// The normalised lattice of one member.
    pub(crate) fn lattice(&self, member: &Member) -> Result<IntLattice> {
        let code = match member {
            Member::Code(_, c) => (*c).clone(),
            Member::Seed(_, s) => sample_code(self.p(), self.reduction.n(), self.k, *s)?,
        };
        let lat = self.reduction.lift_code(&code)?;
        Ok(lat.dilate(self.beta())?)
    }
}

/// Result of averaging `Σ f` over an ensemble.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AverageReport {
    pub p: u64,
    pub k: usize,
    pub m: usize,
    pub volume: f64,
    pub f: String,
    pub primitive: bool,
    /// number of lattices averaged
    pub trials: u64,
    pub exhaustive: bool,
    pub estimate: f64,
    /// `n/d` when every summand is an integer count (indicator functions)
    pub exact_estimate: Option<String>,
    pub target: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    /// sample standard error (Monte Carlo only)
    pub stderr: Option<f64>,
    /// average contribution of nonzero kernel points `x ∈ Λ_p`
    pub kernel_term: f64,
    /// average contribution of points with `φ_p(x) ≠ 0`
    pub nonkernel_term: f64,
}

impl AverageReport {
    pub const CSV_HEADER: &'static str = "p,k,trials,estimate,target,stderr,kernel_term";

    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{:.12},{:.12},{},{:.12}",
            self.p,
            self.k,
            self.trials,
            self.estimate,
            self.target,
            self.stderr.map_or(String::new(), |s| format!("{s:.12}")),
            self.kernel_term
        )
    }
}

/// `(kernel, nonkernel)` parts of `Σ f(x)` over nonzero (or primitive) points.
pub(crate) fn split_sum(
    red: &Reduction,
    lat: &IntLattice,
    f: &TestFunction,
    primitive: bool,
    eps: f64,
    caps: &Caps,
) -> Result<(f64, f64)> {
    let radius = match (f.support_radius(), f) {
        (Some(r), _) => r,
        (None, TestFunction::Gaussian { tau }) => lat.gaussian_radius(*tau, eps, lat.covering_radius_bound()),
        _ => unreachable!("only the Gaussian has unbounded support"),
    };
    let mut kern = Vec::new();
    let mut rest = Vec::new();
    lat.visit_points(radius, caps, &mut |x, sq| {
        if primitive && gcd_slice(x) != 1 {
            return;
        }
        let v = f.eval_sq(sq);
        if v == 0.0 {
            return;
        }
        let amb = lat.ambient(x).expect("lifted lattices carry a basis");
        if red.apply(&amb).iter().all(|&c| c == 0) {
            kern.push(v);
        } else {
            rest.push(v);
        }
    })?;
    let sum = |mut v: Vec<f64>| {
        v.sort_by(|a, b| a.total_cmp(b));
        // from +0.0: an empty float sum is -0.0
        v.iter().fold(0.0, |a, b| a + b)
    };
    Ok((sum(kern), sum(rest)))
}

/// `V^{-1} ∫ f`, or `(ζ(m) V)^{-1} ∫ f` for primitive sums.
pub fn average_target(f: &TestFunction, m: usize, volume: f64, primitive: bool) -> f64 {
    let t = f.integral(m) / volume;
    if primitive {
        t / zeta(m as u32)
    } else {
        t
    }
}

/// Averages `Σ f(x)` over the ensemble. Gaussian sums are truncated where the
/// tail bound falls below `eps`.
pub fn average_sum_f(
    spec: &EnsembleSpec,
    f: &TestFunction,
    primitive: bool,
    eps: f64,
    caps: &Caps,
) -> Result<AverageReport> {
    spec.validate()?;
    f.validate()?;
    let m = spec.m();
    if primitive && m < 2 {
        return Err(Error::InvalidParameter("primitive averages need rank >= 2".into()));
    }
    let codes = spec.exhaustive_codes(caps)?;
    let members = spec.members(&codes);
    let parts: Vec<(f64, f64)> = members
        .par_iter()
        .map(|mem| {
            let lat = spec.lattice(mem)?;
            split_sum(&spec.reduction, &lat, f, primitive, eps, caps)
        })
        .collect::<Result<_>>()?;
    let n = parts.len() as f64;
    let totals: Vec<f64> = parts.iter().map(|(a, b)| a + b).collect();
    let estimate = totals.iter().sum::<f64>() / n;
    let kernel_term = parts.iter().map(|x| x.0).sum::<f64>() / n;
    let nonkernel_term = parts.iter().map(|x| x.1).sum::<f64>() / n;
    let exhaustive = matches!(spec.mode, EnsembleMode::Exhaustive);
    let stderr = if exhaustive || parts.len() < 2 {
        None
    } else {
        let var = totals.iter().map(|t| (t - estimate).powi(2)).sum::<f64>() / (n - 1.0);
        Some((var / n).sqrt())
    };
    let exact_estimate = match f {
        TestFunction::BallIndicator { .. } => {
            let count: u64 = totals.iter().map(|t| t.round() as u64).sum();
            let q = BigRational::new(BigInt::from(count), BigInt::from(parts.len()));
            Some(q.to_string())
        }
        _ => None,
    };
    let target = average_target(f, m, spec.volume, primitive);
    Ok(AverageReport {
        p: spec.p(),
        k: spec.k,
        m,
        volume: spec.volume,
        f: format!("{f:?}"),
        primitive,
        trials: parts.len() as u64,
        exhaustive,
        estimate,
        exact_estimate,
        target,
        abs_err: (estimate - target).abs(),
        rel_err: (estimate - target).abs() / target.abs().max(f64::MIN_POSITIVE),
        stderr,
        kernel_term,
        nonkernel_term,
    })
}

/// Average of `Θ(τ) = Σ_x e^{-τ‖x‖²}` (origin included); target `V^{-1}(π/τ)^{m/2} + 1`.
pub fn theta_average(spec: &EnsembleSpec, tau: f64, eps: f64, caps: &Caps) -> Result<AverageReport> {
    let mut r = average_sum_f(spec, &TestFunction::Gaussian { tau }, false, eps, caps)?;
    r.f = format!("Theta {{ tau: {tau} }}");
    r.estimate += 1.0;
    r.target += 1.0;
    r.abs_err = (r.estimate - r.target).abs();
    r.rel_err = r.abs_err / r.target;
    Ok(r)
}

/// `(p^k - 1)/(p^n - 1) · Σ_{x ∈ βΛ, φ_p(x) ≠ 0} f(x)`: the exact ensemble
/// average of the nonkernel part over all `(n, k)` codes.
pub fn loeliger_prediction(spec: &EnsembleSpec, f: &TestFunction, eps: f64, caps: &Caps) -> Result<f64> {
    let red = &spec.reduction;
    let base = red.base().clone();
    let m = base.rank();
    let id: crate::IntMat = (0..m).map(|i| (0..m).map(|j| (i == j) as i64).collect()).collect();
    // the base lattice in its own coordinates, dilated like the ensemble members
    let base = base.without_basis().with_basis(id)?.dilate(spec.beta())?;
    let (_, rest) = split_sum(red, &base, f, false, eps, caps)?;
    let p = spec.p() as f64;
    let n = red.n() as i32;
    Ok((p.powi(spec.k as i32) - 1.0) / (p.powi(n) - 1.0) * rest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn loeliger_examples() {
        let caps = Caps::default();
        let (l, r) = loeliger_lhs_rhs(2, 2, 1, &|_| q(1, 1), &caps).unwrap();
        assert_eq!((l.clone(), r), (q(1, 1), q(1, 1)));
        let (l, r) = loeliger_lhs_rhs(3, 2, 1, &|v| q((v == [1, 0]) as i64, 1), &caps).unwrap();
        assert_eq!((l.clone(), r), (q(1, 4), q(1, 4)));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let table: Vec<i64> = (0..8).map(|_| rng.gen_range(0..100)).collect();
        let g = |v: &[u64]| q(table[(v[0] + 2 * v[1] + 4 * v[2]) as usize], 7);
        let (l, r) = loeliger_lhs_rhs(2, 3, 2, &g, &caps).unwrap();
        assert_eq!(l, r);
    }

    fn z2(p: u64, k: usize, mode: EnsembleMode) -> EnsembleSpec {
        let red = Reduction::natural(IntLattice::integer(2), p).unwrap();
        EnsembleSpec::new(red, k, 1.0, mode).unwrap()
    }

    #[test]
    fn empty_ball_averages_to_zero() {
        let caps = Caps::default();
        let red = Reduction::natural(IntLattice::integer(4), 2).unwrap();
        let spec = EnsembleSpec::new(red, 2, 1.0, EnsembleMode::Exhaustive).unwrap();
        let r = average_sum_f(&spec, &TestFunction::BallIndicator { r: 0.1 }, false, 0.0, &caps).unwrap();
        assert_eq!(r.estimate, 0.0);
        assert_eq!(r.exact_estimate.as_deref(), Some("0"));
    }

    #[test]
    fn z2_exhaustive_matches_loeliger_split() {
        let caps = Caps::default();
        for p in [3u64, 5, 7] {
            let spec = z2(p, 1, EnsembleMode::Exhaustive);
            for f in [TestFunction::BallIndicator { r: 2.0 }, TestFunction::Gaussian { tau: 1.0 }] {
                let r = average_sum_f(&spec, &f, false, 1e-13, &caps).unwrap();
                assert_eq!(r.trials, p + 1);
                let pred = loeliger_prediction(&spec, &f, 1e-13, &caps).unwrap();
                assert!((r.nonkernel_term - pred).abs() < 1e-9, "{p} {f:?}: {} vs {pred}", r.nonkernel_term);
                assert!((r.estimate - r.kernel_term - r.nonkernel_term).abs() < 1e-12);
            }
        }
        let r = average_sum_f(&z2(3, 1, EnsembleMode::Exhaustive), &TestFunction::BallIndicator { r: 2.0 }, false, 0.0, &caps)
            .unwrap();
        assert!((r.target - 4.0 * std::f64::consts::PI).abs() < 1e-12);
        assert!(r.exact_estimate.is_some());
    }

    #[test]
    fn theta_exhaustive_z2() {
        let caps = Caps::default();
        // each lift has Θ = Θ_{A}(π) for a lattice of volume 1; E[Θ] = 2p/(p+1) is not needed here,
        // only consistency with the Gaussian average
        let spec = z2(3, 1, EnsembleMode::Exhaustive);
        let t = theta_average(&spec, std::f64::consts::PI, 1e-14, &caps).unwrap();
        let g = average_sum_f(&spec, &TestFunction::Gaussian { tau: std::f64::consts::PI }, false, 1e-14, &caps).unwrap();
        assert!((t.estimate - g.estimate - 1.0).abs() < 1e-12);
        assert!((t.target - 2.0).abs() < 1e-12);
        let big = theta_average(&spec, 200.0, 1e-14, &caps).unwrap();
        assert!((big.estimate - 1.0).abs() < 1e-6);
    }

    #[test]
    fn monte_carlo_agrees_with_exhaustive() {
        let caps = Caps::default();
        let f = TestFunction::BallIndicator { r: 1.5 };
        let ex = average_sum_f(&z2(13, 1, EnsembleMode::Exhaustive), &f, true, 0.0, &caps).unwrap();
        let mc = average_sum_f(&z2(13, 1, EnsembleMode::MonteCarlo { trials: 400, seed: 5 }), &f, true, 0.0, &caps)
            .unwrap();
        let se = mc.stderr.unwrap();
        assert!((ex.estimate - mc.estimate).abs() <= 4.0 * se, "{} vs {} ± {se}", ex.estimate, mc.estimate);
    }

    #[test]
    fn kernel_term_vanishes_for_large_p() {
        let caps = Caps::default();
        let red = Reduction::natural(IntLattice::integer(4), 11).unwrap();
        let spec = EnsembleSpec::new(red, 2, 1.0, EnsembleMode::MonteCarlo { trials: 20, seed: 1 }).unwrap();
        let r = average_sum_f(&spec, &TestFunction::BallIndicator { r: 1.2 }, true, 0.0, &caps).unwrap();
        assert_eq!(r.kernel_term, 0.0);
        assert!((spec.beta() - 11f64.powf(-0.5)).abs() < 1e-12);
    }

    #[test]
    fn mode_parsing_and_json() {
        assert_eq!("mc:10:3".parse::<EnsembleMode>().unwrap(), EnsembleMode::MonteCarlo { trials: 10, seed: 3 });
        assert!("mc:0:3".parse::<EnsembleMode>().is_err());
        let spec = z2(5, 1, EnsembleMode::MonteCarlo { trials: 4, seed: 2 });
        let s = serde_json::to_string(&spec).unwrap();
        let back: EnsembleSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, spec);
    }
}
