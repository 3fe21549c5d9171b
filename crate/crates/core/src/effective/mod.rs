//! Explicit alphabet sizes and density guarantees for finite code ensembles.

mod table;

pub use table::{table1_rows, Table1Row};

use serde::Serialize;

use crate::arith::{is_prime, next_prime};
use crate::config::Caps;
use crate::cyclotomic::{craig_lattice, craig_parameter_schedule};
use crate::error::{Error, Result};
use crate::lattice::IntLattice;
use crate::special::ln_unit_ball_volume;

/// Lattice-point count in a ball together with the covering-radius sandwich.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichReport {
    pub r: f64,
    pub l0: f64,
    pub lower: f64,
    /// points in the closed ball, origin included
    pub exact: Option<u64>,
    pub upper: f64,
    pub holds: Option<bool>,
}

fn is_cubic(l: &IntLattice) -> bool {
    let g = l.gram();
    let s = l.scale();
    *s.numer() == *s.denom() && (0..g.len()).all(|i| (0..g.len()).all(|j| g[i][j] == (i == j) as i64))
}

/// `(r - l0)^m V_m ≤ V N(r) ≤ (r + l0)^m V_m` with the exact count when the
/// enumeration fits the caps. `l0` defaults to `β√m/2` for `ℤ^m` and to the
/// best available covering-radius bound otherwise.
pub fn point_sandwich(l: &IntLattice, r: f64, l0: Option<f64>, caps: &Caps) -> Result<SandwichReport> {
    let l0 = match l0 {
        Some(x) => x,
        None if is_cubic(l) => l.dilation() * (l.rank() as f64).sqrt() / 2.0,
        None => l.covering_radius_bound_best(caps),
    };
    if !(r > l0) || !(l0 >= 0.0) {
        return Err(Error::InvalidParameter(format!("need r > l0, got r = {r}, l0 = {l0}")));
    }
    let s = l.point_sandwich(r, l0);
    let exact = match l.count_points(r, false, caps) {
        Ok(c) => Some(c + 1),
        Err(e) if e.is_refusal() => None,
        Err(e) => return Err(e),
    };
    Ok(SandwichReport {
        r,
        l0,
        lower: s.lower,
        exact,
        upper: s.upper,
        holds: exact.map(|c| s.lower <= c as f64 * (1.0 + 1e-12) && c as f64 <= s.upper * (1.0 + 1e-12)),
    })
}

/// Normalised bounds for the Craig lattice `A_n^l`, `n = q - 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CraigBounds {
    pub q: u64,
    pub l: usize,
    pub n: usize,
    /// `√(2l) / (n-1)^{(2l-1)/2n}` as usually displayed
    pub hermite_lb: f64,
    /// `√(2l) / (n+1)^{(2l-1)/2n}` from `λ₁² ≥ 2l` and `V = q^{(2l-1)/2}`
    pub hermite_lb_det: f64,
    /// `√(n-2l) / (n-1)^{(n-2l-1)/2n}`
    pub dual_hermite_lb: f64,
    /// `√(n-2l) / (n+1)^{(n-2l-1)/2n}`
    pub dual_hermite_lb_det: f64,
    /// `√n / (2 γ*)`, transference with the dual bound
    pub covering_ub: f64,
}

pub fn craig_bounds(q: u64, l: usize) -> Result<CraigBounds> {
    if q < 5 || !is_prime(q) || l == 0 || 2 * l >= (q - 1) as usize {
        return Err(Error::InvalidParameter(format!("need prime q >= 5 and 1 <= l < (q-1)/2, got q = {q}, l = {l}")));
    }
    let n = (q - 1) as usize;
    let (nf, lf) = (n as f64, l as f64);
    let herm = |two_l: f64, base: f64| two_l.sqrt() / base.powf((two_l - 1.0) / (2.0 * nf));
    let dual_det = herm(nf - 2.0 * lf, nf + 1.0);
    Ok(CraigBounds {
        q,
        l,
        n,
        hermite_lb: herm(2.0 * lf, nf - 1.0),
        hermite_lb_det: herm(2.0 * lf, nf + 1.0),
        dual_hermite_lb: herm(nf - 2.0 * lf, nf - 1.0),
        dual_hermite_lb_det: dual_det,
        covering_ub: nf.sqrt() / (2.0 * dual_det),
    })
}

/// Exact Hermite parameter `λ₁ / V^{1/n}` of `A_n^l` by enumeration.
pub fn craig_hermite_exact(q: u64, l: usize, caps: &Caps) -> Result<f64> {
    Ok(craig_lattice(q, l)?.density_report(1, caps)?.hermite)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BaseKind {
    /// `ℤ^n` with the natural reduction
    Zn { n: usize },
    /// `A_n^l`, `n = q - 1`, with the natural reduction
    Craig { q: u64, l: usize },
}

impl BaseKind {
    pub fn n(&self) -> usize {
        match *self {
            BaseKind::Zn { n } => n,
            BaseKind::Craig { q, .. } => (q - 1) as usize,
        }
    }

    /// Craig base with the standard schedule `l = round(n / 2 ln(n+1))`.
    pub fn craig_scheduled(q: u64) -> Result<Self> {
        let l = craig_parameter_schedule((q - 1) as usize);
        craig_bounds(q, l)?;
        Ok(BaseKind::Craig { q, l })
    }

    /// `(γ(Λ_p), μ(Λ))`: Hermite parameter of the kernel (equal to that of the
    /// base for natural reductions) and covering parameter of the base.
    fn parameters(&self) -> Result<(f64, f64)> {
        match *self {
            BaseKind::Zn { n } => Ok((1.0, (n as f64).sqrt() / 2.0)),
            BaseKind::Craig { q, l } => {
                let b = craig_bounds(q, l)?;
                Ok((b.hermite_lb_det, b.covering_ub))
            }
        }
    }
}

/// Explicit planner output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectivePlan {
    pub base: BaseKind,
    pub n: usize,
    pub m: usize,
    pub delta: f64,
    pub k: usize,
    pub nu: f64,
    pub c1: f64,
    pub c2: f64,
    pub eps: f64,
    pub gamma_kernel: f64,
    pub mu: f64,
    /// `(c1 √m / γ)^{m/(nδ)}`
    pub p_min_i: f64,
    /// `(c2 m μ / γ)^{(1+ν) m/n}`
    pub p_min_ii: f64,
    pub p_chosen: u64,
    /// `(1-ε)/2^{m-1} (1 + μ / (r p^{(n-k)/m}))^{-m}` with `r = √(m/2πe)`
    pub density_bound: f64,
    pub ln_density_bound: f64,
    /// `ln` of the number of `(n, k)` codes over `F_{p_chosen}`
    pub log_family_size: f64,
}

/// Planner constants; `c1 = c2 = 1` and `ε = 0.3` by default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlanConstants {
    pub nu: f64,
    pub c1: f64,
    pub c2: f64,
    pub eps: f64,
}

impl Default for PlanConstants {
    fn default() -> Self {
        PlanConstants { nu: 0.01, c1: 1.0, c2: 1.0, eps: 0.3 }
    }
}

const P_LIMIT: f64 = 1e15;

/// `ln [n choose k]_p = Σ_{i<k} ln((p^n - p^i)/(p^k - p^i))`.
pub fn ln_gaussian_binomial(n: usize, k: usize, p: f64) -> f64 {
    let lp = p.ln();
    (0..k)
        .map(|i| {
            let num = n as f64 * lp + (-(p.powf(i as f64 - n as f64))).ln_1p();
            let den = k as f64 * lp + (-(p.powf(i as f64 - k as f64))).ln_1p();
            num - den
        })
        .sum()
}

/// `ln` of `(1-ε)/2^{m-1} (1 + μ/(r p^{(n-k)/m}))^{-m}`.
pub fn ln_density_effective(m: usize, n: usize, k: usize, p: f64, mu: f64, eps: f64) -> f64 {
    let mf = m as f64;
    let r = (mf / (2.0 * std::f64::consts::PI * std::f64::consts::E)).sqrt();
    let factor = mu / (r * p.powf((n - k) as f64 / mf));
    (1.0 - eps).ln() - (mf - 1.0) * std::f64::consts::LN_2 - mf * factor.ln_1p()
}

/// Instantiates the two alphabet-size conditions with explicit constants and
/// picks the least prime above both thresholds.
pub fn effective_plan(base: BaseKind, delta: f64, c: PlanConstants) -> Result<EffectivePlan> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("rate {delta} must lie in (0, 1)")));
    }
    if !(c.nu > 0.0 && c.c1 > 0.0 && c.c2 > 0.0 && c.eps > 0.0 && c.eps < 1.0) {
        return Err(Error::InvalidParameter("need nu, c1, c2 > 0 and 0 < eps < 1".into()));
    }
    let n = base.n();
    if n < 2 {
        return Err(Error::InvalidParameter("n must be at least 2".into()));
    }
    let m = n;
    let (gamma, mu) = base.parameters()?;
    let (nf, mf) = (n as f64, m as f64);
    let p_min_i = (c.c1 * mf.sqrt() / gamma).powf(mf / (nf * delta));
    let p_min_ii = (c.c2 * mf * mu / gamma).powf((1.0 + c.nu) * mf / nf);
    let need = p_min_i.max(p_min_ii).max(2.0);
    if !(need < P_LIMIT) {
        return Err(Error::InvalidParameter(format!("alphabet threshold {need:.3e} is beyond the supported range")));
    }
    let p_chosen = next_prime(need.ceil() as u64);
    let k = ((delta * nf).round() as usize).clamp(1, n - 1);
    let ln_density = ln_density_effective(m, n, k, p_chosen as f64, mu, c.eps);
    Ok(EffectivePlan {
        base,
        n,
        m,
        delta,
        k,
        nu: c.nu,
        c1: c.c1,
        c2: c.c2,
        eps: c.eps,
        gamma_kernel: gamma,
        mu,
        p_min_i,
        p_min_ii,
        p_chosen,
        density_bound: ln_density.exp(),
        ln_density_bound: ln_density,
        log_family_size: ln_gaussian_binomial(n, k, p_chosen as f64),
    })
}

/// Rate `ln ln n / (2 ln n + ln ln n)` balancing the two Craig conditions.
pub fn craig_rate(n: usize) -> f64 {
    let ln = (n as f64).ln();
    ln.ln() / (2.0 * ln + ln.ln())
}

/// Plan minimising `p_chosen` over the grid `lo, lo + step, …, hi`; ties go to
/// the smallest rate.
pub fn best_rate(base: BaseKind, lo: f64, hi: f64, step: f64, c: PlanConstants) -> Result<EffectivePlan> {
    if !(lo > 0.0 && hi < 1.0 && lo <= hi && step > 0.0) {
        return Err(Error::InvalidParameter("bad rate grid".into()));
    }
    let steps = ((hi - lo) / step + 1e-9).floor() as usize;
    let mut best: Option<EffectivePlan> = None;
    for i in 0..=steps {
        let Ok(plan) = effective_plan(base, lo + i as f64 * step, c) else { continue };
        if best.as_ref().is_none_or(|b| plan.p_chosen < b.p_chosen) {
            best = Some(plan);
        }
    }
    best.ok_or_else(|| Error::InvalidParameter("no rate in the grid gives a feasible plan".into()))
}

/// Quaternionic variant over `M_2(F_p)^m` with a Lipschitz base `ℤ^{4m}`:
/// `p ≥ c1 r^{2m/(2k-m)}` with `r = √(4m/2πe)`, and `p ≥ (c2 · 4m · μ)^{1+ν}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuaternionPlan {
    pub m: usize,
    pub k: usize,
    pub nu: f64,
    pub c1: f64,
    pub c2: f64,
    pub r: f64,
    pub p_min_i: f64,
    pub p_min_ii: f64,
    pub p_chosen: u64,
}

pub fn quaternion_plan(m: usize, k: usize, c: PlanConstants) -> Result<QuaternionPlan> {
    if m == 0 || 2 * k <= m || k > m {
        return Err(Error::InvalidParameter(format!("need m/2 < k <= m, got m = {m}, k = {k}")));
    }
    let dim = 4.0 * m as f64;
    let r = (dim / (2.0 * std::f64::consts::PI * std::f64::consts::E)).sqrt();
    let p_min_i = c.c1 * r.powf(2.0 * m as f64 / (2.0 * k as f64 - m as f64));
    let mu = dim.sqrt() / 2.0;
    let p_min_ii = (c.c2 * dim * mu).powf(1.0 + c.nu);
    let need = p_min_i.max(p_min_ii).max(2.0);
    if !(need < P_LIMIT) {
        return Err(Error::InvalidParameter(format!("alphabet threshold {need:.3e} is beyond the supported range")));
    }
    Ok(QuaternionPlan { m, k, nu: c.nu, c1: c.c1, c2: c.c2, r, p_min_i, p_min_ii, p_chosen: next_prime(need.ceil() as u64) })
}

/// Packing efficiency `ρ/ρ_eff` with `ρ = λ₁/2`, `ρ_eff = (V/V_m)^{1/m}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PackingEfficiency {
    pub rank: usize,
    pub ratio: f64,
    pub goal: f64,
    pub meets_goal: bool,
}

pub fn packing_efficiency_goal(l: &IntLattice, tol: f64, caps: &Caps) -> Result<PackingEfficiency> {
    let rep = l.density_report(1, caps)?;
    let m = l.rank();
    let rho_eff = ((rep.volume.ln() - ln_unit_ball_volume(m)) / m as f64).exp();
    let ratio = rep.lambda1 / 2.0 / rho_eff;
    Ok(PackingEfficiency { rank: m, ratio, goal: 0.5, meets_goal: ratio >= 0.5 * (1.0 - tol) })
}
