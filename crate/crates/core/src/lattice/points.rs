//! Shortest vectors, minima, point counts, theta series and densities.

use num_rational::Ratio;
use serde::Serialize;

use super::enumerate::{Enumerator, Overflow, Visit};
use super::exact::RankTracker;
use super::{IntLattice, LatticePoint, TestFunction};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::special::ln_unit_ball_volume;

/// Bounds `(r - l0)^m V_m / V ≤ N(r) ≤ (r + l0)^m V_m / V` on the number of
/// lattice points (origin included) in the closed ball of radius `r`, valid
/// for any `l0` at least the covering radius. The lower bound is 0 for `r ≤ l0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointSandwich {
    pub r: f64,
    pub l0: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    pub rank: usize,
    pub volume: f64,
    pub lambda1: f64,
    pub packing_density: f64,
    pub hermite: f64,
    /// `Δ_i = vol B_{λ_i/2} / V` for `i = 1..=upto`.
    pub successive_densities: Vec<f64>,
    pub packing_efficiency: f64,
}

fn overflow_to_error(l: &IntLattice, r: f64, caps: &Caps) -> Error {
    let s = l.point_sandwich(r, l.covering_radius_bound());
    Error::PointCapExceeded { cap: caps.points, lower: s.lower, upper: s.upper }
}

/// Sign-normalised sort key: first nonzero coordinate positive, then the index
/// of that coordinate, then the coordinates themselves.
fn tie_key(x: &[i64]) -> (usize, Vec<i64>) {
    let lead = x.iter().position(|&v| v != 0).unwrap_or(x.len());
    let sign = if x.get(lead).is_some_and(|&v| v < 0) { -1 } else { 1 };
    (lead, x.iter().map(|v| v * sign).collect())
}

impl IntLattice {
    /// All minimal vectors, one per `±` pair, sign-normalised and sorted by the
    /// tie-break order; the first is the canonical shortest vector.
    pub fn minimal_vectors(&self, caps: &Caps) -> Result<Vec<LatticePoint>> {
        self.check_rank_cap(caps.svp_rank)?;
        let e = Enumerator::new(&self.gram);
        let mut best = e.min_diagonal();
        let mut found: Vec<Vec<i64>> = Vec::new();
        e.run(best, caps.points, true, &mut |x, f| {
            if f < best {
                best = f;
                found.clear();
                found.push(x.to_vec());
                Visit::Shrink(f)
            } else {
                if f == best {
                    found.push(x.to_vec());
                }
                Visit::Continue
            }
        })
        .map_err(|Overflow| Error::CapExceeded {
            what: "shortest vector enumeration",
            needed: format!("more than {}", caps.points),
            cap: caps.points,
        })?;
        let mut keyed: Vec<(usize, Vec<i64>)> = found.iter().map(|x| tie_key(x)).collect();
        keyed.sort();
        keyed.dedup();
        Ok(keyed.into_iter().map(|(_, x)| self.point(x)).collect())
    }

    /// A shortest nonzero vector, exact. Among minimizers, the one whose first
    /// nonzero coordinate is positive and comes earliest, then lexicographically
    /// least (so `ℤ^n` gives `e_1`).
    pub fn shortest_vector(&self, caps: &Caps) -> Result<LatticePoint> {
        Ok(self.minimal_vectors(caps)?.remove(0))
    }

    /// Exact `λ_1², …, λ_upto²` (scale included, dilation excluded).
    pub fn successive_minima(&self, upto: usize, caps: &Caps) -> Result<Vec<Ratio<i128>>> {
        self.check_rank_cap(caps.svp_rank)?;
        if upto == 0 || upto > self.rank() {
            return Err(Error::InvalidParameter(format!("upto must be in 1..={}", self.rank())));
        }
        let bound = self.reduced_diagonal()[upto - 1];
        let pts = self.short_points(bound, caps)?;
        let mut tracker = RankTracker::new();
        let mut out = Vec::with_capacity(upto);
        for pt in pts {
            if tracker.insert(&pt.coords) {
                out.push(pt.sqnorm);
                if out.len() == upto {
                    break;
                }
            }
        }
        Ok(out)
    }

    /// Nonzero points with `xᵀGx ≤ bound`, one of each `±` pair (sign-normalised),
    /// sorted by form and then by the tie-break order.
    pub fn short_points(&self, bound: i128, caps: &Caps) -> Result<Vec<LatticePoint>> {
        let e = Enumerator::new(&self.gram);
        let mut pts: Vec<(i128, (usize, Vec<i64>))> = Vec::new();
        e.run(bound, caps.points, true, &mut |x, f| {
            pts.push((f, tie_key(x)));
            Visit::Continue
        })
        .map_err(|Overflow| Error::CapExceeded {
            what: "short vector enumeration",
            needed: format!("more than {}", caps.points),
            cap: caps.points,
        })?;
        pts.sort();
        Ok(pts.into_iter().map(|(_, (_, x))| self.point(x)).collect())
    }

    /// Sorted diagonal of an LLL-reduced Gram: the `i`-th entry bounds `λ_i²` (form units).
    pub fn reduced_diagonal(&self) -> Vec<i128> {
        Enumerator::new(&self.gram).sorted_diagonal()
    }

    /// Calls `f(coords, sqnorm)` for every nonzero point of true norm at most `r`.
    pub fn visit_points(&self, r: f64, caps: &Caps, f: &mut dyn FnMut(&[i64], f64)) -> Result<u64> {
        let s = self.point_sandwich(r, self.covering_radius_bound());
        if s.lower > caps.points as f64 {
            return Err(Error::PointCapExceeded { cap: caps.points, lower: s.lower, upper: s.upper });
        }
        let e = Enumerator::new(&self.gram);
        let nf = self.norm_factor();
        e.run(self.form_bound(r), caps.points, false, &mut |x, form| {
            f(x, form as f64 * nf);
            Visit::Continue
        })
        .map_err(|Overflow| overflow_to_error(self, r, caps))
    }

    /// Number of nonzero (or primitive) points with norm at most `r`.
    pub fn count_points(&self, r: f64, primitive_only: bool, caps: &Caps) -> Result<u64> {
        let mut n = 0u64;
        self.visit_points(r, caps, &mut |x, _| {
            if !primitive_only || crate::arith::gcd_slice(x) == 1 {
                n += 1;
            }
        })?;
        Ok(n)
    }

    /// Nearest-plane covering bound `½ sqrt(Σ ‖b_i*‖²)` over the LLL basis.
    pub fn covering_radius_bound(&self) -> f64 {
        0.5 * self.gram_schmidt_sqnorms().iter().sum::<f64>().sqrt()
    }

    /// Transference covering bound `m / (2 λ_1(L*))`.
    pub fn covering_radius_bound_dual(&self, caps: &Caps) -> Result<f64> {
        let d = self.dual()?;
        let v = d.shortest_vector(caps)?;
        Ok(self.rank() as f64 / (2.0 * d.real_sqnorm(&v).sqrt()))
    }

    /// The smaller of the two covering bounds (the dual one only when its SVP is feasible).
    pub fn covering_radius_bound_best(&self, caps: &Caps) -> f64 {
        let np = self.covering_radius_bound();
        self.covering_radius_bound_dual(caps).map_or(np, |b| b.min(np))
    }

    pub fn point_sandwich(&self, r: f64, l0: f64) -> PointSandwich {
        let m = self.rank() as f64;
        let base = ln_unit_ball_volume(self.rank()) - self.ln_volume();
        let lower = if r > l0 { (base + m * (r - l0).ln()).exp() } else { 0.0 };
        let upper = (base + m * (r + l0).ln()).exp();
        PointSandwich { r, l0, lower, upper }
    }

    /// Upper bound on `Σ_{‖x‖ > R} exp(-tau ‖x‖²)` from shell counts.
    pub fn gaussian_tail_bound(&self, tau: f64, radius: f64, l0: f64) -> f64 {
        let m = self.rank() as f64;
        let base = ln_unit_ball_volume(self.rank()) - self.ln_volume();
        let h = 0.1 / tau.sqrt();
        let mut total = 0.0;
        let mut prev = f64::NEG_INFINITY;
        for j in 0..1_000_000 {
            let t0 = radius + j as f64 * h;
            let ln_term = base + m * (t0 + h + l0).ln() - tau * t0 * t0;
            total += ln_term.exp();
            if ln_term < prev && ln_term < total.ln() - 40.0 {
                break;
            }
            prev = ln_term;
        }
        total
    }

    /// Smallest radius (on a geometric grid) whose Gaussian tail bound is below `eps`.
    pub fn gaussian_radius(&self, tau: f64, eps: f64, l0: f64) -> f64 {
        let mut r = l0.max(1.0 / tau.sqrt());
        while self.gaussian_tail_bound(tau, r, l0) > eps {
            r *= 1.05;
        }
        r
    }

    /// `Θ(tau) = Σ_x exp(-tau ‖x‖²)` including the origin, with tail below `eps`.
    pub fn theta_series(&self, tau: f64, eps: f64, caps: &Caps) -> Result<f64> {
        if !(tau > 0.0) {
            return Err(Error::InvalidParameter("tau must be positive".into()));
        }
        Ok(1.0 + self.sum_test_function(&TestFunction::Gaussian { tau }, false, eps, caps)?)
    }

    /// `Σ f(x)` over nonzero (or primitive) points. Non-compact functions are
    /// truncated where the tail bound falls below `eps`.
    pub fn sum_test_function(&self, f: &TestFunction, primitive_only: bool, eps: f64, caps: &Caps) -> Result<f64> {
        f.validate()?;
        let radius = match (f.support_radius(), f) {
            (Some(r), _) => r,
            (None, TestFunction::Gaussian { tau }) => {
                self.gaussian_radius(*tau, eps, self.covering_radius_bound())
            }
            _ => unreachable!("only the Gaussian has unbounded support"),
        };
        let mut terms = Vec::new();
        self.visit_points(radius, caps, &mut |x, sq| {
            if !primitive_only || crate::arith::gcd_slice(x) == 1 {
                terms.push(f.eval_sq(sq));
            }
        })?;
        // sum small terms first
        terms.sort_by(|a, b| a.total_cmp(b));
        Ok(terms.iter().sum())
    }

    pub fn density_report(&self, upto: usize, caps: &Caps) -> Result<DensityReport> {
        let m = self.rank();
        let minima = self.successive_minima(upto.clamp(1, m), caps)?;
        let nf = self.dilation * self.dilation;
        let lambdas: Vec<f64> = minima
            .iter()
            .map(|q| (*q.numer() as f64 / *q.denom() as f64 * nf).sqrt())
            .collect();
        let ln_v = self.ln_volume();
        let ln_vm = ln_unit_ball_volume(m);
        let mf = m as f64;
        let delta_of = |l: f64| (ln_vm + mf * (l / 2.0).ln() - ln_v).exp();
        let l1 = lambdas[0];
        let rho_eff = ((ln_v - ln_vm) / mf).exp();
        Ok(DensityReport {
            rank: m,
            volume: ln_v.exp(),
            lambda1: l1,
            packing_density: delta_of(l1),
            hermite: l1 / (ln_v / mf).exp(),
            successive_densities: lambdas.iter().map(|&l| delta_of(l)).collect(),
            packing_efficiency: (l1 / 2.0) / rho_eff,
        })
    }
}
