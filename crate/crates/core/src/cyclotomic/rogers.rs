use rayon::prelude::*;
use serde::Serialize;

use super::{ideal_reduction, k_successive_minima, roots_of_order_q, CycField};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::galois::{enumerate_codes, gaussian_binomial, sample_code, LinearCode};
use crate::lattice::{IntLattice, TestFunction};
use crate::special::{ln_unit_ball_volume, zeta};
use num_traits::ToPrimitive;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RogersParams {
    pub q: u64,
    pub t: usize,
    pub primes: Vec<u64>,
    pub k: usize,
    pub trials: u64,
    pub seed: u64,
    pub eps: f64,
}

impl RogersParams {
    pub fn new(q: u64, t: usize, primes: Vec<u64>, k: usize) -> Self {
        RogersParams { q, t, primes, k, trials: 10_000, seed: 0, eps: 0.5 }
    }
}

/// One lifted lattice of the search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RogersRow {
    pub seed: u64,
    pub p: u64,
    pub code_id: u64,
    pub sum_f: f64,
    pub accepted: bool,
    /// squared `λ_i^K` of the volume-one lattice (acceptors only)
    pub lambda_k_sq: Vec<f64>,
    /// `(∏ Δ_i^K)^{1/t}` (acceptors only)
    pub density_product_lhs: Option<f64>,
    pub rhs: f64,
}

impl RogersRow {
    pub const CSV_HEADER: &'static str = "seed,p,code_id,sum_f,accepted,lambda_k_sq,density_product_lhs,rhs";

    pub fn csv(&self) -> String {
        let lk: Vec<String> = self.lambda_k_sq.iter().map(|x| format!("{x:.12}")).collect();
        format!(
            "{},{},{},{:.12},{},{},{},{:.12e}",
            self.seed,
            self.p,
            self.code_id,
            self.sum_f + 0.0,
            self.accepted,
            lk.join(";"),
            self.density_product_lhs.map_or(String::new(), |x| format!("{x:.12e}")),
            self.rhs
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RogersReport {
    pub params: RogersParams,
    /// radius of the test function for volume-one lattices
    pub r: f64,
    /// acceptance threshold `(1-ε) r(K) / n`
    pub threshold: f64,
    pub rhs: f64,
    pub rows: Vec<RogersRow>,
    pub accepted_any: bool,
    /// best acceptor (largest lhs), else the lattice with the smallest sum
    pub best_row: usize,
    pub min_sum: f64,
    pub best_lattice: IntLattice,
}

/// Acceptance threshold `(1-ε) r(K) / n = (1-ε) 2q / (q-1)`.
pub fn rogers_threshold(q: u64, eps: f64) -> f64 {
    (1.0 - eps) * 2.0 * q as f64 / (q - 1) as f64
}

/// Radius `r` with `∫ f = r(K) ζ(nt) (1-ε) / n` for the step-log function in dimension `nt`.
pub fn rogers_radius(q: u64, t: usize, eps: f64) -> f64 {
    let m = (q as usize - 1) * t;
    let tf = t as f64;
    let e = std::f64::consts::E;
    let ln_rm = (2.0 * q as f64 * zeta(m as u32) * (1.0 - eps) * tf / (e * (1.0 - (-tf).exp()))).ln()
        - ln_unit_ball_volume(m);
    (ln_rm / m as f64).exp()
}

/// `r(K) t ζ(nt) (1-ε) / (e (1 - e^{-t}) 2^{nt})`.
pub fn rogers_rhs(q: u64, t: usize, eps: f64) -> f64 {
    let m = (q as usize - 1) * t;
    let tf = t as f64;
    let e = std::f64::consts::E;
    2.0 * q as f64 * tf * zeta(m as u32) * (1.0 - eps) / (e * (1.0 - (-tf).exp())) / 2f64.powi(m as i32)
}

/// Lifts codes through `ℤ[ζ_q]^t → F_p^t`, normalises to volume one and keeps
/// lattices whose primitive step-log sum is at most `(1-ε) r(K)/n`. For each
/// acceptor the `K`-successive minima give `(∏ Δ_i^K)^{1/t}`.
///
/// All codes are used when there are at most `trials` of them; otherwise trial
/// `i` samples a code with seed `seed ^ i`.
pub fn rogers_density_search(params: &RogersParams, caps: &Caps) -> Result<RogersReport> {
    let RogersParams { q, t, k, trials, seed, eps, .. } = *params;
    let field = CycField::new(q)?;
    if t < 2 {
        return Err(Error::InvalidParameter("the search needs t >= 2".into()));
    }
    if k > t {
        return Err(Error::InvalidParameter(format!("code dimension {k} exceeds t = {t}")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter("eps must lie in (0, 1)".into()));
    }
    if params.primes.is_empty() || trials == 0 {
        return Err(Error::InvalidParameter("need at least one prime and one trial".into()));
    }
    let n = field.degree();
    let r = rogers_radius(q, t, eps);
    let f = TestFunction::RogersStepLog { r, t: t as u32, n: n as u32 };
    let threshold = rogers_threshold(params.q, params.eps);
    let rhs = rogers_rhs(q, t, eps);

    let mut rows: Vec<RogersRow> = Vec::new();
    let mut lattices: Vec<IntLattice> = Vec::new();
    for &p in &params.primes {
        let g = *roots_of_order_q(q, p)
            .first()
            .ok_or_else(|| Error::InvalidParameter(format!("{p} is not a prime ≡ 1 mod {q}")))?;
        let red = ideal_reduction(q, t, p, g)?;
        let total = gaussian_binomial(t, k, p);
        let jobs: Vec<(u64, u64, Option<LinearCode>)> = if total.to_u64().is_some_and(|c| c <= trials) {
            enumerate_codes(p, t, k, caps.codes)?
                .into_iter()
                .enumerate()
                .map(|(i, c)| (seed, i as u64, Some(c)))
                .collect()
        } else {
            (0..trials).map(|i| (seed ^ i, i, None)).collect()
        };
        let done: Vec<Result<(RogersRow, IntLattice)>> = jobs
            .into_par_iter()
            .map(|(s, id, code)| {
                let code = match code {
                    Some(c) => c,
                    None => sample_code(p, t, k, s)?,
                };
                let (lat, beta) = red.lift_code(&code)?.normalize(1.0)?;
                let sum_f = lat.sum_test_function(&f, true, 0.0, caps)?;
                let accepted = sum_f <= threshold;
                let (lambda_k_sq, lhs) = if accepted {
                    let km = k_successive_minima(&field, &lat, t, caps)?;
                    let lens = km.lengths(beta);
                    let m = n * t;
                    let ln_lhs = ln_unit_ball_volume(m) + n as f64 * lens.iter().map(|l| l.ln()).sum::<f64>()
                        - m as f64 * std::f64::consts::LN_2;
                    (lens.iter().map(|l| l * l).collect(), Some(ln_lhs.exp()))
                } else {
                    (Vec::new(), None)
                };
                let row = RogersRow { seed: s, p, code_id: id, sum_f, accepted, lambda_k_sq, density_product_lhs: lhs, rhs };
                Ok((row, lat))
            })
            .collect();
        for d in done {
            let (row, lat) = d?;
            rows.push(row);
            lattices.push(lat);
        }
    }
    let min_idx = (0..rows.len()).min_by(|&a, &b| rows[a].sum_f.total_cmp(&rows[b].sum_f)).expect("nonempty");
    let best_acc = (0..rows.len())
        .filter(|&i| rows[i].accepted)
        .max_by(|&a, &b| rows[a].density_product_lhs.unwrap().total_cmp(&rows[b].density_product_lhs.unwrap()));
    let best_row = best_acc.unwrap_or(min_idx);
    Ok(RogersReport {
        params: params.clone(),
        r,
        threshold,
        rhs,
        accepted_any: best_acc.is_some(),
        best_row,
        min_sum: rows[min_idx].sum_f,
        best_lattice: lattices.swap_remove(best_row),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_integral() {
        let f = TestFunction::RogersStepLog { r: 1.0, t: 1, n: 1 };
        assert!((f.integral(1) - 2.0 * (std::f64::consts::E - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn radius_matches_integral() {
        for (q, t, eps) in [(5u64, 2usize, 0.5), (3, 3, 0.2)] {
            let r = rogers_radius(q, t, eps);
            let n = q as u32 - 1;
            let m = (n as usize) * t;
            let f = TestFunction::RogersStepLog { r, t: t as u32, n };
            let want = 2.0 * q as f64 * zeta(m as u32) * (1.0 - eps) / n as f64;
            assert!((f.integral(m) / want - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn threshold() {
        let f = CycField::new(7).unwrap();
        assert_eq!(f.roots_of_unity() as f64 / f.degree() as f64, 14.0 / 6.0);
    }

    #[test]
    fn acceptors_satisfy_product_bound() {
        let caps = Caps::default();
        let mut params = RogersParams::new(5, 2, vec![11, 31], 1);
        params.seed = 3;
        let rep = rogers_density_search(&params, &caps).unwrap();
        assert_eq!(rep.rows.len(), 12 + 32);
        for row in &rep.rows {
            assert_eq!(row.accepted, row.sum_f <= rep.threshold);
            if let Some(lhs) = row.density_product_lhs {
                assert!(lhs >= rep.rhs, "{lhs} < {}", rep.rhs);
                assert_eq!(row.lambda_k_sq.len(), 2);
            }
        }
        assert!(rep.min_sum <= rep.rows[rep.best_row].sum_f || rep.accepted_any);
        assert!((rep.best_lattice.volume() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn deterministic_and_sampled() {
        let caps = Caps::default();
        let mut params = RogersParams::new(3, 2, vec![7], 1);
        params.trials = 3;
        params.seed = 9;
        let a = rogers_density_search(&params, &caps).unwrap();
        let b = rogers_density_search(&params, &caps).unwrap();
        assert_eq!(a.rows, b.rows);
        assert_eq!(a.rows.iter().map(|r| r.seed).collect::<Vec<_>>(), vec![9, 8, 11]);
    }

    #[test]
    fn rejects_t_one() {
        let params = RogersParams::new(5, 1, vec![11], 1);
        assert!(rogers_density_search(&params, &Caps::default()).is_err());
    }
}
