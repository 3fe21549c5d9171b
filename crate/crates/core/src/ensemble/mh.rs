use rayon::prelude::*;
use serde::Serialize;

use super::{EnsembleSpec, Member};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::lattice::IntLattice;
use crate::special::{ln_unit_ball_volume, zeta};

/// Density certificate recomputed from an exact shortest vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MhCertificate {
    /// exact `λ₁²` of the undilated lift, as `n/d`
    pub lambda1_sq_exact: String,
    pub beta: f64,
    pub lambda1: f64,
    pub radius: f64,
    pub density: f64,
    /// `L (1-ε) / 2^m`
    pub bound: f64,
    /// `L (1-ε) ζ(m) / 2^m`, implied by `λ₁ ≥ r`
    pub zeta_bound: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MhReport {
    pub m: usize,
    pub eps: f64,
    pub multiplicity: u64,
    /// `vol B_r = L (1-ε) ζ(m) V`
    pub radius: f64,
    pub scanned: u64,
    pub hit: bool,
    /// index of the first hit (enumeration index or trial number)
    pub hit_index: Option<u64>,
    pub hit_seed: Option<u64>,
    /// smallest number of primitive points (both signs) seen in `B_r`
    pub min_count: u64,
    pub lattice: Option<IntLattice>,
    pub certificate: Option<MhCertificate>,
}

/// Radius with `vol B_r = L (1-ε) ζ(m) V`.
pub fn mh_radius(m: usize, eps: f64, multiplicity: u64, volume: f64) -> f64 {
    let ln = (multiplicity as f64 * (1.0 - eps) * zeta(m as u32) * volume).ln() - ln_unit_ball_volume(m);
    (ln / m as f64).exp()
}

/// Scans the ensemble in order for a lattice without primitive points in
/// `B_r`. The first hit is certified by an independent exact SVP.
pub fn mh_search(spec: &EnsembleSpec, eps: f64, multiplicity: u64, caps: &Caps) -> Result<MhReport> {
    spec.validate()?;
    if !(eps > 0.0 && eps < 1.0) || multiplicity == 0 {
        return Err(Error::InvalidParameter("need 0 < eps < 1 and L >= 1".into()));
    }
    let m = spec.m();
    if m < 2 {
        return Err(Error::InvalidParameter("rank must be at least 2".into()));
    }
    let radius = mh_radius(m, eps, multiplicity, spec.volume);
    let codes = spec.exhaustive_codes(caps)?;
    let members = spec.members(&codes);
    let mut min_count = u64::MAX;
    let mut scanned = 0u64;
    let mut found: Option<(Member, IntLattice)> = None;
    let batch = rayon::current_num_threads().max(1) * 4;
    for chunk in members.chunks(batch) {
        let counts: Vec<(u64, IntLattice)> = chunk
            .par_iter()
            .map(|mem| {
                let lat = spec.lattice(mem)?;
                Ok((lat.count_points(radius, true, caps)?, lat))
            })
            .collect::<Result<_>>()?;
        for (mem, (c, lat)) in chunk.iter().zip(counts) {
            scanned += 1;
            min_count = min_count.min(c);
            if c == 0 {
                found = Some((*mem, lat));
                break;
            }
        }
        if found.is_some() {
            break;
        }
    }
    let mut report = MhReport {
        m,
        eps,
        multiplicity,
        radius,
        scanned,
        hit: found.is_some(),
        hit_index: None,
        hit_seed: None,
        min_count,
        lattice: None,
        certificate: None,
    };
    if let Some((mem, lat)) = found {
        let (idx, seed) = match mem {
            Member::Code(i, _) => (i, None),
            Member::Seed(i, s) => (i, Some(s)),
        };
        report.hit_index = Some(idx);
        report.hit_seed = seed;
        report.certificate = Some(certify(&lat, radius, eps, multiplicity, caps)?);
        report.lattice = Some(lat);
    }
    Ok(report)
}

/// `Δ = vol B_{λ₁/2} / V` from an exact SVP, compared with `L(1-ε)/2^m`.
pub fn certify(lat: &IntLattice, radius: f64, eps: f64, multiplicity: u64, caps: &Caps) -> Result<MhCertificate> {
    let m = lat.rank();
    let sv = lat.shortest_vector(caps)?;
    let lambda1 = lat.real_sqnorm(&sv).sqrt();
    let mf = m as f64;
    let ln_density = ln_unit_ball_volume(m) + mf * (lambda1 / 2.0).ln() - lat.ln_volume();
    let ln_bound = (multiplicity as f64 * (1.0 - eps)).ln() - mf * std::f64::consts::LN_2;
    Ok(MhCertificate {
        lambda1_sq_exact: crate::reduction::ratio_string(&sv.sqnorm),
        beta: lat.dilation(),
        lambda1,
        radius,
        density: ln_density.exp(),
        bound: ln_bound.exp(),
        zeta_bound: (ln_bound + zeta(m as u32).ln()).exp(),
        ok: ln_density >= ln_bound && lambda1 >= radius * (1.0 - 1e-12),
    })
}

#[cfg(test)]
mod tests {
    use super::super::EnsembleMode;
    use super::*;
    use crate::reduction::Reduction;

    #[test]
    fn radius_formula() {
        // ℤ^8 setting: r^8 V_8 = 2 · 0.7 · ζ(8)
        let r = mh_radius(8, 0.3, 2, 1.0);
        assert!((r - 0.8759).abs() < 1e-4, "{r}");
        let v8 = std::f64::consts::PI.powi(4) / 24.0;
        assert!((v8 * r.powi(8) - 1.4 * zeta(8)).abs() < 1e-12);
    }

    #[test]
    fn certificate_is_self_consistent() {
        let caps = Caps::default();
        let red = Reduction::natural(IntLattice::integer(4), 13).unwrap();
        let spec = EnsembleSpec::new(red, 2, 1.0, EnsembleMode::MonteCarlo { trials: 200, seed: 4 }).unwrap();
        let rep = mh_search(&spec, 0.3, 2, &caps).unwrap();
        assert!(rep.hit);
        let c = rep.certificate.unwrap();
        assert!(c.ok);
        assert!(c.lambda1 >= rep.radius);
        // λ₁ ≥ r gives vol B_{λ₁/2} ≥ L(1-ε)ζ(m)V / 2^m
        assert!(c.density >= c.zeta_bound * (1.0 - 1e-12));
        assert!((rep.lattice.unwrap().volume() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn exhaustive_scan_reports_minimum() {
        let caps = Caps::default();
        // tiny p: every lattice is thick in short vectors
        let red = Reduction::natural(IntLattice::integer(2), 2).unwrap();
        let spec = EnsembleSpec::new(red, 1, 1.0, EnsembleMode::Exhaustive).unwrap();
        let rep = mh_search(&spec, 0.01, 2, &caps).unwrap();
        assert_eq!(rep.scanned, if rep.hit { rep.hit_index.unwrap() + 1 } else { 3 });
        if !rep.hit {
            assert!(rep.min_count > 0);
        }
    }
}
