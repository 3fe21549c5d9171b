use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::galois::{all_vectors, encode_vector, enumerate_free_modules, has_unit_coordinate, MatRing2};

/// One averaging check `E[g*(C)] ≤ |R|^k / |(R^m)^*| · g*(R^m)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GAverage {
    pub label: String,
    pub average: f64,
    pub bound: f64,
    pub ratio: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BalancedReport {
    pub p: u64,
    pub m: usize,
    pub k: usize,
    /// number of free rank-k codes
    pub codes: u64,
    /// `|C| = |R|^k`
    pub code_size: u64,
    /// `|(R^m)^*|`, vectors with a unit coordinate
    pub unit_vectors: u64,
    /// common number of codes containing each unit-bearing vector, if balanced
    pub l: Option<u64>,
    pub balanced: bool,
    /// `|C| · #codes ≥ L · |(R^m)^*|`
    pub counting_ok: bool,
    pub averages: Vec<GAverage>,
}

/// Squared norm of the balanced integer lift of the entries.
fn lift_sqnorm(v: &[MatRing2]) -> f64 {
    v.iter()
        .flat_map(|x| x.entries())
        .map(|e| {
            let p = v[0].p();
            let s = if 2 * e > p { e as f64 - p as f64 } else { e as f64 };
            s * s
        })
        .sum()
}

/// Tallies code membership of unit-bearing vectors over all free rank-`k`
/// submodules of `M_2(F_p)^m`, and evaluates the averaging bound for the
/// lifted squared norm and for `random_g` random subset indicators.
pub fn balanced_check(p: u64, m: usize, k: usize, random_g: usize, seed: u64, caps: &Caps) -> Result<BalancedReport> {
    let codes = enumerate_free_modules(p, m, k, caps.codes)?;
    p.checked_pow(4 * m as u32).filter(|&t| t <= caps.points).ok_or(Error::CapExceeded {
        what: "ambient module size",
        needed: format!("{p}^{}", 4 * m),
        cap: caps.points,
    })?;
    let unit_vecs: Vec<Vec<MatRing2>> = all_vectors(p, m).filter(|v| has_unit_coordinate(v)).collect();
    let index: std::collections::HashMap<u64, usize> =
        unit_vecs.iter().enumerate().map(|(i, v)| (encode_vector(v), i)).collect();
    let mut tally = vec![0u64; unit_vecs.len()];
    // per code, indices of its unit-bearing elements
    let members: Vec<Vec<usize>> = codes
        .iter()
        .map(|c| c.elements().iter().filter_map(|e| index.get(e).copied()).collect())
        .collect();
    for mem in &members {
        for &i in mem {
            tally[i] += 1;
        }
    }
    let l = tally.first().copied().filter(|&l| tally.iter().all(|&x| x == l));
    let code_size = p.pow(4 * k as u32);
    let n_codes = codes.len() as u64;
    let units = unit_vecs.len() as f64;
    let counting_ok = l.is_some_and(|l| code_size as u128 * n_codes as u128 >= l as u128 * unit_vecs.len() as u128);

    let mut gs: Vec<(String, Vec<f64>)> = vec![("lift_sqnorm".into(), unit_vecs.iter().map(|v| lift_sqnorm(v)).collect())];
    for i in 0..random_g {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ i as u64);
        gs.push((format!("subset_{i}"), unit_vecs.iter().map(|_| rng.gen_range(0..2) as f64).collect()));
    }
    let averages = gs
        .into_iter()
        .map(|(label, g)| {
            let g_star_full: f64 = g.iter().sum();
            let average = members.iter().map(|mem| mem.iter().map(|&i| g[i]).sum::<f64>()).sum::<f64>() / n_codes as f64;
            let bound = code_size as f64 / units * g_star_full;
            let ratio = if bound > 0.0 { average / bound } else { 0.0 };
            GAverage { label, average, bound, ratio, ok: average <= bound * (1.0 + 1e-12) }
        })
        .collect();
    Ok(BalancedReport {
        p,
        m,
        k,
        codes: n_codes,
        code_size,
        unit_vectors: unit_vecs.len() as u64,
        l,
        balanced: l.is_some(),
        counting_ok,
        averages,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_modules_over_m2_f2_are_balanced() {
        let rep = balanced_check(2, 2, 1, 10, 1, &Caps::default()).unwrap();
        assert!(rep.balanced && rep.counting_ok);
        // |GL_2(F_2)| = 6, units-bearing vectors: 256 - 10·10
        assert_eq!(rep.unit_vectors, 156);
        assert_eq!(rep.code_size, 16);
        assert_eq!(rep.averages.len(), 11);
        assert!(rep.averages.iter().all(|a| a.ok));
        // each code holds |C ∩ (R^2)^*| unit-bearing vectors; the tally must agree
        let l = rep.l.unwrap();
        assert!(rep.code_size * rep.codes >= l * rep.unit_vectors);
    }
}
