use hlawka::cyclotomic::{craig_parameter_schedule, k_successive_minima, split_primes, CycField};
use hlawka::effective::{effective_plan, ln_density_effective, packing_efficiency_goal, point_sandwich, table1_rows, BaseKind, PlanConstants};
use hlawka::ensemble::{average_sum_f, loeliger_lhs_rhs, theta_average, EnsembleMode, EnsembleSpec};
use hlawka::galois::{enumerate_codes, enumerate_free_modules, gaussian_binomial, rref, sample_code};
use hlawka::quaternion::{hurwitz_reduction, lipschitz_reduction, noninvertible_norm_check, HurwitzIso, Quat};
use hlawka::{Caps, IntLattice, LinearCode, TestFunction};
use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;

use crate::input;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(out: &mut Vec<Check>, name: &'static str, f: impl FnOnce() -> Result<(bool, String), String>) {
    let (pass, detail) = f().unwrap_or_else(|e| (false, e));
    out.push(Check { name, pass, detail });
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn lattice(caps: &Caps, out: &mut Vec<Check>) {
    check(out, "Z^4 has volume 1", || {
        let v = IntLattice::integer(4).volume();
        Ok(((v - 1.0).abs() < 1e-15, format!("{v}")))
    });
    check(out, "dilation multiplies volume by beta^m", || {
        let l = input::lattice("a2").map_err(|_| "a2".to_string())?;
        let v = l.clone().dilate(3.0).map_err(e)?.volume() / l.volume();
        Ok(((v - 9.0).abs() < 1e-12, format!("{v}")))
    });
    check(out, "LLL leaves the identity unchanged", || {
        let (r, u) = IntLattice::integer(3).lll_reduce(99, 100).map_err(e)?;
        Ok((r.gram() == IntLattice::integer(3).gram() && u == *IntLattice::integer(3).gram(), String::new()))
    });
    check(out, "Z^n shortest vector is e_1 with norm 1", || {
        let l = IntLattice::integer(5);
        let v = l.shortest_vector(caps).map_err(e)?;
        Ok((v.coords == [1, 0, 0, 0, 0] && v.sqnorm == 1.into(), format!("{:?}", v.coords)))
    });
    check(out, "Z^3 successive minima (1,1,1)", || {
        let m = IntLattice::integer(3).successive_minima(3, caps).map_err(e)?;
        Ok((m.iter().all(|x| *x == 1.into()), format!("{m:?}")))
    });
    check(out, "diag(1,4) successive minima (1,4)", || {
        let m = input::lattice("diag:1,4").map_err(|_| "diag".to_string())?.successive_minima(2, caps).map_err(e)?;
        Ok((m == [1.into(), 4.into()], format!("{m:?}")))
    });
    check(out, "no points below the first minimum", || {
        let c = input::lattice("e8").map_err(|_| "e8".to_string())?.count_points(1.4, false, caps).map_err(e)?;
        Ok((c == 0, c.to_string()))
    });
    check(out, "theta tends to 1 for large tau", || {
        let t = IntLattice::integer(3).theta_series(200.0, 1e-15, caps).map_err(e)?;
        Ok(((t - 1.0).abs() < 1e-12, t.to_string()))
    });
    check(out, "theta is invariant under (beta L, tau/beta^2)", || {
        let l = input::lattice("a2").map_err(|_| "a2".to_string())?;
        let a = l.theta_series(1.0, 1e-14, caps).map_err(e)?;
        let b = l.clone().dilate(2.0).map_err(e)?.theta_series(0.25, 1e-14, caps).map_err(e)?;
        Ok(((a - b).abs() < 1e-10, format!("{a} {b}")))
    });
    check(out, "Z^2 packing density pi/4", || {
        let d = IntLattice::integer(2).density_report(1, caps).map_err(e)?.packing_density;
        Ok(((d - std::f64::consts::FRAC_PI_4).abs() < 1e-12, d.to_string()))
    });
    check(out, "ball sum equals point count", || {
        let l = input::lattice("d4").map_err(|_| "d4".to_string())?;
        let s = l.sum_test_function(&TestFunction::BallIndicator { r: 2.0 }, false, 0.0, caps).map_err(e)?;
        let c = l.count_points(2.0, false, caps).map_err(e)?;
        Ok((s == c as f64, format!("{s} {c}")))
    });
    check(out, "gaussian sum equals theta minus one", || {
        let l = IntLattice::integer(2);
        let s = l.sum_test_function(&TestFunction::Gaussian { tau: 1.0 }, false, 1e-14, caps).map_err(e)?;
        let t = l.theta_series(1.0, 1e-14, caps).map_err(e)?;
        Ok(((s - (t - 1.0)).abs() < 1e-10, format!("{s} {t}")))
    });
}

fn reduce(caps: &Caps, out: &mut Vec<Check>) {
    check(out, "rref of the identity over F_5", || {
        let id = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let (r, k) = rref(&id, 5);
        Ok((r == id && k == 3, String::new()))
    });
    check(out, "dependent rows over F_3", || {
        let (r, k) = rref(&vec![vec![1, 1], vec![2, 2]], 3);
        Ok((r == vec![vec![1, 1]] && k == 1, format!("{r:?}")))
    });
    check(out, "unique 2-dim subspace of F_2^2", || {
        let c = sample_code(2, 2, 2, 17).map_err(e)?;
        Ok((c.generator() == &vec![vec![1, 0], vec![0, 1]], String::new()))
    });
    check(out, "sampling is deterministic", || {
        Ok((sample_code(7, 5, 2, 3).map_err(e)? == sample_code(7, 5, 2, 3).map_err(e)?, String::new()))
    });
    check(out, "one (n, n) code and [n, 0] = 1", || {
        let c = enumerate_codes(3, 3, 3, 10).map_err(e)?.len();
        Ok((c == 1 && gaussian_binomial(4, 0, 5) == BigUint::from(1u8), c.to_string()))
    });
    check(out, "one free rank-1 module in M2(F_2)^1", || {
        let c = enumerate_free_modules(2, 1, 1, 100).map_err(e)?.len();
        Ok((c == 1, c.to_string()))
    });
    check(out, "Z^n kernel has first minimum p", || {
        let red = input::natural(IntLattice::integer(3), 7).map_err(|_| "natural".to_string())?;
        let (_, cert) = red.kernel_lattice(caps).map_err(e)?;
        Ok(((cert.lambda1 - 7.0).abs() < 1e-12 && (cert.ratio - 1.0).abs() < 1e-12, cert.lambda1_sq))
    });
    check(out, "A2 kernel at p = 5 is 25 A2", || {
        let a2 = input::lattice("a2").map_err(|_| "a2".to_string())?;
        let (k, _) = input::natural(a2.clone(), 5).map_err(|_| "natural".to_string())?.kernel_lattice(caps).map_err(e)?;
        let ratio = k.volume() / a2.volume();
        let lam = k.shortest_vector(caps).map_err(e)?.sqnorm;
        Ok(((ratio - 25.0).abs() < 1e-9 && lam == 50.into(), format!("{ratio} {lam}")))
    });
    check(out, "lift of the full space is the base, of {0} the kernel", || {
        let red = input::natural(IntLattice::integer(2), 3).map_err(|_| "natural".to_string())?;
        let full = red.lift_code(&LinearCode::full(3, 2).map_err(e)?).map_err(e)?;
        let zero = red.lift_code(&LinearCode::zero(3, 2).map_err(e)?).map_err(e)?;
        Ok(((full.volume() - 1.0).abs() < 1e-12 && (zero.volume() - 9.0).abs() < 1e-9, String::new()))
    });
    check(out, "normalising Z^2 to volume 4 dilates by 2", || {
        let (_, beta) = IntLattice::integer(2).normalize(4.0).map_err(e)?;
        Ok(((beta - 2.0).abs() < 1e-12, beta.to_string()))
    });
}

fn cyclo(caps: &Caps, out: &mut Vec<Check>) {
    check(out, "Tr(1) = q - 1 and Tr(zeta) = -1", || {
        let k = CycField::new(11).map_err(e)?;
        Ok((k.trace(&k.one()) == 10 && k.trace(&k.zeta_pow(1)) == -1, String::new()))
    });
    check(out, "Craig schedule", || {
        let l = craig_parameter_schedule(100);
        let want = (100.0 / (2.0 * 101f64.ln())).round() as usize;
        Ok((l == want, l.to_string()))
    });
    check(out, "split primes carry roots of order q", || {
        let ps = split_primes(7, 4, 2, 10_000).map_err(e)?;
        let ok = ps.iter().all(|&(p, g)| g % p != 1 && hlawka::arith::pow_mod(g, 7, p) == 1);
        Ok((ok, format!("{ps:?}")))
    });
    check(out, "t = 1 ideal kernel has index p", || {
        let red = hlawka::cyclotomic::ideal_reduction(5, 1, 11, 3).map_err(e)?;
        let (k, _) = red.kernel_lattice(caps).map_err(e)?;
        let ratio = k.volume() / red.base().volume();
        Ok(((ratio - 11.0).abs() < 1e-9, ratio.to_string()))
    });
    check(out, "K-minima of Z[zeta_5]^2 equal lambda_1", || {
        let k = CycField::new(5).map_err(e)?;
        let lat = hlawka::cyclotomic::trace_lattice(5, 2).map_err(e)?;
        let km = k_successive_minima(&k, &lat, 2, caps).map_err(e)?;
        let l1 = lat.shortest_vector(caps).map_err(e)?.sqnorm;
        Ok((km.values.iter().all(|v| *v == l1), format!("{:?}", km.values)))
    });
    check(out, "acceptance threshold 2q/(q-1) at eps = 0", || {
        let t = hlawka::cyclotomic::rogers_threshold(7, 0.0);
        Ok(((t - 14.0 / 6.0).abs() < 1e-12, t.to_string()))
    });
}

fn quat(caps: &Caps, out: &mut Vec<Check>) {
    for p in [3u64, 7, 11] {
        check(out, "Hurwitz isomorphism relations", || {
            let iso = HurwitzIso::new(p).map_err(e)?;
            Ok((iso.verify(), format!("p = {p}")))
        });
    }
    check(out, "phi(1) is the identity and det phi(j) = nrd(j)", || {
        let red = hurwitz_reduction(7, 1).map_err(e)?;
        let one = red.image(&Quat::one());
        let j = red.image(&Quat::j());
        Ok((one == hlawka::galois::MatRing2::identity(7) && j.det() == 1, String::new()))
    });
    check(out, "kernel volume p^{4m} V(base)", || {
        let red = lipschitz_reduction(5, 2).map_err(e)?;
        let ratio = red.kernel().map_err(e)?.volume() / red.base().volume();
        Ok(((ratio - 5f64.powi(8)).abs() < 1e-3, ratio.to_string()))
    });
    check(out, "unit counts 8 and 24", || Ok((Quat::lipschitz_units().len() == 8 && Quat::hurwitz_units().len() == 24, String::new())));
    check(out, "singular images have norm divisible by p (p = 5)", || {
        let r = noninvertible_norm_check(5, 5).map_err(e)?;
        Ok((r.pass, format!("checked {}, singular {}", r.checked, r.singular)))
    });
    check(out, "full-ring module lifts to the base", || {
        let red = hurwitz_reduction(3, 1).map_err(e)?;
        let full = enumerate_free_modules(3, 1, 1, 10_000).map_err(e)?;
        let lat = red.lift(&full[0]).map_err(e)?;
        Ok(((lat.volume() - red.base().volume()).abs() < 1e-12 && red.unit_closed(&lat, caps).map_err(e)?, String::new()))
    });
}

fn ensemble(caps: &Caps, out: &mut Vec<Check>) {
    check(out, "p = 2, n = 2, k = 1, g = 1 gives 1 = 1", || {
        let g = |_: &[u64]| BigRational::from_integer(1.into());
        let (l, r) = loeliger_lhs_rhs(2, 2, 1, &g, caps).map_err(e)?;
        Ok((l == r && l == BigRational::from_integer(1.into()), format!("{l} {r}")))
    });
    check(out, "empty ball averages to zero", || {
        let red = input::natural(IntLattice::integer(4), 2).map_err(|_| "natural".to_string())?;
        let spec = EnsembleSpec::new(red, 2, 1.0, EnsembleMode::Exhaustive).map_err(e)?;
        let r = 0.5 * spec.beta();
        let rep = average_sum_f(&spec, &TestFunction::BallIndicator { r }, true, 0.0, caps).map_err(e)?;
        Ok((rep.estimate == 0.0, rep.estimate.to_string()))
    });
    check(out, "theta average tends to 1", || {
        let red = input::natural(IntLattice::integer(2), 3).map_err(|_| "natural".to_string())?;
        let spec = EnsembleSpec::new(red, 1, 1.0, EnsembleMode::Exhaustive).map_err(e)?;
        let rep = theta_average(&spec, 1e6, 1e-15, caps).map_err(e)?;
        Ok(((rep.estimate - 1.0).abs() < 1e-5 && (rep.target - 1.0).abs() < 1e-5, format!("{} {}", rep.estimate, rep.target)))
    });
    check(out, "certificate arithmetic at m = 2", || {
        let (eps, l) = (0.3, 2u64);
        let r = hlawka::ensemble::mh_radius(2, eps, l, 1.0);
        let lhs = std::f64::consts::PI * (r / 2.0).powi(2);
        let rhs = l as f64 * (1.0 - eps) * hlawka::special::zeta(2) / 4.0;
        Ok(((lhs - rhs).abs() < 1e-12, format!("{lhs} {rhs}")))
    });
}

fn effective(caps: &Caps, out: &mut Vec<Check>) {
    check(out, "sandwich lower bound near zero just above l0", || {
        let s = point_sandwich(&IntLattice::integer(2), 0.7072, None, caps).map_err(e)?;
        Ok((s.lower < 1e-6 && s.holds == Some(true), format!("{}", s.lower)))
    });
    check(out, "sandwich is invariant under dilation", || {
        let a = point_sandwich(&IntLattice::integer(2), 5.0, None, caps).map_err(e)?;
        let b = point_sandwich(&IntLattice::integer(2).dilate(3.0).map_err(e)?, 15.0, None, caps).map_err(e)?;
        Ok((a.exact == b.exact && (a.lower - b.lower).abs() < 1e-9 && (a.upper - b.upper).abs() < 1e-9, String::new()))
    });
    check(out, "density bound tends to (1-eps)/2^(m-1)", || {
        let d = ln_density_effective(20, 20, 7, 1e300, 2.0, 0.3);
        let want = 0.7f64.ln() - 19.0 * std::f64::consts::LN_2;
        Ok(((d - want).abs() < 1e-9, d.to_string()))
    });
    check(out, "Craig to Construction A family-size quotient shrinks", || {
        let rows = table1_rows(&[1e3, 1e6]);
        let q = |i: usize| rows[4 * i + 3].log_family_size / rows[4 * i].log_family_size;
        Ok((q(1) < q(0), format!("{} {}", q(0), q(1))))
    });
    check(out, "Z^1 packing efficiency is 1", || {
        let r = packing_efficiency_goal(&IntLattice::integer(1), 0.0, caps).map_err(e)?.ratio;
        Ok(((r - 1.0).abs() < 1e-12, r.to_string()))
    });
    check(out, "Z^100 plan at rate 1/3 picks 1009", || {
        let plan = effective_plan(BaseKind::Zn { n: 100 }, 1.0 / 3.0, PlanConstants::default()).map_err(e)?;
        Ok((plan.p_chosen == 1009, plan.p_chosen.to_string()))
    });
}

pub fn run(group: &str, caps: &Caps) -> Vec<Check> {
    let mut out = Vec::new();
    match group {
        "lattice" => lattice(caps, &mut out),
        "reduce" => reduce(caps, &mut out),
        "cyclo" => cyclo(caps, &mut out),
        "quat" => quat(caps, &mut out),
        "ensemble" => ensemble(caps, &mut out),
        "effective" => effective(caps, &mut out),
        _ => unreachable!("unknown group"),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_selftest_passes() {
        let caps = Caps::default();
        for g in ["lattice", "reduce", "cyclo", "quat", "ensemble", "effective"] {
            for c in run(g, &caps) {
                assert!(c.pass, "{g}: {} ({})", c.name, c.detail);
            }
        }
    }
}
