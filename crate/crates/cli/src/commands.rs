use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use hlawka::cyclotomic::{craig_lattice, craig_parameter_schedule, ideal_reduction, rogers_density_search, split_primes, RogersParams, RogersRow};
use hlawka::effective::{
    best_rate, craig_bounds, craig_hermite_exact, craig_rate, effective_plan, packing_efficiency_goal, point_sandwich,
    quaternion_plan, table1_rows, BaseKind, PlanConstants, Table1Row,
};
use hlawka::ensemble::{average_sum_f, loeliger_lhs_rhs, mh_search, theta_average, AverageReport, EnsembleMode};
use hlawka::galois::sample_code;
use hlawka::quaternion::{balanced_check, hurwitz_reduction, lipschitz_reduction, noninvertible_norm_check, HurwitzIso};
use hlawka::reduction::nondegeneracy_table;
use hlawka::{Caps, IntLattice, LatticePoint, Reduction, TestFunction};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::input;
use crate::output::Output;
use crate::{Failure, Group};

type Res = Result<Output, Failure>;

fn point_json(l: &IntLattice, p: &LatticePoint) -> serde_json::Value {
    json!({
        "coords": p.coords,
        "sqnorm_exact": p.sqnorm.to_string(),
        "sqnorm": l.real_sqnorm(p),
    })
}

#[derive(Subcommand, Debug)]
pub enum LatticeCmd {
    /// Exact shortest vector
    Svp {
        /// Lattice JSON file or builtin (z<N>, a2, d4, e8, craig:Q:L, diag:A,B,..)
        #[arg(long)]
        gram: String,
    },
    /// Theta series `Σ exp(-τ‖x‖²)`, origin included
    Theta {
        #[arg(long)]
        gram: String,
        #[arg(long)]
        tau: f64,
        /// truncation error bound
        #[arg(long, default_value_t = 1e-12)]
        eps: f64,
    },
    /// Volume, minima, densities and packing efficiency
    Density {
        #[arg(long)]
        gram: String,
        /// number of successive minima (default: the rank)
        #[arg(long)]
        upto: Option<usize>,
    },
    /// Number of nonzero points in the closed ball of radius r
    Count {
        #[arg(long)]
        gram: String,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        primitive: bool,
    },
}

fn lattice(cmd: &LatticeCmd, caps: &Caps) -> Res {
    match cmd {
        LatticeCmd::Svp { gram } => {
            let l = input::lattice(gram)?;
            let v = l.shortest_vector(caps)?;
            let count = l.minimal_vectors(caps)?.len();
            Ok(Output::new(&json!({
                "rank": l.rank(),
                "lambda1_sq": v.sqnorm.to_string(),
                "lambda1": l.real_sqnorm(&v).sqrt(),
                "vector": point_json(&l, &v),
                "kissing_number": 2 * count,
            })))
        }
        LatticeCmd::Theta { gram, tau, eps } => {
            let l = input::lattice(gram)?;
            Ok(Output::new(&json!({ "tau": tau, "eps": eps, "theta": l.theta_series(*tau, *eps, caps)? })))
        }
        LatticeCmd::Density { gram, upto } => {
            let l = input::lattice(gram)?;
            let rep = l.density_report(upto.unwrap_or(l.rank()), caps)?;
            let minima: Vec<String> = l.successive_minima(upto.unwrap_or(l.rank()), caps)?.iter().map(|q| q.to_string()).collect();
            let mut v = serde_json::to_value(&rep).expect("json");
            v["successive_minima_sq"] = json!(minima);
            v["det_gram"] = json!(l.det_gram().to_string());
            Ok(Output::new(&v))
        }
        LatticeCmd::Count { gram, r, primitive } => {
            let l = input::lattice(gram)?;
            let c = l.count_points(*r, *primitive, caps)?;
            Ok(Output::new(&json!({ "r": r, "primitive": primitive, "count_nonzero": c, "count_with_origin": c + (!primitive) as u64 })))
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum ReduceCmd {
    /// Coordinate reduction `x ↦ x mod p` of a lattice in its own basis
    Natural {
        #[arg(long)]
        base: String,
        #[arg(long)]
        p: u64,
    },
    /// Lift `φ_p⁻¹(C)` of a code through a reduction
    Lift {
        #[arg(long)]
        reduction: PathBuf,
        #[arg(long)]
        code: PathBuf,
    },
    /// Kernel lattice and its first minimum; with several primes, the nondegeneracy table of the natural reduction
    Kernel {
        #[arg(long, conflicts_with = "base")]
        reduction: Option<PathBuf>,
        #[arg(long)]
        base: Option<String>,
        #[arg(long, value_delimiter = ',')]
        p: Vec<u64>,
    },
    /// A uniformly random (n, k) code over F_p, as code JSON
    Code {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        seed: u64,
    },
}

fn reduce(cmd: &ReduceCmd, caps: &Caps) -> Res {
    match cmd {
        ReduceCmd::Natural { base, p } => Ok(Output::new(&input::natural(input::lattice(base)?, *p)?)),
        ReduceCmd::Lift { reduction, code } => {
            let red: Reduction = input::read_json(reduction)?;
            let code = input::code(code)?;
            let lat = red.lift_code(&code)?;
            Ok(Output::new(&json!({
                "lattice": lat,
                "index": red.lift_index(&code)?.to_string(),
                "volume": lat.volume(),
            })))
        }
        ReduceCmd::Kernel { reduction, base, p } => {
            if let Some(path) = reduction {
                let red: Reduction = input::read_json(path)?;
                let (lat, cert) = red.kernel_lattice(caps)?;
                return Ok(Output::new(&json!({ "kernel": lat, "certificate": cert })));
            }
            let Some(base) = base else {
                return Err(Failure::usage("give --reduction FILE or --base LAT with --p"));
            };
            if p.is_empty() {
                return Err(Failure::usage("--p is required with --base"));
            }
            let base = input::lattice(base)?;
            let build = |q: u64| input::natural(base.clone(), q).map_err(|_| hlawka::Error::InvalidParameter(format!("bad prime {q}")));
            let table = nondegeneracy_table(&build, p, caps)?;
            let rows = table
                .rows
                .iter()
                .map(|r| format!("{},{},{},{},{:.12},{:.12},{:.12}", r.p, r.n, r.m, r.lambda1_sq, r.lambda1, r.gamma, r.ratio))
                .collect();
            Ok(Output::new(&table).rows("p,n,m,lambda1_sq,lambda1,gamma,ratio", rows))
        }
        ReduceCmd::Code { p, n, k, seed } => Ok(Output::new(&sample_code(*p, *n, *k, *seed)?).seed(*seed)),
    }
}

#[derive(Subcommand, Debug)]
pub enum CycloCmd {
    /// Craig lattice A_{q-1}^l as the ideal (1-ζ)^l under the trace form
    Craig {
        #[arg(long)]
        q: u64,
        /// exponent (default: the standard schedule)
        #[arg(long)]
        l: Option<usize>,
        /// add densities, minima and bounds
        #[arg(long)]
        report: bool,
    },
    /// Primes p ≡ 1 (mod q) with a primitive q-th root of unity g
    Split {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 3)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        start: u64,
        #[arg(long, default_value_t = 1_000_000)]
        limit: u64,
    },
    /// Reduction of O_K^t onto F_p^t through the prime (p, ζ - g)
    Ideal {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[arg(long)]
        p: u64,
        /// root of unity (default: the least one)
        #[arg(long)]
        g: Option<u64>,
    },
    /// Search lifts of codes for lattices passing the step-log acceptance test
    Rogers {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 2)]
        t: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
    },
}

fn cyclo(cmd: &CycloCmd, caps: &Caps) -> Res {
    match cmd {
        CycloCmd::Craig { q, l, report } => {
            let n = q.saturating_sub(1) as usize;
            let l = l.unwrap_or_else(|| craig_parameter_schedule(n));
            let lat = craig_lattice(*q, l)?;
            let mut v = json!({ "q": q, "l": l, "n": n, "lattice": lat });
            if *report {
                let rep = lat.density_report(1, caps)?;
                let min = lat.shortest_vector(caps)?;
                v["lambda1_sq"] = json!(min.sqnorm.to_string());
                v["density"] = serde_json::to_value(&rep).expect("json");
                if let Ok(b) = craig_bounds(*q, l) {
                    v["bounds"] = serde_json::to_value(&b).expect("json");
                }
            }
            Ok(Output::new(&v))
        }
        CycloCmd::Split { q, count, start, limit } => {
            let primes = split_primes(*q, *count, *start, *limit)?;
            let rows = primes.iter().map(|(p, g)| format!("{p},{g}")).collect();
            let v: Vec<_> = primes.iter().map(|(p, g)| json!({ "p": p, "g": g })).collect();
            Ok(Output::new(&v).rows("p,g", rows))
        }
        CycloCmd::Ideal { q, t, p, g } => {
            let g = match g {
                Some(g) => *g,
                None => *hlawka::cyclotomic::roots_of_order_q(*q, *p)
                    .first()
                    .ok_or_else(|| Failure::usage(format!("{p} does not split completely in Q(ζ_{q})")))?,
            };
            Ok(Output::new(&ideal_reduction(*q, *t, *p, g)?))
        }
        CycloCmd::Rogers { q, t, p, k, trials, seed, eps } => {
            let params = RogersParams { trials: *trials, seed: *seed, eps: *eps, ..RogersParams::new(*q, *t, p.clone(), *k) };
            let rep = rogers_density_search(&params, caps)?;
            let rows = rep.rows.iter().map(RogersRow::csv).collect();
            let code = if rep.accepted_any { 0 } else { 1 };
            Ok(Output::new(&rep).rows(RogersRow::CSV_HEADER, rows).seed(*seed).exit(code))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Order {
    Lipschitz,
    Hurwitz,
}

#[derive(Subcommand, Debug)]
pub enum QuatCmd {
    /// Explicit isomorphism from the Hurwitz order mod p onto M2(F_p)
    Iso {
        #[arg(long)]
        p: u64,
    },
    /// Exhaustive check that singular images have norm divisible by p
    Lemma1 {
        #[arg(long)]
        p: u64,
        /// half-width of the coordinate box (default: p)
        #[arg(long)]
        side: Option<u64>,
    },
    /// Balancedness of free modules over M2(F_p) and the averaging bound
    Balanced {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        /// number of random test functions
        #[arg(long, default_value_t = 10)]
        random_g: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Lift of a free module code through the componentwise reduction
    Lift {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: usize,
        /// {"p": P, "m": M, "gens": [[[a,b,c,d], ...], ...]}
        #[arg(long)]
        code: PathBuf,
        #[arg(long, value_enum, default_value_t = Order::Hurwitz)]
        order: Order,
    },
}

fn quat(cmd: &QuatCmd, caps: &Caps) -> Res {
    match cmd {
        QuatCmd::Iso { p } => {
            let iso = HurwitzIso::new(*p)?;
            let mat = |m: hlawka::galois::MatRing2| m.entries();
            Ok(Output::new(&json!({
                "p": p,
                "a": iso.a,
                "b": iso.b,
                "phi_i": mat(iso.phi_i()),
                "phi_j": mat(iso.phi_j()),
                "phi_k": mat(iso.phi_k()),
                "verified": iso.verify(),
            }))
            .exit(if iso.verify() { 0 } else { 1 }))
        }
        QuatCmd::Lemma1 { p, side } => {
            let rep = noninvertible_norm_check(*p, side.unwrap_or(*p))?;
            let code = if rep.pass { 0 } else { 1 };
            Ok(Output::new(&rep).exit(code))
        }
        QuatCmd::Balanced { p, m, k, random_g, seed } => {
            let rep = balanced_check(*p, *m, *k, *random_g, *seed, caps)?;
            let code = if rep.balanced && rep.counting_ok && rep.averages.iter().all(|a| a.ok) { 0 } else { 1 };
            Ok(Output::new(&rep).seed(*seed).exit(code))
        }
        QuatCmd::Lift { p, m, code, order } => {
            let red = match order {
                Order::Lipschitz => lipschitz_reduction(*p, *m)?,
                Order::Hurwitz => hurwitz_reduction(*p, *m)?,
            };
            let c = input::mat_code(code)?;
            if c.p() != *p || c.m() != *m {
                return Err(Failure::usage("code parameters do not match --p/--m"));
            }
            let lat = red.lift(&c)?;
            let closed = red.unit_closed(&lat, caps)?;
            Ok(Output::new(&json!({ "order": red.order(), "volume": lat.volume(), "unit_closed": closed, "lattice": lat })))
        }
    }
}

/// Ensemble source: a spec file or a natural reduction of a named lattice.
#[derive(Args, Debug)]
pub struct EnsembleSource {
    /// {"reduction": ..., "k": K, "volume": V, "mode": ...}
    #[arg(long)]
    spec: Option<PathBuf>,
    /// base lattice for a natural reduction (with --p, --k)
    #[arg(long)]
    base: Option<String>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    volume: Option<f64>,
    /// `exhaustive` or `mc:TRIALS:SEED`
    #[arg(long)]
    mode: Option<String>,
}

impl EnsembleSource {
    fn load(&self) -> Result<hlawka::ensemble::EnsembleSpec, Failure> {
        input::ensemble(self.spec.as_deref(), self.base.as_deref(), self.p, self.k, self.volume, self.mode.as_deref())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GKind {
    /// g ≡ 1
    Ones,
    /// Hamming weight
    Weight,
    /// seeded random rationals
    Random,
}

#[derive(Subcommand, Debug)]
pub enum EnsembleCmd {
    /// Exact check of the average of Σ_{c ≠ 0} g(c) over all (n, k) codes
    Loeliger {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = GKind::Ones)]
        g: GKind,
        /// required for --g random
        #[arg(long)]
        seed: Option<u64>,
        /// number of random functions
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Ensemble average of Σ f(x) over nonzero (or primitive) points
    Avg {
        #[command(flatten)]
        src: EnsembleSource,
        /// ball:R, gauss:TAU or rogers:R:T:N
        #[arg(long)]
        f: String,
        #[arg(long)]
        primitive: bool,
        #[arg(long, default_value_t = 1e-12)]
        eps: f64,
    },
    /// Ensemble average of the theta series
    Theta {
        #[command(flatten)]
        src: EnsembleSource,
        #[arg(long)]
        tau: f64,
        #[arg(long, default_value_t = 1e-12)]
        eps: f64,
    },
    /// First ensemble member with no primitive point below the density radius
    Mh {
        #[command(flatten)]
        src: EnsembleSource,
        #[arg(long = "eps")]
        eps: f64,
        /// point multiplicity L
        #[arg(long = "L", default_value_t = 2)]
        multiplicity: u64,
    },
}

fn mode_seed(mode: &EnsembleMode) -> Option<u64> {
    match mode {
        EnsembleMode::MonteCarlo { seed, .. } => Some(*seed),
        EnsembleMode::Exhaustive => None,
    }
}

fn avg_output(rep: AverageReport, mode: &EnsembleMode) -> Output {
    let row = rep.csv();
    let out = Output::new(&rep).rows(AverageReport::CSV_HEADER, vec![row]);
    match mode_seed(mode) {
        Some(s) => out.seed(s),
        None => out,
    }
}

fn ensemble(cmd: &EnsembleCmd, caps: &Caps) -> Res {
    match cmd {
        EnsembleCmd::Loeliger { p, n, k, g, seed, count } => {
            let size = p
                .checked_pow(*n as u32)
                .filter(|&s| s <= caps.points)
                .ok_or_else(|| Failure::from(hlawka::Error::CapExceeded { what: "ambient space size", needed: format!("{p}^{n}"), cap: caps.points }))?;
            let mut results = Vec::new();
            let mut all_equal = true;
            let runs = if *g == GKind::Random { *count } else { 1 };
            let base_seed = match (g, seed) {
                (GKind::Random, None) => return Err(Failure::usage("--g random needs --seed")),
                (_, s) => s.unwrap_or(0),
            };
            for i in 0..runs {
                let table: Vec<BigRational> = match g {
                    GKind::Ones => vec![BigRational::from_integer(1.into()); size as usize],
                    GKind::Weight => (0..size)
                        .map(|idx| {
                            let w = (0..*n).filter(|&j| idx / p.pow(j as u32) % p != 0).count();
                            BigRational::from_integer(BigInt::from(w))
                        })
                        .collect(),
                    GKind::Random => {
                        let mut rng = ChaCha8Rng::seed_from_u64(base_seed ^ i as u64);
                        (0..size).map(|_| BigRational::new(rng.gen_range(0..=100).into(), rng.gen_range(1..=12).into())).collect()
                    }
                };
                let pp = *p;
                let g = |v: &[u64]| {
                    let idx = v.iter().rev().fold(0u64, |acc, &x| acc * pp + x);
                    table[idx as usize].clone()
                };
                let (lhs, rhs) = loeliger_lhs_rhs(*p, *n, *k, &g, caps)?;
                all_equal &= lhs == rhs;
                results.push(json!({ "lhs": lhs.to_string(), "rhs": rhs.to_string(), "equal": lhs == rhs }));
            }
            let out = Output::new(&json!({ "p": p, "n": n, "k": k, "g": format!("{g:?}").to_lowercase(), "runs": results, "all_equal": all_equal }))
                .exit(if all_equal { 0 } else { 1 });
            Ok(if *g == GKind::Random { out.seed(base_seed) } else { out })
        }
        EnsembleCmd::Avg { src, f, primitive, eps } => {
            let spec = src.load()?;
            let f: TestFunction = f.parse()?;
            Ok(avg_output(average_sum_f(&spec, &f, *primitive, *eps, caps)?, &spec.mode))
        }
        EnsembleCmd::Theta { src, tau, eps } => {
            let spec = src.load()?;
            Ok(avg_output(theta_average(&spec, *tau, *eps, caps)?, &spec.mode))
        }
        EnsembleCmd::Mh { src, eps, multiplicity } => {
            let spec = src.load()?;
            let rep = mh_search(&spec, *eps, *multiplicity, caps)?;
            let ok = rep.hit && rep.certificate.as_ref().is_some_and(|c| c.ok);
            let out = Output::new(&rep).exit(if ok { 0 } else { 1 });
            Ok(match mode_seed(&spec.mode) {
                Some(s) => out.seed(s),
                None => out,
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BaseName {
    Zn,
    Craig,
}

#[derive(Args, Debug)]
pub struct ConstArgs {
    #[arg(long, default_value_t = 0.01)]
    nu: f64,
    #[arg(long, default_value_t = 1.0)]
    c1: f64,
    #[arg(long, default_value_t = 1.0)]
    c2: f64,
    #[arg(long, default_value_t = 0.3)]
    eps: f64,
}

impl ConstArgs {
    fn get(&self) -> PlanConstants {
        PlanConstants { nu: self.nu, c1: self.c1, c2: self.c2, eps: self.eps }
    }
}

#[derive(Subcommand, Debug)]
pub enum EffectiveCmd {
    /// Least prime meeting both alphabet-size conditions, with the density it guarantees
    Plan {
        #[arg(long, value_enum)]
        base: BaseName,
        /// dimension (zn)
        #[arg(long)]
        n: Option<usize>,
        /// conductor (craig); n = q - 1
        #[arg(long)]
        q: Option<u64>,
        /// Craig exponent (default: the standard schedule)
        #[arg(long)]
        l: Option<usize>,
        /// code rate k/n (default: grid search for zn, the balancing rate for craig)
        #[arg(long)]
        delta: Option<f64>,
        #[command(flatten)]
        consts: ConstArgs,
    },
    /// Comparison rows of effective families, natural logs
    Table1 {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<f64>,
    },
    /// Closed-form bounds for A_n^l, optionally against the exact value
    Craig {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        exact: bool,
    },
    /// Point count in a ball against the covering-radius sandwich
    Sandwich {
        #[arg(long)]
        gram: String,
        #[arg(long)]
        r: f64,
        /// covering-radius bound (default: √m/2 for Z^m, else the best available)
        #[arg(long)]
        l0: Option<f64>,
    },
    /// Alphabet size for free modules over M2(F_p) with a Lipschitz base
    QuatPlan {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        consts: ConstArgs,
    },
    /// Packing efficiency against the benchmark 1/2
    Efficiency {
        #[arg(long)]
        gram: String,
        #[arg(long, default_value_t = 0.0)]
        tol: f64,
    },
}

fn effective(cmd: &EffectiveCmd, caps: &Caps) -> Res {
    match cmd {
        EffectiveCmd::Plan { base, n, q, l, delta, consts } => {
            let c = consts.get();
            let kind = match base {
                BaseName::Zn => BaseKind::Zn { n: n.ok_or_else(|| Failure::usage("--n is required for --base zn"))? },
                BaseName::Craig => {
                    let q = q.ok_or_else(|| Failure::usage("--q is required for --base craig"))?;
                    match l {
                        Some(l) => {
                            craig_bounds(q, *l)?;
                            BaseKind::Craig { q, l: *l }
                        }
                        None => BaseKind::craig_scheduled(q)?,
                    }
                }
            };
            let plan = match (delta, kind) {
                (Some(d), _) => effective_plan(kind, *d, c)?,
                (None, BaseKind::Zn { .. }) => best_rate(kind, 0.2, 0.5, 0.001, c)?,
                (None, BaseKind::Craig { .. }) => effective_plan(kind, craig_rate(kind.n()), c)?,
            };
            Ok(Output::new(&plan))
        }
        EffectiveCmd::Table1 { n } => {
            let rows = table1_rows(n);
            let lines = rows.iter().map(Table1Row::csv).collect();
            Ok(Output::new(&rows).rows(Table1Row::CSV_HEADER, lines))
        }
        EffectiveCmd::Craig { q, l, exact } => {
            let b = craig_bounds(*q, *l)?;
            let mut v = serde_json::to_value(&b).expect("json");
            if *exact {
                let h = craig_hermite_exact(*q, *l, caps)?;
                v["hermite_exact"] = json!(h);
                v["displayed_bound_holds"] = json!(h >= b.hermite_lb - 1e-9);
                v["det_bound_holds"] = json!(h >= b.hermite_lb_det - 1e-9);
            }
            Ok(Output::new(&v))
        }
        EffectiveCmd::Sandwich { gram, r, l0 } => {
            let lat = input::lattice(gram)?;
            let rep = point_sandwich(&lat, *r, *l0, caps)?;
            let code = if rep.holds == Some(false) { 1 } else { 0 };
            Ok(Output::new(&rep).exit(code))
        }
        EffectiveCmd::QuatPlan { m, k, consts } => Ok(Output::new(&quaternion_plan(*m, *k, consts.get())?)),
        EffectiveCmd::Efficiency { gram, tol } => {
            let lat = input::lattice(gram)?;
            Ok(Output::new(&packing_efficiency_goal(&lat, *tol, caps)?))
        }
    }
}

/// Runs the selected command; returns its display name and outcome.
pub fn dispatch(group: &Group, caps: &Caps) -> (String, Res) {
    fn name<T: std::fmt::Debug>(g: &str, c: &T) -> String {
        let dbg = format!("{c:?}");
        let head = dbg.split([' ', '{', '(']).next().unwrap_or("");
        let mut verb = String::new();
        for (i, ch) in head.chars().enumerate() {
            if ch.is_uppercase() && i > 0 {
                verb.push('-');
            }
            verb.push(ch.to_ascii_lowercase());
        }
        format!("{g} {verb}")
    }
    match group {
        Group::Lattice(g) => {
            let c = g.cmd.as_ref().expect("checked");
            (name("lattice", c), lattice(c, caps))
        }
        Group::Reduce(g) => {
            let c = g.cmd.as_ref().expect("checked");
            (name("reduce", c), reduce(c, caps))
        }
        Group::Cyclo(g) => {
            let c = g.cmd.as_ref().expect("checked");
            (name("cyclo", c), cyclo(c, caps))
        }
        Group::Quat(g) => {
            let c = g.cmd.as_ref().expect("checked");
            (name("quat", c), quat(c, caps))
        }
        Group::Ensemble(g) => {
            let c = g.cmd.as_ref().expect("checked");
            (name("ensemble", c), ensemble(c, caps))
        }
        Group::Effective(g) => {
            let c = g.cmd.as_ref().expect("checked");
            (name("effective", c), effective(c, caps))
        }
    }
}
