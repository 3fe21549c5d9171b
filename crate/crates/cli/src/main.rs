mod commands;
mod input;
mod output;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hlawka::Caps;

use output::Format;

#[derive(Parser, Debug)]
#[command(name = "hlawka", version = output::VERSION, about = "Lattices from reductions of codes: construction, ensembles, certificates and plans")]
pub struct Cli {
    /// Output format (default: inferred from --out, else json)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores); results do not depend on it
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Point-enumeration cap (overrides HLAWKA_CAP_POINTS)
    #[arg(long, global = true)]
    cap_points: Option<u64>,
    /// Cap on exhaustively enumerated codes
    #[arg(long, global = true)]
    cap_codes: Option<u64>,
    /// Largest rank for shortest-vector searches
    #[arg(long, global = true)]
    cap_svp_rank: Option<usize>,
    /// Run the group's built-in examples instead of a command
    #[arg(long, global = true)]
    selftest: bool,
    #[command(subcommand)]
    group: Group,
}

#[derive(Subcommand, Debug)]
enum Group {
    /// Inspect a lattice given by a Gram JSON file or a builtin name
    Lattice(GroupArgs<commands::LatticeCmd>),
    /// Reductions onto F_p^n, lifts of codes and kernels
    Reduce(GroupArgs<commands::ReduceCmd>),
    /// Cyclotomic lattices, split primes and the Rogers-type search
    Cyclo(GroupArgs<commands::CycloCmd>),
    /// Quaternion orders reduced onto matrix rings
    Quat(GroupArgs<commands::QuatCmd>),
    /// Averages and searches over code ensembles
    Ensemble(GroupArgs<commands::EnsembleCmd>),
    /// Explicit alphabet sizes, comparison table and bounds
    Effective(GroupArgs<commands::EffectiveCmd>),
}

#[derive(Args, Debug)]
struct GroupArgs<C: Subcommand> {
    #[command(subcommand)]
    cmd: Option<C>,
}

impl Group {
    fn name(&self) -> &'static str {
        match self {
            Group::Lattice(_) => "lattice",
            Group::Reduce(_) => "reduce",
            Group::Cyclo(_) => "cyclo",
            Group::Quat(_) => "quat",
            Group::Ensemble(_) => "ensemble",
            Group::Effective(_) => "effective",
        }
    }

    fn has_command(&self) -> bool {
        match self {
            Group::Lattice(g) => g.cmd.is_some(),
            Group::Reduce(g) => g.cmd.is_some(),
            Group::Cyclo(g) => g.cmd.is_some(),
            Group::Quat(g) => g.cmd.is_some(),
            Group::Ensemble(g) => g.cmd.is_some(),
            Group::Effective(g) => g.cmd.is_some(),
        }
    }
}

/// Failure of a command, mapped onto the exit-code convention.
#[derive(Debug)]
pub enum Failure {
    /// cap exceeded or search without a hit
    Refusal(String, String),
    /// bad parameters or unreadable input
    Usage(String, String),
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure::Usage("usage".into(), msg.into())
    }

    fn code(&self) -> u8 {
        match self {
            Failure::Refusal(..) => 1,
            Failure::Usage(..) => 2,
        }
    }
}

impl From<hlawka::Error> for Failure {
    fn from(e: hlawka::Error) -> Self {
        let kind = match &e {
            hlawka::Error::InvalidParameter(_) => "invalid_parameter",
            hlawka::Error::Mismatch(_) => "dimension_mismatch",
            hlawka::Error::NotPositiveDefinite => "not_positive_definite",
            hlawka::Error::CapExceeded { .. } | hlawka::Error::PointCapExceeded { .. } => "cap_exceeded",
            hlawka::Error::NoHit(_) => "no_hit",
        };
        if e.is_refusal() {
            Failure::Refusal(kind.into(), e.to_string())
        } else {
            Failure::Usage(kind.into(), e.to_string())
        }
    }
}

fn caps(cli: &Cli) -> Caps {
    let mut caps = Caps::from_env();
    if let Some(p) = cli.cap_points {
        caps.points = p;
    }
    if let Some(c) = cli.cap_codes {
        caps.codes = c;
    }
    if let Some(r) = cli.cap_svp_rank {
        caps.svp_rank = r;
    }
    caps
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 || rayon::ThreadPoolBuilder::new().num_threads(t).build_global().is_err() {
            eprintln!("error: cannot start {t} worker threads");
            return ExitCode::from(2);
        }
    }
    let caps = caps(&cli);
    let format = Format::resolve(cli.format, cli.out.as_deref());

    if cli.selftest {
        let report = selftest::run(cli.group.name(), &caps);
        let code = if report.iter().all(|c| c.pass) { 0 } else { 1 };
        let out = output::Output::new(&report).exit(code);
        let text = out.render(&format!("{} --selftest", cli.group.name()), format);
        if let Err(e) = output::emit(&text, cli.out.as_deref()) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        return ExitCode::from(code as u8);
    }
    if !cli.group.has_command() {
        let mut cmd = <Cli as clap::CommandFactory>::command();
        let name = cli.group.name();
        if let Some(sub) = cmd.find_subcommand_mut(name) {
            eprintln!("{}", sub.render_help());
        }
        return ExitCode::from(2);
    }

    let (command, result) = commands::dispatch(&cli.group, &caps);
    match result {
        Ok(out) => {
            let text = out.render(&command, format);
            if let Err(e) = output::emit(&text, cli.out.as_deref()) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(out.exit as u8)
        }
        Err(f) => {
            let (kind, msg) = match &f {
                Failure::Refusal(k, m) | Failure::Usage(k, m) => (k, m),
            };
            let err = serde_json::json!({ "error": kind, "message": msg, "command": command, "version": output::VERSION });
            eprintln!("{}", serde_json::to_string(&err).expect("json"));
            ExitCode::from(f.code())
        }
    }
}
