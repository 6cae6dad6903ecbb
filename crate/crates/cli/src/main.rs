mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use log::info;
use serde_json::json;
use sl2crit::harness::{self, CharacterTable, CheckSpec, Report, Suite};
use sl2crit::rep::{self, Chevalley};
use sl2crit::{HalfInt, Sign, State};

use config::{Bounds, Config, Format};

#[derive(Parser, Debug)]
#[command(
    name = "sl2crit",
    version,
    about = "Exact checks for the critical-level affine sl2 realization"
)]
struct Cli {
    /// `key = value` file with default bounds, output directory, format and jobs.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for reports and tables.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct BoundArgs {
    /// Largest |mode|; half-odd for the Clifford suite, e.g. 11/2.
    #[arg(long, allow_hyphen_values = true)]
    mode_bound: Option<HalfInt>,
    /// Largest twice-grade of states of V.
    #[arg(long)]
    max_twice_deg: Option<u32>,
    /// Largest |charge|.
    #[arg(long)]
    charge_bound: Option<u32>,
    /// Largest wedge degree.
    #[arg(long)]
    max_wedge_deg: Option<u32>,
}

impl BoundArgs {
    fn to_bounds(&self) -> Result<Bounds> {
        if let Some(m) = self.mode_bound {
            if m.twice() < 0 {
                bail!("--mode-bound must be nonnegative");
            }
        }
        Ok(Bounds {
            mode_bound: self.mode_bound,
            max_twice_deg: self.max_twice_deg.map(i64::from),
            charge_bound: self.charge_bound.map(i64::from),
            max_wedge_deg: self.max_wedge_deg,
        })
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verification suite: clifford, current, exp, hwv, zalg or all.
    Verify {
        suite: String,
        #[command(flatten)]
        bounds: BoundArgs,
        /// Keep passing records in the report.
        #[arg(long)]
        keep_passing: bool,
    },
    /// Graded dimensions of V and its vacuum space against the product formulas.
    Character {
        #[arg(long, default_value_t = 12)]
        max_twice_deg: u32,
        /// Charge cutoff; defaults to ceil(sqrt(max-twice-deg)).
        #[arg(long)]
        charge_cutoff: Option<u32>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Apply one operator to a state read from a JSON file ("-" for stdin).
    Act {
        /// X, Y, H, d, c, Z+, Z-, e0, e1, f0, f1, h0 or h1.
        #[arg(long)]
        op: String,
        #[arg(long, allow_hyphen_values = true)]
        m: Option<i64>,
        #[arg(long)]
        state: PathBuf,
    },
    /// Residuals of [d, a(m)] - m a(m) per charge; informational.
    ProbeD {
        #[command(flatten)]
        bounds: BoundArgs,
    },
}

/// Failures that map to exit code 2.
#[derive(Debug)]
struct UsageError(anyhow::Error);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage<T>(r: Result<T>) -> Result<T> {
    r.map_err(|e| UsageError(e).into())
}

struct Ctx {
    config: Config,
    out: Option<PathBuf>,
    jobs: usize,
}

impl Ctx {
    fn write_artifact(&self, name: &str, body: &str) -> Result<()> {
        if let Some(dir) = &self.out {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join(name);
            fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
            info!("wrote {}", path.display());
        }
        Ok(())
    }
}

fn print(body: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(body.as_bytes())?;
    if !body.ends_with('\n') {
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn spec_for(ctx: &Ctx, suite: Suite, flags: &BoundArgs) -> Result<CheckSpec> {
    let mut spec = CheckSpec::default_for(suite);
    ctx.config
        .bounds
        .overlay(&usage(flags.to_bounds())?)
        .apply(&mut spec);
    spec.jobs = ctx.jobs;
    Ok(spec)
}

fn run_report(spec: &CheckSpec) -> Result<Report> {
    let start = Instant::now();
    let report = harness::run_suite(spec)?;
    info!(
        "{}: {} checks, {} failed, {:.2?}",
        report.suite,
        report.summary.checks,
        report.summary.failed,
        start.elapsed()
    );
    Ok(report)
}

fn cmd_verify(ctx: &Ctx, suite: &str, flags: &BoundArgs, keep_passing: bool) -> Result<bool> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::VERIFY.to_vec()
    } else {
        match usage(Suite::from_str(suite).map_err(anyhow::Error::from))? {
            Suite::Dprobe => {
                return Err(UsageError(anyhow!("use `probe-d` for the d-homogeneity probe")).into())
            }
            s => vec![s],
        }
    };
    let mut reports = Vec::new();
    for s in suites {
        let mut spec = spec_for(ctx, s, flags)?;
        spec.keep_passing = keep_passing;
        usage(spec.validate().map_err(anyhow::Error::from))?;
        reports.push(run_report(&spec)?);
    }
    let report = if reports.len() == 1 {
        reports.pop().expect("one report")
    } else {
        Report::merge("all", reports)
    };
    let body = report.to_json_pretty();
    ctx.write_artifact(&format!("{}.json", report.suite), &body)?;
    print(&body)?;
    Ok(report.passed())
}

fn cmd_character(
    ctx: &Ctx,
    max_twice_deg: u32,
    cutoff: Option<u32>,
    format: Option<Format>,
) -> Result<bool> {
    let format = format.or(ctx.config.format).unwrap_or_default();
    let start = Instant::now();
    let table = usage(
        harness::character(i64::from(max_twice_deg), cutoff.map(i64::from))
            .map_err(anyhow::Error::from),
    )?;
    info!(
        "character through twice-degree {max_twice_deg}: {:.2?}",
        start.elapsed()
    );
    match format {
        Format::Json => {
            let body = serde_json::to_string_pretty(&table)?;
            ctx.write_artifact("character.json", &body)?;
            print(&body)?;
        }
        Format::Csv => {
            let v = CharacterTable::to_csv(&table.v);
            let omega = CharacterTable::to_csv(&table.omega);
            ctx.write_artifact("character_v.csv", &v)?;
            ctx.write_artifact("character_omega.csv", &omega)?;
            print(&v)?;
        }
    }
    Ok(table.matches())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    X,
    Y,
    H,
    D,
    C,
    Z(Sign),
    Gen(Chevalley),
}

impl Op {
    fn moded(self) -> bool {
        matches!(self, Op::X | Op::Y | Op::H | Op::Z(_))
    }
}

impl FromStr for Op {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "X" => Op::X,
            "Y" => Op::Y,
            "H" => Op::H,
            "d" => Op::D,
            "c" => Op::C,
            "Z+" => Op::Z(Sign::Plus),
            "Z-" => Op::Z(Sign::Minus),
            other => Op::Gen(other.parse().map_err(|_| {
                anyhow!("unknown operator `{other}` (expected X, Y, H, d, c, Z+, Z-, e0, e1, f0, f1, h0, h1)")
            })?),
        })
    }
}

fn read_state(path: &Path) -> Result<State> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).context("reading stdin")?
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    serde_json::from_str(&text).with_context(|| format!("invalid state in {}", path.display()))
}

fn apply(op: Op, m: Option<i64>, s: &State) -> State {
    let m = m.unwrap_or(0);
    match op {
        Op::X => rep::x_act(m, s),
        Op::Y => rep::y_act(m, s),
        Op::H => rep::h_act_full(m, s),
        Op::D => rep::d_act(s),
        Op::C => rep::c_act(s),
        Op::Z(sign) => harness::zop_closed_form_on_v(sign, m, s),
        Op::Gen(g) => rep::chevalley_act(g, s),
    }
}

fn cmd_act(ctx: &Ctx, op: &str, m: Option<i64>, path: &Path) -> Result<bool> {
    let op: Op = usage(op.parse())?;
    if op.moded() && m.is_none() {
        return Err(UsageError(anyhow!("--m is required for this operator")).into());
    }
    if !op.moded() && m.is_some() {
        return Err(UsageError(anyhow!("--m is not accepted for this operator")).into());
    }
    let state = usage(read_state(path))?;
    let result = apply(op, m, &state);
    let body = serde_json::to_string_pretty(&result)?;
    ctx.write_artifact("act.json", &body)?;
    print(&body)?;
    Ok(true)
}

fn cmd_probe(ctx: &Ctx, flags: &BoundArgs) -> Result<bool> {
    let spec = spec_for(ctx, Suite::Dprobe, flags)?;
    usage(spec.validate().map_err(anyhow::Error::from))?;
    let report = run_report(&spec)?;
    let body = report.to_json_pretty();
    ctx.write_artifact("dprobe.json", &body)?;
    print(&body)?;
    Ok(true)
}

fn run(cli: Cli) -> Result<bool> {
    let config = match &cli.config {
        Some(p) => usage(Config::load(p))?,
        None => Config::default(),
    };
    let ctx = Ctx {
        out: cli.out.clone().or_else(|| config.out.clone()),
        jobs: cli.jobs.or(config.jobs).unwrap_or(0),
        config,
    };
    match &cli.command {
        Command::Verify {
            suite,
            bounds,
            keep_passing,
        } => cmd_verify(&ctx, suite, bounds, *keep_passing),
        Command::Character {
            max_twice_deg,
            charge_cutoff,
            format,
        } => cmd_character(&ctx, *max_twice_deg, *charge_cutoff, *format),
        Command::Act { op, m, state } => cmd_act(&ctx, op, *m, state),
        Command::ProbeD { bounds } => cmd_probe(&ctx, bounds),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let code = if e.downcast_ref::<UsageError>().is_some() {
                2
            } else {
                1
            };
            eprintln!("error: {e:#}");
            let _ = print(&json!({"error": format!("{e:#}")}).to_string());
            ExitCode::from(code)
        }
    }
}
