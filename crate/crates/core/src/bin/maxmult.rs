use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use maxmult::dyadic::WindowFamily;
use maxmult::fraccalc::{m_tilde, TildeQuadrature};
use maxmult::lab::{self, CorpusSpec, ExperimentConfig, GridSpec, Verdict};
use maxmult::norms::{sigma_norm, SpaceTag};
use maxmult::operators::{apply_multiplier, maximal_operator, square_function, Output, TGrid};
use maxmult::spectral::{lebesgue_norm, write_field};
use maxmult::symbols::{from_family, Symbol};

#[derive(Parser)]
#[command(name = "maxmult", version, about = "Maximal Fourier multiplier workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sigma^2 norm of a symbol over the dyadic shells.
    Norm(NormArgs),
    /// T_{m(t.)} f for one corpus function.
    Apply(OpArgs),
    /// sup_t |T_{m(t.)} f| over the dilation grid.
    Maximal(OpArgs),
    /// (int |T_{m(t.)} f|^2 dt/t)^{1/2} over the dilation grid.
    Squarefn(OpArgs),
    /// m~ at given radii.
    Mtilde(MtildeArgs),
    /// Run a registered experiment.
    Experiment(ExperimentArgs),
    /// List the registered experiments.
    List,
}

#[derive(Args)]
struct SymbolArgs {
    /// Symbol family, e.g. window, ring, slow_decay.
    #[arg(long, default_value = "window")]
    family: String,
    /// Family parameter as key=value; repeatable.
    #[arg(long = "param", value_parser = parse_kv)]
    params: Vec<(String, f64)>,
}

impl SymbolArgs {
    fn build(&self) -> Result<Symbol> {
        let p: BTreeMap<String, f64> = self.params.iter().cloned().collect();
        Ok(from_family(&self.family, &p)?)
    }
}

fn parse_kv(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected key=value, got {s:?}"))?;
    let v: f64 = v.parse().map_err(|e| format!("{k}: {e}"))?;
    Ok((k.to_string(), v))
}

/// `lp:P`, `linf`, `sobolev:S`, `besov:P:S` or `hoelder:G`; `P` may be `inf`.
fn parse_space(s: &str) -> std::result::Result<SpaceTag, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| -> std::result::Result<f64, String> {
        if t == "inf" {
            Ok(f64::INFINITY)
        } else {
            t.parse().map_err(|e| format!("{t:?}: {e}"))
        }
    };
    match parts.as_slice() {
        ["lp", p] => Ok(SpaceTag::Lp { p: num(p)? }),
        ["linf"] => Ok(SpaceTag::LInf),
        ["sobolev", s] => Ok(SpaceTag::SobolevL2 { s: num(s)? }),
        ["besov", p, s] => Ok(SpaceTag::BesovDiag { p: num(p)?, s: num(s)? }),
        ["hoelder", g] => Ok(SpaceTag::Hoelder { gamma: num(g)? }),
        _ => Err(format!("unknown space {s:?}")),
    }
}

#[derive(Args)]
struct NormArgs {
    #[command(flatten)]
    symbol: SymbolArgs,
    #[arg(long, value_parser = parse_space, default_value = "sobolev:1")]
    space: SpaceTag,
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    #[arg(long, default_value_t = 8192)]
    n: usize,
    #[arg(long, default_value_t = 2.0)]
    nyquist: f64,
    #[arg(long, default_value_t = -20)]
    shell_min: i32,
    #[arg(long, default_value_t = 20)]
    shell_max: i32,
    /// Directory for norm.json and shells.csv.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OpArgs {
    #[command(flatten)]
    symbol: SymbolArgs,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[arg(long, default_value_t = 4096)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    nyquist: f64,
    /// Dilation for `apply`.
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long, default_value_t = 20_240_601)]
    seed: u64,
    /// Index of the corpus function.
    #[arg(long, default_value_t = 0)]
    index: usize,
    /// Double the samples and the dilation density.
    #[arg(long)]
    refine: bool,
    /// Write the output field to this container file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MtildeArgs {
    #[command(flatten)]
    symbol: SymbolArgs,
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    /// Radii; repeatable.
    #[arg(long = "r", required = true)]
    radii: Vec<f64>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment name; see `maxmult list`.
    name: Option<String>,
    /// JSON config; defaults to the registered config of `name`.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory; overrides the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Corpus seed; overrides the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Run on refined grids.
    #[arg(long)]
    refine: bool,
    /// Write the default config of `name` to this file and exit.
    #[arg(long)]
    write_config: Option<PathBuf>,
}

/// Exit code for configuration and usage errors.
const USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let config = e.chain().any(|c| {
                matches!(
                    c.downcast_ref::<maxmult::Error>(),
                    Some(maxmult::Error::Config(_) | maxmult::Error::InvalidParameter(_) | maxmult::Error::Json(_))
                ) || c.downcast_ref::<UsageError>().is_some()
            });
            ExitCode::from(if config { USAGE } else { 1 })
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::List => {
            for e in lab::registry() {
                println!("{:<18} {}", e.name, e.summary);
            }
            Ok(0)
        }
        Command::Norm(a) => norm(a),
        Command::Apply(a) => operator(a, Op::Apply),
        Command::Maximal(a) => operator(a, Op::Maximal),
        Command::Squarefn(a) => operator(a, Op::Square),
        Command::Mtilde(a) => {
            let m = a.symbol.build()?;
            TildeQuadrature::new(a.epsilon)?;
            for r in a.radii {
                let v = m_tilde(&m, a.epsilon, &[r])?;
                println!("{r:e} {:.15e} {:.15e}", v.re, v.im);
            }
            Ok(0)
        }
        Command::Experiment(a) => experiment(a),
    }
}

fn norm(a: NormArgs) -> Result<u8> {
    let m = a.symbol.build()?;
    let g = GridSpec::with_nyquist(1, a.n, a.nyquist).grid()?;
    let w = WindowFamily::new(a.shell_min, a.shell_max)?;
    let r = sigma_norm(&m, a.space, a.theta, &w, &g)?;
    for w in &r.warnings {
        eprintln!("warning: {w}");
    }
    match r.tail {
        Some(t) => println!("{} {}: {:.12e} (tail {:.3e})", r.symbol, a.space.label(), r.total, t),
        None => println!("{} {}: {:.12e} (diverging)", r.symbol, a.space.label(), r.total),
    }
    if let Some(out) = a.out {
        std::fs::create_dir_all(&out)?;
        std::fs::write(out.join("norm.json"), serde_json::to_string_pretty(&r)?)?;
        r.write_csv(&out.join("shells.csv"))?;
    }
    Ok(0)
}

enum Op {
    Apply,
    Maximal,
    Square,
}

fn operator(a: OpArgs, op: Op) -> Result<u8> {
    let m = a.symbol.build()?;
    let mut spec = GridSpec::with_nyquist(a.dim, a.n, a.nyquist);
    let mut tg = TGrid::default();
    let corpus = CorpusSpec {
        seed: a.seed,
        count: a.index + 1,
        ..CorpusSpec::for_nyquist(a.nyquist)
    };
    if a.refine {
        spec = GridSpec::with_nyquist(a.dim, 2 * a.n, 2.0 * a.nyquist);
        tg = tg.refined();
    }
    let g = spec.grid()?;
    let f = corpus.build(&g)?.pop().ok_or_else(|| anyhow!("empty corpus"))?;
    let out: Output = match op {
        Op::Apply => apply_multiplier(&m, &f, a.t)?,
        Op::Maximal => maximal_operator(&m, &f, &tg)?,
        Op::Square => square_function(&m, &f, &tg)?,
    };
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    println!("L2 norm {:.12e}", lebesgue_norm(&out.field, 2.0)?);
    if let Some(path) = a.out {
        let file = std::io::BufWriter::new(std::fs::File::create(&path)?);
        write_field(file, &out.field).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(0)
}

fn experiment(a: ExperimentArgs) -> Result<u8> {
    let mut cfg = match (&a.config, &a.name) {
        (Some(path), _) => load_config(path)?,
        (None, Some(name)) => match lab::default_config(name) {
            Ok(c) => c,
            Err(_) => {
                eprintln!("unknown experiment {name:?}; available:");
                for n in lab::list() {
                    eprintln!("  {n}");
                }
                return Ok(USAGE);
            }
        },
        (None, None) => bail!(UsageError("experiment needs a name or --config".into())),
    };
    if let Some(path) = a.write_config {
        cfg.save(&path)?;
        return Ok(0);
    }
    if let Some(seed) = a.seed {
        cfg.corpus.seed = seed;
    }
    if a.refine {
        cfg = cfg.refined();
    }
    let out = a.out.unwrap_or_else(|| PathBuf::from(&cfg.output_dir));
    let report = lab::run_to_dir(&cfg, &out)?;
    for c in &report.cases {
        println!("{:<15} {}", c.verdict.label(), c.name);
        for n in &c.notes {
            println!("                  note: {n}");
        }
    }
    let v = report.verdict();
    println!(
        "{}: {} ({:.1} s) -> {}",
        report.experiment,
        v.label(),
        report.wall_clock_seconds,
        out.display()
    );
    Ok(if v == Verdict::Fail { 1 } else { 0 })
}

fn load_config(path: &Path) -> Result<ExperimentConfig> {
    if !path.exists() {
        bail!(UsageError(format!("config {} not found", path.display())));
    }
    ExperimentConfig::load(path).with_context(|| format!("loading {}", path.display()))
}

/// Usage problems that clap cannot see; they map to exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}
