use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use shorkit::arith::bit_length;
use shorkit::circuit::{parse, serialize, Matrix2};
use shorkit::estimate::{estimate_table, table_csv, ResourceReport};
use shorkit::numfmt::sig;
use shorkit::shor::{factor_with, OrderFinder, SamplingMode, ShorConfig, ShorOutcome};
use shorkit::sim::{
    dense_order_finding_distribution, order_finding_distribution, DenseConfig, Distribution,
    DEFAULT_DENSE_CAP,
};
use shorkit::templates::{build, BuildOptions, TemplateName, TemplateParams};
use shorkit::transpile::{decompose_unitary, equivalence_error, transpile_with, TranspileConfig};

/// Order-finding circuits, simulation and trapped-ion transpilation.
#[derive(Debug, Parser)]
#[command(name = "shorkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the result here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Largest circuit width the dense simulator accepts.
    #[arg(long, global = true, env = "SHORKIT_DENSE_CAP", default_value_t = DEFAULT_DENSE_CAP)]
    dense_cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emit a template circuit in the text format.
    Build(BuildArgs),
    /// Measurement distribution of the exponent register after order finding.
    Simulate(SimulateArgs),
    /// Lower a circuit file to native R/XX gates.
    Transpile(TranspileArgs),
    /// Resource table of the transpiled order-finding circuit.
    Estimate(EstimateArgs),
    /// Factor N with simulated order finding.
    Factor(FactorArgs),
    /// Decompose a 2x2 unitary given as re00 im00 re01 im01 re10 im10 re11 im11.
    DecomposeU(DecomposeArgs),
}

#[derive(Debug, Args)]
struct BuildArgs {
    #[arg(long)]
    template: String,
    #[arg(long = "N", default_value_t = 5)]
    modulus: u64,
    #[arg(long, default_value_t = 3)]
    y: u64,
    /// Register width; defaults to the bit length of N.
    #[arg(long)]
    n: Option<usize>,
    /// Exponent register width; defaults to 2n + 2.
    #[arg(long)]
    nx: Option<usize>,
    /// Multiplier for Ctrl_MULT_MOD; defaults to y.
    #[arg(long)]
    m: Option<u64>,
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long, default_value_t = 3)]
    qft_width: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Structured,
    Dense,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long = "N")]
    modulus: u64,
    #[arg(long)]
    y: u64,
    /// Exponent register width; defaults to 2n + 2.
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long, value_enum, default_value_t = Engine::Structured)]
    engine: Engine,
    /// Report an empirical distribution of this many shots.
    #[arg(long)]
    shots: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct TranspileArgs {
    circuit: PathBuf,
    /// Wire pair `a,b` whose XX coupling only supports negative chi.
    #[arg(long = "negative-pair")]
    negative_pairs: Vec<String>,
    /// Check unitary equivalence densely (width must be within the dense cap).
    #[arg(long)]
    verify: bool,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    /// Inclusive range `a..b` of register widths n, or a single n.
    #[arg(long, default_value = "2..5")]
    n_range: String,
}

#[derive(Debug, Args)]
struct FactorArgs {
    #[arg(long = "N")]
    modulus: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = shorkit::shor::DEFAULT_MAX_TRIALS)]
    max_trials: usize,
    #[arg(long, default_value_t = shorkit::shor::DEFAULT_MAX_SAMPLES)]
    max_samples: usize,
    /// Exponent register width; defaults to 2n + 2.
    #[arg(long)]
    nx: Option<usize>,
    /// Sample from an empirical distribution of this many shots.
    #[arg(long)]
    shots: Option<usize>,
}

#[derive(Debug, Args)]
struct DecomposeArgs {
    #[arg(num_args = 8, allow_negative_numbers = true, required = true)]
    entries: Vec<f64>,
}

enum CliError {
    Validation(String),
    Io(String),
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Validation(e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = run(&cli).and_then(|out| emit(&cli, &out));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit(cli: &Cli, out: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(path) => {
            fs::write(path, out).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => io::stdout()
            .write_all(out.as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Build(a) => run_build(a, cli.format.unwrap_or(Format::Text)),
        Command::Simulate(a) => run_simulate(a, cli.format.unwrap_or(Format::Csv), cli.dense_cap),
        Command::Transpile(a) => {
            run_transpile(a, cli.format.unwrap_or(Format::Text), cli.dense_cap)
        }
        Command::Estimate(a) => run_estimate(a, cli.format.unwrap_or(Format::Csv)),
        Command::Factor(a) => run_factor(a, cli.format.unwrap_or(Format::Json)),
        Command::DecomposeU(a) => run_decompose(a, cli.format.unwrap_or(Format::Json)),
    }
}

fn unsupported(cmd: &str, f: Format) -> CliError {
    invalid(format!("--format {f:?} is not available for `{cmd}`").to_lowercase())
}

/// Serialises to pretty JSON with every float cut to the report precision.
fn to_json<T: Serialize>(v: &T) -> Result<String, CliError> {
    let mut value = serde_json::to_value(v)?;
    round_floats(&mut value);
    Ok(serde_json::to_string_pretty(&value)? + "\n")
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or_default();
            if let Some(r) = sig(x)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
            {
                *n = r;
            }
        }
        Value::Array(xs) => xs.iter_mut().for_each(round_floats),
        Value::Object(m) => m.values_mut().for_each(round_floats),
        _ => {}
    }
}

fn modulus_width(modulus: u64) -> Result<usize, CliError> {
    if modulus < 2 {
        return Err(invalid(format!("N must be at least 2, got {modulus}")));
    }
    Ok(bit_length(modulus))
}

fn run_build(a: &BuildArgs, format: Format) -> Result<String, CliError> {
    let name: TemplateName = a.template.parse()?;
    let n = match a.n {
        Some(n) => n,
        None => modulus_width(a.modulus)?,
    };
    let params = TemplateParams {
        modulus: a.modulus,
        y: a.y,
        n,
        n_x: a.nx.unwrap_or(2 * n + 2),
        m: a.m.unwrap_or(a.y),
    };
    let opts = BuildOptions {
        k: a.k,
        qft_width: a.qft_width,
    };
    let c = build(name, &params, &opts)?;
    match format {
        Format::Text => Ok(serialize(&c) + "\n"),
        Format::Json => to_json(&json!({
            "template": name.to_string(),
            "params": params,
            "width": c.width(),
            "gate_count": c.len(),
            "counts": c.counts(),
            "circuit": serialize(&c),
        })),
        f => Err(unsupported("build", f)),
    }
}

fn run_simulate(a: &SimulateArgs, format: Format, dense_cap: usize) -> Result<String, CliError> {
    let n = modulus_width(a.modulus)?;
    let n_x = a.nx.unwrap_or(2 * n + 2);
    if n_x == 0 || n_x > 24 {
        return Err(invalid(format!("--nx must be between 1 and 24, got {n_x}")));
    }
    let exact = match a.engine {
        Engine::Structured => order_finding_distribution(a.modulus, a.y, n_x)?,
        Engine::Dense => {
            dense_order_finding_distribution(a.modulus, a.y, n_x, &DenseConfig { cap: dense_cap })?
        }
    };
    let dist: Distribution = match a.shots {
        Some(0) => return Err(invalid("--shots must be positive")),
        Some(s) => {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(a.seed);
            exact.sample_shots(&mut rng, s)
        }
        None => exact,
    };
    match format {
        Format::Csv => Ok(dist.to_csv()),
        Format::Json => to_json(&json!({
            "N": a.modulus,
            "y": a.y,
            "n_x": n_x,
            "engine": format!("{:?}", a.engine).to_lowercase(),
            "shots": a.shots,
            "distribution": dist.entries(),
        })),
        Format::Text => {
            let mut out = format!("# N={} y={} n_x={}\n", a.modulus, a.y, n_x);
            for e in dist.entries() {
                out.push_str(&format!(
                    "{:>w$}  {:0b$b}  {}\n",
                    e.outcome,
                    e.outcome,
                    sig(e.probability),
                    w = n_x.div_ceil(3) + 1,
                    b = n_x
                ));
            }
            Ok(out)
        }
    }
}

fn parse_pair(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || {
        invalid(format!(
            "--negative-pair expects `a,b` with distinct wires, got `{s}`"
        ))
    };
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == b {
        return Err(bad());
    }
    Ok((a.min(b), a.max(b)))
}

fn run_transpile(a: &TranspileArgs, format: Format, dense_cap: usize) -> Result<String, CliError> {
    let text = fs::read_to_string(&a.circuit)
        .map_err(|e| CliError::Io(format!("{}: {e}", a.circuit.display())))?;
    let c = parse(&text).map_err(|e| invalid(format!("{}: {e}", a.circuit.display())))?;
    let mut cfg = TranspileConfig::default();
    for p in &a.negative_pairs {
        cfg.negative_pairs.insert(parse_pair(p)?);
    }
    let program = transpile_with(&c, &cfg)?;
    if a.verify {
        if c.width() > dense_cap.min(12) {
            return Err(invalid(format!(
                "--verify needs width <= {}, circuit has {}",
                dense_cap.min(12),
                c.width()
            )));
        }
        let err = equivalence_error(&c, &program)?;
        if err > 1e-8 {
            return Err(invalid(format!(
                "transpiled program deviates by {}",
                sig(err)
            )));
        }
        eprintln!("verified: max deviation {}", sig(err));
    }
    match format {
        Format::Text => Ok(program.to_text()),
        Format::Json => to_json(&program),
        f => Err(unsupported("transpile", f)),
    }
}

fn parse_range(s: &str) -> Result<std::ops::RangeInclusive<usize>, CliError> {
    let bad = || {
        invalid(format!(
            "--n-range expects `a..b` or `n` with 2 <= a <= b <= 16, got `{s}`"
        ))
    };
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo, hi.trim_start_matches('=')),
        None => (s, s),
    };
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().parse().map_err(|_| bad())?;
    if lo < 2 || lo > hi || hi > 16 {
        return Err(bad());
    }
    Ok(lo..=hi)
}

fn run_estimate(a: &EstimateArgs, format: Format) -> Result<String, CliError> {
    let rows = estimate_table(parse_range(&a.n_range)?)?;
    match format {
        Format::Csv => Ok(table_csv(&rows)),
        Format::Json => to_json(&rows),
        Format::Text => Ok(estimate_text(&rows)),
    }
}

fn estimate_text(rows: &[ResourceReport]) -> String {
    let mut out = format!(
        "{:<12} {:>16} {:>16} {:>14}   {}\n",
        "max N", "all native", "two-qubit", "depth", "instance"
    );
    for r in rows {
        out.push_str(&format!(
            "{:<12} {:>16} {:>16} {:>14}   N={} y={} n_x={}\n",
            format!("2^{}", r.n),
            r.total_native,
            r.two_qubit,
            format!("{}*3", r.depth_bound / 3),
            r.modulus,
            r.y,
            r.n_x
        ));
    }
    out
}

fn run_factor(a: &FactorArgs, format: Format) -> Result<String, CliError> {
    let cfg = ShorConfig {
        max_trials: a.max_trials,
        max_samples: a.max_samples.max(1),
        n_x: a.nx,
        sampling: match a.shots {
            Some(0) => return Err(invalid("--shots must be positive")),
            Some(s) => SamplingMode::Shots(s),
            None => SamplingMode::Exact,
        },
    };
    modulus_width(a.modulus)?;
    if a.modulus >= 1 << 10 {
        return Err(invalid(format!(
            "N = {} is too big for simulated order finding (limit 1023)",
            a.modulus
        )));
    }
    let o = factor_with(a.modulus, a.seed, &cfg, &mut OrderFinder::new())?;
    match format {
        Format::Json => to_json(&o),
        Format::Text => Ok(factor_text(&o)),
        f => Err(unsupported("factor", f)),
    }
}

fn factor_text(o: &ShorOutcome) -> String {
    let mut out = String::new();
    for (i, t) in o.trials.iter().enumerate() {
        out.push_str(&format!(
            "trial {}: x={} gcd_shortcut={} outcomes={:?} order={} factor={}\n",
            i + 1,
            t.x,
            t.gcd_shortcut,
            t.outcomes,
            t.order.map_or("-".into(), |r| r.to_string()),
            t.factor.map_or("-".into(), |f| f.to_string()),
        ));
    }
    match (o.factor, o.cofactor) {
        (Some(f), Some(g)) => {
            out.push_str(&format!("{} = {} * {} ({:?})\n", o.modulus, f, g, o.method))
        }
        _ => out.push_str(&format!(
            "no factor found for {} after {} trials\n",
            o.modulus, o.trial_count
        )),
    }
    out
}

fn run_decompose(a: &DecomposeArgs, format: Format) -> Result<String, CliError> {
    let e = &a.entries;
    let z = |i: usize| Complex64::new(e[2 * i], e[2 * i + 1]);
    let u: Matrix2 = [[z(0), z(1)], [z(2), z(3)]];
    let p = decompose_unitary(&u)?;
    match format {
        Format::Json => to_json(&p),
        Format::Text => Ok(format!(
            "a {}\nb {}\nc {}\nd {}\n",
            sig(p.a),
            sig(p.b),
            sig(p.c),
            sig(p.d)
        )),
        f => Err(unsupported("decompose-u", f)),
    }
}
