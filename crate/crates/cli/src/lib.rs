use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use qwsearch::classify::{classify_pair, enumerate_suspects, suspect_constant, write_suspects_csv, PairClass};
use qwsearch::experiment::sweep::{run_sweep, SweepConfig};
use qwsearch::experiment::{
    critical_m, tau_curve, write_critical_m_csv, write_tau_curve_csv, Population, RunOptions, DEFAULT_TAU_POINTS,
};
use qwsearch::spectral::{numeric_extreme_eigenphases, predicted_success, SpectralPrediction, DENSE_MAX_SIDE};
use qwsearch::{probability_trace, CoinPair, Error, GridSpec, MarkedConfig, Vertex};

#[derive(Parser, Debug)]
#[command(name = "qwsearch", version, about = "Quantum-walk spatial search on the n x n torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Success probability p(t) for t = 0..=t_max from the uniform state.
    Simulate {
        #[arg(long)]
        n: usize,
        /// Marked vertex as `x,y`; repeat for several.
        #[arg(long = "marked", required = true)]
        marked: Vec<Vertex>,
        #[arg(long = "t-max")]
        t_max: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Analytic prediction for two marked vertices.
    Predict {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m0: Vertex,
        #[arg(long)]
        m1: Vertex,
        /// Compare against a dense eigendecomposition (n <= 16).
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Sufficient-condition verdict for two marked vertices.
    Classify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m0: Vertex,
        #[arg(long)]
        m1: Vertex,
        #[command(flatten)]
        output: Output,
    },
    /// Every even-parity offset that fails the sufficient condition.
    Suspects {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Mean success probability against tau = M/N.
    TauCurve {
        /// Grid side; repeat for several sizes.
        #[arg(long = "n", required = true)]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', conflicts_with = "m_list")]
        taus: Option<Vec<f64>>,
        #[arg(long = "m-list", value_delimiter = ',')]
        m_list: Option<Vec<usize>>,
        /// Number of log-spaced tau points when neither --taus nor --m-list is given.
        #[arg(long, default_value_t = DEFAULT_TAU_POINTS)]
        points: usize,
        #[command(flatten)]
        run: RunArgs,
        /// Stop after this many vertex-steps of simulation.
        #[arg(long)]
        budget: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Smallest marked count at which the classical baseline wins.
    CriticalM {
        #[arg(long = "n", required = true)]
        sizes: Vec<usize>,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Run the jobs listed in a JSON config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, env = "QWSEARCH_THREADS")]
        threads: Option<usize>,
        /// Overrides `out_dir` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, env = "QWSEARCH_THREADS")]
    threads: Option<usize>,
}

#[derive(Args, Debug)]
struct Output {
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(
                Error::InvalidGrid(_)
                | Error::VertexOutOfRange { .. }
                | Error::DuplicateVertex { .. }
                | Error::InvalidConfiguration(_)
                | Error::Config { .. },
            ) => 2,
            Failure::Core(Error::Budget(_) | Error::Io(_)) => 3,
            Failure::Core(Error::Singularity(_)) | Failure::Internal(_) => 4,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

type CliResult = Result<(), Failure>;

/// Parses `args` (program name first), runs the command and returns the process exit code.
///
/// Usage errors return 2, `--help` and `--version` return 0.
pub fn run_from<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code().clamp(0, 255) as u8;
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("qwsearch: {e}");
            e.exit_code()
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Simulate { n, marked, t_max, output } => simulate(n, marked, t_max, &output),
        Command::Predict { n, m0, m1, oracle, output } => predict(n, m0, m1, oracle, &output),
        Command::Classify { n, m0, m1, output } => {
            let class = classify_pair(GridSpec::new(n)?, m0, m1)?;
            emit_record(&class_json(&class)?, &output, Format::Json)
        }
        Command::Suspects { n, output } => suspects(n, &output),
        Command::TauCurve { sizes, taus, m_list, points, run, budget, output } => {
            let population = match (taus, m_list) {
                (Some(t), _) => Population::Taus(t),
                (None, Some(m)) => Population::Counts(m),
                (None, None) => Population::LogSpaced(points),
            };
            let opts = RunOptions { threads: run.threads, work_budget: budget };
            let curve = tau_curve(&sizes, &population, run.trials, run.seed, opts)?;
            let bytes = match output.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_tau_curve_csv(&curve, &mut buf)?;
                    buf
                }
                Format::Json => to_json(&curve)?,
            };
            write_output(output.out.as_deref(), &bytes)?;
            match curve.truncated {
                Some(reason) => Err(Error::Budget(reason).into()),
                None => Ok(()),
            }
        }
        Command::CriticalM { sizes, run, output } => {
            let opts = RunOptions { threads: run.threads, work_budget: None };
            let results = sizes
                .iter()
                .map(|&n| critical_m(GridSpec::new(n)?, run.trials, run.seed, opts))
                .collect::<qwsearch::Result<Vec<_>>>()?;
            let bytes = match output.format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_critical_m_csv(&results, &mut buf)?;
                    buf
                }
                Format::Json => to_json(&results)?,
            };
            write_output(output.out.as_deref(), &bytes)
        }
        Command::Sweep { config, threads, out } => {
            let mut cfg = SweepConfig::load(&config)?;
            if let Some(dir) = out {
                cfg.out_dir = dir;
            }
            let outcome = run_sweep(&cfg, threads)?;
            for f in &outcome.files {
                eprintln!("wrote {}", f.display());
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct TracePoint {
    t: usize,
    p: f64,
}

fn simulate(n: usize, marked: Vec<Vertex>, t_max: usize, output: &Output) -> CliResult {
    let grid = GridSpec::new(n)?;
    let config = MarkedConfig::new(grid, marked)?;
    let trace = probability_trace(grid, &config, &CoinPair::standard(), t_max)?;
    let bytes = match output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("t,p\n");
            for (t, p) in trace.iter().enumerate() {
                s.push_str(&format!("{t},{p}\n"));
            }
            s.into_bytes()
        }
        Format::Json => {
            let points: Vec<TracePoint> = trace.iter().enumerate().map(|(t, &p)| TracePoint { t, p }).collect();
            to_json(&points)?
        }
    };
    write_output(output.out.as_deref(), &bytes)
}

#[derive(Serialize)]
struct OracleComparison {
    numeric_lambda_plus: f64,
    numeric_lambda_minus: f64,
    predicted_lambda_plus: f64,
    relative_error: f64,
}

#[derive(Serialize)]
struct PredictReport {
    reliability: &'static str,
    #[serde(flatten)]
    prediction: SpectralPrediction,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleComparison>,
}

fn predict(n: usize, m0: Vertex, m1: Vertex, oracle: bool, output: &Output) -> CliResult {
    let grid = GridSpec::new(n)?;
    let prediction = predicted_success(grid, m0, m1)?;
    let oracle = if oracle {
        if n > DENSE_MAX_SIDE {
            return Err(Error::Budget(format!("--oracle needs n <= {DENSE_MAX_SIDE}, got {n}")).into());
        }
        let config = MarkedConfig::new(grid, [m0, m1])?;
        let (plus, minus) = numeric_extreme_eigenphases(grid, &config, &CoinPair::standard())?;
        let predicted = prediction.smallest_positive_root;
        Some(OracleComparison {
            numeric_lambda_plus: plus,
            numeric_lambda_minus: minus,
            predicted_lambda_plus: predicted,
            relative_error: ((predicted - plus) / plus).abs(),
        })
    } else {
        None
    };
    let reliability = if prediction.reliable { "UP" } else { "DOWN" };
    if !prediction.reliable {
        eprintln!(
            "reliability DOWN: I^2 = {} is not small against N ln N / pi + M = {}; the two-mode curve may not describe the search",
            prediction.i_sum * prediction.i_sum,
            prediction.c_asymptotic + prediction.m_sum
        );
    }
    let report = PredictReport { reliability, prediction, oracle };
    let value = serde_json::to_value(&report).map_err(|e| Failure::Internal(e.to_string()))?;
    emit_record(&value, output, Format::Json)
}

fn class_json(class: &PairClass) -> Result<Value, Failure> {
    serde_json::to_value(class).map_err(|e| Failure::Internal(e.to_string()))
}

fn suspects(n: usize, output: &Output) -> CliResult {
    let grid = GridSpec::new(n)?;
    let list = enumerate_suspects(grid);
    eprintln!("{} suspect offsets, count / (n ln n) = {}", list.len(), suspect_constant(grid, list.len()));
    let bytes = match output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            write_suspects_csv(grid, &list, &mut buf)?;
            buf
        }
        Format::Json => {
            let rows: Vec<Value> = list
                .iter()
                .map(|s| {
                    serde_json::json!({
                        "n": n, "x": s.x, "y": s.y, "min_x": s.min_x, "min_y": s.min_y, "product": s.product
                    })
                })
                .collect();
            to_json(&rows)?
        }
    };
    write_output(output.out.as_deref(), &bytes)
}

/// Writes one record as a JSON object or as a two-line CSV with flattened keys.
fn emit_record(value: &Value, output: &Output, default: Format) -> CliResult {
    let bytes = match output.format.unwrap_or(default) {
        Format::Json => to_json(value)?,
        Format::Csv => {
            let mut fields = Vec::new();
            flatten("", value, &mut fields);
            let header: Vec<&str> = fields.iter().map(|(k, _)| k.as_str()).collect();
            let row: Vec<&str> = fields.iter().map(|(_, v)| v.as_str()).collect();
            format!("{}\n{}\n", header.join(","), row.join(",")).into_bytes()
        }
    };
    write_output(output.out.as_deref(), &bytes)
}

/// Nested objects and arrays become `parent_child` / `parent_index` columns; null becomes empty.
fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}_{k}") };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten(&key(k), v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), v, out);
            }
        }
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), csv_field(s))),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>, Failure> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| Failure::Internal(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> CliResult {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes).and_then(|_| stdout.flush()).map_err(Error::from)?;
        }
    }
    Ok(())
}
