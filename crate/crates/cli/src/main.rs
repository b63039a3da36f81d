//! Command-line front end for the `oddfactor` library.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 no factor or a
//! violating set, 4 a result that contradicts the threshold theorem.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use oddfactor::factor::{
    check_amahashi, find_odd_factor, verify_certificate, AmahashiOptions, FactorReport, FinderOptions,
};
use oddfactor::io::{parse_edge_list, serialize_edge_list, to_dot};
use oddfactor::spectral::{adjacency_matrix, eigenvalues_sym, Spectrum, DEFAULT_TOL};
use oddfactor::thresholds::{build_extremal, lwy_threshold, prior_1factor_thresholds, threshold_params};
use oddfactor::verify::{
    bound_sweep, case2_polynomial_check, randomized_theorem_campaign, sharpness_check, sweep_csv, BPolicy,
    CampaignConfig, VerifyError,
};
use oddfactor::{Execution, Graph};
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Parser)]
#[command(name = "oddfactor", version, about = "Spectral conditions for odd [1,b]-factors in regular graphs")]
struct Cli {
    /// Decimal places for floating-point output.
    #[arg(long, global = true, default_value_t = 9)]
    precision: usize,
    /// Write results here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emit the extremal graph H(r, eta) or a named graph.
    Construct(ConstructArgs),
    /// Print the adjacency spectrum of a graph.
    Spectrum(SpectrumArgs),
    /// Print rho(r, b) with its parameters and the earlier bounds.
    Threshold(ThresholdArgs),
    /// Decide the subset condition and print a certificate or violating set.
    Check(FactorArgs),
    /// Search for an odd [1, b]-factor.
    FindFactor(FactorArgs),
    /// Numerical checks of the threshold theorem.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
struct GraphSource {
    /// Edge-list file; stdin when neither this nor --graph is given.
    #[arg(long, short, conflicts_with = "graph")]
    input: Option<PathBuf>,
    /// Inline construction: K5, C7, E3, M4, P4, S3, Petersen or H:r=5,b=1.
    #[arg(long, short)]
    graph: Option<String>,
}

#[derive(Debug, Args)]
struct ConstructArgs {
    #[arg(long, requires = "b", conflicts_with = "graph")]
    r: Option<usize>,
    #[arg(long, requires = "r")]
    b: Option<usize>,
    /// Inline construction: K5, C7, E3, M4, P4, S3, Petersen or H:r=5,b=1.
    #[arg(long, short)]
    graph: Option<String>,
    /// Emit Graphviz DOT instead of an edge list.
    #[arg(long)]
    dot: bool,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[command(flatten)]
    source: GraphSource,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Args)]
struct ThresholdArgs {
    #[arg(long)]
    r: usize,
    #[arg(long)]
    b: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Args)]
struct FactorArgs {
    #[command(flatten)]
    source: GraphSource,
    #[arg(long)]
    b: usize,
    /// Largest edge count the exact finder accepts.
    #[arg(long, default_value_t = oddfactor::factor::DEFAULT_MAX_EDGES)]
    max_edges: usize,
}

#[derive(Debug, Subcommand)]
enum VerifyCommand {
    /// Check lambda_1(H) = rho(r, b) and the extremal counts.
    Sharpness {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        b: usize,
    },
    /// Check the quotient polynomial inequality for odd r.
    Case2 {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        b: usize,
    },
    /// Tabulate rho against the earlier bounds for 3 <= r <= r-max.
    Sweep {
        #[arg(long, default_value_t = 60)]
        r_max: usize,
        /// Only this b; every odd b < r otherwise.
        #[arg(long)]
        b: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        jobs: Jobs,
    },
    /// Test the theorem on random connected regular graphs.
    Campaign {
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 8)]
        n_min: usize,
        #[arg(long, default_value_t = 20)]
        n_max: usize,
        #[arg(long, default_value_t = 3)]
        r_min: usize,
        #[arg(long, default_value_t = 7)]
        r_max: usize,
        /// Only this b; every odd b < r otherwise.
        #[arg(long)]
        b: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        jobs: Jobs,
    },
}

#[derive(Debug, Clone, Copy, Args)]
struct Jobs {
    /// Worker threads; 1 runs sequentially, 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

impl Jobs {
    fn execution(self) -> Result<Execution, CliError> {
        if self.jobs == 1 {
            return Ok(Execution::Sequential);
        }
        if self.jobs > 1 {
            rayon::ThreadPoolBuilder::new()
                .num_threads(self.jobs)
                .build_global()
                .map_err(|e| CliError::Input(e.to_string()))?;
        }
        Ok(Execution::Parallel)
    }
}

#[derive(Debug)]
enum CliError {
    /// Bad flags, unreadable or malformed input.
    Input(String),
    /// No factor exists; the payload has already been printed.
    NoFactor,
    Contradiction(String),
}

impl CliError {
    fn input(e: impl std::fmt::Display) -> Self {
        CliError::Input(e.to_string())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::NoFactor => 3,
            CliError::Contradiction(_) => 4,
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        CliError::input(e)
    }
}

struct Output {
    path: Option<PathBuf>,
    precision: usize,
    text: String,
}

impl Output {
    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn json<T: Serialize>(&mut self, value: &T) {
        let mut v = serde_json::to_value(value).expect("report types serialize");
        round_floats(&mut v, self.precision);
        self.line(serde_json::to_string(&v).expect("json value"));
    }

    fn float(&self, x: f64) -> String {
        fixed(x, self.precision)
    }

    fn flush(self) -> Result<(), CliError> {
        match self.path {
            Some(p) => fs::write(&p, self.text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
            None => io::stdout().write_all(self.text.as_bytes()).map_err(CliError::input),
        }
    }
}

/// `x` at `precision` decimals, without a sign on zero.
fn fixed(x: f64, precision: usize) -> String {
    let s = format!("{x:.precision$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|c| c == b'0' || c == b'.') => rest.to_string(),
        _ => s,
    }
}

/// Rounds every non-integral JSON number to `precision` decimals.
fn round_floats(v: &mut Value, precision: usize) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64");
            let rounded: f64 = fixed(x, precision).parse().expect("formatted float");
            if let Some(num) = serde_json::Number::from_f64(rounded) {
                *n = num;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|x| round_floats(x, precision)),
        Value::Object(map) => map.values_mut().for_each(|x| round_floats(x, precision)),
        _ => {}
    }
}

fn parse_spec(spec: &str) -> Result<Graph, CliError> {
    let bad = || CliError::Input(format!("unrecognized graph spec {spec:?}"));
    if spec.eq_ignore_ascii_case("petersen") {
        return Ok(Graph::petersen());
    }
    if let Some(rest) = spec.strip_prefix("H:") {
        let (mut r, mut b) = (None, None);
        for part in rest.split(',') {
            let (key, value) = part.split_once('=').ok_or_else(bad)?;
            let value: usize = value.trim().parse().map_err(|_| bad())?;
            match key.trim() {
                "r" => r = Some(value),
                "b" => b = Some(value),
                _ => return Err(bad()),
            }
        }
        return extremal(r.ok_or_else(bad)?, b.ok_or_else(bad)?);
    }
    let mut chars = spec.chars();
    let kind = chars.next().ok_or_else(bad)?;
    let k: usize = chars.as_str().parse().map_err(|_| bad())?;
    match kind {
        'K' => Ok(Graph::complete(k)),
        'C' => Graph::cycle(k).map_err(CliError::input),
        'E' => Ok(Graph::empty(k)),
        'M' => Graph::matching_complement(k).map_err(CliError::input),
        'P' => Ok(Graph::path(k)),
        'S' => Ok(Graph::star(k)),
        _ => Err(bad()),
    }
}

fn extremal(r: usize, b: usize) -> Result<Graph, CliError> {
    let p = threshold_params(r, b).map_err(CliError::input)?;
    build_extremal(&p).map_err(CliError::input)
}

fn read_graph(src: &GraphSource) -> Result<Graph, CliError> {
    if let Some(spec) = &src.graph {
        return parse_spec(spec);
    }
    let text = match &src.input {
        Some(p) => fs::read_to_string(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(CliError::input)?;
            s
        }
    };
    parse_edge_list(&text).map_err(CliError::input)
}

fn b_policy(b: Option<usize>) -> Result<BPolicy, CliError> {
    match b {
        None => Ok(BPolicy::AllOdd),
        Some(b) if b % 2 == 1 => Ok(BPolicy::Fixed(b)),
        Some(b) => Err(CliError::Input(format!("b must be a positive odd integer, got {b}"))),
    }
}

#[derive(Serialize)]
struct ThresholdOutput {
    r: usize,
    b: usize,
    ceil_rb: usize,
    epsilon: usize,
    eta: usize,
    parity_case: &'static str,
    rho: f64,
    lwy: f64,
    cgh: Option<f64>,
    bh: Option<f64>,
}

fn threshold(args: &ThresholdArgs, out: &mut Output) -> Result<(), CliError> {
    let p = threshold_params(args.r, args.b).map_err(CliError::input)?;
    let prior = (args.b == 1).then(|| prior_1factor_thresholds(args.r)).transpose().map_err(CliError::input)?;
    let report = ThresholdOutput {
        r: p.r,
        b: p.b,
        ceil_rb: p.ceil_rb,
        epsilon: p.epsilon,
        eta: p.eta,
        parity_case: p.parity_case.as_str(),
        rho: p.rho,
        lwy: lwy_threshold(args.r, args.b).map_err(CliError::input)?,
        cgh: prior.map(|x| x.cgh),
        bh: prior.map(|x| x.bh),
    };
    match args.format {
        Format::Json => out.json(&report),
        Format::Text | Format::Csv => {
            let opt = |x: Option<f64>| x.map(|v| out.float(v)).unwrap_or_else(|| "-".into());
            let lines = [
                format!("r {}", report.r),
                format!("b {}", report.b),
                format!("ceil_rb {}", report.ceil_rb),
                format!("epsilon {}", report.epsilon),
                format!("eta {}", report.eta),
                format!("parity_case {}", report.parity_case),
                format!("rho {}", out.float(report.rho)),
                format!("lwy {}", out.float(report.lwy)),
                format!("cgh {}", opt(report.cgh)),
                format!("bh {}", opt(report.bh)),
            ];
            lines.iter().for_each(|l| out.line(l));
        }
    }
    Ok(())
}

fn spectrum(args: &SpectrumArgs, out: &mut Output) -> Result<(), CliError> {
    if !(args.tol.is_finite() && args.tol > 0.0) {
        return Err(CliError::Input(format!("tolerance must be positive, got {}", args.tol)));
    }
    let g = read_graph(&args.source)?;
    let s = if g.order() == 0 {
        Spectrum { values: Vec::new(), tol: args.tol }
    } else {
        eigenvalues_sym(&adjacency_matrix(&g), args.tol).map_err(CliError::input)?
    };
    match args.format {
        Format::Json => {
            // the tolerance is an input setting, printed as given
            let mut v = serde_json::to_value(&s).expect("spectrum serializes");
            round_floats(&mut v, out.precision);
            v["tol"] = serde_json::json!(s.tol);
            out.line(v.to_string());
        }
        Format::Text | Format::Csv => {
            let values: Vec<String> = s.values.iter().map(|&x| out.float(x)).collect();
            values.iter().for_each(|v| out.line(v));
        }
    }
    Ok(())
}

fn check(args: &FactorArgs, out: &mut Output) -> Result<(), CliError> {
    let g = read_graph(&args.source)?;
    let outcome = check_amahashi(&g, args.b, AmahashiOptions::default()).map_err(CliError::input)?;
    if let Some(v) = outcome.violation() {
        out.json(&FactorReport::from(v));
        return Err(CliError::NoFactor);
    }
    match find_odd_factor(&g, args.b, FinderOptions { max_edges: args.max_edges }) {
        Ok(Some(cert)) => {
            verify_certificate(&g, args.b, &cert)
                .map_err(|d| CliError::Contradiction(format!("finder returned an invalid certificate: {d:?}")))?;
            out.json(&FactorReport::from(&cert));
            Ok(())
        }
        Ok(None) => Err(CliError::Contradiction("subset condition holds but the exact search found no factor".into())),
        // the condition alone settles existence when the finder is out of range
        Err(_) => {
            out.json(&FactorReport::Holds);
            Ok(())
        }
    }
}

fn find_factor(args: &FactorArgs, out: &mut Output) -> Result<(), CliError> {
    let g = read_graph(&args.source)?;
    let found = find_odd_factor(&g, args.b, FinderOptions { max_edges: args.max_edges }).map_err(CliError::input)?;
    if let Some(cert) = found {
        out.json(&FactorReport::from(&cert));
        return Ok(());
    }
    let witness = check_amahashi(&g, args.b, AmahashiOptions::default()).ok();
    match witness.as_ref().and_then(|w| w.violation()) {
        Some(v) => out.json(&FactorReport::from(v)),
        None if witness.is_some() => {
            return Err(CliError::Contradiction("no factor found but the subset condition holds".into()))
        }
        None => out.json(&FactorReport::None),
    }
    Err(CliError::NoFactor)
}

fn construct(args: &ConstructArgs, out: &mut Output) -> Result<(), CliError> {
    let g = match (&args.graph, args.r, args.b) {
        (Some(spec), _, _) => parse_spec(spec)?,
        (None, Some(r), Some(b)) => extremal(r, b)?,
        _ => return Err(CliError::Input("construct needs --r and --b, or --graph".into())),
    };
    let text = if args.dot { to_dot(&g) } else { serialize_edge_list(&g) };
    out.text.push_str(&text);
    Ok(())
}

fn verify(cmd: &VerifyCommand, out: &mut Output) -> Result<(), CliError> {
    match cmd {
        VerifyCommand::Sharpness { r, b } => {
            let rep = sharpness_check(*r, *b)?;
            out.json(&rep);
            if !rep.passed {
                return Err(CliError::Contradiction(format!(
                    "lambda1(H) = {} differs from rho = {}",
                    rep.lambda1, rep.params.rho
                )));
            }
        }
        VerifyCommand::Case2 { r, b } => {
            let rep = case2_polynomial_check(*r, *b)?;
            out.json(&rep);
            if !rep.passed {
                return Err(CliError::Contradiction("quotient polynomial is positive at rho".into()));
            }
        }
        VerifyCommand::Sweep { r_max, b, format, jobs } => {
            if *r_max < 3 {
                return Err(CliError::Input(format!("r-max must be at least 3, got {r_max}")));
            }
            let rows = bound_sweep(*r_max, b_policy(*b)?, jobs.execution()?)?;
            match format {
                Format::Csv | Format::Text => out.text.push_str(&sweep_csv(&rows, out.precision)),
                Format::Json => out.json(&rows),
            }
            let below = rows.iter().filter(|row| !row.improves_on_lwy()).count();
            if below > 0 {
                eprintln!("warning: rho < lwy on {below} of {} rows", rows.len());
            }
            let unsharp: Vec<String> = rows.iter().filter(|row| row.sharp() == Some(false)).flat_map(|row| row.violations()).collect();
            if !unsharp.is_empty() {
                return Err(CliError::Contradiction(unsharp.join("; ")));
            }
        }
        VerifyCommand::Campaign { trials, n_min, n_max, r_min, r_max, b, seed, jobs } => {
            let cfg = CampaignConfig {
                trials: *trials,
                n_range: (*n_min, *n_max),
                r_range: (*r_min, *r_max),
                b_policy: b_policy(*b)?,
                master_seed: *seed,
                execution: jobs.execution()?,
            };
            let summary = randomized_theorem_campaign(&cfg)?;
            out.json(&summary);
            if !summary.is_clean() {
                return Err(CliError::Contradiction(format!(
                    "{} trials had lambda3 < rho and no factor",
                    summary.counterexamples.len()
                )));
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut out = Output { path: cli.output.clone(), precision: cli.precision, text: String::new() };
    let result = match &cli.command {
        Command::Construct(a) => construct(a, &mut out),
        Command::Spectrum(a) => spectrum(a, &mut out),
        Command::Threshold(a) => threshold(a, &mut out),
        Command::Check(a) => check(a, &mut out),
        Command::FindFactor(a) => find_factor(a, &mut out),
        Command::Verify(v) => verify(v, &mut out),
    };
    // reports are written even when the exit status signals a negative result
    if !matches!(result, Err(CliError::Input(_))) {
        out.flush()?;
    }
    result
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Input(msg) => eprintln!("error: {msg}"),
                CliError::Contradiction(msg) => eprintln!("theorem contradiction: {msg}"),
                CliError::NoFactor => {}
            }
            ExitCode::from(e.exit_code())
        }
    }
}
