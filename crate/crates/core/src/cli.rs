//! The `causal-procure` command line: argument parsing, file I/O, and the
//! run reports every command prints.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 infeasible verdict,
//! 3 precondition or invalid input, 4 solver numerical failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::causal::{causal_feasibility, CausalVerdict, ScenarioTree};
use crate::costalloc::{aggregate, allocate_cost, participants_from_csv};
use crate::demandset::{
    coverage_curve, read_signal_csv, split, window_average, write_curve_csv, Center,
    DemandSetModel, SignalData, SignalDataset,
};
use crate::error::Error;
use crate::lp::SolverConfig;
use crate::procurement::{
    affine_bound, instance_from_json, kappa_grid, kappa_sweep, proportional_bound, solve_oracle,
    tv_proportional_bound, Certificate, KappaSweepSpec, ProcurementResult, SweepRow,
};

#[derive(Debug, Parser)]
#[command(
    name = "causal-procure",
    version,
    about = "Forward procurement of polytopic resources under causal allocation"
)]
pub struct Cli {
    /// Feasibility tolerance of the LP solver.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub feas_tol: f64,

    /// Simplex iteration limit.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub max_iterations: usize,

    /// Write the main output here instead of stdout.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Oracle (non-causal) optimal procurement cost J*.
    Jstar { instance: PathBuf },
    /// Upper bounds on the causal cost from restricted policy classes.
    Bounds {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Policy::All)]
        policy: Policy,
    },
    /// J*, exact battery J** and their ratio over a price grid; CSV output.
    PocSweep {
        spec: PathBuf,
        /// Closed grid `a:b:step`.
        #[arg(long, default_value = "0:3:0.5")]
        kappa: String,
    },
    /// Whether one causal allocation serves every scenario at the given scales.
    CausalCheck {
        instance: PathBuf,
        /// CSV (one signal per row, header row) or a JSON array of signals.
        scenarios: PathBuf,
        /// Comma-separated scale factors, one per resource.
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_negative_numbers = true
        )]
        alpha: Vec<f64>,
    },
    /// Cost-causation shares of a procurement cost.
    CostAlloc {
        /// CSV with a header row and one participant per row.
        participants: PathBuf,
        #[arg(long)]
        jss: f64,
        /// Aggregate signal, comma-separated; defaults to the sum of participants.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        signal: Option<Vec<f64>>,
    },
    /// Demand sets from signal data.
    Demand {
        #[command(subcommand)]
        action: DemandAction,
    },
}

#[derive(Debug, Clone, clap::Args)]
pub struct DemandArgs {
    /// CSV: one column is a raw series, T columns are pre-cut samples.
    pub data: PathBuf,
    #[arg(long = "T", short = 'T')]
    pub horizon: usize,
    /// Number of leading samples used for training.
    #[arg(long)]
    pub train: usize,
    #[arg(long, value_enum, default_value_t = CenterArg::Centroid)]
    pub center: CenterArg,
    /// Average a raw series over windows of this many points first.
    #[arg(long)]
    pub window: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum DemandAction {
    /// Writes the training hull and center as JSON.
    Build {
        #[command(flatten)]
        args: DemandArgs,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
    },
    /// Coverage of the validation samples over an inflation grid; CSV output.
    Coverage {
        #[command(flatten)]
        args: DemandArgs,
        /// Comma-separated list or closed grid `a:b:step`.
        #[arg(long, default_value = "1.0")]
        delta_grid: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    Prop,
    Tv,
    Affine,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CenterArg {
    Centroid,
    Origin,
}

impl From<CenterArg> for Center {
    fn from(c: CenterArg) -> Self {
        match c {
            CenterArg::Centroid => Center::Centroid,
            CenterArg::Origin => Center::Origin,
        }
    }
}

/// What a command prints. Serialized with sorted keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Vec<String>,
    /// SHA-256 of the primary input file.
    pub instance_digest: String,
    pub results: Value,
    pub wall_time_s: f64,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        // going through Value sorts every object's keys
        let v = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("report JSON: {e}")))
    }

    /// The verdict recorded in `results`, if any.
    pub fn verdict(&self) -> Option<&str> {
        self.results.get("verdict").and_then(Value::as_str)
    }
}

/// Failure of a command: a library error, or a usage / I/O problem.
#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(e) => e.exit_code(),
            CliError::Usage(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

type CliResult<T> = Result<T, CliError>;

/// Result of one command: text for the output stream and the exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: String,
    pub exit_code: i32,
}

fn read_file(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn read_text(path: &Path) -> CliResult<String> {
    String::from_utf8(read_file(path)?)
        .map_err(|e| CliError::Usage(format!("{} is not UTF-8: {e}", path.display())))
}

fn digest(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    let mut s = String::with_capacity(64);
    for b in hash {
        let _ = write!(s, "{b:02x}");
    }
    s
}

fn result_json(r: &ProcurementResult) -> Value {
    let certificate = match &r.certificate {
        Certificate::Factorization { pieces } => {
            json!({ "kind": "factorization", "pieces": pieces })
        }
        Certificate::Proportional {
            beta,
            scale_factors,
        } => {
            json!({ "kind": "proportional", "beta": beta, "scale_factors": scale_factors })
        }
        Certificate::TimeVarying { beta } => json!({ "kind": "time_varying", "beta": beta }),
        Certificate::Affine(p) => json!({ "kind": "affine", "policy": p }),
    };
    json!({ "verdict": "feasible", "cost": r.cost, "alphas": r.alphas, "certificate": certificate })
}

/// Infeasible verdicts become report entries; other errors propagate.
fn verdict_json(res: Result<ProcurementResult, Error>) -> CliResult<Value> {
    match res {
        Ok(r) => Ok(result_json(&r)),
        Err(Error::Infeasible(msg)) => Ok(json!({ "verdict": "infeasible", "message": msg })),
        Err(e) => Err(e.into()),
    }
}

fn solver_config(cli: &Cli) -> CliResult<SolverConfig> {
    if !(cli.feas_tol > 0.0) || cli.max_iterations == 0 {
        return Err(CliError::Usage(
            "tolerance and iteration limit must be positive".into(),
        ));
    }
    Ok(SolverConfig {
        feas_tol: cli.feas_tol,
        max_iterations: cli.max_iterations,
        ..SolverConfig::default()
    })
}

/// `J*` for an instance file.
pub fn cmd_jstar(instance: &Path, cfg: &SolverConfig) -> CliResult<RunReport> {
    let start = Instant::now();
    let bytes = read_file(instance)?;
    let inst = instance_from_json(&String::from_utf8_lossy(&bytes), cfg)?;
    let mut results = verdict_json(solve_oracle(&inst, cfg))?;
    if let Some(cost) = results.get("cost").cloned() {
        results["jstar"] = cost;
    }
    Ok(RunReport {
        command: vec!["jstar".into(), instance.display().to_string()],
        instance_digest: digest(&bytes),
        results,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Policy bounds; `Policy::All` adds `J*` and a check of the bound chain.
pub fn cmd_bounds(instance: &Path, policy: Policy, cfg: &SolverConfig) -> CliResult<RunReport> {
    let start = Instant::now();
    let bytes = read_file(instance)?;
    let inst = instance_from_json(&String::from_utf8_lossy(&bytes), cfg)?;
    let mut results = serde_json::Map::new();
    let run = |p: Policy| match p {
        Policy::Prop => verdict_json(proportional_bound(&inst, cfg)),
        Policy::Tv => verdict_json(tv_proportional_bound(&inst, cfg)),
        Policy::Affine => verdict_json(affine_bound(&inst, cfg)),
        Policy::All => unreachable!(),
    };
    let name = |p: Policy| match p {
        Policy::Prop => "prop",
        Policy::Tv => "tv",
        Policy::Affine => "affine",
        Policy::All => "all",
    };
    if policy == Policy::All {
        results.insert("jstar".into(), verdict_json(solve_oracle(&inst, cfg))?);
        for p in [Policy::Affine, Policy::Tv, Policy::Prop] {
            results.insert(name(p).into(), run(p)?);
        }
        // J* ≤ affine ≤ tv ≤ prop over the entries that solved
        let costs: Vec<f64> = ["jstar", "affine", "tv", "prop"]
            .iter()
            .map(|k| {
                results[*k]
                    .get("cost")
                    .and_then(Value::as_f64)
                    .unwrap_or(f64::INFINITY)
            })
            .collect();
        let slack = 10.0 * cfg.feas_tol * (1.0 + costs[0].abs().min(1e12));
        let holds = costs
            .windows(2)
            .all(|w| w[0] <= w[1] + slack || w[1].is_infinite());
        results.insert("chain_holds".into(), json!(holds));
        results.insert(
            "verdict".into(),
            json!(if results["jstar"]["verdict"] == "infeasible" {
                "infeasible"
            } else {
                "feasible"
            }),
        );
    } else {
        let v = run(policy)?;
        results.insert("verdict".into(), v["verdict"].clone());
        results.insert(name(policy).into(), v);
    }
    results.insert("policy".into(), json!(name(policy)));
    Ok(RunReport {
        command: vec![
            "bounds".into(),
            instance.display().to_string(),
            format!("--policy={}", name(policy)),
        ],
        instance_digest: digest(&bytes),
        results: Value::Object(results),
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Parses `a:b:step` into a closed grid.
pub fn parse_range(s: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!("expected a:b:step, got {s:?}")));
    }
    let mut v = [0.0; 3];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p
            .trim()
            .parse()
            .map_err(|e| CliError::Usage(format!("bad number {p:?} in {s:?}: {e}")))?;
    }
    Ok(kappa_grid(v[0], v[1], v[2])?)
}

/// Sweep rows for a battery spec file.
pub fn cmd_poc_sweep(
    spec: &Path,
    kappa: &str,
    cfg: &SolverConfig,
) -> CliResult<(Vec<SweepRow>, RunReport)> {
    let start = Instant::now();
    let bytes = read_file(spec)?;
    let parsed: KappaSweepSpec = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Lib(Error::InvalidInput(format!("sweep spec JSON: {e}"))))?;
    let grid = parse_range(kappa)?;
    let rows = kappa_sweep(&parsed, &grid, cfg)?;
    let report = RunReport {
        command: vec![
            "poc-sweep".into(),
            spec.display().to_string(),
            format!("--kappa={kappa}"),
        ],
        instance_digest: digest(&bytes),
        results: json!({ "verdict": "feasible", "rows": rows }),
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    Ok((rows, report))
}

/// `kappa,jstar,jss,poc` with `NA` where the ratio is undefined.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["kappa", "jstar", "jss", "poc"])
        .expect("in-memory write");
    for r in rows {
        let poc = r.poc.map_or_else(|| "NA".to_string(), |p| p.to_string());
        w.write_record([
            r.kappa.to_string(),
            r.jstar.to_string(),
            r.jss.to_string(),
            poc,
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("CSV is UTF-8")
}

/// Signals from CSV (header row, one signal per row) or a JSON array.
pub fn read_scenarios(text: &str) -> CliResult<Vec<Vec<f64>>> {
    if text.trim_start().starts_with('[') {
        return serde_json::from_str(text)
            .map_err(|e| CliError::Lib(Error::InvalidInput(format!("scenario JSON: {e}"))));
    }
    match read_signal_csv(text.as_bytes())? {
        SignalData::Samples(rows) => Ok(rows),
        SignalData::Series(s) => Ok(s.into_iter().map(|v| vec![v]).collect()),
    }
}

/// Causal feasibility of the given scenarios at fixed scales.
pub fn cmd_causal_check(
    instance: &Path,
    scenarios: &Path,
    alpha: &[f64],
    cfg: &SolverConfig,
) -> CliResult<RunReport> {
    let start = Instant::now();
    let bytes = read_file(instance)?;
    let inst = instance_from_json(&String::from_utf8_lossy(&bytes), cfg)?;
    let signals = read_scenarios(&read_text(scenarios)?)?;
    let tree = ScenarioTree::build(&signals)?;
    let verdict = causal_feasibility(&tree, inst.resources(), alpha, cfg)?;
    let results = match &verdict {
        CausalVerdict::Infeasible => {
            json!({ "verdict": "infeasible", "alphas": alpha, "scenarios": signals.len() })
        }
        CausalVerdict::Feasible(alloc) => {
            // per scenario, per resource trajectories
            let trajectories: Vec<Vec<Vec<f64>>> = (0..signals.len())
                .map(|s| {
                    let leaf = tree.leaf_of_signal(s);
                    (0..alpha.len())
                        .map(|i| alloc.trajectory(&tree, leaf, i))
                        .collect()
                })
                .collect();
            json!({
                "verdict": "feasible",
                "alphas": alpha,
                "scenarios": signals.len(),
                "node_allocations": alloc.alloc,
                "trajectories": trajectories,
            })
        }
    };
    Ok(RunReport {
        command: vec![
            "causal-check".into(),
            instance.display().to_string(),
            scenarios.display().to_string(),
            format!(
                "--alpha={}",
                alpha
                    .iter()
                    .map(f64::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            ),
        ],
        instance_digest: digest(&bytes),
        results,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

pub fn cmd_cost_alloc(
    participants: &Path,
    jss: f64,
    signal: Option<&[f64]>,
) -> CliResult<RunReport> {
    let start = Instant::now();
    let bytes = read_file(participants)?;
    let ps = participants_from_csv(bytes.as_slice())?;
    let e = signal.map_or_else(|| aggregate(&ps), <[f64]>::to_vec);
    let shares = allocate_cost(&ps, &e, jss)?;
    Ok(RunReport {
        command: vec![
            "cost-alloc".into(),
            participants.display().to_string(),
            format!("--jss={jss}"),
        ],
        instance_digest: digest(&bytes),
        results: json!({
            "verdict": "feasible",
            "signal": e,
            "shares": shares.shares,
            "total": shares.total,
            "audit": shares.audit,
        }),
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

fn load_demand_data(args: &DemandArgs) -> CliResult<(Vec<u8>, SignalDataset, SignalDataset)> {
    let bytes = read_file(&args.data)?;
    let mut data = read_signal_csv(bytes.as_slice())?;
    if let Some(w) = args.window {
        data = match data {
            SignalData::Series(s) => SignalData::Series(window_average(&s, w)?),
            SignalData::Samples(_) => {
                return Err(CliError::Usage(
                    "--window applies to a single-column series".into(),
                ))
            }
        };
    }
    let ds = data.into_dataset(args.horizon)?;
    let (train, validation) = split(&ds, args.train)?;
    Ok((bytes, train, validation))
}

pub fn cmd_demand_build(args: &DemandArgs, delta: f64) -> CliResult<(DemandSetModel, RunReport)> {
    let start = Instant::now();
    let (bytes, train, validation) = load_demand_data(args)?;
    let model = DemandSetModel::build(&train, args.center.into(), delta)?;
    let report = RunReport {
        command: vec![
            "demand".into(),
            "build".into(),
            args.data.display().to_string(),
        ],
        instance_digest: digest(&bytes),
        results: json!({
            "verdict": "feasible",
            "training_samples": train.len(),
            "validation_samples": validation.len(),
            "center": model.center,
            "delta": model.delta,
        }),
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    Ok((model, report))
}

/// A comma-separated list, or `a:b:step`.
pub fn parse_grid(s: &str) -> CliResult<Vec<f64>> {
    if s.contains(':') {
        return parse_range(s);
    }
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Usage(format!("bad grid value {p:?}: {e}")))
        })
        .collect()
}

pub fn cmd_demand_coverage(
    args: &DemandArgs,
    grid: &[f64],
    cfg: &SolverConfig,
) -> CliResult<String> {
    let (_, train, validation) = load_demand_data(args)?;
    let model = DemandSetModel::build(&train, args.center.into(), 1.0)?;
    let curve = coverage_curve(&model, &validation, grid, cfg)?;
    let mut buf = Vec::new();
    write_curve_csv(&mut buf, &curve)?;
    Ok(String::from_utf8(buf).expect("CSV is UTF-8"))
}

fn report_outcome(report: &RunReport) -> Outcome {
    let exit_code = if report.verdict() == Some("infeasible") {
        2
    } else {
        0
    };
    Outcome {
        output: report.to_json() + "\n",
        exit_code,
    }
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> CliResult<Outcome> {
    let cfg = solver_config(cli)?;
    Ok(match &cli.command {
        Command::Jstar { instance } => report_outcome(&cmd_jstar(instance, &cfg)?),
        Command::Bounds { instance, policy } => {
            report_outcome(&cmd_bounds(instance, *policy, &cfg)?)
        }
        Command::PocSweep { spec, kappa } => {
            let (rows, _) = cmd_poc_sweep(spec, kappa, &cfg)?;
            Outcome {
                output: sweep_csv(&rows),
                exit_code: 0,
            }
        }
        Command::CausalCheck {
            instance,
            scenarios,
            alpha,
        } => report_outcome(&cmd_causal_check(instance, scenarios, alpha, &cfg)?),
        Command::CostAlloc {
            participants,
            jss,
            signal,
        } => report_outcome(&cmd_cost_alloc(participants, *jss, signal.as_deref())?),
        Command::Demand { action } => match action {
            DemandAction::Build { args, delta } => {
                let (model, _) = cmd_demand_build(args, *delta)?;
                let text = serde_json::to_string_pretty(&model).expect("model serializes");
                Outcome {
                    output: text + "\n",
                    exit_code: 0,
                }
            }
            DemandAction::Coverage { args, delta_grid } => {
                let grid = parse_grid(delta_grid)?;
                Outcome {
                    output: cmd_demand_coverage(args, &grid, &cfg)?,
                    exit_code: 0,
                }
            }
        },
    })
}

/// Entry point of the binary: parses `args`, runs, writes output, and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(o) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &o.output),
                None => {
                    use std::io::Write;
                    std::io::stdout().write_all(o.output.as_bytes())
                }
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return 1;
            }
            o.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
