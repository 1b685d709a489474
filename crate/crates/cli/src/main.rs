//! `weno`: convergence studies, reconstruction studies and shock benchmarks.
//!
//! Tables go to stdout as CSV unless `--out <dir>` is given. Exit codes:
//! 0 success, 2 the solution left the admissible set, 3 bad configuration.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use weno_core::euler1d::AlphaMode;
use weno_core::harness::io::{read_table, table_to_string, write_table};
use weno_core::harness::{
    convergence_study, epsilon_sweep, l1_to_reference, reconstruct_study, run_benchmark, shu_osher_reference,
    weights_trace, ConvergenceRow, RunOptions, SHU_OSHER_REFERENCE_N,
};
use weno_core::problems::{lookup, Equation, ProblemSpec};
use weno_core::time::{Integrator, StepPolicy};
use weno_core::{EpsilonPolicy, Error, Result, SchemeConfig, Variant};

const EXIT_FAILURE: u8 = 1;
const EXIT_INADMISSIBLE: u8 = 2;
const EXIT_CONFIG: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "weno", version, about = "Fifth-order WENO studies and benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Error norms and orders against the exact solution over a grid ladder.
    Convergence {
        #[arg(long, default_value = "advect-sine")]
        problem: String,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        step: StepArgs,
    },
    /// Derivative errors next to a jump, from one reconstruction pass per grid.
    ReconstructStudy {
        #[arg(long, default_value = "reconstruct-jump")]
        problem: String,
        #[command(flatten)]
        common: Common,
    },
    /// One convergence table per epsilon policy.
    EpsilonSweep {
        #[arg(long, default_value = "advect-sine-cubed")]
        problem: String,
        /// Comma-separated policies, e.g. `fixed:1e-6,scaled:2`.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "fixed:1e-6,fixed:1e-16,scaled:1,scaled:2,scaled:3,scaled:5"
        )]
        eps_list: Vec<String>,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        step: StepArgs,
    },
    /// Nonlinear weights at every interface of the initial data.
    WeightsTrace {
        #[arg(long, default_value = "weights-trace")]
        problem: String,
        #[command(flatten)]
        common: Common,
    },
    /// Evolve a scalar or 1D Euler problem and dump the final state.
    Run1d {
        #[arg(long)]
        problem: String,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        step: StepArgs,
    },
    /// Evolve a 2D Euler problem and dump the final state.
    Run2d {
        #[arg(long)]
        problem: String,
        /// Cells in y (defaults to the problem's value, or `--n`).
        #[arg(long)]
        ny: Option<usize>,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        step: StepArgs,
    },
    /// Fine-grid WENO-JS5 solution of the Shu-Osher problem.
    Reference {
        #[arg(long, default_value_t = SHU_OSHER_REFERENCE_N)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        print_config: bool,
    },
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// loc, js5, ud5 or linear.
    #[arg(long, default_value = "ud5")]
    scheme: String,
    #[arg(long)]
    p: Option<f64>,
    /// `fixed:<value>` or `scaled:<m>` (eps = dx^m).
    #[arg(long)]
    eps: Option<String>,
    /// Grid size; for table commands, a comma-separated ladder.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Write CSV files into this directory instead of printing them.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the resolved configuration as JSON and exit.
    #[arg(long)]
    print_config: bool,
}

#[derive(Args, Debug, Clone)]
struct StepArgs {
    /// Fixed CFL number: dt = cfl dx / max|f'|.
    #[arg(long, conflicts_with = "dt_const")]
    cfl: Option<f64>,
    /// Accuracy-scaled steps: dt = c dx^(5/4).
    #[arg(long)]
    dt_const: Option<f64>,
    /// rk4 or ssp-rk3.
    #[arg(long)]
    integrator: Option<String>,
    /// Splitting speed for Euler problems: per-field or global.
    #[arg(long, default_value = "per-field")]
    alpha: String,
}

fn config_error(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl Common {
    /// Scheme with the variant's defaults unless overridden. `study_eps`
    /// replaces the variant default epsilon when `--eps` is absent.
    fn scheme(&self, study_eps: Option<fn(Variant) -> EpsilonPolicy>) -> Result<SchemeConfig> {
        let variant: Variant = self.scheme.parse()?;
        let mut cfg = SchemeConfig::default_for(variant);
        if let Some(f) = study_eps {
            cfg = cfg.with_epsilon(f(variant));
        }
        if let Some(e) = &self.eps {
            cfg = cfg.with_epsilon(e.parse()?);
        }
        if let Some(p) = self.p {
            cfg = cfg.with_p(p);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn ladder(&self, spec: &ProblemSpec) -> Result<Vec<usize>> {
        let ladder = if self.n.is_empty() { spec.ladder.clone() } else { self.n.clone() };
        if ladder.is_empty() {
            return Err(config_error(format!("`{}` has no default ladder; pass --n", spec.name)));
        }
        Ok(ladder)
    }

    fn single_n(&self, default: usize) -> Result<usize> {
        match self.n.as_slice() {
            [] => Ok(default),
            [n] => Ok(*n),
            _ => Err(config_error("this command takes a single --n")),
        }
    }
}

impl StepArgs {
    fn apply(&self, spec: &ProblemSpec) -> Result<(Integrator, StepPolicy, AlphaMode)> {
        let integrator = match &self.integrator {
            Some(s) => s.parse()?,
            None => spec.integrator,
        };
        let mut step = spec.step;
        if let Some(c) = self.cfl {
            step = StepPolicy { snap_to_end: step.snap_to_end, ..StepPolicy::cfl(c) };
        }
        if let Some(c) = self.dt_const {
            step = StepPolicy { snap_to_end: step.snap_to_end, ..StepPolicy::accuracy_scaled(c) };
        }
        step.validate()?;
        let alpha = match self.alpha.as_str() {
            "per-field" => AlphaMode::PerField,
            "global" => AlphaMode::Global,
            other => return Err(config_error(format!("unknown alpha mode `{other}` (per-field or global)"))),
        };
        Ok((integrator, step, alpha))
    }
}

/// LOC and JS5 use eps = 1e-6 in the tables; UD5 keeps its own default.
fn table_eps(v: Variant) -> EpsilonPolicy {
    match v {
        Variant::Loc | Variant::Js5 => EpsilonPolicy::Fixed(1e-6),
        _ => SchemeConfig::default_for(v).epsilon,
    }
}

/// File-name friendly scheme tag, e.g. `ud5-p2-scaled2`.
fn slug(cfg: &SchemeConfig) -> String {
    format!("{}-p{}-{}", cfg.variant, cfg.p, cfg.epsilon).replace(':', "")
}

fn opt(v: Option<f64>) -> f64 {
    v.unwrap_or(f64::NAN)
}

fn convergence_rows(rows: &[ConvergenceRow]) -> Vec<Vec<f64>> {
    rows.iter().map(|r| vec![r.n as f64, r.l1_error, opt(r.l1_order), r.linf_error, opt(r.linf_order)]).collect()
}

const CONVERGENCE_HEADERS: [&str; 5] = ["n", "l1_error", "l1_order", "linf_error", "linf_order"];

/// Prints the table, or writes it to `<out>/<file>` and prints the path.
fn emit(out: Option<&Path>, file: &str, headers: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    match out {
        Some(dir) => {
            let path = dir.join(file);
            write_table(&path, headers, rows)?;
            println!("{}", path.display());
        }
        None => print!("{}", table_to_string(headers, rows)?),
    }
    Ok(())
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn require(spec: &ProblemSpec, ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(config_error(format!("`{}` is not {what}", spec.name)))
    }
}

/// Runs the command; `Ok(false)` means the run stopped on an inadmissible state.
fn execute(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Convergence { problem, common, step } => {
            let spec = lookup(&problem)?;
            require(
                &spec,
                spec.has_exact && spec.equation == Equation::LinearAdvection,
                "an advection problem with an exact solution",
            )?;
            let cfg = common.scheme(None)?;
            let ladder = common.ladder(&spec)?;
            let (integrator, step, _) = step.apply(&spec)?;
            if common.print_config {
                return print_json(&json!({"command": "convergence", "problem": spec.name, "scheme": cfg, "ladder": ladder, "integrator": integrator, "step": step})).map(|_| true);
            }
            let mut done = vec![];
            let result = convergence_study(&spec, &cfg, &ladder, integrator, &step, |r| done.push(*r));
            let file = format!("convergence-{}-{}.csv", spec.name, slug(&cfg));
            // a failed level still leaves the finished rows on disk
            emit(common.out.as_deref(), &file, &CONVERGENCE_HEADERS, &convergence_rows(&done))?;
            result.map(|_| true)
        }
        Command::ReconstructStudy { problem, common } => {
            let spec = lookup(&problem)?;
            require(&spec, spec.exact_derivative(0.0).is_some(), "a reconstruction problem with a jump")?;
            let cfg = common.scheme(Some(table_eps))?;
            let ladder = common.ladder(&spec)?;
            if common.print_config {
                return print_json(
                    &json!({"command": "reconstruct-study", "problem": spec.name, "scheme": cfg, "ladder": ladder}),
                )
                .map(|_| true);
            }
            let rows = reconstruct_study(&spec, &cfg, &ladder, |x| spec.exact_derivative(x).expect("checked above"))?;
            let table: Vec<Vec<f64>> = rows
                .iter()
                .map(|r| vec![r.n as f64, r.dx, r.e_left, opt(r.o_left), r.e_right, opt(r.o_right)])
                .collect();
            let headers = ["n", "dx", "e_left", "o_left", "e_right", "o_right"];
            emit(common.out.as_deref(), &format!("reconstruct-{}.csv", slug(&cfg)), &headers, &table)?;
            Ok(true)
        }
        Command::EpsilonSweep { problem, eps_list, common, step } => {
            let spec = lookup(&problem)?;
            require(
                &spec,
                spec.has_exact && spec.equation == Equation::LinearAdvection,
                "an advection problem with an exact solution",
            )?;
            if common.eps.is_some() {
                return Err(config_error("epsilon-sweep takes --eps-list, not --eps"));
            }
            let cfg = common.scheme(None)?;
            let policies = eps_list.iter().map(|s| s.parse()).collect::<Result<Vec<EpsilonPolicy>>>()?;
            let ladder = common.ladder(&spec)?;
            let (integrator, step, _) = step.apply(&spec)?;
            if common.print_config {
                return print_json(&json!({"command": "epsilon-sweep", "problem": spec.name, "variant": cfg.variant, "p": cfg.p, "epsilons": policies, "ladder": ladder, "integrator": integrator, "step": step})).map(|_| true);
            }
            let tables = epsilon_sweep(&spec, cfg.variant, cfg.p, &policies, &ladder, integrator, &step)?;
            // long format: one block of rows per policy
            let mut rows = vec![];
            for t in &tables {
                let (scaled, value) = match t.epsilon {
                    EpsilonPolicy::Fixed(v) => (0.0, v),
                    EpsilonPolicy::Scaled(m) => (1.0, m),
                };
                for r in convergence_rows(&t.rows) {
                    rows.push([vec![scaled, value], r].concat());
                }
            }
            let headers = ["eps_scaled", "eps_value", "n", "l1_error", "l1_order", "linf_error", "linf_order"];
            let file = format!("epsilon-sweep-{}-{}-p{}.csv", spec.name, cfg.variant, cfg.p);
            emit(common.out.as_deref(), &file, &headers, &rows)?;
            Ok(true)
        }
        Command::WeightsTrace { problem, common } => {
            let spec = lookup(&problem)?;
            let cfg = common.scheme(None)?;
            let n = common.single_n(spec.n)?;
            if common.print_config {
                return print_json(&json!({"command": "weights-trace", "problem": spec.name, "scheme": cfg, "n": n}))
                    .map(|_| true);
            }
            let rows: Vec<Vec<f64>> = weights_trace(&spec, &cfg, n)?
                .iter()
                .map(|r| [vec![r.x], r.omega.to_vec(), r.d.to_vec()].concat())
                .collect();
            let headers = ["x", "omega0", "omega1", "omega2", "d0", "d1", "d2"];
            emit(common.out.as_deref(), &format!("weights-{}-{}.csv", spec.name, slug(&cfg)), &headers, &rows)?;
            Ok(true)
        }
        Command::Run1d { problem, common, step } => {
            let spec = lookup(&problem)?;
            require(
                &spec,
                matches!(spec.equation, Equation::LinearAdvection | Equation::Euler1D),
                "a 1D evolution problem; see run2d",
            )?;
            let opts = run_options(&spec, &common, &step, None)?;
            run_command(&spec, opts, &common)
        }
        Command::Run2d { problem, ny, common, step } => {
            let spec = lookup(&problem)?;
            require(&spec, spec.equation == Equation::Euler2D, "a 2D problem; see run1d")?;
            let opts = run_options(&spec, &common, &step, ny)?;
            run_command(&spec, opts, &common)
        }
        Command::Reference { n, out, print_config } => {
            if print_config {
                return print_json(&json!({"command": "reference", "problem": "shu-osher", "scheme": SchemeConfig::default_for(Variant::Js5), "n": n})).map(|_| true);
            }
            let (x, rho) = shu_osher_reference(n)?;
            let rows: Vec<Vec<f64>> = x.iter().zip(&rho).map(|(&x, &r)| vec![x, r]).collect();
            emit(out.as_deref(), "shu-osher-reference.csv", &["x", "rho"], &rows)?;
            Ok(true)
        }
    }
}

fn run_options(spec: &ProblemSpec, common: &Common, step: &StepArgs, ny: Option<usize>) -> Result<RunOptions> {
    let mut opts = RunOptions::from_spec(spec);
    opts.scheme = common.scheme(None)?;
    (opts.integrator, opts.step, opts.alpha_mode) = step.apply(spec)?;
    if !common.n.is_empty() {
        opts.n = common.single_n(spec.n)?;
        if spec.is_2d() {
            opts.ny = Some(opts.n);
        }
    }
    if ny.is_some() {
        opts.ny = ny;
    }
    opts.validate()?;
    Ok(opts)
}

/// Loads `<dir>/shu-osher-reference.csv`, building and saving it first if absent.
fn load_reference(dir: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let path = dir.join("shu-osher-reference.csv");
    if path.exists() {
        let (headers, rows) = read_table(&path)?;
        let col = |name| weno_core::harness::io::column(&headers, &rows, name);
        return Ok((col("x")?, col("rho")?));
    }
    let (x, rho) = shu_osher_reference(SHU_OSHER_REFERENCE_N)?;
    let rows: Vec<Vec<f64>> = x.iter().zip(&rho).map(|(&x, &r)| vec![x, r]).collect();
    write_table(&path, &["x", "rho"], &rows)?;
    Ok((x, rho))
}

fn run_command(spec: &ProblemSpec, opts: RunOptions, common: &Common) -> Result<bool> {
    if common.print_config {
        return print_json(&json!({"command": "run", "problem": spec.name, "options": opts})).map(|_| true);
    }
    let dir = common.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let (report, outcome) = run_benchmark(spec, &opts, Some(&dir))?;
    let mut value = serde_json::to_value(&report)?;
    if spec.name == "shu-osher" && report.completed {
        let (rx, rr) = load_reference(&dir)?;
        let (x, rho) = outcome.solution.profile_1d().expect("1D solution");
        value["reference_l1"] = json!(l1_to_reference(&x, &rho, &rx, &rr));
    }
    print_json(&value)?;
    Ok(report.completed)
}

fn exit_code(e: &Error) -> u8 {
    if e.is_solver_failure() {
        EXIT_INADMISSIBLE
    } else {
        match e {
            Error::Config(_) | Error::UnknownProblem { .. } | Error::LengthMismatch { .. } => EXIT_CONFIG,
            _ => EXIT_FAILURE,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_CONFIG) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_INADMISSIBLE),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
