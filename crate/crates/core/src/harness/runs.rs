//! Full benchmark runs with solution dumps and run reports.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::io::write_table;
use crate::error::{Error, Result};
use crate::euler1d::{cons_to_prim, unflatten, AlphaMode, Euler1dSolver, GAMMA};
use crate::euler2d::{admissibility_minima, pressure, Euler2dSolver, Grid2D};
use crate::problems::{lookup, Equation, ProblemSpec};
use crate::scalar::{GridSpec, LinearAdvection, ScalarSolver};
use crate::stencil::{SchemeConfig, Variant};
use crate::time::{compute_dt, evolve, Integrator, StepPolicy, StepRule};

/// Everything a run needs besides the problem itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    pub scheme: SchemeConfig,
    pub n: usize,
    pub ny: Option<usize>,
    pub integrator: Integrator,
    pub step: StepPolicy,
    pub alpha_mode: AlphaMode,
}

impl RunOptions {
    pub fn from_spec(spec: &ProblemSpec) -> Self {
        RunOptions {
            scheme: spec.scheme,
            n: spec.n,
            ny: spec.ny,
            integrator: spec.integrator,
            step: spec.step,
            alpha_mode: AlphaMode::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.scheme.validate()?;
        self.step.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    Scalar {
        grid: GridSpec,
        u: Vec<f64>,
    },
    /// Flat conserved states, three per cell.
    Euler1D {
        grid: GridSpec,
        q: Vec<f64>,
    },
    /// Flat conserved states, four per cell.
    Euler2D {
        grid: Grid2D,
        q: Vec<f64>,
    },
}

impl Solution {
    /// Total mass (or integral of `u` for scalar problems).
    pub fn mass(&self) -> f64 {
        match self {
            Solution::Scalar { grid, u } => u.iter().sum::<f64>() * grid.dx(),
            Solution::Euler1D { grid, q } => q.iter().step_by(3).sum::<f64>() * grid.dx(),
            Solution::Euler2D { grid, q } => q.iter().step_by(4).sum::<f64>() * grid.dx() * grid.dy(),
        }
    }

    /// Smallest density and pressure; `None` for scalar solutions.
    pub fn minima(&self) -> Option<(f64, f64)> {
        match self {
            Solution::Scalar { .. } => None,
            Solution::Euler1D { q, .. } => Some(q.chunks_exact(3).fold((f64::INFINITY, f64::INFINITY), |(r, p), c| {
                let pc = (GAMMA - 1.0) * (c[2] - 0.5 * c[1] * c[1] / c[0]);
                (r.min(c[0]), p.min(pc))
            })),
            Solution::Euler2D { q, .. } => Some(admissibility_minima(q, GAMMA)),
        }
    }

    pub fn is_finite(&self) -> bool {
        let v = match self {
            Solution::Scalar { u, .. } => u,
            Solution::Euler1D { q, .. } | Solution::Euler2D { q, .. } => q,
        };
        v.iter().all(|x| x.is_finite())
    }

    /// Density (or `u`) at the 1D cell centres.
    pub fn profile_1d(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        match self {
            Solution::Scalar { grid, u } => Some((grid.centres(), u.clone())),
            Solution::Euler1D { grid, q } => Some((grid.centres(), q.iter().step_by(3).copied().collect())),
            Solution::Euler2D { .. } => None,
        }
    }

    /// Header and rows for the CSV dump: `x,u`, `x,rho,u,p` or `x,y,rho,u,v,p`.
    pub fn table(&self) -> (Vec<&'static str>, Vec<Vec<f64>>) {
        match self {
            Solution::Scalar { grid, u } => {
                (vec!["x", "u"], grid.centres().into_iter().zip(u).map(|(x, &v)| vec![x, v]).collect())
            }
            Solution::Euler1D { grid, q } => (
                vec!["x", "rho", "u", "p"],
                grid.centres()
                    .into_iter()
                    .zip(unflatten(q))
                    .map(|(x, s)| {
                        let (u, p) = match cons_to_prim(&s, GAMMA) {
                            Ok(w) => (w.u, w.p),
                            Err(_) => (s.mom / s.rho, (GAMMA - 1.0) * (s.ene - 0.5 * s.mom * s.mom / s.rho)),
                        };
                        vec![x, s.rho, u, p]
                    })
                    .collect(),
            ),
            Solution::Euler2D { grid, q } => {
                let mut rows = Vec::with_capacity(grid.cells());
                for j in 0..grid.ny {
                    for i in 0..grid.nx {
                        let o = grid.offset(i, j);
                        let s = [q[o], q[o + 1], q[o + 2], q[o + 3]];
                        rows.push(vec![
                            grid.x(i as isize),
                            grid.y(j as isize),
                            s[0],
                            s[1] / s[0],
                            s[2] / s[0],
                            pressure(&s, GAMMA),
                        ]);
                    }
                }
                (vec!["x", "y", "rho", "u", "v", "p"], rows)
            }
        }
    }
}

/// Outcome of a run. On an admissibility failure `solution` holds the last
/// accepted state at time `t` and `failure` says what went wrong.
#[derive(Debug)]
pub struct RunOutcome {
    pub solution: Solution,
    pub t: f64,
    pub steps: usize,
    pub failure: Option<Error>,
}

pub type StepObserver<'a> = &'a mut dyn FnMut(usize, f64, &[f64]) -> Result<()>;

fn finish(solution: Solution, result: Result<crate::time::EvolveStats>) -> Result<RunOutcome> {
    match result {
        Ok(stats) => Ok(RunOutcome { solution, t: stats.t_final, steps: stats.steps, failure: None }),
        Err(Error::Aborted { time, steps, source }) if source.is_solver_failure() => {
            Ok(RunOutcome { solution, t: time, steps, failure: Some(Error::Aborted { time, steps, source }) })
        }
        Err(e) => Err(e),
    }
}

pub fn run_scalar(spec: &ProblemSpec, opts: &RunOptions, on_step: StepObserver) -> Result<RunOutcome> {
    if spec.equation != Equation::LinearAdvection {
        return Err(Error::config(format!("`{}` is not an advection problem", spec.name)));
    }
    opts.validate()?;
    let grid = spec.grid_1d(opts.n)?;
    let mut u = spec.sample_scalar(&grid)?;
    let flux = LinearAdvection::default();
    let mut solver = ScalarSolver::new(grid, &opts.scheme, spec.bc_1d()?, flux)?;
    let (dx, t_end, step) = (grid.dx(), spec.t_end, opts.step);
    let result = evolve(
        &mut u,
        0.0,
        t_end,
        opts.integrator,
        &mut |_t, u: &[f64], out: &mut [f64]| solver.rhs(u, out),
        &mut |_u, t| Ok(compute_dt(&step, dx, flux.speed.abs(), t, t_end)),
        on_step,
    );
    finish(Solution::Scalar { grid, u }, result)
}

pub fn run_euler1d(spec: &ProblemSpec, opts: &RunOptions, on_step: StepObserver) -> Result<RunOutcome> {
    if spec.equation != Equation::Euler1D {
        return Err(Error::config(format!("`{}` is not a 1D Euler problem", spec.name)));
    }
    opts.validate()?;
    let grid = spec.grid_1d(opts.n)?;
    let mut q = crate::euler1d::flatten(&spec.sample_euler1d(&grid)?);
    let mut solver = Euler1dSolver::new(grid, &opts.scheme, spec.bc_1d()?)?.with_alpha_mode(opts.alpha_mode);
    let mut probe = solver.clone();
    let (dx, t_end, step) = (grid.dx(), spec.t_end, opts.step);
    let result = evolve(
        &mut q,
        0.0,
        t_end,
        opts.integrator,
        &mut |_t, u: &[f64], out: &mut [f64]| solver.rhs(u, out),
        &mut |u, t| Ok(compute_dt(&step, dx, probe.max_speed(u)?, t, t_end)),
        on_step,
    );
    finish(Solution::Euler1D { grid, q }, result)
}

/// `dt` for a 2D grid: the CFL rule uses `number / (ax / dx + ay / dy)`.
pub fn compute_dt_2d(step: &StepPolicy, grid: &Grid2D, speeds: (f64, f64), t: f64, t_end: f64) -> f64 {
    match step.rule {
        StepRule::Cfl { .. } => {
            let rate = speeds.0 / grid.dx() + speeds.1 / grid.dy();
            compute_dt(step, 1.0, rate, t, t_end)
        }
        StepRule::AccuracyScaled { .. } => compute_dt(step, grid.dx().min(grid.dy()), 0.0, t, t_end),
    }
}

pub fn run_euler2d(spec: &ProblemSpec, opts: &RunOptions, on_step: StepObserver) -> Result<RunOutcome> {
    if spec.equation != Equation::Euler2D {
        return Err(Error::config(format!("`{}` is not a 2D Euler problem", spec.name)));
    }
    opts.validate()?;
    let grid = spec.grid_2d(opts.n, opts.ny.unwrap_or(opts.n))?;
    let mut q = spec.sample_euler2d(&grid)?;
    let mut solver = Euler2dSolver::new(grid, &opts.scheme, spec.bc_2d()?, &q)?.with_alpha_mode(opts.alpha_mode);
    let mut probe = solver.clone();
    let (t_end, step) = (spec.t_end, opts.step);
    let result = evolve(
        &mut q,
        0.0,
        t_end,
        opts.integrator,
        &mut |t, u: &[f64], out: &mut [f64]| solver.rhs(t, u, out),
        &mut |u, t| Ok(compute_dt_2d(&step, &grid, probe.max_speeds(t, u)?, t, t_end)),
        on_step,
    );
    finish(Solution::Euler2D { grid, q }, result)
}

/// Dispatches on the problem's equation.
pub fn run(spec: &ProblemSpec, opts: &RunOptions, on_step: StepObserver) -> Result<RunOutcome> {
    match spec.equation {
        Equation::LinearAdvection => run_scalar(spec, opts, on_step),
        Equation::Euler1D => run_euler1d(spec, opts, on_step),
        Equation::Euler2D => run_euler2d(spec, opts, on_step),
        Equation::Reconstruction => {
            Err(Error::config(format!("`{}` is static data; use reconstruct-study or weights-trace", spec.name)))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub problem: String,
    pub scheme: SchemeConfig,
    pub integrator: Integrator,
    pub n: usize,
    pub ny: Option<usize>,
    pub t_end: f64,
    pub t_reached: f64,
    pub steps: usize,
    pub wall_time_s: f64,
    pub outputs: Vec<PathBuf>,
    /// `|M(t) - M(0)| / |M(0)|` for the total mass `M`.
    pub mass_drift: f64,
    pub min_density: Option<f64>,
    pub min_pressure: Option<f64>,
    pub completed: bool,
    pub failure: Option<String>,
}

/// Runs `spec`, writes `<out_dir>/<name>.csv` and returns the report together
/// with the outcome. Admissibility failures still write the last valid state.
pub fn run_benchmark(spec: &ProblemSpec, opts: &RunOptions, out_dir: Option<&Path>) -> Result<(RunReport, RunOutcome)> {
    let start = Instant::now();
    let initial_mass = match spec.equation {
        Equation::LinearAdvection => {
            let g = spec.grid_1d(opts.n)?;
            Solution::Scalar { u: spec.sample_scalar(&g)?, grid: g }.mass()
        }
        Equation::Euler1D => {
            let g = spec.grid_1d(opts.n)?;
            Solution::Euler1D { q: crate::euler1d::flatten(&spec.sample_euler1d(&g)?), grid: g }.mass()
        }
        Equation::Euler2D => {
            let g = spec.grid_2d(opts.n, opts.ny.unwrap_or(opts.n))?;
            Solution::Euler2D { q: spec.sample_euler2d(&g)?, grid: g }.mass()
        }
        Equation::Reconstruction => 0.0,
    };
    let outcome = run(spec, opts, &mut |_, _, _| Ok(()))?;
    let wall_time_s = start.elapsed().as_secs_f64();
    let mut outputs = vec![];
    if let Some(dir) = out_dir {
        let path = dir.join(format!("{}.csv", spec.name));
        let (headers, rows) = outcome.solution.table();
        write_table(&path, &headers, &rows)?;
        outputs.push(path);
    }
    let minima = outcome.solution.minima();
    let mass = outcome.solution.mass();
    let report = RunReport {
        problem: spec.name.clone(),
        scheme: opts.scheme,
        integrator: opts.integrator,
        n: opts.n,
        ny: if spec.equation == Equation::Euler2D { Some(opts.ny.unwrap_or(opts.n)) } else { None },
        t_end: spec.t_end,
        t_reached: outcome.t,
        steps: outcome.steps,
        wall_time_s,
        outputs,
        mass_drift: if initial_mass != 0.0 {
            (mass - initial_mass).abs() / initial_mass.abs()
        } else {
            (mass - initial_mass).abs()
        },
        min_density: minima.map(|m| m.0),
        min_pressure: minima.map(|m| m.1),
        completed: outcome.failure.is_none(),
        failure: outcome.failure.as_ref().map(|e| e.to_string()),
    };
    Ok((report, outcome))
}

/// Resolution of the Shu–Osher reference solution.
pub const SHU_OSHER_REFERENCE_N: usize = 2000;

/// Density of the Shu–Osher problem at `t_end`, computed with WENO-JS5.
pub fn shu_osher_reference(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let spec = lookup("shu-osher")?;
    let opts = RunOptions { scheme: SchemeConfig::default_for(Variant::Js5), n, ..RunOptions::from_spec(&spec) };
    let out = run_euler1d(&spec, &opts, &mut |_, _, _| Ok(()))?;
    if let Some(e) = out.failure {
        return Err(e);
    }
    Ok(out.solution.profile_1d().expect("1D solution"))
}

/// Piecewise-linear interpolation of `(xs, ys)` at `x`; constant beyond the ends.
pub fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let k = xs.partition_point(|&v| v <= x);
    if k == 0 {
        return ys[0];
    }
    if k == xs.len() {
        return ys[xs.len() - 1];
    }
    let (x0, x1) = (xs[k - 1], xs[k]);
    let w = (x - x0) / (x1 - x0);
    ys[k - 1] * (1.0 - w) + ys[k] * w
}

/// Mean absolute distance of `(x, y)` samples to an interpolated reference.
pub fn l1_to_reference(x: &[f64], y: &[f64], ref_x: &[f64], ref_y: &[f64]) -> f64 {
    let sum: f64 = x.iter().zip(y).map(|(&xi, &yi)| (yi - interpolate(ref_x, ref_y, xi)).abs()).sum();
    sum / x.len() as f64
}
