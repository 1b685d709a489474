//! Convergence tables and reconstruction experiments.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::{Equation, ProblemSpec};
use crate::scalar::{GridSpec, LinearAdvection, ScalarSolver};
use crate::stencil::{EpsilonPolicy, Reconstructor, SchemeConfig, Variant, LINEAR_WEIGHTS};
use crate::time::{compute_dt, evolve, Integrator, StepPolicy};

/// `(mean |e|, max |e|)`.
pub fn error_norms(numeric: &[f64], exact: &[f64]) -> Result<(f64, f64)> {
    if numeric.len() != exact.len() {
        return Err(Error::LengthMismatch { left: numeric.len(), right: exact.len() });
    }
    if numeric.is_empty() {
        return Ok((0.0, 0.0));
    }
    let (sum, max) =
        numeric.iter().zip(exact).map(|(a, b)| (a - b).abs()).fold((0.0, 0.0f64), |(s, m), e| (s + e, m.max(e)));
    Ok((sum / numeric.len() as f64, max))
}

/// `log2(coarse / fine)` on magnitudes.
pub fn order(coarse: f64, fine: f64) -> f64 {
    (coarse.abs() / fine.abs()).log2()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub l1_error: f64,
    pub linf_error: f64,
    pub l1_order: Option<f64>,
    pub linf_order: Option<f64>,
}

impl ConvergenceRow {
    fn after(prev: Option<&ConvergenceRow>, n: usize, l1: f64, linf: f64) -> Self {
        ConvergenceRow {
            n,
            l1_error: l1,
            linf_error: linf,
            l1_order: prev.map(|p| order(p.l1_error, l1)),
            linf_order: prev.map(|p| order(p.linf_error, linf)),
        }
    }
}

/// Linear advection run to `spec.t_end`; returns the grid and interior values.
pub fn advect(
    spec: &ProblemSpec,
    cfg: &SchemeConfig,
    n: usize,
    integrator: Integrator,
    step: &StepPolicy,
) -> Result<(GridSpec, Vec<f64>)> {
    if spec.equation != Equation::LinearAdvection {
        return Err(Error::config(format!("`{}` is not an advection problem", spec.name)));
    }
    step.validate()?;
    let grid = spec.grid_1d(n)?;
    let mut u = spec.sample_scalar(&grid)?;
    let flux = LinearAdvection::default();
    let mut solver = ScalarSolver::new(grid, cfg, spec.bc_1d()?, flux)?;
    let (dx, t_end) = (grid.dx(), spec.t_end);
    evolve(
        &mut u,
        0.0,
        t_end,
        integrator,
        &mut |_t, u: &[f64], out: &mut [f64]| solver.rhs(u, out),
        &mut |_u, t| Ok(compute_dt(step, dx, flux.speed.abs(), t, t_end)),
        &mut |_, _, _| Ok(()),
    )?;
    Ok((grid, u))
}

/// Runs every resolution in `ladder` against the exact solution. Each row is
/// handed to `on_row` as soon as it is known, so callers can keep the partial
/// table if a later run fails.
pub fn convergence_study(
    spec: &ProblemSpec,
    cfg: &SchemeConfig,
    ladder: &[usize],
    integrator: Integrator,
    step: &StepPolicy,
    mut on_row: impl FnMut(&ConvergenceRow),
) -> Result<Vec<ConvergenceRow>> {
    if !spec.has_exact {
        return Err(Error::config(format!("`{}` has no exact solution", spec.name)));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(ladder.len());
    for &n in ladder {
        let (grid, u) = advect(spec, cfg, n, integrator, step)?;
        let exact: Vec<f64> =
            grid.centres().into_iter().map(|x| spec.exact_scalar(x, spec.t_end).expect("has exact")).collect();
        let (l1, linf) = error_norms(&u, &exact)?;
        let row = ConvergenceRow::after(rows.last(), n, l1, linf);
        on_row(&row);
        rows.push(row);
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonTable {
    pub epsilon: EpsilonPolicy,
    pub rows: Vec<ConvergenceRow>,
}

pub fn epsilon_sweep(
    spec: &ProblemSpec,
    variant: Variant,
    p: f64,
    policies: &[EpsilonPolicy],
    ladder: &[usize],
    integrator: Integrator,
    step: &StepPolicy,
) -> Result<Vec<EpsilonTable>> {
    policies
        .iter()
        .map(|&epsilon| {
            let cfg = SchemeConfig::new(variant, epsilon, p)?;
            let rows = convergence_study(spec, &cfg, ladder, integrator, step, |_| {})?;
            Ok(EpsilonTable { epsilon, rows })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReconstructRow {
    pub n: usize,
    pub dx: f64,
    /// Signed error at the last node left of the jump.
    pub e_left: f64,
    pub o_left: Option<f64>,
    /// Signed error two nodes further right, past the jump.
    pub e_right: f64,
    pub o_right: Option<f64>,
}

/// Derivative approximations next to a jump.
///
/// On the nodes `x_j = lo + j dx`, `dx = (hi - lo) / N`, the derivative
/// `f'(x_j)` is approximated by `(fhat_{j+1/2} - fhat_{j-1/2}) / dx` with
/// the upwind reconstruction of the raw samples. Errors are reported at the
/// last node not past the jump and at the node two to the right of it.
pub fn reconstruct_study(
    spec: &ProblemSpec,
    cfg: &SchemeConfig,
    ladder: &[usize],
    derivative: impl Fn(f64) -> f64,
) -> Result<Vec<ReconstructRow>> {
    let jump = match spec.initial {
        crate::problems::InitialData::CubicCosJump { at } => at,
        _ => return Err(Error::config(format!("`{}` has no jump location", spec.name))),
    };
    let (lo, hi) = spec.x_range;
    let f = |x: f64| spec.scalar_initial(x).expect("scalar data");
    let mut rows: Vec<ReconstructRow> = vec![];
    for &n in ladder {
        let dx = (hi - lo) / n as f64;
        let recon = Reconstructor::new(cfg, dx)?;
        let node = |j: isize| lo + j as f64 * dx;
        let fhat = |j: isize| {
            // interface j + 1/2
            let w: [f64; 5] = std::array::from_fn(|m| f(node(j - 2 + m as isize)));
            recon.reconstruct(&w)
        };
        let err = |j: isize| derivative(node(j)) - (fhat(j) - fhat(j - 1)) / dx;
        let last_left = ((jump - lo) / dx).floor() as isize;
        let (e_left, e_right) = (err(last_left), err(last_left + 2));
        let prev = rows.last();
        rows.push(ReconstructRow {
            n,
            dx,
            e_left,
            o_left: prev.map(|p| order(p.e_left, e_left)),
            e_right,
            o_right: prev.map(|p| order(p.e_right, e_right)),
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightRecord {
    pub x: f64,
    pub omega: [f64; 3],
    pub d: [f64; 3],
}

/// Nonlinear weights of the upwind reconstruction at every right cell
/// interface, from one pass over the exact initial data.
pub fn weights_trace(spec: &ProblemSpec, cfg: &SchemeConfig, n: usize) -> Result<Vec<WeightRecord>> {
    let grid = spec.grid_1d(n)?;
    let recon = Reconstructor::new(cfg, grid.dx())?;
    let f = |i: isize| {
        spec.scalar_initial(grid.x(i)).ok_or_else(|| Error::config(format!("`{}` is not a scalar problem", spec.name)))
    };
    (0..n as isize)
        .map(|i| {
            let mut w = [0.0; 5];
            for (m, v) in w.iter_mut().enumerate() {
                *v = f(i - 2 + m as isize)?;
            }
            Ok(WeightRecord { x: grid.x(i), omega: recon.weights(&w), d: LINEAR_WEIGHTS })
        })
        .collect()
}

/// Weight of the one substencil that contains a unit jump, on a window of
/// `sin` samples refined by halving `dx0` `levels - 1` times. The jump sits
/// halfway between the last two points at every level.
pub fn discontinuous_weight_decay(cfg: &SchemeConfig, dx0: f64, levels: usize) -> Result<Vec<(f64, f64)>> {
    let centre = 0.3;
    (0..levels)
        .map(|k| {
            let dx = dx0 / (1u64 << k) as f64;
            let recon = Reconstructor::new(cfg, dx)?;
            let w: [f64; 5] = std::array::from_fn(|m| {
                let x = centre + (m as f64 - 3.5) * dx;
                x.sin() + if m == 4 { 1.0 } else { 0.0 }
            });
            Ok((dx, recon.weights(&w)[2]))
        })
        .collect()
}

/// `max_k |omega_k - d_k|` on `sin` samples centred on `x`.
pub fn smooth_weight_deviation(cfg: &SchemeConfig, x: f64, dx: f64) -> Result<f64> {
    let recon = Reconstructor::new(cfg, dx)?;
    let w: [f64; 5] = std::array::from_fn(|m| (x + (m as f64 - 2.0) * dx).sin());
    let om = recon.weights(&w);
    Ok((0..3).map(|k| (om[k] - LINEAR_WEIGHTS[k]).abs()).fold(0.0, f64::max))
}

/// Least-squares slope of `log2 y` against `log2 x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.log2()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.log2()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    cov / var
}
