//! Explicit Runge–Kutta steppers over flat `f64` state vectors.
//!
//! Right-hand sides are closures `FnMut(t, u, out) -> Result<()>`. Failures are
//! wrapped with the stage index and stage time.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coarsest spacing of the published smooth-advection tables (N = 10 on `[-1, 1]`).
pub const COARSEST_TABLE_DX: f64 = 0.2;

/// `c` in `dt = c dx^(5/4)` such that `dt = 0.5 dx` at [`COARSEST_TABLE_DX`].
pub fn default_accuracy_constant() -> f64 {
    0.5 * COARSEST_TABLE_DX.powf(-0.25)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StepRule {
    /// `dt = number * dx / alpha`.
    Cfl { number: f64 },
    /// `dt = c * dx^(5/4)`, which makes classic RK4 effectively fifth order.
    AccuracyScaled { c: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepPolicy {
    pub rule: StepRule,
    /// Shorten the last step so the run ends exactly on the final time.
    pub snap_to_end: bool,
}

impl StepPolicy {
    pub fn cfl(number: f64) -> Self {
        StepPolicy { rule: StepRule::Cfl { number }, snap_to_end: true }
    }

    pub fn accuracy_scaled(c: f64) -> Self {
        StepPolicy { rule: StepRule::AccuracyScaled { c }, snap_to_end: true }
    }

    pub fn validate(&self) -> Result<()> {
        match self.rule {
            StepRule::Cfl { number } if !(number > 0.0 && number <= 1.0) => {
                Err(Error::config(format!("CFL number must lie in (0, 1], got {number}")))
            }
            StepRule::AccuracyScaled { c } if !(c > 0.0 && c.is_finite()) => {
                Err(Error::config(format!("dt constant must be positive, got {c}")))
            }
            _ => Ok(()),
        }
    }
}

impl Default for StepPolicy {
    fn default() -> Self {
        StepPolicy::cfl(0.5)
    }
}

/// Step size for the current state; `alpha` is the largest wave speed (only
/// read by the CFL rule).
pub fn compute_dt(policy: &StepPolicy, dx: f64, alpha: f64, t: f64, t_end: f64) -> f64 {
    let dt = match policy.rule {
        StepRule::Cfl { number } => {
            if alpha > 0.0 {
                number * dx / alpha
            } else {
                f64::INFINITY
            }
        }
        StepRule::AccuracyScaled { c } => c * dx.powf(1.25),
    };
    if policy.snap_to_end && t + dt >= t_end {
        t_end - t
    } else {
        dt
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Integrator {
    /// Three-stage strong-stability-preserving scheme of Shu and Osher.
    SspRk3,
    /// Classic four-stage, fourth-order scheme.
    Rk4,
}

impl fmt::Display for Integrator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Integrator::SspRk3 => "ssp-rk3",
            Integrator::Rk4 => "rk4",
        })
    }
}

impl FromStr for Integrator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ssp-rk3" | "rk3" | "ssprk3" => Ok(Integrator::SspRk3),
            "rk4" => Ok(Integrator::Rk4),
            _ => Err(Error::config(format!("unknown integrator `{s}` (ssp-rk3 or rk4)"))),
        }
    }
}

/// Scratch vectors reused across steps.
#[derive(Debug, Clone, Default)]
pub struct RkWorkspace {
    start: Vec<f64>,
    k: Vec<f64>,
    acc: Vec<f64>,
}

impl RkWorkspace {
    pub fn new(len: usize) -> Self {
        RkWorkspace { start: vec![0.0; len], k: vec![0.0; len], acc: vec![0.0; len] }
    }

    fn fit(&mut self, len: usize) {
        if self.start.len() != len {
            *self = RkWorkspace::new(len);
        }
    }

    /// State at the beginning of the last attempted step.
    pub fn step_start(&self) -> &[f64] {
        &self.start
    }
}

fn stage<R>(rhs: &mut R, stage: usize, t: f64, u: &[f64], k: &mut [f64]) -> Result<()>
where
    R: FnMut(f64, &[f64], &mut [f64]) -> Result<()> + ?Sized,
{
    rhs(t, u, k).map_err(|e| e.at_stage(stage, t))
}

/// One SSP-RK3 step, in place.
pub fn ssp_rk3_step<R>(u: &mut [f64], t: f64, dt: f64, rhs: &mut R, ws: &mut RkWorkspace) -> Result<()>
where
    R: FnMut(f64, &[f64], &mut [f64]) -> Result<()> + ?Sized,
{
    ws.fit(u.len());
    let RkWorkspace { start, k, .. } = ws;
    start.copy_from_slice(u);

    stage(rhs, 1, t, u, k)?;
    for (ui, ki) in u.iter_mut().zip(k.iter()) {
        *ui += dt * ki;
    }
    stage(rhs, 2, t + dt, u, k)?;
    for ((ui, ki), u0) in u.iter_mut().zip(k.iter()).zip(start.iter()) {
        *ui = 0.75 * u0 + 0.25 * (*ui + dt * ki);
    }
    stage(rhs, 3, t + 0.5 * dt, u, k)?;
    for ((ui, ki), u0) in u.iter_mut().zip(k.iter()).zip(start.iter()) {
        *ui = (u0 + 2.0 * (*ui + dt * ki)) / 3.0;
    }
    Ok(())
}

/// One classic RK4 step, in place.
pub fn rk4_step<R>(u: &mut [f64], t: f64, dt: f64, rhs: &mut R, ws: &mut RkWorkspace) -> Result<()>
where
    R: FnMut(f64, &[f64], &mut [f64]) -> Result<()> + ?Sized,
{
    ws.fit(u.len());
    let RkWorkspace { start, k, acc } = ws;
    start.copy_from_slice(u);
    let half = 0.5 * dt;

    stage(rhs, 1, t, u, k)?;
    acc.copy_from_slice(k);
    for ((ui, ki), u0) in u.iter_mut().zip(k.iter()).zip(start.iter()) {
        *ui = u0 + half * ki;
    }
    stage(rhs, 2, t + half, u, k)?;
    for (((ui, ki), u0), a) in u.iter_mut().zip(k.iter()).zip(start.iter()).zip(acc.iter_mut()) {
        *a += 2.0 * ki;
        *ui = u0 + half * ki;
    }
    stage(rhs, 3, t + half, u, k)?;
    for (((ui, ki), u0), a) in u.iter_mut().zip(k.iter()).zip(start.iter()).zip(acc.iter_mut()) {
        *a += 2.0 * ki;
        *ui = u0 + dt * ki;
    }
    stage(rhs, 4, t + dt, u, k)?;
    for (((ui, ki), u0), a) in u.iter_mut().zip(k.iter()).zip(start.iter()).zip(acc.iter()) {
        *ui = u0 + dt / 6.0 * (a + ki);
    }
    Ok(())
}

impl Integrator {
    pub fn step<R>(self, u: &mut [f64], t: f64, dt: f64, rhs: &mut R, ws: &mut RkWorkspace) -> Result<()>
    where
        R: FnMut(f64, &[f64], &mut [f64]) -> Result<()> + ?Sized,
    {
        match self {
            Integrator::SspRk3 => ssp_rk3_step(u, t, dt, rhs, ws),
            Integrator::Rk4 => rk4_step(u, t, dt, rhs, ws),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveStats {
    pub steps: usize,
    pub t_final: f64,
}

/// Advances `u` from `t0` to `t_end`.
///
/// `dt_for(u, t)` proposes the next step (it is expected to snap onto
/// `t_end`, see [`compute_dt`]). `on_step(step, t, u)` runs after every
/// accepted step. If a stage fails, `u` is restored to the last accepted
/// state and the error is reported as [`Error::Aborted`] with its time.
pub fn evolve<R, D, O>(
    u: &mut [f64],
    t0: f64,
    t_end: f64,
    integrator: Integrator,
    rhs: &mut R,
    dt_for: &mut D,
    on_step: &mut O,
) -> Result<EvolveStats>
where
    R: FnMut(f64, &[f64], &mut [f64]) -> Result<()> + ?Sized,
    D: FnMut(&[f64], f64) -> Result<f64> + ?Sized,
    O: FnMut(usize, f64, &[f64]) -> Result<()> + ?Sized,
{
    let mut ws = RkWorkspace::new(u.len());
    let mut t = t0;
    let mut steps = 0;
    let tol = 1e-13 * t_end.abs().max(1.0);
    while t_end - t > tol {
        let t_now = t;
        let abort = |source: Error, steps: usize| Error::Aborted { time: t_now, steps, source: Box::new(source) };
        let dt = dt_for(u, t).map_err(|e| abort(e, steps))?;
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(abort(Error::config(format!("non-positive time step {dt}")), steps));
        }
        if let Err(e) = integrator.step(u, t, dt, rhs, &mut ws) {
            u.copy_from_slice(ws.step_start());
            return Err(abort(e, steps));
        }
        t += dt;
        if (t_end - t).abs() <= tol {
            t = t_end;
        }
        steps += 1;
        on_step(steps, t, u).map_err(|e| Error::Aborted { time: t, steps, source: Box::new(e) })?;
    }
    Ok(EvolveStats { steps, t_final: t })
}
