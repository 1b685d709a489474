//! Method-of-lines right-hand side for 1D scalar conservation laws with
//! global Lax–Friedrichs splitting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stencil::{Reconstructor, SchemeConfig};

/// Ghost layers per side; a five-point window centred on a boundary cell
/// reaches three cells out for the mirrored downwind part.
pub const GHOST: usize = 3;

/// Uniform grid of `n` cells on `[x_lo, x_hi]` with nodes at cell centres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_lo: f64,
    pub x_hi: f64,
    pub n: usize,
    pub ghost: usize,
}

impl GridSpec {
    pub fn new(x_lo: f64, x_hi: f64, n: usize) -> Result<Self> {
        Self::with_ghost(x_lo, x_hi, n, GHOST)
    }

    pub fn with_ghost(x_lo: f64, x_hi: f64, n: usize, ghost: usize) -> Result<Self> {
        if n < 10 {
            return Err(Error::config(format!("grid needs at least 10 cells, got {n}")));
        }
        if !(x_hi > x_lo) || !x_lo.is_finite() || !x_hi.is_finite() {
            return Err(Error::config(format!("bad domain [{x_lo}, {x_hi}]")));
        }
        if ghost != GHOST {
            return Err(Error::config(format!("ghost width must be {GHOST} for the five-point stencil, got {ghost}")));
        }
        Ok(GridSpec { x_lo, x_hi, n, ghost })
    }

    pub fn dx(&self) -> f64 {
        (self.x_hi - self.x_lo) / self.n as f64
    }

    /// Centre of cell `i`; negative and `>= n` indices address ghosts.
    pub fn x(&self, i: isize) -> f64 {
        self.x_lo + (i as f64 + 0.5) * self.dx()
    }

    pub fn centres(&self) -> Vec<f64> {
        (0..self.n as isize).map(|i| self.x(i)).collect()
    }

    /// Interior cells plus ghosts on both sides.
    pub fn total(&self) -> usize {
        self.n + 2 * self.ghost
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryKind {
    Periodic,
    /// Also used for "transmissive" boundaries.
    ZeroGradient,
}

/// Fills `ghost` cells on each end of `values` from its interior.
pub fn fill_ghosts<T: Copy>(values: &mut [T], ghost: usize, bc: BoundaryKind) {
    let len = values.len();
    assert!(len > 2 * ghost, "no interior cells to fill ghosts from");
    let n = len - 2 * ghost;
    match bc {
        BoundaryKind::Periodic => {
            assert!(n >= ghost, "periodic fill needs at least {ghost} interior cells");
            for k in 0..ghost {
                values[k] = values[n + k];
                values[ghost + n + k] = values[ghost + k];
            }
        }
        BoundaryKind::ZeroGradient => {
            let (first, last) = (values[ghost], values[ghost + n - 1]);
            values[..ghost].fill(first);
            values[ghost + n..].fill(last);
        }
    }
}

/// Node values on a grid, stored with ghost layers.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub grid: GridSpec,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..grid.total()).map(|i| f(grid.x(i as isize - grid.ghost as isize))).collect();
        ScalarField { grid, values }
    }

    pub fn from_interior(grid: GridSpec, interior: &[f64]) -> Result<Self> {
        if interior.len() != grid.n {
            return Err(Error::LengthMismatch { left: interior.len(), right: grid.n });
        }
        let mut values = vec![0.0; grid.total()];
        values[grid.ghost..grid.ghost + grid.n].copy_from_slice(interior);
        Ok(ScalarField { grid, values })
    }

    pub fn interior(&self) -> &[f64] {
        &self.values[self.grid.ghost..self.grid.ghost + self.grid.n]
    }

    pub fn interior_mut(&mut self) -> &mut [f64] {
        let g = self.grid.ghost;
        &mut self.values[g..g + self.grid.n]
    }

    /// All values including ghosts.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn fill(&mut self, bc: BoundaryKind) {
        fill_ghosts(&mut self.values, self.grid.ghost, bc);
    }

    pub fn filled(mut self, bc: BoundaryKind) -> Self {
        self.fill(bc);
        self
    }
}

/// Physical flux of a scalar law `u_t + f(u)_x = 0`.
pub trait ScalarFlux: Sync {
    fn flux(&self, u: f64) -> f64;
    fn dflux(&self, u: f64) -> f64;
}

/// `f(u) = a u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearAdvection {
    pub speed: f64,
}

impl Default for LinearAdvection {
    fn default() -> Self {
        LinearAdvection { speed: 1.0 }
    }
}

impl ScalarFlux for LinearAdvection {
    fn flux(&self, u: f64) -> f64 {
        self.speed * u
    }
    fn dflux(&self, _u: f64) -> f64 {
        self.speed
    }
}

/// `f(u) = u^2 / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Burgers;

impl ScalarFlux for Burgers {
    fn flux(&self, u: f64) -> f64 {
        0.5 * u * u
    }
    fn dflux(&self, u: f64) -> f64 {
        u
    }
}

/// `f± = (f(u) ± alpha u) / 2`, written into `plus` and `minus`.
///
/// Errors carry the offending position in `u` shifted by `offset`.
pub fn split_flux_into<F: ScalarFlux + ?Sized>(
    u: &[f64],
    flux: &F,
    alpha: f64,
    plus: &mut [f64],
    minus: &mut [f64],
    offset: isize,
) -> Result<()> {
    for (i, &ui) in u.iter().enumerate() {
        let f = flux.flux(ui);
        if !f.is_finite() {
            return Err(Error::NonFinite { index: i as isize - offset, value: f });
        }
        plus[i] = 0.5 * (f + alpha * ui);
        minus[i] = 0.5 * (f - alpha * ui);
    }
    Ok(())
}

pub fn split_flux<F: ScalarFlux + ?Sized>(u: &[f64], flux: &F, alpha: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut plus = vec![0.0; u.len()];
    let mut minus = vec![0.0; u.len()];
    split_flux_into(u, flux, alpha, &mut plus, &mut minus, 0)?;
    Ok((plus, minus))
}

/// `max_i |f'(u_i)|` over every node handed in (ghosts included).
pub fn compute_alpha<F: ScalarFlux + ?Sized>(u: &[f64], flux: &F) -> f64 {
    u.iter().map(|&x| flux.dflux(x).abs()).fold(0.0, f64::max)
}

/// Reusable right-hand-side evaluator `L(u) = -(fhat_{i+1/2} - fhat_{i-1/2}) / dx`.
#[derive(Debug, Clone)]
pub struct ScalarSolver<F> {
    pub grid: GridSpec,
    pub bc: BoundaryKind,
    pub flux: F,
    recon: Reconstructor,
    work: Vec<f64>,
    plus: Vec<f64>,
    minus: Vec<f64>,
    fhat: Vec<f64>,
    last_alpha: f64,
}

impl<F: ScalarFlux> ScalarSolver<F> {
    pub fn new(grid: GridSpec, cfg: &SchemeConfig, bc: BoundaryKind, flux: F) -> Result<Self> {
        let recon = Reconstructor::new(cfg, grid.dx())?;
        let total = grid.total();
        Ok(ScalarSolver {
            grid,
            bc,
            flux,
            recon,
            work: vec![0.0; total],
            plus: vec![0.0; total],
            minus: vec![0.0; total],
            fhat: vec![0.0; grid.n + 1],
            last_alpha: 0.0,
        })
    }

    pub fn reconstructor(&self) -> &Reconstructor {
        &self.recon
    }

    /// Evaluates `L(u)` for interior values `u`, writing `n` entries to `out`.
    pub fn rhs(&mut self, u: &[f64], out: &mut [f64]) -> Result<()> {
        let GridSpec { n, ghost: g, .. } = self.grid;
        if u.len() != n || out.len() != n {
            return Err(Error::LengthMismatch { left: u.len().max(out.len()), right: n });
        }
        if let Some((i, &v)) = u.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index: i as isize, value: v });
        }
        self.work[g..g + n].copy_from_slice(u);
        fill_ghosts(&mut self.work, g, self.bc);

        let alpha = compute_alpha(&self.work, &self.flux);
        self.last_alpha = alpha;
        split_flux_into(&self.work, &self.flux, alpha, &mut self.plus, &mut self.minus, g as isize)?;

        for k in 0..=n {
            // interface between ghosted cells i and i + 1
            let i = g - 1 + k;
            let up: &[f64; 5] = self.plus[i - 2..i + 3].try_into().unwrap();
            let m = &self.minus;
            let down = [m[i + 3], m[i + 2], m[i + 1], m[i], m[i - 1]];
            self.fhat[k] = self.recon.reconstruct(up) + self.recon.reconstruct(&down);
        }
        let inv_dx = 1.0 / self.grid.dx();
        for (i, o) in out.iter_mut().enumerate() {
            *o = -(self.fhat[i + 1] - self.fhat[i]) * inv_dx;
        }
        Ok(())
    }

    /// Interface fluxes from the most recent [`rhs`](Self::rhs) call, `n + 1` entries.
    pub fn interface_fluxes(&self) -> &[f64] {
        &self.fhat
    }

    pub fn last_alpha(&self) -> f64 {
        self.last_alpha
    }
}

/// One-shot `L(u)` for a field (ghosts are refilled from `bc`).
pub fn scalar_rhs<F: ScalarFlux + Clone>(
    u: &ScalarField,
    cfg: &SchemeConfig,
    bc: BoundaryKind,
    flux: &F,
) -> Result<ScalarField> {
    let mut solver = ScalarSolver::new(u.grid, cfg, bc, flux.clone())?;
    let mut out = vec![0.0; u.grid.n];
    solver.rhs(u.interior(), &mut out)?;
    Ok(ScalarField::from_interior(u.grid, &out)?.filled(bc))
}
