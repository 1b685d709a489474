//! 2D Euler equations, reconstructed dimension by dimension.
//!
//! Both sweeps run the same x-direction line kernel; the y sweep feeds it
//! states with the momentum components swapped, so the scheme is exactly
//! symmetric under reflection about the diagonal.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euler1d::{line_fluxes, roe_weights, split_speeds, AlphaMode, CharBasis, GAMMA};
use crate::scalar::GHOST;
use crate::stencil::{Reconstructor, SchemeConfig};

pub type State2D = [f64; 4];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Conserved2D {
    pub rho: f64,
    pub momx: f64,
    pub momy: f64,
    pub ene: f64,
}

impl Conserved2D {
    pub fn to_array(self) -> State2D {
        [self.rho, self.momx, self.momy, self.ene]
    }

    pub fn from_array(a: State2D) -> Self {
        Conserved2D { rho: a[0], momx: a[1], momy: a[2], ene: a[3] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Primitive2D {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub p: f64,
}

impl Primitive2D {
    pub fn new(rho: f64, u: f64, v: f64, p: f64) -> Self {
        Primitive2D { rho, u, v, p }
    }

    pub fn to_conserved(&self, gamma: f64) -> Conserved2D {
        Conserved2D {
            rho: self.rho,
            momx: self.rho * self.u,
            momy: self.rho * self.v,
            ene: self.p / (gamma - 1.0) + 0.5 * self.rho * (self.u * self.u + self.v * self.v),
        }
    }
}

/// Pressure of a conserved state (no admissibility check).
#[inline]
pub fn pressure(q: &State2D, gamma: f64) -> f64 {
    (gamma - 1.0) * (q[3] - 0.5 * (q[1] * q[1] + q[2] * q[2]) / q[0])
}

pub fn cons_to_prim(q: &Conserved2D, gamma: f64) -> Result<Primitive2D> {
    let a = q.to_array();
    let p = pressure(&a, gamma);
    if !(q.rho > 0.0 && p > 0.0) || !p.is_finite() {
        return Err(Error::Inadmissible2D { i: 0, j: 0, rho: q.rho, pressure: p });
    }
    Ok(Primitive2D { rho: q.rho, u: q.momx / q.rho, v: q.momy / q.rho, p })
}

#[inline]
fn swap_axes(q: &State2D) -> State2D {
    [q[0], q[2], q[1], q[3]]
}

#[inline]
fn flux_x(q: &State2D, gamma: f64) -> State2D {
    let u = q[1] / q[0];
    let p = pressure(q, gamma);
    [q[1], q[1] * u + p, q[2] * u, u * (q[3] + p)]
}

/// Roe-averaged eigenvectors of the x-direction Jacobian. Fields are
/// ordered by eigenvalue `(u - c, u, u, u + c)`; the third is the shear wave.
pub fn basis_x(ql: &State2D, qr: &State2D, gamma: f64) -> Result<CharBasis<4>> {
    let (a, b) = roe_weights(ql[0], qr[0]);
    let (pl, pr) = (pressure(ql, gamma), pressure(qr, gamma));
    let u = a * ql[1] / ql[0] + b * qr[1] / qr[0];
    let v = a * ql[2] / ql[0] + b * qr[2] / qr[0];
    let h = a * (ql[3] + pl) / ql[0] + b * (qr[3] + pr) / qr[0];
    let q2 = u * u + v * v;
    let c2 = (gamma - 1.0) * (h - 0.5 * q2);
    if !(c2 > 0.0) {
        return Err(Error::InadmissibleAverage(format!("c^2 = {c2} (u = {u}, v = {v}, H = {h})")));
    }
    let c = c2.sqrt();
    let b1 = (gamma - 1.0) / c2;
    let b2 = 0.5 * b1 * q2;
    let uc = u / c;
    Ok(CharBasis {
        left: [
            [0.5 * (b2 + uc), -0.5 * (b1 * u + 1.0 / c), -0.5 * b1 * v, 0.5 * b1],
            [1.0 - b2, b1 * u, b1 * v, -b1],
            [-v, 0.0, 1.0, 0.0],
            [0.5 * (b2 - uc), -0.5 * (b1 * u - 1.0 / c), -0.5 * b1 * v, 0.5 * b1],
        ],
        right: [[1.0, 1.0, 0.0, 1.0], [u - c, u, 0.0, u + c], [v, v, 1.0, v], [h - u * c, 0.5 * q2, v, h + u * c]],
        eigenvalues: [u - c, u, u, u + c],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub x_lo: f64,
    pub x_hi: f64,
    pub y_lo: f64,
    pub y_hi: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid2D {
    pub fn new(x: (f64, f64), y: (f64, f64), nx: usize, ny: usize) -> Result<Self> {
        if nx < 10 || ny < 10 {
            return Err(Error::config(format!("2D grid needs at least 10 cells per axis, got {nx}x{ny}")));
        }
        if !(x.1 > x.0 && y.1 > y.0) {
            return Err(Error::config(format!("bad domain {x:?} x {y:?}")));
        }
        Ok(Grid2D { x_lo: x.0, x_hi: x.1, y_lo: y.0, y_hi: y.1, nx, ny })
    }

    pub fn dx(&self) -> f64 {
        (self.x_hi - self.x_lo) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_hi - self.y_lo) / self.ny as f64
    }

    pub fn x(&self, i: isize) -> f64 {
        self.x_lo + (i as f64 + 0.5) * self.dx()
    }

    pub fn y(&self, j: isize) -> f64 {
        self.y_lo + (j as f64 + 0.5) * self.dy()
    }

    pub fn cells(&self) -> usize {
        self.nx * self.ny
    }

    /// Offset of component 0 of cell `(i, j)` in a flat interior array.
    pub fn offset(&self, i: usize, j: usize) -> usize {
        4 * (j * self.nx + i)
    }

    /// Flat interior array from a function of the cell centre.
    pub fn sample(&self, f: impl Fn(f64, f64) -> State2D) -> Vec<f64> {
        let mut out = Vec::with_capacity(4 * self.cells());
        for j in 0..self.ny {
            for i in 0..self.nx {
                out.extend_from_slice(&f(self.x(i as isize), self.y(j as isize)));
            }
        }
        out
    }
}

/// Straight shock through `(x0, 0)` at `angle_deg` to the x axis, moving with
/// normal speed `speed` into the pre-shock gas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShockParams {
    pub x0: f64,
    pub angle_deg: f64,
    pub speed: f64,
    pub pre: Primitive2D,
    pub post: Primitive2D,
}

impl ShockParams {
    /// Abscissa of the shock at height `y` and time `t`.
    pub fn shock_x(&self, y: f64, t: f64) -> f64 {
        let a = self.angle_deg.to_radians();
        self.x0 + y / a.tan() + self.speed * t / a.sin()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EdgeCondition {
    /// Ghosts keep the values they had at the initial time.
    Dirichlet,
    Reflecting,
    Inflow {
        state: Primitive2D,
    },
    Outflow,
    /// Pre/post-shock states split at the exact shock position. Top edge only.
    MovingShockTop {
        shock: ShockParams,
    },
    /// Fixed `state` for `x < x_from`, reflecting wall beyond. Bottom edge only.
    PartialWall {
        x_from: f64,
        state: Primitive2D,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Boundary2D {
    pub left: EdgeCondition,
    pub right: EdgeCondition,
    pub bottom: EdgeCondition,
    pub top: EdgeCondition,
}

impl Boundary2D {
    pub fn uniform(c: EdgeCondition) -> Self {
        Boundary2D { left: c, right: c, bottom: c, top: c }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, c) in [("left", self.left), ("right", self.right), ("bottom", self.bottom)] {
            if matches!(c, EdgeCondition::MovingShockTop { .. }) {
                return Err(Error::config(format!("moving-shock condition on the {name} edge")));
            }
        }
        for (name, c) in [("left", self.left), ("right", self.right), ("top", self.top)] {
            if matches!(c, EdgeCondition::PartialWall { .. }) {
                return Err(Error::config(format!("partial wall on the {name} edge")));
            }
        }
        Ok(())
    }

    fn has_dirichlet(&self) -> bool {
        [self.left, self.right, self.bottom, self.top].iter().any(|c| matches!(c, EdgeCondition::Dirichlet))
    }
}

#[derive(Clone, Copy)]
enum Axis {
    X,
    Y,
}

/// Ghosted storage: `(nx + 2g) x (ny + 2g)`, row-major in `j`.
struct Layout {
    w: usize,
    h: usize,
    g: usize,
    nx: usize,
    ny: usize,
}

impl Layout {
    #[inline]
    fn at(&self, ig: usize, jg: usize) -> usize {
        jg * self.w + ig
    }
}

/// Method-of-lines right-hand side for the 2D Euler equations.
///
/// States are flat interior arrays laid out as `[(j * nx + i) * 4 + c]`.
#[derive(Debug, Clone)]
pub struct Euler2dSolver {
    pub grid: Grid2D,
    pub bc: Boundary2D,
    pub gamma: f64,
    pub alpha_mode: AlphaMode,
    recon_x: Reconstructor,
    recon_y: Reconstructor,
    q: Vec<State2D>,
    frozen: Option<Vec<State2D>>,
    yflux: Vec<State2D>,
}

impl Euler2dSolver {
    /// `initial` is needed to freeze the ghosts of [`EdgeCondition::Dirichlet`] edges.
    pub fn new(grid: Grid2D, cfg: &SchemeConfig, bc: Boundary2D, initial: &[f64]) -> Result<Self> {
        bc.validate()?;
        let total = (grid.nx + 2 * GHOST) * (grid.ny + 2 * GHOST);
        let mut solver = Euler2dSolver {
            grid,
            bc,
            gamma: GAMMA,
            alpha_mode: AlphaMode::default(),
            recon_x: Reconstructor::new(cfg, grid.dx())?,
            recon_y: Reconstructor::new(cfg, grid.dy())?,
            q: vec![[0.0; 4]; total],
            frozen: None,
            yflux: vec![[0.0; 4]; grid.nx * (grid.ny + 1)],
        };
        if bc.has_dirichlet() {
            solver.load(initial)?;
            solver.fill_ghosts(0.0);
            solver.frozen = Some(solver.q.clone());
        }
        Ok(solver)
    }

    pub fn with_alpha_mode(mut self, mode: AlphaMode) -> Self {
        self.alpha_mode = mode;
        self
    }

    fn layout(&self) -> Layout {
        Layout {
            w: self.grid.nx + 2 * GHOST,
            h: self.grid.ny + 2 * GHOST,
            g: GHOST,
            nx: self.grid.nx,
            ny: self.grid.ny,
        }
    }

    fn load(&mut self, u: &[f64]) -> Result<()> {
        let l = self.layout();
        if u.len() != 4 * self.grid.cells() {
            return Err(Error::LengthMismatch { left: u.len(), right: 4 * self.grid.cells() });
        }
        for j in 0..l.ny {
            let row = &u[4 * j * l.nx..4 * (j + 1) * l.nx];
            let base = l.at(l.g, l.g + j);
            for (cell, c) in self.q[base..base + l.nx].iter_mut().zip(row.chunks_exact(4)) {
                *cell = [c[0], c[1], c[2], c[3]];
            }
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn edge_value(
        &self,
        cond: EdgeCondition,
        axis: Axis,
        mirror: State2D,
        nearest: State2D,
        slot: usize,
        x: f64,
        y: f64,
        t: f64,
    ) -> State2D {
        let reflect = |mut s: State2D| {
            match axis {
                Axis::X => s[1] = -s[1],
                Axis::Y => s[2] = -s[2],
            }
            s
        };
        match cond {
            EdgeCondition::Dirichlet => match &self.frozen {
                Some(f) => f[slot],
                None => nearest,
            },
            EdgeCondition::Reflecting => reflect(mirror),
            EdgeCondition::Inflow { state } => state.to_conserved(self.gamma).to_array(),
            EdgeCondition::Outflow => nearest,
            EdgeCondition::MovingShockTop { shock } => {
                let s = if x < shock.shock_x(y, t) { shock.post } else { shock.pre };
                s.to_conserved(self.gamma).to_array()
            }
            EdgeCondition::PartialWall { x_from, state } => {
                if x < x_from {
                    state.to_conserved(self.gamma).to_array()
                } else {
                    reflect(mirror)
                }
            }
        }
    }

    /// Left/right edges on interior rows first, then bottom/top on every
    /// column, which also fills the corners.
    fn fill_ghosts(&mut self, t: f64) {
        let l = self.layout();
        let g = l.g as isize;
        for jg in l.g..l.g + l.ny {
            let y = self.grid.y(jg as isize - g);
            for k in 0..l.g {
                let (ig, src) = (l.g - 1 - k, l.g + k);
                let x = self.grid.x(ig as isize - g);
                let slot = l.at(ig, jg);
                self.q[slot] =
                    self.edge_value(self.bc.left, Axis::X, self.q[l.at(src, jg)], self.q[l.at(l.g, jg)], slot, x, y, t);

                let (ig, src) = (l.g + l.nx + k, l.g + l.nx - 1 - k);
                let x = self.grid.x(ig as isize - g);
                let slot = l.at(ig, jg);
                self.q[slot] = self.edge_value(
                    self.bc.right,
                    Axis::X,
                    self.q[l.at(src, jg)],
                    self.q[l.at(l.g + l.nx - 1, jg)],
                    slot,
                    x,
                    y,
                    t,
                );
            }
        }
        for ig in 0..l.w {
            let x = self.grid.x(ig as isize - g);
            for k in 0..l.g {
                let (jg, src) = (l.g - 1 - k, l.g + k);
                let y = self.grid.y(jg as isize - g);
                let slot = l.at(ig, jg);
                self.q[slot] = self.edge_value(
                    self.bc.bottom,
                    Axis::Y,
                    self.q[l.at(ig, src)],
                    self.q[l.at(ig, l.g)],
                    slot,
                    x,
                    y,
                    t,
                );

                let (jg, src) = (l.g + l.ny + k, l.g + l.ny - 1 - k);
                let y = self.grid.y(jg as isize - g);
                let slot = l.at(ig, jg);
                self.q[slot] = self.edge_value(
                    self.bc.top,
                    Axis::Y,
                    self.q[l.at(ig, src)],
                    self.q[l.at(ig, l.g + l.ny - 1)],
                    slot,
                    x,
                    y,
                    t,
                );
            }
        }
    }

    /// Checks every cell (ghosts included) and returns the largest
    /// `|lambda_k|` per field for the x and y sweeps.
    fn scan(&self) -> Result<([f64; 4], [f64; 4])> {
        let l = self.layout();
        let mut lx = [0.0f64; 4];
        let mut ly = [0.0f64; 4];
        for jg in 0..l.h {
            for ig in 0..l.w {
                let q = &self.q[l.at(ig, jg)];
                let p = pressure(q, self.gamma);
                if !(q[0] > 0.0 && p > 0.0) || !p.is_finite() || !q[0].is_finite() {
                    return Err(Error::Inadmissible2D {
                        i: ig as isize - l.g as isize,
                        j: jg as isize - l.g as isize,
                        rho: q[0],
                        pressure: p,
                    });
                }
                let c = (self.gamma * p / q[0]).sqrt();
                let (u, v) = (q[1] / q[0], q[2] / q[0]);
                for (lm, s) in [(&mut lx, u), (&mut ly, v)] {
                    lm[0] = lm[0].max((s - c).abs());
                    lm[1] = lm[1].max(s.abs());
                    lm[2] = lm[2].max(s.abs());
                    lm[3] = lm[3].max((s + c).abs());
                }
            }
        }
        Ok((lx, ly))
    }

    /// `(max(|u| + c), max(|v| + c))` over the grid after filling ghosts at `t`.
    pub fn max_speeds(&mut self, t: f64, u: &[f64]) -> Result<(f64, f64)> {
        self.load(u)?;
        self.fill_ghosts(t);
        let (lx, ly) = self.scan()?;
        Ok((lx[0].max(lx[3]), ly[0].max(ly[3])))
    }

    pub fn rhs(&mut self, t: f64, u: &[f64], out: &mut [f64]) -> Result<()> {
        let l = self.layout();
        if out.len() != u.len() {
            return Err(Error::LengthMismatch { left: out.len(), right: u.len() });
        }
        self.load(u)?;
        self.fill_ghosts(t);
        let (lx, ly) = self.scan()?;
        let ax = split_speeds(&lx, self.alpha_mode);
        let ay = split_speeds(&ly, self.alpha_mode);
        let gamma = self.gamma;
        let q = &self.q;

        let recon_x = &self.recon_x;
        let inv_dx = 1.0 / self.grid.dx();
        out.par_chunks_mut(4 * l.nx).enumerate().try_for_each_init(
            || (vec![[0.0; 4]; l.w], vec![[0.0; 4]; l.nx + 1]),
            |(f, fhat), (j, row_out)| -> Result<()> {
                let row = &q[l.at(0, l.g + j)..l.at(0, l.g + j + 1)];
                for (fm, qm) in f.iter_mut().zip(row) {
                    *fm = flux_x(qm, gamma);
                }
                line_fluxes(row, f, &ax, recon_x, l.g, |a, b| basis_x(a, b, gamma), fhat)?;
                for (i, o) in row_out.chunks_exact_mut(4).enumerate() {
                    for c in 0..4 {
                        o[c] = -(fhat[i + 1][c] - fhat[i][c]) * inv_dx;
                    }
                }
                Ok(())
            },
        )?;

        let recon_y = &self.recon_y;
        self.yflux.par_chunks_mut(l.ny + 1).enumerate().try_for_each_init(
            || (vec![[0.0; 4]; l.h], vec![[0.0; 4]; l.h]),
            |(line, f), (i, fhat)| -> Result<()> {
                for jg in 0..l.h {
                    line[jg] = swap_axes(&q[l.at(l.g + i, jg)]);
                    f[jg] = flux_x(&line[jg], gamma);
                }
                line_fluxes(line, f, &ay, recon_y, l.g, |a, b| basis_x(a, b, gamma), fhat)?;
                Ok(())
            },
        )?;
        let inv_dy = 1.0 / self.grid.dy();
        for i in 0..l.nx {
            let col = &self.yflux[i * (l.ny + 1)..(i + 1) * (l.ny + 1)];
            for j in 0..l.ny {
                let d = swap_axes(&std::array::from_fn(|c| -(col[j + 1][c] - col[j][c]) * inv_dy));
                let o = &mut out[self.grid.offset(i, j)..self.grid.offset(i, j) + 4];
                for c in 0..4 {
                    o[c] += d[c];
                }
            }
        }
        Ok(())
    }
}

/// Smallest density and pressure over a flat interior state.
pub fn admissibility_minima(u: &[f64], gamma: f64) -> (f64, f64) {
    u.chunks_exact(4).fold((f64::INFINITY, f64::INFINITY), |(r, p), c| {
        let s = [c[0], c[1], c[2], c[3]];
        (r.min(c[0]), p.min(pressure(&s, gamma)))
    })
}

/// One-shot right-hand side; `q` also serves as the Dirichlet trace.
pub fn euler2d_rhs(q: &[f64], grid: Grid2D, cfg: &SchemeConfig, bc: Boundary2D, t: f64) -> Result<Vec<f64>> {
    let mut solver = Euler2dSolver::new(grid, cfg, bc, q)?;
    let mut out = vec![0.0; q.len()];
    solver.rhs(t, q, &mut out)?;
    Ok(out)
}
