//! Catalog of benchmark problems: initial data, exact solutions, domains,
//! boundary conditions and run defaults.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euler1d::{prim_to_cons, Conserved1D, Primitive1D, GAMMA};
use crate::euler2d::{Boundary2D, EdgeCondition, Grid2D, Primitive2D, ShockParams};
use crate::scalar::{BoundaryKind, GridSpec};
use crate::stencil::{SchemeConfig, Variant};
use crate::time::{default_accuracy_constant, Integrator, StepPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Equation {
    /// `u_t + u_x = 0`
    LinearAdvection,
    /// Static data for one reconstruction pass; nothing is evolved.
    Reconstruction,
    Euler1D,
    Euler2D,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitialData {
    /// `sin(pi x)`
    Sine,
    /// `sin(pi x - sin(pi x) / pi)`
    CriticalSine,
    /// `sin^3(pi x)`
    SineCubed,
    /// `x^3 + cos x`, plus one for `x > at`.
    CubicCosJump {
        at: f64,
    },
    /// `-sin(pi x) - x^3 / 2`, plus one for `x >= 0`.
    SineCubicJump,
    /// Gaussian triple on `(-0.8, 0.2)` and a unit plateau on `[0.2, 0.8]`.
    Shapes {
        z: f64,
        delta: f64,
    },
    Riemann1D {
        split: f64,
        left: Primitive1D,
        right: Primitive1D,
    },
    /// Shock state left of `split`, entropy wave `1 + amplitude sin(k x)` right of it.
    ShockEntropy {
        split: f64,
        left: Primitive1D,
        k: f64,
        amplitude: f64,
    },
    /// Quadrant states named by compass direction around `(x_split, y_split)`.
    Quadrants {
        x_split: f64,
        y_split: f64,
        ne: Primitive2D,
        nw: Primitive2D,
        sw: Primitive2D,
        se: Primitive2D,
    },
    /// Oblique shock over a reflecting wall.
    ShockRamp {
        shock: ShockParams,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
#[allow(clippy::large_enum_variant)]
pub enum ProblemBoundary {
    OneD { bc: BoundaryKind },
    TwoD { bc: Boundary2D },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub name: String,
    pub equation: Equation,
    pub x_range: (f64, f64),
    pub y_range: Option<(f64, f64)>,
    pub initial: InitialData,
    pub boundary: ProblemBoundary,
    pub t_end: f64,
    pub has_exact: bool,
    /// Default cells per axis; `ny` only for 2D problems.
    pub n: usize,
    pub ny: Option<usize>,
    /// Resolutions for convergence studies (empty when not applicable).
    pub ladder: Vec<usize>,
    pub scheme: SchemeConfig,
    pub integrator: Integrator,
    pub step: StepPolicy,
}

pub const NAMES: [&str; 11] = [
    "advect-sine",
    "advect-critical",
    "advect-sine-cubed",
    "reconstruct-jump",
    "weights-trace",
    "advect-shapes",
    "sod",
    "lax",
    "shu-osher",
    "riemann2d",
    "dmr",
];

/// Default width of the Gaussian triple in `advect-shapes`.
pub const SHAPES_DELTA: f64 = 0.005;

/// Mach 10 shock at 60 degrees through `(1/6, 0)` into gas at rest with
/// `rho = 1.4, p = 1`. The post-shock state follows from the normal-shock
/// relations (see [`normal_shock`]).
pub fn dmr_shock() -> ShockParams {
    let c30 = 30f64.to_radians();
    ShockParams {
        x0: 1.0 / 6.0,
        angle_deg: 60.0,
        speed: 10.0,
        pre: Primitive2D::new(1.4, 0.0, 0.0, 1.0),
        post: Primitive2D::new(8.0, 8.25 * c30.cos(), -8.25 * c30.sin(), 116.5),
    }
}

/// Post-shock `(rho, normal velocity, p)` behind a normal shock of Mach
/// number `mach` running into gas at rest.
pub fn normal_shock(mach: f64, rho1: f64, p1: f64, gamma: f64) -> (f64, f64, f64) {
    let m2 = mach * mach;
    let rho2 = rho1 * (gamma + 1.0) * m2 / ((gamma - 1.0) * m2 + 2.0);
    let p2 = p1 * (1.0 + 2.0 * gamma / (gamma + 1.0) * (m2 - 1.0));
    let c1 = (gamma * p1 / rho1).sqrt();
    let u2 = mach * c1 * (1.0 - rho1 / rho2);
    (rho2, u2, p2)
}

fn ladder(from: usize, count: usize) -> Vec<usize> {
    (0..count).map(|k| from << k).collect()
}

fn advection(name: &str, initial: InitialData, t_end: f64, has_exact: bool, ladder: Vec<usize>) -> ProblemSpec {
    ProblemSpec {
        name: name.into(),
        equation: Equation::LinearAdvection,
        x_range: (-1.0, 1.0),
        y_range: None,
        initial,
        boundary: ProblemBoundary::OneD { bc: BoundaryKind::Periodic },
        t_end,
        has_exact,
        n: 200,
        ny: None,
        ladder,
        scheme: SchemeConfig::default_for(Variant::Ud5),
        integrator: Integrator::Rk4,
        step: StepPolicy::accuracy_scaled(default_accuracy_constant()),
    }
}

fn euler1d(name: &str, initial: InitialData, t_end: f64) -> ProblemSpec {
    ProblemSpec {
        name: name.into(),
        equation: Equation::Euler1D,
        x_range: (-5.0, 5.0),
        y_range: None,
        initial,
        boundary: ProblemBoundary::OneD { bc: BoundaryKind::ZeroGradient },
        t_end,
        has_exact: false,
        n: 200,
        ny: None,
        ladder: vec![],
        scheme: SchemeConfig::default_for(Variant::Ud5),
        integrator: Integrator::SspRk3,
        step: StepPolicy::cfl(0.5),
    }
}

fn static_data(name: &str, initial: InitialData, n: usize, ladder: Vec<usize>, has_exact: bool) -> ProblemSpec {
    ProblemSpec {
        name: name.into(),
        equation: Equation::Reconstruction,
        x_range: (-1.0, 1.0),
        y_range: None,
        initial,
        boundary: ProblemBoundary::OneD { bc: BoundaryKind::ZeroGradient },
        t_end: 0.0,
        has_exact,
        n,
        ny: None,
        ladder,
        scheme: SchemeConfig::default_for(Variant::Ud5),
        integrator: Integrator::SspRk3,
        step: StepPolicy::cfl(0.5),
    }
}

pub fn lookup(name: &str) -> Result<ProblemSpec> {
    let p1 = Primitive1D::new;
    let spec = match name {
        "advect-sine" => advection(name, InitialData::Sine, 2.0, true, ladder(10, 7)),
        "advect-critical" => advection(name, InitialData::CriticalSine, 2.0, true, ladder(10, 7)),
        "advect-sine-cubed" => advection(name, InitialData::SineCubed, 2.0, true, ladder(40, 7)),
        "reconstruct-jump" => static_data(name, InitialData::CubicCosJump { at: 0.5 }, 1600, ladder(25, 7), true),
        "weights-trace" => static_data(name, InitialData::SineCubicJump, 200, vec![], false),
        "advect-shapes" => advection(name, InitialData::Shapes { z: -0.7, delta: SHAPES_DELTA }, 8.0, false, vec![]),
        "sod" => euler1d(
            name,
            InitialData::Riemann1D { split: 0.0, left: p1(1.0, 0.0, 1.0), right: p1(0.125, 0.0, 0.1) },
            1.3,
        ),
        "lax" => euler1d(
            name,
            InitialData::Riemann1D { split: 0.0, left: p1(0.445, 0.698, 3.528), right: p1(0.5, 0.0, 0.571) },
            1.3,
        ),
        "shu-osher" => euler1d(
            name,
            InitialData::ShockEntropy { split: -4.0, left: p1(3.857143, 2.629369, 31.0 / 3.0), k: 5.0, amplitude: 0.2 },
            1.8,
        ),
        "riemann2d" => ProblemSpec {
            name: name.into(),
            equation: Equation::Euler2D,
            x_range: (0.0, 1.0),
            y_range: Some((0.0, 1.0)),
            initial: InitialData::Quadrants {
                x_split: 0.8,
                y_split: 0.8,
                ne: Primitive2D::new(1.5, 0.0, 0.0, 1.5),
                nw: Primitive2D::new(0.5323, 1.206, 0.0, 0.3),
                sw: Primitive2D::new(0.138, 1.206, 1.206, 0.029),
                se: Primitive2D::new(0.5323, 0.0, 1.206, 0.3),
            },
            boundary: ProblemBoundary::TwoD { bc: Boundary2D::uniform(EdgeCondition::Dirichlet) },
            t_end: 0.8,
            has_exact: false,
            n: 400,
            ny: Some(400),
            ladder: vec![],
            scheme: SchemeConfig::default_for(Variant::Ud5),
            integrator: Integrator::SspRk3,
            step: StepPolicy::cfl(0.5),
        },
        "dmr" => {
            let shock = dmr_shock();
            ProblemSpec {
                name: name.into(),
                equation: Equation::Euler2D,
                x_range: (0.0, 4.0),
                y_range: Some((0.0, 1.0)),
                initial: InitialData::ShockRamp { shock },
                boundary: ProblemBoundary::TwoD {
                    bc: Boundary2D {
                        left: EdgeCondition::Inflow { state: shock.post },
                        right: EdgeCondition::Outflow,
                        bottom: EdgeCondition::PartialWall { x_from: shock.x0, state: shock.post },
                        top: EdgeCondition::MovingShockTop { shock },
                    },
                },
                t_end: 0.2,
                has_exact: false,
                n: 500,
                ny: Some(500),
                ladder: vec![],
                scheme: SchemeConfig::default_for(Variant::Ud5),
                integrator: Integrator::SspRk3,
                step: StepPolicy::cfl(0.5),
            }
        }
        _ => return Err(Error::UnknownProblem { name: name.into(), available: NAMES.to_vec() }),
    };
    Ok(spec)
}

pub fn catalog() -> Vec<ProblemSpec> {
    NAMES.iter().map(|n| lookup(n).expect("catalog names resolve")).collect()
}

/// Maps `x` into `[lo, hi)` periodically.
fn wrap(x: f64, lo: f64, hi: f64) -> f64 {
    let len = hi - lo;
    lo + (x - lo).rem_euclid(len)
}

fn gaussian(x: f64, z: f64, beta: f64) -> f64 {
    (-beta * (x - z) * (x - z)).exp()
}

impl ProblemSpec {
    pub fn is_2d(&self) -> bool {
        self.equation == Equation::Euler2D
    }

    pub fn bc_1d(&self) -> Result<BoundaryKind> {
        match &self.boundary {
            ProblemBoundary::OneD { bc } => Ok(*bc),
            ProblemBoundary::TwoD { .. } => Err(Error::config(format!("`{}` is a 2D problem", self.name))),
        }
    }

    pub fn bc_2d(&self) -> Result<Boundary2D> {
        match &self.boundary {
            ProblemBoundary::TwoD { bc } => Ok(*bc),
            ProblemBoundary::OneD { .. } => Err(Error::config(format!("`{}` is a 1D problem", self.name))),
        }
    }

    pub fn grid_1d(&self, n: usize) -> Result<GridSpec> {
        GridSpec::new(self.x_range.0, self.x_range.1, n)
    }

    pub fn grid_2d(&self, nx: usize, ny: usize) -> Result<Grid2D> {
        let y = self.y_range.ok_or_else(|| Error::config(format!("`{}` has no y range", self.name)))?;
        Grid2D::new(self.x_range, y, nx, ny)
    }

    /// Scalar initial value; `None` for systems.
    pub fn scalar_initial(&self, x: f64) -> Option<f64> {
        let v = match self.initial {
            InitialData::Sine => (PI * x).sin(),
            InitialData::CriticalSine => (PI * x - (PI * x).sin() / PI).sin(),
            InitialData::SineCubed => (PI * x).sin().powi(3),
            InitialData::CubicCosJump { at } => x.powi(3) + x.cos() + if x > at { 1.0 } else { 0.0 },
            InitialData::SineCubicJump => -(PI * x).sin() - 0.5 * x.powi(3) + if x >= 0.0 { 1.0 } else { 0.0 },
            InitialData::Shapes { z, delta } => {
                let x = wrap(x, self.x_range.0, self.x_range.1);
                if -0.8 < x && x < 0.2 {
                    let beta = 2f64.ln() / (36.0 * delta * delta);
                    (gaussian(x, z - delta, beta) + gaussian(x, z, beta) + 4.0 * gaussian(x, z + delta, beta)) / 6.0
                } else if (0.2..=0.8).contains(&x) {
                    1.0
                } else {
                    0.0
                }
            }
            _ => return None,
        };
        Some(v)
    }

    /// Exact solution, where one is known.
    pub fn exact_scalar(&self, x: f64, t: f64) -> Option<f64> {
        if !self.has_exact {
            return None;
        }
        match self.equation {
            Equation::LinearAdvection => self.scalar_initial(wrap(x - t, self.x_range.0, self.x_range.1)),
            Equation::Reconstruction => self.scalar_initial(x),
            _ => None,
        }
    }

    /// Derivative of the static data away from its jump.
    pub fn exact_derivative(&self, x: f64) -> Option<f64> {
        match self.initial {
            InitialData::CubicCosJump { .. } => Some(3.0 * x * x - x.sin()),
            _ => None,
        }
    }

    pub fn euler1d_initial(&self, x: f64) -> Option<Primitive1D> {
        match self.initial {
            InitialData::Riemann1D { split, left, right } => Some(if x < split { left } else { right }),
            InitialData::ShockEntropy { split, left, k, amplitude } => {
                Some(if x < split { left } else { Primitive1D::new(1.0 + amplitude * (k * x).sin(), 0.0, 1.0) })
            }
            _ => None,
        }
    }

    pub fn euler2d_initial(&self, x: f64, y: f64) -> Option<Primitive2D> {
        match self.initial {
            InitialData::Quadrants { x_split, y_split, ne, nw, sw, se } => Some(match (x >= x_split, y >= y_split) {
                (true, true) => ne,
                (false, true) => nw,
                (false, false) => sw,
                (true, false) => se,
            }),
            InitialData::ShockRamp { shock } => Some(if x < shock.shock_x(y, 0.0) { shock.post } else { shock.pre }),
            _ => None,
        }
    }

    /// Interior cell values of a scalar problem.
    pub fn sample_scalar(&self, grid: &GridSpec) -> Result<Vec<f64>> {
        grid.centres()
            .into_iter()
            .map(|x| {
                self.scalar_initial(x).ok_or_else(|| Error::config(format!("`{}` is not a scalar problem", self.name)))
            })
            .collect()
    }

    pub fn sample_euler1d(&self, grid: &GridSpec) -> Result<Vec<Conserved1D>> {
        grid.centres()
            .into_iter()
            .map(|x| {
                self.euler1d_initial(x)
                    .map(|w| prim_to_cons(&w, GAMMA))
                    .ok_or_else(|| Error::config(format!("`{}` is not a 1D Euler problem", self.name)))
            })
            .collect()
    }

    /// Flat interior array for the 2D solver.
    pub fn sample_euler2d(&self, grid: &Grid2D) -> Result<Vec<f64>> {
        if self.euler2d_initial(0.0, 0.0).is_none() {
            return Err(Error::config(format!("`{}` is not a 2D Euler problem", self.name)));
        }
        Ok(grid.sample(|x, y| self.euler2d_initial(x, y).expect("checked above").to_conserved(GAMMA).to_array()))
    }
}
