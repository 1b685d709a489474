//! Five-point WENO kernels: substencil fluxes, smoothness indicators, the
//! global indicator `zeta`, nonlinear weights and the interface value.
//!
//! Every kernel reconstructs the upwind value at `x_{i+1/2}` from the window
//! `(f_{i-2}, ..., f_{i+2})`. The downwind part of a split flux reuses the same
//! kernels on a [`mirror_window`].
//!
//! The kernels are pure and allocation free. Hot loops go through
//! [`Reconstructor`], which resolves the epsilon policy once per grid and
//! skips the finiteness check that [`FluxWindow::new`] performs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ideal weights `(d0, d1, d2)` recovering the fifth-order upwind value.
pub const LINEAR_WEIGHTS: [f64; 3] = [0.1, 0.6, 0.3];

/// Named form of [`LINEAR_WEIGHTS`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearWeights {
    pub d0: f64,
    pub d1: f64,
    pub d2: f64,
}

impl LinearWeights {
    pub const IDEAL: LinearWeights =
        LinearWeights { d0: LINEAR_WEIGHTS[0], d1: LINEAR_WEIGHTS[1], d2: LINEAR_WEIGHTS[2] };

    pub fn as_array(&self) -> [f64; 3] {
        [self.d0, self.d1, self.d2]
    }
}

/// Five consecutive nodal flux samples `(f_{i-2}, ..., f_{i+2})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxWindow([f64; 5]);

impl FluxWindow {
    /// Rejects windows carrying NaN or infinities.
    pub fn new(values: [f64; 5]) -> Result<Self> {
        if let Some((position, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteWindow { position, value });
        }
        Ok(FluxWindow(values))
    }

    pub fn values(&self) -> &[f64; 5] {
        &self.0
    }
}

impl TryFrom<&[f64]> for FluxWindow {
    type Error = Error;

    fn try_from(values: &[f64]) -> Result<Self> {
        let arr: [f64; 5] = values.try_into().map_err(|_| Error::LengthMismatch { left: values.len(), right: 5 })?;
        FluxWindow::new(arr)
    }
}

/// Per-substencil smoothness indicators `(beta0, beta1, beta2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaTriple(pub [f64; 3]);

/// Five-point global smoothness indicator.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct GlobalIndicator(pub f64);

/// Normalized nonlinear weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightVector(pub [f64; 3]);

impl WeightVector {
    pub fn sum(&self) -> f64 {
        self.0[0] + self.0[1] + self.0[2]
    }

    /// Largest deviation from the ideal weights.
    pub fn max_deviation(&self) -> f64 {
        self.0.iter().zip(LINEAR_WEIGHTS).map(|(w, d)| (w - d).abs()).fold(0.0, f64::max)
    }
}

/// Third-order candidate values at `x_{i+1/2}` from the three substencils.
#[inline]
pub fn substencil_fluxes(w: &FluxWindow) -> [f64; 3] {
    candidates(&w.0)
}

/// Fifth-order upwind value from the full five-point stencil.
#[inline]
pub fn ideal_reconstruction(w: &FluxWindow) -> f64 {
    let [a, b, c, d, e] = w.0;
    (2.0 * a - 13.0 * b + 47.0 * c + 27.0 * d - 3.0 * e) / 60.0
}

/// Undivided-difference indicators of the LOC scheme; also used by UD5.
#[inline]
pub fn beta_loc(w: &FluxWindow) -> BetaTriple {
    BetaTriple(loc_betas(&w.0))
}

/// Scaled sums of squared first and second derivatives of each substencil polynomial.
#[inline]
pub fn beta_js(w: &FluxWindow) -> BetaTriple {
    BetaTriple(js_betas(&w.0))
}

/// `|(D2 f_{i-2})^2 - 2 (D2 f_{i-1})^2 + (D2 f_i)^2|` with `D2 f_j = f_j - 2 f_{j+1} + f_{j+2}`.
#[inline]
pub fn zeta(w: &FluxWindow) -> GlobalIndicator {
    GlobalIndicator(global_indicator(&w.0))
}

/// LOC/JS weights `alpha_k = d_k / (eps + beta_k)^p`, normalized.
pub fn weights_loc(beta: BetaTriple, eps: f64, p: f64) -> WeightVector {
    WeightVector(inverse_power_weights(&beta.0, eps, Exponent::new(p)))
}

/// UD5 weights `alpha_k = d_k (1 + (zeta / (beta_k + eps))^p)`, normalized.
pub fn weights_ud5(beta: BetaTriple, z: GlobalIndicator, eps: f64, p: f64) -> WeightVector {
    WeightVector(global_ratio_weights(&beta.0, z.0, eps, Exponent::new(p)))
}

/// Reverses a window so the downwind reconstruction at `x_{i+1/2}` can reuse
/// the upwind kernels on `(f_{i+3}, f_{i+2}, f_{i+1}, f_i, f_{i-1})`.
#[inline]
pub fn mirror_window(w: &FluxWindow) -> FluxWindow {
    let [a, b, c, d, e] = w.0;
    FluxWindow([e, d, c, b, a])
}

/// WENO value at `x_{i+1/2}` for the configured scheme.
///
/// `dx` is only read when the epsilon policy is [`EpsilonPolicy::Scaled`].
pub fn reconstruct_interface(w: &FluxWindow, cfg: &SchemeConfig, dx: f64) -> Result<f64> {
    FluxWindow::new(w.0)?;
    Ok(Reconstructor::new(cfg, dx)?.reconstruct(&w.0))
}

// ---------------------------------------------------------------------------
// scheme configuration

/// Which nonlinear weights drive the reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Undivided-difference indicators with inverse-power weights.
    Loc,
    /// Squared-derivative indicators with inverse-power weights.
    Js5,
    /// LOC indicators with the global-indicator weights.
    Ud5,
    /// Weights frozen at the ideal values (the linear fifth-order scheme).
    Linear,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Loc, Variant::Js5, Variant::Ud5, Variant::Linear];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Loc => "loc",
            Variant::Js5 => "js5",
            Variant::Ud5 => "ud5",
            Variant::Linear => "linear",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "loc" | "weno-loc" => Ok(Variant::Loc),
            "js5" | "js" | "weno-js5" => Ok(Variant::Js5),
            "ud5" | "ud" | "weno-ud5" => Ok(Variant::Ud5),
            "linear" | "ideal" => Ok(Variant::Linear),
            other => Err(Error::config(format!("unknown scheme `{other}` (expected loc, js5, ud5 or linear)"))),
        }
    }
}

/// How the regularization `eps` in the weights is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum EpsilonPolicy {
    /// A constant independent of the mesh.
    Fixed(f64),
    /// `eps = dx^m`, evaluated once per grid.
    Scaled(f64),
}

impl EpsilonPolicy {
    pub fn resolve(&self, dx: f64) -> Result<f64> {
        match *self {
            EpsilonPolicy::Fixed(v) => Ok(v),
            EpsilonPolicy::Scaled(m) => {
                if !(dx > 0.0 && dx.is_finite()) {
                    return Err(Error::config(format!("scaled epsilon needs dx > 0, got {dx}")));
                }
                Ok(dx.powf(m))
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            EpsilonPolicy::Fixed(v) if !(v > 0.0 && v.is_finite()) => {
                Err(Error::config(format!("fixed epsilon must be positive, got {v}")))
            }
            EpsilonPolicy::Scaled(m) if !(m > 0.0 && m.is_finite()) => {
                Err(Error::config(format!("epsilon exponent m must be positive, got {m}")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for EpsilonPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EpsilonPolicy::Fixed(v) => write!(f, "fixed:{v:e}"),
            EpsilonPolicy::Scaled(m) => write!(f, "scaled:{m}"),
        }
    }
}

/// Parses `fixed:<value>` or `scaled:<m>`.
impl FromStr for EpsilonPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, value) = s
            .split_once(':')
            .ok_or_else(|| Error::config(format!("epsilon `{s}` must look like fixed:<v> or scaled:<m>")))?;
        let value: f64 = value.trim().parse().map_err(|_| Error::config(format!("bad epsilon value in `{s}`")))?;
        let policy = match kind.trim().to_ascii_lowercase().as_str() {
            "fixed" => EpsilonPolicy::Fixed(value),
            "scaled" => EpsilonPolicy::Scaled(value),
            other => return Err(Error::config(format!("unknown epsilon policy `{other}`"))),
        };
        policy.validate()?;
        Ok(policy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeConfig {
    pub variant: Variant,
    pub epsilon: EpsilonPolicy,
    pub p: f64,
}

impl SchemeConfig {
    /// Published defaults: LOC eps = 1e-5, JS5 eps = 1e-6, UD5 eps = 1e-16, all with p = 2.
    pub fn default_for(variant: Variant) -> Self {
        let eps = match variant {
            Variant::Loc => 1e-5,
            Variant::Js5 => 1e-6,
            Variant::Ud5 => 1e-16,
            Variant::Linear => 1e-16,
        };
        SchemeConfig { variant, epsilon: EpsilonPolicy::Fixed(eps), p: 2.0 }
    }

    pub fn new(variant: Variant, epsilon: EpsilonPolicy, p: f64) -> Result<Self> {
        let cfg = SchemeConfig { variant, epsilon, p };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    pub fn with_epsilon(mut self, epsilon: EpsilonPolicy) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.epsilon.validate()?;
        if !(self.p >= 1.0 && self.p.is_finite()) {
            return Err(Error::config(format!("exponent p must be >= 1, got {}", self.p)));
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        format!("{}(p={}, eps={})", self.variant, self.p, self.epsilon)
    }
}

// ---------------------------------------------------------------------------
// hot path

/// Exponent with fast paths for the integer powers used in practice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    One,
    Two,
    Real(f64),
}

impl Exponent {
    pub fn new(p: f64) -> Self {
        if p == 1.0 {
            Exponent::One
        } else if p == 2.0 {
            Exponent::Two
        } else {
            Exponent::Real(p)
        }
    }

    #[inline(always)]
    pub fn pow(self, x: f64) -> f64 {
        match self {
            Exponent::One => x,
            Exponent::Two => x * x,
            Exponent::Real(p) => x.powf(p),
        }
    }
}

/// Scheme with `eps` resolved for one grid spacing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reconstructor {
    pub variant: Variant,
    pub eps: f64,
    pub p: Exponent,
}

impl Reconstructor {
    pub fn new(cfg: &SchemeConfig, dx: f64) -> Result<Self> {
        cfg.validate()?;
        Ok(Reconstructor { variant: cfg.variant, eps: cfg.epsilon.resolve(dx)?, p: Exponent::new(cfg.p) })
    }

    /// Nonlinear weights for a window; inputs must be finite.
    #[inline]
    pub fn weights(&self, f: &[f64; 5]) -> [f64; 3] {
        match self.variant {
            Variant::Loc => inverse_power_weights(&loc_betas(f), self.eps, self.p),
            Variant::Js5 => inverse_power_weights(&js_betas(f), self.eps, self.p),
            Variant::Ud5 => global_ratio_weights(&loc_betas(f), global_indicator(f), self.eps, self.p),
            Variant::Linear => LINEAR_WEIGHTS,
        }
    }

    /// Upwind interface value; inputs must be finite.
    #[inline]
    pub fn reconstruct(&self, f: &[f64; 5]) -> f64 {
        let q = candidates(f);
        let w = self.weights(f);
        w[0] * q[0] + w[1] * q[1] + w[2] * q[2]
    }
}

#[inline(always)]
fn candidates(f: &[f64; 5]) -> [f64; 3] {
    let [a, b, c, d, e] = *f;
    [(2.0 * a - 7.0 * b + 11.0 * c) / 6.0, (-b + 5.0 * c + 2.0 * d) / 6.0, (2.0 * c + 5.0 * d - e) / 6.0]
}

#[inline(always)]
fn loc_betas(f: &[f64; 5]) -> [f64; 3] {
    let [a, b, c, d, e] = *f;
    let (d1, d2, d3, d4) = (b - a, c - b, d - c, e - d);
    let (s0, s1, s2) = (c - 2.0 * b + a, b - 2.0 * c + d, e - 2.0 * d + c);
    [0.5 * (d1 * d1 + d2 * d2) + s0 * s0, 0.5 * (d2 * d2 + d3 * d3) + s1 * s1, 0.5 * (d3 * d3 + d4 * d4) + s2 * s2]
}

#[inline(always)]
fn js_betas(f: &[f64; 5]) -> [f64; 3] {
    const C: f64 = 13.0 / 12.0;
    let [a, b, c, d, e] = *f;
    let s0 = a - 2.0 * b + c;
    let s1 = b - 2.0 * c + d;
    let s2 = c - 2.0 * d + e;
    let t0 = a - 4.0 * b + 3.0 * c;
    let t1 = d - b;
    let t2 = 3.0 * c - 4.0 * d + e;
    [C * s0 * s0 + 0.25 * t0 * t0, C * s1 * s1 + 0.25 * t1 * t1, C * s2 * s2 + 0.25 * t2 * t2]
}

#[inline(always)]
fn global_indicator(f: &[f64; 5]) -> f64 {
    let [a, b, c, d, e] = *f;
    let s0 = a - 2.0 * b + c;
    let s1 = b - 2.0 * c + d;
    let s2 = c - 2.0 * d + e;
    (s0 * s0 - 2.0 * (s1 * s1) + s2 * s2).abs()
}

#[inline(always)]
fn normalize(a: [f64; 3]) -> Option<[f64; 3]> {
    let s = a[0] + a[1] + a[2];
    (s.is_finite() && s > 0.0).then(|| [a[0] / s, a[1] / s, a[2] / s])
}

#[inline]
fn inverse_power_weights(beta: &[f64; 3], eps: f64, p: Exponent) -> [f64; 3] {
    let d = LINEAR_WEIGHTS;
    let a = [d[0] / p.pow(eps + beta[0]), d[1] / p.pow(eps + beta[1]), d[2] / p.pow(eps + beta[2])];
    normalize(a).unwrap_or_else(|| {
        // over/underflow: rescale by the smoothest substencil
        let m = eps + beta.iter().copied().fold(f64::INFINITY, f64::min);
        let a =
            [d[0] * p.pow(m / (eps + beta[0])), d[1] * p.pow(m / (eps + beta[1])), d[2] * p.pow(m / (eps + beta[2]))];
        normalize(a).unwrap_or(LINEAR_WEIGHTS)
    })
}

#[inline]
fn global_ratio_weights(beta: &[f64; 3], zeta: f64, eps: f64, p: Exponent) -> [f64; 3] {
    let d = LINEAR_WEIGHTS;
    let r = [zeta / (beta[0] + eps), zeta / (beta[1] + eps), zeta / (beta[2] + eps)];
    let a = [d[0] * (1.0 + p.pow(r[0])), d[1] * (1.0 + p.pow(r[1])), d[2] * (1.0 + p.pow(r[2]))];
    normalize(a).unwrap_or_else(|| {
        // ratios overflowed: divide through by the largest one
        let rmax = r.iter().copied().fold(0.0, f64::max);
        let rel = |rk: f64| {
            if rk == rmax {
                1.0
            } else {
                p.pow(rk / rmax)
            }
        };
        let a = [
            d[0] * (p.pow(1.0 / rmax) + rel(r[0])),
            d[1] * (p.pow(1.0 / rmax) + rel(r[1])),
            d[2] * (p.pow(1.0 / rmax) + rel(r[2])),
        ];
        normalize(a).unwrap_or(LINEAR_WEIGHTS)
    })
}
