//! Shared physical data model: constants, mass profiles, potentials and grids.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{PdemError, Result};

/// Fundamental constants. Defaults to natural units `hbar = m0 = kB = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Reduced Planck constant.
    pub hbar: f64,
    /// Reference (constant) mass `m0`.
    pub m0: f64,
    /// Boltzmann constant.
    pub kb: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            m0: 1.0,
            kb: 1.0,
        }
    }
}

impl PhysicalConstants {
    pub fn new(hbar: f64, m0: f64, kb: f64) -> Result<Self> {
        if !(hbar > 0.0 && m0 > 0.0 && kb > 0.0) {
            return Err(PdemError::Domain(format!(
                "constants must be strictly positive, got hbar={hbar}, m0={m0}, kB={kb}"
            )));
        }
        Ok(Self { hbar, m0, kb })
    }
}

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Dimensionless mass function `M(q)` with its gradient; `m(q) = m0 M(q)`.
#[derive(Clone)]
pub enum MassProfile {
    /// `M(q) = exp(+2 eta q / m0)`, `eta > 0`.
    ExpIncreasing { eta: f64 },
    /// `M(q) = exp(-2 eta q / m0)`, `eta > 0`.
    ExpDecreasing { eta: f64 },
    /// `M(q) = exp(-2 (eta1 θ(a-q) + eta2 θ(q-a)) q / m0)`: decay constant
    /// `eta1` left of `a`, `eta2` right of it.
    PiecewiseExp { eta1: f64, eta2: f64, a: f64 },
    /// Caller-supplied `M` and its analytic gradient.
    Generic { m: RealFn, grad_m: RealFn },
}

impl fmt::Debug for MassProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ExpIncreasing { eta } => write!(f, "ExpIncreasing {{ eta: {eta} }}"),
            Self::ExpDecreasing { eta } => write!(f, "ExpDecreasing {{ eta: {eta} }}"),
            Self::PiecewiseExp { eta1, eta2, a } => {
                write!(f, "PiecewiseExp {{ eta1: {eta1}, eta2: {eta2}, a: {a} }}")
            }
            Self::Generic { .. } => write!(f, "Generic {{ .. }}"),
        }
    }
}

/// Result of a pointwise mass evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassEval {
    /// Dimensionless `M(q)`.
    pub m_dimless: f64,
    /// `dM/dq`.
    pub grad_m: f64,
    /// Physical mass `m(q) = m0 M(q)`.
    pub m: f64,
}

impl MassProfile {
    pub fn exp_increasing(eta: f64) -> Result<Self> {
        if eta <= 0.0 {
            return Err(PdemError::Domain(format!(
                "ExpIncreasing requires eta > 0, got {eta}"
            )));
        }
        Ok(Self::ExpIncreasing { eta })
    }

    pub fn exp_decreasing(eta: f64) -> Result<Self> {
        if eta <= 0.0 {
            return Err(PdemError::Domain(format!(
                "ExpDecreasing requires eta > 0, got {eta}; use ExpIncreasing for the other sign"
            )));
        }
        Ok(Self::ExpDecreasing { eta })
    }

    /// Generic profile from `M` and its analytic gradient.
    pub fn generic<F, G>(m: F, grad_m: G) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::Generic {
            m: Arc::new(m),
            grad_m: Arc::new(grad_m),
        }
    }

    /// Generic profile with an opt-in central-difference gradient,
    /// step `h = eps^(1/3) * max(1, |q|)`.
    pub fn generic_numeric_grad<F>(m: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + Clone + 'static,
    {
        let m2 = m.clone();
        let grad = move |q: f64| {
            let h = f64::EPSILON.cbrt() * q.abs().max(1.0);
            (m2(q + h) - m2(q - h)) / (2.0 * h)
        };
        Self::generic(m, grad)
    }

    /// Evaluate `M(q)`, its gradient and the physical mass `m0 M(q)`.
    pub fn eval(&self, consts: &PhysicalConstants, q: f64) -> Result<MassEval> {
        let m0 = consts.m0;
        let (m_dimless, grad_m) = match self {
            Self::ExpIncreasing { eta } => {
                let m = (2.0 * eta * q / m0).exp();
                (m, 2.0 * eta / m0 * m)
            }
            Self::ExpDecreasing { eta } => {
                let m = (-2.0 * eta * q / m0).exp();
                (m, -2.0 * eta / m0 * m)
            }
            Self::PiecewiseExp { eta1, eta2, a } => {
                let eta = if q < *a { *eta1 } else { *eta2 };
                let m = (-2.0 * eta * q / m0).exp();
                (m, -2.0 * eta / m0 * m)
            }
            Self::Generic { m, grad_m } => (m(q), grad_m(q)),
        };
        if !(m_dimless > 0.0) {
            return Err(PdemError::Domain(format!(
                "mass profile is non-positive at q = {q}: M = {m_dimless}"
            )));
        }
        Ok(MassEval {
            m_dimless,
            grad_m,
            m: m0 * m_dimless,
        })
    }

    /// Second derivative of `M`; analytic for the exponential variants,
    /// central differences of the gradient otherwise.
    pub fn laplacian(&self, consts: &PhysicalConstants, q: f64) -> Result<f64> {
        let m0 = consts.m0;
        match self {
            Self::ExpIncreasing { eta } => {
                Ok((2.0 * eta / m0).powi(2) * (2.0 * eta * q / m0).exp())
            }
            Self::ExpDecreasing { eta } => {
                Ok((2.0 * eta / m0).powi(2) * (-2.0 * eta * q / m0).exp())
            }
            Self::PiecewiseExp { eta1, eta2, a } => {
                let eta = if q < *a { *eta1 } else { *eta2 };
                Ok((2.0 * eta / m0).powi(2) * (-2.0 * eta * q / m0).exp())
            }
            Self::Generic { grad_m, .. } => {
                let h = f64::EPSILON.cbrt() * q.abs().max(1.0);
                Ok((grad_m(q + h) - grad_m(q - h)) / (2.0 * h))
            }
        }
    }
}

/// Potential `V(q)`.
#[derive(Clone)]
pub enum PotentialSpec {
    Zero,
    /// `V(q) = U0 θ(q - a)`.
    StepWall {
        u0: f64,
        a: f64,
    },
    /// `V(q) = A (exp(-2 alpha q) - 2 exp(-alpha q))`, `A, alpha > 0`.
    Morse {
        a_depth: f64,
        alpha: f64,
    },
    /// Hard walls at `±L`, zero inside.
    InfiniteBox {
        l: f64,
    },
    Generic {
        v: RealFn,
        grad_v: RealFn,
    },
}

impl fmt::Debug for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => write!(f, "Zero"),
            Self::StepWall { u0, a } => write!(f, "StepWall {{ u0: {u0}, a: {a} }}"),
            Self::Morse { a_depth, alpha } => {
                write!(f, "Morse {{ A: {a_depth}, alpha: {alpha} }}")
            }
            Self::InfiniteBox { l } => write!(f, "InfiniteBox {{ L: {l} }}"),
            Self::Generic { .. } => write!(f, "Generic {{ .. }}"),
        }
    }
}

impl PotentialSpec {
    pub fn morse(a_depth: f64, alpha: f64) -> Result<Self> {
        if !(a_depth > 0.0 && alpha > 0.0) {
            return Err(PdemError::Domain(format!(
                "Morse requires A > 0 and alpha > 0, got A={a_depth}, alpha={alpha}"
            )));
        }
        Ok(Self::Morse { a_depth, alpha })
    }

    pub fn generic<F, G>(v: F, grad_v: G) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::Generic {
            v: Arc::new(v),
            grad_v: Arc::new(grad_v),
        }
    }

    pub fn v(&self, q: f64) -> f64 {
        match self {
            Self::Zero | Self::InfiniteBox { .. } => 0.0,
            Self::StepWall { u0, a } => {
                if q > *a {
                    *u0
                } else {
                    0.0
                }
            }
            Self::Morse { a_depth, alpha } => {
                a_depth * ((-2.0 * alpha * q).exp() - 2.0 * (-alpha * q).exp())
            }
            Self::Generic { v, .. } => v(q),
        }
    }

    pub fn grad_v(&self, q: f64) -> f64 {
        match self {
            Self::Zero | Self::InfiniteBox { .. } | Self::StepWall { .. } => 0.0,
            Self::Morse { a_depth, alpha } => {
                2.0 * a_depth * alpha * ((-alpha * q).exp() - (-2.0 * alpha * q).exp())
            }
            Self::Generic { grad_v, .. } => grad_v(q),
        }
    }
}

/// Uniform grid on `[qmin, qmax]`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub qmin: f64,
    pub qmax: f64,
    pub npoints: usize,
}

impl Grid {
    pub fn new(qmin: f64, qmax: f64, npoints: usize) -> Result<Self> {
        if !(qmin < qmax) {
            return Err(PdemError::Grid(format!(
                "grid requires qmin < qmax, got [{qmin}, {qmax}]"
            )));
        }
        if npoints < 3 {
            return Err(PdemError::Grid(format!(
                "grid requires npoints >= 3, got {npoints}"
            )));
        }
        Ok(Self {
            qmin,
            qmax,
            npoints,
        })
    }

    pub fn spacing(&self) -> f64 {
        (self.qmax - self.qmin) / (self.npoints - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.qmin + self.spacing() * i as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.npoints).map(move |i| self.point(i))
    }
}

/// Tagged config record for a mass profile, e.g. `{"kind":"exp-dec","eta":1.0}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum MassProfileConfig {
    #[serde(rename = "exp-inc")]
    ExpIncreasing { eta: f64 },
    #[serde(rename = "exp-dec")]
    ExpDecreasing { eta: f64 },
    #[serde(rename = "piecewise-exp")]
    PiecewiseExp { eta1: f64, eta2: f64, a: f64 },
}

impl MassProfileConfig {
    pub fn build(&self) -> Result<MassProfile> {
        match *self {
            Self::ExpIncreasing { eta } => MassProfile::exp_increasing(eta),
            Self::ExpDecreasing { eta } => MassProfile::exp_decreasing(eta),
            Self::PiecewiseExp { eta1, eta2, a } => Ok(MassProfile::PiecewiseExp { eta1, eta2, a }),
        }
    }
}

/// Tagged config record for a potential, e.g. `{"kind":"morse","A":1.0,"alpha":1.0}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum PotentialConfig {
    #[serde(rename = "zero")]
    Zero,
    #[serde(rename = "step-wall")]
    StepWall { u0: f64, a: f64 },
    #[serde(rename = "morse")]
    Morse {
        #[serde(rename = "A")]
        a_depth: f64,
        alpha: f64,
    },
    #[serde(rename = "infinite-box")]
    InfiniteBox {
        #[serde(rename = "L")]
        l: f64,
    },
}

impl PotentialConfig {
    pub fn build(&self) -> Result<PotentialSpec> {
        match *self {
            Self::Zero => Ok(PotentialSpec::Zero),
            Self::StepWall { u0, a } => Ok(PotentialSpec::StepWall { u0, a }),
            Self::Morse { a_depth, alpha } => PotentialSpec::morse(a_depth, alpha),
            Self::InfiniteBox { l } => Ok(PotentialSpec::InfiniteBox { l }),
        }
    }
}
