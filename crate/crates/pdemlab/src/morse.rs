//! Exact bound states of the Morse potential `A(e^{−2αq} − 2e^{−αq})` with
//! exponentially increasing or decreasing mass under the resonance condition
//! `η/m₀ = α` (mass decay constant equal to the potential range).

use num_complex::Complex64;

use crate::error::{PdemError, Result};
use crate::model::{Grid, MassProfile, PhysicalConstants};
use crate::quantum::{Measure, WaveSolution};
use crate::specfun::{hermite, kummer_poly};

/// Which exponential the mass follows, `M = e^{±2ηq/m₀}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorseDirection {
    Increasing,
    Decreasing,
}

/// Morse problem at resonance, with the derived quantities of the solution.
#[derive(Debug, Clone, Copy)]
pub struct MorseCaseParams {
    /// Well depth `A > 0`.
    pub a_depth: f64,
    /// Inverse range `α > 0`; the mass constant is `η = m₀α`.
    pub alpha: f64,
    pub direction: MorseDirection,
    pub consts: PhysicalConstants,
}

impl MorseCaseParams {
    pub fn new(
        a_depth: f64,
        alpha: f64,
        direction: MorseDirection,
        consts: PhysicalConstants,
    ) -> Result<Self> {
        if !(a_depth > 0.0 && alpha > 0.0) {
            return Err(PdemError::Domain(format!(
                "Morse case requires A > 0 and alpha > 0, got A={a_depth}, alpha={alpha}"
            )));
        }
        Ok(Self {
            a_depth,
            alpha,
            direction,
            consts,
        })
    }

    /// Mass decay constant `η = m₀α` fixed by the resonance condition.
    pub fn eta(&self) -> f64 {
        self.consts.m0 * self.alpha
    }

    /// `s = √(2m₀³A)/(ħη)`.
    pub fn s(&self) -> f64 {
        (2.0 * self.consts.m0.powi(3) * self.a_depth).sqrt() / (self.consts.hbar * self.eta())
    }

    /// `κ = ½√(1 + 4s²)`.
    pub fn kappa(&self) -> f64 {
        0.5 * (1.0 + 4.0 * self.s() * self.s()).sqrt()
    }

    /// Mapped oscillator frequency `ω = √(2Aη²/m₀³)` (decreasing case).
    pub fn omega(&self) -> f64 {
        (2.0 * self.a_depth * self.eta().powi(2) / self.consts.m0.powi(3)).sqrt()
    }

    /// Hermite argument scale `x₀ = (2m₀³A/ħ²η²)^{1/4} = √s`.
    pub fn x0(&self) -> f64 {
        self.s().sqrt()
    }

    /// Increasing-case level
    /// `−E_n = (2m₀³A²/ħ²η²) / [(n+½) + ½√(1+8m₀³A/ħ²η²)]²`.
    pub fn energy_increasing(&self, n: u32) -> f64 {
        let c = &self.consts;
        let eta = self.eta();
        let num = 2.0 * c.m0.powi(3) * self.a_depth * self.a_depth / (c.hbar * eta).powi(2);
        let root = (1.0 + 8.0 * c.m0.powi(3) * self.a_depth / (c.hbar * eta).powi(2)).sqrt();
        -num / (n as f64 + 0.5 + 0.5 * root).powi(2)
    }

    /// Decreasing-case level `E_n = ħω(n+½) − A` of the mapped oscillator.
    pub fn energy_decreasing(&self, n: u32) -> f64 {
        self.consts.hbar * self.omega() * (n as f64 + 0.5) - self.a_depth
    }

    /// The exponential mass profile `M = e^{±2ηq/m₀}` of the case.
    pub fn mass_profile(&self) -> Result<MassProfile> {
        match self.direction {
            MorseDirection::Increasing => MassProfile::exp_increasing(self.eta()),
            MorseDirection::Decreasing => MassProfile::exp_decreasing(self.eta()),
        }
    }
}

/// One Morse level.
#[derive(Debug, Clone, PartialEq)]
pub struct MorseSpectrumEntry {
    pub n: u32,
    pub e: f64,
    pub admissible: bool,
    /// `|H_n(x₀)| / max |H_n|` (decreasing case only).
    pub hermite_residual: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct MorseSpectrum {
    pub entries: Vec<MorseSpectrumEntry>,
    /// Smallest admissible `n` (increasing case).
    pub nmin: Option<u32>,
}

/// Levels of the increasing-mass case for `n = 0..=nmax`.
///
/// The spectrum is infinite in principle (`−E_n → 0` like `1/n²`); `nmax`
/// only truncates the report. `n` starts at 0 because series termination of
/// `F(−n, ·, ·)` requires a non-negative integer.
pub fn spectrum_increasing(p: &MorseCaseParams, nmax: u32) -> Result<MorseSpectrum> {
    if p.direction != MorseDirection::Increasing {
        return Err(PdemError::Domain(
            "spectrum_increasing requires the increasing mass direction".into(),
        ));
    }
    let mut entries = Vec::with_capacity(nmax as usize + 1);
    let mut nmin = None;
    for n in 0..=nmax {
        let e = p.energy_increasing(n);
        let admissible = -e < p.a_depth;
        if admissible && nmin.is_none() {
            nmin = Some(n);
        }
        entries.push(MorseSpectrumEntry {
            n,
            e,
            admissible,
            hermite_residual: None,
        });
    }
    Ok(MorseSpectrum { entries, nmin })
}

/// The increasing-case eigenfunction
/// `ψ_n = e^{−ξ/2} ξ^{κ+1/2} F(−n, 2κ+1, ξ)`,
/// `ξ = (2√(−2m₀³E_n)/ħη) e^{ηq/m₀}`, sampled on the grid and normalized
/// under the curved measure.
pub fn eigenfunction_increasing(p: &MorseCaseParams, n: u32, grid: &Grid) -> Result<WaveSolution> {
    if p.direction != MorseDirection::Increasing {
        return Err(PdemError::Domain(
            "eigenfunction_increasing requires the increasing mass direction".into(),
        ));
    }
    let e = p.energy_increasing(n);
    if !(-e < p.a_depth) {
        return Err(PdemError::Domain(format!(
            "level n={n} is not admissible: -E = {} >= A = {}",
            -e, p.a_depth
        )));
    }
    let c = &p.consts;
    let eta = p.eta();
    let kappa = p.kappa();
    let xi0 = 2.0 * (-2.0 * c.m0.powi(3) * e).sqrt() / (c.hbar * eta);
    let b = 2.0 * kappa + 1.0;
    let values: Result<Vec<Complex64>> = grid
        .points()
        .map(|q| {
            let xi = xi0 * (eta * q / c.m0).exp();
            // e^{-xi/2} xi^{kappa+1/2} in log form to dodge overflow at the
            // right tail (the product underflows to an honest zero)
            let envelope = ((kappa + 0.5) * xi.ln() - 0.5 * xi).exp();
            let poly = kummer_poly(n, b, xi)?;
            Ok(Complex64::new(envelope * poly, 0.0))
        })
        .collect();
    let mut psi = WaveSolution::new(*grid, values?, Some(e), Measure::Curved)?;
    psi.normalize_curved(&p.mass_profile()?, c)?;
    Ok(psi)
}

/// Levels of the decreasing-mass case for `n = 0..=nmax`, each with the
/// normalized Hermite-condition residual
/// `|H_n(x₀)| / max_{[0, max(x₀, √(2n+1))]} |H_n|`.
///
/// A level is admissible when the residual is below `tol` and `−E_n < A`.
pub fn spectrum_decreasing(p: &MorseCaseParams, nmax: u32, tol: f64) -> Result<MorseSpectrum> {
    if p.direction != MorseDirection::Decreasing {
        return Err(PdemError::Domain(
            "spectrum_decreasing requires the decreasing mass direction".into(),
        ));
    }
    if !(tol > 0.0) {
        return Err(PdemError::Domain(format!(
            "tol must be positive, got {tol}"
        )));
    }
    let x0 = p.x0();
    let mut entries = Vec::with_capacity(nmax as usize + 1);
    for n in 0..=nmax {
        let residual = hermite_residual(n, x0)?;
        let e = p.energy_decreasing(n);
        let admissible = residual < tol && -e < p.a_depth;
        entries.push(MorseSpectrumEntry {
            n,
            e,
            admissible,
            hermite_residual: Some(residual),
        });
    }
    Ok(MorseSpectrum {
        entries,
        nmin: None,
    })
}

/// `|e^{−x₀²/2} H_n(x₀)|` scaled by the largest magnitude of the Hermite
/// function `e^{−x²/2} H_n(x)` on `[0, max(x₀, √(2n+1)+1)]` — the boundary
/// amplitude of the oscillator eigenfunction relative to its peak. The
/// Gaussian weight keeps the scale meaningful for every `n`: the bare
/// polynomial maximum grows so fast past the last root that it would drown
/// any boundary value.
fn hermite_residual(n: u32, x0: f64) -> Result<f64> {
    let weighted = |x: f64| -> Result<f64> { Ok(((-0.5 * x * x).exp() * hermite(n, x)?).abs()) };
    let value = weighted(x0)?;
    let hi = x0.max((2.0 * n as f64 + 1.0).sqrt() + 1.0);
    let mut max = 0.0f64;
    let samples = 2001;
    for i in 0..=samples {
        let x = hi * i as f64 / samples as f64;
        max = max.max(weighted(x)?);
    }
    if !(max > 0.0) || !max.is_finite() {
        return Err(PdemError::Numeric(format!(
            "Hermite scan degenerate for n={n}, x0={x0}"
        )));
    }
    Ok(value / max)
}

/// The decreasing-case eigenfunction
/// `ψ_n = e^{−x₀²ϑ²/2} H_n(x₀ϑ)`, `ϑ = 1 − e^{−ηq/m₀}`, sampled and
/// normalized under the curved measure. It decays at `q → +∞` only to the
/// extent that the Hermite condition `H_n(x₀) = 0` holds.
pub fn eigenfunction_decreasing(p: &MorseCaseParams, n: u32, grid: &Grid) -> Result<WaveSolution> {
    if p.direction != MorseDirection::Decreasing {
        return Err(PdemError::Domain(
            "eigenfunction_decreasing requires the decreasing mass direction".into(),
        ));
    }
    let values: Result<Vec<Complex64>> = grid
        .points()
        .map(|q| Ok(Complex64::new(decreasing_wave_value(p, n, q)?, 0.0)))
        .collect();
    let mut psi = WaveSolution::new(
        *grid,
        values?,
        Some(p.energy_decreasing(n)),
        Measure::Curved,
    )?;
    psi.normalize_curved(&p.mass_profile()?, &p.consts)?;
    Ok(psi)
}

/// Unnormalized decreasing-case wave value at one point.
pub fn decreasing_wave_value(p: &MorseCaseParams, n: u32, q: f64) -> Result<f64> {
    let x0 = p.x0();
    let theta = 1.0 - (-p.eta() * q / p.consts.m0).exp();
    let gauss = (-0.5 * x0 * x0 * theta * theta).exp();
    Ok(gauss * hermite(n, x0 * theta)?)
}
