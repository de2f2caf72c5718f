//! Measure-weighted probability density and current, and the flat
//! (constant-measure) representation `φ = ψ M^{−1/4}` with its effective
//! potential.

use crate::error::{PdemError, Result};
use crate::model::{MassProfile, PhysicalConstants, PotentialSpec};

use super::{Measure, WaveSolution};

/// Density `ρ̃ = |ψ|²√M` and current `j̃ = (ħ/m₀√M) Im(ψ* ∇ψ)` on the grid.
#[derive(Debug, Clone)]
pub struct ProbabilityFields {
    pub rho_tilde: Vec<f64>,
    pub j_tilde: Vec<f64>,
}

/// Flat-land density and current of a sampled wave function; gradients by
/// centered differences (one-sided at the edges).
pub fn probability_fields(
    psi: &WaveSolution,
    profile: &MassProfile,
    consts: &PhysicalConstants,
) -> Result<ProbabilityFields> {
    let n = psi.grid.npoints;
    if n < 5 {
        return Err(PdemError::Grid(format!(
            "probability fields need at least 5 grid points, got {n}"
        )));
    }
    let h = psi.grid.spacing();
    let mut rho_tilde = Vec::with_capacity(n);
    let mut j_tilde = Vec::with_capacity(n);
    for (i, q) in psi.grid.points().enumerate() {
        let m = profile.eval(consts, q)?.m_dimless;
        let sqrt_m = m.sqrt();
        rho_tilde.push(psi.values[i].norm_sqr() * sqrt_m);
        let grad = if i == 0 {
            (psi.values[1] - psi.values[0]) / h
        } else if i + 1 == n {
            (psi.values[n - 1] - psi.values[n - 2]) / h
        } else {
            (psi.values[i + 1] - psi.values[i - 1]) / (2.0 * h)
        };
        j_tilde.push(consts.hbar / (consts.m0 * sqrt_m) * (psi.values[i].conj() * grad).im);
    }
    Ok(ProbabilityFields { rho_tilde, j_tilde })
}

/// Result of moving to the flat representation.
#[derive(Debug, Clone)]
pub struct FlatTransform {
    /// `φ = ψ M^{−1/4}`; the curved norm of ψ equals `∫|φ|² M dq`.
    pub phi: WaveSolution,
    /// `Ṽ = V + (ħ²/8m₀M)[5(∇M)²/4M² − ΔM/M]` on the grid.
    pub vtilde: Vec<f64>,
}

/// Transform a sampled ψ to the flat wave function and effective potential.
pub fn flat_transform(
    psi: &WaveSolution,
    profile: &MassProfile,
    potential: &PotentialSpec,
    consts: &PhysicalConstants,
) -> Result<FlatTransform> {
    let mut values = Vec::with_capacity(psi.grid.npoints);
    let mut vtilde = Vec::with_capacity(psi.grid.npoints);
    for (i, q) in psi.grid.points().enumerate() {
        let m = profile.eval(consts, q)?;
        values.push(psi.values[i] * m.m_dimless.powf(-0.25));
        vtilde.push(effective_flat_potential(profile, potential, consts, q, &m)?);
    }
    Ok(FlatTransform {
        phi: WaveSolution::new(psi.grid, values, psi.energy, Measure::Flat)?,
        vtilde,
    })
}

pub(super) fn effective_flat_potential(
    profile: &MassProfile,
    potential: &PotentialSpec,
    consts: &PhysicalConstants,
    q: f64,
    m: &crate::model::MassEval,
) -> Result<f64> {
    let lap = profile.laplacian(consts, q)?;
    let bracket = 5.0 * m.grad_m * m.grad_m / (4.0 * m.m_dimless * m.m_dimless) - lap / m.m_dimless;
    Ok(potential.v(q) + consts.hbar * consts.hbar / (8.0 * consts.m0 * m.m_dimless) * bracket)
}
