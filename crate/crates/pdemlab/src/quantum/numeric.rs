//! Finite-difference machinery: a Dirichlet eigensolver for the geometric
//! and von Roos quantizations, and Crank–Nicolson time evolution in the flat
//! representation.
//!
//! Both work on the interior points of the supplied grid with hard zeros at
//! the ends, so an infinite box is modeled by a grid spanning exactly the box.

use num_complex::Complex64;

use crate::error::{PdemError, Result};
use crate::model::{Grid, MassProfile, PhysicalConstants, PotentialSpec};
use crate::numeric::tridiag::{lowest_eigenvalues, lowest_eigenvalues_generalized, solve_complex};

use super::fields::effective_flat_potential;
use super::{
    Measure, OrderingScheme, QuantizationScheme, SpectrumEntry, SpectrumMethod, SpectrumResult,
    WaveSolution,
};

/// Assemble and solve one resolution of the Dirichlet problem, returning the
/// lowest `nlevels` eigenvalues.
fn solve_resolution(
    profile: &MassProfile,
    potential: &PotentialSpec,
    grid: &Grid,
    scheme: QuantizationScheme,
    nlevels: usize,
    consts: &PhysicalConstants,
) -> Result<Vec<f64>> {
    let n = grid.npoints - 2; // interior points
    let h = grid.spacing();
    let hbar2 = consts.hbar * consts.hbar;
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n - 1);
    let evs = match scheme {
        QuantizationScheme::Geometric => {
            // flat representation: A φ = E B φ with B = diag(M) and
            // A = -(ħ²/2m₀h²)·tridiag(1,-2,1) + diag(M Ṽ); solved as a
            // generalized pencil because symmetrizing with B^{-1/2} would
            // blow the entries up to the e^{±2ηL/m} scale
            let t = hbar2 / (2.0 * consts.m0 * h * h);
            let mut mass = Vec::with_capacity(n);
            for i in 0..n {
                let q = grid.point(i + 1);
                let m = profile.eval(consts, q)?;
                let vt = effective_flat_potential(profile, potential, consts, q, &m)?;
                diag.push(2.0 * t + m.m_dimless * vt);
                mass.push(m.m_dimless);
                if i + 1 < n {
                    off.push(-t);
                }
            }
            lowest_eigenvalues_generalized(&diag, &off, &mass, nlevels)?
        }
        QuantizationScheme::VonRoos(OrderingScheme { nu, mu, kappa }) => {
            // symmetrized flux-form discretization of
            // -(ħ²/4m₀)[M^ν ∂ M^μ ∂ M^κ + M^κ ∂ M^μ ∂ M^ν] + V
            let t = hbar2 / (4.0 * consts.m0 * h * h);
            let mpow =
                |q: f64, p: f64| -> Result<f64> { Ok(profile.eval(consts, q)?.m_dimless.powf(p)) };
            for i in 0..n {
                let q = grid.point(i + 1);
                let w_right = mpow(q + 0.5 * h, mu)?;
                let w_left = mpow(q - 0.5 * h, mu)?;
                let nk = mpow(q, nu)? * mpow(q, kappa)?;
                diag.push(2.0 * t * nk * (w_right + w_left) + potential.v(q));
                if i + 1 < n {
                    let qn = grid.point(i + 2);
                    let cross = mpow(q, nu)? * mpow(qn, kappa)? + mpow(q, kappa)? * mpow(qn, nu)?;
                    off.push(-t * w_right * cross);
                }
            }
            lowest_eigenvalues(&diag, &off, nlevels)?
        }
    };
    if evs.iter().any(|e| !e.is_finite()) {
        return Err(PdemError::Numeric(
            "eigensolve produced non-finite eigenvalues".into(),
        ));
    }
    Ok(evs)
}

/// Lowest `nlevels` Dirichlet eigenvalues of the chosen quantization on the
/// grid, with a Richardson error estimate from a half-resolution solve.
pub fn eigensolve_numeric(
    profile: &MassProfile,
    potential: &PotentialSpec,
    grid: &Grid,
    scheme: QuantizationScheme,
    nlevels: usize,
    consts: &PhysicalConstants,
) -> Result<SpectrumResult> {
    if grid.npoints < 200 {
        return Err(PdemError::Grid(format!(
            "eigensolve needs at least 200 grid points, got {}",
            grid.npoints
        )));
    }
    if nlevels < 1 || nlevels > grid.npoints - 2 {
        return Err(PdemError::Domain(format!(
            "nlevels must lie in [1, npoints-2], got {nlevels}"
        )));
    }
    let fine = solve_resolution(profile, potential, grid, scheme, nlevels, consts)?;
    let coarse_grid = Grid::new(grid.qmin, grid.qmax, grid.npoints / 2 + 1)?;
    let coarse = solve_resolution(profile, potential, &coarse_grid, scheme, nlevels, consts)?;
    let entries = fine
        .iter()
        .zip(&coarse)
        .enumerate()
        .map(|(j, (ef, ec))| SpectrumEntry {
            n: vec![(j + 1) as u32],
            e: *ef,
            admissible: true,
            residual: None,
            // second-order stencil: E(h) ≈ E + Ch², so E(h)-E(2h) = 3Ch²
            error_est: Some((ef - ec).abs() / 3.0),
        })
        .collect();
    Ok(SpectrumResult {
        entries,
        method: SpectrumMethod::Numeric,
        scheme,
    })
}

/// Outcome of a Crank–Nicolson run.
#[derive(Debug, Clone)]
pub struct EvolveResult {
    pub psi: WaveSolution,
    /// Curved-measure norm² after 0, 1, …, nsteps steps.
    pub norm_history: Vec<f64>,
}

/// Evolve a curved-normalized ψ through `nsteps` Crank–Nicolson steps of
/// size `dt`, in the flat representation `φ = ψM^{−1/4}`:
/// `(B + iΔtA/2ħ) φⁿ⁺¹ = (B − iΔtA/2ħ) φⁿ` with `B = diag(M)`.
///
/// The scheme exactly conserves `Σ M|φ|² h`, which is the discrete curved
/// norm `∫|ψ|²√M dq`.
pub fn evolve(
    psi0: &WaveSolution,
    profile: &MassProfile,
    potential: &PotentialSpec,
    dt: f64,
    nsteps: usize,
    consts: &PhysicalConstants,
) -> Result<EvolveResult> {
    if !(dt > 0.0) || nsteps == 0 {
        return Err(PdemError::Domain(format!(
            "evolve requires dt > 0 and nsteps >= 1, got dt={dt}, nsteps={nsteps}"
        )));
    }
    let grid = psi0.grid;
    if grid.npoints < 5 {
        return Err(PdemError::Grid(
            "evolve needs at least 5 grid points".into(),
        ));
    }
    let n = grid.npoints - 2;
    let h = grid.spacing();
    let t = consts.hbar * consts.hbar / (2.0 * consts.m0 * h * h);
    // interior-point tables
    let mut mass = Vec::with_capacity(n);
    let mut a_diag = Vec::with_capacity(n);
    for i in 0..n {
        let q = grid.point(i + 1);
        let m = profile.eval(consts, q)?;
        let vt = effective_flat_potential(profile, potential, consts, q, &m)?;
        mass.push(m.m_dimless);
        a_diag.push(2.0 * t + m.m_dimless * vt);
    }
    let a_off = -t;
    let kappa = Complex64::new(0.0, dt / (2.0 * consts.hbar));
    let lhs_diag: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(mass[i], 0.0) + kappa * a_diag[i])
        .collect();
    let lhs_off = vec![kappa * a_off; n - 1];
    // flat representation of the initial state
    let mut phi = Vec::with_capacity(n);
    for i in 0..n {
        phi.push(psi0.values[i + 1] * mass[i].powf(-0.25));
    }
    let curved_norm = |phi: &[Complex64]| -> f64 {
        phi.iter()
            .zip(&mass)
            .map(|(p, m)| p.norm_sqr() * m)
            .sum::<f64>()
            * h
    };
    let mut norm_history = Vec::with_capacity(nsteps + 1);
    norm_history.push(curved_norm(&phi));
    let mut rhs = vec![Complex64::new(0.0, 0.0); n];
    for _ in 0..nsteps {
        for i in 0..n {
            let mut v = (Complex64::new(mass[i], 0.0) - kappa * a_diag[i]) * phi[i];
            if i > 0 {
                v -= kappa * a_off * phi[i - 1];
            }
            if i + 1 < n {
                v -= kappa * a_off * phi[i + 1];
            }
            rhs[i] = v;
        }
        phi = solve_complex(&lhs_off, &lhs_diag, &lhs_off, &rhs)?;
        norm_history.push(curved_norm(&phi));
    }
    let mut values = Vec::with_capacity(grid.npoints);
    values.push(Complex64::new(0.0, 0.0));
    for i in 0..n {
        values.push(phi[i] * mass[i].powf(0.25));
    }
    values.push(Complex64::new(0.0, 0.0));
    Ok(EvolveResult {
        psi: WaveSolution::new(grid, values, None, Measure::Curved)?,
        norm_history,
    })
}
