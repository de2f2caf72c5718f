//! Quantization built on the Laplace–Beltrami operator of the mass metric
//! `ds² = M(q) dq²`: curved-measure norms and currents, exact
//! exponential-mass solutions, the von Roos ordering comparison, a
//! finite-difference eigensolver and norm-conserving time evolution.

mod exact;
mod fields;
mod numeric;

pub use exact::{
    box_eigenfunction, box_spectrum, reflection_closed_form, scatter_step, vonroos_quasi_free,
    BoxEigenfunction, QuasiFreeWave, VonRoosWave, WaveDirection,
};
pub use fields::{flat_transform, probability_fields, FlatTransform, ProbabilityFields};
pub use numeric::{eigensolve_numeric, evolve, EvolveResult};

use num_complex::Complex64;

use crate::error::{PdemError, Result};
use crate::model::{Grid, MassProfile, PhysicalConstants};

/// Integration measure a wave function is meant to be normalized under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    /// `√M dq`, induced by the mass metric.
    Curved,
    /// Plain `dq`.
    Flat,
}

/// A wave function sampled on a uniform grid.
#[derive(Debug, Clone)]
pub struct WaveSolution {
    pub grid: Grid,
    pub values: Vec<Complex64>,
    /// Energy for stationary states, absent for packets.
    pub energy: Option<f64>,
    pub measure: Measure,
}

impl WaveSolution {
    pub fn new(
        grid: Grid,
        values: Vec<Complex64>,
        energy: Option<f64>,
        measure: Measure,
    ) -> Result<Self> {
        if values.len() != grid.npoints {
            return Err(PdemError::Grid(format!(
                "wave function has {} samples for a {}-point grid",
                values.len(),
                grid.npoints
            )));
        }
        if values
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(PdemError::Numeric(
                "wave function contains non-finite samples".into(),
            ));
        }
        Ok(Self {
            grid,
            values,
            energy,
            measure,
        })
    }

    /// `∫|ψ|²√M dq` by the trapezoid rule on the sample grid.
    pub fn curved_norm_sq(&self, profile: &MassProfile, consts: &PhysicalConstants) -> Result<f64> {
        let h = self.grid.spacing();
        let mut sum = 0.0;
        for (i, q) in self.grid.points().enumerate() {
            let w = if i == 0 || i + 1 == self.grid.npoints {
                0.5
            } else {
                1.0
            };
            let m = profile.eval(consts, q)?.m_dimless;
            sum += w * self.values[i].norm_sqr() * m.sqrt();
        }
        Ok(sum * h)
    }

    /// Rescale in place so the curved norm is exactly 1 (trapezoid sense).
    pub fn normalize_curved(
        &mut self,
        profile: &MassProfile,
        consts: &PhysicalConstants,
    ) -> Result<()> {
        let n2 = self.curved_norm_sq(profile, consts)?;
        if !(n2 > 0.0) || !n2.is_finite() {
            return Err(PdemError::Numeric(format!(
                "cannot normalize: curved norm² = {n2}"
            )));
        }
        let s = 1.0 / n2.sqrt();
        for v in &mut self.values {
            *v *= s;
        }
        Ok(())
    }
}

/// Reflection/transmission at a potential step with piecewise-exponential mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterResult {
    pub e: f64,
    pub u0: f64,
    pub a: f64,
    pub eta1: f64,
    pub eta2: f64,
    /// Reflection coefficient, in `[0, 1]`.
    pub r: f64,
    /// Transmission coefficient; `r + t = 1` above the step, `t = 0` below.
    pub t: f64,
}

/// One von Roos kinetic-term symmetrization `M^ν p M^μ p M^κ` (plus its
/// mirror), with `ν + μ + κ = −1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderingScheme {
    pub nu: f64,
    pub mu: f64,
    pub kappa: f64,
}

impl OrderingScheme {
    pub fn new(nu: f64, mu: f64, kappa: f64) -> Result<Self> {
        if nu + mu + kappa != -1.0 {
            return Err(PdemError::Domain(format!(
                "von Roos parameters must satisfy nu + mu + kappa = -1, got {nu} + {mu} + {kappa}"
            )));
        }
        Ok(Self { nu, mu, kappa })
    }

    /// The `ν = κ = 0`, `μ = −1` ordering `p M⁻¹ p / 2m₀`.
    pub fn bendaniel_duke() -> Self {
        Self {
            nu: 0.0,
            mu: -1.0,
            kappa: 0.0,
        }
    }
}

/// Which quantization was used for a spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuantizationScheme {
    /// Laplace–Beltrami kinetic term (the geometric construction).
    Geometric,
    VonRoos(OrderingScheme),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumMethod {
    Analytic,
    Numeric,
}

/// One spectral line; `n` holds one quantum number per separable dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEntry {
    pub n: Vec<u32>,
    pub e: f64,
    pub admissible: bool,
    /// Condition residual where the level only exists approximately.
    pub residual: Option<f64>,
    /// Richardson discretization-error estimate for numeric entries.
    pub error_est: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SpectrumResult {
    /// Entries sorted by energy, ascending.
    pub entries: Vec<SpectrumEntry>,
    pub method: SpectrumMethod,
    pub scheme: QuantizationScheme,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_scheme_constraint() {
        assert!(OrderingScheme::new(0.0, -1.0, 0.0).is_ok());
        assert!(OrderingScheme::new(-0.5, 0.0, -0.5).is_ok());
        assert!(OrderingScheme::new(0.0, 0.0, 0.0).is_err());
        let s = OrderingScheme::bendaniel_duke();
        assert_eq!(s.nu + s.mu + s.kappa, -1.0);
    }

    #[test]
    fn wave_solution_length_check() {
        let grid = Grid::new(0.0, 1.0, 5).unwrap();
        assert!(
            WaveSolution::new(grid, vec![Complex64::new(1.0, 0.0); 4], None, Measure::Flat)
                .is_err()
        );
    }

    #[test]
    fn curved_norm_flat_mass() {
        // constant psi = 1 on [0, 1], M = 1: norm² = 1
        let grid = Grid::new(0.0, 1.0, 101).unwrap();
        let psi = WaveSolution::new(
            grid,
            vec![Complex64::new(1.0, 0.0); 101],
            None,
            Measure::Curved,
        )
        .unwrap();
        let p = MassProfile::generic(|_| 1.0, |_| 0.0);
        let n2 = psi
            .curved_norm_sq(&p, &PhysicalConstants::default())
            .unwrap();
        assert!((n2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normalize_curved_weighted() {
        // psi = 1 on [-1, 1], M = e^{-2q}: norm² = ∫ e^{-q} dq = e - 1/e
        let grid = Grid::new(-1.0, 1.0, 2001).unwrap();
        let mut psi = WaveSolution::new(
            grid,
            vec![Complex64::new(1.0, 0.0); 2001],
            None,
            Measure::Curved,
        )
        .unwrap();
        let p = MassProfile::exp_decreasing(1.0).unwrap();
        let c = PhysicalConstants::default();
        let before = psi.curved_norm_sq(&p, &c).unwrap();
        assert!((before - (1f64.exp() - (-1f64).exp())).abs() < 1e-6);
        psi.normalize_curved(&p, &c).unwrap();
        assert!((psi.curved_norm_sq(&p, &c).unwrap() - 1.0).abs() < 1e-12);
    }
}
