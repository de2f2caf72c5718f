//! Fermi-Dirac polylogarithms `Li_s(-e^x)` for s = 3/2, 5/2 and the inverse
//! of the 3/2 order.

use std::f64::consts::PI;

use crate::error::{PdemError, Result};
use crate::numeric::{adaptive_quad, brent};

/// Supported polylogarithm orders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolylogOrder {
    ThreeHalves,
    FiveHalves,
}

impl PolylogOrder {
    pub fn s(self) -> f64 {
        match self {
            Self::ThreeHalves => 1.5,
            Self::FiveHalves => 2.5,
        }
    }

    fn gamma(self) -> f64 {
        match self {
            // Gamma(3/2) = sqrt(pi)/2, Gamma(5/2) = 3 sqrt(pi)/4
            Self::ThreeHalves => PI.sqrt() / 2.0,
            Self::FiveHalves => 3.0 * PI.sqrt() / 4.0,
        }
    }
}

/// A computed `Li_s(-e^x)` value; always <= 0 for s > 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolylogValue {
    pub order: PolylogOrder,
    pub x: f64,
    pub value: f64,
}

/// `Li_s(-e^x)` via the Fermi-Dirac integral
/// `-(1/Gamma(s)) \int_0^inf t^(s-1)/(e^(t-x)+1) dt`.
///
/// The substitution `t = u^2` removes the sqrt kink of the s = 3/2 integrand.
/// For `x < -30` the alternating series of `-e^x` is used instead.
pub fn polylog_fd(order: PolylogOrder, x: f64) -> Result<PolylogValue> {
    if !x.is_finite() {
        return Err(PdemError::Domain(format!(
            "polylog_fd requires finite x, got {x}"
        )));
    }
    if x < -30.0 {
        // Li_s(z) = sum z^k / k^s with z = -e^x; converges immediately here.
        let s = order.s();
        let mut sum = 0.0;
        for k in 1..60 {
            let term = (-1f64).powi(k) * (k as f64 * x).exp() / (k as f64).powf(s);
            sum += term;
            if term.abs() < 1e-22 {
                break;
            }
        }
        return Ok(PolylogValue {
            order,
            x,
            value: sum,
        });
    }
    let s = order.s();
    let upper = (x.max(0.0) + 45.0).sqrt();
    let magnitude = 1.0 + x.max(0.0).powf(s); // Sommerfeld leading-order scale
    let integral = adaptive_quad(
        |u| 2.0 * u.powf(2.0 * s - 1.0) / ((u * u - x).exp() + 1.0),
        0.0,
        upper,
        1e-13 * magnitude,
    )?;
    Ok(PolylogValue {
        order,
        x,
        value: -integral / order.gamma(),
    })
}

/// Solve `Li_{3/2}(-e^x) = y` for `x`, `y < 0`.
pub fn inverse_polylog_32(y: f64) -> Result<f64> {
    if !(y < 0.0) {
        return Err(PdemError::Domain(format!(
            "inverse_polylog_32 requires y < 0, got {y}"
        )));
    }
    let f = |x: f64| polylog_fd(PolylogOrder::ThreeHalves, x).map(|p| p.value - y);
    // Initial guesses from the two asymptotic regimes:
    // dilute (y -> 0-): Li ~ -e^x, so x ~ ln(-y);
    // degenerate (y -> -inf): Li ~ -(4/(3 sqrt(pi))) x^(3/2).
    let dilute = (-y).ln();
    let degenerate = (-y * 3.0 * PI.sqrt() / 4.0).powf(2.0 / 3.0);
    let mut lo = dilute.min(degenerate.min(0.0)) - 2.0;
    let mut hi = dilute.max(degenerate) + 2.0;
    // expand the bracket if needed (Li decreasing in x: f(lo) < 0 < f(hi)
    // means y is between; note f is decreasing, so f(lo) > 0 > f(hi))
    for _ in 0..60 {
        if f(lo)? > 0.0 {
            break;
        }
        lo -= 5.0;
    }
    for _ in 0..60 {
        if f(hi)? < 0.0 {
            break;
        }
        hi += 5.0;
    }
    let g = move |x: f64| f(x).unwrap_or(f64::NAN);
    let root = brent(g, lo, hi, 1e-13 * (1.0 + hi.abs()))?;
    if !root.is_finite() {
        return Err(PdemError::Numeric(format!(
            "polylog inversion failed for y = {y}"
        )));
    }
    Ok(root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Independent oracle: the defining alternating series
    /// `Li_s(-1) = -sum (-1)^(k+1) / k^s`, accelerated by the eta-function
    /// relation `eta(s) = (1 - 2^(1-s)) zeta(s)` is avoided on purpose; plain
    /// partial sums with pairwise averaging converge well enough here.
    fn li_minus_one_series(s: f64) -> f64 {
        // average consecutive partial sums (Euler-style) to tame the
        // alternating tail
        let n = 4_000_000u64;
        let mut partial = 0.0;
        for k in 1..=n {
            partial += (-1f64).powi(k as i32) / (k as f64).powf(s);
        }
        let next = partial + (-1f64).powi(n as i32 + 1) / ((n + 1) as f64).powf(s);
        0.5 * (partial + next)
    }

    #[test]
    fn value_at_zero_three_halves() {
        let v = polylog_fd(PolylogOrder::ThreeHalves, 0.0).unwrap().value;
        assert_relative_eq!(v, li_minus_one_series(1.5), epsilon = 2e-7);
        assert_relative_eq!(v, -0.765147, epsilon = 1e-6);
    }

    #[test]
    fn value_at_zero_five_halves() {
        let v = polylog_fd(PolylogOrder::FiveHalves, 0.0).unwrap().value;
        assert_relative_eq!(v, li_minus_one_series(2.5), epsilon = 2e-7);
        assert_relative_eq!(v, -0.867200, epsilon = 1e-6);
    }

    #[test]
    fn dilute_limit() {
        let v = polylog_fd(PolylogOrder::ThreeHalves, -40.0).unwrap().value;
        assert_relative_eq!(v / -(-40.0f64).exp(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn series_quadrature_crossover_consistent() {
        for order in [PolylogOrder::ThreeHalves, PolylogOrder::FiveHalves] {
            let a = polylog_fd(order, -29.9).unwrap().value;
            let b = polylog_fd(order, -30.1).unwrap().value;
            // smooth function: neighbors across the branch switch stay close
            assert_relative_eq!(a / b, (0.2f64).exp(), epsilon = 1e-6);
        }
    }

    #[test]
    fn monotone_decreasing() {
        let xs = [-5.0, -1.0, 0.0, 1.0, 5.0, 20.0];
        for w in xs.windows(2) {
            let a = polylog_fd(PolylogOrder::ThreeHalves, w[0]).unwrap().value;
            let b = polylog_fd(PolylogOrder::ThreeHalves, w[1]).unwrap().value;
            assert!(b < a, "Li_3/2(-e^x) must decrease: x={} -> {}", w[0], w[1]);
            assert!(a < 0.0 && b < 0.0);
        }
    }

    #[test]
    fn inverse_round_trips() {
        for x in [-5.0, 0.0, 5.0, 20.0] {
            let y = polylog_fd(PolylogOrder::ThreeHalves, x).unwrap().value;
            let back = inverse_polylog_32(y).unwrap();
            assert_relative_eq!(back, x, epsilon = 1e-9, max_relative = 1e-9);
        }
    }

    #[test]
    fn inverse_at_minus_li_one() {
        let x = inverse_polylog_32(-0.7651470246254079).unwrap();
        assert!(x.abs() < 1e-6);
    }

    #[test]
    fn inverse_dilute() {
        let x = inverse_polylog_32(-1e-8).unwrap();
        assert!((x - (1e-8f64).ln()).abs() < 1e-3);
    }

    #[test]
    fn inverse_domain_guard() {
        assert!(inverse_polylog_32(0.0).is_err());
        assert!(inverse_polylog_32(0.5).is_err());
    }

    #[test]
    fn derivative_identity() {
        // d/dx Li_{5/2}(-e^x) = Li_{3/2}(-e^x), central differences
        for x in [-2.0, 0.0, 3.0] {
            let h = 1e-4;
            let up = polylog_fd(PolylogOrder::FiveHalves, x + h).unwrap().value;
            let dn = polylog_fd(PolylogOrder::FiveHalves, x - h).unwrap().value;
            let deriv = (up - dn) / (2.0 * h);
            let li32 = polylog_fd(PolylogOrder::ThreeHalves, x).unwrap().value;
            assert_relative_eq!(deriv, li32, epsilon = 1e-6, max_relative = 1e-6);
        }
    }
}
