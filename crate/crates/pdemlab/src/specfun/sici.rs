//! Sine integral Si and the entire cosine integral Cin.
//!
//! `Cin(x) = \int_0^x (1 - cos t)/t dt` stands in for the divergent-at-zero
//! `\int_0^x cos t / t dt`; differences of the standard Ci are recovered via
//! `Ci(a) - Ci(b) = ln(a/b) - (Cin(a) - Cin(b))`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{PdemError, Result};
use crate::numeric::adaptive_quad;

const EULER_GAMMA: f64 = 0.577215664901532860606512090082;
const ASYMPTOTIC_CUTOVER: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiCin {
    pub si: f64,
    pub cin: f64,
}

/// `Si(x)` and `Cin(x)` for `x >= 0`.
pub fn si_cin(x: f64) -> Result<SiCin> {
    if !(x >= 0.0) {
        return Err(PdemError::Domain(format!(
            "si_cin requires x >= 0, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(SiCin { si: 0.0, cin: 0.0 });
    }
    if x <= ASYMPTOTIC_CUTOVER {
        let si = adaptive_quad(|t| if t == 0.0 { 1.0 } else { t.sin() / t }, 0.0, x, 1e-12)?;
        let cin = adaptive_quad(
            |t| {
                if t.abs() < 1e-8 {
                    0.5 * t // (1 - cos t)/t -> t/2
                } else {
                    (1.0 - t.cos()) / t
                }
            },
            0.0,
            x,
            1e-12,
        )?;
        Ok(SiCin { si, cin })
    } else {
        // auxiliary asymptotic functions f, g:
        // Si(x) = pi/2 - f cos x - g sin x,  Ci(x) = f sin x - g cos x
        let (f, g) = aux_fg(x);
        let si = FRAC_PI_2 - f * x.cos() - g * x.sin();
        let ci = f * x.sin() - g * x.cos();
        Ok(SiCin {
            si,
            cin: EULER_GAMMA + x.ln() - ci,
        })
    }
}

fn aux_fg(x: f64) -> (f64, f64) {
    // f ~ (1/x) sum (-1)^k (2k)!/x^(2k),  g ~ (1/x^2) sum (-1)^k (2k+1)!/x^(2k)
    let x2 = x * x;
    let mut f = 0.0;
    let mut g = 0.0;
    let mut even = 1.0f64; // (2k)! / x^(2k)
    let mut last = f64::INFINITY;
    for k in 0..40u32 {
        if even.abs() > last {
            break;
        }
        last = even.abs();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let odd = even * (2 * k + 1) as f64;
        f += sign * even;
        g += sign * odd / x;
        if even < 1e-17 {
            break;
        }
        even *= ((2 * k + 1) * (2 * k + 2)) as f64 / x2;
    }
    (f / x, g / x)
}

/// `Ci(a) - Ci(b)` through the Cin representation.
pub fn ci_difference(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(PdemError::Domain(format!(
            "ci_difference requires positive arguments, got ({a}, {b})"
        )));
    }
    let ca = si_cin(a)?.cin;
    let cb = si_cin(b)?.cin;
    Ok((a.ln() - b.ln()) - (ca - cb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn zero_values() {
        let v = si_cin(0.0).unwrap();
        assert_eq!(v.si, 0.0);
        assert_eq!(v.cin, 0.0);
    }

    #[test]
    fn si_at_pi() {
        // Gibbs constant, cross-checked by the quadrature inside si_cin
        let v = si_cin(PI).unwrap();
        assert_relative_eq!(v.si, 1.851937, epsilon = 1e-6);
        assert_relative_eq!(v.si, 1.8519370519824662, epsilon = 1e-10);
    }

    #[test]
    fn ci_difference_against_direct_quadrature() {
        let direct = adaptive_quad(|t: f64| t.cos() / t, 1.0, 2.0, 1e-12).unwrap();
        let via = ci_difference(2.0, 1.0).unwrap();
        assert_relative_eq!(via, direct, epsilon = 1e-10);
        assert_relative_eq!(via, 0.0855769058, epsilon = 1e-8);
    }

    #[test]
    fn asymptotic_branch_matches_quadrature() {
        // straddle the cutover: quadrature value just below vs asymptotic just above
        let below = si_cin(ASYMPTOTIC_CUTOVER).unwrap();
        let above = si_cin(ASYMPTOTIC_CUTOVER + 1e-9).unwrap();
        assert_relative_eq!(below.si, above.si, epsilon = 1e-9);
        assert_relative_eq!(below.cin, above.cin, epsilon = 1e-9);
    }

    #[test]
    fn large_argument_limit() {
        // Si(x) -> pi/2
        let v = si_cin(1e6).unwrap();
        assert!((v.si - FRAC_PI_2).abs() < 2e-6);
    }

    #[test]
    fn negative_rejected() {
        assert!(si_cin(-1.0).is_err());
        assert!(ci_difference(-1.0, 1.0).is_err());
    }
}
