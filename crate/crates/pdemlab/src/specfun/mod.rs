//! Self-contained special functions: Bessel J1/Y1, Hermite polynomials,
//! terminating Kummer series, Fermi-Dirac polylogarithms and Si/Cin.

mod bessel;
mod polylog;
mod sici;

pub use bessel::{bessel_j0y0, bessel_j1y1, BesselPair};
pub use polylog::{inverse_polylog_32, polylog_fd, PolylogOrder, PolylogValue};
pub use sici::{ci_difference, si_cin, SiCin};

use crate::error::{PdemError, Result};

pub const HERMITE_MAX_DEGREE: u32 = 200;

/// Physicists' Hermite polynomial `H_n(x)` by upward recurrence.
///
/// Values that exceed the f64 range come back as `±inf`; the recurrence
/// itself is carried in a scaled representation so no NaN is produced.
pub fn hermite(n: u32, x: f64) -> Result<f64> {
    if n > HERMITE_MAX_DEGREE {
        return Err(PdemError::Domain(format!(
            "hermite degree {n} exceeds the supported maximum {HERMITE_MAX_DEGREE}"
        )));
    }
    let (mant, exp) = hermite_scaled(n, x);
    Ok(mant * 2f64.powi(exp))
}

/// `H_n(x)` as `mantissa * 2^exp`, rescaled whenever the mantissa leaves
/// `[1e-280, 1e280]` to keep the recurrence in range.
pub(crate) fn hermite_scaled(n: u32, x: f64) -> (f64, i32) {
    let mut prev = 1.0f64; // H_0
    let mut prev_exp = 0i32;
    if n == 0 {
        return (prev, prev_exp);
    }
    let mut cur = 2.0 * x; // H_1
    let mut cur_exp = 0i32;
    for k in 1..n {
        // align exponents before combining
        let shift = prev_exp - cur_exp;
        let prev_aligned = prev * 2f64.powi(shift);
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev_aligned;
        prev = cur;
        prev_exp = cur_exp;
        cur = next;
        if cur.abs() > 1e280 {
            cur /= 2f64.powi(512);
            cur_exp += 512;
        }
    }
    (cur, cur_exp)
}

/// Terminating Kummer (confluent hypergeometric) series `F(-n, b, x)`,
/// evaluated as the exact finite sum with compensated summation.
pub fn kummer_poly(n: u32, b: f64, x: f64) -> Result<f64> {
    if !(b > 0.0) {
        return Err(PdemError::Domain(format!(
            "kummer_poly requires b > 0, got {b}"
        )));
    }
    let mut sum = 1.0f64;
    let mut comp = 0.0f64;
    let mut term = 1.0f64;
    for k in 0..n {
        let kf = k as f64;
        term *= (kf - n as f64) * x / ((b + kf) * (kf + 1.0));
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    Ok(sum)
}
