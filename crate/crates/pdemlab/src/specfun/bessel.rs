//! Bessel functions J0, Y0, J1, Y1 for positive real arguments.
//!
//! Power series below the crossover, Hankel asymptotic expansions above it.
//! The crossover at x = 12 balances series cancellation against asymptotic
//! truncation; both branches are accurate to about 1e-12 there.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{PdemError, Result};

const EULER_GAMMA: f64 = 0.577215664901532860606512090082;
const CROSSOVER: f64 = 12.0;

/// Value pair of a Bessel evaluation at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselPair {
    pub j: f64,
    pub y: f64,
}

/// `J1(x)` and `Y1(x)` for `x > 0`.
pub fn bessel_j1y1(x: f64) -> Result<BesselPair> {
    if !(x > 0.0) {
        return Err(PdemError::Domain(format!(
            "bessel_j1y1 requires x > 0 (Y1 is singular at 0), got {x}"
        )));
    }
    if x <= CROSSOVER {
        Ok(BesselPair {
            j: j1_series(x),
            y: y1_series(x),
        })
    } else {
        Ok(asymptotic(1, x))
    }
}

/// `J0(x)` and `Y0(x)` for `x > 0`. Needed for analytic derivatives of the
/// order-1 functions via `(x J1)' = x J0` and `J1' = J0 - J1/x`.
pub fn bessel_j0y0(x: f64) -> Result<BesselPair> {
    if !(x > 0.0) {
        return Err(PdemError::Domain(format!(
            "bessel_j0y0 requires x > 0, got {x}"
        )));
    }
    if x <= CROSSOVER {
        Ok(BesselPair {
            j: j0_series(x),
            y: y0_series(x),
        })
    } else {
        Ok(asymptotic(0, x))
    }
}

fn j0_series(x: f64) -> f64 {
    let z = -x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..80 {
        term *= z / ((k * k) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1.0) {
            break;
        }
    }
    sum
}

fn j1_series(x: f64) -> f64 {
    let z = -x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..80 {
        term *= z / ((k * (k + 1)) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1.0) {
            break;
        }
    }
    0.5 * x * sum
}

fn y0_series(x: f64) -> f64 {
    // Y0 = (2/pi)(ln(x/2) + gamma) J0 - (2/pi) sum_{k>=1} H_k (-x^2/4)^k / (k!)^2
    let z = -x * x / 4.0;
    let mut term = 1.0;
    let mut hk = 0.0;
    let mut sum = 0.0;
    for k in 1..80 {
        term *= z / ((k * k) as f64);
        hk += 1.0 / k as f64;
        let add = hk * term;
        sum += add;
        if add.abs() < 1e-18 * sum.abs().max(1.0) {
            break;
        }
    }
    2.0 / PI * (((0.5 * x).ln() + EULER_GAMMA) * j0_series(x) - sum)
}

fn y1_series(x: f64) -> f64 {
    // Y1 = -2/(pi x) + (2/pi) ln(x/2) J1
    //      - (x/(2 pi)) sum_k (psi(k+1) + psi(k+2)) (-x^2/4)^k / (k!(k+1)!)
    let z = -x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 0.0;
    let mut hk = 0.0; // H_k
    for k in 0..80u32 {
        if k > 0 {
            term *= z / ((k * (k + 1)) as f64);
            hk += 1.0 / k as f64;
        }
        let hk1 = hk + 1.0 / (k + 1) as f64; // H_{k+1}
        let psi_sum = -2.0 * EULER_GAMMA + hk + hk1;
        let add = psi_sum * term;
        sum += add;
        if k > 3 && add.abs() < 1e-18 * sum.abs().max(1.0) {
            break;
        }
    }
    -2.0 / (PI * x) + 2.0 / PI * (0.5 * x).ln() * j1_series(x) - x / (2.0 * PI) * sum
}

/// Hankel asymptotic expansion for order `nu` at large `x`.
fn asymptotic(nu: u32, x: f64) -> BesselPair {
    let mu = 4.0 * (nu * nu) as f64;
    // a_k = prod_{j=1..k} (mu - (2j-1)^2) / (k! 8^k); P sums even k, Q odd k.
    let mut p = 0.0;
    let mut q = 0.0;
    let mut a = 1.0; // a_0
    let mut last = f64::INFINITY;
    for k in 0..40u32 {
        let term = a / x.powi(k as i32);
        if term.abs() > last {
            break; // asymptotic series started diverging
        }
        last = term.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if term.abs() < 1e-18 {
            break;
        }
        let j = (2 * k + 1) as f64;
        a *= (mu - j * j) / ((k + 1) as f64 * 8.0);
    }
    let omega = x - nu as f64 * PI / 2.0 - FRAC_PI_4;
    let amp = (2.0 / (PI * x)).sqrt();
    BesselPair {
        j: amp * (omega.cos() * p - omega.sin() * q),
        y: amp * (omega.sin() * p + omega.cos() * q),
    }
}
