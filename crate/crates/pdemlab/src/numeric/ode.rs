//! Embedded Dormand-Prince 5(4) integrator with adaptive step control.
//!
//! Output samples are produced by clamping steps onto the requested times, so
//! every reported state is a full-accuracy integration point.

/// Why an integration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OdeOutcome {
    Completed,
    /// Step size underflowed (stiff blow-up); the trajectory is truncated.
    StepUnderflow,
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// 4th-order error weights (b - b_hat)
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Dormand-Prince 5(4) driver for an `N`-dimensional first-order system.
pub struct Rk45<const N: usize, F: Fn(f64, &[f64; N]) -> [f64; N]> {
    pub rhs: F,
    /// Absolute and relative tolerance (used for both).
    pub tol: f64,
}

impl<const N: usize, F: Fn(f64, &[f64; N]) -> [f64; N]> Rk45<N, F> {
    /// Integrate from `(t0, y0)`, reporting the state at every time of
    /// `sample_times` (which must be strictly increasing, starting at >= t0).
    /// Returns the samples actually reached and the stop reason.
    pub fn integrate(
        &self,
        t0: f64,
        y0: [f64; N],
        sample_times: &[f64],
    ) -> (Vec<(f64, [f64; N])>, OdeOutcome) {
        let mut out = Vec::with_capacity(sample_times.len());
        let mut t = t0;
        let mut y = y0;
        let mut k1 = (self.rhs)(t, &y);
        let t_end = match sample_times.last() {
            Some(&te) => te,
            None => return (out, OdeOutcome::Completed),
        };
        let mut next_sample = 0;
        while next_sample < sample_times.len() && sample_times[next_sample] <= t {
            out.push((t, y));
            next_sample += 1;
        }
        let mut h = ((t_end - t0) / 100.0).min(0.1).max(1e-8);
        let h_min = 1e-14 * (1.0 + t_end.abs());
        while t < t_end {
            if next_sample < sample_times.len() {
                h = h.min(sample_times[next_sample] - t);
            }
            h = h.min(t_end - t);
            let (y5, err_norm, k7) = self.step(t, &y, &k1, h);
            if err_norm <= 1.0 || h <= h_min {
                t += h;
                y = y5;
                k1 = k7; // FSAL
                if !y.iter().all(|v| v.is_finite()) {
                    return (out, OdeOutcome::StepUnderflow);
                }
                while next_sample < sample_times.len()
                    && sample_times[next_sample] <= t + 1e-12 * (1.0 + t.abs())
                {
                    out.push((sample_times[next_sample], y));
                    next_sample += 1;
                }
            }
            // PI-free classic step-size update with safety factor.
            let scale = if err_norm > 0.0 {
                (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
            } else {
                5.0
            };
            h *= scale;
            if h < h_min {
                return (out, OdeOutcome::StepUnderflow);
            }
        }
        (out, OdeOutcome::Completed)
    }

    fn step(&self, t: f64, y: &[f64; N], k1: &[f64; N], h: f64) -> ([f64; N], f64, [f64; N]) {
        let f = &self.rhs;
        let mut yt = [0.0; N];
        for i in 0..N {
            yt[i] = y[i] + h * A21 * k1[i];
        }
        let k2 = f(t + h / 5.0, &yt);
        for i in 0..N {
            yt[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        let k3 = f(t + 3.0 * h / 10.0, &yt);
        for i in 0..N {
            yt[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        let k4 = f(t + 4.0 * h / 5.0, &yt);
        for i in 0..N {
            yt[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        let k5 = f(t + 8.0 * h / 9.0, &yt);
        for i in 0..N {
            yt[i] =
                y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        let k6 = f(t + h, &yt);
        let mut y5 = [0.0; N];
        for i in 0..N {
            y5[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        }
        let k7 = f(t + h, &y5);
        let mut err_norm: f64 = 0.0;
        for i in 0..N {
            let err =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = self.tol * (1.0 + y[i].abs().max(y5[i].abs()));
            err_norm = err_norm.max((err / sc).abs());
        }
        (y5, err_norm, k7)
    }
}
