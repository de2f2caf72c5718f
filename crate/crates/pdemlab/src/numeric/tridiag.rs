//! Symmetric tridiagonal eigenvalues (Sturm-sequence bisection) and a complex
//! tridiagonal linear solver.

use num_complex::Complex64;

use crate::error::{PdemError, Result};

/// Count of eigenvalues of the symmetric tridiagonal matrix `(diag, off)`
/// strictly less than `x` (Sturm sequence).
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let n = diag.len();
    let mut count = 0;
    let mut d = diag[0] - x;
    if d < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let e2 = off[i - 1] * off[i - 1];
        // guard against exact zero pivot
        if d == 0.0 {
            d = 1e-300;
        }
        d = diag[i] - x - e2 / d;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Lowest `k` eigenvalues of a symmetric tridiagonal matrix, ascending.
///
/// `diag` has length n, `off` length n-1.
pub fn lowest_eigenvalues(diag: &[f64], off: &[f64], k: usize) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 || off.len() + 1 != n {
        return Err(PdemError::Numeric(
            "tridiagonal dimensions inconsistent".into(),
        ));
    }
    let k = k.min(n);
    // Gershgorin bounds
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r =
            if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let scale = (hi - lo).max(1.0);
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        // bisection for the (j+1)-th smallest eigenvalue
        let (mut a, mut b) = (lo, hi);
        for _ in 0..120 {
            let m = 0.5 * (a + b);
            if sturm_count(diag, off, m) > j {
                b = m;
            } else {
                a = m;
            }
            if b - a < 1e-15 * scale {
                break;
            }
        }
        out.push(0.5 * (a + b));
    }
    Ok(out)
}

/// Count of pencil eigenvalues `A v = λ B v` strictly less than `x`, where
/// `A = (diag_a, off_a)` is symmetric tridiagonal and `B = diag(diag_b)` is
/// positive: the negative-pivot count of the LDLᵀ recursion of `A − x B`
/// (Sylvester inertia).
fn sturm_count_generalized(diag_a: &[f64], off_a: &[f64], diag_b: &[f64], x: f64) -> usize {
    let n = diag_a.len();
    let mut count = 0;
    let mut d = diag_a[0] - x * diag_b[0];
    if d < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let e2 = off_a[i - 1] * off_a[i - 1];
        if d == 0.0 {
            d = 1e-300;
        }
        d = diag_a[i] - x * diag_b[i] - e2 / d;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Lowest `k` eigenvalues of the symmetric-definite tridiagonal pencil
/// `A v = λ B v` with diagonal positive `B`, ascending.
///
/// Bisection directly on the pencil avoids forming `B^{−1/2} A B^{−1/2}`,
/// whose entries can overflow the useful float range when `B` spans many
/// orders of magnitude (e.g. exponential mass profiles on wide domains).
pub fn lowest_eigenvalues_generalized(
    diag_a: &[f64],
    off_a: &[f64],
    diag_b: &[f64],
    k: usize,
) -> Result<Vec<f64>> {
    let n = diag_a.len();
    if n == 0 || off_a.len() + 1 != n || diag_b.len() != n {
        return Err(PdemError::Numeric(
            "tridiagonal pencil dimensions inconsistent".into(),
        ));
    }
    if diag_b.iter().any(|&b| !(b > 0.0) || !b.is_finite()) {
        return Err(PdemError::Numeric(
            "pencil mass matrix must be positive and finite".into(),
        ));
    }
    let k = k.min(n);
    // Gershgorin-type bounds: at an eigenvalue, |a_i − λ b_i| ≤ r_i for some i
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off_a[i - 1].abs() } else { 0.0 }
            + if i + 1 < n { off_a[i].abs() } else { 0.0 };
        lo = lo.min((diag_a[i] - r) / diag_b[i]);
        hi = hi.max((diag_a[i] + r) / diag_b[i]);
    }
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if sturm_count_generalized(diag_a, off_a, diag_b, m) > j {
                b = m;
            } else {
                a = m;
            }
            if b - a < 1e-14 * (a.abs().max(b.abs()).max(1.0)) {
                break;
            }
        }
        out.push(0.5 * (a + b));
    }
    Ok(out)
}

/// Solve a complex tridiagonal system by the Thomas algorithm.
///
/// `lower`, `diag`, `upper` have lengths n-1, n, n-1.
pub fn solve_complex(
    lower: &[Complex64],
    diag: &[Complex64],
    upper: &[Complex64],
    rhs: &[Complex64],
) -> Result<Vec<Complex64>> {
    let n = diag.len();
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    let mut d = vec![Complex64::new(0.0, 0.0); n];
    let mut denom = diag[0];
    if denom.norm() == 0.0 {
        return Err(PdemError::Numeric("tridiagonal solve: zero pivot".into()));
    }
    if n > 1 {
        c[0] = upper[0] / denom;
    }
    d[0] = rhs[0] / denom;
    for i in 1..n {
        denom = diag[i] - lower[i - 1] * c[i - 1];
        if denom.norm() == 0.0 {
            return Err(PdemError::Numeric(format!(
                "tridiagonal solve: zero pivot at row {i}"
            )));
        }
        if i + 1 < n {
            c[i] = upper[i] / denom;
        }
        d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / denom;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        let next = x[i + 1];
        x[i] -= c[i] * next;
    }
    Ok(x)
}
