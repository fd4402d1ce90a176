//! Dormand-Prince 5(4) integration of linear matrix ODEs `Y' = f(s, Y)`
//! with 2x2 complex state.

use nalgebra::Matrix2;
use num_complex::Complex64;
use thiserror::Error;

pub type CMat2 = Matrix2<Complex64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError {
    #[error("step size underflow at s = {s}")]
    StepUnderflow { s: f64 },
    #[error("right-hand side failed at s = {s}: {message}")]
    Rhs { s: f64, message: String },
    #[error("state became non-finite at s = {s}")]
    NonFinite { s: f64 },
}

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    /// Mixed absolute/relative local error tolerance.
    pub tol: f64,
    pub initial_step: f64,
    pub min_step: f64,
    /// Rescale to unit determinant after every accepted step.
    pub renormalize: bool,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            tol: 1e-10,
            initial_step: 0.05,
            min_step: 1e-14,
            renormalize: false,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct OdeSolution {
    pub y: CMat2,
    pub accepted: usize,
    pub rejected: usize,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// Fifth-order weights equal the last row of A (FSAL).
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn finite(m: &CMat2) -> bool {
    m.iter().all(|c| c.re.is_finite() && c.im.is_finite())
}

/// Integrates from `s0` to `s1` starting at `y0`.
pub fn integrate<F>(mut f: F, s0: f64, s1: f64, y0: CMat2, opts: OdeOptions) -> Result<OdeSolution, OdeError>
where
    F: FnMut(f64, &CMat2) -> Result<CMat2, OdeError>,
{
    let mut y = y0;
    let mut sol = OdeSolution { y, accepted: 0, rejected: 0 };
    if s0 == s1 {
        return Ok(sol);
    }
    let dir = (s1 - s0).signum();
    let span = (s1 - s0).abs();
    let mut s = s0;
    let mut h = opts.initial_step.min(span);
    let mut err_prev = 1.0f64;
    let mut k = [CMat2::zeros(); 7];
    k[0] = f(s, &y)?;
    while dir * (s1 - s) > 0.0 {
        let remaining = (s1 - s).abs();
        let last = h >= remaining;
        if last {
            h = remaining;
        }
        for i in 1..7 {
            let mut yi = y;
            for j in 0..i {
                if A[i][j] != 0.0 {
                    yi += k[j] * Complex64::new(dir * h * A[i][j], 0.0);
                }
            }
            k[i] = f(s + dir * h * C[i], &yi)?;
        }
        let mut y5 = y;
        let mut diff = CMat2::zeros();
        for i in 0..7 {
            y5 += k[i] * Complex64::new(dir * h * B5[i], 0.0);
            diff += k[i] * Complex64::new(dir * h * (B5[i] - B4[i]), 0.0);
        }
        let mut err = 0.0f64;
        for (d, (a, b)) in diff.iter().zip(y.iter().zip(y5.iter())) {
            let scale = opts.tol * (1.0 + a.norm().max(b.norm()));
            err = err.max(d.norm() / scale);
        }
        if !err.is_finite() {
            err = 1e10;
        }
        if err <= 1.0 {
            s = if last { s1 } else { s + dir * h };
            y = y5;
            if opts.renormalize {
                let d = y.determinant().sqrt();
                y /= d;
            }
            if !finite(&y) {
                return Err(OdeError::NonFinite { s });
            }
            sol.accepted += 1;
            k[0] = if opts.renormalize { f(s, &y)? } else { k[6] };
            // PI controller
            let fac = 0.9 * err.max(1e-10).powf(-0.7 / 5.0) * err_prev.powf(0.4 / 5.0);
            h *= fac.clamp(0.2, 5.0);
            err_prev = err.max(1e-4);
        } else {
            sol.rejected += 1;
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
        }
        if h < opts.min_step && dir * (s1 - s) > 0.0 {
            return Err(OdeError::StepUnderflow { s });
        }
    }
    sol.y = y;
    Ok(sol)
}
