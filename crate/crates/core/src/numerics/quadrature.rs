//! Adaptive Gauss-Kronrod (7/15) quadrature for vector-valued complex
//! integrands on a real interval.

use num_complex::Complex64;
use thiserror::Error;

/// Deepest bisection level before giving up.
pub const MAX_DEPTH: u32 = 30;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("quadrature did not converge on [{a}, {b}] within {MAX_DEPTH} subdivisions")]
    NoConvergence { a: f64, b: f64 },
    #[error("integrand is not finite at t = {t}")]
    NonFinite { t: f64 },
    #[error("integrand failed at t = {t}: {message}")]
    Integrand { t: f64, message: String },
}

// Positive Kronrod nodes; odd indices are the Gauss nodes.
const XK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOutput<const N: usize> {
    pub value: [Complex64; N],
    pub error: f64,
    pub evaluations: usize,
}

fn norm<const N: usize>(v: &[Complex64; N]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

type Eval<'a, const N: usize> = dyn FnMut(f64) -> Result<[Complex64; N], QuadError> + 'a;

fn rule<const N: usize>(
    f: &mut Eval<'_, N>,
    a: f64,
    b: f64,
) -> Result<([Complex64; N], f64), QuadError> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let zero = [Complex64::new(0.0, 0.0); N];
    let mut k = zero;
    let mut g = zero;
    let add = |acc: &mut [Complex64; N], w: f64, v: &[Complex64; N]| {
        for (x, y) in acc.iter_mut().zip(v) {
            *x += y * w;
        }
    };
    let center = f(mid)?;
    add(&mut k, WK[7], &center);
    add(&mut g, WG[3], &center);
    for j in 0..7 {
        let dx = half * XK[j];
        let lo = f(mid - dx)?;
        let hi = f(mid + dx)?;
        add(&mut k, WK[j], &lo);
        add(&mut k, WK[j], &hi);
        if j % 2 == 1 {
            add(&mut g, WG[j / 2], &lo);
            add(&mut g, WG[j / 2], &hi);
        }
    }
    for (x, y) in k.iter_mut().zip(g.iter_mut()) {
        *x *= half;
        *y *= half;
    }
    let mut diff = zero;
    for i in 0..N {
        diff[i] = k[i] - g[i];
    }
    Ok((k, norm(&diff)))
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Subintervals are bisected until each meets its share of the tolerance
/// (proportional to its length).
pub fn integrate<const N: usize, F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<QuadOutput<N>, QuadError>
where
    F: FnMut(f64) -> Result<[Complex64; N], QuadError>,
{
    let mut evaluations = 0usize;
    let mut counted = |t: f64| {
        evaluations += 1;
        let v = f(t)?;
        if v.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(QuadError::NonFinite { t });
        }
        Ok(v)
    };
    let mut total = [Complex64::new(0.0, 0.0); N];
    let mut error = 0.0;
    if a == b {
        return Ok(QuadOutput { value: total, error, evaluations: 0 });
    }
    let width = (b - a).abs();
    let (first, err) = rule(&mut counted, a, b)?;
    let mut stack = vec![(a, b, first, err, 0u32)];
    while let Some((lo, hi, val, err, depth)) = stack.pop() {
        let share = tol * (hi - lo).abs() / width;
        if err <= share || err <= 1e-15 * norm(&val) {
            for (t, v) in total.iter_mut().zip(val) {
                *t += v;
            }
            error += err;
            continue;
        }
        if depth >= MAX_DEPTH {
            return Err(QuadError::NoConvergence { a: lo, b: hi });
        }
        let mid = 0.5 * (lo + hi);
        let (lv, le) = rule(&mut counted, lo, mid)?;
        let (rv, re) = rule(&mut counted, mid, hi)?;
        stack.push((mid, hi, rv, re, depth + 1));
        stack.push((lo, mid, lv, le, depth + 1));
    }
    Ok(QuadOutput { value: total, error, evaluations })
}
