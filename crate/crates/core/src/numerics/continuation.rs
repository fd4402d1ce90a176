//! Predictor-corrector tracing of planar level sets `{F = 0}`.
//!
//! Points are complex numbers `u + iv`; gradients are packed the same way,
//! `F_u + i F_v`.

use num_complex::Complex64;
use thiserror::Error;

use crate::domain::{Grid, Rect};

#[derive(Debug, Clone, Copy)]
pub struct LevelSample {
    pub value: f64,
    pub gradient: Complex64,
    /// Preferred step length at this point (e.g. from local curvature).
    pub step_hint: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TraceError {
    #[error("continuation stalled near {at}")]
    Stall { at: Complex64 },
    #[error("level function has vanishing gradient near {at}")]
    Degenerate { at: Complex64 },
    #[error("level function failed at {at}: {message}")]
    Eval { at: Complex64, message: String },
}

#[derive(Debug, Clone, Copy)]
pub struct TraceOptions {
    /// Corrector stops once `|F| <= eps`.
    pub eps: f64,
    pub max_step: f64,
    /// `+1` follows `i * grad F`, `-1` the opposite direction.
    pub orientation: f64,
    pub max_newton: usize,
    pub max_halvings: usize,
    pub max_points: usize,
    /// Gradients below this norm count as degenerate.
    pub min_gradient: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            eps: 1e-11,
            max_step: 0.05,
            orientation: 1.0,
            max_newton: 25,
            max_halvings: 10,
            max_points: 200_000,
            min_gradient: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TracedCurve {
    pub points: Vec<Complex64>,
    pub closed: bool,
}

pub trait Level: Fn(Complex64) -> Result<LevelSample, String> {}
impl<T: Fn(Complex64) -> Result<LevelSample, String>> Level for T {}

fn sample<L: Level>(level: &L, p: Complex64) -> Result<LevelSample, TraceError> {
    level(p).map_err(|message| TraceError::Eval { at: p, message })
}

/// Newton projection onto the level set along the gradient.
pub fn refine<L: Level>(level: &L, p: Complex64, opts: &TraceOptions) -> Result<Complex64, TraceError> {
    let mut p = p;
    for _ in 0..=opts.max_newton {
        let s = sample(level, p)?;
        if s.value.abs() <= opts.eps {
            return Ok(p);
        }
        let g2 = s.gradient.norm_sqr();
        if g2.sqrt() < opts.min_gradient {
            return Err(TraceError::Degenerate { at: p });
        }
        p -= s.gradient * (s.value / g2);
        if !(p.re.is_finite() && p.im.is_finite()) {
            break;
        }
    }
    Err(TraceError::Stall { at: p })
}

fn unit_tangent(s: &LevelSample, orientation: f64) -> Complex64 {
    Complex64::i() * s.gradient / s.gradient.norm() * orientation
}

/// Follows the level set from `seed` (assumed refined) in one direction until
/// it leaves `rect` or returns to the seed.
fn march<L: Level>(level: &L, seed: Complex64, rect: &Rect, opts: &TraceOptions) -> Result<TracedCurve, TraceError> {
    let mut points = vec![seed];
    let mut p = seed;
    let mut travelled = 0.0;
    loop {
        if points.len() >= opts.max_points {
            return Err(TraceError::Stall { at: p });
        }
        let s = sample(level, p)?;
        if s.gradient.norm() < opts.min_gradient {
            return Err(TraceError::Degenerate { at: p });
        }
        let t = unit_tangent(&s, opts.orientation);
        let mut h = s.step_hint.min(opts.max_step);
        let back = seed - p;
        if travelled > 2.0 * h && back.norm() <= 1.5 * h && (back * t.conj()).re > 0.0 {
            if back.norm() <= h {
                return Ok(TracedCurve { points, closed: true });
            }
            h = 0.5 * back.norm();
        }
        let mut next = None;
        for _ in 0..=opts.max_halvings {
            if let Ok(q) = refine(level, p + t * h, opts) {
                let step = q - p;
                let ok_len = step.norm() <= 1.5 * h;
                let ok_dir = (step * t.conj()).re > 0.5 * step.norm();
                if ok_len && ok_dir {
                    next = Some(q);
                    break;
                }
            }
            h *= 0.5;
        }
        let q = next.ok_or(TraceError::Stall { at: p })?;
        if !rect.contains(q) {
            return Ok(TracedCurve { points, closed: false });
        }
        travelled += (q - p).norm();
        points.push(q);
        p = q;
    }
}

/// Traces the whole connected component through `seed`.
pub fn trace<L: Level>(level: &L, seed: Complex64, rect: &Rect, opts: &TraceOptions) -> Result<TracedCurve, TraceError> {
    let seed = refine(level, seed, opts)?;
    let forward = march(level, seed, rect, opts)?;
    if forward.closed {
        return Ok(forward);
    }
    let reverse_opts = TraceOptions { orientation: -opts.orientation, ..*opts };
    let backward = march(level, seed, rect, &reverse_opts)?;
    let mut points: Vec<Complex64> = backward.points.into_iter().skip(1).rev().collect();
    points.extend(forward.points);
    Ok(TracedCurve { points, closed: false })
}

/// Sign-change points on grid edges, linearly interpolated.
pub fn grid_crossings<L: Level>(level: &L, rect: &Rect, grid: Grid) -> Result<Vec<Complex64>, TraceError> {
    let mut values = vec![0.0; grid.node_count()];
    let idx = |i: usize, j: usize| j * (grid.nu + 1) + i;
    for j in 0..=grid.nv {
        for i in 0..=grid.nu {
            let z = rect.node(grid, i, j);
            values[idx(i, j)] = sample(level, z)?.value;
        }
    }
    let mut out = Vec::new();
    let mut edge = |a: (usize, usize), b: (usize, usize)| {
        let fa = values[idx(a.0, a.1)];
        let fb = values[idx(b.0, b.1)];
        let za = rect.node(grid, a.0, a.1);
        let zb = rect.node(grid, b.0, b.1);
        if fa == 0.0 {
            out.push(za);
        } else if fa * fb < 0.0 {
            out.push(za + (zb - za) * (fa / (fa - fb)));
        }
    };
    for j in 0..=grid.nv {
        for i in 0..=grid.nu {
            if i < grid.nu {
                edge((i, j), (i + 1, j));
            }
            if j < grid.nv {
                edge((i, j), (i, j + 1));
            }
        }
    }
    Ok(out)
}

fn distance_to_polyline(p: Complex64, curve: &TracedCurve) -> f64 {
    let pts = &curve.points;
    let mut best = f64::INFINITY;
    let n = pts.len();
    let segments = if curve.closed { n } else { n.saturating_sub(1) };
    if n == 1 {
        return (p - pts[0]).norm();
    }
    for k in 0..segments {
        let a = pts[k];
        let b = pts[(k + 1) % n];
        let ab = b - a;
        let len2 = ab.norm_sqr();
        let t = if len2 > 0.0 { ((p - a) * ab.conj()).re / len2 } else { 0.0 };
        let q = a + ab * t.clamp(0.0, 1.0);
        best = best.min((p - q).norm());
    }
    best
}

/// Every component of the level set detected on the grid.
pub fn trace_all<L: Level>(level: &L, rect: &Rect, grid: Grid, opts: &TraceOptions) -> Result<Vec<TracedCurve>, TraceError> {
    let cell = (rect.width() / grid.nu as f64).max(rect.height() / grid.nv as f64);
    let near = |p: Complex64, curves: &[TracedCurve]| curves.iter().any(|c| distance_to_polyline(p, c) <= 2.0 * cell);
    let mut curves: Vec<TracedCurve> = Vec::new();
    for candidate in grid_crossings(level, rect, grid)? {
        if near(candidate, &curves) {
            continue;
        }
        let seed = refine(level, candidate, opts)?;
        if !rect.contains(seed) || near(seed, &curves) {
            continue;
        }
        curves.push(trace(level, seed, rect, opts)?);
    }
    Ok(curves)
}
