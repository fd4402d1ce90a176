use num_complex::Complex64;
use serde::Serialize;

use super::local::{band, null_residual, psi_at};
use super::map::{det2, FrontalMap, V2};
use super::trace::{level, node_frame, orient_eta, trace_options};
use crate::classification::{Tag, Tolerances};
use crate::error::{Error, Result};
use crate::numerics::continuation;

/// Node spacing of the local fit stencil.
const FIT_STEP: f64 = 1e-4;
/// Nodes on each side of the centre.
const FIT_HALF: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularPointReport {
    pub location: [f64; 2],
    pub lambda: f64,
    pub lambda_gradient: [f64; 2],
    /// Unit singular direction `γ′(0)`.
    pub tangent: [f64; 2],
    /// Unit null direction `η(0)`.
    pub eta: [f64; 2],
    pub tag: Tag,
    /// `(t, ψ(t))` at the fit nodes.
    pub psi_samples: Vec<(f64, f64)>,
    pub psi0: f64,
    pub psi1: f64,
    /// `det(η(0), γ′(0))`.
    pub det_eta_tangent: f64,
    /// Fitted `d/dt det(η, γ′)` at 0.
    pub det_slope: f64,
    /// `|D_η ν|` at the point; non-zero exactly at front points when `η ∥ γ′`.
    pub dnu_eta: f64,
    pub band: f64,
}

/// Least-squares line `a + b t`.
fn fit_line(samples: &[(f64, f64)]) -> (f64, f64) {
    let n = samples.len() as f64;
    let tm = samples.iter().map(|s| s.0).sum::<f64>() / n;
    let ym = samples.iter().map(|s| s.1).sum::<f64>() / n;
    let sxx: f64 = samples.iter().map(|s| (s.0 - tm).powi(2)).sum();
    let sxy: f64 = samples.iter().map(|s| (s.0 - tm) * (s.1 - ym)).sum();
    let b = sxy / sxx;
    (ym - b * tm, b)
}

struct StencilNode {
    p: V2,
    t: f64,
    tangent: V2,
    eta: V2,
}

/// Nodes at spacing `FIT_STEP` along the singular curve on both sides of `p0`.
fn stencil(map: &FrontalMap, p0: V2) -> Result<Vec<StencilNode>> {
    let opts = trace_options(map, FIT_STEP);
    let lev = level(map, FIT_STEP);
    let (tangent, eta) = node_frame(map, p0)?;
    let centre = StencilNode { p: p0, t: 0.0, tangent, eta };
    let mut sides: [Vec<StencilNode>; 2] = [Vec::new(), Vec::new()];
    for (side, sign) in [(0usize, -1.0f64), (1, 1.0)] {
        let (mut p, mut dir, mut t, mut e) = (p0, tangent * sign, 0.0, eta);
        for _ in 0..FIT_HALF {
            let guess = p + dir * FIT_STEP;
            let q = continuation::refine(&lev, Complex64::new(guess.x, guess.y), &opts)?;
            let q = V2::new(q.re, q.im);
            let (tq, eq) = node_frame(map, q)?;
            t += (q - p).norm();
            let eq = if eq.dot(&e) < 0.0 { -eq } else { eq };
            sides[side].push(StencilNode { p: q, t: sign * t, tangent: tq, eta: eq });
            p = q;
            dir = tq * sign;
            e = eq;
        }
    }
    let [mut back, forward] = sides;
    back.reverse();
    back.push(centre);
    back.extend(forward);
    Ok(back)
}

/// Classifies the singular point `p` (`λ(p) ≈ 0`, `dλ(p) ≠ 0`).
pub fn classify(map: &FrontalMap, p: V2, tol: &Tolerances) -> Result<SingularPointReport> {
    let (lambda, grad) = map.lambda_gradient(p.x, p.y)?;
    if grad.norm() < 1e-10 {
        if lambda.abs() > tol.eps_zero {
            return Err(Error::NotSingular { at: Complex64::new(p.x, p.y), residual: f64::INFINITY });
        }
        return Err(Error::DegenerateSeed { u: p.x, v: p.y, gradient: grad.norm() });
    }
    let residual = lambda.abs() / grad.norm();
    if residual > 1e-6 {
        return Err(Error::NotSingular { at: Complex64::new(p.x, p.y), residual });
    }
    let opts = trace_options(map, FIT_STEP);
    let p0 = continuation::refine(&level(map, FIT_STEP), Complex64::new(p.x, p.y), &opts)?;
    let p0 = V2::new(p0.re, p0.im);
    let (lambda, grad) = map.lambda_gradient(p0.x, p0.y)?;
    let band = band(map, tol.eps_zero);

    let mut nodes = stencil(map, p0)?;
    let c = FIT_HALF;
    let eta0 = orient_eta(nodes[c].eta, &nodes[c].tangent, band);
    if eta0.dot(&nodes[c].eta) < 0.0 {
        for n in nodes.iter_mut() {
            n.eta = -n.eta;
        }
    }
    let mut psi_samples = Vec::with_capacity(nodes.len());
    let mut det_samples = Vec::with_capacity(nodes.len());
    for n in &nodes {
        let l = map.local(n.p.x, n.p.y, false)?;
        let r = null_residual(&l, &n.eta);
        if r > 1e-7 {
            return Err(Error::NotNull { residual: r });
        }
        psi_samples.push((n.t, psi_at(&l, &n.tangent, &n.eta)));
        det_samples.push((n.t, det2(&n.eta, &n.tangent)));
    }
    let (psi0, psi1) = fit_line(&psi_samples);
    let (_, det_slope) = fit_line(&det_samples);
    let l0 = map.local(p0.x, p0.y, false)?;
    let (tangent, eta) = (nodes[c].tangent, nodes[c].eta);
    let det0 = det2(&eta, &tangent);
    let dnu_eta = l0.dnu(&eta).norm();

    let tag = if det0.abs() > band {
        if psi0.abs() > band {
            Tag::CuspidalEdge
        } else if psi1.abs() > band {
            Tag::CuspidalCrossCap
        } else {
            Tag::Indeterminate
        }
    } else if dnu_eta > band {
        if det_slope.abs() > band {
            Tag::Swallowtail
        } else {
            Tag::DegeneratePoint
        }
    } else {
        Tag::NonFrontOther
    };

    Ok(SingularPointReport {
        location: [p0.x, p0.y],
        lambda,
        lambda_gradient: [grad.x, grad.y],
        tangent: [tangent.x, tangent.y],
        eta: [eta.x, eta.y],
        tag,
        psi_samples,
        psi0,
        psi1,
        det_eta_tangent: det0,
        det_slope,
        dnu_eta,
        band,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_fit_recovers_coefficients() {
        let s: Vec<(f64, f64)> = [-0.3, -0.1, 0.05, 0.2, 0.4].iter().map(|&t| (t, 2.0 - 1.5 * t)).collect();
        let (a, b) = fit_line(&s);
        assert!((a - 2.0).abs() < 1e-14 && (b + 1.5).abs() < 1e-14);
    }
}
