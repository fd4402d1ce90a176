use num_complex::Complex64;

use super::local::{band, null_direction};
use super::map::{det2, DerivativeMode, FrontalMap, V2};
use crate::error::{Error, Result};
use crate::numerics::continuation::{self, LevelSample, TraceOptions};

/// One node of a traced singular curve, in parameter coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontalNode {
    pub p: [f64; 2],
    /// Accumulated chord length from the first node.
    pub t: f64,
    /// Unit tangent `(λ_v, -λ_u)/|dλ|`.
    pub tangent: [f64; 2],
    /// Unit null direction, sign continuous along the curve.
    pub eta: [f64; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrontalCurve {
    pub nodes: Vec<FrontalNode>,
    pub closed: bool,
}

pub(crate) fn newton_eps(map: &FrontalMap) -> f64 {
    match map.mode() {
        DerivativeMode::Exact => 1e-12,
        DerivativeMode::FiniteDifference => 1e-9,
    }
}

pub(crate) fn trace_options(map: &FrontalMap, max_step: f64) -> TraceOptions {
    TraceOptions {
        eps: newton_eps(map),
        max_step,
        // follow (λ_v, -λ_u)
        orientation: -1.0,
        min_gradient: 1e-10,
        ..TraceOptions::default()
    }
}

pub(crate) fn level(map: &FrontalMap, max_step: f64) -> impl Fn(Complex64) -> std::result::Result<LevelSample, String> + '_ {
    move |z: Complex64| {
        let (value, grad) = map.lambda_gradient(z.re, z.im).map_err(|e| e.to_string())?;
        Ok(LevelSample { value, gradient: Complex64::new(grad.x, grad.y), step_hint: max_step })
    }
}

pub(crate) fn unit_tangent(grad: &V2) -> V2 {
    V2::new(grad.y, -grad.x) / grad.norm()
}

/// Sign convention for `η` at a reference node: `det(γ′, η) > 0` when
/// transversal, otherwise `η·γ′ > 0`.
pub(crate) fn orient_eta(eta: V2, tangent: &V2, band: f64) -> V2 {
    let d = det2(tangent, &eta);
    let flip = if d.abs() > band { d < 0.0 } else { eta.dot(tangent) < 0.0 };
    if flip {
        -eta
    } else {
        eta
    }
}

pub(crate) fn node_frame(map: &FrontalMap, p: V2) -> Result<(V2, V2)> {
    let (_, grad) = map.lambda_gradient(p.x, p.y)?;
    if grad.norm() < 1e-10 {
        return Err(Error::DegenerateSeed { u: p.x, v: p.y, gradient: grad.norm() });
    }
    let l = map.local(p.x, p.y, false)?;
    Ok((unit_tangent(&grad), null_direction(&l, p.x, p.y)?))
}

/// Traces the component of `{λ = 0}` through `seed` inside the map's domain.
pub fn trace_singular_curve(map: &FrontalMap, seed: V2, max_step: f64, eps_zero: f64) -> Result<FrontalCurve> {
    let (_, grad) = map.lambda_gradient(seed.x, seed.y)?;
    if grad.norm() < 1e-10 {
        return Err(Error::DegenerateSeed { u: seed.x, v: seed.y, gradient: grad.norm() });
    }
    let opts = trace_options(map, max_step);
    let curve = continuation::trace(&level(map, max_step), Complex64::new(seed.x, seed.y), &map.domain, &opts)?;
    let band = band(map, eps_zero);
    let mut nodes: Vec<FrontalNode> = Vec::with_capacity(curve.points.len());
    let mut prev: Option<(V2, V2, f64)> = None;
    for z in &curve.points {
        let p = V2::new(z.re, z.im);
        let (tangent, eta) = node_frame(map, p)?;
        let (eta, t) = match prev {
            None => (orient_eta(eta, &tangent, band), 0.0),
            Some((q, e, t)) => (if eta.dot(&e) < 0.0 { -eta } else { eta }, t + (p - q).norm()),
        };
        nodes.push(FrontalNode { p: [p.x, p.y], t, tangent: [tangent.x, tangent.y], eta: [eta.x, eta.y] });
        prev = Some((p, eta, t));
    }
    Ok(FrontalCurve { nodes, closed: curve.closed })
}
