use serde::Serialize;

use super::map::{FrontalMap, LocalData, V2};
use super::trace::FrontalCurve;
use crate::error::Result;

/// One sample of the curvature profile; `gaussian` and `mean` are `None`
/// where the first fundamental form is degenerate (in particular at offset 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureRow {
    pub t_index: usize,
    pub t: f64,
    pub offset: f64,
    pub gaussian: Option<f64>,
    pub mean: Option<f64>,
    /// Second fundamental form on the curve tangent, `II(γ′, γ′)`.
    pub ii_gamma: f64,
}

struct Forms {
    e: f64,
    f: f64,
    g: f64,
    l: f64,
    m: f64,
    n: f64,
}

/// First and second fundamental forms, with `II = -⟨df, dν⟩`.
fn forms(d: &LocalData) -> Forms {
    let (fu, fv, nu, nv) = (&d.f.du, &d.f.dv, &d.nu.du, &d.nu.dv);
    Forms {
        e: fu.dot(fu),
        f: fu.dot(fv),
        g: fv.dot(fv),
        l: -fu.dot(nu),
        m: -0.5 * (fu.dot(nv) + fv.dot(nu)),
        n: -fv.dot(nv),
    }
}

const METRIC_FLOOR: f64 = 1e-14;

/// `K`, `H`, and `II(γ′, γ′)` at points displaced from each curve node along
/// `η`. A zero offset produces the limit row on the curve itself.
pub fn curvature_profile(map: &FrontalMap, curve: &FrontalCurve, offsets: &[f64]) -> Result<Vec<CurvatureRow>> {
    let mut rows = Vec::with_capacity(curve.nodes.len() * offsets.len());
    for (t_index, node) in curve.nodes.iter().enumerate() {
        let (p, eta, tangent) = (V2::from(node.p), V2::from(node.eta), V2::from(node.tangent));
        for &offset in offsets {
            let q = p + eta * offset;
            let d = map.local(q.x, q.y, false)?;
            let s = forms(&d);
            let det_i = s.e * s.g - s.f * s.f;
            let scale = (s.e + s.g).powi(2).max(1.0);
            let (gaussian, mean) = if offset != 0.0 && det_i > METRIC_FLOOR * scale {
                (
                    Some((s.l * s.n - s.m * s.m) / det_i),
                    Some((s.e * s.n - 2.0 * s.f * s.m + s.g * s.l) / (2.0 * det_i)),
                )
            } else {
                (None, None)
            };
            let (a, b) = (tangent.x, tangent.y);
            let ii_gamma = s.l * a * a + 2.0 * s.m * a * b + s.n * b * b;
            rows.push(CurvatureRow { t_index, t: node.t, offset, gaussian, mean, ii_gamma });
        }
    }
    Ok(rows)
}
