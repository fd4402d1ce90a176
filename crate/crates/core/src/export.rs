//! CSV writers with fixed 17-significant-digit floats for byte-stable output.

use std::fmt::Write;

use crate::frontal::{FrontalCurve, SingularPointReport};
use crate::weierstrass::SingularCurve;

/// `{:.16e}`: 17 significant digits in scientific notation.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

/// One row per curve point: `curve,t_index,re_z,im_z,tag,re_alpha,im_alpha,second_test`,
/// plus `det_drift` when any point carries one.
pub fn curve_csv(curves: &[SingularCurve]) -> String {
    let drift = curves.iter().flat_map(|c| &c.points).any(|p| p.classification.diagnostics.det_drift.is_some());
    let mut out = String::from("curve,t_index,re_z,im_z,tag,re_alpha,im_alpha,second_test,special");
    if drift {
        out.push_str(",det_drift");
    }
    out.push('\n');
    for (ci, c) in curves.iter().enumerate() {
        for (i, p) in c.points.iter().enumerate() {
            let d = &p.classification.diagnostics;
            let _ = write!(
                out,
                "{ci},{i},{},{},{},{},{},{},{}",
                float(p.z.re),
                float(p.z.im),
                p.classification.tag,
                float(d.alpha.re),
                float(d.alpha.im),
                float(d.second_test),
                p.special
            );
            if drift {
                let _ = write!(out, ",{}", opt(d.det_drift));
            }
            out.push('\n');
        }
    }
    out
}

/// Frontal classification reports in the curve schema. The `α` columns do
/// not apply and stay empty, `second_test` holds `d/dt det(η, γ′)`, and
/// `ψ(0)`, `ψ′(0)` are appended.
pub fn frontal_reports_csv(reports: &[SingularPointReport]) -> String {
    let mut out = String::from("curve,t_index,re_z,im_z,tag,re_alpha,im_alpha,second_test,special,psi0,psi1\n");
    for (i, r) in reports.iter().enumerate() {
        let _ = writeln!(
            out,
            "0,{i},{},{},{},,,{},true,{},{}",
            float(r.location[0]),
            float(r.location[1]),
            r.tag,
            float(r.det_slope),
            float(r.psi0),
            float(r.psi1)
        );
    }
    out
}

/// Traced frontal curve with `ψ` per node.
pub fn frontal_curve_csv(curve: &FrontalCurve, psi: &[f64]) -> String {
    let mut out = String::from("t_index,u,v,t,eta_u,eta_v,psi\n");
    for (i, (n, s)) in curve.nodes.iter().zip(psi).enumerate() {
        let _ = writeln!(
            out,
            "{i},{},{},{},{},{},{}",
            float(n.p[0]),
            float(n.p[1]),
            float(n.t),
            float(n.eta[0]),
            float(n.eta[1]),
            float(*s)
        );
    }
    out
}

/// `x⁰` per mesh vertex, companion to an OBJ of `(x¹, x², x³)`.
pub fn x0_csv(x0: &[f64]) -> String {
    let mut out = String::from("vertex,x0\n");
    for (i, x) in x0.iter().enumerate() {
        let _ = writeln!(out, "{},{}", i + 1, float(*x));
    }
    out
}
