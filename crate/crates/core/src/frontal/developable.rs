use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::jet2::{cross, dot, normalize, Jet2, VecJet};
use super::map::{det3, FrontalMap, V3};
use crate::domain::Rect;
use crate::error::{Error, Result};
use crate::expr::Expr;

/// `t ↦ [γ, γ′, γ″, γ‴, γ⁗]`.
pub type CurveJets = Arc<dyn Fn(f64) -> Result<[V3; 5]> + Send + Sync>;

/// Tangent developable `f(t, u) = γ(t) + u ξ₁(t)` with normal `ξ₃(t)`,
/// in coordinates `(t, u)`.
#[derive(Clone)]
pub struct TangentDevelopable {
    jets: CurveJets,
    pub domain: Rect,
}

impl fmt::Debug for TangentDevelopable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TangentDevelopable").field("domain", &self.domain).finish_non_exhaustive()
    }
}

const FRENET_SAMPLES: usize = 64;
const MIN_CURVATURE: f64 = 1e-10;

impl TangentDevelopable {
    /// Fails when the curvature vanishes at any of the window samples.
    pub fn new(jets: CurveJets, domain: Rect) -> Result<TangentDevelopable> {
        let d = TangentDevelopable { jets, domain };
        for i in 0..=FRENET_SAMPLES {
            let t = domain.u_min + domain.width() * i as f64 / FRENET_SAMPLES as f64;
            d.curvature(t)?;
        }
        Ok(d)
    }

    /// Curve given by three expressions in `z`, evaluated on the real axis.
    /// The fourth derivative is a Richardson central difference of the third.
    pub fn from_exprs(curve: [Expr; 3], domain: Rect) -> Result<TangentDevelopable> {
        let jets: CurveJets = Arc::new(move |t| {
            let at = |e: &Expr, t: f64| {
                let z = Complex64::new(t, 0.0);
                e.eval_jet(z, 3).map_err(|source| Error::Eval { field: "curve", at: z, source })
            };
            let mut out = [V3::zeros(); 5];
            let h = 1e-3 * 1f64.max(t.abs());
            for (i, e) in curve.iter().enumerate() {
                let j = at(e, t)?;
                for k in 0..4 {
                    out[k][i] = j.derivative(k).re;
                }
                let d3 = |s: f64| -> Result<f64> { Ok(at(e, t + s)?.derivative(3).re) };
                let d = |h: f64| -> Result<f64> { Ok((d3(h)? - d3(-h)?) / (2.0 * h)) };
                out[4][i] = (4.0 * d(0.5 * h)? - d(h)?) / 3.0;
            }
            Ok(out)
        });
        TangentDevelopable::new(jets, domain)
    }

    pub fn jets(&self, t: f64) -> Result<[V3; 5]> {
        (self.jets)(t)
    }

    /// `κ = |γ′ × γ″| / |γ′|³`.
    pub fn curvature(&self, t: f64) -> Result<f64> {
        let j = self.jets(t)?;
        let k = j[1].cross(&j[2]).norm() / j[1].norm().powi(3);
        if !(k > MIN_CURVATURE) {
            return Err(Error::FrenetUndefined { t });
        }
        Ok(k)
    }

    /// `τ = det(γ′, γ″, γ‴) / |γ′ × γ″|²`.
    pub fn torsion(&self, t: f64) -> Result<f64> {
        self.curvature(t)?;
        let j = self.jets(t)?;
        Ok(det3(&j[1], &j[2], &j[3]) / j[1].cross(&j[2]).norm_squared())
    }

    /// Derivative of the torsion, by the quotient rule.
    pub fn torsion_derivative(&self, t: f64) -> Result<f64> {
        self.curvature(t)?;
        let j = self.jets(t)?;
        let c = j[1].cross(&j[2]);
        let num = det3(&j[1], &j[2], &j[3]);
        let num_d = det3(&j[1], &j[2], &j[4]);
        let c2 = c.norm_squared();
        let c2_d = 2.0 * c.dot(&j[1].cross(&j[3]));
        Ok((num_d * c2 - num * c2_d) / (c2 * c2))
    }

    /// The surface as a frontal map with exact derivatives.
    pub fn map(&self) -> FrontalMap {
        let jets = self.jets.clone();
        let lift = move |t: f64, order: usize| -> Result<VecJet> {
            let j = jets(t)?;
            Ok([0, 1, 2].map(|i| Jet2::of_u(j[order][i], j[order + 1][i], j[order + 2][i])))
        };
        let lift = Arc::new(lift);
        let lf = lift.clone();
        let f = Arc::new(move |t: f64, u: f64| -> Result<VecJet> {
            let gamma = lf(t, 0)?;
            let xi1 = normalize(&lf(t, 1)?);
            let u = Jet2::var_v(u);
            Ok([0, 1, 2].map(|i| gamma[i] + u * xi1[i]))
        });
        let nu = Arc::new(move |t: f64, _u: f64| -> Result<VecJet> {
            let b = cross(&lift(t, 1)?, &lift(t, 2)?);
            if !(dot(&b, &b).v.sqrt() > 0.0) {
                return Err(Error::FrenetUndefined { t });
            }
            Ok(normalize(&b))
        });
        FrontalMap::from_jets("tangent-developable", f, nu, self.domain)
    }
}
