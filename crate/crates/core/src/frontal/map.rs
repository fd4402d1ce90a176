use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix3, Vector2, Vector3};

use super::jet2::{Partials, VecJet};
use crate::domain::Rect;
use crate::error::Result;

pub type V2 = Vector2<f64>;
pub type V3 = Vector3<f64>;

pub type PointFn = Arc<dyn Fn(f64, f64) -> Result<V3> + Send + Sync>;
pub type JetFn = Arc<dyn Fn(f64, f64) -> Result<VecJet> + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeMode {
    Exact,
    FiniteDifference,
}

/// A map `f: U -> R³` with unit normal field `ν`.
#[derive(Clone)]
pub struct FrontalMap {
    pub name: String,
    f: PointFn,
    nu: PointFn,
    f_jet: Option<JetFn>,
    nu_jet: Option<JetFn>,
    pub domain: Rect,
    mode: DerivativeMode,
}

impl fmt::Debug for FrontalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FrontalMap")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("mode", &self.mode)
            .finish_non_exhaustive()
    }
}

/// `f` and `ν` with first and second partial derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalData {
    pub f: Partials,
    pub nu: Partials,
}

impl LocalData {
    /// `det(f_u, f_v, ν)`.
    pub fn lambda(&self) -> f64 {
        det3(&self.f.du, &self.f.dv, &self.nu.value)
    }

    /// Differential of `f` applied to the plane vector `w`.
    pub fn df(&self, w: &V2) -> V3 {
        self.f.du * w.x + self.f.dv * w.y
    }

    /// Flat directional derivative of `ν` along `w`.
    pub fn dnu(&self, w: &V2) -> V3 {
        self.nu.du * w.x + self.nu.dv * w.y
    }
}

pub fn det3(a: &V3, b: &V3, c: &V3) -> f64 {
    Matrix3::from_columns(&[*a, *b, *c]).determinant()
}

/// Central difference with one Richardson level.
fn richardson<F>(g: F, h: f64) -> Result<V3>
where
    F: Fn(f64) -> Result<V3>,
{
    let d = |h: f64| -> Result<V3> { Ok((g(h)? - g(-h)?) / (2.0 * h)) };
    Ok((d(0.5 * h)? * 4.0 - d(h)?) / 3.0)
}

const FD_FIRST: f64 = 1e-5;
const FD_SECOND: f64 = 1e-3;
const FD_LAMBDA: f64 = 1e-4;

fn fd_partials(g: &PointFn, u: f64, v: f64, second: bool) -> Result<Partials> {
    let scale = 1f64.max(u.abs().max(v.abs()));
    let h = FD_FIRST * scale;
    let value = g(u, v)?;
    let du = richardson(|s| g(u + s, v), h)?;
    let dv = richardson(|s| g(u, v + s), h)?;
    let (mut duu, mut duv, mut dvv) = (V3::zeros(), V3::zeros(), V3::zeros());
    if second {
        let h2 = FD_SECOND * scale;
        // first derivatives differenced again, each with Richardson
        let fu = |a: f64, b: f64| richardson(|s| g(a + s, b), h);
        let fv = |a: f64, b: f64| richardson(|s| g(a, b + s), h);
        duu = richardson(|s| fu(u + s, v), h2)?;
        dvv = richardson(|s| fv(u, v + s), h2)?;
        duv = (richardson(|s| fu(u, v + s), h2)? + richardson(|s| fv(u + s, v), h2)?) * 0.5;
    }
    Ok(Partials { value, du, dv, duu, duv, dvv })
}

impl FrontalMap {
    /// Map with exact derivatives supplied by jet evaluators.
    pub fn from_jets(name: impl Into<String>, f_jet: JetFn, nu_jet: JetFn, domain: Rect) -> FrontalMap {
        let fj = f_jet.clone();
        let nj = nu_jet.clone();
        FrontalMap {
            name: name.into(),
            f: Arc::new(move |u, v| Ok(Partials::of(&fj(u, v)?).value)),
            nu: Arc::new(move |u, v| Ok(Partials::of(&nj(u, v)?).value)),
            f_jet: Some(f_jet),
            nu_jet: Some(nu_jet),
            domain,
            mode: DerivativeMode::Exact,
        }
    }

    /// Map known only through point samples; derivatives by finite differences.
    pub fn from_samples(name: impl Into<String>, f: PointFn, nu: PointFn, domain: Rect) -> FrontalMap {
        FrontalMap {
            name: name.into(),
            f,
            nu,
            f_jet: None,
            nu_jet: None,
            domain,
            mode: DerivativeMode::FiniteDifference,
        }
    }

    /// Switches to finite differences, or back to exact jets when available.
    pub fn with_mode(mut self, mode: DerivativeMode) -> FrontalMap {
        self.mode = match mode {
            DerivativeMode::Exact if self.f_jet.is_none() => DerivativeMode::FiniteDifference,
            m => m,
        };
        self
    }

    pub fn mode(&self) -> DerivativeMode {
        self.mode
    }

    pub fn point(&self, u: f64, v: f64) -> Result<V3> {
        (self.f)(u, v)
    }

    pub fn normal(&self, u: f64, v: f64) -> Result<V3> {
        (self.nu)(u, v)
    }

    /// Partial derivatives; second derivatives only when `second` is set.
    pub fn local(&self, u: f64, v: f64, second: bool) -> Result<LocalData> {
        match (self.mode, &self.f_jet, &self.nu_jet) {
            (DerivativeMode::Exact, Some(fj), Some(nj)) => Ok(LocalData {
                f: Partials::of(&fj(u, v)?),
                nu: Partials::of(&nj(u, v)?),
            }),
            _ => Ok(LocalData {
                f: fd_partials(&self.f, u, v, second)?,
                nu: fd_partials(&self.nu, u, v, false)?,
            }),
        }
    }

    /// Signed area density `λ = det(f_u, f_v, ν)`.
    pub fn area_density(&self, u: f64, v: f64) -> Result<f64> {
        Ok(self.local(u, v, false)?.lambda())
    }

    /// `λ` and its gradient.
    pub fn lambda_gradient(&self, u: f64, v: f64) -> Result<(f64, V2)> {
        if self.mode == DerivativeMode::Exact {
            let l = self.local(u, v, true)?;
            let (f, n) = (&l.f, &l.nu);
            let lu = det3(&f.duu, &f.dv, &n.value) + det3(&f.du, &f.duv, &n.value) + det3(&f.du, &f.dv, &n.du);
            let lv = det3(&f.duv, &f.dv, &n.value) + det3(&f.du, &f.dvv, &n.value) + det3(&f.du, &f.dv, &n.dv);
            return Ok((l.lambda(), V2::new(lu, lv)));
        }
        let h = FD_LAMBDA * 1f64.max(u.abs().max(v.abs()));
        let lam = |a: f64, b: f64| self.area_density(a, b);
        let d = |h: f64| -> Result<V2> {
            Ok(V2::new(
                (lam(u + h, v)? - lam(u - h, v)?) / (2.0 * h),
                (lam(u, v + h)? - lam(u, v - h)?) / (2.0 * h),
            ))
        };
        let grad = (d(0.5 * h)? * 4.0 - d(h)?) / 3.0;
        Ok((lam(u, v)?, grad))
    }

    /// The same surface in coordinates `(u, v) -> (v, u)`.
    pub fn swapped(&self) -> FrontalMap {
        let swap_jet = |j: &Option<JetFn>| {
            j.clone().map(|j| -> JetFn { Arc::new(move |u, v| Ok(j(v, u)?.map(|c| c.swapped()))) })
        };
        let f = self.f.clone();
        let nu = self.nu.clone();
        let d = self.domain;
        FrontalMap {
            name: format!("{}-swapped", self.name),
            f: Arc::new(move |u, v| f(v, u)),
            nu: Arc::new(move |u, v| nu(v, u)),
            f_jet: swap_jet(&self.f_jet),
            nu_jet: swap_jet(&self.nu_jet),
            domain: Rect::new(d.v_min, d.v_max, d.u_min, d.u_max),
            mode: self.mode,
        }
    }

    /// Largest `|ν| - 1` and `|ν·f_u|, |ν·f_v|` over the grid samples.
    pub fn check_normal(&self, samples: usize) -> Result<(f64, f64)> {
        let (mut unit, mut ortho) = (0.0f64, 0.0f64);
        let d = self.domain;
        for i in 0..=samples {
            for j in 0..=samples {
                let u = d.u_min + d.width() * i as f64 / samples as f64;
                let v = d.v_min + d.height() * j as f64 / samples as f64;
                let l = self.local(u, v, false)?;
                unit = unit.max((l.nu.value.norm() - 1.0).abs());
                let scale = 1f64.max(l.f.du.norm()).max(l.f.dv.norm());
                ortho = ortho.max(l.nu.value.dot(&l.f.du).abs() / scale).max(l.nu.value.dot(&l.f.dv).abs() / scale);
            }
        }
        Ok((unit, ortho))
    }
}

pub fn det2(a: &V2, b: &V2) -> f64 {
    a.x * b.y - a.y * b.x
}

impl FrontalMap {
    /// Maxface of `data` sampled through the integral and the Euclidean
    /// normal, in finite-difference mode. The surface is translated so that
    /// `f(anchor) = 0`; segments from the anchor keep nearby samples exact
    /// to rounding.
    pub fn from_maxface(data: &crate::weierstrass::WeierstrassData, anchor: num_complex::Complex64, tol: f64) -> FrontalMap {
        let fd = data.clone();
        let nd = data.clone();
        FrontalMap::from_samples(
            "maxface",
            Arc::new(move |u, v| {
                let q = num_complex::Complex64::new(u, v);
                Ok(V3::from(fd.primitive_segment(anchor, q, tol)?.map(|c| c.re)))
            }),
            Arc::new(move |u, v| Ok(V3::from(nd.euclidean_normal(num_complex::Complex64::new(u, v))?))),
            data.domain,
        )
    }
}
