use nalgebra::{Matrix2, SymmetricEigen};

use super::map::{det3, DerivativeMode, FrontalMap, LocalData, V2, V3};
use super::trace::FrontalCurve;
use crate::error::{Error, Result};

/// Kernel direction of `[f_u f_v]` as the smallest eigenvector of `JᵀJ`.
///
/// Fails unless the Jacobian has exactly one small singular value.
pub fn null_direction(l: &LocalData, u: f64, v: f64) -> Result<V2> {
    let (fu, fv) = (&l.f.du, &l.f.dv);
    let jtj = Matrix2::new(fu.dot(fu), fu.dot(fv), fu.dot(fv), fv.dot(fv));
    let eig = SymmetricEigen::new(jtj);
    let (small, large) = if eig.eigenvalues[0] <= eig.eigenvalues[1] { (0, 1) } else { (1, 0) };
    let (s_min, s_max) = (eig.eigenvalues[small].max(0.0), eig.eigenvalues[large]);
    if s_max < 1e-20 || s_min > 1e-6 * s_max {
        return Err(Error::KernelDimension { u, v });
    }
    let e = eig.eigenvectors.column(small);
    Ok(V2::new(e[0], e[1]).normalize())
}

/// Width of the zero band used by the frontal decisions.
pub(crate) fn band(map: &FrontalMap, eps_zero: f64) -> f64 {
    match map.mode() {
        DerivativeMode::Exact => eps_zero,
        DerivativeMode::FiniteDifference => eps_zero.max(1e-6),
    }
}

/// `|df(η)|` relative to the local scale of `df`.
pub(crate) fn null_residual(l: &LocalData, eta: &V2) -> f64 {
    let scale = 1f64.max(l.f.du.norm()).max(l.f.dv.norm());
    l.df(eta).norm() / (scale * eta.norm().max(f64::MIN_POSITIVE))
}

/// Flat directional derivative of the field `x` along the null vector `η`
/// at `p`. The result is independent of the connection because `η` is null.
pub fn covariant_derivative<X>(map: &FrontalMap, x: X, p: V2, eta: V2) -> Result<V3>
where
    X: Fn(f64, f64) -> Result<V3>,
{
    let l = map.local(p.x, p.y, false)?;
    let residual = null_residual(&l, &eta);
    if residual > 1e-7 {
        return Err(Error::NotNull { residual });
    }
    let h = 1e-5 * 1f64.max(p.norm()) / eta.norm().max(1e-300);
    let d = |h: f64| -> Result<V3> {
        let a = p + eta * h;
        let b = p - eta * h;
        Ok((x(a.x, a.y)? - x(b.x, b.y)?) / (2.0 * h))
    };
    Ok((d(0.5 * h)? * 4.0 - d(h)?) / 3.0)
}

/// `ψ = det(df(γ′), D_η ν, ν)` from local data.
pub(crate) fn psi_at(l: &LocalData, tangent: &V2, eta: &V2) -> f64 {
    det3(&l.df(tangent), &l.dnu(eta), &l.nu.value)
}

/// `ψ` at every node of a traced curve, with `γ′` the unit arclength tangent.
pub fn psi_along_curve(map: &FrontalMap, curve: &FrontalCurve) -> Result<Vec<f64>> {
    curve
        .nodes
        .iter()
        .map(|n| {
            let l = map.local(n.p[0], n.p[1], false)?;
            Ok(psi_at(&l, &V2::from(n.tangent), &V2::from(n.eta)))
        })
        .collect()
}
