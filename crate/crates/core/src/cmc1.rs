//! CMC-1 faces in de Sitter space from the holomorphic null lift
//! `F^{-1} dF = [[g, -g^2], [1, -g]] ω̂ dz`.
//!
//! Points of Minkowski 4-space are Hermitian 2x2 matrices
//! `X = x⁰e₀ + x¹e₁ + x²e₂ + x³e₃` with `⟨X, X⟩ = -det X`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::classification::{Classification, Tolerances};
use crate::domain::Grid;
use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::numerics::ode::{self, CMat2, OdeError, OdeOptions};
use crate::weierstrass::{SingularCurve, WeierstrassData};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Basis `e₀..e₃` of Herm(2).
pub fn basis() -> [CMat2; 4] {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    [
        CMat2::new(one, z, z, one),
        CMat2::new(z, one, one, z),
        CMat2::new(z, c(0.0, 1.0), c(0.0, -1.0), z),
        CMat2::new(one, z, z, -one),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SL2Frame {
    pub matrix: CMat2,
    /// `|det F - 1|` after integration.
    pub det_drift: f64,
}

impl SL2Frame {
    pub fn new(matrix: CMat2) -> SL2Frame {
        SL2Frame {
            matrix,
            det_drift: (matrix.determinant() - 1.0).norm(),
        }
    }

    pub fn identity() -> SL2Frame {
        SL2Frame::new(CMat2::identity())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianPoint {
    pub matrix: CMat2,
}

impl HermitianPoint {
    pub fn from_coords(x: [f64; 4]) -> HermitianPoint {
        let e = basis();
        let mut m = CMat2::zeros();
        for k in 0..4 {
            m += e[k] * c(x[k], 0.0);
        }
        HermitianPoint { matrix: m }
    }

    /// `(x⁰, x¹, x², x³)`.
    pub fn coords(&self) -> [f64; 4] {
        let m = &self.matrix;
        [
            0.5 * (m[(0, 0)] + m[(1, 1)]).re,
            m[(0, 1)].re,
            m[(0, 1)].im,
            0.5 * (m[(0, 0)] - m[(1, 1)]).re,
        ]
    }

    pub fn det(&self) -> f64 {
        self.matrix.determinant().re
    }

    /// Largest entry of `X - X*`.
    pub fn hermitian_defect(&self) -> f64 {
        (self.matrix - self.matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// `⟨X, Y⟩ = -½ tr(X e₂ Yᵀ e₂)`.
pub fn minkowski_inner(x: &HermitianPoint, y: &HermitianPoint) -> f64 {
    let e2 = basis()[2];
    -0.5 * (x.matrix * e2 * y.matrix.transpose() * e2).trace().re
}

fn coefficient(data: &WeierstrassData, z: Complex64) -> Result<CMat2> {
    let j = data.jets(z, 0)?;
    let (g, w) = (j.g.value(), j.omega_hat.value());
    Ok(CMat2::new(g * w, -g * g * w, w, -g * w))
}

/// Solves the lift ODE along the segment `a -> b` starting from `start`.
pub fn lift_segment(data: &WeierstrassData, a: Complex64, b: Complex64, start: CMat2, tol: &Tolerances) -> Result<SL2Frame> {
    let dz = b - a;
    let mut failure = None;
    let opts = OdeOptions {
        tol: tol.eps_ode,
        ..OdeOptions::default()
    };
    let out = ode::integrate(
        |s, y| match coefficient(data, a + dz * s) {
            Ok(m) => Ok(y * m * dz),
            Err(e) => {
                let message = e.to_string();
                failure.get_or_insert(e);
                Err(OdeError::Rhs { s, message })
            }
        },
        0.0,
        1.0,
        start,
        opts,
    );
    match (out, failure) {
        (Ok(sol), _) => Ok(SL2Frame::new(sol.y)),
        (Err(_), Some(e)) => Err(e),
        (Err(OdeError::StepUnderflow { s }), None) => Err(Error::Invalid(format!(
            "lift integration step underflow at z = {}",
            a + dz * s
        ))),
        (Err(e), None) => Err(e.into()),
    }
}

/// Null lift at `target` with `F(z₀) = I`, integrated along a straight segment.
pub fn integrate_lift(data: &WeierstrassData, target: Complex64, tol: &Tolerances) -> Result<SL2Frame> {
    if !data.domain.contains(target) {
        return Err(Error::Invalid(format!("target {target} lies outside the domain")));
    }
    lift_segment(data, data.base_point, target, CMat2::identity(), tol)
}

/// `f = F e₃ F*`.
pub fn project(frame: &SL2Frame) -> HermitianPoint {
    let f = frame.matrix;
    HermitianPoint {
        matrix: f * basis()[3] * f.adjoint(),
    }
}

fn beta_squared(g: Complex64) -> CMat2 {
    let d = c(1.0 + g.norm_sqr(), 0.0);
    CMat2::new(d, g * 2.0, g.conj() * 2.0, d)
}

/// `ν = F β² F*` with `β = [[1, g], [ḡ, 1]]`.
pub fn lorentz_normal(frame: &SL2Frame, g: Complex64) -> HermitianPoint {
    let f = frame.matrix;
    HermitianPoint {
        matrix: f * beta_squared(g) * f.adjoint(),
    }
}

/// `(1 - |g|^2)(1 + |g|^2)|ω̂|^2`.
pub fn area_density_cmc1(data: &WeierstrassData, z: Complex64) -> Result<f64> {
    let j = data.jets(z, 0)?;
    let g2 = j.g.value().norm_sqr();
    Ok((1.0 - g2) * (1.0 + g2) * j.omega_hat.value().norm_sqr())
}

/// Same criteria as for maxfaces; records the det drift of the lift at `p`.
pub fn classify_point_cmc1(data: &WeierstrassData, p: Complex64, tol: &Tolerances) -> Result<Classification> {
    let mut c = data.classify_point(p, tol)?;
    c.diagnostics.det_drift = Some(integrate_lift(data, p, tol)?.det_drift);
    Ok(c)
}

/// Singular locus with every point re-classified through the lift.
pub fn singular_locus_cmc1(data: &WeierstrassData, grid: Grid, tol: &Tolerances) -> Result<Vec<SingularCurve>> {
    let mut curves = data.singular_locus(grid, tol)?;
    for curve in &mut curves {
        let drifts: Vec<f64> = curve
            .points
            .par_iter()
            .map(|p| Ok(integrate_lift(data, p.z, tol)?.det_drift))
            .collect::<Result<_>>()?;
        for (p, d) in curve.points.iter_mut().zip(drifts) {
            p.classification.diagnostics.det_drift = Some(d);
        }
    }
    Ok(curves)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiTilde {
    /// `2 Re(g'/(g²ω̂)) Im(ζ̄ g)`.
    pub closed_form: f64,
    /// `⟨ν, D_η X⟩` from central differences of `X = F T F*`.
    pub numeric: f64,
}

fn section(g: Complex64, zeta: Complex64) -> CMat2 {
    let d = zeta.conj() * g + zeta * g.conj();
    let s = 1.0 + g.norm_sqr();
    CMat2::new(d, zeta * s, zeta.conj() * s, d)
}

/// Default transversal choice `ζ = i g(p)`.
pub fn default_zeta(data: &WeierstrassData, p: Complex64) -> Result<Complex64> {
    Ok(Complex64::i() * data.jets(p, 0)?.g.value())
}

/// Both evaluations of `ψ̃` at the singular point `p` for the constant
/// section parameter `ζ`.
pub fn psi_tilde(data: &WeierstrassData, p: Complex64, zeta: Complex64, tol: &Tolerances) -> Result<PsiTilde> {
    let j = data.jets(p, 1)?;
    let (g, w) = (j.g.value(), j.omega_hat.value());
    let residual = g.norm() - 1.0;
    if residual.abs() >= tol.eps_curve {
        return Err(Error::NotSingular { at: p, residual });
    }
    let transversal = (zeta.conj() * g).im;
    if transversal.abs() <= tol.eps_zero {
        return Err(Error::NotTransversal { at: p, value: transversal });
    }
    let alpha = j.g.derivative(1) / (g * g * w);
    let closed_form = 2.0 * alpha.re * transversal;

    let frame = integrate_lift(data, p, tol)?;
    let eta = Complex64::i() / (g * w);
    let x_at = |h: f64| -> Result<CMat2> {
        let q = p + eta * h;
        let step = lift_segment(data, p, q, CMat2::identity(), tol)?;
        let gq = data.jets(q, 0)?.g.value();
        let f = frame.matrix * step.matrix;
        Ok(f * section(gq, zeta) * f.adjoint())
    };
    let central = |h: f64| -> Result<CMat2> { Ok((x_at(h)? - x_at(-h)?) / c(2.0 * h, 0.0)) };
    let h = 1e-3;
    let d = (central(h * 0.5)? * c(4.0, 0.0) - central(h)?) / c(3.0, 0.0);
    let nu = lorentz_normal(&frame, g);
    let numeric = minkowski_inner(&nu, &HermitianPoint { matrix: d });
    Ok(PsiTilde { closed_form, numeric })
}

/// CMC-1 face sampled on the grid: OBJ mesh of `(x¹, x², x³)` plus `x⁰`
/// per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Cmc1Mesh {
    pub mesh: Mesh,
    pub x0: Vec<f64>,
    pub max_det_drift: f64,
}

pub fn mesh_cmc1(data: &WeierstrassData, grid: Grid, tol: &Tolerances) -> Result<Cmc1Mesh> {
    let mut nodes = Vec::with_capacity(grid.node_count());
    for j in 0..=grid.nv {
        for i in 0..=grid.nu {
            nodes.push(data.domain.node(grid, i, j));
        }
    }
    let frames: Vec<SL2Frame> = nodes.par_iter().map(|&z| integrate_lift(data, z, tol)).collect::<Result<_>>()?;
    let coords: Vec<[f64; 4]> = frames.iter().map(|f| project(f).coords()).collect();
    Ok(Cmc1Mesh {
        mesh: Mesh::grid(coords.iter().map(|x| [x[1], x[2], x[3]]).collect(), grid),
        x0: coords.iter().map(|x| x[0]).collect(),
        max_det_drift: frames.iter().map(|f| f.det_drift).fold(0.0, f64::max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Rect;

    #[test]
    fn inner_product_on_basis() {
        let e = basis().map(|m| HermitianPoint { matrix: m });
        assert_eq!(minkowski_inner(&e[0], &e[0]), -1.0);
        assert_eq!(minkowski_inner(&e[3], &e[3]), 1.0);
        for i in 0..4 {
            for j in 0..4 {
                let expected = match (i, j) {
                    (0, 0) => -1.0,
                    _ if i == j => 1.0,
                    _ => 0.0,
                };
                assert_eq!(minkowski_inner(&e[i], &e[j]), expected, "({i},{j})");
            }
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let x = [0.3, -1.2, 2.5, 0.7];
        let p = HermitianPoint::from_coords(x);
        for (a, b) in p.coords().iter().zip(x) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!((p.det() - (0.09 - 1.44 - 6.25 - 0.49)).abs() < 1e-14);
    }

    #[test]
    fn projection_by_hand() {
        assert_eq!(project(&SL2Frame::identity()).coords(), [0.0, 0.0, 0.0, 1.0]);
        let f = SL2Frame::new(CMat2::new(c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)));
        let x = project(&f);
        assert_eq!(x.matrix, CMat2::new(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)));
        assert_eq!(x.coords(), [0.5, 1.0, 0.0, 0.5]);
        assert_eq!(x.det(), -1.0);
    }

    #[test]
    fn normal_by_substitution() {
        let id = SL2Frame::identity();
        assert_eq!(lorentz_normal(&id, c(0.0, 0.0)).coords(), [1.0, 0.0, 0.0, 0.0]);
        let nu = lorentz_normal(&id, c(1.0, 0.0));
        assert_eq!(nu.matrix, CMat2::new(c(2.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(2.0, 0.0)));
        assert_eq!(nu.det(), 0.0);
    }

    #[test]
    fn lift_at_base_point_is_identity() {
        let d = WeierstrassData::enneper(Rect::centered(1.0));
        let f = integrate_lift(&d, c(0.0, 0.0), &Tolerances::default()).unwrap();
        assert_eq!(f.matrix, CMat2::identity());
        assert_eq!(f.det_drift, 0.0);
    }
}
