use num_complex::Complex64;

use crate::classification::{Classification, CriterionValues, SecondOrder, Tolerances};
use crate::domain::Rect;
use crate::error::{Error, Result};
use crate::expr::{self, ComplexJet, Expr};

/// Weierstrass data `(g, ω̂ dz)` on a rectangle, integrated from `base_point`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeierstrassData {
    pub g: Expr,
    pub omega_hat: Expr,
    pub base_point: Complex64,
    pub domain: Rect,
}

/// Jets of `g` and `ω̂` at one point.
#[derive(Debug, Clone, Copy)]
pub struct LocalJets {
    pub g: ComplexJet,
    pub omega_hat: ComplexJet,
}

pub(crate) fn eval(field: &'static str, e: &Expr, z: Complex64, order: usize) -> Result<ComplexJet> {
    e.eval_jet(z, order).map_err(|source| Error::Eval { field, at: z, source })
}

impl WeierstrassData {
    pub fn new(g: Expr, omega_hat: Expr, base_point: Complex64, domain: Rect) -> WeierstrassData {
        WeierstrassData {
            g,
            omega_hat,
            base_point,
            domain,
        }
    }

    /// Parses both expressions; the base point defaults to the domain centre
    /// when `None`.
    pub fn parse(g: &str, omega_hat: &str, base_point: Option<Complex64>, domain: Rect) -> Result<WeierstrassData> {
        let g = expr::parse(g).map_err(|source| Error::Parse { field: "g", source })?;
        let omega_hat = expr::parse(omega_hat).map_err(|source| Error::Parse { field: "omega", source })?;
        let centre = Complex64::new(
            0.5 * (domain.u_min + domain.u_max),
            0.5 * (domain.v_min + domain.v_max),
        );
        Ok(WeierstrassData::new(g, omega_hat, base_point.unwrap_or(centre), domain))
    }

    /// Enneper surface `(z, 1)`.
    pub fn enneper(domain: Rect) -> WeierstrassData {
        WeierstrassData::new(Expr::var(), Expr::constant(1.0), Complex64::new(0.0, 0.0), domain)
    }

    /// Data `(e^h, 1)`.
    pub fn from_h(h: Expr, base_point: Complex64, domain: Rect) -> WeierstrassData {
        WeierstrassData::new(
            Expr::apply(expr::Func::Exp, h),
            Expr::constant(1.0),
            base_point,
            domain,
        )
    }

    /// Conjugate data `(g, i ω̂)`.
    pub fn conjugate(&self) -> WeierstrassData {
        WeierstrassData {
            omega_hat: Expr::constant(Complex64::i()).mul(self.omega_hat.clone()),
            ..self.clone()
        }
    }

    pub fn with_base_point(&self, base_point: Complex64) -> WeierstrassData {
        WeierstrassData {
            base_point,
            ..self.clone()
        }
    }

    /// Jets to `order`; rejects points where `(1+|g|^2)^2 |ω̂|^2` vanishes.
    pub fn jets(&self, z: Complex64, order: usize) -> Result<LocalJets> {
        let g = eval("g", &self.g, z, order)?;
        let omega_hat = eval("omega", &self.omega_hat, z, order)?;
        let w = (1.0 + g.value().norm_sqr()).powi(2) * omega_hat.value().norm_sqr();
        if w == 0.0 || !w.is_finite() {
            return Err(Error::DegenerateData { at: z });
        }
        Ok(LocalJets { g, omega_hat })
    }

    /// `α = g' / (g^2 ω̂)`.
    pub fn alpha(&self, z: Complex64) -> Result<Complex64> {
        let j = self.jets(z, 1)?;
        let (g, w) = (j.g.value(), j.omega_hat.value());
        Ok(j.g.derivative(1) / (g * g * w))
    }

    pub(crate) fn criterion_values(&self, z: Complex64) -> Result<CriterionValues> {
        let j = self.jets(z, 2)?;
        let g = j.g;
        let dg = g.differentiate();
        let denom = (g * g * j.omega_hat).truncate(1);
        let alpha = dg.checked_div(&denom).ok_or(Error::DegenerateData { at: z })?;
        let g_prime = dg.value();
        let second = if g_prime == Complex64::new(0.0, 0.0) {
            None
        } else {
            let q = g.value() / g_prime * alpha.derivative(1);
            Some(SecondOrder {
                swallowtail: q.re,
                cross_cap: q.im,
                magnitude: q.norm(),
            })
        };
        Ok(CriterionValues {
            alpha: alpha.value(),
            nondegeneracy: g_prime.norm(),
            second,
            g_abs_minus_one: g.value().norm() - 1.0,
            g_prime_abs: g_prime.norm(),
        })
    }

    /// Closed-form classification of a singular point.
    pub fn classify_point(&self, p: Complex64, tol: &Tolerances) -> Result<Classification> {
        let g = eval("g", &self.g, p, 0)?.value();
        let residual = g.norm() - 1.0;
        if residual.abs() >= tol.eps_curve {
            return Err(Error::NotSingular { at: p, residual });
        }
        Ok(self.criterion_values(p)?.classify(tol.eps_zero))
    }

    /// Unit normal `(1+|g|^2, 2 Re g, 2 Im g) / sqrt((1+|g|^2)^2 + 4|g|^2)`.
    pub fn euclidean_normal(&self, z: Complex64) -> Result<[f64; 3]> {
        let g = self.jets(z, 0)?.g.value();
        Ok(euclidean_normal_of(g))
    }

    /// `λ = (|g|^2 - 1) |ω̂|^2 sqrt((1+|g|^2)^2 + 4|g|^2)`.
    pub fn signed_area_density(&self, z: Complex64) -> Result<f64> {
        let j = self.jets(z, 0)?;
        let g2 = j.g.value().norm_sqr();
        Ok((g2 - 1.0) * j.omega_hat.value().norm_sqr() * ((1.0 + g2).powi(2) + 4.0 * g2).sqrt())
    }

    /// `(1 - |g|^2)^2 |ω̂|^2`, the conformal factor of the induced metric.
    pub fn metric_factor(&self, z: Complex64) -> Result<f64> {
        let j = self.jets(z, 0)?;
        Ok((1.0 - j.g.value().norm_sqr()).powi(2) * j.omega_hat.value().norm_sqr())
    }

    /// Holomorphic integrand `(-2g, 1+g^2, i(1-g^2)) ω̂`.
    pub fn integrand(&self, z: Complex64) -> Result<[Complex64; 3]> {
        let j = self.jets(z, 0)?;
        let (g, w) = (j.g.value(), j.omega_hat.value());
        let one = Complex64::new(1.0, 0.0);
        Ok([g * -2.0 * w, (one + g * g) * w, Complex64::i() * (one - g * g) * w])
    }

    /// Partial derivatives `(f_u, f_v) = (Re Φ, -Im Φ)`.
    pub fn tangent_vectors(&self, z: Complex64) -> Result<([f64; 3], [f64; 3])> {
        let phi = self.integrand(z)?;
        Ok((phi.map(|c| c.re), phi.map(|c| -c.im)))
    }

    /// Singular direction `i conj(g'/g)` and null direction `i/(g ω̂)`.
    pub fn directions(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let j = self.jets(z, 1)?;
        let g = j.g.value();
        let xi = Complex64::i() * (j.g.derivative(1) / g).conj();
        let eta = Complex64::i() / (g * j.omega_hat.value());
        Ok((xi, eta))
    }
}

pub(crate) fn euclidean_normal_of(g: Complex64) -> [f64; 3] {
    let g2 = g.norm_sqr();
    let n = ((1.0 + g2).powi(2) + 4.0 * g2).sqrt();
    [(1.0 + g2) / n, 2.0 * g.re / n, 2.0 * g.im / n]
}

/// Closed-form classification of the singular point `p` of `(e^h, 1)` from
/// `α_h = e^{-h} h'` and `β_h = e^{-2h}(h'' - h'^2)`.
pub fn classify_h(h: &Expr, p: Complex64, tol: &Tolerances) -> Result<Classification> {
    let re_h = eval("h", h, p, 0)?.value().re;
    if re_h.abs() >= tol.eps_curve {
        return Err(Error::NotSingular { at: p, residual: re_h });
    }
    Ok(h_values(h, p)?.classify(tol.eps_zero))
}

pub(crate) fn h_values(h: &Expr, p: Complex64) -> Result<CriterionValues> {
    let j = eval("h", h, p, 2)?;
    Ok(h_values_from_jet(j.value(), j.derivative(1), j.derivative(2)))
}

/// Criteria from the 2-jet `(h, h', h'')`.
pub(crate) fn h_values_from_jet(h0: Complex64, h1: Complex64, h2: Complex64) -> CriterionValues {
    let alpha = (-h0).exp() * h1;
    let beta = (-2.0 * h0).exp() * (h2 - h1 * h1);
    CriterionValues {
        alpha,
        nondegeneracy: alpha.norm(),
        second: Some(SecondOrder {
            swallowtail: beta.re,
            cross_cap: beta.re,
            magnitude: beta.norm(),
        }),
        g_abs_minus_one: h0.re.exp() - 1.0,
        g_prime_abs: h1.norm() * h0.re.exp(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classification::Tag;
    use std::f64::consts::PI;

    fn enneper() -> WeierstrassData {
        WeierstrassData::enneper(Rect::centered(2.0))
    }

    #[test]
    fn enneper_exceptional_points() {
        let tol = Tolerances::default();
        let d = enneper();
        let tag = |p: Complex64| d.classify_point(p, &tol).unwrap().tag;
        assert_eq!(tag(Complex64::new(1.0, 0.0)), Tag::Swallowtail);
        assert_eq!(tag(Complex64::from_polar(1.0, PI / 4.0)), Tag::CuspidalCrossCap);
        assert_eq!(tag(Complex64::from_polar(1.0, PI / 6.0)), Tag::CuspidalEdge);
        let conj = d.conjugate();
        assert_eq!(conj.classify_point(Complex64::new(1.0, 0.0), &tol).unwrap().tag, Tag::CuspidalCrossCap);
    }

    #[test]
    fn off_curve_point_is_rejected() {
        let err = enneper().classify_point(Complex64::new(0.5, 0.0), &Tolerances::default());
        assert!(matches!(err, Err(Error::NotSingular { .. })));
    }

    #[test]
    fn degenerate_exponential_data() {
        let h = expr::parse("z + z^2/2").unwrap();
        let d = WeierstrassData::from_h(h.clone(), Complex64::new(0.0, 0.0), Rect::centered(1.0));
        let c = d.classify_point(Complex64::new(0.0, 0.0), &Tolerances::default()).unwrap();
        assert_eq!(c.tag, Tag::DegeneratePoint);
        assert!((c.diagnostics.alpha - 1.0).norm() < 1e-15);
        assert_eq!(classify_h(&h, Complex64::new(0.0, 0.0), &Tolerances::default()).unwrap().tag, Tag::DegeneratePoint);
    }

    #[test]
    fn h_route_examples() {
        let tol = Tolerances::default();
        let tag = |src: &str| classify_h(&expr::parse(src).unwrap(), Complex64::new(0.0, 0.0), &tol).unwrap().tag;
        assert_eq!(tag("z"), Tag::Swallowtail);
        assert_eq!(tag("i*z"), Tag::CuspidalCrossCap);
        assert_eq!(tag("(1+i)*z"), Tag::CuspidalEdge);
    }

    #[test]
    fn normal_and_density_closed_forms() {
        let d = WeierstrassData::new(Expr::constant(0.0), Expr::constant(1.0), Complex64::new(0.0, 0.0), Rect::centered(1.0));
        assert_eq!(d.euclidean_normal(Complex64::new(0.3, 0.1)).unwrap(), [1.0, 0.0, 0.0]);
        let d = WeierstrassData::new(Expr::constant(1.0), Expr::constant(1.0), Complex64::new(0.0, 0.0), Rect::centered(1.0));
        let n = d.euclidean_normal(Complex64::new(0.0, 0.0)).unwrap();
        let r = 8f64.sqrt();
        assert!((n[0] - 2.0 / r).abs() < 1e-15 && (n[1] - 2.0 / r).abs() < 1e-15 && n[2] == 0.0);
        assert_eq!(enneper().signed_area_density(Complex64::new(0.0, 0.0)).unwrap(), -1.0);
        assert_eq!(enneper().signed_area_density(Complex64::new(0.0, 1.0)).unwrap(), 0.0);
    }

    #[test]
    fn vanishing_omega_is_reported() {
        let d = WeierstrassData::parse("z", "z", None, Rect::centered(1.0)).unwrap();
        assert!(matches!(d.jets(Complex64::new(0.0, 0.0), 0), Err(Error::DegenerateData { .. })));
    }
}
