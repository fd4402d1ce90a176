use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use singlab::cmc1::*;
use singlab::expr::Expr;
use singlab::numerics::ode::CMat2;
use singlab::weierstrass::WeierstrassData;
use singlab::{Grid, Rect, Tag, Tolerances};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn enneper() -> WeierstrassData {
    WeierstrassData::enneper(Rect::centered(2.0))
}

fn random_sl2(rng: &mut ChaCha8Rng) -> SL2Frame {
    let mut e = || c(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
    let m = CMat2::new(e(), e(), e(), e());
    SL2Frame::new(m / m.determinant().sqrt())
}

#[test]
fn constant_coefficient_lift_is_unipotent() {
    let d = WeierstrassData::new(Expr::constant(0.0), Expr::constant(1.0), c(0.0, 0.0), Rect::centered(1.0));
    let z = c(0.7, -0.4);
    let f = integrate_lift(&d, z, &Tolerances::default()).unwrap();
    let exact = CMat2::new(c(1.0, 0.0), c(0.0, 0.0), z, c(1.0, 0.0));
    assert!((f.matrix - exact).norm() < 1e-12);
}

#[test]
fn enneper_lift_conserves_determinant() {
    let f = integrate_lift(&enneper(), c(0.5, 0.0), &Tolerances::default()).unwrap();
    assert!(f.det_drift < 1e-9);
}

#[test]
fn determinant_conserved_over_random_targets() {
    let d = enneper();
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let z = c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let f = integrate_lift(&d, z, &tol).unwrap();
        assert!(f.det_drift < 1e-9, "{z}: {}", f.det_drift);
    }
}

#[test]
fn projection_lands_in_de_sitter_space() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let x = project(&random_sl2(&mut rng));
        assert!((x.det() + 1.0).abs() < 1e-9);
        assert!(x.hermitian_defect() < 1e-12);
        let inner = minkowski_inner(&x, &x);
        assert!((inner + x.det()).abs() < 1e-12 * (1.0 + inner.abs()));
    }
}

#[test]
fn normal_is_null_on_the_singular_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let f = random_sl2(&mut rng);
        let g = Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI));
        let nu = lorentz_normal(&f, g);
        assert!(minkowski_inner(&nu, &nu).abs() < 1e-9);
        // tangent to de Sitter space
        assert!(minkowski_inner(&nu, &project(&f)).abs() < 1e-9);
    }
}

#[test]
fn inner_product_is_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..20 {
        let mut x = || HermitianPoint::from_coords([0; 4].map(|_| rng.random_range(-2.0..2.0)));
        let (a, b) = (x(), x());
        assert!((minkowski_inner(&a, &b) - minkowski_inner(&b, &a)).abs() < 1e-12);
    }
}

#[test]
fn area_density_examples() {
    let d = enneper();
    assert_eq!(area_density_cmc1(&d, c(0.0, 1.0)).unwrap(), 0.0);
    let flat = WeierstrassData::new(Expr::constant(0.0), Expr::constant(1.0), c(0.0, 0.0), Rect::centered(1.0));
    assert_eq!(area_density_cmc1(&flat, c(0.2, 0.3)).unwrap(), 1.0);
    // one continuation step to each side of the traced circle
    let curves = d.singular_locus(Grid::square(32), &Tolerances::default()).unwrap();
    for p in curves[0].points.iter().step_by(7) {
        let n = p.z / p.z.norm();
        let inside = area_density_cmc1(&d, p.z - n * 0.05).unwrap();
        let outside = area_density_cmc1(&d, p.z + n * 0.05).unwrap();
        assert!(inside > 0.0 && outside < 0.0);
    }
}

#[test]
fn cmc1_classification_examples() {
    let d = enneper();
    let tol = Tolerances::default();
    let tag = |d: &WeierstrassData, p| classify_point_cmc1(d, p, &tol).unwrap().tag;
    assert_eq!(tag(&d, c(1.0, 0.0)), Tag::Swallowtail);
    assert_eq!(tag(&d, Complex64::from_polar(1.0, PI / 4.0)), Tag::CuspidalCrossCap);
    assert_eq!(tag(&d.conjugate(), c(1.0, 0.0)), Tag::CuspidalCrossCap);
    let drift = classify_point_cmc1(&d, c(1.0, 0.0), &tol).unwrap().diagnostics.det_drift;
    assert!(drift.unwrap() < 1e-9);
}

#[test]
fn cmc1_and_maxface_classifiers_agree_on_the_circle() {
    let d = enneper();
    let tol = Tolerances::default();
    for k in 0..40 {
        let p = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 40.0 + 0.01);
        assert_eq!(classify_point_cmc1(&d, p, &tol).unwrap().tag, d.classify_point(p, &tol).unwrap().tag);
    }
}

#[test]
fn psi_tilde_closed_form_examples() {
    let d = enneper();
    let tol = Tolerances::default();
    let p = Complex64::from_polar(1.0, PI / 4.0);
    let zeta = default_zeta(&d, p).unwrap();
    assert!((zeta.conj() * p).im + 1.0 < 1e-15);
    assert!(psi_tilde(&d, p, zeta, &tol).unwrap().closed_form.abs() < 1e-15);
    let one = c(1.0, 0.0);
    let r = psi_tilde(&d, one, default_zeta(&d, one).unwrap(), &tol).unwrap();
    assert_eq!(r.closed_form, -2.0);
    let scaled = psi_tilde(&d, one, default_zeta(&d, one).unwrap() * 3.0, &tol).unwrap();
    assert!((scaled.closed_form - 3.0 * r.closed_form).abs() < 1e-14);
    assert!((scaled.numeric - 3.0 * r.numeric).abs() < 1e-8);
}

#[test]
fn psi_tilde_rejects_tangential_sections() {
    let d = enneper();
    let p = c(1.0, 0.0);
    assert!(psi_tilde(&d, p, p, &Tolerances::default()).is_err());
    assert!(psi_tilde(&d, c(0.5, 0.0), c(0.0, 1.0), &Tolerances::default()).is_err());
}

/// Independent evaluation: with `F(p) = I`, `e₂ (β²)ᵀ e₂ = 2[[1, -g], [-ḡ, 1]]`
/// at `|g| = 1`, and the two halves of the trace add to
/// `⟨ν, D_η X⟩ = 4 Re(g'/(g²ω̂)) Im(ζ̄ g)`.
#[test]
fn psi_tilde_numeric_matches_direct_derivation() {
    let d = enneper();
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let p = Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI));
        let zeta = default_zeta(&d, p).unwrap() * Complex64::from_polar(rng.random_range(0.5..2.0), rng.random_range(0.3..2.8));
        let r = psi_tilde(&d, p, zeta, &tol).unwrap();
        let alpha = d.alpha(p).unwrap();
        let derived = 4.0 * alpha.re * (zeta.conj() * p).im;
        assert!((r.numeric - derived).abs() <= 1e-5 * derived.abs(), "{p}: {} vs {derived}", r.numeric);
    }
}

#[test]
fn zero_of_psi_tilde_is_independent_of_the_section() {
    let d = enneper();
    let tol = Tolerances::default();
    let p = Complex64::from_polar(1.0, PI / 4.0);
    let g = p;
    let zetas = [Complex64::i() * g, c(0.3, 2.0) * g];
    let mut results = Vec::new();
    for zeta in zetas {
        assert!((zeta.conj() * g).im < 0.0);
        // sample along the circle, parametrized by t with γ'(t) = i conj(g'/g)
        let ts: Vec<f64> = (-3..=3).map(|k| k as f64 * 1e-3).collect();
        let values: Vec<f64> = ts
            .iter()
            .map(|&t| {
                let q = p * Complex64::from_polar(1.0, -t);
                psi_tilde(&d, q, zeta, &tol).unwrap().numeric
            })
            .collect();
        let slope = (values[6] - values[0]) / (ts[6] - ts[0]);
        let zero = ts[3] - values[3] / slope;
        results.push((zero, slope.signum()));
    }
    assert!((results[0].0 - results[1].0).abs() < 1e-6);
    assert!(results[0].0.abs() < 1e-6);
    assert_eq!(results[0].1, results[1].1);
}

#[test]
fn tags_do_not_depend_on_the_base_point() {
    let tol = Tolerances::default();
    let d = enneper();
    let moved = d.with_base_point(c(-1.3, 0.8));
    for k in 0..16 {
        let p = Complex64::from_polar(1.0, PI * k as f64 / 8.0);
        let a = classify_point_cmc1(&d, p, &tol).unwrap();
        let b = classify_point_cmc1(&moved, p, &tol).unwrap();
        assert_eq!(a.tag, b.tag);
        assert_eq!(a.diagnostics.alpha, b.diagnostics.alpha);
    }
}

#[test]
fn mesh_sidecar_matches_vertices() {
    let m = mesh_cmc1(&enneper(), Grid::square(4), &Tolerances::default()).unwrap();
    assert_eq!(m.mesh.vertices.len(), 25);
    assert_eq!(m.x0.len(), 25);
    for (v, x0) in m.mesh.vertices.iter().zip(&m.x0) {
        let det = x0 * x0 - v[0] * v[0] - v[1] * v[1] - v[2] * v[2];
        assert!((det + 1.0).abs() < 1e-8);
    }
}
