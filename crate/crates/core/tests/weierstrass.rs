use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use singlab::expr::parse;
use singlab::weierstrass::{classify_h, singular_locus_h, LocusOptions, WeierstrassData};
use singlab::{Grid, Rect, Tag, Tolerances};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn enneper() -> WeierstrassData {
    WeierstrassData::enneper(Rect::centered(2.0))
}

#[test]
fn enneper_locus_is_the_unit_circle() {
    let curves = enneper().singular_locus(Grid::square(64), &Tolerances::default()).unwrap();
    assert_eq!(curves.len(), 1);
    let curve = &curves[0];
    assert!(curve.closed);
    for p in &curve.points {
        assert!((p.z.norm() - 1.0).abs() < 1e-8, "{}", p.z);
    }
    let specials: Vec<_> = curve.points.iter().filter(|p| p.classification.tag != Tag::CuspidalEdge).collect();
    for p in &specials {
        println!("{} {:?}", p.z, p.classification.tag);
    }
    assert_eq!(curve.count(Tag::Swallowtail), 4);
    assert_eq!(curve.count(Tag::CuspidalCrossCap), 4);
    assert!(curve.count(Tag::CuspidalEdge) >= 64);
    for p in &specials {
        let target = match p.classification.tag {
            Tag::Swallowtail => [c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)],
            Tag::CuspidalCrossCap => [1.0, 3.0, 5.0, 7.0].map(|k| Complex64::from_polar(1.0, k * PI / 4.0)),
            other => panic!("unexpected {other:?} at {}", p.z),
        };
        assert!(target.iter().any(|t| (t - p.z).norm() < 1e-6), "{}", p.z);
    }
}

#[test]
fn constant_and_exponential_loci() {
    let t = Tolerances::default();
    let constant = WeierstrassData::parse("2", "1", None, Rect::centered(1.0)).unwrap();
    assert!(constant.singular_locus(Grid::square(32), &t).unwrap().is_empty());
    let exp = WeierstrassData::parse("exp(z)", "1", None, Rect::centered(1.0)).unwrap();
    let curves = exp.singular_locus(Grid::square(32), &t).unwrap();
    assert_eq!(curves.len(), 1);
    assert!(!curves[0].closed);
    assert!(curves[0].points.iter().all(|p| p.z.re.abs() < 1e-10));
    assert!((curves[0].length() - 2.0).abs() < 0.06, "{}", curves[0].length());
}

#[test]
fn exceptional_point_tags() {
    let t = Tolerances::default();
    let d = enneper();
    let tag = |p: Complex64| d.classify_point(p, &t).unwrap().tag;
    assert_eq!(tag(c(1.0, 0.0)), Tag::Swallowtail);
    assert_eq!(tag(Complex64::from_polar(1.0, PI / 4.0)), Tag::CuspidalCrossCap);
    assert_eq!(tag(Complex64::from_polar(1.0, PI / 6.0)), Tag::CuspidalEdge);
    let degenerate = WeierstrassData::parse("exp(z+z^2/2)", "1", None, Rect::centered(0.5)).unwrap();
    let r = degenerate.classify_point(c(0.0, 0.0), &t).unwrap();
    assert_eq!(r.tag, Tag::DegeneratePoint);
    assert!((r.diagnostics.alpha - c(1.0, 0.0)).norm() < 1e-15);
    assert!(r.diagnostics.second_test.abs() < 1e-15);
    assert!(matches!(d.classify_point(c(0.5, 0.0), &t), Err(singlab::Error::NotSingular { .. })));
}

#[test]
fn h_route_examples() {
    let t = Tolerances::default();
    let tag = |h: &str| classify_h(&parse(h).unwrap(), c(0.0, 0.0), &t).unwrap().tag;
    assert_eq!(tag("z"), Tag::Swallowtail);
    assert_eq!(tag("i*z"), Tag::CuspidalCrossCap);
    assert_eq!(tag("(1+i)*z"), Tag::CuspidalEdge);
    assert_eq!(tag("z+z^2/2"), Tag::DegeneratePoint);
}

#[test]
fn h_route_agrees_with_weierstrass_route_along_loci() {
    let t = Tolerances::default();
    let domain = Rect::centered(0.5);
    for src in ["z", "i*z", "(1+i)*z", "z+z^2/2"] {
        let h = parse(src).unwrap();
        let data = WeierstrassData::from_h(h.clone(), c(0.0, 0.0), domain);
        assert_eq!(
            data.classify_point(c(0.0, 0.0), &t).unwrap().tag,
            classify_h(&h, c(0.0, 0.0), &t).unwrap().tag,
            "{src}"
        );
        let curves = data.singular_locus(Grid::square(32), &t).unwrap();
        assert!(!curves.is_empty());
        for p in curves.iter().flat_map(|c| &c.points) {
            let a = data.classify_point(p.z, &t).unwrap();
            let b = classify_h(&h, p.z, &t).unwrap();
            assert_eq!(a.tag, b.tag, "{src} at {}", p.z);
            assert_eq!(p.classification.tag, a.tag);
        }
        let via_h = singular_locus_h(&h, &domain, &LocusOptions::new(Grid::square(32)), &t).unwrap();
        let count = |cs: &[singlab::weierstrass::SingularCurve], tag| cs.iter().map(|c| c.count(tag)).sum::<usize>();
        for tag in [Tag::Swallowtail, Tag::CuspidalCrossCap, Tag::DegeneratePoint] {
            assert_eq!(count(&via_h, tag), count(&curves, tag), "{src} {tag}");
        }
    }
}

#[test]
fn enneper_surface_points() {
    let t = Tolerances::default();
    let d = enneper();
    let p = d.surface_point(c(1.0, 0.0), &t).unwrap();
    let want = [-1.0, 4.0 / 3.0, 0.0];
    for k in 0..3 {
        assert!((p[k] - want[k]).abs() < 1e-10, "{p:?}");
    }
    assert_eq!(d.surface_point(d.base_point, &t).unwrap(), [0.0; 3]);
    assert!(d.surface_point(c(3.0, 0.0), &t).is_err());
    // closed-form antiderivative (-z², z + z³/3, i(z - z³/3))
    let exact = |z: Complex64| {
        let z3 = z * z * z;
        [(-z * z).re, (z + z3 / 3.0).re, (Complex64::i() * (z - z3 / 3.0)).re]
    };
    let targets: Vec<Complex64> = (0..12).map(|k| Complex64::from_polar(0.3 + 0.1 * k as f64, k as f64)).collect();
    for (z, p) in targets.iter().zip(d.integrate_surface(&targets, &t).unwrap()) {
        let e = exact(*z);
        for k in 0..3 {
            assert!((p[k] - e[k]).abs() < 1e-10);
        }
    }
}

#[test]
fn integration_is_path_independent() {
    let t = Tolerances::default();
    let d = WeierstrassData::parse("exp(z)*z", "1+z^2/4", None, Rect::centered(2.0)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut pt = || c(rng.random_range(-1.9..1.9), rng.random_range(-1.9..1.9));
    let i_target = c(0.0, 1.0);
    let a = d.integrate_path(&[c(1.0, 0.0), c(1.0, 1.0), i_target], &t).unwrap();
    let b = d.integrate_path(&[c(-1.0, -0.5), c(-0.5, 1.5), i_target], &t).unwrap();
    for k in 0..3 {
        assert!((a[k] - b[k]).abs() < 2.0 * t.eps_int, "{a:?} {b:?}");
    }
    for _ in 0..10 {
        let target = pt();
        let path = [pt(), pt(), target];
        let direct = d.surface_point(target, &t).unwrap();
        let bent = d.integrate_path(&path, &t).unwrap();
        for k in 0..3 {
            assert!((direct[k] - bent[k]).abs() < 2.0 * t.eps_int, "{direct:?} {bent:?}");
        }
    }
}

fn fd_tangents(d: &WeierstrassData, z: Complex64, t: &Tolerances) -> ([f64; 3], [f64; 3]) {
    let h = 1e-5;
    let f = |w: Complex64| d.surface_point(w, t).unwrap();
    let diff = |e: Complex64| {
        let (a, b) = (f(z + e * h), f(z - e * h));
        [0, 1, 2].map(|k| (a[k] - b[k]) / (2.0 * h))
    };
    (diff(c(1.0, 0.0)), diff(c(0.0, 1.0)))
}

fn det(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0])
}

#[test]
fn normal_and_area_density_against_differences() {
    let t = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for d in [enneper(), WeierstrassData::parse("z^2/2+0.3", "1+z", None, Rect::centered(2.0)).unwrap()] {
        for _ in 0..20 {
            let z = c(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
            let (fu, fv) = fd_tangents(&d, z, &t);
            let nu = d.euclidean_normal(z).unwrap();
            let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
            assert!((dot(nu, nu) - 1.0).abs() < 1e-12);
            assert!(dot(nu, fu).abs() < 1e-8 && dot(nu, fv).abs() < 1e-8, "{z}");
            let lam = d.signed_area_density(z).unwrap();
            assert!((lam - det(fu, fv, nu)).abs() < 1e-6, "{z}: {lam} {}", det(fu, fv, nu));
        }
    }
}

#[test]
fn normal_and_area_density_examples() {
    let zero = WeierstrassData::parse("0", "1", None, Rect::centered(1.0)).unwrap();
    assert_eq!(zero.euclidean_normal(c(0.3, 0.2)).unwrap(), [1.0, 0.0, 0.0]);
    let one = WeierstrassData::parse("1", "1", None, Rect::centered(1.0)).unwrap();
    let n = one.euclidean_normal(c(0.0, 0.0)).unwrap();
    let s8 = 8f64.sqrt();
    assert!((n[0] - 2.0 / s8).abs() < 1e-15 && (n[1] - 2.0 / s8).abs() < 1e-15 && n[2] == 0.0);
    assert_eq!(one.signed_area_density(c(0.0, 0.0)).unwrap(), 0.0);
    assert!((enneper().signed_area_density(c(0.0, 0.0)).unwrap() + 1.0).abs() < 1e-15);
    assert!(enneper().signed_area_density(c(0.5, 0.1)).unwrap() < 0.0);
}

#[test]
fn meshes() {
    let t = Tolerances::default();
    let small = enneper().mesh(Grid::square(2), &t).unwrap();
    assert_eq!((small.vertices.len(), small.triangles.len()), (9, 8));
    // 60 cells on [-1.5, 1.5] put z = 1 on node (50, 30)
    let d = WeierstrassData::enneper(Rect::centered(1.5));
    let grid = Grid::square(60);
    let m = d.mesh(grid, &t).unwrap();
    assert_eq!(m.triangles.len(), 2 * 60 * 60);
    let v = m.vertices[30 * 61 + 50];
    assert!((v[0] + 1.0).abs() < 1e-10 && (v[1] - 4.0 / 3.0).abs() < 1e-10 && v[2].abs() < 1e-10, "{v:?}");
    // g = 0 lies in the plane x⁰ = 0
    let flat = WeierstrassData::parse("0", "1", None, Rect::centered(1.0)).unwrap().mesh(Grid::square(8), &t).unwrap();
    assert!(flat.vertices.iter().all(|v| v[0].abs() < 1e-9));
}

#[test]
fn duality_swaps_swallowtails_and_cross_caps() {
    let t = Tolerances::default();
    let d = enneper();
    let dual = d.conjugate();
    assert_eq!(dual.classify_point(c(1.0, 0.0), &t).unwrap().tag, Tag::CuspidalCrossCap);
    let exceptional = (0..8).map(|k| Complex64::from_polar(1.0, k as f64 * PI / 4.0));
    let generic = (0..32).map(|k| Complex64::from_polar(1.0, (k as f64 + 0.5) * PI / 16.0 + 0.01));
    for p in exceptional.chain(generic) {
        let a = d.classify_point(p, &t).unwrap().tag;
        let b = dual.classify_point(p, &t).unwrap().tag;
        assert_eq!(b, a.dual(), "{p}");
    }
    let back = dual.conjugate();
    assert_eq!(back.omega_hat.eval(c(0.3, 0.1)).unwrap(), c(-1.0, 0.0));
    assert_eq!(back.g, d.g);
}

#[test]
fn metric_degenerates_exactly_on_the_locus() {
    let t = Tolerances::default();
    let d = enneper();
    let curves = d.singular_locus(Grid::square(32), &t).unwrap();
    for p in curves.iter().flat_map(|c| &c.points) {
        let on = d.metric_factor(p.z).unwrap();
        let off = d.metric_factor(p.z * 1.05).unwrap();
        assert!(on < 1e-14 * off, "{}: {on:e} {off:e}", p.z);
    }
}

#[test]
fn degenerate_data_is_reported() {
    let d = WeierstrassData::parse("z", "z", None, Rect::centered(1.0)).unwrap();
    assert!(matches!(d.alpha(c(0.0, 0.0)), Err(singlab::Error::DegenerateData { .. })));
}

proptest! {
    #[test]
    fn normal_is_unit(re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let n = enneper().euclidean_normal(c(re, im)).unwrap();
        prop_assert!(((n[0] * n[0] + n[1] * n[1] + n[2] * n[2]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn area_density_sign_follows_modulus(re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let z = c(re, im);
        prop_assume!((z.norm() - 1.0).abs() > 1e-6);
        let lam = enneper().signed_area_density(z).unwrap();
        prop_assert_eq!(lam < 0.0, z.norm() < 1.0);
    }

    #[test]
    fn duality_on_random_circle_points(theta in 0.0f64..6.283185307179586) {
        let t = Tolerances::default();
        let p = Complex64::from_polar(1.0, theta);
        let a = enneper().classify_point(p, &t).unwrap().tag;
        let b = enneper().conjugate().classify_point(p, &t).unwrap().tag;
        prop_assert_eq!(b, a.dual());
    }

    #[test]
    fn path_independence_random(ax in -1.9f64..1.9, ay in -1.9f64..1.9, bx in -1.9f64..1.9, by in -1.9f64..1.9) {
        let t = Tolerances::default();
        let d = enneper();
        let target = c(bx, by);
        let direct = d.surface_point(target, &t).unwrap();
        let bent = d.integrate_path(&[c(ax, ay), target], &t).unwrap();
        for k in 0..3 {
            prop_assert!((direct[k] - bent[k]).abs() < 2.0 * t.eps_int);
        }
    }
}
