//! The jet-space sets of degenerate singular points for data `(e^h, 1)`,
//! their codimension Jacobians, and a randomized perturbation probe.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::classification::{Classification, Tag, Tolerances};
use crate::domain::{Grid, Rect};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::weierstrass::{h_values_from_jet, singular_locus_h, LocusOptions};

/// A point `(p, ĥ, ĥ₁, ĥ₂)` of the 2-jet space of holomorphic functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2Point {
    pub p: Complex64,
    pub h: Complex64,
    pub h1: Complex64,
    pub h2: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub in_a: bool,
    pub in_b: bool,
    pub in_c: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JacobianCheck {
    pub closed_form_b: f64,
    pub numeric_b: f64,
    pub closed_form_c: f64,
    pub numeric_c: f64,
}

impl Jet2Point {
    pub fn new(p: Complex64, h: Complex64, h1: Complex64, h2: Complex64) -> Jet2Point {
        Jet2Point { p, h, h1, h2 }
    }

    /// `(h(p), h′(p), h″(p))`.
    pub fn of(h: &Expr, p: Complex64) -> Result<Jet2Point> {
        let j = h.eval_jet(p, 2).map_err(|source| Error::Eval { field: "h", at: p, source })?;
        Ok(Jet2Point { p, h: j.value(), h1: j.derivative(1), h2: j.derivative(2) })
    }

    /// `α̂ = e^{-ĥ} ĥ₁`.
    pub fn alpha(&self) -> Complex64 {
        (-self.h).exp() * self.h1
    }

    /// `β̂ = e^{-2ĥ}(ĥ₂ - ĥ₁²)`.
    pub fn beta(&self) -> Complex64 {
        (-2.0 * self.h).exp() * (self.h2 - self.h1 * self.h1)
    }

    /// Band tests of the defining equations of `A`, `B`, `C`.
    pub fn membership(&self, eps_zero: f64) -> Membership {
        let (a, b) = (self.alpha(), self.beta());
        let band = eps_zero * 1f64.max(a.norm()).max(b.norm());
        let on_curve = self.h.re.abs() <= eps_zero;
        Membership {
            in_a: on_curve && a.norm() <= eps_zero,
            in_b: on_curve && a.im.abs() <= band && b.re.abs() <= band,
            in_c: on_curve && a.re.abs() <= band && b.re.abs() <= band,
        }
    }

    /// Closed-form Jacobians of the defining maps of `B` and `C` with respect
    /// to `(û, û₁, v̂₁)`, next to central-difference determinants.
    pub fn jacobian_check(&self) -> JacobianCheck {
        let (u, v) = (self.h.re, self.h.im);
        let (u1, v1) = (self.h1.re, self.h1.im);
        let e3 = 2.0 * (-3.0 * u).exp();
        let x = [u, u1, v1];
        JacobianCheck {
            closed_form_b: e3 * (u1 * v.cos() + v1 * v.sin()),
            numeric_b: numeric_jacobian(|x| self.zeta(x), x),
            closed_form_c: e3 * (v1 * v.cos() - u1 * v.sin()),
            numeric_c: numeric_jacobian(|x| self.xi(x), x),
        }
    }

    fn third(&self, u: f64, u1: f64, v1: f64) -> f64 {
        let v = self.h.im;
        let (u2, v2) = (self.h2.re, self.h2.im);
        (-2.0 * u).exp() * ((u2 - u1 * u1 + v1 * v1) * (2.0 * v).cos() + (v2 - 2.0 * u1 * v1) * (2.0 * v).sin())
    }

    /// `(ζ₁, ζ₂, ζ₃)` at `(û, û₁, v̂₁) = x`, other coordinates fixed.
    pub fn zeta(&self, x: [f64; 3]) -> [f64; 3] {
        let [u, u1, v1] = x;
        let v = self.h.im;
        [u, (-u).exp() * (v1 * v.cos() - u1 * v.sin()), self.third(u, u1, v1)]
    }

    /// `(ξ₁, ξ₂, ξ₃)` at `(û, û₁, v̂₁) = x`.
    pub fn xi(&self, x: [f64; 3]) -> [f64; 3] {
        let [u, u1, v1] = x;
        let v = self.h.im;
        [u, (-u).exp() * (u1 * v.cos() + v1 * v.sin()), self.third(u, u1, v1)]
    }

    /// Tag from the jet alone. Requires `|Re ĥ| < eps_curve`.
    pub fn classify(&self, tol: &Tolerances) -> Result<Classification> {
        if self.h.re.abs() >= tol.eps_curve {
            return Err(Error::NotSingular { at: self.p, residual: self.h.re });
        }
        Ok(h_values_from_jet(self.h, self.h1, self.h2).classify(tol.eps_zero))
    }
}

fn numeric_jacobian<F: Fn([f64; 3]) -> [f64; 3]>(f: F, x: [f64; 3]) -> f64 {
    let h = 1e-5;
    let mut cols = [[0.0; 3]; 3];
    for (k, col) in cols.iter_mut().enumerate() {
        let (mut a, mut b) = (x, x);
        a[k] += h;
        b[k] -= h;
        let (fa, fb) = (f(a), f(b));
        for i in 0..3 {
            col[i] = (fa[i] - fb[i]) / (2.0 * h);
        }
    }
    let m = nalgebra::Matrix3::from_fn(|i, j| cols[j][i]);
    m.determinant()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub trial: u64,
    /// `(ε₀, ε₁, ε₂)` as `[re, im]` pairs.
    pub coefficients: [[f64; 2]; 3],
    pub perturbed_h: String,
    pub tags: BTreeMap<Tag, usize>,
    pub degenerate_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl TrialOutcome {
    pub fn is_generic(&self) -> bool {
        self.failure.is_none() && self.degenerate_count == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerturbationReport {
    pub seed: u64,
    pub magnitude: f64,
    pub trials: usize,
    pub failures: usize,
    /// Fraction of trials without degenerate or indeterminate points.
    pub generic_fraction: f64,
    pub window: Rect,
    /// The finite window stands in for the compact set of the open-dense
    /// statement.
    pub window_note: &'static str,
    pub per_trial: Vec<TrialOutcome>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeOptions {
    pub magnitude: f64,
    pub trials: usize,
    pub seed: u64,
    pub window: Rect,
    pub grid: Grid,
}

/// Uniform sample from the closed disk of radius `r`.
fn disk(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    let rho = r * rng.random::<f64>().sqrt();
    let theta = std::f64::consts::TAU * rng.random::<f64>();
    Complex64::from_polar(rho, theta)
}

/// Perturbation coefficients of one trial; stream `trial` of the seeded generator.
pub fn trial_coefficients(seed: u64, trial: u64, magnitude: f64) -> [Complex64; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    [(); 3].map(|_| disk(&mut rng, magnitude))
}

fn perturbed(h: &Expr, eps: &[Complex64; 3]) -> Expr {
    h.clone()
        .add(Expr::constant(eps[0]))
        .add(Expr::constant(eps[1]).mul(Expr::var()))
        .add(Expr::constant(eps[2]).mul(Expr::var().powi(2)))
}

fn run_trial(h: &Expr, opts: &ProbeOptions, tol: &Tolerances, trial: u64) -> TrialOutcome {
    let eps = trial_coefficients(opts.seed, trial, opts.magnitude);
    let hp = perturbed(h, &eps);
    let mut tags = BTreeMap::new();
    let mut failure = None;
    match singular_locus_h(&hp, &opts.window, &LocusOptions::new(opts.grid), tol) {
        Ok(curves) => {
            for p in curves.iter().flat_map(|c| &c.points) {
                *tags.entry(p.classification.tag).or_insert(0) += 1;
            }
        }
        Err(e) => failure = Some(e.to_string()),
    }
    let degenerate_count = tags.iter().filter(|(t, _)| !t.is_generic()).map(|(_, n)| n).sum();
    TrialOutcome {
        trial,
        coefficients: eps.map(|c| [c.re, c.im]),
        perturbed_h: hp.to_string(),
        tags,
        degenerate_count,
        failure,
    }
}

/// Perturbs `h` by random quadratics and classifies the singular locus of
/// each perturbation inside the window.
pub fn perturb_and_classify(h: &Expr, opts: &ProbeOptions, tol: &Tolerances) -> Result<PerturbationReport> {
    if !(opts.magnitude >= 0.0 && opts.magnitude.is_finite()) {
        return Err(Error::Invalid(format!("magnitude must be non-negative, got {}", opts.magnitude)));
    }
    if opts.trials == 0 {
        return Err(Error::Invalid("at least one trial is required".into()));
    }
    if !opts.window.is_valid() {
        return Err(Error::Invalid("window rectangle is empty".into()));
    }
    let per_trial: Vec<TrialOutcome> =
        (0..opts.trials as u64).into_par_iter().map(|t| run_trial(h, opts, tol, t)).collect();
    let failures = per_trial.iter().filter(|t| t.failure.is_some()).count();
    let generic = per_trial.iter().filter(|t| t.is_generic()).count();
    Ok(PerturbationReport {
        seed: opts.seed,
        magnitude: opts.magnitude,
        trials: opts.trials,
        failures,
        generic_fraction: generic as f64 / opts.trials as f64,
        window: opts.window,
        window_note: "finite window used in place of the compact set",
        per_trial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn membership_examples() {
        let zero = c(0.0, 0.0);
        let m = |h1, h2| Jet2Point::new(zero, zero, h1, h2).membership(1e-8);
        assert_eq!(m(zero, c(1.0, 0.0)), Membership { in_a: true, in_b: false, in_c: false });
        assert_eq!(m(c(1.0, 0.0), c(1.0, 0.0)), Membership { in_a: false, in_b: true, in_c: false });
        assert_eq!(m(c(0.0, 1.0), c(-1.0, 0.0)), Membership { in_a: false, in_b: false, in_c: true });
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = trial_coefficients(7, 3, 1e-3);
        assert_eq!(a, trial_coefficients(7, 3, 1e-3));
        assert_ne!(a, trial_coefficients(7, 4, 1e-3));
        assert!(a.iter().all(|z| z.norm() <= 1e-3));
        assert_eq!(trial_coefficients(7, 3, 0.0), [c(0.0, 0.0); 3]);
    }
}
