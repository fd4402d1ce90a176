use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

use super::{BinOp, Expr, Func};

/// Highest derivative order carried by a [`ComplexJet`].
pub const MAX_ORDER: usize = 3;

const N: usize = MAX_ORDER + 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("{op} is undefined in `{subtree}`")]
    Domain { op: &'static str, subtree: String },
    #[error("jet order {0} exceeds the supported maximum {MAX_ORDER}")]
    Order(usize),
}

/// Truncated Taylor expansion `c[k] = f^(k)(z0) / k!`, `k <= order`.
///
/// Coefficients beyond `order` are kept at zero and never read by the
/// arithmetic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexJet {
    z0: Complex64,
    order: usize,
    c: [Complex64; N],
}

fn zeros() -> [Complex64; N] {
    [Complex64::new(0.0, 0.0); N]
}

impl ComplexJet {
    pub fn constant(z0: Complex64, order: usize, value: Complex64) -> Self {
        let mut c = zeros();
        c[0] = value;
        ComplexJet { z0, order, c }
    }

    /// Jet of the identity function `z` at `z0`.
    pub fn identity(z0: Complex64, order: usize) -> Self {
        let mut jet = Self::constant(z0, order, z0);
        if order >= 1 {
            jet.c[1] = Complex64::new(1.0, 0.0);
        }
        jet
    }

    pub fn from_coeffs(z0: Complex64, coeffs: &[Complex64]) -> Self {
        assert!(!coeffs.is_empty() && coeffs.len() <= N, "1..={N} coefficients");
        let mut c = zeros();
        c[..coeffs.len()].copy_from_slice(coeffs);
        ComplexJet {
            z0,
            order: coeffs.len() - 1,
            c,
        }
    }

    pub fn base_point(&self) -> Complex64 {
        self.z0
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Taylor coefficients `c[0..=order]`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.c[..=self.order]
    }

    pub fn value(&self) -> Complex64 {
        self.c[0]
    }

    /// `k`-th derivative `k! c[k]`; zero past the truncation order.
    pub fn derivative(&self, k: usize) -> Complex64 {
        if k > self.order {
            return Complex64::new(0.0, 0.0);
        }
        let fact: f64 = (1..=k).map(|j| j as f64).product();
        self.c[k] * fact
    }

    /// Jet of `f'` at the same point, one order lower.
    pub fn differentiate(&self) -> ComplexJet {
        let mut c = zeros();
        for k in 1..=self.order {
            c[k - 1] = self.c[k] * k as f64;
        }
        ComplexJet {
            z0: self.z0,
            order: self.order.saturating_sub(1),
            c,
        }
    }

    /// Same jet truncated to a lower order.
    pub fn truncate(&self, order: usize) -> ComplexJet {
        let order = order.min(self.order);
        let mut c = zeros();
        c[..=order].copy_from_slice(&self.c[..=order]);
        ComplexJet { z0: self.z0, order, c }
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs().iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    fn with(&self, other: &ComplexJet) -> (usize, [Complex64; N]) {
        (self.order.min(other.order), zeros())
    }

    fn build(&self, order: usize, c: [Complex64; N]) -> ComplexJet {
        ComplexJet { z0: self.z0, order, c }
    }

    pub fn scale(&self, s: Complex64) -> ComplexJet {
        let mut c = zeros();
        for k in 0..=self.order {
            c[k] = self.c[k] * s;
        }
        self.build(self.order, c)
    }

    /// Quotient; `None` when the divisor vanishes at the base point.
    pub fn checked_div(&self, b: &ComplexJet) -> Option<ComplexJet> {
        if b.c[0] == Complex64::new(0.0, 0.0) {
            return None;
        }
        let (n, mut c) = self.with(b);
        let inv = b.c[0].inv();
        for k in 0..=n {
            let mut s = self.c[k];
            for j in 1..=k {
                s -= b.c[j] * c[k - j];
            }
            c[k] = s * inv;
        }
        Some(self.build(n, c))
    }

    pub fn recip(&self) -> Option<ComplexJet> {
        ComplexJet::constant(self.z0, self.order, Complex64::new(1.0, 0.0)).checked_div(self)
    }

    pub fn exp(&self) -> ComplexJet {
        let mut c = zeros();
        c[0] = self.c[0].exp();
        for k in 1..=self.order {
            let mut s = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                s += self.c[j] * c[k - j] * j as f64;
            }
            c[k] = s / k as f64;
        }
        self.build(self.order, c)
    }

    /// Principal logarithm; `None` at zero.
    pub fn ln(&self) -> Option<ComplexJet> {
        let a0 = self.c[0];
        if a0 == Complex64::new(0.0, 0.0) {
            return None;
        }
        let mut c = zeros();
        c[0] = a0.ln();
        for k in 1..=self.order {
            let mut s = self.c[k];
            for j in 1..k {
                s -= c[j] * self.c[k - j] * (j as f64 / k as f64);
            }
            c[k] = s / a0;
        }
        Some(self.build(self.order, c))
    }

    /// Principal square root; `None` at zero when derivatives are requested.
    pub fn sqrt(&self) -> Option<ComplexJet> {
        let a0 = self.c[0];
        let mut c = zeros();
        c[0] = a0.sqrt();
        if self.order == 0 {
            return Some(self.build(0, c));
        }
        if a0 == Complex64::new(0.0, 0.0) {
            return None;
        }
        let inv = (c[0] * 2.0).inv();
        for k in 1..=self.order {
            let mut s = self.c[k];
            for j in 1..k {
                s -= c[j] * c[k - j];
            }
            c[k] = s * inv;
        }
        Some(self.build(self.order, c))
    }

    /// `(sin, cos)` computed together by the coupled recurrence.
    pub fn sin_cos(&self) -> (ComplexJet, ComplexJet) {
        let mut s = zeros();
        let mut co = zeros();
        s[0] = self.c[0].sin();
        co[0] = self.c[0].cos();
        for k in 1..=self.order {
            let mut ss = Complex64::new(0.0, 0.0);
            let mut cc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                let w = self.c[j] * j as f64;
                ss += w * co[k - j];
                cc -= w * s[k - j];
            }
            s[k] = ss / k as f64;
            co[k] = cc / k as f64;
        }
        (self.build(self.order, s), self.build(self.order, co))
    }

    pub fn sinh_cosh(&self) -> (ComplexJet, ComplexJet) {
        let mut s = zeros();
        let mut co = zeros();
        s[0] = self.c[0].sinh();
        co[0] = self.c[0].cosh();
        for k in 1..=self.order {
            let mut ss = Complex64::new(0.0, 0.0);
            let mut cc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                let w = self.c[j] * j as f64;
                ss += w * co[k - j];
                cc += w * s[k - j];
            }
            s[k] = ss / k as f64;
            co[k] = cc / k as f64;
        }
        (self.build(self.order, s), self.build(self.order, co))
    }

    /// Integer power; `None` for a negative power of a jet vanishing at
    /// the base point.
    pub fn powi(&self, n: i32) -> Option<ComplexJet> {
        let mut result = ComplexJet::constant(self.z0, self.order, Complex64::new(1.0, 0.0));
        let mut base = *self;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result * base;
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        if n < 0 {
            result.recip()
        } else {
            Some(result)
        }
    }
}

impl Add for ComplexJet {
    type Output = ComplexJet;
    fn add(self, b: ComplexJet) -> ComplexJet {
        let (n, mut c) = self.with(&b);
        for k in 0..=n {
            c[k] = self.c[k] + b.c[k];
        }
        self.build(n, c)
    }
}

impl Sub for ComplexJet {
    type Output = ComplexJet;
    fn sub(self, b: ComplexJet) -> ComplexJet {
        let (n, mut c) = self.with(&b);
        for k in 0..=n {
            c[k] = self.c[k] - b.c[k];
        }
        self.build(n, c)
    }
}

/// Cauchy product.
impl Mul for ComplexJet {
    type Output = ComplexJet;
    fn mul(self, b: ComplexJet) -> ComplexJet {
        let (n, mut c) = self.with(&b);
        for k in 0..=n {
            for j in 0..=k {
                c[k] += self.c[j] * b.c[k - j];
            }
        }
        self.build(n, c)
    }
}

impl Neg for ComplexJet {
    type Output = ComplexJet;
    fn neg(self) -> ComplexJet {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Expr {
    /// Taylor jet of the expression at `z0` up to `order`.
    pub fn eval_jet(&self, z0: Complex64, order: usize) -> Result<ComplexJet, EvalError> {
        if order > MAX_ORDER {
            return Err(EvalError::Order(order));
        }
        eval(self, z0, order)
    }
}

fn domain(op: &'static str, e: &Expr) -> EvalError {
    EvalError::Domain {
        op,
        subtree: e.to_string(),
    }
}

fn eval(e: &Expr, z0: Complex64, order: usize) -> Result<ComplexJet, EvalError> {
    let jet = match e {
        Expr::Const(c) => ComplexJet::constant(z0, order, *c),
        Expr::Var => ComplexJet::identity(z0, order),
        Expr::Neg(a) => -eval(a, z0, order)?,
        Expr::Binary(op, a, b) => {
            let a = eval(a, z0, order)?;
            let b = eval(b, z0, order)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => a.checked_div(&b).ok_or_else(|| domain("division by zero", e))?,
            }
        }
        Expr::Pow(a, n) => eval(a, z0, order)?
            .powi(*n)
            .ok_or_else(|| domain("negative power of zero", e))?,
        Expr::Apply(func, a) => {
            let a = eval(a, z0, order)?;
            match func {
                Func::Exp => a.exp(),
                Func::Log => a.ln().ok_or_else(|| domain("log(0)", e))?,
                Func::Sqrt => a.sqrt().ok_or_else(|| domain("derivative of sqrt at 0", e))?,
                Func::Sin => a.sin_cos().0,
                Func::Cos => a.sin_cos().1,
                Func::Sinh => a.sinh_cosh().0,
                Func::Cosh => a.sinh_cosh().1,
            }
        }
    };
    if !jet.is_finite() {
        return Err(domain("non-finite result", e));
    }
    Ok(jet)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    #[test]
    fn identity_jet() {
        let j = ComplexJet::identity(c(0.3, -2.0), 3);
        assert_eq!(j.coeffs(), &[c(0.3, -2.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn square_at_one() {
        let j = parse("z^2").unwrap().eval_jet(c(1.0, 0.0), 2).unwrap();
        assert_eq!(j.coeffs(), &[c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn exponential_series() {
        let j = parse("exp(z)").unwrap().eval_jet(c(0.0, 0.0), 3).unwrap();
        let expected = [1.0, 1.0, 0.5, 1.0 / 6.0];
        for (got, want) in j.coeffs().iter().zip(expected) {
            assert!(close(*got, c(want, 0.0), 1e-15), "{got} vs {want}");
        }
    }

    #[test]
    fn rational_matches_central_difference() {
        let e = parse("z/(1+z)").unwrap();
        let z0 = c(1.0, 0.0);
        let j = e.eval_jet(z0, 2).unwrap();
        let h = 1e-5;
        let fd = (e.eval(z0 + h).unwrap() - e.eval(z0 - h).unwrap()) / (2.0 * h);
        assert!((j.coeffs()[1] - fd).norm() <= 1e-6 * fd.norm());
        // d/dz z/(1+z) = 1/(1+z)^2 = 1/4 at z = 1
        assert!(close(j.coeffs()[1], c(0.25, 0.0), 1e-15));
        // second coefficient -1/(1+z)^3 = -1/8
        assert!(close(j.coeffs()[2], c(-0.125, 0.0), 1e-15));
    }

    #[test]
    fn transcendental_coefficients() {
        let z0 = c(0.4, 0.7);
        let check = |src: &str, want: [Complex64; 4]| {
            let j = parse(src).unwrap().eval_jet(z0, 3).unwrap();
            for k in 0..4 {
                assert!(close(j.derivative(k), want[k], 1e-13), "{src} d{k}: {} vs {}", j.derivative(k), want[k]);
            }
        };
        let (s, co) = (z0.sin(), z0.cos());
        check("sin(z)", [s, co, -s, -co]);
        check("cos(z)", [co, -s, -co, s]);
        let (sh, ch) = (z0.sinh(), z0.cosh());
        check("sinh(z)", [sh, ch, sh, ch]);
        check("cosh(z)", [ch, sh, ch, sh]);
        check("log(z)", [z0.ln(), z0.inv(), -z0.powi(-2), z0.powi(-3) * 2.0]);
        let r = z0.sqrt();
        check("sqrt(z)", [r, 0.5 / r, -0.25 / (r * z0), 0.375 / (r * z0 * z0)]);
        check("z^-2", [z0.powi(-2), z0.powi(-3) * -2.0, z0.powi(-4) * 6.0, z0.powi(-5) * -24.0]);
    }

    #[test]
    fn domain_errors_name_the_subtree() {
        let err = parse("1 + 1/(z-1)").unwrap().eval_jet(c(1.0, 0.0), 1).unwrap_err();
        match err {
            EvalError::Domain { op, subtree } => {
                assert_eq!(op, "division by zero");
                assert_eq!(subtree, "(1.0/(z-1.0))");
            }
            other => panic!("{other:?}"),
        }
        assert!(parse("log(z)").unwrap().eval_jet(c(0.0, 0.0), 0).is_err());
        assert!(parse("sqrt(z)").unwrap().eval_jet(c(0.0, 0.0), 0).is_ok());
        assert!(parse("sqrt(z)").unwrap().eval_jet(c(0.0, 0.0), 1).is_err());
        assert!(parse("z^-1").unwrap().eval_jet(c(0.0, 0.0), 0).is_err());
        assert_eq!(parse("z").unwrap().eval_jet(c(0.0, 0.0), 4).unwrap_err(), EvalError::Order(4));
    }

    #[test]
    fn principal_branch() {
        let v = parse("log(z)").unwrap().eval(c(-1.0, 0.0)).unwrap();
        assert!(close(v, c(0.0, std::f64::consts::PI), 1e-15));
        let v = parse("sqrt(z)").unwrap().eval(c(-4.0, 0.0)).unwrap();
        assert!(close(v, c(0.0, 2.0), 1e-15));
    }
}
