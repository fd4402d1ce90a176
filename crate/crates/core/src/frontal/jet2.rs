//! Second-order jets of real functions of `(u, v)`.

use std::ops::{Add, Div, Mul, Neg, Sub};

use nalgebra::Vector3;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet2 {
    pub v: f64,
    pub du: f64,
    pub dv: f64,
    pub duu: f64,
    pub duv: f64,
    pub dvv: f64,
}

impl Jet2 {
    pub fn constant(c: f64) -> Jet2 {
        Jet2 { v: c, ..Jet2::default() }
    }

    pub fn var_u(u: f64) -> Jet2 {
        Jet2 { v: u, du: 1.0, ..Jet2::default() }
    }

    pub fn var_v(v: f64) -> Jet2 {
        Jet2 { v, dv: 1.0, ..Jet2::default() }
    }

    /// Jet of a function of `u` alone from its value and two derivatives.
    pub fn of_u(v: f64, d1: f64, d2: f64) -> Jet2 {
        Jet2 { v, du: d1, duu: d2, ..Jet2::default() }
    }

    fn chain(self, f0: f64, f1: f64, f2: f64) -> Jet2 {
        Jet2 {
            v: f0,
            du: f1 * self.du,
            dv: f1 * self.dv,
            duu: f1 * self.duu + f2 * self.du * self.du,
            duv: f1 * self.duv + f2 * self.du * self.dv,
            dvv: f1 * self.dvv + f2 * self.dv * self.dv,
        }
    }

    pub fn sqrt(self) -> Jet2 {
        let s = self.v.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.v))
    }

    pub fn recip(self) -> Jet2 {
        let r = 1.0 / self.v;
        self.chain(r, -r * r, 2.0 * r * r * r)
    }

    pub fn powi(self, n: i32) -> Jet2 {
        let x = self.v;
        let nf = n as f64;
        self.chain(x.powi(n), nf * x.powi(n - 1), nf * (nf - 1.0) * x.powi(n - 2))
    }

    pub fn scale(self, s: f64) -> Jet2 {
        Jet2 {
            v: self.v * s,
            du: self.du * s,
            dv: self.dv * s,
            duu: self.duu * s,
            duv: self.duv * s,
            dvv: self.dvv * s,
        }
    }

    /// Exchanges the roles of `u` and `v`.
    pub fn swapped(self) -> Jet2 {
        Jet2 {
            v: self.v,
            du: self.dv,
            dv: self.du,
            duu: self.dvv,
            duv: self.duv,
            dvv: self.duu,
        }
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, b: Jet2) -> Jet2 {
        Jet2 {
            v: self.v + b.v,
            du: self.du + b.du,
            dv: self.dv + b.dv,
            duu: self.duu + b.duu,
            duv: self.duv + b.duv,
            dvv: self.dvv + b.dvv,
        }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, b: Jet2) -> Jet2 {
        self + (-b)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, b: Jet2) -> Jet2 {
        Jet2 {
            v: self.v * b.v,
            du: self.du * b.v + self.v * b.du,
            dv: self.dv * b.v + self.v * b.dv,
            duu: self.duu * b.v + 2.0 * self.du * b.du + self.v * b.duu,
            duv: self.duv * b.v + self.du * b.dv + self.dv * b.du + self.v * b.duv,
            dvv: self.dvv * b.v + 2.0 * self.dv * b.dv + self.v * b.dvv,
        }
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, s: f64) -> Jet2 {
        self.scale(s)
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(self, c: f64) -> Jet2 {
        Jet2 { v: self.v + c, ..self }
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    fn div(self, b: Jet2) -> Jet2 {
        self * b.recip()
    }
}

/// Vector-valued jet.
pub type VecJet = [Jet2; 3];

pub fn dot(a: &VecJet, b: &VecJet) -> Jet2 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: &VecJet, b: &VecJet) -> VecJet {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn normalize(a: &VecJet) -> VecJet {
    let inv = dot(a, a).sqrt().recip();
    a.map(|c| c * inv)
}

/// Named partial derivatives of a vector jet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Partials {
    pub value: Vector3<f64>,
    pub du: Vector3<f64>,
    pub dv: Vector3<f64>,
    pub duu: Vector3<f64>,
    pub duv: Vector3<f64>,
    pub dvv: Vector3<f64>,
}

impl Partials {
    pub fn of(j: &VecJet) -> Partials {
        let pick = |f: fn(&Jet2) -> f64| Vector3::new(f(&j[0]), f(&j[1]), f(&j[2]));
        Partials {
            value: pick(|c| c.v),
            du: pick(|c| c.du),
            dv: pick(|c| c.dv),
            duu: pick(|c| c.duu),
            duv: pick(|c| c.duv),
            dvv: pick(|c| c.dvv),
        }
    }
}
