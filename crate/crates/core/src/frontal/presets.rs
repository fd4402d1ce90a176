use std::sync::Arc;

use super::developable::TangentDevelopable;
use super::jet2::{normalize, Jet2, VecJet};
use super::map::FrontalMap;
use crate::domain::Rect;
use crate::error::{Error, Result};
use crate::expr::{parse, Expr};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `(u², u³, v)`.
    CuspidalEdge,
    /// `(3u⁴ + u²v, 4u³ + 2uv, v)`.
    Swallowtail,
    /// `(u, v², uv³)`.
    CuspidalCrossCap,
    /// Tangent developable of a space curve, `(t, t², t⁴)` by default.
    TangentDevelopable,
    /// `(u, v, 0)`.
    Plane,
}

pub const PRESET_NAMES: [&str; 5] = ["cuspidal-edge", "swallowtail", "cuspidal-cross-cap", "tangent-developable", "plane"];

pub const DEFAULT_CURVE: [&str; 3] = ["z", "z^2", "z^4"];

type Formula = fn(Jet2, Jet2) -> VecJet;

fn exact(name: &str, f: Formula, nu: Formula, domain: Rect) -> FrontalMap {
    let uv = |u: f64, v: f64| (Jet2::var_u(u), Jet2::var_v(v));
    FrontalMap::from_jets(
        name,
        Arc::new(move |u, v| {
            let (u, v) = uv(u, v);
            Ok(f(u, v))
        }),
        Arc::new(move |u, v| {
            let (u, v) = uv(u, v);
            Ok(normalize(&nu(u, v)))
        }),
        domain,
    )
}

fn c(x: f64) -> Jet2 {
    Jet2::constant(x)
}

impl Preset {
    pub const ALL: [Preset; 5] =
        [Preset::CuspidalEdge, Preset::Swallowtail, Preset::CuspidalCrossCap, Preset::TangentDevelopable, Preset::Plane];

    pub fn name(self) -> &'static str {
        PRESET_NAMES[self as usize]
    }

    pub fn from_name(name: &str) -> Option<Preset> {
        Preset::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn default_domain(self) -> Rect {
        Rect::centered(0.5)
    }

    /// Builds the map. `curve` only applies to the tangent developable.
    pub fn build(self, domain: Rect, curve: Option<[Expr; 3]>) -> Result<FrontalMap> {
        let name = self.name();
        Ok(match self {
            Preset::CuspidalEdge => exact(
                name,
                |u, v| [u * u, u.powi(3), v],
                |u, _| [u * 3.0, c(-2.0), c(0.0)],
                domain,
            ),
            Preset::Swallowtail => exact(
                name,
                |u, v| [u.powi(4) * 3.0 + u * u * v, u.powi(3) * 4.0 + u * v * 2.0, v],
                |u, _| [c(1.0), -u, u * u],
                domain,
            ),
            Preset::CuspidalCrossCap => exact(
                name,
                |u, v| [u, v * v, u * v.powi(3)],
                |u, v| [v.powi(3) * -2.0, u * v * -3.0, c(2.0)],
                domain,
            ),
            Preset::Plane => exact(name, |u, v| [u, v, c(0.0)], |_, _| [c(0.0), c(0.0), c(1.0)], domain),
            Preset::TangentDevelopable => {
                let curve = match curve {
                    Some(c) => c,
                    None => DEFAULT_CURVE.map(|s| parse(s).expect("default curve parses")),
                };
                TangentDevelopable::from_exprs(curve, domain)?.map()
            }
        })
    }
}

/// Registry lookup by name with the preset's default window.
pub fn preset(name: &str) -> Result<FrontalMap> {
    let p = Preset::from_name(name).ok_or_else(|| Error::Invalid(format!("unknown frontal preset {name:?}")))?;
    p.build(p.default_domain(), None)
}
