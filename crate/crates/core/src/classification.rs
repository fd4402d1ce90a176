//! Tags, tolerances, and the shared decision tree for maxface and CMC-1
//! singular points.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tag {
    CuspidalEdge,
    Swallowtail,
    CuspidalCrossCap,
    DegeneratePoint,
    NonFrontOther,
    Indeterminate,
}

impl Tag {
    pub const ALL: [Tag; 6] = [
        Tag::CuspidalEdge,
        Tag::Swallowtail,
        Tag::CuspidalCrossCap,
        Tag::DegeneratePoint,
        Tag::NonFrontOther,
        Tag::Indeterminate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Tag::CuspidalEdge => "CuspidalEdge",
            Tag::Swallowtail => "Swallowtail",
            Tag::CuspidalCrossCap => "CuspidalCrossCap",
            Tag::DegeneratePoint => "DegeneratePoint",
            Tag::NonFrontOther => "NonFrontOther",
            Tag::Indeterminate => "Indeterminate",
        }
    }

    /// Image under conjugation of the Weierstrass data.
    pub fn dual(self) -> Tag {
        match self {
            Tag::Swallowtail => Tag::CuspidalCrossCap,
            Tag::CuspidalCrossCap => Tag::Swallowtail,
            other => other,
        }
    }

    pub fn is_generic(self) -> bool {
        matches!(self, Tag::CuspidalEdge | Tag::Swallowtail | Tag::CuspidalCrossCap)
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Relative width of the zero band for strict-sign tests.
    pub eps_zero: f64,
    /// Residual accepted for points on the singular curve.
    pub eps_curve: f64,
    pub eps_int: f64,
    pub eps_ode: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_zero: 1e-8,
            eps_curve: 1e-11,
            eps_int: 1e-10,
            eps_ode: 1e-10,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("eps_zero", self.eps_zero),
            ("eps_curve", self.eps_curve),
            ("eps_int", self.eps_int),
            ("eps_ode", self.eps_ode),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("tolerance {name} must be positive, got {v}"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Diagnostics {
    #[serde(serialize_with = "complex_pair")]
    pub alpha: Complex64,
    /// The second-order quantity relevant to whichever of `Re α`, `Im α` is
    /// closer to zero.
    pub second_test: f64,
    pub g_abs_minus_one: f64,
    pub g_prime_abs: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub det_drift: Option<f64>,
}

fn complex_pair<S: serde::Serializer>(c: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    [c.re, c.im].serialize(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Classification {
    pub tag: Tag,
    pub diagnostics: Diagnostics,
    /// Absolute half-width of the zero band that was applied.
    pub tolerance: f64,
}

/// Inputs to the decision tree; `second` is `None` when the point is too
/// degenerate for the second-order tests to be formed.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CriterionValues {
    pub alpha: Complex64,
    /// Quantity whose vanishing means degeneracy (`|g'|` or `|α_h|`).
    pub nondegeneracy: f64,
    pub second: Option<SecondOrder>,
    pub g_abs_minus_one: f64,
    pub g_prime_abs: f64,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct SecondOrder {
    /// Decides swallowtail when `Im α = 0`.
    pub swallowtail: f64,
    /// Decides cuspidal cross cap when `Re α = 0`.
    pub cross_cap: f64,
    pub magnitude: f64,
}

impl CriterionValues {
    pub fn band(&self, eps_zero: f64) -> f64 {
        let s = self.second.map_or(0.0, |s| s.magnitude);
        eps_zero * 1f64.max(self.alpha.norm()).max(s)
    }

    pub fn second_test(&self) -> f64 {
        match self.second {
            Some(s) if self.alpha.im.abs() <= self.alpha.re.abs() => s.swallowtail,
            Some(s) => s.cross_cap,
            None => 0.0,
        }
    }

    pub fn diagnostics(&self) -> Diagnostics {
        Diagnostics {
            alpha: self.alpha,
            second_test: self.second_test(),
            g_abs_minus_one: self.g_abs_minus_one,
            g_prime_abs: self.g_prime_abs,
            det_drift: None,
        }
    }

    pub fn classify(&self, eps_zero: f64) -> Classification {
        let band = self.band(eps_zero);
        let degenerate_band = eps_zero * 1f64.max(self.alpha.norm());
        let classification = |tag| Classification {
            tag,
            diagnostics: self.diagnostics(),
            tolerance: band,
        };
        if self.nondegeneracy <= degenerate_band {
            return Classification {
                tolerance: degenerate_band,
                ..classification(Tag::DegeneratePoint)
            };
        }
        let re_zero = self.alpha.re.abs() <= band;
        let im_zero = self.alpha.im.abs() <= band;
        let tag = match (re_zero, im_zero, self.second) {
            (false, false, _) => Tag::CuspidalEdge,
            (true, true, _) | (_, _, None) => Tag::Indeterminate,
            (false, true, Some(s)) if s.swallowtail.abs() > band => Tag::Swallowtail,
            (true, false, Some(s)) if s.cross_cap.abs() > band => Tag::CuspidalCrossCap,
            _ => Tag::DegeneratePoint,
        };
        classification(tag)
    }
}
