//! Numeric singularity criteria for parametrized frontals `f: U -> R³`.
//!
//! Everything here works from `f`, a unit normal `ν`, and their partial
//! derivatives, so it serves as an independent check on the closed-form
//! criteria of the Weierstrass-data modules.

mod classify;
mod curvature;
mod developable;
mod jet2;
mod local;
mod map;
mod presets;
mod trace;

pub use classify::{classify, SingularPointReport};
pub use curvature::{curvature_profile, CurvatureRow};
pub use developable::{CurveJets, TangentDevelopable};
pub use jet2::{cross, dot, normalize, Jet2, Partials, VecJet};
pub use local::{covariant_derivative, null_direction, psi_along_curve};
pub use map::{det3, DerivativeMode, FrontalMap, JetFn, LocalData, PointFn, V2, V3};
pub use presets::{preset, Preset, DEFAULT_CURVE, PRESET_NAMES};
pub use trace::{trace_singular_curve, FrontalCurve, FrontalNode};
