//! Maxfaces in Lorentz-Minkowski space from Weierstrass data `(g, ω̂ dz)`.

mod data;
mod integrate;
mod locus;

pub use data::{classify_h, LocalJets, WeierstrassData};
pub use locus::{singular_locus_h, CurvePoint, LocusOptions, SingularCurve};

pub(crate) use data::h_values_from_jet;
