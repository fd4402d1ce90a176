use num_complex::Complex64;
use thiserror::Error;

use crate::expr::{EvalError, ParseError};
use crate::numerics::continuation::TraceError;
use crate::numerics::ode::OdeError;
use crate::numerics::quadrature::QuadError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error in {field}: {source}")]
    Parse {
        field: &'static str,
        #[source]
        source: ParseError,
    },
    #[error("evaluating {field} at {at}: {source}")]
    Eval {
        field: &'static str,
        at: Complex64,
        #[source]
        source: EvalError,
    },
    #[error("Weierstrass data degenerate at {at}: (1+|g|^2)^2 |omega|^2 vanishes")]
    DegenerateData { at: Complex64 },
    #[error("point {at} is not singular (residual {residual:e})")]
    NotSingular { at: Complex64, residual: f64 },
    #[error("zeta is not transversal at {at}: Im(conj(zeta) g) = {value:e}")]
    NotTransversal { at: Complex64, value: f64 },
    #[error("direction is not null: |df(eta)| = {residual:e}")]
    NotNull { residual: f64 },
    #[error("degenerate singular point at ({u}, {v}): |d lambda| = {gradient:e}")]
    DegenerateSeed { u: f64, v: f64, gradient: f64 },
    #[error("kernel of df is not one-dimensional at ({u}, {v})")]
    KernelDimension { u: f64, v: f64 },
    #[error("curvature vanishes at t = {t}; Frenet frame undefined")]
    FrenetUndefined { t: f64 },
    #[error("metric degenerate at ({u}, {v})")]
    DegenerateMetric { u: f64, v: f64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error(transparent)]
    Trace(#[from] TraceError),
}

pub type Result<T> = std::result::Result<T, Error>;
