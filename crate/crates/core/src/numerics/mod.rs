//! Numerical kernels shared by the surface modules.

pub mod continuation;
pub mod ode;
pub mod quadrature;
