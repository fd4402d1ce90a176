pub mod classification;
pub mod cmc1;
pub mod domain;
pub mod error;
pub mod export;
pub mod expr;
pub mod frontal;
pub mod genericity;
pub mod mesh;
pub mod numerics;
pub mod weierstrass;

pub use classification::{Classification, Diagnostics, Tag, Tolerances};
pub use domain::{Grid, Rect};
pub use error::{Error, Result};
