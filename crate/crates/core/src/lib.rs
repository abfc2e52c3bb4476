pub mod abel;
pub mod contour;
pub mod error;
pub mod lattice;
pub mod pfaffian;
pub mod periods;
pub mod weierstrass;

pub use error::{Error, Result};
pub use num_complex::Complex64;
