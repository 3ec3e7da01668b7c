//! Polytope approximation of convex bodies through Macbeath-region cap covers.

pub mod bodies;
pub mod caps;
pub mod construction;
pub mod error;
pub mod geom;
pub mod metrics;
pub mod polar;
pub mod sampling;

pub use error::{Error, Result};
