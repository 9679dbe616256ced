pub mod curvature;
pub mod error;
pub mod jordan;
pub mod pluecker;
pub mod runner;
pub mod submanifold;
pub mod sampling;
pub mod subspace;
pub mod tol;

pub use error::{Error, Result};
pub use subspace::{Orientation, ProjectionOperator, Subspace};
