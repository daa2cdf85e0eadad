//! Special functions evaluated by the trapezoidal rule applied to
//! transformed integral representations: regularized incomplete gamma
//! functions on a hyperbolic inverse-Laplace contour, reciprocal gamma on
//! the same contour, and confluent/Gauss hypergeometric functions through a
//! `tanh`/`sinh` change of variables.

pub mod catalog;
pub mod cli;
pub mod contour;
pub mod engine;
pub mod error;
pub mod gamma;
pub mod hypergeom;
pub mod scaled;
pub mod tables;

pub use engine::{refine, refine_levels, sum_trapezoid, sweep_levels, ConvergenceReport, Level, MeshSpec, RefinePlan, TrapSum};
pub use error::{Error, ErrorKind, Result};
pub use scaled::ScaledReal;
