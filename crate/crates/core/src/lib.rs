//! Exact Fourier analysis of real-valued functions on the Boolean cube
//! `{-1,1}^n`: L_p influences, pointwise sensitivity, noise and
//! symmetrization operators, the univariate reduction for symmetric
//! functions, orthogonal-polynomial constructions and numerical estimators
//! for the extremal constants that bound L1 influence in terms of degree.

pub mod constructs;
pub mod cube;
pub mod error;
pub mod influence;
pub mod lab;
pub mod operators;
pub mod par;
pub mod poly;
pub mod report;
pub mod schema;
pub mod symmetric;

pub use cube::{CubeFunction, FourierExpansion, PropertyFlags};
pub use error::{Error, Result};
pub use poly::UniPoly;
pub use report::{BoundReport, Direction, Verdict};
pub use symmetric::LevelProfile;
