//! Heat kernels, extension kernels and fractional operators on Euclidean
//! space and on groups of Heisenberg type, together with a registry of
//! numerical checks of the intertwining identities they satisfy.
//!
//! Module map:
//!
//! * [`htype`]: H-type structures, the Kaplan map and the group law;
//! * [`quad`]: the quadrature engine;
//! * [`kernels`]: heat, extension and thin-space kernels, fundamental
//!   solutions and their Gamma constants;
//! * [`fracops`]: fractional operators applied to fundamental solutions, the
//!   convolution identity and the auxiliary one-dimensional identities;
//! * [`verify`]: the named checks and their CSV/JSON reports.

// `!(x > 0.0)` deliberately rejects NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fracops;
pub mod gamma;
pub mod htype;
pub mod kernels;
pub mod quad;
pub mod verify;

pub use error::{Error, Result};
pub use htype::{Family, GroupPoint, HTypeStructure};
pub use kernels::{FracOrder, Sign};
pub use quad::{QuadResult, QuadratureSpec};
