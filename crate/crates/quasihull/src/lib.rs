//! Finite-scale computations on quasicircles: ideal convex hulls in H^3 and
//! AdS^3, their pleated boundaries and gluing maps, bending laminations,
//! earthquakes, widths and pointwise fundamental-form identities.

// `!(x > 0.0)` style guards are meant to reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ads3;
pub mod cli;
pub mod earthquake;
pub mod error;
pub mod h2;
pub mod hull;
pub mod hyp3;
pub mod inverse_solver;
pub mod io;
pub mod mobius;
pub mod surface_forms;

pub use error::{Error, Result};

/// Library version embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
