//! Moments of the von Neumann entanglement entropy of random bipartite pure
//! states, computed three independent ways:
//!
//! * [`closed_form`]: trace coefficients c1–c8 assembled into E[S], E[S²], V[S];
//! * [`moment_rep`]: the two-point power-sum representation through X(r),
//!   differentiated numerically at r1 = r2 = 1;
//! * [`ensemble`]: Monte Carlo over trace-normalized complex Wishart spectra,
//!   plus a one-dimensional quadrature for m = 2.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod closed_form;
pub mod dims;
pub mod ensemble;
pub mod error;
pub mod moment_rep;
pub mod richardson;
pub mod special;

pub use closed_form::{
    coefficients, exact_entropy_stats, page_mean, vpo_variance, CoefficientSet, EntropyStats,
};
pub use dims::SystemDims;
pub use ensemble::{estimate_stats, EstimatedStats, Spectrum};
pub use error::{Error, Result};
pub use moment_rep::{
    build_moment_matrix, numeric_coefficients, second_moment_numeric, two_point_moment, MomentMatrix,
};
pub use richardson::{Estimate, StepSchedule};
