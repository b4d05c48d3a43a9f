//! Exact verification of Raşa-type inequalities for Bernstein polynomials
//! through the convex stochastic order of finitely-supported distributions.
//!
//! All arithmetic is exact over arbitrary-precision rationals; no tolerance
//! appears anywhere.

pub mod bernstein;
pub mod convex_order;
pub mod distributions;
pub mod error;
pub mod majorization;
pub mod numerics;
pub mod rasa;
pub mod report;
pub mod sample;
pub mod sweep;

pub use bernstein::{bernstein_apply, bernstein_basis, tensor_sum, ConvexTestFunction};
pub use convex_order::{cx_falsify_random, is_cx_dominated, CxReason, CxVerdict};
pub use distributions::DiscreteDistribution;
pub use error::{Error, Result};
pub use majorization::{bernoulli_convolution, majorizes, pinch_chain, sigma_criterion, PinchStep, ProbVector};
pub use numerics::{format_rational, parse_rational, Rational};
pub use rasa::{ChainValues, InequalityMargin};
pub use report::Report;
