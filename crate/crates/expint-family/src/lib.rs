//! Closed-form evaluation of the integral family
//!
//! ```text
//! I(lambda, mu, nu; z) = integral from 0 to z of x^lambda * E_nu(x^mu) dx
//! ```
//!
//! together with the supporting special-function kernels (complete and
//! incomplete gamma, real-order exponential integral), the algebraic
//! identities relating members of the family, an independent quadrature
//! oracle used to verify every closed form, and the stellar-dynamics
//! `H` functions that motivated the family.
//!
//! Module layering (dependencies point downward only):
//!
//! ```text
//!   dynfric ──┐
//!   family  ──┼──> special
//!   oracle  ──┘          (oracle never calls family)
//! ```

// `!(x > 0.0)`-style guards deliberately treat NaN as a domain violation;
// frozen reference constants keep their full generated precision.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod dynfric;
pub mod family;
pub mod oracle;
pub mod report;
pub mod special;

mod error;

pub use error::{Error, Result};
