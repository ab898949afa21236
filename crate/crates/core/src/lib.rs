//! Star products of linear codes over finite fields.
//!
//! The crate is organised bottom-up:
//!
//! - [`fqlinalg`]: arithmetic in GF(p^m) and dense linear algebra (RREF, rank, kernels).
//! - [`codes`]: canonical linear codes and deterministic code computations
//!   (star product, dual, minimum distance, support, projection, MDS test).
//! - [`exactcomb`]: exact rational evaluation of the closed-form counts,
//!   expectations and bounds for star products of random codes.
//! - [`sampling`]: the two random-code models and reproducible Monte Carlo estimation.
//! - [`oracle`]: exhaustive enumeration at small parameters, the ground truth
//!   for the formulas and the estimators.
//! - [`apps`]: PIR, SDMM and CSS-T figures of merit for a given code pair.

pub mod apps;
pub mod codes;
pub mod error;
pub mod exactcomb;
pub mod fqlinalg;
pub mod oracle;
pub mod sampling;

pub use error::{Error, Result};
