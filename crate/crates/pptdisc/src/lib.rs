//! Optimal error probabilities, trade-off curves, and error exponents for
//! discriminating multi-copy quantum states under locality-constrained
//! (LOCC/SEP/PPT) measurements.
//!
//! The crate is organized around a dense complex-operator core and a small set
//! of analysis layers on top of it:
//!
//! - [`operator`]: bipartite/multipartite dense operators — tensor products,
//!   partial transpose, partial trace, Hermitian spectral calculus.
//! - [`states`]: constructors for the states and measurements the analysis
//!   needs (maximally entangled states, Werner states, padded embeddings, the
//!   twirl-symmetric basis operators).
//! - [`ppt`]: the PPT-distinguishability norm in primal and dual form, plus
//!   exponential-lower-bound and strong-converse certificates.
//! - [`simplex`]: a self-contained bounded-variable simplex solver.
//! - [`symlp`]: the twirl-reduced linear program for symmetric and asymmetric
//!   testing of maximally entangled states, with verified dual certificates.
//! - [`exponents`]: Chernoff/Stein/Hoeffding/strong-converse exponents, closed
//!   forms for every supported hypothesis pair, and empirical exponent fits.
//! - [`upb`]: unextendible product bases, the minimax overlap quantity that
//!   quantifies unextendibility, and the SEP-vs-PPT separation witness.
//! - [`report`] and [`cli`]: CSV/JSON serialization and the batch front-end
//!   used by the `pptdisc` binary.
//!
//! Every numerical routine is deterministic given its inputs and (where
//! randomness is involved) an explicit seed. See the crate examples for one
//! runnable program per major capability.

// Dense matrix kernels index rows and columns explicitly throughout; iterator
// rewrites of these loops obscure the index arithmetic they exist to show.
#![allow(clippy::needless_range_loop)]

pub mod cli;
mod eigen;
pub mod exponents;
pub mod operator;
pub mod ppt;
pub mod report;
pub mod simplex;
pub mod states;
pub mod symlp;
pub mod upb;

mod error;

pub use error::{Error, Result};
pub use operator::{DensityMatrix, Factorization, Operator, Spectrum, C64, DIM_CAP};
pub use states::{HypothesisPair, PureState};
