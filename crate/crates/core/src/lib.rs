//! Exact computations around L-parameters for `GL_n`.
//!
//! The crate has four layers:
//!
//! * [`exact`] — rational numbers, matrices, truncated multivariate power
//!   series and graded linear algebra. Everything downstream is built on
//!   these; there is no floating point anywhere.
//! * [`param`] — the variety of pairs `(phi, N)` with
//!   `Ad(phi)(N) = q^{-1} N`: membership, chain decompositions, Jordan
//!   types, stable flags and tangent-space audits.
//! * [`hecke`] — the type-A affine Hecke algebra in its Bernstein
//!   presentation, principal series over truncated deformation bases,
//!   intertwining operators, standard modules and the resolution complexes.
//! * [`model`] / [`functor`] — the monomial local model of the completed
//!   L-parameter stack at a regular semisimple central character, and the
//!   dictionary functor matching Hecke-side complexes with coherent
//!   complexes on the model, together with the verification drivers.

pub mod exact;
pub mod param;
pub mod hecke;
pub mod model;
pub mod functor;

pub use exact::{Q, QMat, SeriesRing, TruncSeries, Weight};
pub use exact::qspec::QSpec;
