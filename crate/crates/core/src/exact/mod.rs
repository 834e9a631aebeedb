//! Exact arithmetic substrate: rationals, matrices, truncated series and
//! bigraded bookkeeping.

pub mod rat;
pub mod matrix;
pub mod series;
pub mod grading;
pub mod qspec;

pub use rat::{qi, qr, Q};
pub use matrix::QMat;
pub use series::{SeriesRing, TruncSeries};
pub use grading::{graded_slice, Bidegree, GradedLabel, Weight};
