//! The dictionary functor and its verification drivers.

pub mod dictionary;
pub mod rfunctor;
pub mod twostage;
pub mod stalk;

pub use dictionary::{dictionary, model_ring_of};
