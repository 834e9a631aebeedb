//! The type-A affine Hecke algebra and its modules.

pub mod perm;
pub mod elem;
pub mod smat;
pub mod spectrum;
pub mod module;
pub mod intertwine;
pub mod cube;
pub mod standard;
pub mod finite;
pub mod pairing;

pub use elem::{Elem, HeckeAlg};
pub use module::{principal_series, HModule};
pub use perm::Perm;
pub use spectrum::Spectrum;
