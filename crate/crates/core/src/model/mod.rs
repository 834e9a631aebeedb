//! The monomial local model of the completed parameter stack and its
//! graded module category.

pub mod ring;
pub mod module;
pub mod complex;
pub mod ext;

pub use complex::{identify_cyclic, o_cube, steinberg_resolution, OComplex};
pub use module::{subscheme_module, GradedModule, PolyMat};
pub use ring::{ModelRing, Monomial, Poly};
