pub mod catsite;
pub mod error;
pub mod gallery;
pub mod homology;
pub mod int;
pub mod presheaf;
pub mod realization;
pub mod sset;

pub use error::{Error, Result};
pub use int::Int;
