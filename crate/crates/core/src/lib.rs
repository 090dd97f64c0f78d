//! Graceful labelings of functional directed graphs on `Z_n`.

pub mod algebra;
pub mod cli;
pub mod decomposition;
pub mod endofunction;
pub mod enumerate;
pub mod error;
pub mod expansion;
pub mod labeling;
pub mod monoid;
pub mod theorems;

pub use endofunction::{Endofunction, FunctionalGraph};
pub use error::{Error, Result};
