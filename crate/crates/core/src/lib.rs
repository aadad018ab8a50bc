//! Exact splitting of transitive permutation representations into
//! irreducible components via centralizer-algebra idempotents.

pub mod error;
pub mod f4;
pub mod centralizer;
pub mod cli;
pub mod field;
pub mod modular;
pub mod numeric;
pub mod perm;
pub mod poly;
pub mod report;
pub mod roots;
pub mod solver;
pub mod splitter;
pub mod verify;

pub use error::{Error, Result};
