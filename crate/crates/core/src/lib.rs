pub mod annihilators;
pub mod arith;
pub mod characters;
pub mod cli;
pub mod error;
pub mod frobenius;
pub mod rank;
pub mod residue;
pub mod stickelberger;

pub use error::{Error, Result};
