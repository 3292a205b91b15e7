pub mod algebra;
pub mod canonical;
pub mod cli;
pub mod coeff;
pub mod config;
pub mod error;
pub mod lattice;
pub mod relations;
pub mod symfunc;

pub use coeff::Coefficient;
pub use error::{Error, Result};
