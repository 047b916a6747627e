//! Geometric side of the trace formula: root data, parabolic subsets,
//! nilpotent orbits, growth exponents, local discriminants, level data,
//! finite-part Mellin transforms and error-term budgets.

pub mod arithmetic;
pub mod budget;
pub mod cli;
pub mod error;
pub mod exact;
pub mod group_spec;
pub mod invariants;
pub mod local_data;
pub mod mellin;
pub mod oracle;
pub mod orbits;
pub mod parabolic;
pub mod quadrature;
pub mod reproduce;
pub mod root_datum;

pub use error::{Error, Result};
