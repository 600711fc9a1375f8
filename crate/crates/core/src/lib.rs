//! Gap-preserving reductions from Label Cover through SSAT to SIS, and from
//! SIS on to Nearest Codeword and Learning Halfspaces, with exact
//! brute-force oracles for every problem on the way.
//!
//! Everything is exact: integers are `i64`, rationals are big rationals, and
//! every iteration order is index order, so all results are reproducible.

pub mod error;
pub mod fixtures;
pub mod genlab;
pub mod instances;
pub mod io;
pub mod numeric;
pub mod oracles;
pub mod pipeline;
pub mod reductions;
pub mod soundness;
pub mod superassign;

pub use error::{Error, Result};
