//! Hermite expansions, Ornstein-Uhlenbeck type semigroups for the inverse
//! Gaussian measure, and numerical tools for their Littlewood-Paley g-functions.

#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod bounds;
pub mod corpus;
pub mod error;
pub mod gfunctions;
pub mod kernels;
pub mod oracles;
pub mod quadrature;
pub mod regions;
pub mod special;
pub mod spectral;
pub mod weak;

pub use error::{Error, Result};
pub use special::MultiIndex;
