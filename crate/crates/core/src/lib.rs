//! Finite models of descent for sheaves, stacks and comodules.

pub mod cat;
pub mod descent;
pub mod error;
pub mod fixtures;
pub mod hopf;
pub mod limits;
pub mod pshgrpd;
pub mod search;
pub mod simplicial;
pub mod sites;
pub mod slice;

pub use error::{Error, Result};
pub use limits::Limits;
