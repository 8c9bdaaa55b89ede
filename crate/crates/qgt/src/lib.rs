//! Explicit construction of quantum Gelfand-Tsetlin tableau modules.
//!
//! The crate builds modules over the quantum enveloping algebra of `gl_n`
//! from a relation set and a seed tableau, computes the generator and
//! Gelfand-Tsetlin subalgebra actions in exact arithmetic (or at sampled
//! numeric points for generic entries), and verifies the defining
//! relations, eigenvalue separation, and irreducibility criteria.

pub mod error;
pub mod gtmodule;
pub mod poly;
pub mod qcoeff;
pub mod relations;
pub mod tableaux;
pub mod verify;

pub use error::{QgtError, Result};
