//! Coalgebras with internal moves, treated as coalgebras over monadic types.
//!
//! The crate computes saturations, strong and weak bisimilarity, and weak
//! trace semantics for finite labelled transition systems and ε-automata,
//! and ships a seeded property harness that checks the algebraic laws
//! relating them.

pub mod equivalence;
pub mod error;
pub mod harness;
pub mod io;
pub mod kernel;
pub mod reglang;
pub mod saturation;
pub mod trace;

pub use error::{Error, Result};
