//! Nominal rewriting, unification and narrowing modulo commutativity.

pub mod alpha;
pub mod bundled;
pub mod cli;
pub mod error;
pub mod narrow;
pub mod parse;
pub mod rewrite;
pub mod syntax;
pub mod unify;

pub use error::{Error, Result};
