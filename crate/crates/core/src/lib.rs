//! Decision procedure for finite systems of equations and inequations with
//! rational constraints in free and virtually free groups.
//!
//! The pipeline normalises a problem into triangular twisted equations over a
//! free group, compiles those into band complexes carrying rational
//! constraints in standard form (a single finite monoid), and then explores a
//! rooted tree of prelaminations. Each prelamination is either extended, or
//! rejected with a machine-checkable certificate, or yields an explicit
//! solution. Searches are budgeted; a `BudgetExhausted` verdict is reported
//! honestly instead of an unbounded run.

pub mod automaton;
pub mod band;
pub mod bulitko;
pub mod error;
pub mod measure;
pub mod monoid;
pub mod words;

pub use automaton::Automaton;
pub use error::Error;
pub use words::{InvolutiveAlphabet, Letter, SignedPermutation, Word};
