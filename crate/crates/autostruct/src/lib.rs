//! Workbench for automatic structures: regular presentations of
//! first-order structures, a decision procedure for first-order logic with
//! the infinity quantifier, and diagnostics that probe the growth and
//! combinatorics of regular presentations.

pub mod analysis;
pub mod automata;
pub mod ba;
pub mod builtins;
pub mod error;
pub mod logic;
pub mod presentation;
pub mod relations;
pub mod turing;

pub use error::{Error, Result};
