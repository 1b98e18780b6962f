//! The `surcalc` expression language: parsing, evaluation, rendering and REPL state.

pub mod eval;
pub mod selftest;
pub mod session;
pub mod syntax;

pub use eval::{evaluate, render, run, CliError, Format};
pub use session::{Reply, Session};
pub use syntax::{parse, Expr, ParseError};
