//! Library side of the `qball` binary: expression parsing and suite running.

pub mod parse;
pub mod run;

pub use parse::{parse_expr, render, AlgebraTag, ParseError};
