//! Command-line front end: problem files in, traces and domains out.

mod parse;
mod run;

pub use parse::{Directive, ParseError, ParseErrorKind, ProblemFile, SetRelation, SourceSpec};
pub use run::{build, run, solve, Built, Report, RunOptions};
