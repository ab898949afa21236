//! Support code for the `starprod` command-line tool: output formatting and
//! the formula-versus-enumeration checks behind `starprod oracle`.

pub mod checks;
pub mod output;
