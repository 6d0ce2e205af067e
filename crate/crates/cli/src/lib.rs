//! Command-line front end for `mqalg`: the expression parser, JSON ideal
//! files and the `mq` subcommands.
//!
//! [`run_command`] is the whole binary as a function, returning the exit
//! code and both output streams, so it can be driven from tests.

pub mod commands;
pub mod ideal;
pub mod parse;

pub use commands::{run_command, run_command_with_env, CommandOutput, EXIT_FALSE, EXIT_LIMIT, EXIT_OK, EXIT_USAGE};
pub use ideal::IdealFile;
pub use parse::{eval, format_poly, parse_ast, parse_poly, ExprAst, ParseError};
