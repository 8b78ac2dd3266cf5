//! Parsers and printers behind the `corechor` command-line tool.

pub mod lexer;
pub mod prf;
pub mod program;

pub use lexer::{ParseError, Pos};
pub use prf::parse_prf;
pub use program::{parse_choreography, parse_program, parse_state, print_state};
