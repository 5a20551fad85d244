//! Lexing, parsing and lossless printing of Little programs.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod path;
pub mod print;

use thiserror::Error;

pub use ast::*;
pub use lexer::is_valid_ident;
pub use parser::{parse, parse_def_fragment, parse_exp_fragment, parse_pat_fragment};
pub use path::{node_at, path_of, walk, IdError, ItemKind, ItemPath, NodeRef, Step};
pub use print::{canonical, canonical_exp, canonical_pat, print, relayout};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}
