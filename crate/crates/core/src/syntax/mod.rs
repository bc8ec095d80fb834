//! Front end for the `.si` guarded-command interface language.
//!
//! ```text
//! file        := module* ;
//! module      := "module" IDENT ":" decl* action* init ;
//! decl        := ("var" | "global" "var") IDENT ":" type ;
//! type        := "bool" | "[" INT ".." INT "]" ;
//! action      := ("output" | "input") IDENT "{" command* "}" ;
//! command     := expr "==>" assign_list ";" ;
//! assign_list := /*empty*/ | assign ("," assign)* ;
//! assign      := IDENT "'" ":=" expr ;
//! init        := "init" ":" expr ;
//! ```
//!
//! Expressions, loosest first: `|`, `&`, prefix `!`, the comparisons
//! (`=`, `!=`, `<`, `<=`, `>`, `>=`, non-associative), `+` and `-`, `*`,
//! prefix `-`. Atoms are integer literals, `true`, `false`, `x`, `x'` and
//! parenthesized expressions. `//` starts a comment.

mod ast;
mod lexer;
mod parser;
mod printer;

use thiserror::Error;

pub use ast::*;
pub use parser::{parse_expr, parse_file};
pub use printer::{expr_to_string, pretty_print, pretty_print_all};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub message: String,
    pub span: SourceSpan,
}

/// Parses `.si` text that did not come from a named file.
pub fn parse(text: &str) -> Result<Vec<ModuleAst>, ParseError> {
    parse_file(text, "<input>")
}
