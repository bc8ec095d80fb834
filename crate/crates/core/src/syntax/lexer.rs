use std::fmt;
use std::sync::Arc;

use super::ast::SourceSpan;
use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(i64),
    Module,
    Var,
    Global,
    Bool,
    Output,
    Input,
    Init,
    True,
    False,
    Colon,
    DotDot,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Semi,
    Prime,
    Assign,
    Arrow,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Amp,
    Bar,
    Bang,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(name) => return write!(f, "identifier `{name}`"),
            Tok::Int(v) => return write!(f, "integer `{v}`"),
            Tok::Module => "`module`",
            Tok::Var => "`var`",
            Tok::Global => "`global`",
            Tok::Bool => "`bool`",
            Tok::Output => "`output`",
            Tok::Input => "`input`",
            Tok::Init => "`init`",
            Tok::True => "`true`",
            Tok::False => "`false`",
            Tok::Colon => "`:`",
            Tok::DotDot => "`..`",
            Tok::LBracket => "`[`",
            Tok::RBracket => "`]`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::Comma => "`,`",
            Tok::Semi => "`;`",
            Tok::Prime => "`'`",
            Tok::Assign => "`:=`",
            Tok::Arrow => "`==>`",
            Tok::Eq => "`=`",
            Tok::Ne => "`!=`",
            Tok::Lt => "`<`",
            Tok::Le => "`<=`",
            Tok::Gt => "`>`",
            Tok::Ge => "`>=`",
            Tok::Plus => "`+`",
            Tok::Minus => "`-`",
            Tok::Star => "`*`",
            Tok::Amp => "`&`",
            Tok::Bar => "`|`",
            Tok::Bang => "`!`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

pub(crate) fn tokenize(text: &str, file: &Arc<str>) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
    let span = |line, column, length| SourceSpan {
        file: file.clone(),
        line,
        column,
        length,
    };

    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start_col = col;
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let len = (i - start) as u32;
            col += len;
            let tok = match word.as_str() {
                "module" => Tok::Module,
                "var" => Tok::Var,
                "global" => Tok::Global,
                "bool" => Tok::Bool,
                "output" => Tok::Output,
                "input" => Tok::Input,
                "init" => Tok::Init,
                "true" => Tok::True,
                "false" => Tok::False,
                _ => Tok::Ident(word),
            };
            tokens.push(Token {
                tok,
                span: span(line, start_col, len),
            });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let len = (i - start) as u32;
            col += len;
            let value = digits.parse::<i64>().map_err(|_| ParseError {
                message: format!("integer literal `{digits}` is out of range"),
                span: span(line, start_col, len),
            })?;
            tokens.push(Token {
                tok: Tok::Int(value),
                span: span(line, start_col, len),
            });
            continue;
        }
        let next = chars.get(i + 1).copied();
        let next2 = chars.get(i + 2).copied();
        let (tok, len) = match (c, next, next2) {
            ('=', Some('='), Some('>')) => (Tok::Arrow, 3),
            (':', Some('='), _) => (Tok::Assign, 2),
            ('.', Some('.'), _) => (Tok::DotDot, 2),
            ('!', Some('='), _) => (Tok::Ne, 2),
            ('<', Some('='), _) => (Tok::Le, 2),
            ('>', Some('='), _) => (Tok::Ge, 2),
            (':', _, _) => (Tok::Colon, 1),
            ('[', _, _) => (Tok::LBracket, 1),
            (']', _, _) => (Tok::RBracket, 1),
            ('{', _, _) => (Tok::LBrace, 1),
            ('}', _, _) => (Tok::RBrace, 1),
            ('(', _, _) => (Tok::LParen, 1),
            (')', _, _) => (Tok::RParen, 1),
            (',', _, _) => (Tok::Comma, 1),
            (';', _, _) => (Tok::Semi, 1),
            ('\'', _, _) => (Tok::Prime, 1),
            ('=', _, _) => (Tok::Eq, 1),
            ('<', _, _) => (Tok::Lt, 1),
            ('>', _, _) => (Tok::Gt, 1),
            ('+', _, _) => (Tok::Plus, 1),
            ('-', _, _) => (Tok::Minus, 1),
            ('*', _, _) => (Tok::Star, 1),
            ('&', _, _) => (Tok::Amp, 1),
            ('|', _, _) => (Tok::Bar, 1),
            ('!', _, _) => (Tok::Bang, 1),
            _ => {
                return Err(ParseError {
                    message: format!("unexpected character `{c}`"),
                    span: span(line, start_col, 1),
                })
            }
        };
        tokens.push(Token {
            tok,
            span: span(line, start_col, len),
        });
        i += len as usize;
        col += len;
    }
    tokens.push(Token {
        tok: Tok::Eof,
        span: span(line, col, 0),
    });
    Ok(tokens)
}
