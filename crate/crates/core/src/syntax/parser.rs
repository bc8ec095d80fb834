use std::collections::HashMap;
use std::sync::Arc;

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::ParseError;

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn span(&self) -> SourceSpan {
        self.tokens[self.pos].span.clone()
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError {
            message: format!("expected {expected}, found {}", self.peek()),
            span: self.span(),
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<Token> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            Err(self.error(&tok.to_string()))
        }
    }

    fn ident(&mut self) -> PResult<Ident> {
        match self.peek().clone() {
            Tok::Ident(text) => {
                let span = self.bump().span;
                Ok(Ident { text, span })
            }
            _ => Err(self.error("identifier")),
        }
    }

    fn file(&mut self) -> PResult<Vec<ModuleAst>> {
        let mut modules: Vec<ModuleAst> = Vec::new();
        let mut seen: HashMap<String, SourceSpan> = HashMap::new();
        while *self.peek() != Tok::Eof {
            let m = self.module()?;
            if let Some(first) = seen.get(&m.name.text) {
                return Err(ParseError {
                    message: format!(
                        "duplicate module `{}` (first defined at {first})",
                        m.name.text
                    ),
                    span: m.name.span.clone(),
                });
            }
            seen.insert(m.name.text.clone(), m.name.span.clone());
            modules.push(m);
        }
        Ok(modules)
    }

    fn module(&mut self) -> PResult<ModuleAst> {
        let start = self.expect(Tok::Module)?.span;
        let name = self.ident()?;
        self.expect(Tok::Colon)?;
        let mut decls = Vec::new();
        while matches!(self.peek(), Tok::Var | Tok::Global) {
            decls.push(self.decl()?);
        }
        let mut actions = Vec::new();
        while matches!(self.peek(), Tok::Output | Tok::Input) {
            actions.push(self.action()?);
        }
        if *self.peek() != Tok::Init {
            return Err(self.error("`var`, `global`, `output`, `input` or `init`"));
        }
        self.bump();
        self.expect(Tok::Colon)?;
        let init = self.expr()?;
        Ok(ModuleAst {
            name,
            decls,
            actions,
            init,
            span: start,
        })
    }

    fn decl(&mut self) -> PResult<DeclAst> {
        let span = self.span();
        let global = if *self.peek() == Tok::Global {
            self.bump();
            true
        } else {
            false
        };
        self.expect(Tok::Var)?;
        let name = self.ident()?;
        self.expect(Tok::Colon)?;
        let ty = match self.peek() {
            Tok::Bool => {
                self.bump();
                TypeAst::Bool
            }
            Tok::LBracket => {
                self.bump();
                let lo = self.signed_int()?;
                self.expect(Tok::DotDot)?;
                let hi = self.signed_int()?;
                self.expect(Tok::RBracket)?;
                TypeAst::Range(lo, hi)
            }
            _ => return Err(self.error("`bool` or `[`")),
        };
        Ok(DeclAst {
            name,
            global,
            ty,
            span,
        })
    }

    fn signed_int(&mut self) -> PResult<i64> {
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match *self.peek() {
            Tok::Int(v) => {
                self.bump();
                Ok(if negative { -v } else { v })
            }
            _ => Err(self.error("integer")),
        }
    }

    fn action(&mut self) -> PResult<ActionBlock> {
        let span = self.span();
        let direction = match self.bump().tok {
            Tok::Output => Direction::Output,
            _ => Direction::Input,
        };
        let name = self.ident()?;
        self.expect(Tok::LBrace)?;
        let mut commands = Vec::new();
        while *self.peek() != Tok::RBrace {
            if *self.peek() == Tok::Eof {
                return Err(self.error("`}`"));
            }
            commands.push(self.command()?);
        }
        self.bump();
        Ok(ActionBlock {
            direction,
            name,
            commands,
            span,
        })
    }

    fn command(&mut self) -> PResult<CommandAst> {
        let span = self.span();
        let guard = self.expr()?;
        self.expect(Tok::Arrow)?;
        let mut assigns = Vec::new();
        if *self.peek() != Tok::Semi {
            loop {
                let aspan = self.span();
                let target = self.ident()?;
                self.expect(Tok::Prime)?;
                self.expect(Tok::Assign)?;
                let value = self.expr()?;
                assigns.push(AssignAst {
                    target,
                    value,
                    span: aspan,
                });
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::Semi)?;
        Ok(CommandAst {
            guard,
            assigns,
            span,
        })
    }

    pub(crate) fn expr(&mut self) -> PResult<Expr> {
        self.or_expr()
    }

    fn or_expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.and_expr()?;
        while *self.peek() == Tok::Bar {
            let span = self.bump().span;
            let rhs = self.and_expr()?;
            lhs = binary(BinaryOp::Or, lhs, rhs, span);
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.not_expr()?;
        while *self.peek() == Tok::Amp {
            let span = self.bump().span;
            let rhs = self.not_expr()?;
            lhs = binary(BinaryOp::And, lhs, rhs, span);
        }
        Ok(lhs)
    }

    fn not_expr(&mut self) -> PResult<Expr> {
        if *self.peek() == Tok::Bang {
            let span = self.bump().span;
            let e = self.not_expr()?;
            return Ok(Expr {
                kind: ExprKind::Unary(UnaryOp::Not, Box::new(e)),
                span,
            });
        }
        self.cmp_expr()
    }

    fn cmp_expr(&mut self) -> PResult<Expr> {
        let lhs = self.add_expr()?;
        let op = match self.peek() {
            Tok::Eq => BinaryOp::Eq,
            Tok::Ne => BinaryOp::Ne,
            Tok::Lt => BinaryOp::Lt,
            Tok::Le => BinaryOp::Le,
            Tok::Gt => BinaryOp::Gt,
            Tok::Ge => BinaryOp::Ge,
            _ => return Ok(lhs),
        };
        let span = self.bump().span;
        let rhs = self.add_expr()?;
        if matches!(
            self.peek(),
            Tok::Eq | Tok::Ne | Tok::Lt | Tok::Le | Tok::Gt | Tok::Ge
        ) {
            return Err(ParseError {
                message: "comparisons do not chain; add parentheses".to_string(),
                span: self.span(),
            });
        }
        Ok(binary(op, lhs, rhs, span))
    }

    fn add_expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.mul_expr()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinaryOp::Add,
                Tok::Minus => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            let span = self.bump().span;
            let rhs = self.mul_expr()?;
            lhs = binary(op, lhs, rhs, span);
        }
    }

    fn mul_expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.neg_expr()?;
        while *self.peek() == Tok::Star {
            let span = self.bump().span;
            let rhs = self.neg_expr()?;
            lhs = binary(BinaryOp::Mul, lhs, rhs, span);
        }
        Ok(lhs)
    }

    fn neg_expr(&mut self) -> PResult<Expr> {
        if *self.peek() == Tok::Minus {
            let span = self.bump().span;
            // `-3` is a literal; `-(3)` and `-x` are negations.
            if let Tok::Int(v) = *self.peek() {
                self.bump();
                return Ok(Expr {
                    kind: ExprKind::Int(-v),
                    span,
                });
            }
            let e = self.neg_expr()?;
            return Ok(Expr {
                kind: ExprKind::Unary(UnaryOp::Neg, Box::new(e)),
                span,
            });
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<Expr> {
        let span = self.span();
        let kind = match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                ExprKind::Int(v)
            }
            Tok::True => {
                self.bump();
                ExprKind::Bool(true)
            }
            Tok::False => {
                self.bump();
                ExprKind::Bool(false)
            }
            Tok::Ident(name) => {
                self.bump();
                let primed = if *self.peek() == Tok::Prime {
                    self.bump();
                    true
                } else {
                    false
                };
                ExprKind::Var { name, primed }
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                return Ok(e);
            }
            _ => return Err(self.error("expression")),
        };
        Ok(Expr { kind, span })
    }
}

fn binary(op: BinaryOp, lhs: Expr, rhs: Expr, span: SourceSpan) -> Expr {
    Expr {
        kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)),
        span,
    }
}

fn parser(text: &str, file: &str) -> PResult<Parser> {
    let file: Arc<str> = Arc::from(file);
    Ok(Parser {
        tokens: tokenize(text, &file)?,
        pos: 0,
    })
}

/// Parses a whole `.si` file into its modules.
pub fn parse_file(text: &str, file: &str) -> PResult<Vec<ModuleAst>> {
    parser(text, file)?.file()
}

/// Parses a standalone expression (e.g. an invariant given on the command line).
pub fn parse_expr(text: &str) -> PResult<Expr> {
    let mut p = parser(text, "<expr>")?;
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error("end of expression"));
    }
    Ok(e)
}
