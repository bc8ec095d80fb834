use std::fmt;
use std::sync::Arc;

/// Location of a token or syntax node. Lines and columns start at 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub file: Arc<str>,
    pub line: u32,
    pub column: u32,
    pub length: u32,
}

impl SourceSpan {
    /// Span attached to nodes that were built programmatically.
    pub fn synthetic() -> Self {
        SourceSpan {
            file: Arc::from("<generated>"),
            line: 1,
            column: 1,
            length: 0,
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ident {
    pub text: String,
    pub span: SourceSpan,
}

impl Ident {
    pub fn synthetic(text: impl Into<String>) -> Self {
        Ident {
            text: text.into(),
            span: SourceSpan::synthetic(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeAst {
    Bool,
    Range(i64, i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeclAst {
    pub name: Ident,
    pub global: bool,
    pub ty: TypeAst,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Output,
    Input,
}

impl Direction {
    pub fn keyword(self) -> &'static str {
        match self {
            Direction::Output => "output",
            Direction::Input => "input",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignAst {
    pub target: Ident,
    pub value: Expr,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandAst {
    pub guard: Expr,
    pub assigns: Vec<AssignAst>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionBlock {
    pub direction: Direction,
    pub name: Ident,
    pub commands: Vec<CommandAst>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleAst {
    pub name: Ident,
    pub decls: Vec<DeclAst>,
    pub actions: Vec<ActionBlock>,
    pub init: Expr,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Not,
    Neg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Or,
    And,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Add,
    Sub,
    Mul,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Or => "|",
            BinaryOp::And => "&",
            BinaryOp::Eq => "=",
            BinaryOp::Ne => "!=",
            BinaryOp::Lt => "<",
            BinaryOp::Le => "<=",
            BinaryOp::Gt => ">",
            BinaryOp::Ge => ">=",
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
        }
    }

    pub fn is_comparison(self) -> bool {
        matches!(
            self,
            BinaryOp::Eq | BinaryOp::Ne | BinaryOp::Lt | BinaryOp::Le | BinaryOp::Gt | BinaryOp::Ge
        )
    }

    /// Binding strength; larger binds tighter.
    pub(crate) fn precedence(self) -> u8 {
        match self {
            BinaryOp::Or => 1,
            BinaryOp::And => 2,
            _ if self.is_comparison() => 4,
            BinaryOp::Add | BinaryOp::Sub => 5,
            _ => 6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Bool(bool),
    Int(i64),
    Var { name: String, primed: bool },
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: SourceSpan,
}

impl Expr {
    pub fn new(kind: ExprKind) -> Self {
        Expr {
            kind,
            span: SourceSpan::synthetic(),
        }
    }

    pub fn bool(value: bool) -> Self {
        Expr::new(ExprKind::Bool(value))
    }

    pub fn int(value: i64) -> Self {
        Expr::new(ExprKind::Int(value))
    }

    pub fn var(name: impl Into<String>, primed: bool) -> Self {
        Expr::new(ExprKind::Var {
            name: name.into(),
            primed,
        })
    }

    pub fn unary(op: UnaryOp, e: Expr) -> Self {
        Expr::new(ExprKind::Unary(op, Box::new(e)))
    }

    pub fn binary(op: BinaryOp, l: Expr, r: Expr) -> Self {
        Expr::new(ExprKind::Binary(op, Box::new(l), Box::new(r)))
    }

    /// Left-folded conjunction; `true` when empty.
    pub fn conjunction(parts: impl IntoIterator<Item = Expr>) -> Self {
        parts
            .into_iter()
            .reduce(|a, b| Expr::binary(BinaryOp::And, a, b))
            .unwrap_or_else(|| Expr::bool(true))
    }

    /// Left-folded disjunction; `false` when empty.
    pub fn disjunction(parts: impl IntoIterator<Item = Expr>) -> Self {
        parts
            .into_iter()
            .reduce(|a, b| Expr::binary(BinaryOp::Or, a, b))
            .unwrap_or_else(|| Expr::bool(false))
    }

    /// Visits every variable reference with its span.
    pub fn for_each_var(&self, f: &mut impl FnMut(&str, bool, &SourceSpan)) {
        match &self.kind {
            ExprKind::Bool(_) | ExprKind::Int(_) => {}
            ExprKind::Var { name, primed } => f(name, *primed, &self.span),
            ExprKind::Unary(_, e) => e.for_each_var(f),
            ExprKind::Binary(_, l, r) => {
                l.for_each_var(f);
                r.for_each_var(f);
            }
        }
    }
}

/// Resets every span so that ASTs can be compared structurally.
pub trait EraseSpans {
    fn erase_spans(&mut self);
}

impl EraseSpans for SourceSpan {
    fn erase_spans(&mut self) {
        *self = SourceSpan::synthetic();
    }
}

impl EraseSpans for Ident {
    fn erase_spans(&mut self) {
        self.span.erase_spans();
    }
}

impl EraseSpans for Expr {
    fn erase_spans(&mut self) {
        self.span.erase_spans();
        match &mut self.kind {
            ExprKind::Unary(_, e) => e.erase_spans(),
            ExprKind::Binary(_, l, r) => {
                l.erase_spans();
                r.erase_spans();
            }
            _ => {}
        }
    }
}

impl EraseSpans for ModuleAst {
    fn erase_spans(&mut self) {
        self.span.erase_spans();
        self.name.erase_spans();
        for d in &mut self.decls {
            d.span.erase_spans();
            d.name.erase_spans();
        }
        for a in &mut self.actions {
            a.span.erase_spans();
            a.name.erase_spans();
            for c in &mut a.commands {
                c.span.erase_spans();
                c.guard.erase_spans();
                for asg in &mut c.assigns {
                    asg.span.erase_spans();
                    asg.target.erase_spans();
                    asg.value.erase_spans();
                }
            }
        }
        self.init.erase_spans();
    }
}

impl ModuleAst {
    /// Equality ignoring source positions.
    pub fn same_structure(&self, other: &ModuleAst) -> bool {
        let (mut a, mut b) = (self.clone(), other.clone());
        a.erase_spans();
        b.erase_spans();
        a == b
    }
}
