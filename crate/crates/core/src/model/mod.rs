//! The interface model: local and global variables, actions that may label
//! both input and output guarded commands, and an initial condition.
//!
//! [`validate`] turns a parsed [`ModuleAst`] into an [`Interface`], checking
//! typing and the priming discipline:
//!
//! * output guards read unprimed tracked variables; output commands assign
//!   primed locals and primed tracked globals;
//! * input guards (and right-hand sides) may also read primed globals, the
//!   update proposed by the emitter; input commands assign primed locals only.
//!
//! A variable not assigned by the fired command keeps its value. An action
//! with no `input` block is not listened to at all; an action with an `input`
//! block none of whose commands is enabled rejects the emission.

mod encoding;
mod explicit;
mod symbolic;

use std::collections::{HashMap, HashSet};
use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use crate::syntax::{
    ActionBlock, AssignAst, BinaryOp, CommandAst, DeclAst, Direction, Expr, ExprKind, Ident,
    ModuleAst, SourceSpan, TypeAst, UnaryOp,
};

pub use encoding::{EncodingError, Space, SpaceVar, VarId};
pub use explicit::{
    all_valuations, enumerate_explicit, eval, input_responses, output_successors, state_count,
    ExplicitError, ExplicitGraph, InputRow, Value,
};
pub use symbolic::{
    compile, compile_prefixed, encode_bool, in_accepts, out_moves, MoveError, SymbolicInterface,
};

/// Upper bound on the encoding width of a single variable.
pub const MAX_VAR_BITS: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    Bool,
    Range { lo: i64, hi: i64 },
}

impl Domain {
    pub fn lo(self) -> i64 {
        match self {
            Domain::Bool => 0,
            Domain::Range { lo, .. } => lo,
        }
    }

    pub fn hi(self) -> i64 {
        match self {
            Domain::Bool => 1,
            Domain::Range { hi, .. } => hi,
        }
    }

    pub fn size(self) -> u64 {
        (self.hi() - self.lo()) as u64 + 1
    }

    pub fn contains(self, v: i64) -> bool {
        self.lo() <= v && v <= self.hi()
    }

    pub fn values(self) -> impl Iterator<Item = i64> {
        self.lo()..=self.hi()
    }

    /// Width of the binary encoding: `ceil(log2(size))`.
    pub fn bits(self) -> u32 {
        let n = self.size();
        if n <= 1 {
            0
        } else {
            64 - (n - 1).leading_zeros()
        }
    }

    pub fn is_bool(self) -> bool {
        matches!(self, Domain::Bool)
    }

    pub fn format(self, v: i64) -> String {
        match self {
            Domain::Bool if v == 0 => "false".to_string(),
            Domain::Bool => "true".to_string(),
            Domain::Range { .. } => v.to_string(),
        }
    }

    pub fn literal(self, v: i64) -> Expr {
        match self {
            Domain::Bool => Expr::bool(v != 0),
            Domain::Range { .. } => Expr::int(v),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Bool => f.write_str("bool"),
            Domain::Range { lo, hi } => write!(f, "[{lo}..{hi}]"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scope {
    Local,
    Global,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub domain: Domain,
    pub scope: Scope,
}

impl VarDecl {
    pub fn is_global(&self) -> bool {
        self.scope == Scope::Global
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuardedCommand {
    pub guard: Expr,
    pub assigns: Vec<(String, Expr)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSpec {
    pub name: String,
    /// `None` when the interface never emits the action.
    pub outputs: Option<Vec<GuardedCommand>>,
    /// `None` when the interface does not listen to the action.
    pub inputs: Option<Vec<GuardedCommand>>,
}

impl ActionSpec {
    pub fn commands(&self, direction: Direction) -> Option<&[GuardedCommand]> {
        match direction {
            Direction::Output => self.outputs.as_deref(),
            Direction::Input => self.inputs.as_deref(),
        }
    }
}

/// Local responses of a listener to an emitted action and global update.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputResponse {
    /// The action is not in the input alphabet; the interface ignores it.
    NotListening,
    /// Accepted local successor valuations (locals in declaration order).
    /// Empty means the emission is rejected.
    Responses(Vec<Vec<i64>>),
}

impl InputResponse {
    pub fn rejects(&self) -> bool {
        matches!(self, InputResponse::Responses(r) if r.is_empty())
    }
}

/// A validated interface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interface {
    pub name: String,
    pub vars: Vec<VarDecl>,
    pub actions: IndexMap<String, ActionSpec>,
    pub init: Expr,
}

impl Interface {
    pub fn var(&self, name: &str) -> Option<(usize, &VarDecl)> {
        self.vars.iter().enumerate().find(|(_, v)| v.name == name)
    }

    pub fn locals(&self) -> impl Iterator<Item = &VarDecl> {
        self.vars.iter().filter(|v| !v.is_global())
    }

    pub fn globals(&self) -> impl Iterator<Item = &VarDecl> {
        self.vars.iter().filter(|v| v.is_global())
    }

    pub fn output_alphabet(&self) -> impl Iterator<Item = &str> {
        self.actions
            .values()
            .filter(|a| a.outputs.is_some())
            .map(|a| a.name.as_str())
    }

    pub fn input_alphabet(&self) -> impl Iterator<Item = &str> {
        self.actions
            .values()
            .filter(|a| a.inputs.is_some())
            .map(|a| a.name.as_str())
    }

    pub fn emits(&self, action: &str) -> bool {
        self.actions
            .get(action)
            .is_some_and(|a| a.outputs.is_some())
    }

    pub fn listens(&self, action: &str) -> bool {
        self.actions.get(action).is_some_and(|a| a.inputs.is_some())
    }

    /// Renders a valuation as `name=value` pairs in declaration order.
    pub fn format_state(&self, state: &[i64]) -> String {
        format_valuation(&self.vars, state)
    }

    /// Back to syntax, one block per declared action direction.
    pub fn to_ast(&self) -> ModuleAst {
        let decls = self
            .vars
            .iter()
            .map(|v| DeclAst {
                name: Ident::synthetic(&v.name),
                global: v.is_global(),
                ty: match v.domain {
                    Domain::Bool => TypeAst::Bool,
                    Domain::Range { lo, hi } => TypeAst::Range(lo, hi),
                },
                span: SourceSpan::synthetic(),
            })
            .collect();
        let mut actions = Vec::new();
        for spec in self.actions.values() {
            for direction in [Direction::Output, Direction::Input] {
                if let Some(cmds) = spec.commands(direction) {
                    actions.push(ActionBlock {
                        direction,
                        name: Ident::synthetic(&spec.name),
                        commands: cmds
                            .iter()
                            .map(|c| CommandAst {
                                guard: c.guard.clone(),
                                assigns: c
                                    .assigns
                                    .iter()
                                    .map(|(t, e)| AssignAst {
                                        target: Ident::synthetic(t),
                                        value: e.clone(),
                                        span: SourceSpan::synthetic(),
                                    })
                                    .collect(),
                                span: SourceSpan::synthetic(),
                            })
                            .collect(),
                        span: SourceSpan::synthetic(),
                    });
                }
            }
        }
        ModuleAst {
            name: Ident::synthetic(&self.name),
            decls,
            actions,
            init: self.init.clone(),
            span: SourceSpan::synthetic(),
        }
    }

    pub fn to_source(&self) -> String {
        crate::syntax::pretty_print(&self.to_ast())
    }
}

pub fn format_valuation(vars: &[VarDecl], state: &[i64]) -> String {
    vars.iter()
        .zip(state)
        .map(|(v, &x)| format!("{}={}", v.name, v.domain.format(x)))
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub span: SourceSpan,
}

impl Diagnostic {
    pub fn error(message: impl Into<String>, span: &SourceSpan) -> Self {
        Diagnostic {
            severity: Severity::Error,
            message: message.into(),
            span: span.clone(),
        }
    }

    pub fn warning(message: impl Into<String>, span: &SourceSpan) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            message: message.into(),
            span: span.clone(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}: {level}: {}", self.span, self.message)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{}", .diagnostics.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n"))]
pub struct ValidationError {
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Type {
    Bool,
    Int,
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Type::Bool => "bool",
            Type::Int => "int",
        })
    }
}

/// Which variables an expression may mention, and how.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Reads {
    /// Unprimed tracked variables only.
    Current,
    /// Unprimed tracked variables and primed globals.
    CurrentAndNextGlobals,
}

pub(crate) struct Checker<'a> {
    pub vars: &'a [VarDecl],
    pub diags: Vec<Diagnostic>,
}

impl<'a> Checker<'a> {
    pub fn new(vars: &'a [VarDecl]) -> Self {
        Checker {
            vars,
            diags: Vec::new(),
        }
    }

    fn lookup(&self, name: &str) -> Option<&'a VarDecl> {
        self.vars.iter().find(|v| v.name == name)
    }

    /// Type of `e`, or `None` after recording a diagnostic.
    pub fn check(&mut self, e: &Expr, reads: Reads) -> Option<Type> {
        match &e.kind {
            ExprKind::Bool(_) => Some(Type::Bool),
            ExprKind::Int(_) => Some(Type::Int),
            ExprKind::Var { name, primed } => {
                let Some(decl) = self.lookup(name) else {
                    self.diags.push(Diagnostic::error(
                        format!("unknown variable `{name}`"),
                        &e.span,
                    ));
                    return None;
                };
                if *primed {
                    let allowed = reads == Reads::CurrentAndNextGlobals && decl.is_global();
                    if !allowed {
                        let msg = if reads == Reads::Current {
                            format!("primed variable `{name}'` cannot be read here")
                        } else {
                            format!("only primed globals may be read here, `{name}` is local")
                        };
                        self.diags.push(Diagnostic::error(msg, &e.span));
                        return None;
                    }
                }
                Some(if decl.domain.is_bool() {
                    Type::Bool
                } else {
                    Type::Int
                })
            }
            ExprKind::Unary(op, inner) => {
                let want = match op {
                    UnaryOp::Not => Type::Bool,
                    UnaryOp::Neg => Type::Int,
                };
                let t = self.check(inner, reads)?;
                self.expect(t, want, &e.span)?;
                Some(want)
            }
            ExprKind::Binary(op, l, r) => {
                let lt = self.check(l, reads);
                let rt = self.check(r, reads);
                let (lt, rt) = (lt?, rt?);
                match op {
                    BinaryOp::Or | BinaryOp::And => {
                        self.expect(lt, Type::Bool, &l.span)?;
                        self.expect(rt, Type::Bool, &r.span)?;
                        Some(Type::Bool)
                    }
                    BinaryOp::Eq | BinaryOp::Ne => {
                        if lt != rt {
                            self.diags.push(Diagnostic::error(
                                format!("cannot compare {lt} with {rt}"),
                                &e.span,
                            ));
                            return None;
                        }
                        Some(Type::Bool)
                    }
                    BinaryOp::Lt | BinaryOp::Le | BinaryOp::Gt | BinaryOp::Ge => {
                        self.expect(lt, Type::Int, &l.span)?;
                        self.expect(rt, Type::Int, &r.span)?;
                        Some(Type::Bool)
                    }
                    BinaryOp::Add | BinaryOp::Sub => {
                        self.expect(lt, Type::Int, &l.span)?;
                        self.expect(rt, Type::Int, &r.span)?;
                        Some(Type::Int)
                    }
                    BinaryOp::Mul => {
                        self.expect(lt, Type::Int, &l.span)?;
                        self.expect(rt, Type::Int, &r.span)?;
                        if const_value(l).is_none() && const_value(r).is_none() {
                            self.diags.push(Diagnostic::error(
                                "multiplication needs a constant operand",
                                &e.span,
                            ));
                            return None;
                        }
                        Some(Type::Int)
                    }
                }
            }
        }
    }

    fn expect(&mut self, got: Type, want: Type, span: &SourceSpan) -> Option<()> {
        if got == want {
            Some(())
        } else {
            self.diags.push(Diagnostic::error(
                format!("expected {want} expression, found {got}"),
                span,
            ));
            None
        }
    }
}

/// Value of a variable-free integer expression.
pub(crate) fn const_value(e: &Expr) -> Option<i64> {
    match &e.kind {
        ExprKind::Int(v) => Some(*v),
        ExprKind::Unary(UnaryOp::Neg, inner) => const_value(inner).map(i64::saturating_neg),
        ExprKind::Binary(op, l, r) => {
            let (a, b) = (const_value(l)?, const_value(r)?);
            match op {
                BinaryOp::Add => Some(a.saturating_add(b)),
                BinaryOp::Sub => Some(a.saturating_sub(b)),
                BinaryOp::Mul => Some(a.saturating_mul(b)),
                _ => None,
            }
        }
        _ => None,
    }
}

fn check_command(
    checker: &mut Checker<'_>,
    cmd: &CommandAst,
    direction: Direction,
) -> Option<GuardedCommand> {
    let reads = match direction {
        Direction::Output => Reads::Current,
        Direction::Input => Reads::CurrentAndNextGlobals,
    };
    let before = checker.diags.len();
    if let Some(t) = checker.check(&cmd.guard, reads) {
        if t != Type::Bool {
            checker.diags.push(Diagnostic::error(
                format!("guard: expected bool expression, found {t}"),
                &cmd.guard.span,
            ));
        }
    }
    let mut assigned: HashSet<&str> = HashSet::new();
    for a in &cmd.assigns {
        let name = a.target.text.as_str();
        let Some(decl) = checker.lookup(name) else {
            checker.diags.push(Diagnostic::error(
                format!("assignment to unknown variable `{name}`"),
                &a.target.span,
            ));
            continue;
        };
        if !assigned.insert(name) {
            checker.diags.push(Diagnostic::error(
                format!("variable `{name}` is assigned twice in one command"),
                &a.target.span,
            ));
        }
        if direction == Direction::Input && decl.is_global() {
            checker.diags.push(Diagnostic::error(
                format!("input commands cannot assign global `{name}`"),
                &a.target.span,
            ));
        }
        let want = if decl.domain.is_bool() {
            Type::Bool
        } else {
            Type::Int
        };
        if let Some(t) = checker.check(&a.value, reads) {
            if t != want {
                checker.diags.push(Diagnostic::error(
                    format!(
                        "cannot assign a {t} value to `{name}` of type {}",
                        decl.domain
                    ),
                    &a.value.span,
                ));
            } else if let Some(v) = const_value(&a.value) {
                if !decl.domain.contains(v) {
                    checker.diags.push(Diagnostic::error(
                        format!(
                            "constant {v} is outside the domain {} of `{name}`",
                            decl.domain
                        ),
                        &a.value.span,
                    ));
                }
            }
        }
    }
    if checker.diags.len() > before {
        return None;
    }
    Some(GuardedCommand {
        guard: cmd.guard.clone(),
        assigns: cmd
            .assigns
            .iter()
            .map(|a| (a.target.text.clone(), a.value.clone()))
            .collect(),
    })
}

/// Checks that `e` is a boolean expression over the unprimed variables of
/// `iface`, as invariants and state predicates must be.
pub fn check_predicate(iface: &Interface, e: &Expr) -> Result<(), ValidationError> {
    let mut checker = Checker::new(&iface.vars);
    match checker.check(e, Reads::Current) {
        Some(Type::Bool) => Ok(()),
        Some(t) => Err(ValidationError {
            diagnostics: vec![Diagnostic::error(
                format!("expected bool expression, found {t}"),
                &e.span,
            )],
        }),
        None => Err(ValidationError {
            diagnostics: checker.diags,
        }),
    }
}

/// Checks a parsed module and builds the corresponding [`Interface`].
pub fn validate(ast: &ModuleAst) -> Result<Interface, ValidationError> {
    let mut diags = Vec::new();
    let mut vars: Vec<VarDecl> = Vec::new();
    let mut seen: HashMap<&str, &SourceSpan> = HashMap::new();
    for d in &ast.decls {
        if let Some(first) = seen.get(d.name.text.as_str()) {
            diags.push(Diagnostic::error(
                format!("variable `{}` already declared at {first}", d.name.text),
                &d.name.span,
            ));
            continue;
        }
        seen.insert(&d.name.text, &d.name.span);
        let domain = match d.ty {
            TypeAst::Bool => Domain::Bool,
            TypeAst::Range(lo, hi) => {
                if lo > hi {
                    diags.push(Diagnostic::error(
                        format!("empty domain [{lo}..{hi}]"),
                        &d.span,
                    ));
                    continue;
                }
                let domain = Domain::Range { lo, hi };
                if hi.checked_sub(lo).is_none() || domain.bits() > MAX_VAR_BITS {
                    diags.push(Diagnostic::error(
                        format!("domain [{lo}..{hi}] is too large"),
                        &d.span,
                    ));
                    continue;
                }
                domain
            }
        };
        vars.push(VarDecl {
            name: d.name.text.clone(),
            domain,
            scope: if d.global {
                Scope::Global
            } else {
                Scope::Local
            },
        });
    }

    let mut checker = Checker::new(&vars);
    let mut actions: IndexMap<String, ActionSpec> = IndexMap::new();
    for block in &ast.actions {
        let spec = actions
            .entry(block.name.text.clone())
            .or_insert_with(|| ActionSpec {
                name: block.name.text.clone(),
                outputs: None,
                inputs: None,
            });
        let slot = match block.direction {
            Direction::Output => &mut spec.outputs,
            Direction::Input => &mut spec.inputs,
        };
        let list = slot.get_or_insert_with(Vec::new);
        for cmd in &block.commands {
            if let Some(c) = check_command(&mut checker, cmd, block.direction) {
                list.push(c);
            }
        }
    }

    let init_ok = match checker.check(&ast.init, Reads::Current) {
        Some(Type::Bool) => true,
        Some(t) => {
            checker.diags.push(Diagnostic::error(
                format!("initial condition must be boolean, found {t}"),
                &ast.init.span,
            ));
            false
        }
        None => false,
    };
    diags.extend(checker.diags);

    if diags.is_empty() && init_ok {
        let mut space = Space::new();
        let ids: Vec<VarId> = vars
            .iter()
            .map(|v| space.declare(&v.name, v.domain).expect("fresh space"))
            .collect();
        let resolve = |name: &str| vars.iter().position(|v| v.name == name).map(|i| ids[i]);
        let init = encode_bool(&mut space, &ast.init, &resolve).expect("type-checked");
        let dom = space.domain_all(&ids, false);
        if space.manager_mut().and(init, dom).is_false() {
            diags.push(Diagnostic::error(
                "initial condition unsatisfiable",
                &ast.init.span,
            ));
        }
    }

    if !diags.is_empty() {
        return Err(ValidationError { diagnostics: diags });
    }
    Ok(Interface {
        name: ast.name.text.clone(),
        vars,
        actions,
        init: ast.init.clone(),
    })
}
