//! Compilation of interfaces to transition predicates.

use std::collections::BTreeMap;

use indexmap::IndexMap;
use thiserror::Error;

use super::encoding::{EncodingError, Space, VarId};
use super::{Domain, GuardedCommand, InputResponse, Interface, VarDecl};
use crate::kernel::Bdd;
use crate::syntax::{BinaryOp, Direction, Expr, ExprKind, UnaryOp};

/// Value of an expression as a function of the encoded variables.
enum Term {
    Bool(Bdd),
    /// Disjoint `(value, condition)` cases.
    Int(Vec<(i64, Bdd)>),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EncodeError {
    #[error("unknown variable `{0}`")]
    Unknown(String),
    #[error("ill-typed expression")]
    IllTyped,
}

struct Encoder<'s, 'r> {
    space: &'s mut Space,
    resolve: &'r dyn Fn(&str) -> Option<VarId>,
}

impl Encoder<'_, '_> {
    fn term(&mut self, e: &Expr) -> Result<Term, EncodeError> {
        Ok(match &e.kind {
            ExprKind::Bool(b) => Term::Bool(self.space.manager().constant(*b)),
            ExprKind::Int(v) => Term::Int(vec![(*v, self.space.manager().one())]),
            ExprKind::Var { name, primed } => {
                let id = (self.resolve)(name).ok_or_else(|| EncodeError::Unknown(name.clone()))?;
                if self.space.var(id).domain.is_bool() {
                    Term::Bool(self.space.value_is(id, *primed, 1))
                } else {
                    Term::Int(self.space.cases(id, *primed))
                }
            }
            ExprKind::Unary(UnaryOp::Not, inner) => {
                let b = self.boolean(inner)?;
                Term::Bool(self.space.manager_mut().not(b))
            }
            ExprKind::Unary(UnaryOp::Neg, inner) => {
                let cases = self.int(inner)?;
                Term::Int(
                    cases
                        .into_iter()
                        .map(|(v, c)| (v.saturating_neg(), c))
                        .collect(),
                )
            }
            ExprKind::Binary(op, l, r) => match op {
                BinaryOp::And | BinaryOp::Or => {
                    let a = self.boolean(l)?;
                    let b = self.boolean(r)?;
                    let m = self.space.manager_mut();
                    Term::Bool(if *op == BinaryOp::And {
                        m.and(a, b)
                    } else {
                        m.or(a, b)
                    })
                }
                BinaryOp::Eq | BinaryOp::Ne => {
                    let eq = match (self.term(l)?, self.term(r)?) {
                        (Term::Bool(a), Term::Bool(b)) => self.space.manager_mut().iff(a, b),
                        (Term::Int(a), Term::Int(b)) => self.relate(&a, &b, |x, y| x == y),
                        _ => return Err(EncodeError::IllTyped),
                    };
                    Term::Bool(if *op == BinaryOp::Eq {
                        eq
                    } else {
                        self.space.manager_mut().not(eq)
                    })
                }
                BinaryOp::Lt | BinaryOp::Le | BinaryOp::Gt | BinaryOp::Ge => {
                    let a = self.int(l)?;
                    let b = self.int(r)?;
                    let rel: fn(i64, i64) -> bool = match op {
                        BinaryOp::Lt => |x, y| x < y,
                        BinaryOp::Le => |x, y| x <= y,
                        BinaryOp::Gt => |x, y| x > y,
                        _ => |x, y| x >= y,
                    };
                    Term::Bool(self.relate(&a, &b, rel))
                }
                BinaryOp::Add | BinaryOp::Sub | BinaryOp::Mul => {
                    let a = self.int(l)?;
                    let b = self.int(r)?;
                    let f: fn(i64, i64) -> i64 = match op {
                        BinaryOp::Add => i64::saturating_add,
                        BinaryOp::Sub => i64::saturating_sub,
                        _ => i64::saturating_mul,
                    };
                    Term::Int(self.combine(&a, &b, f))
                }
            },
        })
    }

    fn boolean(&mut self, e: &Expr) -> Result<Bdd, EncodeError> {
        match self.term(e)? {
            Term::Bool(b) => Ok(b),
            Term::Int(_) => Err(EncodeError::IllTyped),
        }
    }

    fn int(&mut self, e: &Expr) -> Result<Vec<(i64, Bdd)>, EncodeError> {
        match self.term(e)? {
            Term::Int(c) => Ok(c),
            Term::Bool(_) => Err(EncodeError::IllTyped),
        }
    }

    fn relate(
        &mut self,
        a: &[(i64, Bdd)],
        b: &[(i64, Bdd)],
        rel: impl Fn(i64, i64) -> bool,
    ) -> Bdd {
        let m = self.space.manager_mut();
        let mut acc = m.zero();
        for &(x, cx) in a {
            for &(y, cy) in b {
                if rel(x, y) {
                    let both = m.and(cx, cy);
                    acc = m.or(acc, both);
                }
            }
        }
        acc
    }

    fn combine(
        &mut self,
        a: &[(i64, Bdd)],
        b: &[(i64, Bdd)],
        f: fn(i64, i64) -> i64,
    ) -> Vec<(i64, Bdd)> {
        let m = self.space.manager_mut();
        let mut merged: BTreeMap<i64, Bdd> = BTreeMap::new();
        for &(x, cx) in a {
            for &(y, cy) in b {
                let c = m.and(cx, cy);
                if c.is_false() {
                    continue;
                }
                let v = f(x, y);
                let prev = merged.get(&v).copied().unwrap_or_else(|| m.zero());
                merged.insert(v, m.or(prev, c));
            }
        }
        merged.into_iter().collect()
    }

    /// `target' = value`, false wherever the value leaves the target's domain.
    fn assignment(&mut self, target: VarId, value: &Expr) -> Result<Bdd, EncodeError> {
        match self.term(value)? {
            Term::Bool(b) => {
                let t = self.space.value_is(target, true, 1);
                Ok(self.space.manager_mut().iff(t, b))
            }
            Term::Int(cases) => {
                let mut acc = self.space.manager().zero();
                for (v, c) in cases {
                    let t = self.space.value_is(target, true, v);
                    let m = self.space.manager_mut();
                    let both = m.and(c, t);
                    acc = m.or(acc, both);
                }
                Ok(acc)
            }
        }
    }
}

/// Encodes a boolean expression over variables found through `resolve`.
pub fn encode_bool(
    space: &mut Space,
    e: &Expr,
    resolve: &dyn Fn(&str) -> Option<VarId>,
) -> Result<Bdd, EncodeError> {
    Encoder { space, resolve }.boolean(e)
}

/// An interface compiled into a [`Space`].
#[derive(Debug, Clone)]
pub struct SymbolicInterface {
    pub name: String,
    pub vars: Vec<VarDecl>,
    /// Space variable of each entry of `vars`.
    pub ids: Vec<VarId>,
    /// Output transition predicate per emitted action.
    pub outputs: IndexMap<String, Bdd>,
    /// Input acceptance/response predicate per listened action.
    pub inputs: IndexMap<String, Bdd>,
    /// Per-command predicates, in declaration order.
    pub output_commands: IndexMap<String, Vec<Bdd>>,
    pub input_commands: IndexMap<String, Vec<Bdd>>,
    pub init: Bdd,
    /// Domain constraint on the unprimed copy.
    pub state_domain: Bdd,
    /// Domain constraint on both copies.
    pub domain: Bdd,
}

impl SymbolicInterface {
    pub fn local_ids(&self) -> Vec<VarId> {
        self.select(false)
    }

    pub fn global_ids(&self) -> Vec<VarId> {
        self.select(true)
    }

    fn select(&self, global: bool) -> Vec<VarId> {
        self.vars
            .iter()
            .zip(&self.ids)
            .filter(|(v, _)| v.is_global() == global)
            .map(|(_, &id)| id)
            .collect()
    }

    pub fn id_of(&self, name: &str) -> Option<VarId> {
        self.vars
            .iter()
            .position(|v| v.name == name)
            .map(|i| self.ids[i])
    }
}

struct CommandContext<'a> {
    lookup: &'a dyn Fn(&str) -> Option<VarId>,
    ids: &'a [VarId],
    locals: &'a [VarId],
    domain: Bdd,
}

impl CommandContext<'_> {
    /// guard, assignments, frame of the unassigned framed variables, domain.
    fn relation(&self, space: &mut Space, cmd: &GuardedCommand, direction: Direction) -> Bdd {
        let mut enc = Encoder {
            space: &mut *space,
            resolve: self.lookup,
        };
        let mut acc = enc.boolean(&cmd.guard).expect("validated guard");
        let mut assigned = Vec::new();
        for (target, value) in &cmd.assigns {
            let id = (self.lookup)(target).expect("validated target");
            assigned.push(id);
            let a = enc.assignment(id, value).expect("validated assignment");
            acc = enc.space.manager_mut().and(acc, a);
        }
        // Inputs never write globals, so only locals are framed there.
        let framed = match direction {
            Direction::Output => self.ids,
            Direction::Input => self.locals,
        };
        let unassigned: Vec<VarId> = framed
            .iter()
            .copied()
            .filter(|id| !assigned.contains(id))
            .collect();
        let frame = space.frame_all(&unassigned);
        let m = space.manager_mut();
        let acc = m.and(acc, frame);
        m.and(acc, self.domain)
    }
}

/// Compiles `iface`, keying every variable by its own name.
pub fn compile(iface: &Interface, space: &mut Space) -> Result<SymbolicInterface, EncodingError> {
    compile_prefixed(iface, space, "")
}

/// Compiles `iface`, keying locals as `prefix + name` so that several
/// interfaces with overlapping local names can share one space. Globals are
/// always keyed by their plain name.
pub fn compile_prefixed(
    iface: &Interface,
    space: &mut Space,
    prefix: &str,
) -> Result<SymbolicInterface, EncodingError> {
    let mut ids = Vec::with_capacity(iface.vars.len());
    for v in &iface.vars {
        let key = if v.is_global() {
            v.name.clone()
        } else {
            format!("{prefix}{}", v.name)
        };
        ids.push(space.declare(&key, v.domain)?);
    }
    let lookup = |name: &str| {
        iface
            .vars
            .iter()
            .position(|v| v.name == name)
            .map(|i| ids[i])
    };
    let locals: Vec<VarId> = iface
        .vars
        .iter()
        .zip(&ids)
        .filter(|(v, _)| !v.is_global())
        .map(|(_, &id)| id)
        .collect();
    let state_domain = space.domain_all(&ids, false);
    let domain = space.domain_both(&ids);

    let ctx = CommandContext {
        lookup: &lookup,
        ids: &ids,
        locals: &locals,
        domain,
    };

    let mut outputs = IndexMap::new();
    let mut inputs = IndexMap::new();
    let mut output_commands = IndexMap::new();
    let mut input_commands = IndexMap::new();
    for spec in iface.actions.values() {
        for direction in [Direction::Output, Direction::Input] {
            let Some(cmds) = spec.commands(direction) else {
                continue;
            };
            let per: Vec<Bdd> = cmds
                .iter()
                .map(|c| ctx.relation(space, c, direction))
                .collect();
            let rel = space.manager_mut().or_all(per.iter().copied());
            let (rels, per_cmd) = match direction {
                Direction::Output => (&mut outputs, &mut output_commands),
                Direction::Input => (&mut inputs, &mut input_commands),
            };
            rels.insert(spec.name.clone(), rel);
            per_cmd.insert(spec.name.clone(), per);
        }
    }
    let init = encode_bool(space, &iface.init, &lookup).expect("validated init");
    let init = space.manager_mut().and(init, state_domain);

    Ok(SymbolicInterface {
        name: iface.name.clone(),
        vars: iface.vars.clone(),
        ids,
        outputs,
        inputs,
        output_commands,
        input_commands,
        init,
        state_domain,
        domain,
    })
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MoveError {
    #[error("value {value} of `{name}` is outside its domain {domain}")]
    OutOfDomain {
        name: String,
        value: i64,
        domain: Domain,
    },
    #[error("expected {expected} values, got {got}")]
    Arity { expected: usize, got: usize },
}

fn check_values(vars: &[&VarDecl], values: &[i64]) -> Result<(), MoveError> {
    if vars.len() != values.len() {
        return Err(MoveError::Arity {
            expected: vars.len(),
            got: values.len(),
        });
    }
    for (v, &x) in vars.iter().zip(values) {
        if !v.domain.contains(x) {
            return Err(MoveError::OutOfDomain {
                name: v.name.clone(),
                value: x,
                domain: v.domain,
            });
        }
    }
    Ok(())
}

/// Output moves enabled at `state` (values in declaration order).
pub fn out_moves(
    space: &mut Space,
    si: &SymbolicInterface,
    state: &[i64],
) -> Result<Vec<(String, Vec<i64>)>, MoveError> {
    check_values(&si.vars.iter().collect::<Vec<_>>(), state)?;
    let here = space.state_cube(&si.ids, state, false);
    let unprimed = space.var_set(&si.ids, false);
    let slots: Vec<(VarId, bool)> = si.ids.iter().map(|&id| (id, true)).collect();
    let mut moves = Vec::new();
    for (action, &rel) in &si.outputs {
        let m = space.manager_mut();
        let succ = m.and_exists(&unprimed, rel, here);
        for next in space.valuations(succ, &slots) {
            moves.push((action.clone(), next));
        }
    }
    Ok(moves)
}

/// Local responses of `si` at `state` to an emission of `action` that sets
/// the globals to `next_globals` (globals in declaration order).
pub fn in_accepts(
    space: &mut Space,
    si: &SymbolicInterface,
    state: &[i64],
    action: &str,
    next_globals: &[i64],
) -> Result<InputResponse, MoveError> {
    check_values(&si.vars.iter().collect::<Vec<_>>(), state)?;
    check_values(
        &si.vars.iter().filter(|v| v.is_global()).collect::<Vec<_>>(),
        next_globals,
    )?;
    let Some(&rel) = si.inputs.get(action) else {
        return Ok(InputResponse::NotListening);
    };
    let globals = si.global_ids();
    let locals = si.local_ids();
    let here = space.state_cube(&si.ids, state, false);
    let update = space.state_cube(&globals, next_globals, true);
    let mut quantified = space.bits(&si.ids, false);
    quantified.extend(space.bits(&globals, true));
    let set = space
        .manager_mut()
        .var_set(&quantified)
        .expect("registered");
    let m = space.manager_mut();
    let point = m.and(here, update);
    let responses = m.and_exists(&set, rel, point);
    let slots: Vec<(VarId, bool)> = locals.iter().map(|&id| (id, true)).collect();
    Ok(InputResponse::Responses(
        space.valuations(responses, &slots),
    ))
}
