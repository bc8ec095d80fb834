//! Explicit-state semantics, computed by direct evaluation of the guarded
//! commands on concrete valuations. Nothing here touches the kernel; it is
//! the reference every symbolic result is cross-checked against.

use std::collections::BTreeSet;

use indexmap::IndexMap;
use thiserror::Error;

use super::{GuardedCommand, InputResponse, Interface, VarDecl};
use crate::syntax::{BinaryOp, Expr, ExprKind, UnaryOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Value {
    Bool(bool),
    Int(i64),
}

impl Value {
    fn as_bool(self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(b),
            Value::Int(_) => None,
        }
    }

    fn as_int(self) -> Option<i64> {
        match self {
            Value::Int(v) => Some(v),
            Value::Bool(_) => None,
        }
    }

    /// Bools are stored as 0/1 in valuations.
    pub fn to_raw(self) -> i64 {
        match self {
            Value::Bool(b) => b as i64,
            Value::Int(v) => v,
        }
    }
}

/// Evaluates `e`; `lookup(name, primed)` supplies variable values.
/// `None` on unknown variables or type errors.
pub fn eval(e: &Expr, lookup: &dyn Fn(&str, bool) -> Option<Value>) -> Option<Value> {
    Some(match &e.kind {
        ExprKind::Bool(b) => Value::Bool(*b),
        ExprKind::Int(v) => Value::Int(*v),
        ExprKind::Var { name, primed } => lookup(name, *primed)?,
        ExprKind::Unary(UnaryOp::Not, inner) => Value::Bool(!eval(inner, lookup)?.as_bool()?),
        ExprKind::Unary(UnaryOp::Neg, inner) => {
            Value::Int(eval(inner, lookup)?.as_int()?.saturating_neg())
        }
        ExprKind::Binary(op, l, r) => {
            let a = eval(l, lookup)?;
            let b = eval(r, lookup)?;
            match op {
                BinaryOp::And => Value::Bool(a.as_bool()? && b.as_bool()?),
                BinaryOp::Or => Value::Bool(a.as_bool()? || b.as_bool()?),
                BinaryOp::Eq => Value::Bool(a == b),
                BinaryOp::Ne => Value::Bool(a != b),
                BinaryOp::Lt => Value::Bool(a.as_int()? < b.as_int()?),
                BinaryOp::Le => Value::Bool(a.as_int()? <= b.as_int()?),
                BinaryOp::Gt => Value::Bool(a.as_int()? > b.as_int()?),
                BinaryOp::Ge => Value::Bool(a.as_int()? >= b.as_int()?),
                BinaryOp::Add => Value::Int(a.as_int()?.saturating_add(b.as_int()?)),
                BinaryOp::Sub => Value::Int(a.as_int()?.saturating_sub(b.as_int()?)),
                BinaryOp::Mul => Value::Int(a.as_int()?.saturating_mul(b.as_int()?)),
            }
        }
    })
}

fn typed(decl: &VarDecl, raw: i64) -> Value {
    if decl.domain.is_bool() {
        Value::Bool(raw != 0)
    } else {
        Value::Int(raw)
    }
}

/// Evaluates a boolean expression at `state`, with `next_globals` (in the
/// interface's global order) visible as primed globals.
fn holds(iface: &Interface, e: &Expr, state: &[i64], next_globals: Option<&[i64]>) -> bool {
    let lookup = |name: &str, primed: bool| -> Option<Value> {
        let (i, decl) = iface.var(name)?;
        if !primed {
            return Some(typed(decl, state[i]));
        }
        let gi = iface.globals().position(|g| g.name == name)?;
        Some(typed(decl, next_globals?[gi]))
    };
    matches!(eval(e, &lookup), Some(Value::Bool(true)))
}

/// Successor produced by one command, or `None` if it is disabled or one of
/// its assignments leaves the target's domain.
fn fire(
    iface: &Interface,
    cmd: &GuardedCommand,
    state: &[i64],
    next_globals: Option<&[i64]>,
) -> Option<Vec<i64>> {
    if !holds(iface, &cmd.guard, state, next_globals) {
        return None;
    }
    let mut next = state.to_vec();
    if let Some(g) = next_globals {
        for (gi, (i, _)) in iface
            .vars
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_global())
            .enumerate()
        {
            next[i] = g[gi];
        }
    }
    let lookup = |name: &str, primed: bool| -> Option<Value> {
        let (i, decl) = iface.var(name)?;
        if !primed {
            return Some(typed(decl, state[i]));
        }
        let gi = iface.globals().position(|g| g.name == name)?;
        Some(typed(decl, next_globals?[gi]))
    };
    for (target, value) in &cmd.assigns {
        let (i, decl) = iface.var(target)?;
        let v = eval(value, &lookup)?.to_raw();
        if !decl.domain.contains(v) {
            return None;
        }
        next[i] = v;
    }
    Some(next)
}

/// All output moves from `state`, sorted and without duplicates.
pub fn output_successors(iface: &Interface, state: &[i64]) -> Vec<(String, Vec<i64>)> {
    let mut moves = BTreeSet::new();
    for spec in iface.actions.values() {
        for cmd in spec.outputs.iter().flatten() {
            if let Some(next) = fire(iface, cmd, state, None) {
                moves.insert((spec.name.clone(), next));
            }
        }
    }
    moves.into_iter().collect()
}

/// Local responses to `action` arriving with global update `next_globals`.
pub fn input_responses(
    iface: &Interface,
    state: &[i64],
    action: &str,
    next_globals: &[i64],
) -> InputResponse {
    let Some(cmds) = iface.actions.get(action).and_then(|a| a.inputs.as_ref()) else {
        return InputResponse::NotListening;
    };
    let local_positions: Vec<usize> = iface
        .vars
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_global())
        .map(|(i, _)| i)
        .collect();
    let mut responses = BTreeSet::new();
    for cmd in cmds {
        if let Some(next) = fire(iface, cmd, state, Some(next_globals)) {
            responses.insert(local_positions.iter().map(|&i| next[i]).collect::<Vec<_>>());
        }
    }
    InputResponse::Responses(responses.into_iter().collect())
}

/// Size of the product of the variables' domains.
pub fn state_count(vars: &[VarDecl]) -> u128 {
    vars.iter()
        .map(|v| v.domain.size() as u128)
        .fold(1u128, |acc, n| acc.saturating_mul(n))
}

/// Every valuation of `vars`, in lexicographic order.
pub fn all_valuations(vars: &[VarDecl]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::with_capacity(vars.len())];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                v.domain.values().map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ExplicitError {
    #[error("state space has {states} states, above the cap of {cap}")]
    TooLarge { states: u128, cap: u128 },
}

/// One row of an input acceptance table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputRow {
    pub state: usize,
    pub next_globals: Vec<i64>,
    /// Accepted local successors; empty means rejected.
    pub responses: Vec<Vec<i64>>,
}

#[derive(Debug, Clone)]
pub struct ExplicitGraph {
    pub vars: Vec<VarDecl>,
    pub states: Vec<Vec<i64>>,
    /// `(source, target)` state indices per emitted action.
    pub outputs: IndexMap<String, BTreeSet<(usize, usize)>>,
    /// Acceptance table per listened action, one row per state and update.
    pub inputs: IndexMap<String, Vec<InputRow>>,
}

impl ExplicitGraph {
    pub fn index_of(&self, state: &[i64]) -> Option<usize> {
        self.states
            .binary_search_by(|s| s.as_slice().cmp(state))
            .ok()
    }

    pub fn output_edge_count(&self) -> usize {
        self.outputs.values().map(BTreeSet::len).sum()
    }
}

/// Enumerates the explicit semantics of `iface`, refusing above `cap` states.
pub fn enumerate_explicit(iface: &Interface, cap: u128) -> Result<ExplicitGraph, ExplicitError> {
    let states_n = state_count(&iface.vars);
    if states_n > cap {
        return Err(ExplicitError::TooLarge {
            states: states_n,
            cap,
        });
    }
    let states = all_valuations(&iface.vars);
    let globals: Vec<VarDecl> = iface.globals().cloned().collect();
    let updates = all_valuations(&globals);
    let mut graph = ExplicitGraph {
        vars: iface.vars.clone(),
        states,
        outputs: IndexMap::new(),
        inputs: IndexMap::new(),
    };
    for spec in iface.actions.values() {
        if spec.outputs.is_some() {
            graph.outputs.insert(spec.name.clone(), BTreeSet::new());
        }
        if spec.inputs.is_some() {
            graph.inputs.insert(spec.name.clone(), Vec::new());
        }
    }
    for (si, state) in graph.states.iter().enumerate() {
        for (action, next) in output_successors(iface, state) {
            let ti = graph
                .states
                .binary_search(&next)
                .expect("successor is a valuation");
            graph.outputs[&action].insert((si, ti));
        }
        for (action, rows) in graph.inputs.iter_mut() {
            for g in &updates {
                let InputResponse::Responses(responses) = input_responses(iface, state, action, g)
                else {
                    unreachable!("listened action");
                };
                rows.push(InputRow {
                    state: si,
                    next_globals: g.clone(),
                    responses,
                });
            }
        }
    }
    Ok(graph)
}
