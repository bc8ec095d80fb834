//! Invariant checking for a single interface, against the worst and
//! against the most helpful environment.
//!
//! The environment may deliver any input action at any time with any global
//! update the interface accepts, or stay idle forever. Pessimistically every
//! reachable state must satisfy the invariant; optimistically it suffices
//! that the environment can keep the interface in the invariant, which only
//! output moves can prevent.

use std::fmt;

use crate::game::Arena;
use crate::kernel::Bdd;
use crate::model::{
    check_predicate, compile, encode_bool, validate, Diagnostic, Interface, Space,
    SymbolicInterface, ValidationError,
};
use crate::syntax::{expr_to_string, Direction, Expr, ModuleAst, SourceSpan};
use crate::trace::{label_path, Trace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Pessimistic,
    Optimistic,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Pessimistic => "pessimistic",
            Mode::Optimistic => "optimistic",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SafetyReport {
    pub mode: Mode,
    pub safe: bool,
    /// Path to a violation: along any moves when pessimistic, along output
    /// moves from a losing initial state when optimistic.
    pub witness: Option<Trace>,
    /// Reachable states (pessimistic) or winning states (optimistic).
    pub region: Bdd,
    pub region_states: u128,
    pub iterations: usize,
}

/// The compiled interface together with its game arena.
struct Setup {
    si: SymbolicInterface,
    arena: Arena,
    invariant: Bdd,
    labels: Vec<(String, Bdd)>,
}

fn setup(space: &mut Space, iface: &Interface, phi: &Expr) -> Result<Setup, ValidationError> {
    check_predicate(iface, phi)?;
    let si = compile(iface, space).expect("a single interface encodes cleanly");
    let lookup = |name: &str| si.id_of(name);
    let invariant = encode_bool(space, phi, &lookup).expect("checked predicate");
    let m = space.manager_mut();
    let t_out = m.or_all(si.outputs.values().copied());
    // A single interface tracks every variable, so each input relation is
    // already a move over its whole state.
    let t_in = m.or_all(si.inputs.values().copied());
    let arena = Arena::new(space, &si.ids, t_out, t_in);
    let mut labels: Vec<(String, Bdd)> = si
        .outputs
        .iter()
        .map(|(a, &r)| (format!("{a}!"), r))
        .collect();
    labels.extend(si.inputs.iter().map(|(a, &r)| (format!("{a}?"), r)));
    Ok(Setup {
        si,
        arena,
        invariant,
        labels,
    })
}

/// Whether every state reachable under any environment satisfies `phi`.
pub fn check_pessimistic(
    space: &mut Space,
    iface: &Interface,
    phi: &Expr,
) -> Result<SafetyReport, ValidationError> {
    let s = setup(space, iface, phi)?;
    let all = s.arena.all_moves(space);
    let reach = s
        .arena
        .reachable(space, s.si.init, all)
        .expect("initial states are a state set");
    let bad = s.arena.complement(space, s.invariant);
    let hit = space.manager_mut().and(reach.set, bad);
    let witness = if hit.is_false() {
        None
    } else {
        let path = s
            .arena
            .extract_trace(space, s.si.init, all, bad)
            .expect("state sets")
            .expect("a reachable violation has a path");
        let mut trace = label_path(space, &s.si.vars, &s.si.ids, &s.labels, path);
        trace.conclusion = Some(format!("violates: {}", expr_to_string(phi)));
        Some(trace)
    };
    Ok(SafetyReport {
        mode: Mode::Pessimistic,
        safe: witness.is_none(),
        witness,
        region: reach.set,
        region_states: s.arena.count(space, reach.set),
        iterations: reach.iterations(),
    })
}

/// Whether some environment keeps the interface inside `phi` from every
/// initial state.
pub fn check_optimistic(
    space: &mut Space,
    iface: &Interface,
    phi: &Expr,
) -> Result<SafetyReport, ValidationError> {
    let s = setup(space, iface, phi)?;
    let win = s
        .arena
        .win_safe(space, s.invariant)
        .expect("invariant is a state set");
    let losing = s.arena.complement(space, win.set);
    let lost_init = space.manager_mut().and(s.si.init, losing);
    let witness = if lost_init.is_false() {
        None
    } else {
        let bad = s.arena.complement(space, s.invariant);
        let path = s
            .arena
            .extract_trace(space, lost_init, s.arena.t_out, bad)
            .expect("state sets")
            .expect("a losing state is attracted to a violation");
        let outputs: Vec<(String, Bdd)> = s
            .labels
            .iter()
            .filter(|(l, _)| l.ends_with('!'))
            .cloned()
            .collect();
        let mut trace = label_path(space, &s.si.vars, &s.si.ids, &outputs, path);
        trace.conclusion = Some(format!("violates: {}", expr_to_string(phi)));
        Some(trace)
    };
    Ok(SafetyReport {
        mode: Mode::Optimistic,
        safe: witness.is_none(),
        witness,
        region: win.set,
        region_states: s.arena.count(space, win.set),
        iterations: win.iterations,
    })
}

pub fn check(
    space: &mut Space,
    iface: &Interface,
    phi: &Expr,
    mode: Mode,
) -> Result<SafetyReport, ValidationError> {
    match mode {
        Mode::Pessimistic => check_pessimistic(space, iface, phi),
        Mode::Optimistic => check_optimistic(space, iface, phi),
    }
}

/// Outcome of a well-formedness check; warnings do not make it fail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WellFormedness {
    pub ok: bool,
    pub diagnostics: Vec<Diagnostic>,
}

/// Validates `ast` and looks for dead parts of an otherwise valid interface:
/// output actions that can never fire, input actions that reject every
/// emission, and interfaces with no moves at all.
pub fn well_formed(ast: &ModuleAst) -> WellFormedness {
    let iface = match validate(ast) {
        Ok(iface) => iface,
        Err(ValidationError { diagnostics }) => {
            return WellFormedness {
                ok: false,
                diagnostics,
            }
        }
    };
    let span_of = |action: &str, direction: Direction| -> SourceSpan {
        ast.actions
            .iter()
            .find(|b| b.name.text == action && b.direction == direction)
            .map_or_else(|| ast.span.clone(), |b| b.name.span.clone())
    };
    let mut space = Space::new();
    let si = compile(&iface, &mut space).expect("a single interface encodes cleanly");
    let mut diagnostics = Vec::new();
    for (action, rel) in &si.outputs {
        if rel.is_false() {
            diagnostics.push(Diagnostic::warning(
                format!("action `{action}` never enabled"),
                &span_of(action, Direction::Output),
            ));
        }
    }
    for (action, rel) in &si.inputs {
        if rel.is_false() {
            diagnostics.push(Diagnostic::warning(
                format!("input `{action}` rejects every emission"),
                &span_of(action, Direction::Input),
            ));
        }
    }
    let m = space.manager_mut();
    let any = m.or_all(si.outputs.values().chain(si.inputs.values()).copied());
    // An interface without actions is inert on purpose; one whose actions
    // all turned out dead probably is not.
    let declares_actions = !(si.outputs.is_empty() && si.inputs.is_empty());
    if any.is_false() && declares_actions {
        diagnostics.push(Diagnostic::warning("no state has a move", &ast.name.span));
    }
    WellFormedness {
        ok: true,
        diagnostics,
    }
}
