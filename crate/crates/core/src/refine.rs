//! Refinement by alternating simulation.
//!
//! `P` refines `Q` when `P` accepts at least the inputs `Q` accepts and
//! produces at most the outputs `Q` produces, step by step. The relation is
//! computed as a greatest fixpoint over triples `(p, q, g)` of `P`-locals,
//! `Q`-locals and shared globals.

use std::fmt;

use thiserror::Error;

use crate::kernel::{Bdd, RenameMap, VarSet};
use crate::model::{
    compile_prefixed, format_valuation, Interface, Space, SymbolicInterface, VarDecl, VarId,
};

/// Prefix of the refining interface's locals in the shared space.
pub const LEFT_PREFIX: &str = "L:";
/// Prefix of the refined interface's locals in the shared space.
pub const RIGHT_PREFIX: &str = "R:";

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SignatureError {
    #[error(
        "global variables differ: {left} declares {left_globals}, {right} declares {right_globals}"
    )]
    Globals {
        left: String,
        right: String,
        left_globals: String,
        right_globals: String,
    },
    #[error("{right} listens to `{action}` but {left} does not")]
    Input {
        left: String,
        right: String,
        action: String,
    },
    #[error("{left} emits `{action}` but {right} does not")]
    Output {
        left: String,
        right: String,
        action: String,
    },
}

impl SignatureError {
    pub fn action(&self) -> Option<&str> {
        match self {
            SignatureError::Globals { .. } => None,
            SignatureError::Input { action, .. } | SignatureError::Output { action, .. } => {
                Some(action)
            }
        }
    }
}

fn global_signature(i: &Interface) -> String {
    let mut gs: Vec<String> = i
        .globals()
        .map(|v| format!("{}: {}", v.name, v.domain))
        .collect();
    gs.sort();
    format!("{{{}}}", gs.join(", "))
}

/// Structural preconditions: identical globals, `In(P) ⊇ In(Q)`,
/// `Out(P) ⊆ Out(Q)`.
pub fn check_signatures(p: &Interface, q: &Interface) -> Result<(), SignatureError> {
    let (lg, rg) = (global_signature(p), global_signature(q));
    if lg != rg {
        return Err(SignatureError::Globals {
            left: p.name.clone(),
            right: q.name.clone(),
            left_globals: lg,
            right_globals: rg,
        });
    }
    if let Some(a) = q.input_alphabet().find(|a| !p.listens(a)) {
        return Err(SignatureError::Input {
            left: p.name.clone(),
            right: q.name.clone(),
            action: a.to_string(),
        });
    }
    if let Some(a) = p.output_alphabet().find(|a| !q.emits(a)) {
        return Err(SignatureError::Output {
            left: p.name.clone(),
            right: q.name.clone(),
            action: a.to_string(),
        });
    }
    Ok(())
}

/// Both interfaces compiled side by side, with the sets the fixpoint needs.
#[derive(Debug, Clone)]
pub struct RefinementGame {
    pub left: SymbolicInterface,
    pub right: SymbolicInterface,
    pub left_locals: Vec<VarId>,
    pub right_locals: Vec<VarId>,
    pub globals: Vec<VarId>,
    /// Every triple variable: left locals, right locals, globals.
    pub ids: Vec<VarId>,
    pub domain: Bdd,
    swap: RenameMap,
    left_next: VarSet,
    right_next: VarSet,
    left_now: VarSet,
    input_hidden: VarSet,
    output_hidden: VarSet,
}

impl RefinementGame {
    pub fn new(space: &mut Space, p: &Interface, q: &Interface) -> Result<Self, SignatureError> {
        check_signatures(p, q)?;
        let left = compile_prefixed(p, space, LEFT_PREFIX).expect("same global signature");
        let right = compile_prefixed(q, space, RIGHT_PREFIX).expect("same global signature");
        let left_locals = left.local_ids();
        let right_locals = right.local_ids();
        let globals = left.global_ids();
        let mut ids = left_locals.clone();
        ids.extend(&right_locals);
        ids.extend(&globals);
        let domain = space.domain_all(&ids, false);
        let swap = space.prime_swap(&ids);
        let left_next = space.var_set(&left_locals, true);
        let right_next = space.var_set(&right_locals, true);
        let left_now = space.var_set(&left_locals, false);
        let mut hidden: Vec<VarId> = globals.clone();
        hidden.extend(&right_locals);
        let input_hidden = space.var_set(&hidden, true);
        let mut hidden: Vec<VarId> = globals.clone();
        hidden.extend(&left_locals);
        let output_hidden = space.var_set(&hidden, true);
        Ok(RefinementGame {
            left,
            right,
            left_locals,
            right_locals,
            globals,
            ids,
            domain,
            swap,
            left_next,
            right_next,
            left_now,
            input_hidden,
            output_hidden,
        })
    }

    /// Triples from which every input `Q` accepts on `action` is also
    /// accepted by `P`, landing back in `r`.
    pub fn input_ok(&self, space: &mut Space, action: &str, r: Bdd) -> Bdd {
        let q_in = self.right.inputs[action];
        let p_in = self.left.inputs[action];
        let m = space.manager_mut();
        let r_next = m.rename(r, &self.swap);
        let follow = m.and_exists(&self.left_next, p_in, r_next);
        let matched = m.implies(q_in, follow);
        m.forall(&self.input_hidden, matched)
    }

    /// Triples from which every output of `P` on `action` is matched by an
    /// output of `Q` with the same global update, landing back in `r`.
    pub fn output_ok(&self, space: &mut Space, action: &str, r: Bdd) -> Bdd {
        let p_out = self.left.outputs[action];
        let q_out = self.right.outputs[action];
        let m = space.manager_mut();
        let r_next = m.rename(r, &self.swap);
        let follow = m.and_exists(&self.right_next, q_out, r_next);
        let matched = m.implies(p_out, follow);
        m.forall(&self.output_hidden, matched)
    }

    fn input_actions(&self) -> Vec<String> {
        self.right.inputs.keys().cloned().collect()
    }

    fn output_actions(&self) -> Vec<String> {
        self.left.outputs.keys().cloned().collect()
    }

    /// One refinement round.
    pub fn step(&self, space: &mut Space, r: Bdd) -> Bdd {
        let mut next = r;
        for a in self.input_actions() {
            let ok = self.input_ok(space, &a, r);
            next = space.manager_mut().and(next, ok);
        }
        for a in self.output_actions() {
            let ok = self.output_ok(space, &a, r);
            next = space.manager_mut().and(next, ok);
        }
        next
    }

    /// Splits a triple valuation (in `ids` order) into its parts.
    pub fn split(&self, values: &[i64]) -> Triple {
        let (l, rest) = values.split_at(self.left_locals.len());
        let (r, g) = rest.split_at(self.right_locals.len());
        Triple {
            left: l.to_vec(),
            right: r.to_vec(),
            globals: g.to_vec(),
        }
    }

    pub fn describe(&self, t: &Triple) -> String {
        let locals = |si: &SymbolicInterface| -> Vec<VarDecl> {
            si.vars.iter().filter(|v| !v.is_global()).cloned().collect()
        };
        let globals: Vec<VarDecl> = self
            .left
            .vars
            .iter()
            .filter(|v| v.is_global())
            .cloned()
            .collect();
        let part = |s: String| if s.is_empty() { "-".to_string() } else { s };
        format!(
            "{}[{}] {}[{}] globals[{}]",
            self.left.name,
            part(format_valuation(&locals(&self.left), &t.left)),
            self.right.name,
            part(format_valuation(&locals(&self.right), &t.right)),
            part(format_valuation(&globals, &t.globals)),
        )
    }

    fn cube(&self, space: &mut Space, t: &Triple) -> Bdd {
        let mut values = t.left.clone();
        values.extend(&t.right);
        values.extend(&t.globals);
        space.state_cube(&self.ids, &values, false)
    }
}

/// A valuation of the refinement state: both interfaces' locals and the
/// shared globals, each in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub left: Vec<i64>,
    pub right: Vec<i64>,
    pub globals: Vec<i64>,
}

/// The alternating simulation and the approximations that led to it.
#[derive(Debug, Clone)]
pub struct Relation {
    pub game: RefinementGame,
    pub set: Bdd,
    /// `approximations[k]` is the relation after `k` rounds; the last entry
    /// equals `set`.
    pub approximations: Vec<Bdd>,
}

impl Relation {
    pub fn iterations(&self) -> usize {
        self.approximations.len() - 1
    }

    pub fn contains(&self, space: &mut Space, t: &Triple) -> bool {
        let c = self.game.cube(space, t);
        !space.manager_mut().and(c, self.set).is_false()
    }

    /// All related triples.
    pub fn triples(&self, space: &mut Space) -> Vec<Triple> {
        let slots: Vec<(VarId, bool)> = self.game.ids.iter().map(|&id| (id, false)).collect();
        space
            .valuations(self.set, &slots)
            .into_iter()
            .map(|v| self.game.split(&v))
            .collect()
    }
}

/// Greatest alternating simulation between `p` (refining) and `q`.
pub fn alt_sim(
    space: &mut Space,
    p: &Interface,
    q: &Interface,
) -> Result<Relation, SignatureError> {
    let game = RefinementGame::new(space, p, q)?;
    let mut r = game.domain;
    let mut approximations = vec![r];
    loop {
        let next = game.step(space, r);
        if next == r {
            break;
        }
        approximations.push(next);
        r = next;
    }
    Ok(Relation {
        game,
        set: r,
        approximations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    /// Some initial state of `Q` has no related initial state of `P`.
    Init,
    /// `Q` accepts an input that `P` cannot follow.
    InputOk,
    /// `P` produces an output that `Q` cannot match.
    OutputOk,
    /// The alphabets or global variables rule refinement out up front.
    Signature,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Init => "initial states",
            Condition::InputOk => "input acceptance",
            Condition::OutputOk => "output production",
            Condition::Signature => "signature",
        })
    }
}

/// Why a refinement check failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub condition: Condition,
    pub action: Option<String>,
    /// The unmatched triple, when there is one.
    pub triple: Option<Triple>,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub refines: bool,
    pub violation: Option<Violation>,
    /// Absent when the signatures already rule refinement out.
    pub relation: Option<Relation>,
}

impl Verdict {
    pub fn iterations(&self) -> usize {
        self.relation.as_ref().map_or(0, Relation::iterations)
    }
}

/// Whether `p` refines `q`: every initial state of `q` is matched by an
/// initial state of `p` with the same globals, related by [`alt_sim`].
pub fn refines(space: &mut Space, p: &Interface, q: &Interface) -> Verdict {
    let rel = match alt_sim(space, p, q) {
        Ok(rel) => rel,
        Err(e) => {
            return Verdict {
                refines: false,
                violation: Some(Violation {
                    condition: Condition::Signature,
                    action: e.action().map(str::to_string),
                    triple: None,
                    message: e.to_string(),
                }),
                relation: None,
            }
        }
    };
    let g = &rel.game;
    let m = space.manager_mut();
    let related_init = m.and(g.left.init, rel.set);
    let matched = m.exists(&g.left_now, related_init);
    let unmatched = {
        let n = m.not(matched);
        m.and(g.right.init, n)
    };
    if unmatched.is_false() {
        return Verdict {
            refines: true,
            violation: None,
            relation: Some(rel),
        };
    }
    let violation = explain(space, &rel, unmatched);
    Verdict {
        refines: false,
        violation: Some(violation),
        relation: Some(rel),
    }
}

fn explain(space: &mut Space, rel: &Relation, unmatched: Bdd) -> Violation {
    let g = &rel.game;
    let mut qg_ids = g.right_locals.clone();
    qg_ids.extend(&g.globals);
    let qg_slots: Vec<(VarId, bool)> = qg_ids.iter().map(|&id| (id, false)).collect();
    let qg = space
        .pick_valuation(unmatched, &qg_slots)
        .expect("nonempty");
    let (q_vals, g_vals) = qg.split_at(g.right_locals.len());
    let at_globals = space.state_cube(&g.globals, g_vals, false);
    let candidates = space.manager_mut().and(g.left.init, at_globals);
    let p_slots: Vec<(VarId, bool)> = g.left_locals.iter().map(|&id| (id, false)).collect();
    let Some(p_vals) = space.pick_valuation(candidates, &p_slots) else {
        let globals: Vec<VarDecl> = g
            .left
            .vars
            .iter()
            .filter(|v| v.is_global())
            .cloned()
            .collect();
        return Violation {
            condition: Condition::Init,
            action: None,
            triple: None,
            message: format!(
                "{} has no initial state with globals {}",
                g.left.name,
                format_valuation(&globals, g_vals)
            ),
        };
    };
    let triple = Triple {
        left: p_vals,
        right: q_vals.to_vec(),
        globals: g_vals.to_vec(),
    };
    let here = g.cube(space, &triple);
    // The round in which the triple dropped out tells which condition failed.
    let k = rel
        .approximations
        .iter()
        .rposition(|&r| !space.manager_mut().and(r, here).is_false())
        .expect("every triple is in the first approximation");
    debug_assert!(
        k + 1 < rel.approximations.len(),
        "unmatched triple is not related"
    );
    let r = rel.approximations[k];
    for a in g.input_actions() {
        let ok = g.input_ok(space, &a, r);
        if space.manager_mut().and(ok, here).is_false() {
            return Violation {
                condition: Condition::InputOk,
                message: format!(
                    "{} accepts `{a}` from {} but {} cannot follow",
                    g.right.name,
                    g.describe(&triple),
                    g.left.name
                ),
                action: Some(a),
                triple: Some(triple),
            };
        }
    }
    for a in g.output_actions() {
        let ok = g.output_ok(space, &a, r);
        if space.manager_mut().and(ok, here).is_false() {
            return Violation {
                condition: Condition::OutputOk,
                message: format!(
                    "{} emits `{a}` from {} but {} cannot match it",
                    g.left.name,
                    g.describe(&triple),
                    g.right.name
                ),
                action: Some(a),
                triple: Some(triple),
            };
        }
    }
    unreachable!("a triple leaves the relation only by failing some condition")
}
