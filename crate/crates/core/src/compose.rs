//! Optimistic composition of two interfaces.
//!
//! Each step of the product has exactly one emitter. The other component
//! responds through its input commands if it listens to the action and
//! stays put otherwise. A joint state is an error when the emitter can
//! produce a global update that a listening partner rejects. Two interfaces
//! are compatible when some environment can keep the product out of the
//! error states; since output moves cannot be blocked, the states it can do
//! that from are the complement of the output attractor of the errors.

use indexmap::IndexMap;
use thiserror::Error;

use crate::emit::{predicate_expr, relation_commands};
use crate::game::{Arena, Fixpoint};
use crate::kernel::Bdd;
use crate::model::{
    compile, format_valuation, ActionSpec, Domain, EncodingError, Interface, Space,
    SymbolicInterface, VarDecl, VarId,
};
use crate::syntax::Direction;
use crate::trace::{label_path, Trace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// One emitter/action combination of the product.
#[derive(Debug, Clone)]
pub struct JointMove {
    pub emitter: Side,
    pub action: String,
    /// Whether the partner listens to the action.
    pub synchronized: bool,
    /// Joint transition predicate.
    pub relation: Bdd,
    /// Joint states from which this emission can be rejected.
    pub error: Bdd,
    /// Emitter update together with the partner's frame, before the partner
    /// responds; used to explain rejections.
    emission: Bdd,
    acceptance: Bdd,
}

/// The joint arena of two interfaces.
#[derive(Debug, Clone)]
pub struct Product {
    pub left: SymbolicInterface,
    pub right: SymbolicInterface,
    pub vars: Vec<VarDecl>,
    pub ids: Vec<VarId>,
    pub moves: Vec<JointMove>,
    /// Actions of either component in declaration order, left ones first.
    pub actions: Vec<String>,
    /// Union of the per-move error states.
    pub err: Bdd,
    pub init: Bdd,
    pub arena: Arena,
}

impl Product {
    pub fn side(&self, side: Side) -> &SymbolicInterface {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    /// Move label such as `Fire.fire!`.
    pub fn label(&self, m: &JointMove) -> String {
        format!("{}.{}!", self.side(m.emitter).name, m.action)
    }

    pub fn labelled_moves(&self) -> Vec<(String, Bdd)> {
        self.moves
            .iter()
            .map(|m| (self.label(m), m.relation))
            .collect()
    }

    pub fn format_state(&self, state: &[i64]) -> String {
        format_valuation(&self.vars, state)
    }
}

/// A rejected emission in some joint state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub emitter: String,
    pub listener: String,
    pub action: String,
    /// The emitter's tracked variables after the emission.
    pub update: Vec<(String, String)>,
}

impl Rejection {
    pub fn describe(&self) -> String {
        let update: Vec<String> = self
            .update
            .iter()
            .map(|(n, v)| format!("{n}={v}"))
            .collect();
        format!(
            "error: {}.{}! -> {} rejected by {}",
            self.emitter,
            self.action,
            update.join(" "),
            self.listener
        )
    }
}

/// Evidence that two interfaces cannot be used together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Incompatibility {
    /// Output-only path from an initial state to an error state; its
    /// conclusion describes the rejected emission.
    pub trace: Trace,
    pub rejection: Rejection,
    pub iterations: usize,
}

impl Incompatibility {
    /// Number of moves, counting the rejected emission.
    pub fn length(&self) -> usize {
        self.trace.len() + 1
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ComposeError {
    #[error("{left} and {right} both declare {}", describe_clash(.names))]
    NameClash {
        left: String,
        right: String,
        names: Vec<String>,
    },
    #[error("global `{name}` has domain {left} in one interface and {right} in the other")]
    GlobalMismatch {
        name: String,
        left: Domain,
        right: Domain,
    },
    /// No valuation of the shared globals satisfies both initial
    /// conditions, so the two interfaces can never start together.
    #[error("{left} and {right} have no common initial state")]
    NoCommonInit { left: String, right: String },
    #[error("{left} and {right} are incompatible")]
    Incompatible {
        left: String,
        right: String,
        witness: Box<Incompatibility>,
    },
}

fn describe_clash(names: &[String]) -> String {
    let quoted: Vec<String> = names.iter().map(|n| format!("`{n}`")).collect();
    format!("{} as non-shared variables", quoted.join(", "))
}

fn check_signatures(p: &Interface, q: &Interface) -> Result<(), ComposeError> {
    let mut clashes = Vec::new();
    for v in &p.vars {
        let Some((_, w)) = q.var(&v.name) else {
            continue;
        };
        if v.is_global() && w.is_global() {
            if v.domain != w.domain {
                return Err(ComposeError::GlobalMismatch {
                    name: v.name.clone(),
                    left: v.domain,
                    right: w.domain,
                });
            }
        } else {
            clashes.push(v.name.clone());
        }
    }
    if clashes.is_empty() {
        Ok(())
    } else {
        Err(ComposeError::NameClash {
            left: p.name.clone(),
            right: q.name.clone(),
            names: clashes,
        })
    }
}

fn encoding_error(e: EncodingError) -> ComposeError {
    match e {
        EncodingError::DomainMismatch {
            name,
            existing,
            requested,
        } => ComposeError::GlobalMismatch {
            name,
            left: existing,
            right: requested,
        },
    }
}

fn minus(a: &[VarId], b: &[VarId]) -> Vec<VarId> {
    a.iter().copied().filter(|x| !b.contains(x)).collect()
}

/// Builds the joint arena of `p` and `q` in `space`.
pub fn product(space: &mut Space, p: &Interface, q: &Interface) -> Result<Product, ComposeError> {
    check_signatures(p, q)?;
    let left = compile(p, space).map_err(encoding_error)?;
    let right = compile(q, space).map_err(encoding_error)?;

    let mut vars = left.vars.clone();
    let mut ids = left.ids.clone();
    for (v, &id) in right.vars.iter().zip(&right.ids) {
        if !ids.contains(&id) {
            vars.push(v.clone());
            ids.push(id);
        }
    }
    let state_domain = space.domain_all(&ids, false);
    let domain = space.domain_both(&ids);
    let all_globals: Vec<VarId> = vars
        .iter()
        .zip(&ids)
        .filter(|(v, _)| v.is_global())
        .map(|(_, &id)| id)
        .collect();

    let mut moves = Vec::new();
    for emitter in [Side::Left, Side::Right] {
        let (e, l) = match emitter {
            Side::Left => (&left, &right),
            Side::Right => (&right, &left),
        };
        let l_only_globals = minus(&l.global_ids(), &e.global_ids());
        let l_locals = l.local_ids();
        let keep_globals = space.frame_all(&l_only_globals);
        // The listener's next locals only appear through the domain
        // constraint of the emission; they are quantified out as well.
        let mut hidden = all_globals.clone();
        hidden.extend(e.local_ids());
        hidden.extend(l.local_ids());
        let hidden = space.var_set(&hidden, true);
        let l_next_locals = space.var_set(&l_locals, true);
        for (action, &out) in &e.outputs {
            let emission = {
                let m = space.manager_mut();
                let x = m.and(out, keep_globals);
                m.and(x, domain)
            };
            let (relation, error, acceptance, synchronized) = match l.inputs.get(action) {
                Some(&input) => {
                    let m = space.manager_mut();
                    let relation = m.and(emission, input);
                    let acceptance = m.exists(&l_next_locals, input);
                    let rejected = m.not(acceptance);
                    let bad = m.and_exists(&hidden, emission, rejected);
                    let error = m.and(bad, state_domain);
                    (relation, error, acceptance, true)
                }
                None => {
                    let frame = space.frame_all(&l_locals);
                    let m = space.manager_mut();
                    let relation = m.and(emission, frame);
                    (relation, m.zero(), m.one(), false)
                }
            };
            moves.push(JointMove {
                emitter,
                action: action.clone(),
                synchronized,
                relation,
                error,
                emission,
                acceptance,
            });
        }
    }

    let m = space.manager_mut();
    let err = m.or_all(moves.iter().map(|mv| mv.error));
    let t_out = m.or_all(moves.iter().map(|mv| mv.relation));
    let init = m.and(left.init, right.init);
    let t_in = m.zero();
    let arena = Arena::new(space, &ids, t_out, t_in);
    let mut actions: Vec<String> = p.actions.keys().cloned().collect();
    for a in q.actions.keys() {
        if !actions.contains(a) {
            actions.push(a.clone());
        }
    }
    Ok(Product {
        left,
        right,
        vars,
        ids,
        moves,
        actions,
        err,
        init,
        arena,
    })
}

/// States from which the environment can avoid every error:
/// the complement of the output attractor of `Err`.
pub fn compatible_states(space: &mut Space, prod: &Product) -> Fixpoint {
    let attr = prod
        .arena
        .attr_output(space, prod.err)
        .expect("error predicate is a state set");
    Fixpoint {
        set: prod.arena.complement(space, attr.set),
        iterations: attr.iterations,
    }
}

/// Some emission rejected in `state`, which must be an error state.
pub fn rejection_at(space: &mut Space, prod: &Product, state: &[i64]) -> Option<Rejection> {
    let here = space.state_cube(&prod.ids, state, false);
    for mv in &prod.moves {
        let m = space.manager_mut();
        if m.and(mv.error, here).is_false() {
            continue;
        }
        let rejected = m.not(mv.acceptance);
        let bad = m.and(mv.emission, rejected);
        let bad = m.and(bad, here);
        let e = prod.side(mv.emitter);
        let slots: Vec<(VarId, bool)> = e.ids.iter().map(|&id| (id, true)).collect();
        let next = space.pick_valuation(bad, &slots)?;
        return Some(Rejection {
            emitter: e.name.clone(),
            listener: prod.side(mv.emitter.other()).name.clone(),
            action: mv.action.clone(),
            update: e
                .vars
                .iter()
                .zip(&next)
                .map(|(v, &x)| (v.name.clone(), v.domain.format(x)))
                .collect(),
        });
    }
    None
}

/// The result of a successful composition.
#[derive(Debug, Clone)]
pub struct Composite {
    pub interface: Interface,
    /// The composite's relations, in the space it was composed in.
    pub symbolic: SymbolicInterface,
    /// Compatible joint states.
    pub compatible: Bdd,
    pub iterations: usize,
}

/// Composes `p` and `q`, or explains why no environment can use them
/// together.
pub fn compose(space: &mut Space, p: &Interface, q: &Interface) -> Result<Composite, ComposeError> {
    let prod = product(space, p, q)?;
    if prod.init.is_false() {
        return Err(ComposeError::NoCommonInit {
            left: p.name.clone(),
            right: q.name.clone(),
        });
    }
    let win = compatible_states(space, &prod);
    let w = win.set;
    let init = space.manager_mut().and(prod.init, w);
    if init.is_false() {
        return Err(incompatible(space, &prod, win.iterations));
    }

    let swap = space.prime_swap(&prod.ids);
    let m = space.manager_mut();
    let w_next = m.rename(w, &swap);
    let both = m.and(w, w_next);

    let mut outputs: IndexMap<String, Bdd> = IndexMap::new();
    for mv in &prod.moves {
        let m = space.manager_mut();
        let r = m.and(mv.relation, both);
        let slot = outputs.entry(mv.action.clone()).or_insert(m.zero());
        *slot = m.or(*slot, r);
    }

    let mut inputs: IndexMap<String, Bdd> = IndexMap::new();
    let actions = prod.actions.clone();
    for action in &actions {
        let l = prod.left.inputs.get(action).copied();
        let r = prod.right.inputs.get(action).copied();
        let rel = match (l, r) {
            (None, None) => continue,
            (Some(a), Some(b)) => space.manager_mut().and(a, b),
            (Some(a), None) => {
                let frame = space.frame_all(&prod.right.local_ids());
                space.manager_mut().and(a, frame)
            }
            (None, Some(b)) => {
                let frame = space.frame_all(&prod.left.local_ids());
                space.manager_mut().and(b, frame)
            }
        };
        let m = space.manager_mut();
        let rel = m.and(rel, both);
        inputs.insert(action.clone(), rel);
    }

    let state_domain = space.domain_all(&prod.ids, false);
    let domain = space.domain_both(&prod.ids);
    let name = format!("{}_{}", p.name, q.name);
    let mut specs: IndexMap<String, ActionSpec> = IndexMap::new();
    for action in &actions {
        let out = outputs
            .get(action)
            .map(|&rel| relation_commands(space, rel, &prod.vars, &prod.ids, Direction::Output));
        let inp = inputs
            .get(action)
            .map(|&rel| relation_commands(space, rel, &prod.vars, &prod.ids, Direction::Input));
        specs.insert(
            action.clone(),
            ActionSpec {
                name: action.clone(),
                outputs: out,
                inputs: inp,
            },
        );
    }
    let init_expr = predicate_expr(space, init, &prod.vars, &prod.ids);
    let interface = Interface {
        name: name.clone(),
        vars: prod.vars.clone(),
        actions: specs,
        init: init_expr,
    };
    let symbolic = SymbolicInterface {
        name,
        vars: prod.vars.clone(),
        ids: prod.ids.clone(),
        output_commands: outputs.iter().map(|(a, &r)| (a.clone(), vec![r])).collect(),
        input_commands: inputs.iter().map(|(a, &r)| (a.clone(), vec![r])).collect(),
        outputs,
        inputs,
        init,
        state_domain,
        domain,
    };
    Ok(Composite {
        interface,
        symbolic,
        compatible: w,
        iterations: win.iterations,
    })
}

fn incompatible(space: &mut Space, prod: &Product, iterations: usize) -> ComposeError {
    let path = prod
        .arena
        .extract_trace(space, prod.init, prod.arena.t_out, prod.err)
        .expect("state sets")
        .expect("every initial state is attracted to an error state");
    let mut trace = label_path(space, &prod.vars, &prod.ids, &prod.labelled_moves(), path);
    let rejection =
        rejection_at(space, prod, trace.last_state()).expect("trace ends in an error state");
    trace.conclusion = Some(rejection.describe());
    ComposeError::Incompatible {
        left: prod.left.name.clone(),
        right: prod.right.name.clone(),
        witness: Box::new(Incompatibility {
            trace,
            rejection,
            iterations,
        }),
    }
}
