//! Explicit-state reference semantics, computed by enumerating valuations.

use std::collections::{BTreeMap, BTreeSet};

use sociable::model::{
    all_valuations, eval, input_responses, output_successors, InputResponse, Interface, Value,
    VarDecl,
};
use sociable::syntax::Expr;

pub type State = Vec<i64>;

/// Whether `e` holds in `state` (values in `vars` order).
pub fn holds(vars: &[VarDecl], e: &Expr, state: &[i64]) -> bool {
    let lookup = |name: &str, primed: bool| -> Option<Value> {
        if primed {
            return None;
        }
        let i = vars.iter().position(|v| v.name == name)?;
        Some(if vars[i].domain.is_bool() {
            Value::Bool(state[i] != 0)
        } else {
            Value::Int(state[i])
        })
    };
    matches!(eval(e, &lookup), Some(Value::Bool(true)))
}

pub fn initial_states(iface: &Interface) -> BTreeSet<State> {
    all_valuations(&iface.vars)
        .into_iter()
        .filter(|s| holds(&iface.vars, &iface.init, s))
        .collect()
}

/// Positions of `names` within `vars`.
fn positions<'a>(vars: &[VarDecl], names: impl IntoIterator<Item = &'a str>) -> Vec<usize> {
    names
        .into_iter()
        .map(|n| {
            vars.iter()
                .position(|v| v.name == n)
                .expect("known variable")
        })
        .collect()
}

fn project(state: &[i64], pos: &[usize]) -> State {
    pos.iter().map(|&i| state[i]).collect()
}

fn globals_of(iface: &Interface) -> Vec<VarDecl> {
    iface.globals().cloned().collect()
}

fn local_positions(iface: &Interface) -> Vec<usize> {
    (0..iface.vars.len())
        .filter(|&i| !iface.vars[i].is_global())
        .collect()
}

fn global_positions(iface: &Interface) -> Vec<usize> {
    (0..iface.vars.len())
        .filter(|&i| iface.vars[i].is_global())
        .collect()
}

/// Every move of a single interface: `(label, source, target)` where the
/// label is `a!` for outputs and `a?` for environment inputs.
pub fn single_moves(iface: &Interface) -> BTreeSet<(String, State, State)> {
    let mut moves = BTreeSet::new();
    let locals = local_positions(iface);
    let globals = global_positions(iface);
    let updates = all_valuations(&globals_of(iface));
    for s in all_valuations(&iface.vars) {
        for (a, t) in output_successors(iface, &s) {
            moves.insert((format!("{a}!"), s.clone(), t));
        }
        for a in iface.input_alphabet() {
            for g in &updates {
                if let InputResponse::Responses(rs) = input_responses(iface, &s, a, g) {
                    for r in rs {
                        let mut t = s.clone();
                        for (k, &i) in locals.iter().enumerate() {
                            t[i] = r[k];
                        }
                        for (k, &i) in globals.iter().enumerate() {
                            t[i] = g[k];
                        }
                        moves.insert((format!("{a}?"), s.clone(), t));
                    }
                }
            }
        }
    }
    moves
}

/// Forward closure of `init` under `edges`.
pub fn reach(init: &BTreeSet<State>, edges: &BTreeSet<(State, State)>) -> BTreeSet<State> {
    let mut succ: BTreeMap<&State, Vec<&State>> = BTreeMap::new();
    for (s, t) in edges {
        succ.entry(s).or_default().push(t);
    }
    let mut seen = init.clone();
    let mut frontier: Vec<State> = init.iter().cloned().collect();
    while let Some(s) = frontier.pop() {
        for &t in succ.get(&s).into_iter().flatten() {
            if seen.insert(t.clone()) {
                frontier.push(t.clone());
            }
        }
    }
    seen
}

/// Least set containing `target` and every state with an `edges`-successor
/// in it, plus the number of rounds that changed it.
pub fn attractor(
    states: &[State],
    edges: &BTreeSet<(State, State)>,
    target: &BTreeSet<State>,
) -> (BTreeSet<State>, usize) {
    let mut preds: BTreeMap<&State, Vec<&State>> = BTreeMap::new();
    for (s, t) in edges {
        preds.entry(t).or_default().push(s);
    }
    let mut y = target.clone();
    let mut rounds = 0;
    loop {
        let mut grown = y.clone();
        for t in &y {
            for &s in preds.get(t).into_iter().flatten() {
                grown.insert(s.clone());
            }
        }
        debug_assert!(grown.iter().all(|s| states.contains(s)));
        if grown == y {
            return (y, rounds);
        }
        y = grown;
        rounds += 1;
    }
}

/// Greatest subset of `safe` whose every `edges`-successor stays inside.
pub fn safe_core(
    edges: &BTreeSet<(State, State)>,
    safe: &BTreeSet<State>,
) -> (BTreeSet<State>, usize) {
    let mut succ: BTreeMap<&State, Vec<&State>> = BTreeMap::new();
    for (s, t) in edges {
        succ.entry(s).or_default().push(t);
    }
    let mut x = safe.clone();
    let mut rounds = 0;
    loop {
        let kept: BTreeSet<State> = x
            .iter()
            .filter(|s| succ.get(s).into_iter().flatten().all(|t| x.contains(*t)))
            .cloned()
            .collect();
        if kept == x {
            return (x, rounds);
        }
        x = kept;
        rounds += 1;
    }
}

pub struct SafetyOracle {
    pub states: Vec<State>,
    pub reachable: BTreeSet<State>,
    pub winning: BTreeSet<State>,
    pub pessimistic_safe: bool,
    pub optimistic_safe: bool,
}

pub fn safety(iface: &Interface, phi: &Expr) -> SafetyOracle {
    let states = all_valuations(&iface.vars);
    let moves = single_moves(iface);
    let all: BTreeSet<(State, State)> = moves
        .iter()
        .map(|(_, s, t)| (s.clone(), t.clone()))
        .collect();
    let outs: BTreeSet<(State, State)> = moves
        .iter()
        .filter(|(l, _, _)| l.ends_with('!'))
        .map(|(_, s, t)| (s.clone(), t.clone()))
        .collect();
    let init = initial_states(iface);
    let safe: BTreeSet<State> = states
        .iter()
        .filter(|s| holds(&iface.vars, phi, s))
        .cloned()
        .collect();
    let reachable = reach(&init, &all);
    let (winning, _) = safe_core(&outs, &safe);
    SafetyOracle {
        pessimistic_safe: reachable.is_subset(&safe),
        optimistic_safe: init.is_subset(&winning),
        states,
        reachable,
        winning,
    }
}

/// The joint explicit arena of two interfaces.
pub struct ProductOracle {
    /// Left variables, then the right's variables the left lacks.
    pub vars: Vec<VarDecl>,
    pub states: Vec<State>,
    /// `(emitter side, action)` to the joint moves it produces.
    pub moves: BTreeMap<(usize, String), BTreeSet<(State, State)>>,
    pub err: BTreeSet<State>,
    pub compatible: BTreeSet<State>,
    pub rounds: usize,
    pub init: BTreeSet<State>,
}

impl ProductOracle {
    pub fn edges(&self) -> BTreeSet<(State, State)> {
        self.moves.values().flatten().cloned().collect()
    }

    /// Joint output moves restricted to compatible states on both ends,
    /// keyed by action.
    pub fn composite_outputs(&self) -> BTreeMap<String, BTreeSet<(State, State)>> {
        let mut out: BTreeMap<String, BTreeSet<(State, State)>> = BTreeMap::new();
        for ((_, a), edges) in &self.moves {
            let kept = out.entry(a.clone()).or_default();
            for (s, t) in edges {
                if self.compatible.contains(s) && self.compatible.contains(t) {
                    kept.insert((s.clone(), t.clone()));
                }
            }
        }
        out
    }
}

pub fn joint_vars(p: &Interface, q: &Interface) -> Vec<VarDecl> {
    let mut vars = p.vars.clone();
    for v in &q.vars {
        if !vars.iter().any(|w| w.name == v.name) {
            vars.push(v.clone());
        }
    }
    vars
}

pub fn product(p: &Interface, q: &Interface) -> ProductOracle {
    let vars = joint_vars(p, q);
    let states = all_valuations(&vars);
    let sides = [p, q];
    let pos: Vec<Vec<usize>> = sides
        .iter()
        .map(|i| positions(&vars, i.vars.iter().map(|v| v.name.as_str())))
        .collect();
    let mut moves: BTreeMap<(usize, String), BTreeSet<(State, State)>> = BTreeMap::new();
    let mut err = BTreeSet::new();
    for e in 0..2 {
        let l = 1 - e;
        let (emitter, listener) = (sides[e], sides[l]);
        for a in emitter.output_alphabet() {
            moves.entry((e, a.to_string())).or_default();
        }
        let l_globals: Vec<usize> = global_positions(listener)
            .iter()
            .map(|&i| pos[l][i])
            .collect();
        let l_locals: Vec<usize> = local_positions(listener)
            .iter()
            .map(|&i| pos[l][i])
            .collect();
        for s in &states {
            let view = project(s, &pos[e]);
            for (a, next) in output_successors(emitter, &view) {
                let mut t = s.clone();
                for (k, &i) in pos[e].iter().enumerate() {
                    t[i] = next[k];
                }
                let g: State = project(&t, &l_globals);
                let edges = moves.get_mut(&(e, a.clone())).unwrap();
                match input_responses(listener, &project(s, &pos[l]), &a, &g) {
                    InputResponse::NotListening => {
                        edges.insert((s.clone(), t));
                    }
                    InputResponse::Responses(rs) => {
                        if rs.is_empty() {
                            err.insert(s.clone());
                        }
                        for r in rs {
                            let mut t2 = t.clone();
                            for (k, &i) in l_locals.iter().enumerate() {
                                t2[i] = r[k];
                            }
                            edges.insert((s.clone(), t2));
                        }
                    }
                }
            }
        }
    }
    let all: BTreeSet<(State, State)> = moves.values().flatten().cloned().collect();
    let (attr, rounds) = attractor(&states, &all, &err);
    let compatible = states
        .iter()
        .filter(|s| !attr.contains(*s))
        .cloned()
        .collect();
    let init = states
        .iter()
        .filter(|s| {
            sides
                .iter()
                .zip(&pos)
                .all(|(i, ps)| holds(&i.vars, &i.init, &project(s, ps)))
        })
        .cloned()
        .collect();
    ProductOracle {
        vars,
        states,
        moves,
        err,
        compatible,
        rounds,
        init,
    }
}

/// Expected input responses of the composite of `p` and `q` in joint state
/// `s` (an element of `prod.states`): joint locals in `prod.vars` order.
pub fn composite_inputs(
    p: &Interface,
    q: &Interface,
    prod: &ProductOracle,
    s: &[i64],
    action: &str,
    update: &[i64],
) -> InputResponse {
    let vars = &prod.vars;
    let sides = [p, q];
    if !p.listens(action) && !q.listens(action) {
        return InputResponse::NotListening;
    }
    let joint_globals: Vec<usize> = (0..vars.len()).filter(|&i| vars[i].is_global()).collect();
    let joint_locals: Vec<usize> = (0..vars.len()).filter(|&i| !vars[i].is_global()).collect();
    let mut t = s.to_vec();
    for (k, &i) in joint_globals.iter().enumerate() {
        t[i] = update[k];
    }
    // Local successors per side: the accepted responses, or the unchanged
    // locals when the side does not listen.
    let mut candidates = vec![t.clone()];
    for side in sides {
        let pos = positions(vars, side.vars.iter().map(|v| v.name.as_str()));
        let locals: Vec<usize> = local_positions(side).iter().map(|&i| pos[i]).collect();
        let globals: Vec<usize> = global_positions(side).iter().map(|&i| pos[i]).collect();
        let g = project(&t, &globals);
        let responses = match input_responses(side, &project(s, &pos), action, &g) {
            InputResponse::NotListening => vec![project(s, &locals)],
            InputResponse::Responses(rs) => rs,
        };
        let mut extended = Vec::new();
        for c in &candidates {
            for r in &responses {
                let mut c = c.clone();
                for (k, &i) in locals.iter().enumerate() {
                    c[i] = r[k];
                }
                extended.push(c);
            }
        }
        candidates = extended;
    }
    let ok = prod.compatible.contains(s);
    let responses: BTreeSet<State> = candidates
        .into_iter()
        .filter(|t| ok && prod.compatible.contains(t))
        .map(|t| project(&t, &joint_locals))
        .collect();
    InputResponse::Responses(responses.into_iter().collect())
}

/// A refinement state: refining locals, refined locals, globals in the
/// refining interface's declaration order.
pub type Triple = (State, State, State);

pub struct RefinementOracle {
    pub relation: BTreeSet<Triple>,
    pub rounds: usize,
    pub refines: bool,
}

/// One interface's state split into locals and globals.
struct Sides {
    locals: Vec<usize>,
    /// Position of each refining-order global within this interface.
    globals: Vec<usize>,
}

impl Sides {
    fn new(iface: &Interface, global_names: &[String]) -> Self {
        Sides {
            locals: local_positions(iface),
            globals: positions(&iface.vars, global_names.iter().map(String::as_str)),
        }
    }

    fn assemble(&self, n: usize, locals: &[i64], globals: &[i64]) -> State {
        let mut s = vec![0; n];
        for (k, &i) in self.locals.iter().enumerate() {
            s[i] = locals[k];
        }
        for (k, &i) in self.globals.iter().enumerate() {
            s[i] = globals[k];
        }
        s
    }

    fn split(&self, s: &[i64]) -> (State, State) {
        (project(s, &self.locals), project(s, &self.globals))
    }

    /// `update` given in refining global order, returned in this
    /// interface's global declaration order.
    fn reorder(&self, iface: &Interface, update: &[i64]) -> State {
        let own = global_positions(iface);
        own.iter()
            .map(|i| {
                let k = self.globals.iter().position(|j| j == i).unwrap();
                update[k]
            })
            .collect()
    }
}

/// Greatest alternating simulation between `p` (refining) and `q`, assuming
/// the structural preconditions hold.
pub fn refinement(p: &Interface, q: &Interface) -> RefinementOracle {
    let global_names: Vec<String> = p.globals().map(|v| v.name.clone()).collect();
    let gdecls: Vec<VarDecl> = global_names
        .iter()
        .map(|n| p.vars.iter().find(|v| &v.name == n).unwrap().clone())
        .collect();
    let sp = Sides::new(p, &global_names);
    let sq = Sides::new(q, &global_names);
    let p_locals: Vec<VarDecl> = p.locals().cloned().collect();
    let q_locals: Vec<VarDecl> = q.locals().cloned().collect();
    let gvals = all_valuations(&gdecls);
    let mut all = BTreeSet::new();
    for pl in all_valuations(&p_locals) {
        for ql in all_valuations(&q_locals) {
            for g in &gvals {
                all.insert((pl.clone(), ql.clone(), g.clone()));
            }
        }
    }
    let q_inputs: Vec<&str> = q.input_alphabet().collect();
    let responses =
        |iface: &Interface, sides: &Sides, locals: &[i64], g: &[i64], a: &str, g2: &[i64]| {
            let s = sides.assemble(iface.vars.len(), locals, g);
            match input_responses(iface, &s, a, &sides.reorder(iface, g2)) {
                InputResponse::NotListening => Vec::new(),
                InputResponse::Responses(rs) => rs,
            }
        };
    let mut r = all.clone();
    let mut rounds = 0;
    loop {
        let next: BTreeSet<Triple> = r
            .iter()
            .filter(|(pl, ql, g)| {
                let input_ok = q_inputs.iter().all(|a| {
                    gvals.iter().all(|g2| {
                        let ps = responses(p, &sp, pl, g, a, g2);
                        responses(q, &sq, ql, g, a, g2).iter().all(|rq| {
                            ps.iter()
                                .any(|rp| r.contains(&(rp.clone(), rq.clone(), g2.clone())))
                        })
                    })
                });
                let output_ok = || {
                    let ps = sp.assemble(p.vars.len(), pl, g);
                    let qs = sq.assemble(q.vars.len(), ql, g);
                    let q_moves = output_successors(q, &qs);
                    output_successors(p, &ps).iter().all(|(a, pn)| {
                        let (pl2, g2) = sp.split(pn);
                        q_moves.iter().any(|(b, qn)| {
                            let (ql2, qg2) = sq.split(qn);
                            a == b && qg2 == g2 && r.contains(&(pl2.clone(), ql2, g2.clone()))
                        })
                    })
                };
                input_ok && output_ok()
            })
            .cloned()
            .collect();
        if next == r {
            break;
        }
        r = next;
        rounds += 1;
    }
    let p_init = initial_states(p);
    let refines = initial_states(q).iter().all(|qs| {
        let (ql, g) = sq.split(qs);
        p_init.iter().any(|ps| {
            let (pl, pg) = sp.split(ps);
            pg == g && r.contains(&(pl, ql.clone(), g.clone()))
        })
    });
    RefinementOracle {
        relation: r,
        rounds,
        refines,
    }
}

/// Action names paired with global updates.
pub type Labelled = BTreeSet<(String, State)>;

/// Input moves `(action, update)` accepted at an interface state, and
/// output moves `(action, update)` it can produce.
pub fn observable_moves(iface: &Interface, state: &[i64]) -> (Labelled, Labelled) {
    let globals = global_positions(iface);
    let mut accepted = BTreeSet::new();
    for a in iface.input_alphabet() {
        for g in all_valuations(&globals_of(iface)) {
            if let InputResponse::Responses(rs) = input_responses(iface, state, a, &g) {
                if !rs.is_empty() {
                    accepted.insert((a.to_string(), g));
                }
            }
        }
    }
    let produced = output_successors(iface, state)
        .into_iter()
        .map(|(a, t)| (a, project(&t, &globals)))
        .collect();
    (accepted, produced)
}

/// Rebuilds the two interface states of a triple.
pub fn triple_states(p: &Interface, q: &Interface, t: &Triple) -> (State, State) {
    let global_names: Vec<String> = p.globals().map(|v| v.name.clone()).collect();
    let sp = Sides::new(p, &global_names);
    let sq = Sides::new(q, &global_names);
    (
        sp.assemble(p.vars.len(), &t.0, &t.2),
        sq.assemble(q.vars.len(), &t.1, &t.2),
    )
}

/// Maps an update in `iface`'s global order to `other`'s global order.
pub fn reorder_globals(from: &Interface, to: &Interface, update: &[i64]) -> State {
    let names: Vec<&str> = from.globals().map(|v| v.name.as_str()).collect();
    to.globals()
        .map(|v| update[names.iter().position(|n| *n == v.name).unwrap()])
        .collect()
}
