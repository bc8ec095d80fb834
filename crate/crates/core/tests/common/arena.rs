//! Random explicit arenas, encoded symbolically, for checking the game
//! fixpoints against plain graph algorithms.

use std::collections::BTreeSet;

use rand::Rng;
use sociable::game::Arena;
use sociable::kernel::Bdd;
use sociable::model::{all_valuations, Domain, Scope, Space, VarDecl, VarId};

use super::gen::Rng8;
use super::oracle::{self, State};

pub type Edges = BTreeSet<(State, State)>;

pub struct Random {
    pub space: Space,
    pub arena: Arena,
    pub states: Vec<State>,
    pub out: Edges,
    pub inp: Edges,
}

impl Random {
    pub fn set(&mut self, states: &BTreeSet<State>) -> Bdd {
        let cubes: Vec<Bdd> = states
            .iter()
            .map(|s| self.space.state_cube(&self.arena.ids, s, false))
            .collect();
        self.space.manager_mut().or_all(cubes)
    }

    pub fn explicit(&mut self, f: Bdd) -> BTreeSet<State> {
        super::states(&mut self.space, f, &self.arena.ids.clone())
    }

    pub fn random_subset(&self, rng: &mut Rng8, density: f64) -> BTreeSet<State> {
        self.states
            .iter()
            .filter(|_| rng.gen_bool(density))
            .cloned()
            .collect()
    }
}

pub fn random_domain(rng: &mut Rng8) -> Domain {
    if rng.gen_bool(0.3) {
        Domain::Bool
    } else {
        let lo = rng.gen_range(-2..=2);
        Domain::Range {
            lo,
            hi: lo + rng.gen_range(0..=5),
        }
    }
}

pub fn relation(space: &mut Space, ids: &[VarId], edges: &Edges) -> Bdd {
    let parts: Vec<Bdd> = edges
        .iter()
        .map(|(s, t)| {
            let a = space.state_cube(ids, s, false);
            let b = space.state_cube(ids, t, true);
            space.manager_mut().and(a, b)
        })
        .collect();
    space.manager_mut().or_all(parts)
}

/// One to three variables with random domains and random edge sets for
/// both players.
pub fn random_arena(rng: &mut Rng8) -> Random {
    let mut space = Space::new();
    let n = rng.gen_range(1..=3);
    let mut decls = Vec::new();
    let mut ids = Vec::new();
    for k in 0..n {
        let domain = random_domain(rng);
        let name = format!("v{k}");
        ids.push(space.declare(&name, domain).unwrap());
        decls.push(VarDecl {
            name: name.clone(),
            domain,
            scope: Scope::Local,
        });
    }
    let states = all_valuations(&decls);
    let density = rng.gen_range(0.5..3.0) / states.len() as f64;
    let pick = |rng: &mut Rng8| -> Edges {
        let mut e = Edges::new();
        for s in &states {
            for t in &states {
                if rng.gen_bool(density.min(1.0)) {
                    e.insert((s.clone(), t.clone()));
                }
            }
        }
        e
    };
    let out = pick(rng);
    let inp = pick(rng);
    let t_out = relation(&mut space, &ids, &out);
    let t_in = relation(&mut space, &ids, &inp);
    let arena = Arena::new(&mut space, &ids, t_out, t_in);
    Random {
        space,
        arena,
        states,
        out,
        inp,
    }
}

pub fn preimage(edges: &Edges, x: &BTreeSet<State>) -> BTreeSet<State> {
    edges
        .iter()
        .filter(|(_, t)| x.contains(t))
        .map(|(s, _)| s.clone())
        .collect()
}

pub fn image(edges: &Edges, x: &BTreeSet<State>) -> BTreeSet<State> {
    edges
        .iter()
        .filter(|(s, _)| x.contains(s))
        .map(|(_, t)| t.clone())
        .collect()
}

/// Attractor and winning set on one random arena: each dual to the other
/// as the same node, each equal to its explicit fixpoint with the same
/// round count. Returns the attractor's round count.
pub fn duality(rng: &mut Rng8) -> usize {
    let mut r = random_arena(rng);
    let err_states = r.random_subset(rng, 0.2);
    let err = r.set(&err_states);
    let attr = r.arena.attr_output(&mut r.space, err).unwrap();
    let safe = r.arena.complement(&mut r.space, err);
    let win = r.arena.win_safe(&mut r.space, safe).unwrap();
    let outside = r.arena.complement(&mut r.space, attr.set);
    assert_eq!(win.set, outside, "duality must hold on the node itself");
    assert_eq!(win.iterations, attr.iterations);

    let (ex_attr, rounds) = oracle::attractor(&r.states, &r.out, &err_states);
    assert_eq!(r.explicit(attr.set), ex_attr);
    assert_eq!(attr.iterations, rounds);
    let safe_states: BTreeSet<State> = r
        .states
        .iter()
        .filter(|s| !err_states.contains(*s))
        .cloned()
        .collect();
    let (ex_win, rounds) = oracle::safe_core(&r.out, &safe_states);
    assert_eq!(r.explicit(win.set), ex_win);
    assert_eq!(win.iterations, rounds);
    // Input moves never help the output player.
    let swapped = Arena::new(
        &mut r.space,
        &r.arena.ids.clone(),
        r.arena.t_out,
        r.arena.t_out,
    );
    assert_eq!(swapped.attr_output(&mut r.space, err).unwrap(), attr);
    attr.iterations
}

/// Attractor, winning set and reachability on one random arena stop within
/// the number of states; reachability rings are the breadth-first layers.
pub fn bounded(rng: &mut Rng8) {
    let mut r = random_arena(rng);
    let bound = r.arena.state_count(&mut r.space) as usize;
    assert_eq!(bound, r.states.len());
    let target = r.random_subset(rng, 0.2);
    let target_bdd = r.set(&target);
    let attr = r.arena.attr_output(&mut r.space, target_bdd).unwrap();
    assert!(attr.iterations <= bound);
    let win = r.arena.win_safe(&mut r.space, r.arena.domain).unwrap();
    assert!(win.iterations <= bound);
    let all = r.arena.all_moves(&mut r.space);
    let reach = r.arena.reachable(&mut r.space, target_bdd, all).unwrap();
    assert!(reach.iterations() <= bound);

    // Rings are the breadth-first layers.
    let mut edges = r.out.clone();
    edges.extend(r.inp.iter().cloned());
    let mut layer = target.clone();
    for (i, &ring) in reach.rings.iter().enumerate() {
        assert_eq!(r.explicit(ring), layer, "ring {i}");
        let next: BTreeSet<State> = layer.union(&image(&edges, &layer)).cloned().collect();
        layer = next;
    }
    assert_eq!(r.explicit(reach.set), oracle::reach(&target, &edges));
}
