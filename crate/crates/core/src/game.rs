//! Two-player game primitives over a symbolic state space.
//!
//! Output moves belong to the system and can never be blocked; input moves
//! belong to the environment, which is assumed to cooperate. Every fixpoint
//! here is built from the single predecessor operator [`Arena::pre`].

use thiserror::Error;

use crate::kernel::{Bdd, RenameMap, VarSet};
use crate::model::{Space, VarId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    /// The environment, choosing input moves.
    Input,
    /// The system, choosing output moves.
    Output,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GameError {
    #[error("state set depends on bit {bit}, which is not an unprimed state bit of the arena")]
    NotAStateSet { bit: u32 },
}

/// Result of a fixpoint computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fixpoint {
    pub set: Bdd,
    /// Number of rounds that changed the approximation.
    pub iterations: usize,
}

/// Forward reachability with its distance rings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reach {
    pub set: Bdd,
    /// `rings[i]` holds the states reachable in at most `i` steps.
    pub rings: Vec<Bdd>,
}

impl Reach {
    pub fn iterations(&self) -> usize {
        self.rings.len() - 1
    }
}

/// State variables plus the move relations of both players.
#[derive(Debug, Clone)]
pub struct Arena {
    pub ids: Vec<VarId>,
    /// Output-player moves, over unprimed and primed bits.
    pub t_out: Bdd,
    /// Input-player moves, over unprimed and primed bits.
    pub t_in: Bdd,
    /// Domain constraint on the unprimed copy.
    pub domain: Bdd,
    unprimed: VarSet,
    primed: VarSet,
    swap: RenameMap,
    state_bits: Vec<u32>,
}

impl Arena {
    pub fn new(space: &mut Space, ids: &[VarId], t_out: Bdd, t_in: Bdd) -> Self {
        let domain = space.domain_all(ids, false);
        let mut state_bits = space.bits(ids, false);
        state_bits.sort_unstable();
        Arena {
            ids: ids.to_vec(),
            t_out,
            t_in,
            domain,
            unprimed: space.var_set(ids, false),
            primed: space.var_set(ids, true),
            swap: space.prime_swap(ids),
            state_bits,
        }
    }

    pub fn moves(&self, player: Player) -> Bdd {
        match player {
            Player::Input => self.t_in,
            Player::Output => self.t_out,
        }
    }

    /// Both players' moves together.
    pub fn all_moves(&self, space: &mut Space) -> Bdd {
        space.manager_mut().or(self.t_out, self.t_in)
    }

    /// Complement of a state set within the domain.
    pub fn complement(&self, space: &mut Space, x: Bdd) -> Bdd {
        let m = space.manager_mut();
        let nx = m.not(x);
        m.and(nx, self.domain)
    }

    /// Rejects predicates that mention anything but unprimed state bits.
    pub fn check_state_set(&self, space: &Space, x: Bdd) -> Result<(), GameError> {
        for bit in space.manager().support(x) {
            if self.state_bits.binary_search(&bit).is_err() {
                return Err(GameError::NotAStateSet { bit });
            }
        }
        Ok(())
    }

    /// States with a `t`-successor in `x`.
    pub fn pre(&self, space: &mut Space, t: Bdd, x: Bdd) -> Result<Bdd, GameError> {
        self.check_state_set(space, x)?;
        Ok(self.pre_unchecked(space, t, x))
    }

    fn pre_unchecked(&self, space: &mut Space, t: Bdd, x: Bdd) -> Bdd {
        let m = space.manager_mut();
        let next = m.rename(x, &self.swap);
        m.and_exists(&self.primed, t, next)
    }

    /// States reachable in one `t`-step from `x`.
    pub fn post(&self, space: &mut Space, t: Bdd, x: Bdd) -> Result<Bdd, GameError> {
        self.check_state_set(space, x)?;
        Ok(self.post_unchecked(space, t, x))
    }

    fn post_unchecked(&self, space: &mut Space, t: Bdd, x: Bdd) -> Bdd {
        let m = space.manager_mut();
        let image = m.and_exists(&self.unprimed, t, x);
        m.rename(image, &self.swap)
    }

    /// States from which output moves alone can force a visit to `err`:
    /// `µY. err ∨ pre(T_out, Y)`. Input moves never extend the attractor.
    pub fn attr_output(&self, space: &mut Space, err: Bdd) -> Result<Fixpoint, GameError> {
        self.check_state_set(space, err)?;
        let err = space.manager_mut().and(err, self.domain);
        let mut y = err;
        let mut iterations = 0;
        loop {
            let p = self.pre_unchecked(space, self.t_out, y);
            let m = space.manager_mut();
            let grown = m.or(err, p);
            let next = m.and(grown, self.domain);
            if next == y {
                return Ok(Fixpoint { set: y, iterations });
            }
            y = next;
            iterations += 1;
        }
    }

    /// Largest set of `safe` states the environment can keep the system in,
    /// given that output moves cannot be blocked:
    /// `νX. safe ∧ ¬pre(T_out, ¬X)`.
    pub fn win_safe(&self, space: &mut Space, safe: Bdd) -> Result<Fixpoint, GameError> {
        self.check_state_set(space, safe)?;
        let safe = space.manager_mut().and(safe, self.domain);
        let mut x = safe;
        let mut iterations = 0;
        loop {
            let outside = self.complement(space, x);
            let escape = self.pre_unchecked(space, self.t_out, outside);
            let m = space.manager_mut();
            let stay = m.not(escape);
            let next = m.and(safe, stay);
            if next == x {
                return Ok(Fixpoint { set: x, iterations });
            }
            x = next;
            iterations += 1;
        }
    }

    /// `µX. init ∨ post(t, X)`, keeping every intermediate ring.
    pub fn reachable(&self, space: &mut Space, init: Bdd, t: Bdd) -> Result<Reach, GameError> {
        self.check_state_set(space, init)?;
        let init = space.manager_mut().and(init, self.domain);
        let mut rings = vec![init];
        let mut current = init;
        loop {
            let image = self.post_unchecked(space, t, current);
            let next = space.manager_mut().or(current, image);
            if next == current {
                return Ok(Reach {
                    set: current,
                    rings,
                });
            }
            rings.push(next);
            current = next;
        }
    }

    /// A shortest `t`-path from `init` to `target`, one valuation per state,
    /// or `None` when `target` is unreachable.
    pub fn extract_trace(
        &self,
        space: &mut Space,
        init: Bdd,
        t: Bdd,
        target: Bdd,
    ) -> Result<Option<Vec<Vec<i64>>>, GameError> {
        self.check_state_set(space, target)?;
        let reach = self.reachable(space, init, t)?;
        let Some(depth) = reach
            .rings
            .iter()
            .position(|&ring| !space.manager_mut().and(ring, target).is_false())
        else {
            return Ok(None);
        };
        let slots: Vec<(VarId, bool)> = self.ids.iter().map(|&id| (id, false)).collect();
        let end = space.manager_mut().and(reach.rings[depth], target);
        let mut state = space.pick_valuation(end, &slots).expect("nonempty");
        let mut path = vec![state.clone()];
        for ring in reach.rings[..depth].iter().rev() {
            let here = space.state_cube(&self.ids, &state, false);
            let before = self.pre_unchecked(space, t, here);
            let candidates = space.manager_mut().and(before, *ring);
            state = space
                .pick_valuation(candidates, &slots)
                .expect("ring predecessor exists");
            path.push(state.clone());
        }
        path.reverse();
        Ok(Some(path))
    }

    /// Number of in-domain states in `x`.
    pub fn count(&self, space: &mut Space, x: Bdd) -> u128 {
        space.count_states(x, &self.ids)
    }

    /// Number of in-domain states of the arena.
    pub fn state_count(&self, space: &mut Space) -> u128 {
        space.count_states(self.domain, &self.ids)
    }
}
