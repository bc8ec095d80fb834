//! Binary encoding of finite-domain model variables on top of the kernel.
//!
//! Variables are laid out in declaration order, each as `ceil(log2(size))`
//! bits, most significant first, with every primed twin directly after its
//! unprimed bit. Codes past the end of a non-power-of-two domain are excluded
//! by the per-variable domain constraint.

use std::collections::HashMap;

use thiserror::Error;

use super::Domain;
use crate::kernel::{Bdd, Manager, RenameMap, VarSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub usize);

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EncodingError {
    #[error("variable `{name}` declared with domain {existing} and {requested}")]
    DomainMismatch {
        name: String,
        existing: Domain,
        requested: Domain,
    },
}

#[derive(Debug, Clone)]
pub struct SpaceVar {
    pub key: String,
    pub domain: Domain,
    pub unprimed: Vec<u32>,
    pub primed: Vec<u32>,
}

impl SpaceVar {
    pub fn bits(&self, primed: bool) -> &[u32] {
        if primed {
            &self.primed
        } else {
            &self.unprimed
        }
    }
}

/// A kernel manager together with the model variables encoded in it.
#[derive(Debug, Default)]
pub struct Space {
    mgr: Manager,
    vars: Vec<SpaceVar>,
    by_key: HashMap<String, VarId>,
    domain_cache: HashMap<(VarId, bool), Bdd>,
}

impl Space {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn manager(&self) -> &Manager {
        &self.mgr
    }

    pub fn manager_mut(&mut self) -> &mut Manager {
        &mut self.mgr
    }

    /// Registers a variable, or returns the existing one when the key is known
    /// with the same domain.
    pub fn declare(&mut self, key: &str, domain: Domain) -> Result<VarId, EncodingError> {
        if let Some(&id) = self.by_key.get(key) {
            let existing = self.vars[id.0].domain;
            if existing != domain {
                return Err(EncodingError::DomainMismatch {
                    name: key.to_string(),
                    existing,
                    requested: domain,
                });
            }
            return Ok(id);
        }
        let mut unprimed = Vec::new();
        let mut primed = Vec::new();
        for bit in 0..domain.bits() {
            let (u, p) = self.mgr.add_bit_pair(key, bit);
            unprimed.push(u);
            primed.push(p);
        }
        let id = VarId(self.vars.len());
        self.vars.push(SpaceVar {
            key: key.to_string(),
            domain,
            unprimed,
            primed,
        });
        self.by_key.insert(key.to_string(), id);
        Ok(id)
    }

    pub fn lookup(&self, key: &str) -> Option<VarId> {
        self.by_key.get(key).copied()
    }

    pub fn var(&self, id: VarId) -> &SpaceVar {
        &self.vars[id.0]
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn bits(&self, ids: &[VarId], primed: bool) -> Vec<u32> {
        ids.iter()
            .flat_map(|&id| self.vars[id.0].bits(primed).iter().copied())
            .collect()
    }

    pub fn var_set(&mut self, ids: &[VarId], primed: bool) -> VarSet {
        let bits = self.bits(ids, primed);
        self.mgr.var_set(&bits).expect("space bits are registered")
    }

    /// Unprimed and primed bits of `ids` together.
    pub fn both_set(&mut self, ids: &[VarId]) -> VarSet {
        let mut bits = self.bits(ids, false);
        bits.extend(self.bits(ids, true));
        self.mgr.var_set(&bits).expect("space bits are registered")
    }

    /// Swaps unprimed and primed bits of `ids`.
    pub fn prime_swap(&self, ids: &[VarId]) -> RenameMap {
        let bits = self.bits(ids, false);
        self.mgr.swap_map(&bits).expect("space bits are registered")
    }

    /// `var = value` (on the primed copy when `primed`); false off-domain.
    pub fn value_is(&mut self, id: VarId, primed: bool, value: i64) -> Bdd {
        let var = &self.vars[id.0];
        if !var.domain.contains(value) {
            return self.mgr.zero();
        }
        let code = (value - var.domain.lo()) as u64;
        let bits = var.bits(primed);
        let width = bits.len();
        let literals: Vec<(u32, bool)> = bits
            .iter()
            .enumerate()
            .map(|(i, &b)| (b, (code >> (width - 1 - i)) & 1 == 1))
            .collect();
        self.mgr.cube(&literals).expect("space bits are registered")
    }

    /// `(value, var = value)` for every value in the domain.
    pub fn cases(&mut self, id: VarId, primed: bool) -> Vec<(i64, Bdd)> {
        let domain = self.vars[id.0].domain;
        domain
            .values()
            .map(|v| (v, self.value_is(id, primed, v)))
            .collect()
    }

    pub fn domain(&mut self, id: VarId, primed: bool) -> Bdd {
        if let Some(&d) = self.domain_cache.get(&(id, primed)) {
            return d;
        }
        let domain = self.vars[id.0].domain;
        let full = 1u64 << self.vars[id.0].unprimed.len();
        let d = if domain.size() == full {
            self.mgr.one()
        } else {
            let cases: Vec<Bdd> = self.cases(id, primed).into_iter().map(|(_, c)| c).collect();
            self.mgr.or_all(cases)
        };
        self.domain_cache.insert((id, primed), d);
        d
    }

    pub fn domain_all(&mut self, ids: &[VarId], primed: bool) -> Bdd {
        let parts: Vec<Bdd> = ids.iter().map(|&id| self.domain(id, primed)).collect();
        self.mgr.and_all(parts)
    }

    /// Domain constraint on both copies of `ids`.
    pub fn domain_both(&mut self, ids: &[VarId]) -> Bdd {
        let u = self.domain_all(ids, false);
        let p = self.domain_all(ids, true);
        self.mgr.and(u, p)
    }

    /// `var' = var`.
    pub fn frame(&mut self, id: VarId) -> Bdd {
        let var = self.vars[id.0].clone();
        let mut acc = self.mgr.one();
        for (&u, &p) in var.unprimed.iter().zip(&var.primed).rev() {
            let fu = self.mgr.mk_var(u).expect("registered");
            let fp = self.mgr.mk_var(p).expect("registered");
            let eq = self.mgr.iff(fu, fp);
            acc = self.mgr.and(eq, acc);
        }
        acc
    }

    pub fn frame_all(&mut self, ids: &[VarId]) -> Bdd {
        let parts: Vec<Bdd> = ids.iter().map(|&id| self.frame(id)).collect();
        self.mgr.and_all(parts)
    }

    /// The single valuation `ids = values`.
    pub fn state_cube(&mut self, ids: &[VarId], values: &[i64], primed: bool) -> Bdd {
        let parts: Vec<Bdd> = ids
            .iter()
            .zip(values)
            .map(|(&id, &v)| self.value_is(id, primed, v))
            .collect();
        self.mgr.and_all(parts)
    }

    /// Reads the value of a variable from a total bit assignment.
    pub fn decode(&self, assignment: &[bool], id: VarId, primed: bool) -> i64 {
        let var = &self.vars[id.0];
        let code = var
            .bits(primed)
            .iter()
            .fold(0i64, |acc, &b| (acc << 1) | assignment[b as usize] as i64);
        var.domain.lo() + code
    }

    pub fn decode_all(&self, assignment: &[bool], ids: &[VarId], primed: bool) -> Vec<i64> {
        ids.iter()
            .map(|&id| self.decode(assignment, id, primed))
            .collect()
    }

    /// Every in-domain valuation of the given `(variable, primed)` slots that
    /// satisfies `f`. `f` must not depend on bits outside those slots.
    pub fn valuations(&mut self, f: Bdd, slots: &[(VarId, bool)]) -> Vec<Vec<i64>> {
        let mut bits = Vec::new();
        for &(id, primed) in slots {
            bits.extend_from_slice(self.vars[id.0].bits(primed));
        }
        let set = self.mgr.var_set(&bits).expect("registered");
        let minterms = self
            .mgr
            .minterms(f, &set)
            .expect("function support must lie within the requested slots");
        let mut assignment = vec![false; self.mgr.num_vars()];
        let mut out = Vec::with_capacity(minterms.len());
        for m in minterms {
            for (&b, &v) in set.vars().iter().zip(&m) {
                assignment[b as usize] = v;
            }
            let vals: Vec<i64> = slots
                .iter()
                .map(|&(id, primed)| self.decode(&assignment, id, primed))
                .collect();
            let in_domain = slots
                .iter()
                .zip(&vals)
                .all(|(&(id, _), &v)| self.vars[id.0].domain.contains(v));
            if in_domain {
                out.push(vals);
            }
        }
        out.sort();
        out
    }

    /// One satisfying valuation of the slots, if any.
    pub fn pick_valuation(&mut self, f: Bdd, slots: &[(VarId, bool)]) -> Option<Vec<i64>> {
        let dom: Vec<Bdd> = slots.iter().map(|&(id, p)| self.domain(id, p)).collect();
        let dom = self.mgr.and_all(dom);
        let g = self.mgr.and(f, dom);
        let assignment = self.mgr.pick_cube(g)?;
        Some(
            slots
                .iter()
                .map(|&(id, primed)| self.decode(&assignment, id, primed))
                .collect(),
        )
    }

    /// Number of in-domain valuations of `ids` (unprimed) satisfying `f`.
    pub fn count_states(&mut self, f: Bdd, ids: &[VarId]) -> u128 {
        let dom = self.domain_all(ids, false);
        let g = self.mgr.and(f, dom);
        let set = self.var_set(ids, false);
        self.mgr
            .sat_count(g, &set)
            .expect("state predicate must be over the given variables")
    }
}
