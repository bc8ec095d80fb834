//! Turning predicates back into `.si` syntax.
//!
//! A predicate is split into the cubes of its diagram. Because every bit
//! belongs to exactly one model variable, a cube is a product of per-variable
//! value sets, which prints as a conjunction of membership tests. Assignments
//! must be deterministic, so value sets on assigned slots are expanded into
//! one command per combination.

use std::collections::BTreeSet;

use crate::kernel::Bdd;
use crate::model::{Domain, GuardedCommand, Space, VarDecl, VarId};
use crate::syntax::{BinaryOp, Direction, Expr, UnaryOp};

/// Values of one slot allowed by a cube.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Values {
    All,
    Some(Vec<i64>),
}

fn slot_values(space: &Space, cube: &[Option<bool>], id: VarId, primed: bool) -> Values {
    let var = space.var(id);
    let bits = var.bits(primed);
    let free: Vec<usize> = (0..bits.len())
        .filter(|&i| cube[bits[i] as usize].is_none())
        .collect();
    if free.len() == bits.len() {
        return Values::All;
    }
    let width = bits.len();
    let mut base = 0u64;
    for (i, &b) in bits.iter().enumerate() {
        if cube[b as usize] == Some(true) {
            base |= 1 << (width - 1 - i);
        }
    }
    let mut out = Vec::new();
    for combo in 0u64..(1u64 << free.len()) {
        let mut code = base;
        for (j, &i) in free.iter().enumerate() {
            if combo >> j & 1 == 1 {
                code |= 1 << (width - 1 - i);
            }
        }
        let v = var.domain.lo() + code as i64;
        if var.domain.contains(v) {
            out.push(v);
        }
    }
    out.sort_unstable();
    Values::Some(out)
}

/// `name ∈ values` as an expression; `values` is sorted, nonempty, and a
/// strict subset of the domain.
fn membership(name: &str, primed: bool, domain: Domain, values: &[i64]) -> Expr {
    let var = || Expr::var(name, primed);
    if domain.is_bool() {
        return if values == [1] {
            var()
        } else {
            Expr::unary(UnaryOp::Not, var())
        };
    }
    let (lo, hi) = (values[0], values[values.len() - 1]);
    if values.len() == 1 {
        return Expr::binary(BinaryOp::Eq, var(), Expr::int(lo));
    }
    if (hi - lo) as usize + 1 == values.len() {
        let mut parts = Vec::new();
        if lo > domain.lo() {
            parts.push(Expr::binary(BinaryOp::Ge, var(), Expr::int(lo)));
        }
        if hi < domain.hi() {
            parts.push(Expr::binary(BinaryOp::Le, var(), Expr::int(hi)));
        }
        return Expr::conjunction(parts);
    }
    Expr::disjunction(
        values
            .iter()
            .map(|&v| Expr::binary(BinaryOp::Eq, var(), Expr::int(v))),
    )
}

/// Conjunction of membership tests for the given slots, or `None` when the
/// cube admits no in-domain value for some slot.
fn cube_guard(
    space: &Space,
    cube: &[Option<bool>],
    vars: &[VarDecl],
    slots: &[(usize, VarId, bool)],
) -> Option<Expr> {
    let mut parts = Vec::new();
    for &(i, id, primed) in slots {
        match slot_values(space, cube, id, primed) {
            Values::All => {}
            Values::Some(vals) if vals.is_empty() => return None,
            Values::Some(vals) => {
                if vals.len() as u64 != vars[i].domain.size() {
                    parts.push(membership(&vars[i].name, primed, vars[i].domain, &vals));
                }
            }
        }
    }
    Some(Expr::conjunction(parts))
}

/// A state predicate over the unprimed copies of `ids` as an expression.
/// Returns `true` for the full domain and `false` for the empty set.
pub fn predicate_expr(space: &mut Space, f: Bdd, vars: &[VarDecl], ids: &[VarId]) -> Expr {
    let dom = space.domain_all(ids, false);
    let f = space.manager_mut().and(f, dom);
    if f == dom {
        return Expr::bool(true);
    }
    let slots: Vec<(usize, VarId, bool)> = ids
        .iter()
        .enumerate()
        .map(|(i, &id)| (i, id, false))
        .collect();
    let cubes = space.manager().cubes(f);
    Expr::disjunction(
        cubes
            .iter()
            .filter_map(|c| cube_guard(space, c, vars, &slots)),
    )
}

/// Guarded commands whose compiled relation is exactly `rel`.
///
/// Output commands assign every variable; input commands read primed
/// globals in their guards and assign every local. Either way no variable
/// is left to the frame rule, so the commands describe `rel` and nothing
/// more, provided `rel` implies the domain constraint on both copies.
pub fn relation_commands(
    space: &mut Space,
    rel: Bdd,
    vars: &[VarDecl],
    ids: &[VarId],
    direction: Direction,
) -> Vec<GuardedCommand> {
    let mut guard_slots: Vec<(usize, VarId, bool)> = ids
        .iter()
        .enumerate()
        .map(|(i, &id)| (i, id, false))
        .collect();
    let mut assign_slots = Vec::new();
    for (i, (v, &id)) in vars.iter().zip(ids).enumerate() {
        match direction {
            Direction::Output => assign_slots.push((i, id)),
            Direction::Input if v.is_global() => guard_slots.push((i, id, true)),
            Direction::Input => assign_slots.push((i, id)),
        }
    }
    let mut seen = BTreeSet::new();
    let mut commands = Vec::new();
    for cube in space.manager().cubes(rel) {
        let Some(guard) = cube_guard(space, &cube, vars, &guard_slots) else {
            continue;
        };
        let mut choices: Vec<Vec<i64>> = Vec::new();
        for &(i, id) in &assign_slots {
            let vals = match slot_values(space, &cube, id, true) {
                Values::All => vars[i].domain.values().collect(),
                Values::Some(vals) => vals,
            };
            choices.push(vals);
        }
        if choices.iter().any(Vec::is_empty) {
            continue;
        }
        let mut combo = vec![0usize; choices.len()];
        loop {
            let assigns: Vec<(String, Expr)> = assign_slots
                .iter()
                .zip(&combo)
                .zip(&choices)
                .map(|((&(i, _), &k), vals)| {
                    (vars[i].name.clone(), vars[i].domain.literal(vals[k]))
                })
                .collect();
            let key = format!("{guard:?}{assigns:?}");
            if seen.insert(key) {
                commands.push(GuardedCommand {
                    guard: guard.clone(),
                    assigns,
                });
            }
            // Odometer step over the assignment choices.
            let mut pos = 0;
            while pos < combo.len() {
                combo[pos] += 1;
                if combo[pos] < choices[pos].len() {
                    break;
                }
                combo[pos] = 0;
                pos += 1;
            }
            if pos == combo.len() {
                break;
            }
        }
    }
    commands
}
