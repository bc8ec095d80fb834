//! Reduced ordered binary decision diagrams.
//!
//! A [`Manager`] owns every node it creates. Nodes are hash-consed through a
//! unique table, so two handles denote the same Boolean function iff they are
//! the same [`Bdd`] value. There are no complement edges and no garbage
//! collection; the operation cache grows until [`Manager::clear_cache`].
//!
//! Variables are always registered in pairs: an unprimed state bit at an even
//! index and its primed twin immediately after it. Renaming is restricted to
//! swapping twins, which is all the transition-relation machinery needs.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU32, Ordering};

use thiserror::Error;

static NEXT_MANAGER_ID: AtomicU32 = AtomicU32::new(1);

const FALSE_INDEX: u32 = 0;
const TRUE_INDEX: u32 = 1;
const TERMINAL_VAR: u32 = u32::MAX;

/// Handle to a node owned by a particular [`Manager`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bdd {
    manager: u32,
    index: u32,
}

impl Bdd {
    /// Position of the node inside its manager's store.
    pub fn index(self) -> u32 {
        self.index
    }

    pub fn is_false(self) -> bool {
        self.index == FALSE_INDEX
    }

    pub fn is_true(self) -> bool {
        self.index == TRUE_INDEX
    }

    pub fn is_constant(self) -> bool {
        self.index <= TRUE_INDEX
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("bit variable {0} is not registered in this manager")]
    UnregisteredVar(u32),
    #[error("operand belongs to a different manager")]
    ForeignOperand,
    #[error("rename must map a bit to its twin, got {from} -> {to}")]
    NonTwinRename { from: u32, to: u32 },
    #[error("rename map is not injective on bit {0}")]
    NonInjectiveRename(u32),
    #[error("function depends on bit {0} outside the counting set")]
    SupportNotCovered(u32),
    #[error("cannot count over {0} bits (limit is 127)")]
    TooManyBits(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BitKind {
    Unprimed,
    Primed,
}

/// A registered decision variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitVar {
    pub index: u32,
    pub kind: BitKind,
    /// Model variable this bit encodes.
    pub origin: String,
    /// Bit position within the model variable, 0 = most significant.
    pub bit: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    And,
    Or,
    Xor,
    Implies,
}

impl BinOp {
    fn eval(self, a: bool, b: bool) -> bool {
        match self {
            BinOp::And => a && b,
            BinOp::Or => a || b,
            BinOp::Xor => a != b,
            BinOp::Implies => !a || b,
        }
    }

    fn commutative(self) -> bool {
        !matches!(self, BinOp::Implies)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Node {
    var: u32,
    low: u32,
    high: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum CacheKey {
    Apply(BinOp, u32, u32),
    Not(u32),
    Ite(u32, u32, u32),
    Exists(u32, u32),
    AndExists(u32, u32, u32),
}

/// A validated set of bit variables, usable for quantification and counting.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarSet {
    manager: u32,
    vars: Vec<u32>,
    cube: u32,
}

impl VarSet {
    pub fn vars(&self) -> &[u32] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }
}

/// A validated twin substitution. Bits not mentioned map to themselves; the
/// substitution is applied by composition, so one-directional maps are fine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenameMap {
    manager: u32,
    target: Vec<u32>,
}

pub struct Manager {
    id: u32,
    nodes: Vec<Node>,
    unique: HashMap<Node, u32>,
    cache: HashMap<CacheKey, u32>,
    vars: Vec<BitVar>,
}

impl Default for Manager {
    fn default() -> Self {
        Self::new()
    }
}

impl std::fmt::Debug for Manager {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Manager")
            .field("id", &self.id)
            .field("nodes", &self.nodes.len())
            .field("vars", &self.vars.len())
            .finish()
    }
}

impl Manager {
    pub fn new() -> Self {
        let terminal = |i| Node {
            var: TERMINAL_VAR,
            low: i,
            high: i,
        };
        Manager {
            id: NEXT_MANAGER_ID.fetch_add(1, Ordering::Relaxed),
            nodes: vec![terminal(FALSE_INDEX), terminal(TRUE_INDEX)],
            unique: HashMap::new(),
            cache: HashMap::new(),
            vars: Vec::new(),
        }
    }

    fn handle(&self, index: u32) -> Bdd {
        Bdd {
            manager: self.id,
            index,
        }
    }

    fn own(&self, f: Bdd) -> u32 {
        assert_eq!(f.manager, self.id, "BDD handle used with a foreign manager");
        f.index
    }

    fn check(&self, f: Bdd) -> Result<u32, KernelError> {
        if f.manager == self.id {
            Ok(f.index)
        } else {
            Err(KernelError::ForeignOperand)
        }
    }

    pub fn zero(&self) -> Bdd {
        self.handle(FALSE_INDEX)
    }

    pub fn one(&self) -> Bdd {
        self.handle(TRUE_INDEX)
    }

    pub fn constant(&self, value: bool) -> Bdd {
        if value {
            self.one()
        } else {
            self.zero()
        }
    }

    /// Registers an unprimed bit and its primed twin, returning their indices.
    pub fn add_bit_pair(&mut self, origin: &str, bit: u32) -> (u32, u32) {
        let unprimed = self.vars.len() as u32;
        for (offset, kind) in [(0, BitKind::Unprimed), (1, BitKind::Primed)] {
            self.vars.push(BitVar {
                index: unprimed + offset,
                kind,
                origin: origin.to_string(),
                bit,
            });
        }
        (unprimed, unprimed + 1)
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn bit_var(&self, index: u32) -> Option<&BitVar> {
        self.vars.get(index as usize)
    }

    /// The twin of a registered bit (primed for unprimed and vice versa).
    pub fn twin(&self, index: u32) -> Option<u32> {
        let var = self.bit_var(index)?;
        Some(match var.kind {
            BitKind::Unprimed => index + 1,
            BitKind::Primed => index - 1,
        })
    }

    /// Total number of nodes in the store, terminals included.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn clear_cache(&mut self) {
        self.cache.clear();
    }

    fn mk(&mut self, var: u32, low: u32, high: u32) -> u32 {
        if low == high {
            return low;
        }
        let node = Node { var, low, high };
        if let Some(&existing) = self.unique.get(&node) {
            return existing;
        }
        let index = self.nodes.len() as u32;
        self.nodes.push(node);
        self.unique.insert(node, index);
        index
    }

    fn var_of(&self, index: u32) -> u32 {
        self.nodes[index as usize].var
    }

    pub fn mk_var(&mut self, index: u32) -> Result<Bdd, KernelError> {
        self.literal(index, true)
    }

    /// The function `bit` (when `positive`) or `!bit`.
    pub fn literal(&mut self, index: u32, positive: bool) -> Result<Bdd, KernelError> {
        if index as usize >= self.vars.len() {
            return Err(KernelError::UnregisteredVar(index));
        }
        let node = if positive {
            self.mk(index, FALSE_INDEX, TRUE_INDEX)
        } else {
            self.mk(index, TRUE_INDEX, FALSE_INDEX)
        };
        Ok(self.handle(node))
    }

    /// Inspects a node: `None` for terminals, otherwise `(var, low, high)`.
    pub fn node(&self, f: Bdd) -> Option<(u32, Bdd, Bdd)> {
        let index = self.own(f);
        if index <= TRUE_INDEX {
            return None;
        }
        let n = self.nodes[index as usize];
        Some((n.var, self.handle(n.low), self.handle(n.high)))
    }

    /// Unique-table lookup of a `(var, low, high)` triple.
    pub fn lookup(&self, var: u32, low: Bdd, high: Bdd) -> Option<Bdd> {
        let node = Node {
            var,
            low: self.own(low),
            high: self.own(high),
        };
        self.unique.get(&node).map(|&i| self.handle(i))
    }

    /// Every internal node in the store.
    pub fn internal_nodes(&self) -> impl Iterator<Item = Bdd> + '_ {
        (2..self.nodes.len() as u32).map(|i| self.handle(i))
    }

    pub fn apply(&mut self, op: BinOp, f: Bdd, g: Bdd) -> Result<Bdd, KernelError> {
        let (f, g) = (self.check(f)?, self.check(g)?);
        let r = self.apply_rec(op, f, g);
        Ok(self.handle(r))
    }

    pub fn and(&mut self, f: Bdd, g: Bdd) -> Bdd {
        let r = self.apply_rec(BinOp::And, self.own(f), self.own(g));
        self.handle(r)
    }

    pub fn or(&mut self, f: Bdd, g: Bdd) -> Bdd {
        let r = self.apply_rec(BinOp::Or, self.own(f), self.own(g));
        self.handle(r)
    }

    pub fn xor(&mut self, f: Bdd, g: Bdd) -> Bdd {
        let r = self.apply_rec(BinOp::Xor, self.own(f), self.own(g));
        self.handle(r)
    }

    pub fn implies(&mut self, f: Bdd, g: Bdd) -> Bdd {
        let r = self.apply_rec(BinOp::Implies, self.own(f), self.own(g));
        self.handle(r)
    }

    pub fn iff(&mut self, f: Bdd, g: Bdd) -> Bdd {
        let x = self.xor(f, g);
        self.not(x)
    }

    pub fn and_all(&mut self, fs: impl IntoIterator<Item = Bdd>) -> Bdd {
        fs.into_iter().fold(self.one(), |acc, f| self.and(acc, f))
    }

    pub fn or_all(&mut self, fs: impl IntoIterator<Item = Bdd>) -> Bdd {
        fs.into_iter().fold(self.zero(), |acc, f| self.or(acc, f))
    }

    pub fn not(&mut self, f: Bdd) -> Bdd {
        let r = self.not_rec(self.own(f));
        self.handle(r)
    }

    pub fn ite(&mut self, f: Bdd, g: Bdd, h: Bdd) -> Bdd {
        let r = self.ite_rec(self.own(f), self.own(g), self.own(h));
        self.handle(r)
    }

    fn terminal_apply(op: BinOp, f: u32, g: u32) -> Option<u32> {
        match op {
            BinOp::And => match (f, g) {
                (FALSE_INDEX, _) | (_, FALSE_INDEX) => Some(FALSE_INDEX),
                (TRUE_INDEX, x) | (x, TRUE_INDEX) => Some(x),
                _ if f == g => Some(f),
                _ => None,
            },
            BinOp::Or => match (f, g) {
                (TRUE_INDEX, _) | (_, TRUE_INDEX) => Some(TRUE_INDEX),
                (FALSE_INDEX, x) | (x, FALSE_INDEX) => Some(x),
                _ if f == g => Some(f),
                _ => None,
            },
            BinOp::Xor => match (f, g) {
                (FALSE_INDEX, x) | (x, FALSE_INDEX) => Some(x),
                _ if f == g => Some(FALSE_INDEX),
                _ => None,
            },
            BinOp::Implies => match (f, g) {
                (FALSE_INDEX, _) | (_, TRUE_INDEX) => Some(TRUE_INDEX),
                (TRUE_INDEX, x) => Some(x),
                _ if f == g => Some(TRUE_INDEX),
                _ => None,
            },
        }
    }

    fn apply_rec(&mut self, op: BinOp, f: u32, g: u32) -> u32 {
        if f <= TRUE_INDEX && g <= TRUE_INDEX {
            return if op.eval(f == TRUE_INDEX, g == TRUE_INDEX) {
                TRUE_INDEX
            } else {
                FALSE_INDEX
            };
        }
        if let Some(r) = Self::terminal_apply(op, f, g) {
            return r;
        }
        let (f, g) = if op.commutative() && g < f {
            (g, f)
        } else {
            (f, g)
        };
        let key = CacheKey::Apply(op, f, g);
        if let Some(&r) = self.cache.get(&key) {
            return r;
        }
        let (vf, vg) = (self.var_of(f), self.var_of(g));
        let top = vf.min(vg);
        let (f0, f1) = self.cofactors(f, top);
        let (g0, g1) = self.cofactors(g, top);
        let low = self.apply_rec(op, f0, g0);
        let high = self.apply_rec(op, f1, g1);
        let r = self.mk(top, low, high);
        self.cache.insert(key, r);
        r
    }

    fn cofactors(&self, f: u32, var: u32) -> (u32, u32) {
        let n = self.nodes[f as usize];
        if n.var == var {
            (n.low, n.high)
        } else {
            (f, f)
        }
    }

    fn not_rec(&mut self, f: u32) -> u32 {
        match f {
            FALSE_INDEX => return TRUE_INDEX,
            TRUE_INDEX => return FALSE_INDEX,
            _ => {}
        }
        let key = CacheKey::Not(f);
        if let Some(&r) = self.cache.get(&key) {
            return r;
        }
        let n = self.nodes[f as usize];
        let low = self.not_rec(n.low);
        let high = self.not_rec(n.high);
        let r = self.mk(n.var, low, high);
        self.cache.insert(key, r);
        r
    }

    fn ite_rec(&mut self, f: u32, g: u32, h: u32) -> u32 {
        match f {
            TRUE_INDEX => return g,
            FALSE_INDEX => return h,
            _ => {}
        }
        if g == h {
            return g;
        }
        if g == TRUE_INDEX && h == FALSE_INDEX {
            return f;
        }
        let key = CacheKey::Ite(f, g, h);
        if let Some(&r) = self.cache.get(&key) {
            return r;
        }
        let top = self.var_of(f).min(self.var_of(g)).min(self.var_of(h));
        let (f0, f1) = self.cofactors(f, top);
        let (g0, g1) = self.cofactors(g, top);
        let (h0, h1) = self.cofactors(h, top);
        let low = self.ite_rec(f0, g0, h0);
        let high = self.ite_rec(f1, g1, h1);
        let r = self.mk(top, low, high);
        self.cache.insert(key, r);
        r
    }

    pub fn var_set(&mut self, vars: &[u32]) -> Result<VarSet, KernelError> {
        let mut sorted = vars.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if let Some(&bad) = sorted.iter().find(|&&v| v as usize >= self.vars.len()) {
            return Err(KernelError::UnregisteredVar(bad));
        }
        let mut cube = TRUE_INDEX;
        for &v in sorted.iter().rev() {
            cube = self.mk(v, FALSE_INDEX, cube);
        }
        Ok(VarSet {
            manager: self.id,
            vars: sorted,
            cube,
        })
    }

    fn own_set(&self, set: &VarSet) -> u32 {
        assert_eq!(set.manager, self.id, "VarSet used with a foreign manager");
        set.cube
    }

    /// Existential quantification of every bit in `set`.
    pub fn exists(&mut self, set: &VarSet, f: Bdd) -> Bdd {
        let r = self.exists_rec(self.own(f), self.own_set(set));
        self.handle(r)
    }

    /// Universal quantification of every bit in `set`.
    pub fn forall(&mut self, set: &VarSet, f: Bdd) -> Bdd {
        let nf = self.not(f);
        let e = self.exists(set, nf);
        self.not(e)
    }

    /// `exists set. f & g` without building the conjunction first.
    pub fn and_exists(&mut self, set: &VarSet, f: Bdd, g: Bdd) -> Bdd {
        let r = self.and_exists_rec(self.own(f), self.own(g), self.own_set(set));
        self.handle(r)
    }

    fn skip_cube(&self, mut cube: u32, var: u32) -> u32 {
        while cube != TRUE_INDEX && self.var_of(cube) < var {
            cube = self.nodes[cube as usize].high;
        }
        cube
    }

    fn exists_rec(&mut self, f: u32, cube: u32) -> u32 {
        if f <= TRUE_INDEX {
            return f;
        }
        let var = self.var_of(f);
        let cube = self.skip_cube(cube, var);
        if cube == TRUE_INDEX {
            return f;
        }
        let key = CacheKey::Exists(f, cube);
        if let Some(&r) = self.cache.get(&key) {
            return r;
        }
        let n = self.nodes[f as usize];
        let r = if self.var_of(cube) == var {
            let rest = self.nodes[cube as usize].high;
            let low = self.exists_rec(n.low, rest);
            if low == TRUE_INDEX {
                TRUE_INDEX
            } else {
                let high = self.exists_rec(n.high, rest);
                self.apply_rec(BinOp::Or, low, high)
            }
        } else {
            let low = self.exists_rec(n.low, cube);
            let high = self.exists_rec(n.high, cube);
            self.mk(var, low, high)
        };
        self.cache.insert(key, r);
        r
    }

    fn and_exists_rec(&mut self, f: u32, g: u32, cube: u32) -> u32 {
        if f == FALSE_INDEX || g == FALSE_INDEX {
            return FALSE_INDEX;
        }
        if f == TRUE_INDEX {
            return self.exists_rec(g, cube);
        }
        if g == TRUE_INDEX || f == g {
            return self.exists_rec(f, cube);
        }
        let (f, g) = if g < f { (g, f) } else { (f, g) };
        let top = self.var_of(f).min(self.var_of(g));
        let cube = self.skip_cube(cube, top);
        if cube == TRUE_INDEX {
            return self.apply_rec(BinOp::And, f, g);
        }
        let key = CacheKey::AndExists(f, g, cube);
        if let Some(&r) = self.cache.get(&key) {
            return r;
        }
        let (f0, f1) = self.cofactors(f, top);
        let (g0, g1) = self.cofactors(g, top);
        let r = if self.var_of(cube) == top {
            let rest = self.nodes[cube as usize].high;
            let low = self.and_exists_rec(f0, g0, rest);
            if low == TRUE_INDEX {
                TRUE_INDEX
            } else {
                let high = self.and_exists_rec(f1, g1, rest);
                self.apply_rec(BinOp::Or, low, high)
            }
        } else {
            let low = self.and_exists_rec(f0, g0, cube);
            let high = self.and_exists_rec(f1, g1, cube);
            self.mk(top, low, high)
        };
        self.cache.insert(key, r);
        r
    }

    /// Builds a twin-swapping substitution from explicit `(from, to)` pairs.
    pub fn rename_map(&self, pairs: &[(u32, u32)]) -> Result<RenameMap, KernelError> {
        let mut target: Vec<u32> = (0..self.vars.len() as u32).collect();
        let mut seen = vec![false; self.vars.len()];
        for &(from, to) in pairs {
            for v in [from, to] {
                if v as usize >= self.vars.len() {
                    return Err(KernelError::UnregisteredVar(v));
                }
            }
            if self.twin(from) != Some(to) {
                return Err(KernelError::NonTwinRename { from, to });
            }
            if seen[from as usize] {
                return Err(KernelError::NonInjectiveRename(from));
            }
            seen[from as usize] = true;
            target[from as usize] = to;
        }
        Ok(RenameMap {
            manager: self.id,
            target,
        })
    }

    /// Twin map sending each listed bit to its twin and each twin back.
    pub fn swap_map(&self, bits: &[u32]) -> Result<RenameMap, KernelError> {
        let mut pairs = Vec::with_capacity(bits.len() * 2);
        for &b in bits {
            let t = self.twin(b).ok_or(KernelError::UnregisteredVar(b))?;
            pairs.push((b, t));
            pairs.push((t, b));
        }
        pairs.sort_unstable();
        pairs.dedup();
        self.rename_map(&pairs)
    }

    pub fn rename(&mut self, f: Bdd, map: &RenameMap) -> Bdd {
        assert_eq!(
            map.manager, self.id,
            "RenameMap used with a foreign manager"
        );
        let mut memo = HashMap::new();
        let r = self.rename_rec(self.own(f), &map.target, &mut memo);
        self.handle(r)
    }

    fn rename_rec(&mut self, f: u32, target: &[u32], memo: &mut HashMap<u32, u32>) -> u32 {
        if f <= TRUE_INDEX {
            return f;
        }
        if let Some(&r) = memo.get(&f) {
            return r;
        }
        let n = self.nodes[f as usize];
        let low = self.rename_rec(n.low, target, memo);
        let high = self.rename_rec(n.high, target, memo);
        let v = self.mk(target[n.var as usize], FALSE_INDEX, TRUE_INDEX);
        let r = self.ite_rec(v, high, low);
        memo.insert(f, r);
        r
    }

    /// Bits the function depends on, ascending.
    pub fn support(&self, f: Bdd) -> Vec<u32> {
        let mut seen = vec![false; self.nodes.len()];
        let mut vars = vec![false; self.vars.len()];
        let mut stack = vec![self.own(f)];
        while let Some(i) = stack.pop() {
            if i <= TRUE_INDEX || seen[i as usize] {
                continue;
            }
            seen[i as usize] = true;
            let n = self.nodes[i as usize];
            vars[n.var as usize] = true;
            stack.push(n.low);
            stack.push(n.high);
        }
        (0..self.vars.len() as u32)
            .filter(|&v| vars[v as usize])
            .collect()
    }

    /// Number of nodes reachable from `f`, terminals included.
    pub fn size(&self, f: Bdd) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.own(f)];
        while let Some(i) = stack.pop() {
            if !seen.insert(i) || i <= TRUE_INDEX {
                continue;
            }
            let n = self.nodes[i as usize];
            stack.push(n.low);
            stack.push(n.high);
        }
        seen.len()
    }

    fn check_support(&self, f: Bdd, over: &VarSet) -> Result<(), KernelError> {
        assert_eq!(over.manager, self.id, "VarSet used with a foreign manager");
        for v in self.support(f) {
            if over.vars.binary_search(&v).is_err() {
                return Err(KernelError::SupportNotCovered(v));
            }
        }
        Ok(())
    }

    /// Number of assignments to the bits of `over` that satisfy `f`.
    pub fn sat_count(&self, f: Bdd, over: &VarSet) -> Result<u128, KernelError> {
        self.check(f)?;
        self.check_support(f, over)?;
        if over.vars.len() > 127 {
            return Err(KernelError::TooManyBits(over.vars.len()));
        }
        let n = over.vars.len() as u32;
        let pos = |v: u32| -> u32 {
            if v == TERMINAL_VAR {
                n
            } else {
                over.vars.binary_search(&v).expect("support checked") as u32
            }
        };
        let mut memo: HashMap<u32, u128> = HashMap::new();
        fn count(
            m: &Manager,
            i: u32,
            pos: &dyn Fn(u32) -> u32,
            memo: &mut HashMap<u32, u128>,
        ) -> u128 {
            match i {
                FALSE_INDEX => return 0,
                TRUE_INDEX => return 1,
                _ => {}
            }
            if let Some(&c) = memo.get(&i) {
                return c;
            }
            let node = m.nodes[i as usize];
            let here = pos(node.var);
            let lo = count(m, node.low, pos, memo) << (pos(m.var_of(node.low)) - here - 1);
            let hi = count(m, node.high, pos, memo) << (pos(m.var_of(node.high)) - here - 1);
            let c = lo + hi;
            memo.insert(i, c);
            c
        }
        let root = self.own(f);
        let c = count(self, root, &pos, &mut memo);
        Ok(c << pos(self.var_of(root)))
    }

    /// One satisfying assignment over all registered bits (unconstrained bits
    /// are false), or `None` when `f` is unsatisfiable.
    pub fn pick_cube(&self, f: Bdd) -> Option<Vec<bool>> {
        let mut i = self.own(f);
        if i == FALSE_INDEX {
            return None;
        }
        let mut assignment = vec![false; self.vars.len()];
        while i > TRUE_INDEX {
            let n = self.nodes[i as usize];
            if n.low != FALSE_INDEX {
                i = n.low;
            } else {
                assignment[n.var as usize] = true;
                i = n.high;
            }
        }
        Some(assignment)
    }

    /// All paths to TRUE, as partial assignments over the registered bits.
    pub fn cubes(&self, f: Bdd) -> Vec<Vec<Option<bool>>> {
        let mut out = Vec::new();
        let mut current = vec![None; self.vars.len()];
        self.cubes_rec(self.own(f), &mut current, &mut out);
        out
    }

    fn cubes_rec(&self, i: u32, current: &mut Vec<Option<bool>>, out: &mut Vec<Vec<Option<bool>>>) {
        match i {
            FALSE_INDEX => {}
            TRUE_INDEX => out.push(current.clone()),
            _ => {
                let n = self.nodes[i as usize];
                current[n.var as usize] = Some(false);
                self.cubes_rec(n.low, current, out);
                current[n.var as usize] = Some(true);
                self.cubes_rec(n.high, current, out);
                current[n.var as usize] = None;
            }
        }
    }

    /// Every satisfying assignment to the bits of `over`, each listed in the
    /// set's (ascending) bit order.
    pub fn minterms(&self, f: Bdd, over: &VarSet) -> Result<Vec<Vec<bool>>, KernelError> {
        self.check(f)?;
        self.check_support(f, over)?;
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(over.vars.len());
        self.minterms_rec(self.own(f), &over.vars, &mut current, &mut out);
        Ok(out)
    }

    fn minterms_rec(
        &self,
        i: u32,
        vars: &[u32],
        current: &mut Vec<bool>,
        out: &mut Vec<Vec<bool>>,
    ) {
        if i == FALSE_INDEX {
            return;
        }
        let Some((&var, rest)) = vars.split_first() else {
            debug_assert_eq!(i, TRUE_INDEX);
            out.push(current.clone());
            return;
        };
        let n = self.nodes[i as usize];
        let (low, high) = if n.var == var {
            (n.low, n.high)
        } else {
            (i, i)
        };
        current.push(false);
        self.minterms_rec(low, rest, current, out);
        current.pop();
        current.push(true);
        self.minterms_rec(high, rest, current, out);
        current.pop();
    }

    /// Evaluates `f` under a total assignment indexed by bit.
    pub fn eval(&self, f: Bdd, assignment: &[bool]) -> bool {
        let mut i = self.own(f);
        while i > TRUE_INDEX {
            let n = self.nodes[i as usize];
            i = if assignment[n.var as usize] {
                n.high
            } else {
                n.low
            };
        }
        i == TRUE_INDEX
    }

    /// Conjunction of the given literals.
    pub fn cube(&mut self, literals: &[(u32, bool)]) -> Result<Bdd, KernelError> {
        let mut lits = literals.to_vec();
        lits.sort_unstable_by_key(|&(v, _)| std::cmp::Reverse(v));
        let mut acc = self.one();
        for (v, value) in lits {
            let l = self.literal(v, value)?;
            acc = self.and(acc, l);
        }
        Ok(acc)
    }
}
