//! Seeded random generators for modules and interfaces.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use sociable::model::{validate, Domain, Interface};
use sociable::syntax::{
    ActionBlock, AssignAst, BinaryOp, CommandAst, DeclAst, Direction, Expr, Ident, ModuleAst,
    SourceSpan, TypeAst, UnaryOp,
};

pub use rand::SeedableRng;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

const TYPES: [TypeAst; 5] = [
    TypeAst::Bool,
    TypeAst::Range(0, 1),
    TypeAst::Range(0, 2),
    TypeAst::Range(1, 3),
    TypeAst::Range(-1, 1),
];

fn domain_of(ty: TypeAst) -> Domain {
    match ty {
        TypeAst::Bool => Domain::Bool,
        TypeAst::Range(lo, hi) => Domain::Range { lo, hi },
    }
}

fn decl(name: &str, global: bool, ty: TypeAst) -> DeclAst {
    DeclAst {
        name: Ident::synthetic(name),
        global,
        ty,
        span: SourceSpan::synthetic(),
    }
}

pub fn random_type(rng: &mut Rng8) -> TypeAst {
    *TYPES.choose(rng).unwrap()
}

/// Variables an expression may read, with their domains.
struct Scope {
    vars: Vec<(String, Domain, bool)>,
}

impl Scope {
    fn ints(&self) -> Vec<&(String, Domain, bool)> {
        self.vars.iter().filter(|v| !v.1.is_bool()).collect()
    }

    fn bools(&self) -> Vec<&(String, Domain, bool)> {
        self.vars.iter().filter(|v| v.1.is_bool()).collect()
    }
}

fn int_expr(rng: &mut Rng8, scope: &Scope, depth: u32) -> Expr {
    let ints = scope.ints();
    if depth == 0 || rng.gen_bool(0.4) {
        return match ints.choose(rng) {
            Some((name, _, primed)) if rng.gen_bool(0.7) => Expr::var(name.clone(), *primed),
            _ => Expr::int(rng.gen_range(-1..=3)),
        };
    }
    match rng.gen_range(0..4) {
        0 => Expr::binary(
            BinaryOp::Add,
            int_expr(rng, scope, depth - 1),
            int_expr(rng, scope, depth - 1),
        ),
        1 => Expr::binary(
            BinaryOp::Sub,
            int_expr(rng, scope, depth - 1),
            int_expr(rng, scope, depth - 1),
        ),
        2 => {
            let k = Expr::int(rng.gen_range(0..=2));
            let e = int_expr(rng, scope, depth - 1);
            if rng.gen_bool(0.5) {
                Expr::binary(BinaryOp::Mul, k, e)
            } else {
                Expr::binary(BinaryOp::Mul, e, k)
            }
        }
        _ => Expr::unary(UnaryOp::Neg, int_expr(rng, scope, depth - 1)),
    }
}

const COMPARISONS: [BinaryOp; 6] = [
    BinaryOp::Eq,
    BinaryOp::Ne,
    BinaryOp::Lt,
    BinaryOp::Le,
    BinaryOp::Gt,
    BinaryOp::Ge,
];

fn atom(rng: &mut Rng8, scope: &Scope) -> Expr {
    let bools = scope.bools();
    let ints = scope.ints();
    let pick = rng.gen_range(0..10);
    if pick < 4 {
        if let Some((name, _, primed)) = bools.choose(rng) {
            let v = Expr::var(name.clone(), *primed);
            return if rng.gen_bool(0.3) {
                Expr::unary(UnaryOp::Not, v)
            } else {
                v
            };
        }
    }
    if pick < 9 {
        if let Some((name, dom, primed)) = ints.choose(rng) {
            let op = *COMPARISONS.choose(rng).unwrap();
            let k = rng.gen_range(dom.lo()..=dom.hi());
            return Expr::binary(op, Expr::var(name.clone(), *primed), Expr::int(k));
        }
    }
    Expr::bool(rng.gen_bool(0.8))
}

fn bool_expr(rng: &mut Rng8, scope: &Scope, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.45) {
        return atom(rng, scope);
    }
    match rng.gen_range(0..5) {
        0 | 1 => Expr::binary(
            BinaryOp::And,
            bool_expr(rng, scope, depth - 1),
            bool_expr(rng, scope, depth - 1),
        ),
        2 => Expr::binary(
            BinaryOp::Or,
            bool_expr(rng, scope, depth - 1),
            bool_expr(rng, scope, depth - 1),
        ),
        3 => Expr::unary(UnaryOp::Not, bool_expr(rng, scope, depth - 1)),
        _ => {
            let op = *COMPARISONS.choose(rng).unwrap();
            Expr::binary(op, int_expr(rng, scope, 1), int_expr(rng, scope, 1))
        }
    }
}

/// Shared parameters of a family of interfaces meant to be combined.
#[derive(Debug, Clone)]
pub struct Family {
    /// Global variables with the value every member starts from.
    pub globals: Vec<(String, TypeAst, i64)>,
    pub actions: Vec<String>,
}

impl Family {
    pub fn random(rng: &mut Rng8) -> Self {
        let n = rng.gen_range(1..=2);
        let globals = (0..n)
            .map(|i| {
                let ty = random_type(rng);
                let d = domain_of(ty);
                (format!("g{i}"), ty, rng.gen_range(d.lo()..=d.hi()))
            })
            .collect();
        let actions = ["a", "b", "c"][..rng.gen_range(1..=3)]
            .iter()
            .map(|s| s.to_string())
            .collect();
        Family { globals, actions }
    }
}

/// Knobs for [`random_module`].
#[derive(Debug, Clone, Copy)]
pub struct Sizes {
    pub max_locals: usize,
    pub max_commands: usize,
    pub depth: u32,
}

impl Default for Sizes {
    fn default() -> Self {
        Sizes {
            max_locals: 2,
            max_commands: 2,
            depth: 2,
        }
    }
}

fn command(
    rng: &mut Rng8,
    direction: Direction,
    tracked: &[(String, Domain, bool)],
    sizes: Sizes,
) -> CommandAst {
    let mut reads = Scope {
        vars: tracked
            .iter()
            .map(|(n, d, _)| (n.clone(), *d, false))
            .collect(),
    };
    if direction == Direction::Input {
        for (n, d, global) in tracked {
            if *global {
                reads.vars.push((n.clone(), *d, true));
            }
        }
    }
    let guard = bool_expr(rng, &reads, sizes.depth);
    let targets: Vec<&(String, Domain, bool)> = tracked
        .iter()
        .filter(|(_, _, global)| direction == Direction::Output || !global)
        .filter(|_| rng.gen_bool(0.6))
        .collect();
    let assigns = targets
        .into_iter()
        .map(|(name, dom, _)| {
            let value = if dom.is_bool() {
                if rng.gen_bool(0.5) {
                    Expr::bool(rng.gen_bool(0.5))
                } else {
                    bool_expr(rng, &reads, 1)
                }
            } else if rng.gen_bool(0.65) {
                Expr::int(rng.gen_range(dom.lo()..=dom.hi()))
            } else {
                int_expr(rng, &reads, 2)
            };
            AssignAst {
                target: Ident::synthetic(name.clone()),
                value,
                span: SourceSpan::synthetic(),
            }
        })
        .collect();
    CommandAst {
        guard,
        assigns,
        span: SourceSpan::synthetic(),
    }
}

/// A random module of `family` whose locals are named `{prefix}0`, ... .
/// Every global starts at the family's value, so members can be composed.
pub fn random_module(
    rng: &mut Rng8,
    name: &str,
    prefix: &str,
    family: &Family,
    sizes: Sizes,
) -> ModuleAst {
    let mut decls = Vec::new();
    let n_locals = rng.gen_range(1..=sizes.max_locals.max(1));
    for i in 0..n_locals {
        decls.push(decl(&format!("{prefix}{i}"), false, random_type(rng)));
    }
    let mut global_inits = Vec::new();
    for (g, ty, v) in &family.globals {
        if decls.iter().any(|d| d.global) && rng.gen_bool(0.25) {
            continue;
        }
        decls.push(decl(g, true, *ty));
        global_inits.push((g.clone(), *v));
    }
    decls.shuffle(rng);
    let tracked: Vec<(String, Domain, bool)> = decls
        .iter()
        .map(|d| (d.name.text.clone(), domain_of(d.ty), d.global))
        .collect();

    let mut actions = Vec::new();
    for a in &family.actions {
        let role = rng.gen_range(0..10);
        let directions: &[Direction] = match role {
            0 | 1 => &[],
            2..=4 => &[Direction::Output],
            5..=7 => &[Direction::Input],
            _ => &[Direction::Output, Direction::Input],
        };
        for &direction in directions {
            let n = rng.gen_range(0..=sizes.max_commands);
            let n = if n == 0 && rng.gen_bool(0.6) { 1 } else { n };
            let commands = (0..n)
                .map(|_| command(rng, direction, &tracked, sizes))
                .collect();
            actions.push(ActionBlock {
                direction,
                name: Ident::synthetic(a.clone()),
                commands,
                span: SourceSpan::synthetic(),
            });
        }
    }

    // Globals pinned to the family value; locals pinned or loosely constrained.
    let local_scope = Scope {
        vars: tracked
            .iter()
            .map(|(n, d, _)| (n.clone(), *d, false))
            .collect(),
    };
    let mut conjuncts: Vec<Expr> = global_inits
        .iter()
        .map(|(g, v)| {
            let dom = tracked.iter().find(|t| &t.0 == g).unwrap().1;
            Expr::binary(BinaryOp::Eq, Expr::var(g.clone(), false), dom.literal(*v))
        })
        .collect();
    for (name, dom, global) in &tracked {
        if *global {
            continue;
        }
        let v = rng.gen_range(dom.lo()..=dom.hi());
        let pin = Expr::binary(BinaryOp::Eq, Expr::var(name.clone(), false), dom.literal(v));
        match rng.gen_range(0..3) {
            0 => conjuncts.push(pin),
            1 => conjuncts.push(Expr::binary(BinaryOp::Or, pin, atom(rng, &local_scope))),
            _ => {}
        }
    }
    ModuleAst {
        name: Ident::synthetic(name),
        decls,
        actions,
        init: Expr::conjunction(conjuncts),
        span: SourceSpan::synthetic(),
    }
}

/// A validated random member of `family`.
pub fn random_interface(
    rng: &mut Rng8,
    name: &str,
    prefix: &str,
    family: &Family,
    sizes: Sizes,
) -> Interface {
    loop {
        let ast = random_module(rng, name, prefix, family, sizes);
        if let Ok(i) = validate(&ast) {
            return i;
        }
    }
}

/// A random pair sharing a family, with disjoint local names.
pub fn random_pair(rng: &mut Rng8, sizes: Sizes) -> (Interface, Interface) {
    let family = Family::random(rng);
    let p = random_interface(rng, "P", "p", &family, sizes);
    let q = random_interface(rng, "Q", "q", &family, sizes);
    (p, q)
}

/// A random single interface.
pub fn random_single(rng: &mut Rng8, sizes: Sizes) -> Interface {
    let family = Family::random(rng);
    random_interface(rng, "M", "x", &family, sizes)
}

/// A random invariant over the tracked variables of `iface`.
pub fn random_invariant(rng: &mut Rng8, iface: &Interface) -> Expr {
    let scope = Scope {
        vars: iface
            .vars
            .iter()
            .map(|v| (v.name.clone(), v.domain, false))
            .collect(),
    };
    bool_expr(rng, &scope, 2)
}

fn arbitrary_expr(rng: &mut Rng8, names: &[&str], depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..4) {
            0 => Expr::bool(rng.gen_bool(0.5)),
            1 => Expr::int(rng.gen_range(0..=20)),
            _ => Expr::var(*names.choose(rng).unwrap(), rng.gen_bool(0.3)),
        };
    }
    const OPS: [BinaryOp; 11] = [
        BinaryOp::Or,
        BinaryOp::And,
        BinaryOp::Eq,
        BinaryOp::Ne,
        BinaryOp::Lt,
        BinaryOp::Le,
        BinaryOp::Gt,
        BinaryOp::Ge,
        BinaryOp::Add,
        BinaryOp::Sub,
        BinaryOp::Mul,
    ];
    if rng.gen_bool(0.2) {
        let op = if rng.gen_bool(0.5) {
            UnaryOp::Not
        } else {
            UnaryOp::Neg
        };
        Expr::unary(op, arbitrary_expr(rng, names, depth - 1))
    } else {
        let op = *OPS.choose(rng).unwrap();
        Expr::binary(
            op,
            arbitrary_expr(rng, names, depth - 1),
            arbitrary_expr(rng, names, depth - 1),
        )
    }
}

/// A syntactically arbitrary module: it need not type-check, but it uses
/// every construct of the grammar.
pub fn arbitrary_module(rng: &mut Rng8, index: usize) -> ModuleAst {
    const NAMES: [&str; 6] = ["x", "y", "flag", "count", "mode", "z9"];
    let decls = (0..rng.gen_range(0..=4))
        .map(|i| {
            let ty = if rng.gen_bool(0.3) {
                TypeAst::Bool
            } else {
                let lo = rng.gen_range(-5..=5);
                TypeAst::Range(lo, lo + rng.gen_range(0..=7))
            };
            decl(NAMES[i], rng.gen_bool(0.4), ty)
        })
        .collect();
    let actions = (0..rng.gen_range(0..=4))
        .map(|_| ActionBlock {
            direction: if rng.gen_bool(0.5) {
                Direction::Output
            } else {
                Direction::Input
            },
            name: Ident::synthetic(*["go", "stop", "tick", "a1"].choose(rng).unwrap()),
            commands: (0..rng.gen_range(0..=3))
                .map(|_| CommandAst {
                    guard: arbitrary_expr(rng, &NAMES, 4),
                    assigns: (0..rng.gen_range(0..=3))
                        .map(|_| AssignAst {
                            target: Ident::synthetic(*NAMES.choose(rng).unwrap()),
                            value: arbitrary_expr(rng, &NAMES, 3),
                            span: SourceSpan::synthetic(),
                        })
                        .collect(),
                    span: SourceSpan::synthetic(),
                })
                .collect(),
            span: SourceSpan::synthetic(),
        })
        .collect();
    ModuleAst {
        name: Ident::synthetic(format!("Gen{index}")),
        decls,
        actions,
        init: arbitrary_expr(rng, &NAMES, 3),
        span: SourceSpan::synthetic(),
    }
}
