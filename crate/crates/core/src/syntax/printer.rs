use std::fmt::Write;

use super::ast::*;

const PREC_NOT: u8 = 3;
const PREC_NEG: u8 = 7;
const PREC_ATOM: u8 = 8;

fn precedence(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Binary(op, _, _) => op.precedence(),
        ExprKind::Unary(UnaryOp::Not, _) => PREC_NOT,
        ExprKind::Unary(UnaryOp::Neg, _) => PREC_NEG,
        // A negative literal reads as a negation when it sits under one.
        ExprKind::Int(v) if *v < 0 => PREC_NEG,
        _ => PREC_ATOM,
    }
}

fn write_expr(out: &mut String, e: &Expr, min: u8) {
    let prec = precedence(e);
    if prec < min {
        out.push('(');
        write_expr(out, e, 0);
        out.push(')');
        return;
    }
    match &e.kind {
        ExprKind::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        ExprKind::Int(v) => {
            let _ = write!(out, "{v}");
        }
        ExprKind::Var { name, primed } => {
            out.push_str(name);
            if *primed {
                out.push('\'');
            }
        }
        ExprKind::Unary(UnaryOp::Not, inner) => {
            out.push('!');
            write_expr(out, inner, PREC_NOT);
        }
        ExprKind::Unary(UnaryOp::Neg, inner) => {
            out.push('-');
            if matches!(inner.kind, ExprKind::Int(_)) {
                out.push('(');
                write_expr(out, inner, 0);
                out.push(')');
            } else {
                write_expr(out, inner, PREC_NEG);
            }
        }
        ExprKind::Binary(op, l, r) => {
            let (lmin, rmin) = if op.is_comparison() {
                (prec + 1, prec + 1)
            } else {
                (prec, prec + 1)
            };
            write_expr(out, l, lmin);
            let _ = write!(out, " {} ", op.symbol());
            write_expr(out, r, rmin);
        }
    }
}

/// Renders an expression with the minimum parentheses needed to re-parse it.
pub fn expr_to_string(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e, 0);
    out
}

fn write_command(out: &mut String, c: &CommandAst) {
    write_expr(out, &c.guard, 0);
    out.push_str(" ==>");
    for (i, a) in c.assigns.iter().enumerate() {
        out.push_str(if i == 0 { " " } else { ", " });
        let _ = write!(out, "{}' := ", a.target.text);
        write_expr(out, &a.value, 0);
    }
    out.push(';');
}

/// Canonical text of one module.
pub fn pretty_print(m: &ModuleAst) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "module {}:", m.name.text);
    for d in &m.decls {
        let scope = if d.global { "global var" } else { "var" };
        let ty = match d.ty {
            TypeAst::Bool => "bool".to_string(),
            TypeAst::Range(lo, hi) => format!("[{lo}..{hi}]"),
        };
        let _ = writeln!(out, "  {scope} {}: {ty}", d.name.text);
    }
    for a in &m.actions {
        let _ = write!(out, "  {} {} {{", a.direction.keyword(), a.name.text);
        match a.commands.as_slice() {
            [] => out.push_str(" }\n"),
            [single] => {
                out.push(' ');
                write_command(&mut out, single);
                out.push_str(" }\n");
            }
            many => {
                out.push('\n');
                for c in many {
                    out.push_str("    ");
                    write_command(&mut out, c);
                    out.push('\n');
                }
                out.push_str("  }\n");
            }
        }
    }
    out.push_str("  init: ");
    write_expr(&mut out, &m.init, 0);
    out.push('\n');
    out
}

/// Canonical text of a module list, separated by blank lines.
pub fn pretty_print_all(modules: &[ModuleAst]) -> String {
    modules
        .iter()
        .map(pretty_print)
        .collect::<Vec<_>>()
        .join("\n")
}
