//! Canonical pretty-printer. `parse(unparse(p)) == p` structurally.

use std::fmt::Write;

use super::ast::*;

const INDENT: &str = "    ";

pub fn unparse(p: &Program) -> String {
    let mut out = String::new();
    for s in &p.statements {
        write_stmt(&mut out, s, 0);
    }
    out
}

fn write_block(out: &mut String, body: &[Stmt], depth: usize) {
    for s in body {
        write_stmt(out, s, depth);
    }
}

fn write_stmt(out: &mut String, s: &Stmt, depth: usize) {
    for _ in 0..depth {
        out.push_str(INDENT);
    }
    match &s.kind {
        StmtKind::AttrAssign {
            object,
            attr,
            axis,
            value,
        } => {
            let _ = writeln!(
                out,
                "{}.{}.{} = {}",
                expr_at(object, PREC_POSTFIX),
                attr.name(),
                axis.name(),
                expr(value)
            );
        }
        StmtKind::FacingAssign { object, value } => {
            let _ = writeln!(out, "{}.facing = {}", expr_at(object, PREC_POSTFIX), expr(value));
        }
        StmtKind::FrameSet { object } => {
            let _ = writeln!(out, "set_coordinate_frame({})", expr(object));
        }
        StmtKind::VarAssign { name, value } => {
            let _ = writeln!(out, "{} = {}", name, expr(value));
        }
        StmtKind::For { vars, iter, body } => {
            let _ = writeln!(out, "for {} in {}:", vars.join(", "), expr(iter));
            write_block(out, body, depth + 1);
        }
        StmtKind::If { cond, body, orelse } => {
            let _ = writeln!(out, "if {}:", expr(cond));
            write_block(out, body, depth + 1);
            if !orelse.is_empty() {
                for _ in 0..depth {
                    out.push_str(INDENT);
                }
                out.push_str("else:\n");
                write_block(out, orelse, depth + 1);
            }
        }
    }
}

const PREC_OR: u8 = 1;
const PREC_AND: u8 = 2;
const PREC_NOT: u8 = 3;
const PREC_CMP: u8 = 4;
const PREC_ADD: u8 = 5;
const PREC_MUL: u8 = 6;
const PREC_UNARY: u8 = 7;
const PREC_POSTFIX: u8 = 8;

fn prec(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Logic {
            op: LogicOp::Or, ..
        } => PREC_OR,
        ExprKind::Logic {
            op: LogicOp::And, ..
        } => PREC_AND,
        ExprKind::Not(_) => PREC_NOT,
        ExprKind::Compare { .. } => PREC_CMP,
        ExprKind::Binary {
            op: BinOp::Add | BinOp::Sub,
            ..
        } => PREC_ADD,
        ExprKind::Binary { .. } => PREC_MUL,
        ExprKind::Neg(_) => PREC_UNARY,
        ExprKind::Number { value, .. } if value.is_sign_negative() => PREC_UNARY,
        _ => PREC_POSTFIX,
    }
}

/// Render `e`, parenthesized if it binds looser than `min`.
fn expr_at(e: &Expr, min: u8) -> String {
    let s = expr(e);
    if prec(e) < min {
        format!("({s})")
    } else {
        s
    }
}

pub fn expr(e: &Expr) -> String {
    match &e.kind {
        ExprKind::Number { value, editable } => format_number(*value, *editable),
        ExprKind::Direction(f) => f.name().to_string(),
        ExprKind::Var(name) => name.clone(),
        ExprKind::Attr { object, attr, axis } => {
            let mut s = format!("{}.{}", expr_at(object, PREC_POSTFIX), attr.name());
            if let Some(a) = axis {
                s.push('.');
                s.push_str(a.name());
            }
            s
        }
        ExprKind::Binary { op, lhs, rhs } => {
            let p = prec(e);
            format!(
                "{} {} {}",
                expr_at(lhs, p),
                op.symbol(),
                expr_at(rhs, p + 1)
            )
        }
        ExprKind::Neg(inner) => {
            // a bare literal after `-` would fold into a negative literal
            if matches!(inner.kind, ExprKind::Number { .. }) {
                format!("-({})", expr(inner))
            } else {
                format!("-{}", expr_at(inner, PREC_UNARY))
            }
        }
        ExprKind::Call { func, args } => {
            let args: Vec<String> = args.iter().map(expr).collect();
            format!("{}({})", func.name(), args.join(", "))
        }
        ExprKind::Index { list, index } => {
            format!("{}[{}]", expr_at(list, PREC_POSTFIX), expr(index))
        }
        ExprKind::Compare { op, lhs, rhs } => format!(
            "{} {} {}",
            expr_at(lhs, PREC_CMP + 1),
            op.symbol(),
            expr_at(rhs, PREC_CMP + 1)
        ),
        ExprKind::Logic { op, lhs, rhs } => {
            let p = prec(e);
            let word = match op {
                LogicOp::And => "and",
                LogicOp::Or => "or",
            };
            format!("{} {} {}", expr_at(lhs, p), word, expr_at(rhs, p + 1))
        }
        ExprKind::Not(inner) => format!("not {}", expr_at(inner, PREC_NOT)),
    }
}

/// Shortest text that reparses to `value`. Editable whole numbers keep a
/// `.0` so they read as real-valued parameters.
pub fn format_number(value: f64, editable: bool) -> String {
    let abs = value.abs();
    let mut s = if abs != 0.0 && !(1e-5..1e16).contains(&abs) {
        format!("{value:e}")
    } else {
        format!("{value}")
    };
    if editable && value.is_finite() && !s.contains(['.', 'e']) {
        s.push_str(".0");
    }
    s
}
