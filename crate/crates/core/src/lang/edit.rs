//! Structural node addresses and literal edit sites.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ast::*;
use crate::geometry::Facing;

/// Child-index path from the program root to a node.
///
/// The first index selects a top-level statement; each further index selects
/// a child in the fixed order documented on [`stmt_children`] and
/// [`expr_children`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodePath(pub Vec<u32>);

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join("."))
    }
}

impl FromStr for NodePath {
    type Err = std::num::ParseIntError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Ok(NodePath(Vec::new()));
        }
        s.split('.').map(str::parse).collect::<Result<_, _>>().map(NodePath)
    }
}

impl Serialize for NodePath {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NodePath {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SiteKind {
    Constant,
    Direction,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Literal {
    Number(f64),
    Direction(Facing),
}

impl Literal {
    pub fn kind(&self) -> SiteKind {
        match self {
            Literal::Number(_) => SiteKind::Constant,
            Literal::Direction(_) => SiteKind::Direction,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Number(v) => f.write_str(&super::unparse::format_number(*v, true)),
            Literal::Direction(d) => f.write_str(d.name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EditSite {
    pub path: NodePath,
    pub kind: SiteKind,
    pub value: Literal,
}

pub enum Node<'a> {
    Stmt(&'a Stmt),
    Expr(&'a Expr),
}

/// Children of a statement: expressions first, then nested statements
/// (`if` lists the body before the else branch).
pub fn stmt_children(s: &Stmt) -> Vec<Node<'_>> {
    match &s.kind {
        StmtKind::AttrAssign { object, value, .. } | StmtKind::FacingAssign { object, value } => {
            vec![Node::Expr(object), Node::Expr(value)]
        }
        StmtKind::FrameSet { object } => vec![Node::Expr(object)],
        StmtKind::VarAssign { value, .. } => vec![Node::Expr(value)],
        StmtKind::For { iter, body, .. } => std::iter::once(Node::Expr(iter))
            .chain(body.iter().map(Node::Stmt))
            .collect(),
        StmtKind::If { cond, body, orelse } => std::iter::once(Node::Expr(cond))
            .chain(body.iter().chain(orelse).map(Node::Stmt))
            .collect(),
    }
}

pub fn expr_children(e: &Expr) -> Vec<&Expr> {
    match &e.kind {
        ExprKind::Number { .. } | ExprKind::Direction(_) | ExprKind::Var(_) => Vec::new(),
        ExprKind::Attr { object, .. } => vec![object],
        ExprKind::Neg(x) | ExprKind::Not(x) => vec![x],
        ExprKind::Binary { lhs, rhs, .. }
        | ExprKind::Compare { lhs, rhs, .. }
        | ExprKind::Logic { lhs, rhs, .. } => vec![lhs, rhs],
        ExprKind::Call { args, .. } => args.iter().collect(),
        ExprKind::Index { list, index } => vec![list, index],
    }
}

enum NodeMut<'a> {
    Stmt(&'a mut Stmt),
    Expr(&'a mut Expr),
}

fn stmt_child_mut(s: &mut Stmt, i: usize) -> Option<NodeMut<'_>> {
    match &mut s.kind {
        StmtKind::AttrAssign { object, value, .. } | StmtKind::FacingAssign { object, value } => {
            match i {
                0 => Some(NodeMut::Expr(object)),
                1 => Some(NodeMut::Expr(value)),
                _ => None,
            }
        }
        StmtKind::FrameSet { object } => (i == 0).then_some(NodeMut::Expr(object)),
        StmtKind::VarAssign { value, .. } => (i == 0).then_some(NodeMut::Expr(value)),
        StmtKind::For { iter, body, .. } => {
            if i == 0 {
                Some(NodeMut::Expr(iter))
            } else {
                body.get_mut(i - 1).map(NodeMut::Stmt)
            }
        }
        StmtKind::If { cond, body, orelse } => {
            if i == 0 {
                Some(NodeMut::Expr(cond))
            } else if i - 1 < body.len() {
                body.get_mut(i - 1).map(NodeMut::Stmt)
            } else {
                let n = body.len();
                orelse.get_mut(i - 1 - n).map(NodeMut::Stmt)
            }
        }
    }
}

fn expr_child_mut(e: &mut Expr, i: usize) -> Option<&mut Expr> {
    match &mut e.kind {
        ExprKind::Number { .. } | ExprKind::Direction(_) | ExprKind::Var(_) => None,
        ExprKind::Attr { object, .. } => (i == 0).then_some(&mut **object),
        ExprKind::Neg(x) | ExprKind::Not(x) => (i == 0).then_some(&mut **x),
        ExprKind::Binary { lhs, rhs, .. }
        | ExprKind::Compare { lhs, rhs, .. }
        | ExprKind::Logic { lhs, rhs, .. } => match i {
            0 => Some(&mut **lhs),
            1 => Some(&mut **rhs),
            _ => None,
        },
        ExprKind::Call { args, .. } => args.get_mut(i),
        ExprKind::Index { list, index } => match i {
            0 => Some(&mut **list),
            1 => Some(&mut **index),
            _ => None,
        },
    }
}

/// Resolve `path` to an expression node.
pub fn expr_at_mut<'a>(p: &'a mut Program, path: &NodePath) -> Option<&'a mut Expr> {
    let (first, rest) = path.0.split_first()?;
    let mut node = NodeMut::Stmt(p.statements.get_mut(*first as usize)?);
    for &i in rest {
        node = match node {
            NodeMut::Stmt(s) => stmt_child_mut(s, i as usize)?,
            NodeMut::Expr(e) => NodeMut::Expr(expr_child_mut(e, i as usize)?),
        };
    }
    match node {
        NodeMut::Expr(e) => Some(e),
        NodeMut::Stmt(_) => None,
    }
}

pub fn expr_at<'a>(p: &'a Program, path: &NodePath) -> Option<&'a Expr> {
    let (first, rest) = path.0.split_first()?;
    let mut node = Node::Stmt(p.statements.get(*first as usize)?);
    for &i in rest {
        node = match node {
            Node::Stmt(s) => stmt_children(s).into_iter().nth(i as usize)?,
            Node::Expr(e) => Node::Expr(expr_children(e).into_iter().nth(i as usize)?),
        };
    }
    match node {
        Node::Expr(e) => Some(e),
        Node::Stmt(_) => None,
    }
}

fn site_of(e: &Expr, path: &[u32]) -> Option<EditSite> {
    let (kind, value) = match e.kind {
        ExprKind::Number {
            value,
            editable: true,
        } => (SiteKind::Constant, Literal::Number(value)),
        ExprKind::Direction(f) => (SiteKind::Direction, Literal::Direction(f)),
        _ => return None,
    };
    Some(EditSite {
        path: NodePath(path.to_vec()),
        kind,
        value,
    })
}

fn collect_expr(e: &Expr, path: &mut Vec<u32>, out: &mut Vec<EditSite>) {
    if let Some(site) = site_of(e, path) {
        out.push(site);
    }
    for (i, c) in expr_children(e).into_iter().enumerate() {
        path.push(i as u32);
        collect_expr(c, path, out);
        path.pop();
    }
}

fn collect_stmt(s: &Stmt, path: &mut Vec<u32>, out: &mut Vec<EditSite>) {
    for (i, c) in stmt_children(s).into_iter().enumerate() {
        path.push(i as u32);
        match c {
            Node::Stmt(s) => collect_stmt(s, path, out),
            Node::Expr(e) => collect_expr(e, path, out),
        }
        path.pop();
    }
}

/// Every editable numeric literal and every direction literal, in source order.
pub fn edit_sites(p: &Program) -> Vec<EditSite> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    for (i, s) in p.statements.iter().enumerate() {
        path.push(i as u32);
        collect_stmt(s, &mut path, &mut out);
        path.pop();
    }
    out
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EditError {
    #[error("edit site {0} does not resolve to a matching literal")]
    StalePath(NodePath),
}

/// Copy of `p` with the literal at `path` replaced by `value`.
pub fn apply_edit(p: &Program, path: &NodePath, value: Literal) -> Result<Program, EditError> {
    let mut out = p.clone();
    let node = expr_at_mut(&mut out, path).ok_or_else(|| EditError::StalePath(path.clone()))?;
    match (&mut node.kind, value) {
        (
            ExprKind::Number {
                value: v,
                editable: true,
            },
            Literal::Number(new),
        ) => *v = new,
        (ExprKind::Direction(d), Literal::Direction(new)) => *d = new,
        _ => return Err(EditError::StalePath(path.clone())),
    }
    Ok(out)
}
