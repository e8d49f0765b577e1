//! Recursive-descent parser producing [`Program`].

use super::ast::*;
use super::lexer::{Tok, Token};
use super::{ParseError, ParseErrorKind};
use crate::geometry::{Axis, Facing};

/// Names that can never be assigned as variables.
pub(crate) fn is_reserved(name: &str) -> bool {
    name == "scene"
        || name == "set_coordinate_frame"
        || Facing::from_name(name).is_some()
        || Builtin::from_name(name).is_some()
}

pub struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    /// >0 while inside `range(...)` arguments or a list index.
    noneditable: u32,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    pub fn new(tokens: Vec<Token>) -> Self {
        Parser {
            tokens,
            pos: 0,
            noneditable: 0,
        }
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        ParseError {
            span: self.span(),
            kind: ParseErrorKind::Syntax {
                expected: expected.iter().map(|s| s.to_string()).collect(),
                found: self.peek().describe(),
            },
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<Token> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&[tok.text()]))
        }
    }

    fn ident(&mut self) -> PResult<(String, Span)> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let span = self.bump().span;
                Ok((name, span))
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    pub fn program(&mut self) -> PResult<Program> {
        let mut statements = Vec::new();
        while *self.peek() != Tok::Eof {
            statements.push(self.statement()?);
        }
        Ok(Program { statements })
    }

    fn block(&mut self) -> PResult<Vec<Stmt>> {
        self.expect(Tok::Colon)?;
        self.expect(Tok::Newline)?;
        self.expect(Tok::Indent)?;
        let mut body = Vec::new();
        while !matches!(self.peek(), Tok::Dedent | Tok::Eof) {
            body.push(self.statement()?);
        }
        self.expect(Tok::Dedent)?;
        Ok(body)
    }

    fn statement(&mut self) -> PResult<Stmt> {
        let span = self.span();
        match self.peek() {
            Tok::For => self.for_stmt(),
            Tok::If => {
                self.bump();
                self.if_rest(span)
            }
            Tok::Ident(name) if name == "set_coordinate_frame" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let object = self.expr()?;
                self.expect(Tok::RParen)?;
                self.expect(Tok::Newline)?;
                Ok(Stmt {
                    kind: StmtKind::FrameSet { object },
                    span,
                })
            }
            Tok::Ident(_) => self.assignment(),
            _ => Err(self.unexpected(&["statement"])),
        }
    }

    fn for_stmt(&mut self) -> PResult<Stmt> {
        let span = self.expect(Tok::For)?.span;
        let mut vars = Vec::new();
        loop {
            let (name, vspan) = self.ident()?;
            if is_reserved(&name) {
                return Err(ParseError {
                    span: vspan,
                    kind: ParseErrorKind::MalformedTarget(format!("cannot bind `{name}`")),
                });
            }
            vars.push(name);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::In)?;
        let iter = self.expr()?;
        let body = self.block()?;
        Ok(Stmt {
            kind: StmtKind::For { vars, iter, body },
            span,
        })
    }

    /// Parses after `if` or `elif`; `elif` chains nest in the else branch.
    fn if_rest(&mut self, span: Span) -> PResult<Stmt> {
        let cond = self.expr()?;
        let body = self.block()?;
        let orelse = match self.peek() {
            Tok::Elif => {
                let espan = self.bump().span;
                vec![self.if_rest(espan)?]
            }
            Tok::Else => {
                self.bump();
                self.block()?
            }
            _ => Vec::new(),
        };
        Ok(Stmt {
            kind: StmtKind::If { cond, body, orelse },
            span,
        })
    }

    fn assignment(&mut self) -> PResult<Stmt> {
        let span = self.span();
        let target = self.postfix()?;
        if *self.peek() != Tok::Assign {
            return Err(self.unexpected(&["="]));
        }
        self.bump();
        let value = self.expr()?;
        self.expect(Tok::Newline)?;
        let malformed = |msg: String| ParseError {
            span,
            kind: ParseErrorKind::MalformedTarget(msg),
        };
        let kind = match target.kind {
            ExprKind::Var(name) => {
                if is_reserved(&name) {
                    return Err(malformed(format!("cannot assign to `{name}`")));
                }
                StmtKind::VarAssign { name, value }
            }
            ExprKind::Attr {
                object,
                attr,
                axis: Some(axis),
            } if attr.is_vector() => StmtKind::AttrAssign {
                object: *object,
                attr: attr.as_vec_attr().unwrap(),
                axis,
                value,
            },
            ExprKind::Attr {
                object,
                attr: Attr::Facing,
                axis: None,
            } => {
                let ok = match &value.kind {
                    ExprKind::Direction(_) | ExprKind::Var(_) | ExprKind::Index { .. } => true,
                    ExprKind::Attr { attr, .. } => *attr == Attr::Facing,
                    _ => false,
                };
                if !ok {
                    return Err(malformed(
                        "facing takes a cardinal, an object, or another object's facing".into(),
                    ));
                }
                StmtKind::FacingAssign {
                    object: *object,
                    value,
                }
            }
            ExprKind::Attr { attr, .. } => {
                return Err(malformed(format!("attribute `{}` is read-only", attr.name())))
            }
            _ => return Err(malformed("not an assignable target".into())),
        };
        Ok(Stmt { kind, span })
    }

    pub fn expr(&mut self) -> PResult<Expr> {
        self.or_expr()
    }

    fn or_expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.and_expr()?;
        while *self.peek() == Tok::Or {
            let span = self.bump().span;
            let rhs = self.and_expr()?;
            lhs = Expr::new(
                ExprKind::Logic {
                    op: LogicOp::Or,
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                },
                span,
            );
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.not_expr()?;
        while *self.peek() == Tok::And {
            let span = self.bump().span;
            let rhs = self.not_expr()?;
            lhs = Expr::new(
                ExprKind::Logic {
                    op: LogicOp::And,
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                },
                span,
            );
        }
        Ok(lhs)
    }

    fn not_expr(&mut self) -> PResult<Expr> {
        if *self.peek() == Tok::Not {
            let span = self.bump().span;
            let inner = self.not_expr()?;
            return Ok(Expr::new(ExprKind::Not(Box::new(inner)), span));
        }
        self.comparison()
    }

    fn comparison(&mut self) -> PResult<Expr> {
        let lhs = self.additive()?;
        let op = match self.peek() {
            Tok::Lt => CmpOp::Lt,
            Tok::Le => CmpOp::Le,
            Tok::Gt => CmpOp::Gt,
            Tok::Ge => CmpOp::Ge,
            Tok::EqEq => CmpOp::Eq,
            Tok::Ne => CmpOp::Ne,
            _ => return Ok(lhs),
        };
        let span = self.bump().span;
        let rhs = self.additive()?;
        Ok(Expr::new(
            ExprKind::Compare {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            },
            span,
        ))
    }

    fn additive(&mut self) -> PResult<Expr> {
        let mut lhs = self.multiplicative()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            let span = self.bump().span;
            let rhs = self.multiplicative()?;
            lhs = binary(op, lhs, rhs, span);
        }
    }

    fn multiplicative(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            let span = self.bump().span;
            let rhs = self.unary()?;
            if op == BinOp::Div && is_zero_literal(&rhs) {
                return Err(ParseError {
                    span,
                    kind: ParseErrorKind::DivisionByZero,
                });
            }
            lhs = binary(op, lhs, rhs, span);
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        if *self.peek() == Tok::Minus {
            let span = self.bump().span;
            // `-` directly before a number folds into a negative literal
            if let Tok::Number(v) = *self.peek() {
                self.bump();
                return Ok(Expr::new(
                    ExprKind::Number {
                        value: -v,
                        editable: self.noneditable == 0,
                    },
                    span,
                ));
            }
            let inner = self.unary()?;
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), span));
        }
        if *self.peek() == Tok::Plus {
            self.bump();
            return self.unary();
        }
        self.postfix()
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let mut e = self.primary()?;
        loop {
            match self.peek() {
                Tok::Dot => {
                    let span = self.bump().span;
                    let (name, aspan) = self.ident()?;
                    let attr = Attr::from_name(&name).ok_or_else(|| ParseError {
                        span: aspan,
                        kind: ParseErrorKind::Syntax {
                            expected: vec![
                                "center".into(),
                                "min".into(),
                                "max".into(),
                                "width".into(),
                                "depth".into(),
                                "height".into(),
                                "facing".into(),
                            ],
                            found: format!("attribute `{name}`"),
                        },
                    })?;
                    let axis = if attr.is_vector() {
                        self.expect(Tok::Dot)?;
                        let (c, cspan) = self.ident()?;
                        Some(match c.as_str() {
                            "x" => Axis::X,
                            "y" => Axis::Y,
                            "z" => Axis::Z,
                            _ => {
                                return Err(ParseError {
                                    span: cspan,
                                    kind: ParseErrorKind::Syntax {
                                        expected: vec!["x".into(), "y".into(), "z".into()],
                                        found: format!("component `{c}`"),
                                    },
                                })
                            }
                        })
                    } else {
                        None
                    };
                    e = Expr::new(
                        ExprKind::Attr {
                            object: Box::new(e),
                            attr,
                            axis,
                        },
                        span,
                    );
                }
                Tok::LBracket => {
                    let span = self.bump().span;
                    self.noneditable += 1;
                    let index = self.expr();
                    self.noneditable -= 1;
                    let index = index?;
                    self.expect(Tok::RBracket)?;
                    e = Expr::new(
                        ExprKind::Index {
                            list: Box::new(e),
                            index: Box::new(index),
                        },
                        span,
                    );
                }
                _ => return Ok(e),
            }
        }
    }

    fn primary(&mut self) -> PResult<Expr> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Number(value) => {
                self.bump();
                Ok(Expr::new(
                    ExprKind::Number {
                        value,
                        editable: self.noneditable == 0,
                    },
                    span,
                ))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() == Tok::LParen {
                    let func = Builtin::from_name(&name).ok_or_else(|| ParseError {
                        span,
                        kind: ParseErrorKind::UnknownBuiltin(name.clone()),
                    })?;
                    self.bump();
                    let guarded = func == Builtin::Range;
                    if guarded {
                        self.noneditable += 1;
                    }
                    let args = self.call_args();
                    if guarded {
                        self.noneditable -= 1;
                    }
                    return Ok(Expr::new(ExprKind::Call { func, args: args? }, span));
                }
                if let Some(f) = Facing::from_name(&name) {
                    return Ok(Expr::new(ExprKind::Direction(f), span));
                }
                Ok(Expr::new(ExprKind::Var(name), span))
            }
            _ => Err(self.unexpected(&["expression"])),
        }
    }

    fn call_args(&mut self) -> PResult<Vec<Expr>> {
        let mut args = Vec::new();
        if self.eat(&Tok::RParen) {
            return Ok(args);
        }
        loop {
            args.push(self.expr()?);
            if self.eat(&Tok::Comma) {
                if self.eat(&Tok::RParen) {
                    return Ok(args);
                }
                continue;
            }
            self.expect(Tok::RParen)?;
            return Ok(args);
        }
    }
}

fn binary(op: BinOp, lhs: Expr, rhs: Expr, span: Span) -> Expr {
    Expr::new(
        ExprKind::Binary {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        },
        span,
    )
}

fn is_zero_literal(e: &Expr) -> bool {
    match &e.kind {
        ExprKind::Number { value, .. } => *value == 0.0,
        ExprKind::Neg(inner) => is_zero_literal(inner),
        _ => false,
    }
}
