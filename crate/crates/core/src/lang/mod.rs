//! Front end for scene programs: lexer, parser, AST, printer and edit sites.
//!
//! The grammar is a closed, indentation-delimited subset of Python:
//!
//! ```text
//! program   := stmt*
//! stmt      := target "=" expr NEWLINE
//!            | "set_coordinate_frame" "(" expr ")" NEWLINE
//!            | "for" IDENT ("," IDENT)* "in" expr ":" block
//!            | "if" expr ":" block ("elif" expr ":" block)* ("else" ":" block)?
//! target    := IDENT | postfix "." ("center"|"min"|"max") "." ("x"|"y"|"z")
//!            | postfix ".facing"
//! expr      := or-chain of and/not/comparison over + - * / and unary -
//! postfix   := primary ("." attr | "[" expr "]")*
//! primary   := NUMBER | IDENT | BUILTIN "(" args ")" | "(" expr ")"
//! ```

mod ast;
mod edit;
mod lexer;
mod parser;
mod unparse;

pub use ast::*;
pub use edit::{
    apply_edit, edit_sites, expr_at, EditError, EditSite, Literal, NodePath, SiteKind,
};
pub use unparse::{format_number, unparse};

pub(crate) use parser::is_reserved;

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    Syntax {
        expected: Vec<String>,
        found: String,
    },
    UnknownBuiltin(String),
    MalformedTarget(String),
    DivisionByZero,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub struct ParseError {
    pub span: Span,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.span)?;
        match &self.kind {
            ParseErrorKind::Syntax { expected, found } if expected.is_empty() => {
                write!(f, "syntax error: {found}")
            }
            ParseErrorKind::Syntax { expected, found } => {
                write!(f, "syntax error: expected {}, found {found}", expected.join(" or "))
            }
            ParseErrorKind::UnknownBuiltin(name) => write!(f, "unknown function `{name}`"),
            ParseErrorKind::MalformedTarget(msg) => write!(f, "malformed assignment: {msg}"),
            ParseErrorKind::DivisionByZero => f.write_str("division by literal zero"),
        }
    }
}

pub fn parse(source: &str) -> Result<Program, ParseError> {
    let tokens = lexer::tokenize(source)?;
    parser::Parser::new(tokens).program()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Axis, Facing};

    fn num(value: f64) -> Expr {
        Expr::number(value)
    }

    #[test]
    fn parses_relative_placement() {
        let p = parse("chair.max.x = table.min.x - 0.1").unwrap();
        let expected = StmtKind::AttrAssign {
            object: Expr::var("chair"),
            attr: VecAttr::Max,
            axis: Axis::X,
            value: Expr::new(
                ExprKind::Binary {
                    op: BinOp::Sub,
                    lhs: Box::new(Expr::new(
                        ExprKind::Attr {
                            object: Box::new(Expr::var("table")),
                            attr: Attr::Min,
                            axis: Some(Axis::X),
                        },
                        Span::default(),
                    )),
                    rhs: Box::new(num(0.1)),
                },
                Span::default(),
            ),
        };
        assert_eq!(p.statements.len(), 1);
        assert_eq!(p.statements[0].kind, expected);
    }

    #[test]
    fn empty_source() {
        assert!(parse("").unwrap().statements.is_empty());
        assert!(parse("# only a comment\n\n").unwrap().statements.is_empty());
    }

    #[test]
    fn enumerate_loop() {
        let p = parse("for i, c in enumerate(cols):\n    c.center.x = scene.center.x + i * d\n")
            .unwrap();
        match &p.statements[0].kind {
            StmtKind::For { vars, body, iter } => {
                assert_eq!(vars, &["i", "c"]);
                assert_eq!(body.len(), 1);
                assert!(matches!(
                    iter.kind,
                    ExprKind::Call {
                        func: Builtin::Enumerate,
                        ..
                    }
                ));
            }
            other => panic!("expected for, got {other:?}"),
        }
    }

    #[test]
    fn facing_forms() {
        let p = parse("a.facing = X_NEG\na.facing = b\na.facing = b.facing\n").unwrap();
        assert!(matches!(
            &p.statements[0].kind,
            StmtKind::FacingAssign { value, .. } if value.kind == ExprKind::Direction(Facing::XNeg)
        ));
        assert!(parse("a.facing = 3").is_err());
    }

    #[test]
    fn errors() {
        let e = parse("a.center.x = random(1)").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownBuiltin("random".into()));
        let e = parse("a.width = 2").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::MalformedTarget(_)));
        let e = parse("scene = 2").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::MalformedTarget(_)));
        let e = parse("x = 1 / 0").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DivisionByZero);
        let e = parse("x = (1 +\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax { .. }));
        let e = parse("a.center.x 2").unwrap_err();
        assert_eq!(e.span, Span::new(1, 12));
        match e.kind {
            ParseErrorKind::Syntax { expected, .. } => assert_eq!(expected, vec!["="]),
            other => panic!("{other:?}"),
        }
        assert!(parse("a.center = 1").is_err());
        assert!(parse("for i in xs:\nx = 1\n").is_err());
    }

    #[test]
    fn continuation_line() {
        let p = parse("d = 2.0\nfor i, c in enumerate(cols):\n    c.center.x = \\\n      scene.center.x +  i * d\n")
            .unwrap();
        assert_eq!(p.statements.len(), 2);
    }

    #[test]
    fn elif_nests_in_else() {
        let p = parse("if a < 1:\n    x = 1\nelif a < 2:\n    x = 2\nelse:\n    x = 3\n").unwrap();
        match &p.statements[0].kind {
            StmtKind::If { orelse, .. } => {
                assert_eq!(orelse.len(), 1);
                assert!(matches!(&orelse[0].kind, StmtKind::If { orelse, .. } if orelse.len() == 1));
            }
            _ => panic!(),
        }
    }

    #[test]
    fn edit_site_extraction() {
        let p = parse("chair.max.x = table.min.x - 0.1").unwrap();
        let sites = edit_sites(&p);
        assert_eq!(sites.len(), 1);
        assert_eq!(sites[0].kind, SiteKind::Constant);
        assert_eq!(sites[0].value, Literal::Number(0.1));

        let p = parse("chair.facing = X_NEG").unwrap();
        let sites = edit_sites(&p);
        assert_eq!(sites.len(), 1);
        assert_eq!(sites[0].kind, SiteKind::Direction);

        let p = parse("for i in range(3):\n    c[i].center.x = i * 2.0\n").unwrap();
        let sites = edit_sites(&p);
        assert_eq!(sites.len(), 1);
        assert_eq!(sites[0].value, Literal::Number(2.0));
        let p = parse("x = chairs[1].center.x + 0.5").unwrap();
        assert_eq!(edit_sites(&p).len(), 1);
    }

    #[test]
    fn apply_edit_touches_only_the_site() {
        let p = parse("chair.max.x = table.min.x - 0.1\nchair.facing = X_NEG\n").unwrap();
        let sites = edit_sites(&p);
        let q = apply_edit(&p, &sites[0].path, Literal::Number(0.2)).unwrap();
        assert_eq!(unparse(&q), "chair.max.x = table.min.x - 0.2\nchair.facing = X_NEG\n");
        assert_eq!(unparse(&p), "chair.max.x = table.min.x - 0.1\nchair.facing = X_NEG\n");
        let r = apply_edit(&q, &sites[1].path, Literal::Direction(Facing::YPos)).unwrap();
        assert!(unparse(&r).ends_with("chair.facing = Y_POS\n"));
        let back = apply_edit(&q, &sites[0].path, sites[0].value).unwrap();
        assert_eq!(back, p);
        // kind mismatch or bad path
        assert!(apply_edit(&p, &sites[0].path, Literal::Direction(Facing::XPos)).is_err());
        assert!(apply_edit(&p, &NodePath(vec![7, 1]), Literal::Number(1.0)).is_err());
    }

    #[test]
    fn negative_edits_round_trip() {
        let p = parse("a.center.x = b.max.x - 0.1 * 2.0").unwrap();
        let sites = edit_sites(&p);
        let q = apply_edit(&p, &sites[0].path, Literal::Number(-0.3)).unwrap();
        let text = unparse(&q);
        assert_eq!(text, "a.center.x = b.max.x - -0.3 * 2.0\n");
        assert_eq!(parse(&text).unwrap(), q);
    }

    #[test]
    fn nested_blocks_indent_by_depth() {
        let src = "for i in range(2):\n    if i > 0.0:\n        for j in range(2):\n            x = i\n";
        let p = parse(src).unwrap();
        let text = unparse(&p);
        assert_eq!(text, src);
        let deepest = text
            .lines()
            .map(|l| (l.len() - l.trim_start().len()) / 4)
            .max()
            .unwrap();
        assert_eq!(deepest, 3);
    }
}
