use std::fmt;

use crate::geometry::{Axis, Facing};

/// 1-based source position.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(line: u32, col: u32) -> Self {
        Span { line, col }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// A parsed program. Equality is structural: spans are ignored.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Program {
    pub statements: Vec<Stmt>,
}

#[derive(Clone, Debug)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: Span,
}

impl PartialEq for Stmt {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

/// Attributes that accept component writes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VecAttr {
    Center,
    Min,
    Max,
}

impl VecAttr {
    pub fn name(self) -> &'static str {
        match self {
            VecAttr::Center => "center",
            VecAttr::Min => "min",
            VecAttr::Max => "max",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum StmtKind {
    /// `o.center.x = expr`, `o.min.z = expr`, ...
    AttrAssign {
        object: Expr,
        attr: VecAttr,
        axis: Axis,
        value: Expr,
    },
    /// `o.facing = rhs`, where rhs is a cardinal, an object or `p.facing`.
    FacingAssign { object: Expr, value: Expr },
    /// `set_coordinate_frame(o)`
    FrameSet { object: Expr },
    For {
        vars: Vec<String>,
        iter: Expr,
        body: Vec<Stmt>,
    },
    If {
        cond: Expr,
        body: Vec<Stmt>,
        orelse: Vec<Stmt>,
    },
    VarAssign { name: String, value: Expr },
}

#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Expr { kind, span }
    }

    pub fn number(value: f64) -> Self {
        Expr::new(
            ExprKind::Number {
                value,
                editable: true,
            },
            Span::default(),
        )
    }

    pub fn var(name: &str) -> Self {
        Expr::new(ExprKind::Var(name.to_string()), Span::default())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Attr {
    Center,
    Min,
    Max,
    Width,
    Depth,
    Height,
    Facing,
}

impl Attr {
    pub fn from_name(name: &str) -> Option<Attr> {
        Some(match name {
            "center" => Attr::Center,
            "min" => Attr::Min,
            "max" => Attr::Max,
            "width" => Attr::Width,
            "depth" => Attr::Depth,
            "height" => Attr::Height,
            "facing" => Attr::Facing,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Attr::Center => "center",
            Attr::Min => "min",
            Attr::Max => "max",
            Attr::Width => "width",
            Attr::Depth => "depth",
            Attr::Height => "height",
            Attr::Facing => "facing",
        }
    }

    pub fn is_vector(self) -> bool {
        matches!(self, Attr::Center | Attr::Min | Attr::Max)
    }

    pub fn as_vec_attr(self) -> Option<VecAttr> {
        match self {
            Attr::Center => Some(VecAttr::Center),
            Attr::Min => Some(VecAttr::Min),
            Attr::Max => Some(VecAttr::Max),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LogicOp {
    And,
    Or,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    Len,
    Range,
    Enumerate,
    Min,
    Max,
    Abs,
    Floor,
    Cos,
    Sin,
}

impl Builtin {
    pub const ALL: [Builtin; 9] = [
        Builtin::Len,
        Builtin::Range,
        Builtin::Enumerate,
        Builtin::Min,
        Builtin::Max,
        Builtin::Abs,
        Builtin::Floor,
        Builtin::Cos,
        Builtin::Sin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Len => "len",
            Builtin::Range => "range",
            Builtin::Enumerate => "enumerate",
            Builtin::Min => "min",
            Builtin::Max => "max",
            Builtin::Abs => "abs",
            Builtin::Floor => "floor",
            Builtin::Cos => "cos",
            Builtin::Sin => "sin",
        }
    }

    pub fn from_name(name: &str) -> Option<Builtin> {
        Builtin::ALL.into_iter().find(|b| b.name() == name)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    /// Numeric literal. Literals in `range(...)` arguments and list indices
    /// are not editable by repair.
    Number {
        value: f64,
        editable: bool,
    },
    Direction(Facing),
    Var(String),
    Attr {
        object: Box<Expr>,
        attr: Attr,
        axis: Option<Axis>,
    },
    Binary {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Neg(Box<Expr>),
    Call {
        func: Builtin,
        args: Vec<Expr>,
    },
    Index {
        list: Box<Expr>,
        index: Box<Expr>,
    },
    Compare {
        op: CmpOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Logic {
        op: LogicOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Not(Box<Expr>),
}
