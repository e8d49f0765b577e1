//! Executes programs against a template by write-through attribute assignment.

mod fixed;
mod template;

pub use fixed::{Fixed, FixedVec3, COORD_LIMIT};
pub use template::{
    scene_bounds, Layout, ObjectState, SceneTemplate, Support, TemplateError, TemplateObject,
};

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::geometry::{quantize_direction, Axis, Dims, Facing, Frame};
use crate::lang::{
    Attr, BinOp, Builtin, CmpOp, Expr, ExprKind, LogicOp, Program, Span, Stmt, StmtKind, VecAttr,
};

/// What a frame or attribute operation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Scene,
    Object(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Num(f64),
    Bool(bool),
    Dir(Facing),
    Target(Target),
    List(Arc<[Value]>),
    Tuple(Arc<[Value]>),
}

impl Value {
    fn type_name(&self) -> &'static str {
        match self {
            Value::Num(_) => "number",
            Value::Bool(_) => "bool",
            Value::Dir(_) => "direction",
            Value::Target(Target::Scene) => "scene",
            Value::Target(Target::Object(_)) => "object",
            Value::List(_) => "list",
            Value::Tuple(_) => "tuple",
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BindError {
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error("identifier `{0}` is bound more than once")]
    IdentifierCollision(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum RuntimeErrorKind {
    UnknownIdentifier(String),
    TypeMismatch(String),
    Arity { func: &'static str, got: usize },
    IndexOutOfRange { index: i64, len: usize },
    NonIntegerBound(f64),
    WriteToScene,
    DivisionByZero,
    NonFinite,
    CoordinateOutOfRange(f64),
    TooManyIterations,
}

impl fmt::Display for RuntimeErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuntimeErrorKind::UnknownIdentifier(n) => write!(f, "unknown identifier `{n}`"),
            RuntimeErrorKind::TypeMismatch(m) => write!(f, "type error: {m}"),
            RuntimeErrorKind::Arity { func, got } => {
                write!(f, "wrong number of arguments to `{func}`: {got}")
            }
            RuntimeErrorKind::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for list of length {len}")
            }
            RuntimeErrorKind::NonIntegerBound(v) => write!(f, "range bound {v} is not a whole number"),
            RuntimeErrorKind::WriteToScene => f.write_str("the scene object is read-only"),
            RuntimeErrorKind::DivisionByZero => f.write_str("division by zero"),
            RuntimeErrorKind::NonFinite => f.write_str("arithmetic produced a non-finite value"),
            RuntimeErrorKind::CoordinateOutOfRange(v) => {
                write!(f, "coordinate {v} is outside the representable range")
            }
            RuntimeErrorKind::TooManyIterations => f.write_str("range too large"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{span}: {kind}")]
pub struct RuntimeError {
    pub span: Span,
    pub kind: RuntimeErrorKind,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExecError {
    #[error(transparent)]
    Bind(#[from] BindError),
    #[error(transparent)]
    Runtime(#[from] RuntimeError),
}

const MAX_RANGE: f64 = 1_000_000.0;

/// Lowercase, with every non-alphanumeric character replaced by `_`.
pub fn sanitize(name: &str) -> String {
    let mut s: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() {
                c.to_ascii_lowercase()
            } else {
                '_'
            }
        })
        .collect();
    if s.is_empty() || s.starts_with(|c: char| c.is_ascii_digit()) {
        s.insert(0, '_');
    }
    s
}

/// Strip a trailing index (`chair_2`, `chair2`) from a sanitized name.
fn base_name(sanitized: &str) -> &str {
    let trimmed = sanitized.trim_end_matches(|c: char| c.is_ascii_digit());
    if trimmed.len() == sanitized.len() {
        return sanitized;
    }
    let trimmed = trimmed.strip_suffix('_').unwrap_or(trimmed);
    if trimmed.is_empty() || trimmed == "_" {
        sanitized
    } else {
        trimmed
    }
}

fn plural(base: &str) -> String {
    let consonant_y = base.len() >= 2
        && base.ends_with('y')
        && !base[..base.len() - 1].ends_with(['a', 'e', 'i', 'o', 'u']);
    if consonant_y {
        format!("{}ies", &base[..base.len() - 1])
    } else if base.ends_with(['s', 'x', 'z']) || base.ends_with("ch") || base.ends_with("sh") {
        format!("{base}es")
    } else {
        format!("{base}s")
    }
}

const KEYWORDS: [&str; 8] = ["for", "in", "if", "elif", "else", "and", "or", "not"];

/// Identifier bindings derived from a template, reusable across executions.
#[derive(Clone, Debug)]
pub struct Bindings {
    dims: Dims,
    objects: Vec<TemplateObject>,
    names: Vec<(String, Value)>,
    /// Canonical identifier of each object, in template order.
    identifiers: Vec<String>,
}

impl Bindings {
    pub fn identifiers(&self) -> &[String] {
        &self.identifiers
    }

    /// All bound names in binding order.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(|(n, _)| n.as_str())
    }

    pub fn lookup(&self, name: &str) -> Option<&Value> {
        self.names.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }
}

/// Bind every template object to an identifier.
///
/// A name shared by k ≥ 2 objects (after stripping a trailing index) binds
/// `name_0 .. name_{k-1}` and the list `names`; a unique name binds itself.
pub fn bind_template(t: &SceneTemplate) -> Result<Bindings, BindError> {
    t.validate()?;
    let sanitized: Vec<String> = t.objects.iter().map(|o| sanitize(&o.name)).collect();
    let mut groups: Vec<(String, Vec<usize>)> = Vec::new();
    for (i, s) in sanitized.iter().enumerate() {
        let base = base_name(s);
        match groups.iter_mut().find(|(b, _)| b == base) {
            Some((_, members)) => members.push(i),
            None => groups.push((base.to_string(), vec![i])),
        }
    }

    let mut names: Vec<(String, Value)> = Vec::new();
    let mut identifiers = vec![String::new(); t.objects.len()];
    for (base, members) in &groups {
        if members.len() == 1 {
            let i = members[0];
            identifiers[i] = sanitized[i].clone();
            names.push((sanitized[i].clone(), Value::Target(Target::Object(i))));
        } else {
            for (k, &i) in members.iter().enumerate() {
                let id = format!("{base}_{k}");
                identifiers[i] = id.clone();
                names.push((id, Value::Target(Target::Object(i))));
            }
            let list: Arc<[Value]> = members
                .iter()
                .map(|&i| Value::Target(Target::Object(i)))
                .collect();
            names.push((plural(base), Value::List(list)));
        }
    }

    let mut seen = std::collections::HashSet::new();
    for (n, _) in &names {
        if crate::lang::is_reserved(n) || KEYWORDS.contains(&n.as_str()) || !seen.insert(n.as_str())
        {
            return Err(BindError::IdentifierCollision(n.clone()));
        }
    }

    Ok(Bindings {
        dims: t.dims,
        objects: t.objects.clone(),
        names,
        identifiers,
    })
}

#[derive(Clone, Debug)]
struct Body {
    dims: Dims,
    center: FixedVec3,
    facing: Facing,
    placed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct FixedFrame {
    origin: FixedVec3,
    rotation: u8,
}

impl FixedFrame {
    const DEFAULT: FixedFrame = FixedFrame {
        origin: FixedVec3 {
            x: Fixed::ZERO,
            y: Fixed::ZERO,
            z: Fixed::ZERO,
        },
        rotation: 0,
    };

    fn to_local(&self, p: FixedVec3) -> FixedVec3 {
        (p - self.origin).rotated_cw((4 - self.rotation) % 4)
    }

    fn to_world(&self, p: FixedVec3) -> FixedVec3 {
        p.rotated_cw(self.rotation) + self.origin
    }

    fn as_frame(&self) -> Frame {
        Frame::new(self.origin.to_vec3(), self.rotation)
    }
}

/// Right-hand side of a facing assignment, already evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FacingRhs {
    /// A cardinal in the current frame.
    Cardinal(Facing),
    /// Face toward this target's center.
    Toward(Target),
}

fn fixed(v: f64) -> Result<Fixed, RuntimeErrorKind> {
    Fixed::from_f64(v).map_err(|e| RuntimeErrorKind::CoordinateOutOfRange(e.0))
}

/// Execution state: variables, object bodies and the current frame.
#[derive(Clone, Debug)]
pub struct Environment<'b> {
    bindings: &'b Bindings,
    vars: HashMap<String, Value>,
    bodies: Vec<Body>,
    frame: FixedFrame,
    scene_center: FixedVec3,
}

impl<'b> Environment<'b> {
    /// Fresh environment: unplaced objects at the scene's floor center, facing `Y_POS`.
    pub fn new(bindings: &'b Bindings) -> Self {
        let bodies = bindings
            .objects
            .iter()
            .map(|o| Body {
                dims: o.dims(),
                center: FixedVec3 {
                    x: Fixed::ZERO,
                    y: Fixed::ZERO,
                    z: Fixed::from_f64(o.height / 2.0).unwrap_or_default(),
                },
                facing: Facing::YPos,
                placed: false,
            })
            .collect();
        let vars = bindings.names.iter().cloned().collect();
        Environment {
            bindings,
            vars,
            bodies,
            frame: FixedFrame::DEFAULT,
            scene_center: FixedVec3 {
                x: Fixed::ZERO,
                y: Fixed::ZERO,
                z: Fixed::from_f64(bindings.dims.height / 2.0).unwrap_or_default(),
            },
        }
    }

    pub fn frame(&self) -> Frame {
        self.frame.as_frame()
    }

    pub fn lookup(&self, name: &str) -> Option<&Value> {
        self.vars.get(name)
    }

    fn placement(&self, t: Target) -> (Dims, FixedVec3, Facing) {
        match t {
            Target::Scene => (self.bindings.dims, self.scene_center, Facing::YPos),
            Target::Object(i) => {
                let b = &self.bodies[i];
                (b.dims, b.center, b.facing)
            }
        }
    }

    fn half_extents(&self, dims: Dims, world_facing: Facing) -> Result<FixedVec3, RuntimeErrorKind> {
        let local = world_facing.rotated_ccw(self.frame.rotation);
        let e = dims.extents(local);
        Ok(FixedVec3 {
            x: fixed(e.x / 2.0)?,
            y: fixed(e.y / 2.0)?,
            z: fixed(e.z / 2.0)?,
        })
    }

    /// Current-frame value of a vector attribute component.
    pub fn read_attribute(
        &self,
        t: Target,
        attr: VecAttr,
        axis: Axis,
    ) -> Result<f64, RuntimeErrorKind> {
        let (dims, center, facing) = self.placement(t);
        let c = self.frame.to_local(center).get(axis);
        let v = match attr {
            VecAttr::Center => c,
            VecAttr::Min => c - self.half_extents(dims, facing)?.get(axis),
            VecAttr::Max => c + self.half_extents(dims, facing)?.get(axis),
        };
        Ok(v.to_f64())
    }

    /// Facing of `t` as seen in the current frame.
    pub fn read_facing(&self, t: Target) -> Facing {
        let (_, _, facing) = self.placement(t);
        facing.rotated_ccw(self.frame.rotation)
    }

    /// Translate `obj` along the frame axis so that `attr.axis` equals `value`.
    pub fn write_attribute(
        &mut self,
        t: Target,
        attr: VecAttr,
        axis: Axis,
        value: f64,
    ) -> Result<(), RuntimeErrorKind> {
        let Target::Object(i) = t else {
            return Err(RuntimeErrorKind::WriteToScene);
        };
        let value = fixed(value)?;
        let (dims, center, facing) = self.placement(t);
        let mut local = self.frame.to_local(center);
        let new_center = match attr {
            VecAttr::Center => value,
            VecAttr::Min => value + self.half_extents(dims, facing)?.get(axis),
            VecAttr::Max => value - self.half_extents(dims, facing)?.get(axis),
        };
        local.set(axis, new_center);
        let world = self.frame.to_world(local);
        // keep the f64 view of the world position in range too
        for a in Axis::ALL {
            if world.get(a).to_f64().abs() >= COORD_LIMIT {
                return Err(RuntimeErrorKind::CoordinateOutOfRange(world.get(a).to_f64()));
            }
        }
        let body = &mut self.bodies[i];
        body.center = world;
        body.placed = true;
        Ok(())
    }

    pub fn write_facing(&mut self, t: Target, rhs: FacingRhs) -> Result<(), RuntimeErrorKind> {
        let Target::Object(i) = t else {
            return Err(RuntimeErrorKind::WriteToScene);
        };
        let rotation = self.frame.rotation;
        let world = match rhs {
            FacingRhs::Cardinal(local) => local.rotated_cw(rotation),
            FacingRhs::Toward(other) => {
                let (_, target_center, _) = self.placement(other);
                let here = self.frame.to_local(self.bodies[i].center);
                let there = self.frame.to_local(target_center);
                let d = there - here;
                let current = self.bodies[i].facing.rotated_ccw(rotation);
                quantize_direction(d.x.to_f64(), d.y.to_f64(), current).rotated_cw(rotation)
            }
        };
        let body = &mut self.bodies[i];
        body.facing = world;
        body.placed = true;
        Ok(())
    }

    /// Frame at the target's center with y along its facing; `scene` resets.
    pub fn set_coordinate_frame(&mut self, t: Target) {
        self.frame = match t {
            Target::Scene => FixedFrame::DEFAULT,
            Target::Object(i) => FixedFrame {
                origin: self.bodies[i].center,
                rotation: self.bodies[i].facing.quarter_turns(),
            },
        };
    }

    pub fn layout(&self) -> Layout {
        Layout {
            name: String::new(),
            dims: self.bindings.dims,
            objects: self
                .bindings
                .objects
                .iter()
                .zip(&self.bodies)
                .map(|(o, b)| ObjectState {
                    id: o.id.clone(),
                    name: o.name.clone(),
                    width: o.width,
                    depth: o.depth,
                    height: o.height,
                    support: o.support,
                    center: b.center.to_vec3(),
                    facing: b.facing,
                    placed: b.placed,
                })
                .collect(),
        }
    }

    pub fn run(&mut self, p: &Program) -> Result<(), RuntimeError> {
        self.block(&p.statements)
    }

    fn block(&mut self, stmts: &[Stmt]) -> Result<(), RuntimeError> {
        for s in stmts {
            self.stmt(s)?;
        }
        Ok(())
    }

    fn stmt(&mut self, s: &Stmt) -> Result<(), RuntimeError> {
        let at = |kind| RuntimeError { span: s.span, kind };
        match &s.kind {
            StmtKind::AttrAssign {
                object,
                attr,
                axis,
                value,
            } => {
                let t = self.target(object).map_err(at)?;
                let v = self.number(value).map_err(at)?;
                self.write_attribute(t, *attr, *axis, v).map_err(at)
            }
            StmtKind::FacingAssign { object, value } => {
                let t = self.target(object).map_err(at)?;
                let rhs = match self.eval(value).map_err(at)? {
                    Value::Dir(f) => FacingRhs::Cardinal(f),
                    Value::Target(other) => FacingRhs::Toward(other),
                    v => {
                        return Err(at(RuntimeErrorKind::TypeMismatch(format!(
                            "cannot face a {}",
                            v.type_name()
                        ))))
                    }
                };
                self.write_facing(t, rhs).map_err(at)
            }
            StmtKind::FrameSet { object } => {
                let t = self.target(object).map_err(at)?;
                self.set_coordinate_frame(t);
                Ok(())
            }
            StmtKind::VarAssign { name, value } => {
                let v = self.eval(value).map_err(at)?;
                self.vars.insert(name.clone(), v);
                Ok(())
            }
            StmtKind::For { vars, iter, body } => {
                let items = match self.eval(iter).map_err(at)? {
                    Value::List(items) => items,
                    v => {
                        return Err(at(RuntimeErrorKind::TypeMismatch(format!(
                            "cannot iterate over a {}",
                            v.type_name()
                        ))))
                    }
                };
                for item in items.iter() {
                    if vars.len() == 1 {
                        self.vars.insert(vars[0].clone(), item.clone());
                    } else {
                        match item {
                            Value::Tuple(parts) if parts.len() == vars.len() => {
                                for (n, v) in vars.iter().zip(parts.iter()) {
                                    self.vars.insert(n.clone(), v.clone());
                                }
                            }
                            v => {
                                return Err(at(RuntimeErrorKind::TypeMismatch(format!(
                                    "cannot unpack a {} into {} names",
                                    v.type_name(),
                                    vars.len()
                                ))))
                            }
                        }
                    }
                    self.block(body)?;
                }
                Ok(())
            }
            StmtKind::If { cond, body, orelse } => {
                if self.truthy(cond).map_err(at)? {
                    self.block(body)
                } else {
                    self.block(orelse)
                }
            }
        }
    }

    fn target(&self, e: &Expr) -> Result<Target, RuntimeErrorKind> {
        match self.eval(e)? {
            Value::Target(t) => Ok(t),
            v => Err(RuntimeErrorKind::TypeMismatch(format!(
                "expected an object, found a {}",
                v.type_name()
            ))),
        }
    }

    fn number(&self, e: &Expr) -> Result<f64, RuntimeErrorKind> {
        match self.eval(e)? {
            Value::Num(v) => Ok(v),
            v => Err(RuntimeErrorKind::TypeMismatch(format!(
                "expected a number, found a {}",
                v.type_name()
            ))),
        }
    }

    fn truthy(&self, e: &Expr) -> Result<bool, RuntimeErrorKind> {
        match self.eval(e)? {
            Value::Bool(b) => Ok(b),
            Value::Num(v) => Ok(v != 0.0),
            v => Err(RuntimeErrorKind::TypeMismatch(format!(
                "a {} is not a condition",
                v.type_name()
            ))),
        }
    }

    fn eval(&self, e: &Expr) -> Result<Value, RuntimeErrorKind> {
        Ok(match &e.kind {
            ExprKind::Number { value, .. } => Value::Num(*value),
            ExprKind::Direction(f) => Value::Dir(*f),
            ExprKind::Var(name) => {
                if name == "scene" {
                    Value::Target(Target::Scene)
                } else {
                    self.vars
                        .get(name)
                        .cloned()
                        .ok_or_else(|| RuntimeErrorKind::UnknownIdentifier(name.clone()))?
                }
            }
            ExprKind::Attr { object, attr, axis } => {
                let t = self.target(object)?;
                match (attr.as_vec_attr(), axis) {
                    (Some(va), Some(axis)) => Value::Num(self.read_attribute(t, va, *axis)?),
                    _ => {
                        let (dims, _, _) = self.placement(t);
                        match attr {
                            Attr::Width => Value::Num(dims.width),
                            Attr::Depth => Value::Num(dims.depth),
                            Attr::Height => Value::Num(dims.height),
                            Attr::Facing => Value::Dir(self.read_facing(t)),
                            _ => unreachable!("vector attributes always carry a component"),
                        }
                    }
                }
            }
            ExprKind::Binary { op, lhs, rhs } => {
                let a = self.number(lhs)?;
                let b = self.number(rhs)?;
                let v = match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(RuntimeErrorKind::DivisionByZero);
                        }
                        a / b
                    }
                };
                finite(v)?
            }
            ExprKind::Neg(inner) => Value::Num(-self.number(inner)?),
            ExprKind::Call { func, args } => self.call(*func, args)?,
            ExprKind::Index { list, index } => {
                let items = match self.eval(list)? {
                    Value::List(items) | Value::Tuple(items) => items,
                    v => {
                        return Err(RuntimeErrorKind::TypeMismatch(format!(
                            "cannot index a {}",
                            v.type_name()
                        )))
                    }
                };
                let raw = self.number(index)?;
                let i = whole(raw)?;
                let len = items.len();
                // negative indices count from the end
                let resolved = if i < 0 { i + len as i64 } else { i };
                if resolved < 0 || resolved >= len as i64 {
                    return Err(RuntimeErrorKind::IndexOutOfRange { index: i, len });
                }
                items[resolved as usize].clone()
            }
            ExprKind::Compare { op, lhs, rhs } => {
                let a = self.eval(lhs)?;
                let b = self.eval(rhs)?;
                Value::Bool(compare(*op, &a, &b)?)
            }
            ExprKind::Logic { op, lhs, rhs } => {
                let a = self.truthy(lhs)?;
                Value::Bool(match op {
                    LogicOp::And => a && self.truthy(rhs)?,
                    LogicOp::Or => a || self.truthy(rhs)?,
                })
            }
            ExprKind::Not(inner) => Value::Bool(!self.truthy(inner)?),
        })
    }

    fn call(&self, func: Builtin, args: &[Expr]) -> Result<Value, RuntimeErrorKind> {
        let arity = |ok: bool| {
            if ok {
                Ok(())
            } else {
                Err(RuntimeErrorKind::Arity {
                    func: func.name(),
                    got: args.len(),
                })
            }
        };
        match func {
            Builtin::Len => {
                arity(args.len() == 1)?;
                match self.eval(&args[0])? {
                    Value::List(items) | Value::Tuple(items) => Ok(Value::Num(items.len() as f64)),
                    v => Err(RuntimeErrorKind::TypeMismatch(format!(
                        "len() of a {}",
                        v.type_name()
                    ))),
                }
            }
            Builtin::Range => {
                arity((1..=3).contains(&args.len()))?;
                let nums = args
                    .iter()
                    .map(|a| self.number(a).and_then(whole))
                    .collect::<Result<Vec<i64>, _>>()?;
                let (start, stop, step) = match nums[..] {
                    [stop] => (0, stop, 1),
                    [start, stop] => (start, stop, 1),
                    [start, stop, step] => (start, stop, step),
                    _ => unreachable!(),
                };
                if step == 0 {
                    return Err(RuntimeErrorKind::TypeMismatch("range() step is zero".into()));
                }
                let count = if step > 0 {
                    (stop - start).max(0) as f64 / step as f64
                } else {
                    (start - stop).max(0) as f64 / (-step) as f64
                };
                if count.ceil() > MAX_RANGE {
                    return Err(RuntimeErrorKind::TooManyIterations);
                }
                let mut out = Vec::new();
                let mut i = start;
                while (step > 0 && i < stop) || (step < 0 && i > stop) {
                    out.push(Value::Num(i as f64));
                    i += step;
                }
                Ok(Value::List(out.into()))
            }
            Builtin::Enumerate => {
                arity(args.len() == 1)?;
                match self.eval(&args[0])? {
                    Value::List(items) => Ok(Value::List(
                        items
                            .iter()
                            .enumerate()
                            .map(|(i, v)| Value::Tuple(vec![Value::Num(i as f64), v.clone()].into()))
                            .collect(),
                    )),
                    v => Err(RuntimeErrorKind::TypeMismatch(format!(
                        "enumerate() of a {}",
                        v.type_name()
                    ))),
                }
            }
            Builtin::Min | Builtin::Max => {
                arity(!args.is_empty())?;
                let values: Vec<f64> = if args.len() == 1 {
                    match self.eval(&args[0])? {
                        Value::List(items) => items
                            .iter()
                            .map(|v| match v {
                                Value::Num(x) => Ok(*x),
                                v => Err(RuntimeErrorKind::TypeMismatch(format!(
                                    "{}() over a {}",
                                    func.name(),
                                    v.type_name()
                                ))),
                            })
                            .collect::<Result<_, _>>()?,
                        Value::Num(x) => vec![x],
                        v => {
                            return Err(RuntimeErrorKind::TypeMismatch(format!(
                                "{}() of a {}",
                                func.name(),
                                v.type_name()
                            )))
                        }
                    }
                } else {
                    args.iter().map(|a| self.number(a)).collect::<Result<_, _>>()?
                };
                if values.is_empty() {
                    return Err(RuntimeErrorKind::Arity {
                        func: func.name(),
                        got: 0,
                    });
                }
                let pick = if func == Builtin::Min { f64::min } else { f64::max };
                Ok(Value::Num(values[1..].iter().fold(values[0], |a, &b| pick(a, b))))
            }
            Builtin::Abs | Builtin::Floor | Builtin::Cos | Builtin::Sin => {
                arity(args.len() == 1)?;
                let x = self.number(&args[0])?;
                let v = match func {
                    Builtin::Abs => x.abs(),
                    Builtin::Floor => x.floor(),
                    Builtin::Cos => x.cos(),
                    _ => x.sin(),
                };
                finite(v)
            }
        }
    }
}

fn finite(v: f64) -> Result<Value, RuntimeErrorKind> {
    if v.is_finite() {
        Ok(Value::Num(v))
    } else {
        Err(RuntimeErrorKind::NonFinite)
    }
}

fn whole(v: f64) -> Result<i64, RuntimeErrorKind> {
    if v.fract() != 0.0 || !v.is_finite() || v.abs() > 9.0e15 {
        return Err(RuntimeErrorKind::NonIntegerBound(v));
    }
    Ok(v as i64)
}

fn compare(op: CmpOp, a: &Value, b: &Value) -> Result<bool, RuntimeErrorKind> {
    match (a, b) {
        (Value::Num(x), Value::Num(y)) => Ok(match op {
            CmpOp::Lt => x < y,
            CmpOp::Le => x <= y,
            CmpOp::Gt => x > y,
            CmpOp::Ge => x >= y,
            CmpOp::Eq => x == y,
            CmpOp::Ne => x != y,
        }),
        _ => match op {
            CmpOp::Eq => Ok(a == b),
            CmpOp::Ne => Ok(a != b),
            _ => Err(RuntimeErrorKind::TypeMismatch(format!(
                "cannot order a {} and a {}",
                a.type_name(),
                b.type_name()
            ))),
        },
    }
}

/// Run `p` on prepared bindings and return the final layout.
pub fn execute_bound(p: &Program, bindings: &Bindings) -> Result<Layout, RuntimeError> {
    let mut env = Environment::new(bindings);
    env.run(p)?;
    Ok(env.layout())
}

pub fn execute(p: &Program, t: &SceneTemplate) -> Result<Layout, ExecError> {
    let bindings = bind_template(t)?;
    let mut layout = execute_bound(p, &bindings)?;
    layout.name = t.name.clone();
    Ok(layout)
}
