use crate::geometry::Axis;
use crate::interp::{bind_template, execute_bound, ExecError, SceneTemplate};
use crate::lang::{Expr, ExprKind, Program, Span, Stmt, StmtKind, VecAttr};

/// Straight-line equivalent of `p`: per object, three literal center
/// writes and one literal facing, in template order.
///
/// Executing the result reproduces the centers and facings of `p` exactly.
pub fn lower_to_flat(p: &Program, t: &SceneTemplate) -> Result<Program, ExecError> {
    let bindings = bind_template(t)?;
    let layout = execute_bound(p, &bindings)?;
    let stmt = |kind| Stmt {
        kind,
        span: Span::default(),
    };
    let mut statements = Vec::with_capacity(4 * layout.objects.len());
    for (ident, o) in bindings.identifiers().iter().zip(&layout.objects) {
        for axis in Axis::ALL {
            statements.push(stmt(StmtKind::AttrAssign {
                object: Expr::var(ident),
                attr: VecAttr::Center,
                axis,
                value: Expr::number(o.center.get(axis)),
            }));
        }
        statements.push(stmt(StmtKind::FacingAssign {
            object: Expr::var(ident),
            value: Expr::new(ExprKind::Direction(o.facing), Span::default()),
        }));
    }
    Ok(Program { statements })
}
