use proptest::prelude::*;

use psdl::geometry::{Axis, Dims, Facing, Vec3};
use psdl::interp::{
    bind_template, Environment, FacingRhs, Layout, ObjectState, SceneTemplate, Support, Target,
    TemplateObject,
};
use psdl::lang::{parse, unparse, VecAttr};
use psdl::loss::{total_loss, ERROR_THRESHOLD};
use psdl::transport::ot_distance;

fn leaf() -> impl Strategy<Value = String> {
    prop_oneof![
        (0.0f64..100.0).prop_map(|v| format!("{v}")),
        (0u32..20).prop_map(|v| format!("{v}.0")),
        Just("d".to_string()),
        Just("table.width".to_string()),
        Just("scene.max.y".to_string()),
        Just("chairs[1].center.x".to_string()),
        Just("len(chairs)".to_string()),
    ]
}

fn expr() -> impl Strategy<Value = String> {
    leaf().prop_recursive(4, 32, 3, |inner| {
        prop_oneof![
            (inner.clone(), prop::sample::select(vec!["+", "-", "*", "/"]), inner.clone())
                .prop_map(|(a, op, b)| format!("({a} {op} {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a} - {b} * {a}")),
            inner.clone().prop_map(|a| format!("-{a}")),
            inner.clone().prop_map(|a| format!("abs({a})")),
            (inner.clone(), inner).prop_map(|(a, b)| format!("max({a}, {b}, 1.0)")),
        ]
    })
}

fn statement(depth: u32) -> BoxedStrategy<String> {
    let simple = prop_oneof![
        expr().prop_map(|e| format!("d = {e}")),
        (
            prop::sample::select(vec!["center", "min", "max"]),
            prop::sample::select(vec!["x", "y", "z"]),
            expr()
        )
            .prop_map(|(a, x, e)| format!("table.{a}.{x} = {e}")),
        prop::sample::select(vec!["X_NEG", "X_POS", "Y_NEG", "Y_POS", "table", "table.facing"])
            .prop_map(|f| format!("chairs[0].facing = {f}")),
        Just("set_coordinate_frame(table)".to_string()),
    ];
    if depth == 0 {
        return simple.boxed();
    }
    prop_oneof![
        3 => simple,
        1 => prop::collection::vec(statement(depth - 1), 1..3).prop_map(|body| {
            let body: Vec<String> = body.iter().map(|s| indent(s)).collect();
            format!("for i, c in enumerate(chairs):\n{}", body.join("\n"))
        }),
        1 => (expr(), prop::collection::vec(statement(depth - 1), 1..3), statement(depth - 1))
            .prop_map(|(cond, body, other)| {
                let body: Vec<String> = body.iter().map(|s| indent(s)).collect();
                format!("if {cond} < 2.0 and not d > 1.0:\n{}\nelse:\n{}", body.join("\n"), indent(&other))
            }),
    ]
    .boxed()
}

fn indent(s: &str) -> String {
    s.lines().map(|l| format!("    {l}")).collect::<Vec<_>>().join("\n")
}

fn facing() -> impl Strategy<Value = Facing> {
    prop::sample::select(Facing::ALL.to_vec())
}

fn template(objects: &[(&str, Dims)]) -> SceneTemplate {
    SceneTemplate {
        name: "t".into(),
        dims: Dims::new(8.0, 6.0, 3.0),
        objects: objects
            .iter()
            .enumerate()
            .map(|(i, (name, d))| TemplateObject {
                id: format!("o{i}"),
                name: (*name).into(),
                width: d.width,
                depth: d.depth,
                height: d.height,
                support: Support::Standing,
            })
            .collect(),
    }
}

fn dims() -> impl Strategy<Value = Dims> {
    (0.1f64..3.0, 0.1f64..3.0, 0.1f64..3.0).prop_map(|(w, d, h)| Dims::new(w, d, h))
}

fn point() -> impl Strategy<Value = Vec3> {
    (-5.0f64..5.0, -5.0f64..5.0, 0.0f64..4.0).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

fn object(i: usize, name: &str, dims: Dims, center: Vec3, facing: Facing) -> ObjectState {
    ObjectState {
        id: format!("o{i}"),
        name: name.into(),
        width: dims.width,
        depth: dims.depth,
        height: dims.height,
        support: if i % 3 == 0 { Support::WallMounted } else { Support::Standing },
        center,
        facing,
        placed: true,
    }
}

/// Two layouts of the same objects; names drawn from a small pool so that
/// categories repeat, with dims shared within a category.
fn layout_pair() -> impl Strategy<Value = (Layout, Layout)> {
    let category = (0usize..3, dims());
    prop::collection::vec((category, point(), point(), facing()), 1..10).prop_map(|items| {
        let mut dims_of: [Option<Dims>; 3] = [None; 3];
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (i, ((c, d), p, q, f)) in items.into_iter().enumerate() {
            let d = *dims_of[c].get_or_insert(d);
            let name = ["chair", "table", "door"][c];
            a.push(object(i, name, d, p, f));
            b.push(object(i, name, d, q, f));
        }
        let wrap = |objects| Layout {
            name: "t".into(),
            dims: Dims::new(8.0, 6.0, 3.0),
            objects,
        };
        (wrap(a), wrap(b))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn parse_unparse_round_trip(stmts in prop::collection::vec(statement(2), 1..6)) {
        let src = format!("{}\n", stmts.join("\n"));
        let p = parse(&src).unwrap();
        let text = unparse(&p);
        let q = parse(&text).unwrap();
        prop_assert_eq!(&p, &q);
        prop_assert_eq!(text, unparse(&q));
    }

    #[test]
    fn frame_write_then_read_is_exact(
        anchor_facing in facing(),
        anchor_at in point(),
        object_facing in facing(),
        (anchor_dims, object_dims) in (dims(), dims()),
        attr in prop::sample::select(vec![VecAttr::Center, VecAttr::Min, VecAttr::Max]),
        axis in prop::sample::select(Axis::ALL.to_vec()),
        value in -4.0f64..4.0,
    ) {
        let t = template(&[("anchor", anchor_dims), ("box", object_dims)]);
        let b = bind_template(&t).unwrap();
        let mut env = Environment::new(&b);
        let (anchor, obj) = (Target::Object(0), Target::Object(1));
        for (axis, v) in [(Axis::X, anchor_at.x), (Axis::Y, anchor_at.y), (Axis::Z, anchor_at.z)] {
            env.write_attribute(anchor, VecAttr::Center, axis, v).unwrap();
        }
        env.write_facing(anchor, FacingRhs::Cardinal(anchor_facing)).unwrap();
        env.set_coordinate_frame(anchor);
        env.write_facing(obj, FacingRhs::Cardinal(object_facing)).unwrap();
        env.write_attribute(obj, attr, axis, value).unwrap();
        prop_assert_eq!(env.read_attribute(obj, attr, axis).unwrap().to_bits(), value.to_bits());
        prop_assert_eq!(env.read_facing(obj), object_facing);
    }

    #[test]
    fn transport_identity_symmetry_relabeling((l, l0) in layout_pair(), shift in 0usize..10) {
        prop_assert_eq!(ot_distance(&l, &l).unwrap(), 0.0);
        let d = ot_distance(&l, &l0).unwrap();
        prop_assert!(d >= 0.0);
        let back = ot_distance(&l0, &l).unwrap();
        prop_assert!((d - back).abs() <= 1e-9 * d.max(1.0));
        let mut rotated = l0.clone();
        let k = shift % rotated.objects.len();
        rotated.objects.rotate_left(k);
        let relabeled = ot_distance(&l, &rotated).unwrap();
        prop_assert!((d - relabeled).abs() <= 1e-9 * d.max(1.0));
    }

    #[test]
    fn loss_terms_nonnegative_and_consistent((l, _) in layout_pair()) {
        let r = total_loss(&l);
        let terms = [r.out_of_bounds.total, r.overlap.total, r.standing.total, r.mounted.total];
        prop_assert!(terms.iter().all(|t| *t >= 0.0));
        prop_assert!((r.total - terms.iter().sum::<f64>()).abs() <= 1e-12 * r.total.max(1.0));
        let itemized = r.out_of_bounds.items.iter().map(|i| i.magnitude)
            .chain(r.overlap.items.iter().map(|i| i.magnitude))
            .chain(r.standing.items.iter().map(|i| i.magnitude))
            .chain(r.mounted.items.iter().map(|i| i.magnitude));
        let mut errors = 0;
        for m in itemized {
            prop_assert!(m >= 0.0);
            errors += usize::from(m > ERROR_THRESHOLD);
        }
        prop_assert_eq!(errors, r.error_count);
    }
}
