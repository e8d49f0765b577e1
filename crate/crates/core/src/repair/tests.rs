use super::*;
use crate::geometry::Dims;
use crate::interp::{execute, Support, TemplateObject};
use crate::lang::{parse, unparse};

fn template(objects: &[(&str, &str, f64, f64, f64, Support)]) -> SceneTemplate {
    SceneTemplate {
        name: "test".into(),
        dims: Dims::new(6.0, 4.0, 3.0),
        objects: objects
            .iter()
            .map(|&(id, name, w, d, h, support)| TemplateObject {
                id: id.into(),
                name: name.into(),
                width: w,
                depth: d,
                height: h,
                support,
            })
            .collect(),
    }
}

fn row_of_chairs() -> SceneTemplate {
    let objects: Vec<_> = ["1", "2", "3", "4"]
        .iter()
        .map(|id| (*id, "Chair", 0.5, 0.5, 0.9, Support::Standing))
        .collect();
    template(&objects)
}

const ROW: &str = "\
gap = 0.8
for i, c in enumerate(chairs):
    c.center.x = scene.min.x + 1.0 + i * gap
    c.min.z = scene.min.z
    c.facing = Y_NEG
";

#[test]
fn neighborhood_size_and_order() {
    let p = parse("a.center.x = 1.0\na.center.y = 2.0 * 0.5\na.facing = X_POS\n").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let edits = sample_neighborhood(&p, &mut rng, &SearchConfig::default());
    assert_eq!(edits.len(), 34);
    let sites = edit_sites(&p);
    assert!(edits[..10].iter().all(|e| e.path == sites[0].path));
    assert!(edits[30..].iter().all(|e| e.path == sites[3].path));
    let dirs: Vec<_> = edits[30..].iter().map(|e| e.after).collect();
    assert_eq!(dirs, Facing::ALL.map(Literal::Direction).to_vec());
    for e in &edits[..10] {
        let Literal::Number(v) = e.after else { panic!() };
        assert!((0.25..=4.0).contains(&v.abs()));
    }
}

#[test]
fn neighborhood_is_seed_deterministic() {
    let p = parse(ROW).unwrap();
    let cfg = SearchConfig::with_seed(9);
    let a = sample_neighborhood(&p, &mut ChaCha8Rng::seed_from_u64(9), &cfg);
    let b = sample_neighborhood(&p, &mut ChaCha8Rng::seed_from_u64(9), &cfg);
    assert_eq!(a, b);
}

#[test]
fn zero_constants() {
    let p = parse("a.center.x = 0.0").unwrap();
    let cfg = SearchConfig {
        zero_step: 0.0,
        ..SearchConfig::default()
    };
    let edits = sample_neighborhood(&p, &mut ChaCha8Rng::seed_from_u64(3), &cfg);
    assert!(edits.iter().all(|e| e.after == Literal::Number(0.0) || e.after == Literal::Number(-0.0)));
    let edits = sample_neighborhood(&p, &mut ChaCha8Rng::seed_from_u64(3), &SearchConfig::default());
    for e in edits {
        let Literal::Number(v) = e.after else { panic!() };
        assert!((0.025..=0.4).contains(&v.abs()), "{v}");
    }
}

#[test]
fn clean_program_is_left_alone() {
    let t = row_of_chairs();
    let p = parse(ROW).unwrap();
    let (q, trace) = local_search(&p, &t, &SearchConfig::default()).unwrap();
    assert_eq!(trace.initial_report.error_count, 0);
    assert_eq!(q, p);
    assert_eq!(trace.accepted_edit_count, 0);
    assert_eq!(trace.iterations.len(), 1);
}

#[test]
fn shared_spacing_repair_keeps_gaps_equal() {
    let t = row_of_chairs();
    let p = parse(&ROW.replace("gap = 0.8", "gap = 0.3")).unwrap();
    let (q, trace) = local_search(&p, &t, &SearchConfig::with_seed(4)).unwrap();
    assert!(trace.initial_report.error_count > 0);
    assert_eq!(trace.final_report.error_count, 0);
    assert!(trace.accepted_edit_count <= 3);
    let l = execute(&q, &t).unwrap();
    let xs: Vec<f64> = l.objects.iter().map(|o| o.center.x).collect();
    let gaps: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    assert!(gaps.iter().all(|g| (g - gaps[0]).abs() < 1e-6), "{gaps:?}");
    // only literals changed
    let before = unparse(&p);
    let after = unparse(&q);
    assert_eq!(before.lines().count(), after.lines().count());
}

#[test]
fn accepted_steps_decrease_by_more_than_threshold() {
    let t = row_of_chairs();
    let p = parse(&ROW.replace("1.0 +", "-0.5 +").replace("Y_NEG", "X_POS")).unwrap();
    let cfg = SearchConfig::with_seed(11);
    let (_, trace) = local_search(&p, &t, &cfg).unwrap();
    let mut prev = trace.initial_f;
    for it in &trace.iterations {
        if it.accepted {
            assert!(it.f < prev - cfg.improvement_threshold);
            prev = it.f;
        }
    }
    assert_eq!(prev, trace.final_f);
    assert_eq!(
        trace.accepted_edit_count,
        trace.iterations.iter().filter(|i| i.accepted).count()
    );
}

#[test]
fn schedules_produce_identical_results() {
    let t = row_of_chairs();
    let p = parse(&ROW.replace("gap = 0.8", "gap = 2.0")).unwrap();
    let seq = SearchConfig {
        schedule: Schedule::Sequential,
        ..SearchConfig::with_seed(5)
    };
    let par = SearchConfig {
        schedule: Schedule::Parallel,
        ..seq.clone()
    };
    let (a, ta) = local_search(&p, &t, &seq).unwrap();
    let (b, tb) = local_search(&p, &t, &par).unwrap();
    assert_eq!(a, b);
    assert_eq!(serde_json::to_string(&ta).unwrap(), serde_json::to_string(&tb).unwrap());
}

#[test]
fn invalid_seed_program() {
    let t = row_of_chairs();
    let p = parse("chairs[9].center.x = 1.0").unwrap();
    assert!(matches!(
        local_search(&p, &t, &SearchConfig::default()),
        Err(RepairError::InvalidSeedProgram(_))
    ));
    assert!(matches!(
        gradient_descent_repair(&p, &t, &GdConfig::default()),
        Err(RepairError::InvalidSeedProgram(_))
    ));
}

#[test]
fn flat_lowering() {
    let t = row_of_chairs();
    let p = parse(ROW).unwrap();
    let flat = lower_to_flat(&p, &t).unwrap();
    let sites = edit_sites(&flat);
    let n = t.objects.len();
    assert_eq!(sites.iter().filter(|s| s.kind == SiteKind::Constant).count(), 3 * n);
    assert_eq!(sites.iter().filter(|s| s.kind == SiteKind::Direction).count(), n);
    let original = execute(&p, &t).unwrap();
    assert!(execute(&flat, &t).unwrap().same_placement(&original));
    let again = lower_to_flat(&flat, &t).unwrap();
    assert_eq!(unparse(&again), unparse(&flat));
    let reparsed = parse(&unparse(&flat)).unwrap();
    assert!(execute(&reparsed, &t).unwrap().same_placement(&original));
}

#[test]
fn gd_leaves_clean_layout() {
    let t = row_of_chairs();
    let p = parse(ROW).unwrap();
    let (l, trace) = gradient_descent_repair(&p, &t, &GdConfig::default()).unwrap();
    assert_eq!(trace.iterations, 0);
    assert!(l.same_placement(&execute(&p, &t).unwrap()));
}

#[test]
fn gd_separates_overlapping_cubes() {
    let t = template(&[
        ("a", "Box", 1.0, 1.0, 1.0, Support::Standing),
        ("b", "Crate", 1.0, 1.0, 1.0, Support::Standing),
    ]);
    // Separating is only a descent direction while the cube-root overlap
    // slope beats the unit-volume transport slope: depth below 3^-1.5 m.
    let p = parse("box.min.z = 0.0\ncrate.min.z = 0.0\ncrate.center.x = 0.9\n").unwrap();
    let (l, trace) = gradient_descent_repair(&p, &t, &GdConfig::default()).unwrap();
    assert!(trace.initial_report.overlap.total > 0.4);
    let r = total_loss(&l);
    assert!(r.overlap.total < crate::loss::ERROR_THRESHOLD, "{r:?}");
    assert!(trace.final_f < trace.initial_f);

    let deep = parse("box.min.z = 0.0\ncrate.min.z = 0.0\ncrate.center.x = 0.3\n").unwrap();
    let (_, trace) = gradient_descent_repair(&deep, &t, &GdConfig::default()).unwrap();
    assert_eq!(trace.iterations, 0);
}

#[test]
fn strategy_dispatch() {
    let t = row_of_chairs();
    let p = parse(&ROW.replace("gap = 0.8", "gap = 0.3")).unwrap();
    let cfg = SearchConfig::with_seed(2);
    let none = repair(&p, &t, Strategy::None, &cfg).unwrap();
    assert_eq!(none.wall_time, Duration::ZERO);
    assert_eq!(none.before, none.after);
    for s in [Strategy::Flat, Strategy::Psdl] {
        let out = repair(&p, &t, s, &cfg).unwrap();
        assert!(out.after.error_count <= out.before.error_count);
        assert!(out.program.is_some());
    }
    assert!(repair(&p, &t, Strategy::Gd, &cfg).unwrap().program.is_none());
    assert_eq!(Strategy::from_name("flat"), Some(Strategy::Flat));
}
