use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn psdl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psdl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

struct Scene {
    dir: TempDir,
}

impl Scene {
    fn new(template: &str) -> Self {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("t.json"), template).unwrap();
        Scene { dir }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn program(&self, src: &str) -> PathBuf {
        let p = self.path("p.psdl");
        fs::write(&p, src).unwrap();
        p
    }

    fn template(&self) -> String {
        s(&self.path("t.json"))
    }
}

fn s(p: &Path) -> String {
    p.to_str().unwrap().to_string()
}

const ROOM: &str = r#"{
  "name": "room",
  "dims": {"width": 6, "depth": 4, "height": 3},
  "objects": [
    {"id": "c1", "name": "Chair", "width": 0.5, "depth": 0.5, "height": 0.9, "support": "STANDING"},
    {"id": "c2", "name": "Chair", "width": 0.5, "depth": 0.5, "height": 0.9, "support": "STANDING"},
    {"id": "t", "name": "Table", "width": 1.2, "depth": 0.8, "height": 0.75, "support": "STANDING"},
    {"id": "d", "name": "Door", "width": 0.9, "depth": 0.1, "height": 2.0, "support": "WALL_MOUNTED"}
  ]
}"#;

const TIDY: &str = "\
table.min.z = scene.min.z
for i, c in enumerate(chairs):
    c.center.x = table.min.x - 0.6 + i * 2.4
    c.min.z = scene.min.z
    c.facing = table
door.facing = Y_NEG
door.max.y = scene.max.y
door.center.x = scene.max.x - 1.0
door.min.z = scene.min.z
";

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&psdl(&["--help"])), 0);
    assert_eq!(code(&psdl(&["--version"])), 0);
    assert_eq!(code(&psdl(&["frobnicate"])), 64);
    assert_eq!(code(&psdl(&["exec"])), 64);
}

#[test]
fn exec_writes_layout() {
    let sc = Scene::new(ROOM);
    let p = sc.program(TIDY);
    let o = psdl(&["exec", "--template", &sc.template(), "--program", &s(&p)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let layout: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let objects = layout["objects"].as_array().unwrap();
    assert_eq!(objects.len(), 4);
    assert_eq!(objects[0]["center"][0], -1.2);
    assert_eq!(objects[0]["facing"], "X_POS");

    let out = sc.path("layout.json");
    let o = psdl(&["exec", "--template", &sc.template(), "--program", &s(&p), "--out", &s(&out)]);
    assert_eq!(code(&o), 0);
    assert!(fs::read_to_string(out).unwrap().ends_with("}\n"));
}

#[test]
fn exec_parse_and_runtime_errors() {
    let sc = Scene::new(ROOM);
    let p = sc.program("table.center.x = (1.0\n");
    let o = psdl(&["exec", "--template", &sc.template(), "--program", &s(&p)]);
    assert_eq!(code(&o), 1);

    let p = sc.program("x = 1.0\n\nchairs[5].center.x = 0.0\n");
    let o = psdl(&["exec", "--template", &sc.template(), "--program", &s(&p)]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains(":3:"), "{err}");

    let o = psdl(&["exec", "--template", &s(&sc.path("missing.json")), "--program", &s(&p)]);
    assert_eq!(code(&o), 4);
}

#[test]
fn check_reports_errors() {
    let sc = Scene::new(ROOM);
    let p = sc.program(TIDY);
    let o = psdl(&["check", "--template", &sc.template(), "--program", &s(&p)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    // second chair moved onto the first: the pair overlaps by its whole volume
    let p = sc.program(&format!(
        "{TIDY}chairs[1].center.x = chairs[0].center.x\nchairs[1].center.y = chairs[0].center.y\n"
    ));
    let o = psdl(&["check", "--template", &sc.template(), "--program", &s(&p)]);
    assert_eq!(code(&o), 3);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let pairs = report["overlap"]["items"].as_array().unwrap();
    let hit = pairs
        .iter()
        .find(|i| i["a"] == "c1" && i["b"] == "c2")
        .expect("chair pair listed");
    let full = (0.5f64 * 0.5 * 0.9).cbrt();
    assert!((hit["magnitude"].as_f64().unwrap() - full).abs() < 1e-9, "{hit}");
}

#[test]
fn check_door_clearance() {
    let sc = Scene::new(ROOM);
    // The table sits just inside the swing area in front of the door.
    let p = sc.program(&format!(
        "{TIDY}table.center.x = door.center.x\ntable.max.y = door.min.y - 0.3\n"
    ));
    let o = psdl(&["check", "--template", &sc.template(), "--program", &s(&p)]);
    assert_eq!(code(&o), 3);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let pairs = report["overlap"]["items"].as_array().unwrap();
    assert!(pairs
        .iter()
        .any(|i| i["a"] == "t" && i["b"] == "d" && i["magnitude"].as_f64().unwrap() > 0.01));
}

#[test]
fn check_accepts_layout_file() {
    let sc = Scene::new(ROOM);
    let p = sc.program(TIDY);
    let out = sc.path("layout.json");
    psdl(&["exec", "--template", &sc.template(), "--program", &s(&p), "--out", &s(&out)]);
    assert_eq!(code(&psdl(&["check", "--layout", &s(&out)])), 0);
}

#[test]
fn repair_is_deterministic() {
    let sc = Scene::new(ROOM);
    let p = sc.program(&TIDY.replace("0.6", "2.2"));
    let run = |dir: &str, extra: &[&str]| {
        let out = sc.path(dir);
        let (t, ps, os) = (sc.template(), s(&p), s(&out));
        let mut args = vec!["repair", "--template", &t, "--program", &ps];
        args.extend(["--seed", "3", "--out", &os]);
        args.extend(extra);
        let o = psdl(&args);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        ["repaired.psdl", "layout.json", "trace.json"].map(|f| fs::read(out.join(f)).unwrap())
    };
    let a = run("a", &[]);
    let b = run("b", &[]);
    let c = run("c", &["--sequential"]);
    assert_eq!(a, b);
    assert_eq!(a, c);
    let before = psdl(&["check", "--template", &sc.template(), "--program", &s(&p)]);
    assert_eq!(code(&before), 3);
    let trace: serde_json::Value = serde_json::from_slice(&a[2]).unwrap();
    assert_eq!(trace["kind"], "search");
    let (f0, f1) = (trace["initial_f"].as_f64().unwrap(), trace["final_f"].as_f64().unwrap());
    assert!(f1 < f0, "{f0} -> {f1}");
}

#[test]
fn repair_gd_writes_no_program() {
    let sc = Scene::new(ROOM);
    let p = sc.program(TIDY);
    let out = sc.path("gd");
    let o = psdl(&[
        "repair", "--template", &sc.template(), "--program", &s(&p), "--strategy", "gd", "--out",
        &s(&out),
    ]);
    assert_eq!(code(&o), 0);
    assert!(!out.join("repaired.psdl").exists());
    assert!(out.join("layout.json").exists());
    let trace: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("trace.json")).unwrap()).unwrap();
    assert_eq!(trace["kind"], "gd");

    let o = psdl(&[
        "repair", "--template", &sc.template(), "--program", &s(&p), "--strategy", "annealing",
        "--out", &s(&out),
    ]);
    assert_eq!(code(&o), 64);
}

#[test]
fn render_writes_svg() {
    let sc = Scene::new(ROOM);
    let p = sc.program(&format!("{TIDY}chairs[1].center.x = chairs[0].center.x\n"));
    let out = sc.path("scene.svg");
    let o = psdl(&[
        "render", "--template", &sc.template(), "--program", &s(&p), "--highlight", "--out",
        &s(&out),
    ]);
    assert_eq!(code(&o), 0);
    let svg = fs::read_to_string(out).unwrap();
    assert!(svg.starts_with("<?xml") || svg.starts_with("<svg"));
    assert_eq!(svg.matches("object violation").count(), 2);
}

#[test]
fn inject_corrupts_reproducibly() {
    let sc = Scene::new(ROOM);
    let p = sc.program(TIDY);
    let args = |seed: &'static str| {
        vec![
            "inject".to_string(),
            "--template".into(),
            sc.template(),
            "--program".into(),
            s(&p),
            "--errors".into(),
            "2".into(),
            "--seed".into(),
            seed.into(),
        ]
    };
    let run = |seed| {
        let a = args(seed);
        let refs: Vec<&str> = a.iter().map(String::as_str).collect();
        psdl(&refs)
    };
    let (a, b) = (run("5"), run("5"));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let changed = stdout(&a)
        .lines()
        .zip(TIDY.lines())
        .filter(|(x, y)| x.trim() != y.trim())
        .count();
    assert!((1..=2).contains(&changed), "{}", stdout(&a));

    let too_many = psdl(&[
        "inject", "--template", &sc.template(), "--program", &s(&p), "--errors", "99",
    ]);
    assert_eq!(code(&too_many), 4);
}

#[test]
fn bench_writes_reports() {
    let sc = Scene::new(ROOM);
    let corpus = sc.path("corpus");
    fs::create_dir(&corpus).unwrap();
    fs::copy(sc.path("t.json"), corpus.join("room.json")).unwrap();
    fs::write(corpus.join("room.psdl"), TIDY).unwrap();
    let out = sc.path("report");
    let o = psdl(&[
        "bench", "--corpus", &s(&corpus), "--strategies", "none,psdl", "--seeds", "0,1",
        "--errors", "2", "--out", &s(&out),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["rows"].as_array().unwrap().len(), 4);
    let aggregates = report["aggregates"].as_array().unwrap();
    assert_eq!(aggregates.len(), 2);
    assert_eq!(aggregates[0]["strategy"], "none");
    assert!(fs::read_to_string(out.join("report.txt")).unwrap().contains("psdl"));
}
