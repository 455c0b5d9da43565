use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use surfkernel::area::ccw_face_walk;
use surfkernel::fixtures::standard;
use surfkernel::generate::{random_surface, rng};
use surfkernel::minor::{format_walk, minor_kernel};
use surfkernel::bigon::SearchConfig;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_surfkernel")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_is_deterministic_and_filling() {
    let dir = TempDir::new().unwrap();
    let a = run(&["generate", "--genus", "2", "--crossings", "40", "--seed", "42"]);
    let b = run(&["generate", "--genus", "2", "--crossings", "40", "--seed", "42"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let p = write(dir.path(), "g.srf", &stdout(&a));
    let st = run(&["stats", s(&p)]);
    let line = stdout(&st);
    assert!(line.contains("vertices=40") && line.contains("filling=true"), "{line}");
    assert_eq!(run(&["generate", "--genus", "1"]).status.code(), Some(3));
}

#[test]
fn kernel_of_a_generated_system_is_stable() {
    let dir = TempDir::new().unwrap();
    let gen = run(&["generate", "--genus", "2", "--crossings", "40", "--seed", "42"]);
    let p = write(dir.path(), "sys.srf", &stdout(&gen));
    let first = run(&["kernel", s(&p)]);
    assert!(first.status.success());
    assert!(stdout(&first).starts_with("kernel vertices="));
    let kernel = fs::read(dir.path().join("sys.kernel.srf")).unwrap();
    let trace = fs::read(dir.path().join("sys.trace")).unwrap();
    assert!(dir.path().join("sys.mop").exists());

    // same inputs give the same bytes
    let again = run(&["kernel", s(&p), "--jobs", "1"]);
    assert!(again.status.success());
    assert_eq!(fs::read(dir.path().join("sys.kernel.srf")).unwrap(), kernel);
    assert_eq!(fs::read(dir.path().join("sys.trace")).unwrap(), trace);

    let rerun = run(&["kernel", s(&dir.path().join("sys.kernel.srf")), "--format", "kv"]);
    let line = stdout(&rerun);
    assert!(line.starts_with("kind=kernel") && line.contains("smoothings=0"), "{line}");
}

#[test]
fn kernel_of_a_graph_writes_minor_operations() {
    let dir = TempDir::new().unwrap();
    let g = random_surface(2, 10, &mut rng(3)).unwrap();
    let p = write(dir.path(), "g.srf", &g.to_srf());
    let o = run(&["kernel", s(&p)]);
    assert!(o.status.success());
    let expected = minor_kernel(&g, SearchConfig::default()).unwrap();
    let mop = fs::read_to_string(dir.path().join("g.mop")).unwrap();
    assert_eq!(mop.lines().count(), expected.ops.len());
    assert!(stdout(&o).contains(&format!("smoothings={}", expected.ops.len())));
    let rerun = run(&["kernel", s(&dir.path().join("g.kernel.srf"))]);
    assert!(stdout(&rerun).contains("smoothings=0"));

    let tight = write(dir.path(), "t.srf", &standard(2).to_srf());
    assert!(stdout(&run(&["kernel", s(&tight)])).contains("smoothings=0"));
    let torus = write(dir.path(), "torus.srf", &standard(1).to_srf());
    assert_eq!(run(&["kernel", s(&torus)]).status.code(), Some(3));
}

#[test]
fn walk_verdicts() {
    let dir = TempDir::new().unwrap();
    let g = standard(2);
    let srf = write(dir.path(), "g.srf", &g.to_srf());
    let face = write(dir.path(), "face.wlk", &format_walk(&ccw_face_walk(&g, 0)));
    let o = run(&["area", s(&srf), s(&face), "--check"]);
    assert_eq!(stdout(&o).trim(), "area 1");
    assert!(o.status.success());

    let back = write(dir.path(), "back.wlk", "0 1\n");
    let o = run(&["simple-lift", s(&srf), s(&back), "--check"]);
    assert_eq!(stdout(&o).trim(), "not-simple collision=(0,2)");
    assert_eq!(o.status.code(), Some(1));
    let kv = run(&["simple-lift", s(&srf), s(&back), "--format", "kv"]);
    assert_eq!(stdout(&kv).trim(), "kind=simple-lift verdict=not-simple k=0 k2=2");

    let o = run(&["contractible", s(&srf), s(&face), "--check"]);
    assert_eq!(stdout(&o).trim(), "contractible");
    let lp = write(dir.path(), "loop.wlk", "0\n");
    let o = run(&["contractible", s(&srf), s(&lp), "--check"]);
    assert_eq!((stdout(&o).trim(), o.status.code()), ("not-contractible", Some(1)));
    let o = run(&["area", s(&srf), s(&lp)]);
    assert_eq!(o.status.code(), Some(1));

    let rev = write(dir.path(), "rev.wlk", "1\n");
    assert_eq!(run(&["homotopic", s(&srf), s(&lp), s(&lp)]).status.code(), Some(0));
    assert_eq!(run(&["homotopic", s(&srf), s(&lp), s(&rev)]).status.code(), Some(1));
    assert_eq!(run(&["homotopic", s(&srf), s(&lp), s(&rev), "--unoriented"]).status.code(), Some(0));

    let bad = write(dir.path(), "bad.wlk", "0 x\n");
    assert_eq!(run(&["contractible", s(&srf), s(&bad)]).status.code(), Some(2));
    let gap = write(dir.path(), "gap.wlk", "0 0 0 5 77\n");
    assert_eq!(run(&["simple-lift", s(&srf), s(&gap)]).status.code(), Some(2));
}

#[test]
fn spectrum_and_medial() {
    let dir = TempDir::new().unwrap();
    let g = random_surface(2, 10, &mut rng(21)).unwrap();
    let srf = write(dir.path(), "g.srf", &g.to_srf());
    let k = minor_kernel(&g, SearchConfig::default()).unwrap();
    let a = write(dir.path(), "a.mop", &surfkernel::minor::format_ops(&k.ops));
    let o = run(&["spectrum-eq", s(&srf), s(&a), s(&a)]);
    assert_eq!(stdout(&o).trim(), "equal");

    let med = run(&["medial", s(&srf)]);
    let mp = write(dir.path(), "m.srf", &stdout(&med));
    let st = stdout(&run(&["stats", s(&mp)]));
    assert!(st.contains(&format!("vertices={}", g.num_edges())) && st.contains("filling=true"), "{st}");
}
