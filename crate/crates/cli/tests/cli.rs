use std::fs;
use std::process::{Command, Output};

fn tangles(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tangles"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn k4_has_one_tangle_of_order_two() {
    let o = tangles(&["finite", "K4", "--order", "2", "--count-only"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1\n");
}

#[test]
fn same_seed_gives_identical_json() {
    let args = [
        "--json",
        "--seed",
        "9",
        "observation",
        "STAR",
        "--samples",
        "40",
    ];
    let (a, b) = (tangles(&args), tangles(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let doc: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["command"], "observation");
    assert_eq!(doc["seed"], 9);
    assert_eq!(doc["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn exit_codes() {
    assert_eq!(tangles(&["census", "STAR"]).status.code(), Some(0));
    assert_eq!(
        tangles(&["census", "/nonexistent/schema.txt"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        tangles(&["orient", "STAR", "--tangle", "uf:L", "--sep", "sep X={c"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(tangles(&["check", "--only", "12"]).status.code(), Some(1));
    assert_eq!(
        tangles(&["tk", "K5-e", "--set", "0,1,2,3,4"]).status.code(),
        Some(1)
    );
}

#[test]
fn graph_files_are_recognised() {
    let dir = std::env::temp_dir().join(format!("tangles-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c4.txt");
    fs::write(
        &path,
        "# a 4-cycle\nv a\nv b\nv c\nv d\ne a b\ne b c\ne c d\ne d a\n",
    )
    .unwrap();
    let o = tangles(&["blocks", path.to_str().unwrap(), "--k", "2"]);
    fs::remove_dir_all(&dir).unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "{a,b,c,d}\n");
}

#[test]
fn dot_of_a_truncated_ray() {
    let o = tangles(&["dot", "RAY", "--truncation", "3"]);
    let text = stdout(&o);
    assert_eq!(
        text.lines()
            .filter(|l| l.trim_end().ends_with(';') && !l.contains("--"))
            .count(),
        3
    );
    assert_eq!(text.matches("--").count(), 2);
}
