use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilscalars")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn analyze_heisenberg() {
    let o = run(&["analyze", path(&data("heisenberg.pc"))]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("is_z true"));
    assert!(text.contains("derived_rank_le_2 true"));
    let o = run(&["analyze", "--json", path(&data("heisenberg.pc"))]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["recognition"]["is_z"], true);
    assert_eq!(v["tensor"][0][1][0], 1);
}

#[test]
fn abelian_group_stops() {
    let o = run(&["analyze", path(&data("free_abelian2.pc"))]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("decidable"));
}

#[test]
fn quadratic_ring() {
    let o = run(&["analyze", "--json", path(&data("ut3_quadratic_2.pc"))]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["recognition"]["rank"], 2);
    assert_eq!(v["recognition"]["quadratic"]["trace"], 0);
    assert_eq!(v["recognition"]["quadratic"]["constant"], 2);
}

#[test]
fn parse_and_consistency_errors() {
    let bad = scratch("bad.pc", "group g\nclass 2\ngen a 1\nfrobnicate\n");
    assert_eq!(run(&["analyze", path(&bad)]).status.code(), Some(2));
    let inconsistent = scratch("inc.pc", "group g\nclass 2\ngen a 1\ngen b 1\ngen c 2\npow a 2 = c\ncomm b a = c\n");
    assert_eq!(run(&["analyze", path(&inconsistent)]).status.code(), Some(3));
    assert_eq!(run(&["analyze"]).status.code(), Some(1));
    assert_eq!(run(&["analyze", "/nonexistent.pc"]).status.code(), Some(1));
}

#[test]
fn edefs() {
    let o = run(&["emit-edef", "center", path(&data("heisenberg.pc"))]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("eq ")).count(), 2);
    let o = run(&["emit-edef", "maxnilp", "--class", "2", path(&data("free_class2_rank2.pc"))]);
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("eq ")).count(), 27);
    let o = run(&["emit-edef", "verbal", "--width", "1", path(&data("heisenberg.pc"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("eq x = [y1_1,y1_2]*[z1_1,z1_2]^-1"));
}

fn int_chain() -> PathBuf {
    let o = run(&["interpret", "--target", "int", path(&data("heisenberg.pc"))]);
    assert_eq!(o.status.code(), Some(0));
    scratch("int_h.chain", &stdout(&o))
}

#[test]
fn worked_example_end_to_end() {
    let chain = int_chain();
    let sys = data("worked.sys");
    let t = run(&["translate", path(&chain), path(&sys)]);
    assert_eq!(t.status.code(), Some(0));
    assert!(stdout(&t).contains("eq [_w3,_w4] = c^6"));
    let o = run(&["verify", path(&chain), path(&sys), "--box", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("solution x=2 y=3"));
    assert!(text.contains("solution x=3 y=2"));
    assert!(text.contains("decoded_count 2"));
    let o = run(&["verify", "--json", path(&chain), path(&sys), "--mod", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["source_carrier"].as_str().unwrap().contains("Z/5"));
}

#[test]
fn tampered_chain_fails() {
    let text = std::fs::read_to_string(int_chain()).unwrap();
    let at = text.find("begin formula mul").unwrap();
    let cut = text[at..].find("eq [p,b] = x\n").unwrap() + at;
    let tampered = format!("{}{}", &text[..cut], &text[cut + "eq [p,b] = x\n".len()..]);
    let chain = scratch("tampered.chain", &tampered);
    let o = run(&["verify", path(&chain), path(&data("worked.sys")), "--mod", "5"]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stdout(&o).contains("extra x=4 y=1"));
}

#[test]
fn other_targets() {
    for (target, file) in [("scalars", "ut3_quadratic_2.pc"), ("quotient", "heisenberg.pc"), ("quotient", "free_class3_rank2.pc")] {
        let o = run(&["interpret", "--target", target, path(&data(file))]);
        assert_eq!(o.status.code(), Some(0), "{target} {file}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).starts_with("chain "));
    }
    let o = run(&["interpret", "--target", "int", "--a", "a", "--b", "b", path(&data("heisenberg.pc"))]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn solve_directly() {
    let sys = scratch("comm.sys", "system comm\nsort group heisenberg\nvar x y\neq [x,y] = c\n");
    let o = run(&["solve", "--json", path(&data("heisenberg.pc")), path(&sys), "--mod", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], 216);
}

#[test]
fn deterministic_output() {
    let a = run(&["analyze", path(&data("gen_heisenberg2.pc"))]);
    let b = run(&["analyze", path(&data("gen_heisenberg2.pc"))]);
    assert_eq!(a.stdout, b.stdout);
}
