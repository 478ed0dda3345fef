use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn polyform(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyform"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn graph(dir: &Path, name: &str, n: usize, directed: bool, edges: &[(usize, usize)]) {
    let mut text = format!(
        "graph directed={} weighted=0 n={n} m={}\n",
        directed as u8,
        edges.len()
    );
    for (u, v) in edges {
        text.push_str(&format!("{u} {v}\n"));
    }
    fs::write(dir.join(name), text).unwrap();
}

#[test]
fn formulate_assign_decide_round() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let out = polyform(d, &["formulate", "ham-path", "n=4", "theta=2", "-o", "b"]);
    assert_eq!(code(&out), 0, "{out:?}");
    let meta = fs::read_to_string(d.join("b/meta.txt")).unwrap();
    assert_eq!(meta, "problem=ham-path n=4 theta=2 delta=2 s=36\n");
    assert_eq!(
        fs::read_to_string(d.join("b/legend.txt"))
            .unwrap()
            .lines()
            .count(),
        36
    );

    graph(d, "path.txt", 4, true, &[(2, 0), (0, 3), (3, 1)]);
    graph(d, "empty.txt", 4, true, &[]);
    assert_eq!(
        code(&polyform(
            d,
            &["assign", "ham-path", "path.txt", "theta=2", "-o", "yes.txt"]
        )),
        0
    );
    assert_eq!(
        code(&polyform(
            d,
            &["assign", "--bundle", "b", "empty.txt", "-o", "no.txt"]
        )),
        0
    );
    assert!(stdout(&polyform(d, &["decide", "b", "yes.txt"])).starts_with("yes value="));
    assert_eq!(
        stdout(&polyform(d, &["decide", "b", "no.txt"])),
        "no value=0\n"
    );

    // The empty graph sets no segment variable whose set has two nodes.
    let legend = fs::read_to_string(d.join("b/legend.txt")).unwrap();
    let bits = fs::read_to_string(d.join("no.txt")).unwrap();
    let bits: Vec<&str> = bits.lines().nth(1).unwrap().split_whitespace().collect();
    for (line, bit) in legend.lines().zip(&bits) {
        let multi = line
            .split_whitespace()
            .nth(3)
            .is_some_and(|s| s.contains(','));
        assert!(!multi || *bit == "0", "{line}");
    }
}

#[test]
fn exit_codes() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    assert_eq!(
        code(&polyform(
            d,
            &["formulate", "ham-path", "n=4", "theta=1", "-o", "x"]
        )),
        2
    );
    assert_eq!(
        code(&polyform(
            d,
            &["formulate", "hamiltonian", "n=4", "-o", "x"]
        )),
        64
    );
    assert_eq!(code(&polyform(d, &["frobnicate"])), 64);
    assert_eq!(code(&polyform(d, &["selftest", "everything"])), 64);
    fs::write(d.join("bad.txt"), "graph directed=1 n=4\n").unwrap();
    assert_eq!(code(&polyform(d, &["assign", "ham-path", "bad.txt"])), 65);
    assert_eq!(
        code(&polyform(d, &["assign", "ham-path", "missing.txt"])),
        66
    );

    assert_eq!(
        code(&polyform(d, &["formulate", "ham-path", "n=4", "-o", "b"])),
        0
    );
    fs::write(d.join("short.txt"), "assign s=2\n1 0\n").unwrap();
    assert_eq!(code(&polyform(d, &["decide", "b", "short.txt"])), 65);
    fs::write(
        d.join("zeros.txt"),
        format!("assign s=36\n{}\n", vec!["0"; 36].join(" ")),
    )
    .unwrap();
    assert_eq!(
        stdout(&polyform(d, &["decide", "b", "zeros.txt"])),
        "no value=0\n"
    );
}

#[test]
fn k_path_bundle_carries_its_splitter() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let out = polyform(
        d,
        &["formulate", "k-path", "n=8", "k=3", "theta=2", "-o", "kp"],
    );
    assert_eq!(code(&out), 0, "{out:?}");
    let splitter = fs::read_to_string(d.join("kp/splitter.txt")).unwrap();
    assert!(splitter.starts_with("splitter n=8 k=3 "));
    assert_eq!(
        code(&polyform(d, &["splitter", "verify", "kp/splitter.txt"])),
        0
    );
}

#[test]
fn circuit_round_trip_and_reject() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    fs::write(
        d.join("f.txt"),
        "poly nvars=2 degree=2 modulus=17\n3 1\n1 0^1 1^1\n",
    )
    .unwrap();
    fs::write(
        d.join("g.txt"),
        "poly nvars=2 degree=2 modulus=17\n4 1\n1 0^1 1^1\n",
    )
    .unwrap();
    assert_eq!(
        code(&polyform(
            d,
            &["circuit", "build-sop", "f.txt", "-o", "c.txt"]
        )),
        0
    );
    assert_eq!(
        stdout(&polyform(d, &["circuit", "verify", "c.txt", "f.txt"])),
        "accept\n"
    );
    let out = polyform(d, &["circuit", "verify", "c.txt", "g.txt"]);
    assert_eq!(code(&out), 3);
    assert_eq!(stdout(&out), "reject monomial=1 circuit=3 target=4\n");
    // 3 + 2·5 = 13 mod 17.
    assert_eq!(
        stdout(&polyform(d, &["circuit", "eval", "c.txt", "2", "5"])),
        "13\n"
    );
    let out = polyform(
        d,
        &[
            "circuit",
            "homogenize",
            "c.txt",
            "--delta",
            "2",
            "-o",
            "h.txt",
        ],
    );
    assert_eq!(code(&out), 0);
    let h = fs::read_to_string(d.join("h.txt")).unwrap();
    assert_eq!(
        h.lines().last().unwrap().split_whitespace().count(),
        4,
        "{h}"
    );
}

#[test]
fn splitter_build_and_verify() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let out = polyform(
        d,
        &[
            "splitter", "build", "compose", "n=12", "k=4", "c=2", "-o", "s.txt",
        ],
    );
    assert_eq!(code(&out), 0);
    let line = stdout(&out);
    let field = |name: &str| -> usize {
        line.split_whitespace()
            .find_map(|w| w.strip_prefix(&format!("{name}=")))
            .unwrap()
            .parse()
            .unwrap()
    };
    assert_eq!(
        field("size"),
        field("code") * field("interval") * field("greedy").pow(field("blocks") as u32)
    );
    assert_eq!(code(&polyform(d, &["splitter", "verify", "s.txt"])), 0);

    fs::write(
        d.join("const.txt"),
        "splitter n=4 k=2 range=2 kind=injective count=1\n0 0 0 0\n",
    )
    .unwrap();
    let out = polyform(d, &["splitter", "verify", "const.txt"]);
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("unsplit=0,1"));
    assert_eq!(
        code(&polyform(
            d,
            &["splitter", "build", "magic", "n=3", "k=2", "-o", "m.txt"]
        )),
        64
    );
}

#[test]
fn pipeline_is_deterministic_and_rejects_wrong_candidates() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    graph(d, "a.txt", 4, true, &[(0, 1), (1, 2), (2, 3)]);
    graph(d, "b.txt", 4, true, &[(0, 1), (2, 3)]);
    let args = ["pipeline", "ham-path", "theta=2", "a.txt", "b.txt"];
    let first = polyform(d, &args);
    assert_eq!(code(&first), 0, "{first:?}");
    let text = stdout(&first);
    assert!(text.contains("verify accept"));
    assert!(text.contains("decision 0 yes") && text.contains("decision 1 no"));
    assert_eq!(
        stdout(&polyform(
            d,
            &["--jobs", "1", "pipeline", "ham-path", "theta=2", "a.txt", "b.txt"]
        )),
        text
    );
    assert_eq!(stdout(&polyform(d, &args)), text);

    fs::write(
        d.join("wrong.txt"),
        "circuit nvars=1 modulus=none\ng0 = input 0\noutput g0\n",
    )
    .unwrap();
    let out = polyform(
        d,
        &[
            "pipeline",
            "ham-path",
            "theta=2",
            "a.txt",
            "--candidate",
            "wrong.txt",
        ],
    );
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("verify reject"));
    assert!(!stdout(&out).contains("decision"));

    let out = polyform(d, &["pipeline", "ham-path", "n=4", "theta=2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("instances 0") && !stdout(&out).contains("decision"));
}

#[test]
fn steiner_assignment_takes_terminals_and_budget() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    fs::write(
        d.join("w.txt"),
        "graph directed=0 weighted=1 n=5 m=4\n0 1 1\n1 2 1\n2 3 2\n3 4 1\n",
    )
    .unwrap();
    assert_eq!(
        code(&polyform(
            d,
            &["formulate", "k-steiner", "n=5", "k=3", "w=6", "-o", "st"]
        )),
        0
    );
    let run = |t: &str| {
        let budget = format!("t={t}");
        let out = polyform(
            d,
            &[
                "assign",
                "--bundle",
                "st",
                "w.txt",
                "terminals=0,2,4",
                &budget,
                "-o",
                "x.txt",
            ],
        );
        assert_eq!(code(&out), 0, "{out:?}");
        stdout(&polyform(d, &["decide", "st", "x.txt"]))
    };
    // The only tree spanning 0, 2 and 4 is the whole path, of weight 5.
    assert!(run("5").starts_with("yes"));
    assert_eq!(run("4"), "no value=0\n");
}

#[test]
fn selftest_scope_runs() {
    let tmp = TempDir::new().unwrap();
    let out = polyform(tmp.path(), &["selftest", "splitters"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("[PASS]  8 splitters"));
}
