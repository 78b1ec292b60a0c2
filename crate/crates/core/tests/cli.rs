use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use udm::cli::{main_with_args, Outcome, EXIT_FAILS, EXIT_HOLDS, EXIT_INCONCLUSIVE, EXIT_USAGE};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

/// Copy of a fixture with 1-based indices, for `--one-indexed` runs.
fn one_indexed(dir: &std::path::Path, flag: &str, name: &str) -> String {
    let text = std::fs::read_to_string(fixture(name)).unwrap();
    let converted = match flag {
        "--graph" => udm::io::graph_text(&udm::io::parse_graph(&text, 0).unwrap(), 1),
        "--matroid" => udm::io::matroid_json(&udm::io::parse_matroid(&text, 0).unwrap(), 1).to_string(),
        _ => text,
    };
    let path = dir.join(format!("one_{name}"));
    std::fs::write(&path, converted).unwrap();
    path.display().to_string()
}

fn run(args: &[&str]) -> Outcome {
    main_with_args(std::iter::once("udm").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let v = serde_json::from_str(&out.report).unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", out.report));
    (out.code, v)
}

#[test]
fn tadpole_violator_in_both_index_bases() {
    let tadpole = fixture("tadpole.json");
    let (code, v) = json(&["check-ud", "--matroid", &tadpole]);
    assert_eq!(code, EXIT_FAILS);
    assert_eq!(v["certificate"]["violator"]["subset"], serde_json::json!([1, 2, 3]));
    assert_eq!(v["certificate"]["violator"]["density"], "3/2");
    assert_eq!(v["exit"], EXIT_FAILS);

    let dir = tempfile::tempdir().unwrap();
    let (_, v) = json(&["check-ud", "--matroid", &one_indexed(dir.path(), "--matroid", "tadpole.json"), "--one-indexed"]);
    assert_eq!(v["certificate"]["violator"]["subset"], serde_json::json!([2, 3, 4]));
}

#[test]
fn exit_codes_per_subcommand() {
    let diamond = fixture("diamond.txt");
    let matrix = fixture("diamond_incidence.json");
    let scaled = fixture("diamond_scaled_projection.json");
    let cases: &[(&[&str], i32)] = &[
        (&["check-ud", "--graph", &diamond], EXIT_HOLDS),
        (&["check-strict-ud", "--graph", &diamond], EXIT_HOLDS),
        (&["check-strict-ud", "--graph", &fixture("theta_3_3_6.txt")], EXIT_FAILS),
        (&["density", "--graph", &diamond, "--subset", "0,1,4"], EXIT_HOLDS),
        (&["dual", "--matrix", &matrix], EXIT_HOLDS),
        (&["measure", "--graph", &diamond, "--kind", "positive"], EXIT_HOLDS),
        (&["measure", "--matroid", &fixture("tadpole.json")], EXIT_FAILS),
        (&["scale", "--matrix", &matrix], EXIT_HOLDS),
        (&["scale", "--matrix", &fixture("coloop.json")], EXIT_FAILS),
        (&["projection", "--matrix", &matrix], EXIT_HOLDS),
        (&["variety", "--projection", &scaled], EXIT_HOLDS),
        (&["variety", "--matrix", &matrix], EXIT_FAILS),
        (&["spectral", "--graph", &fixture("k4.txt")], EXIT_HOLDS),
        (&["spectral", "--graph", &fixture("tadpole.txt")], EXIT_FAILS),
        (&["classify-bicyclic", "--graph", &fixture("theta_2_3_6.txt")], EXIT_FAILS),
        (&["classify-bicyclic", "--graph", &fixture("theta_0_4_4.txt")], EXIT_HOLDS),
        (&["toughness", "--graph", &fixture("petersen.txt")], EXIT_HOLDS),
        (&["toughness", "--graph", &fixture("tadpole.txt")], EXIT_FAILS),
        (&["matching", "--graph", &fixture("cube.txt")], EXIT_HOLDS),
        (&["tree-packing", "--graph", &fixture("k4.txt")], EXIT_HOLDS),
        (&["enumerate-bases", "--projection", &fixture("diamond_projection.json")], EXIT_HOLDS),
    ];
    for (args, expected) in cases {
        let out = run(args);
        assert_eq!(out.code, *expected, "{args:?}\n{}", out.report);
    }
}

#[test]
fn usage_errors_and_caps() {
    let diamond = fixture("diamond.txt");
    assert_eq!(run(&["check-ud"]).code, EXIT_USAGE);
    assert_eq!(run(&["check-ud", "--graph", &diamond, "--matrix", &fixture("coloop.json")]).code, EXIT_USAGE);
    assert_eq!(run(&["check-ud", "--graph", "/nonexistent/graph.txt"]).code, EXIT_USAGE);
    assert_eq!(run(&["check-ud", "--graph", &fixture("tadpole.json")]).code, EXIT_USAGE);
    assert_eq!(run(&["toughness", "--matroid", &fixture("tadpole.json")]).code, EXIT_USAGE);
    assert_eq!(run(&["density", "--graph", &diamond, "--subset", "0,9"]).code, EXIT_USAGE);
    assert_eq!(run(&["spectral", "--graph", &diamond, "--subsets", "some"]).code, EXIT_USAGE);
    assert_eq!(run(&["no-such-command"]).code, EXIT_USAGE);
    let cap = run(&["spectral", "--graph", &fixture("clique_and_cycle.txt")]);
    assert_eq!(cap.code, EXIT_INCONCLUSIVE, "{}", cap.report);
    let cap = run(&["check-ud", "--graph", &fixture("petersen.txt"), "--mode", "exhaustive", "--subset-cap", "10"]);
    assert_eq!(cap.code, EXIT_INCONCLUSIVE, "{}", cap.report);
}

#[test]
fn restriction_certificate_on_clique_and_cycle() {
    let k5 = "0,1,2,3,4,5,6,7,8,9";
    let (code, v) = json(&["spectral", "--graph", &fixture("clique_and_cycle.txt"), "--subsets", "sample:10", "--subset", k5]);
    assert_eq!(code, EXIT_FAILS);
    let r = &v["requested_restrictions"][0];
    assert!((r["lhs"].as_f64().unwrap() - 1.25).abs() < 1e-9);
    assert_eq!(r["holds"], false);
    assert_eq!(v["certifies_not_uniformly_dense"], true);
}

#[test]
fn reports_are_deterministic_across_threads() {
    for args in [
        vec!["check-strict-ud", "--graph", "petersen.txt"],
        vec!["spectral", "--graph", "cube.txt", "--subsets", "sample:50"],
        vec!["check-ud", "--graph", "clique_and_cycle.txt"],
    ] {
        let mut args: Vec<String> = args.into_iter().map(String::from).collect();
        args[2] = fixture(&args[2]);
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let one = run(&[&refs[..], &["--threads", "1"]].concat());
        let four = run(&[&refs[..], &["--threads", "4"]].concat());
        assert_eq!(one.report, four.report, "{refs:?}");
        assert_eq!(one.report, run(&[&refs[..], &["--threads", "1"]].concat()).report);
    }
}

#[test]
fn text_format_is_aligned() {
    let out = run(&["density", "--graph", &fixture("c4.txt"), "--format", "text"]);
    assert_eq!(out.code, EXIT_HOLDS);
    assert!(out.report.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["density", "4/3"]), "{}", out.report);
}

#[test]
fn certificates_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inputs = [
        ("--matroid", "tadpole.json"),
        ("--graph", "diamond.txt"),
        ("--graph", "theta_3_3_6.txt"),
        ("--graph", "theta_2_3_6.txt"),
        ("--graph", "petersen.txt"),
        ("--matrix", "diamond_incidence.json"),
        ("--matrix", "coloop.json"),
        ("--projection", "diamond_scaled_projection.json"),
    ];
    for (flag, name) in inputs {
        for command in ["check-ud", "check-strict-ud"] {
            for index in [&[][..], &["--one-indexed"][..]] {
                let input = if index.is_empty() { fixture(name) } else { one_indexed(dir.path(), flag, name) };
                let report = run(&[&[command, flag, input.as_str()][..], index].concat());
                let path = dir.path().join("cert.json");
                std::fs::write(&path, &report.report).unwrap();
                let cert = path.display().to_string();
                let (code, v) = json(&[&["verify", flag, input.as_str(), "--certificate", cert.as_str()][..], index].concat());
                assert_eq!(code, EXIT_HOLDS, "{command} {name}: {v}");
                assert_eq!(v["valid"], true);
            }
        }
    }
}

#[test]
fn tampered_certificates_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let diamond = fixture("diamond.txt");
    let (_, mut v) = json(&["check-strict-ud", "--graph", &diamond]);
    v["certificate"]["witness"]["measure"][0]["weight"] = Value::from("7");
    let path = dir.path().join("bad.json");
    std::fs::write(&path, v.to_string()).unwrap();
    let (code, report) = json(&["verify", "--graph", &diamond, "--certificate", &path.display().to_string()]);
    assert_eq!(code, EXIT_FAILS);
    assert_eq!(report["valid"], false);

    let (_, mut v) = json(&["check-ud", "--matroid", &fixture("tadpole.json")]);
    v["certificate"]["violator"] = serde_json::json!({ "subset": [0, 1, 2], "rank": 3 });
    std::fs::write(&path, v.to_string()).unwrap();
    let (code, _) = json(&["verify", "--matroid", &fixture("tadpole.json"), "--certificate", &path.display().to_string()]);
    assert_eq!(code, EXIT_FAILS);

    assert_eq!(run(&["verify", "--graph", &diamond]).code, EXIT_USAGE);
}

#[test]
fn binary_prints_reports_and_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_udm");
    let out = Command::new(bin).args(["check-ud", "--matroid", &fixture("tadpole.json")]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_FAILS));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["certificate"]["verdict"], "NotUniformlyDense");

    let out = Command::new(bin).arg("--version").output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_HOLDS));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), udm::cli::version_line());

    let out = Command::new(bin).args(["check-ud"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}
