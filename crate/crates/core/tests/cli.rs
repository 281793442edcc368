use std::process::Command;

use serde_json::Value;
use torus_rigidity::cli::run;
use torus_rigidity::independence::{BoxReport, SiCertificate, SiReport};
use torus_rigidity::measures::MeasureSpec;
use torus_rigidity::mixing::{DiagnosticsReport, RigidityReport};

const THIRDS: &str = r#"{"variant":"atomic","n":1,"atoms":[{"point":["1/3"],"weight":"1/2"},{"point":["2/3"],"weight":"1/2"}]}"#;
const DIRAC2: &str = r#"{"variant":"atomic","n":2,"atoms":[{"point":["0","0"],"weight":"1"}]}"#;
const POWERS_M2: &str = r#"{"n":2,"members":[[[2,1],[1,1]],[[5,3],[3,2]]]}"#;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("torus-rigidity").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn ok_json(args: &[&str]) -> (String, Value) {
    let (code, out, err) = cli(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    let v = serde_json::from_str(&out).unwrap();
    (out, v)
}

/// Parses `text` as `T` and checks it serializes back to the same JSON.
fn round_trip<T: serde::de::DeserializeOwned + serde::Serialize>(text: &str) {
    let value: T = serde_json::from_str(text).unwrap();
    let again = serde_json::to_string_pretty(&value).unwrap() + "\n";
    assert_eq!(again, text);
}

#[test]
fn tridiag_det_examples() {
    let (_, v) = ok_json(&["tridiag", "det", "--n", "3", "--a", "2", "--variant", "M"]);
    assert_eq!(v["det"], "1");
    let (_, v) = ok_json(&["tridiag", "det", "--n", "5", "--a", "2", "--variant", "N"]);
    assert_eq!(v["det"], "6");
    let (_, v) = ok_json(&["tridiag", "det", "--n", "3", "--a", "-2"]);
    assert_eq!(v["det"], "-7");
    assert!(v["closed_form"]["erratum"].is_string());
    let (_, v) = ok_json(&["tridiag", "det", "--n", "2", "--a", "1/2", "--variant", "N"]);
    assert_eq!(v["det"], "-3/4");
    assert!(v["det_fraction_free"].is_null());

    let (code, out, err) = cli(&["tridiag", "det", "--n", "0", "--a", "2"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("n must be at least 1"), "{err}");
}

#[test]
fn tridiag_other_commands() {
    let (_, v) = ok_json(&["tridiag", "charpoly", "--n", "2"]);
    assert_eq!(v["charpoly"], serde_json::json!(["1", "-3", "1"]));
    let (_, v) = ok_json(&["tridiag", "eigen", "--n", "2"]);
    assert_eq!(v.as_array().unwrap().len(), 2);
    let (_, v) = ok_json(&["tridiag", "classify", "--n", "4"]);
    assert_eq!(v["root_is_one"], true);
}

#[test]
fn si_commands() {
    let (out, v) = ok_json(&["si", "prove", "--n", "2"]);
    assert_eq!(v["conclusion"], "proven");
    round_trip::<SiCertificate>(&out);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(
        keys,
        [
            "family_descriptor",
            "n",
            "prime_modulus",
            "modulus_is_prime",
            "per_eigenvalue_degrees",
            "minpolys_divide_charpoly",
            "conclusion",
            "notes"
        ]
    );
    let (_, v) = ok_json(&["si", "prove", "--n", "4"]);
    assert_eq!(v["conclusion"], "not_proven");

    let (out, v) = ok_json(&["si", "box", "--family", POWERS_M2, "--K", "4"]);
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["vectors_tested"], 80);
    round_trip::<BoxReport>(&out);

    let (out, v) = ok_json(&["si", "report", "--n", "3"]);
    assert_eq!(v["verdict"], "proven");
    round_trip::<SiReport>(&out);

    let shear = r#"[[[1,1],[0,1]],[[1,0],[0,1]]]"#;
    let (_, v) = ok_json(&["si", "report", "--family", shear, "--K", "2"]);
    assert_eq!(v["verdict"], "refuted");

    assert_eq!(cli(&["si", "box", "--K", "2"]).0, 1);
    assert_eq!(cli(&["si", "box", "--family", "[[[2,0],[0,1]]", "--K", "2"]).0, 2);
    assert_eq!(cli(&["si", "box", "--family", "[[[2,0],[0,1]], [[1,0],[0,1]]]", "--K", "2"]).0, 1);
}

#[test]
fn field_commands() {
    let (_, v) = ok_json(&["field", "cyclotomic", "--m", "12"]);
    assert_eq!(v["polynomial"], serde_json::json!(["1", "0", "-1", "0", "1"]));
    assert_eq!(v["degree"]["equal"], true);
    let (_, v) = ok_json(&["field", "realmin", "--m", "7"]);
    assert_eq!(v["polynomial"], serde_json::json!(["-1", "-2", "1", "1"]));
    let (_, v) = ok_json(&["field", "degrees", "--max", "40"]);
    assert_eq!(v["all_equal"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 38);
    assert_eq!(cli(&["field", "degrees"]).0, 1);
}

#[test]
fn measure_commands() {
    let (_, v) = ok_json(&["measure", "fourier", "--measure", THIRDS, "--vector", "[1]"]);
    assert_eq!(v["exact"], "-1/2");
    assert_eq!(v["value"]["exactly_one"], false);
    let (_, v) = ok_json(&["measure", "invariant", "--measure", THIRDS, "--matrix", "[[2]]"]);
    assert_eq!(v["invariant"], true);
    let (_, v) = ok_json(&["measure", "support", "--matrix", "[[2,1],[5,3]]", "--measure", DIRAC2]);
    assert_eq!(v["candidates"], serde_json::json!([["0", "0"]]));
    assert_eq!(v["support_within"], true);
    assert_eq!(cli(&["measure", "support", "--matrix", "[[1,2],[2,4]]"]).0, 1);

    let (out, v) = ok_json(&["measure", "orbit", "--point", r#"["1/3"]"#, "--matrix", "[[2]]", "--N", "4"]);
    assert_eq!(v["atoms"][0]["weight"], "1/2");
    round_trip::<MeasureSpec>(&out);

    let lebesgue = r#"{"variant":"lebesgue","n":2}"#;
    assert_eq!(cli(&["measure", "invariant", "--measure", lebesgue, "--matrix", "[[1,1],[1,1]]"]).0, 1);
}

#[test]
fn mix_commands() {
    let pairs = r#"[{"k":[1],"l":[1]}]"#;
    let (out, v) = ok_json(&["mix", "weak", "--measure", THIRDS, "--matrix", "[[2]]", "--pairs", pairs, "--N", "20"]);
    assert_eq!(v["pairs"][0]["limit"]["exact_value"], "9/16");
    assert_eq!(v["overall"]["weak_mixing_evidence"], "fail");
    round_trip::<DiagnosticsReport>(&out);

    let (code, csv, _) = cli(&["mix", "strong", "--measure", THIRDS, "--matrix", "[[2]]", "--pairs", pairs, "--N", "3", "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "N,average_re,average_im,target_re,target_im");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("1,1,0,"), "{}", lines[1]);

    let (_, v) = ok_json(&["mix", "ergodic", "--measure", THIRDS, "--matrix", "[[2]]", "--pairs", "[]", "--N", "5"]);
    assert_eq!(v["pairs"], serde_json::json!([]));
    assert_eq!(v["overall"]["ergodic_evidence"], "inconclusive");

    let (_, v) = ok_json(&[
        "mix", "ergodic", "--measure", THIRDS, "--matrix", "[[2]]", "--pairs", pairs, "--N", "5", "--folner", "shifted",
        "--offset", "7", "--step", "3",
    ]);
    assert_eq!(v["folner"], serde_json::json!({"kind": "shifted", "offset": 7, "step": 3}));

    let half = r#"{"variant":"atomic","n":1,"atoms":[{"point":["0"],"weight":"1/2"},{"point":["1/2"],"weight":"1/2"}]}"#;
    let (code, _, err) = cli(&["mix", "ergodic", "--measure", half, "--matrix", "[[2]]", "--pairs", pairs]);
    assert_eq!(code, 1);
    assert!(err.contains("not invariant"), "{err}");
    assert_eq!(cli(&["mix", "ergodic", "--measure", THIRDS, "--matrix", "[[2]]", "--pairs", r#"[{"k":[1,0],"l":[1]}]"#]).0, 1);
    assert_eq!(cli(&["mix", "ergodic", "--measure", THIRDS, "--matrix", "[[2]]", "--pairs", r#"[{"k":[1]}]"#]).0, 2);
}

#[test]
fn mix_rigidity() {
    let (out, v) = ok_json(&[
        "mix", "rigidity", "--measure", DIRAC2, "--matrix", "[[2,1],[1,1]]", "--family", POWERS_M2, "--witness", "[1,0]",
    ]);
    assert_eq!(v["conclusion"], "dirac");
    assert_eq!(v["hypotheses"]["invariance"].as_array().unwrap().len(), 130);
    round_trip::<RigidityReport>(&out);

    let (_, v) = ok_json(&[
        "mix", "rigidity", "--measure", r#"{"variant":"lebesgue","n":2}"#, "--matrix", "[[2,1],[1,1]]", "--family", POWERS_M2,
        "--witness", "[1,0]", "--j-max", "8",
    ]);
    assert_eq!(v["conclusion"], "lebesgue");
    assert_eq!(v["hypotheses"]["sampled_j"].as_array().unwrap().len(), 9);

    let (_, v) = ok_json(&[
        "mix", "rigidity", "--measure", THIRDS, "--matrix", "[[2]]", "--family", "[[[1]]]", "--witness", "[1]",
        "--subset", r#"{"kind":"explicit","elements":[0,1,2]}"#,
    ]);
    assert_eq!(v["conclusion"], "inconsistent_input");
}

#[test]
fn malformed_and_unreadable_inputs_exit_2() {
    for bad in ["{", r#"{"variant":"atomic"}"#, r#"{"variant":"lebesgue","n":-1}"#, "/no/such/file.json"] {
        let (code, _, err) = cli(&["measure", "fourier", "--measure", bad, "--vector", "[1]"]);
        assert_eq!(code, 2, "{bad}: {err}");
    }
    let (code, _, _) = cli(&["measure", "fourier", "--measure", THIRDS, "--vector", r#"["x"]"#]);
    assert_eq!(code, 2);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(cli(&[]).0, 1);
    assert_eq!(cli(&["tridiag", "det"]).0, 1);
    assert_eq!(cli(&["tridiag", "det", "--n", "3", "--bogus", "1"]).0, 1);
    assert_eq!(cli(&["tridiag", "det", "--n", "3", "--variant", "Q"]).0, 1);
    assert_eq!(cli(&["tridiag", "det", "--n", "3", "--format", "xml"]).0, 1);
}

#[test]
fn help_lists_flags() {
    let cases: &[(&[&str], &[&str])] = &[
        (&["tridiag", "det"], &["--n", "--a", "--variant", "--format", "--out"]),
        (&["tridiag", "charpoly"], &["--n", "--a", "--variant"]),
        (&["tridiag", "eigen"], &["--n"]),
        (&["tridiag", "classify"], &["--n"]),
        (&["si", "prove"], &["--n", "--format"]),
        (&["si", "box"], &["--family", "--n", "--K"]),
        (&["si", "report"], &["--family", "--n", "--K"]),
        (&["field", "cyclotomic"], &["--m"]),
        (&["field", "realmin"], &["--m"]),
        (&["field", "degrees"], &["--m", "--max"]),
        (&["measure", "fourier"], &["--measure", "--vector"]),
        (&["measure", "invariant"], &["--measure", "--matrix"]),
        (&["measure", "support"], &["--matrix", "--measure"]),
        (&["measure", "orbit"], &["--point", "--matrix", "--N"]),
        (&["mix", "ergodic"], &["--measure", "--matrix", "--pairs", "--folner", "--N", "--format", "--out"]),
        (&["mix", "weak"], &["--measure", "--matrix", "--pairs", "--folner", "--N"]),
        (&["mix", "strong"], &["--measure", "--matrix", "--pairs", "--folner", "--N"]),
        (&["mix", "rigidity"], &["--measure", "--matrix", "--family", "--witness", "--subset", "--K"]),
    ];
    for (cmd, flags) in cases {
        let mut args = cmd.to_vec();
        args.push("--help");
        let (code, out, _) = cli(&args);
        assert_eq!(code, 0, "{cmd:?}");
        for f in *flags {
            assert!(out.contains(f), "{cmd:?} help lacks {f}");
        }
    }
    for group in ["tridiag", "si", "field", "measure", "mix"] {
        assert_eq!(cli(&[group, "--help"]).0, 0);
    }
    assert_eq!(cli(&["--help"]).0, 0);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("torus-rigidity-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cert.json");
    let p = path.to_str().unwrap();
    let (code, out, _) = cli(&["si", "prove", "--n", "3", "--out", p]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let (_, direct, _) = cli(&["si", "prove", "--n", "3"]);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), direct);

    // file inputs behave like inline JSON
    let m = dir.join("m.json");
    std::fs::write(&m, THIRDS).unwrap();
    let (_, from_file, _) = cli(&["measure", "fourier", "--measure", m.to_str().unwrap(), "--vector", "[1]"]);
    let (_, inline, _) = cli(&["measure", "fourier", "--measure", THIRDS, "--vector", "[1]"]);
    assert_eq!(from_file, inline);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_torus-rigidity");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["tridiag", "det", "--n", "3", "--a", "2"]), Some(0));
    assert_eq!(status(&["tridiag", "det", "--n", "0", "--a", "2"]), Some(1));
    assert_eq!(status(&["measure", "fourier", "--measure", "{", "--vector", "[1]"]), Some(2));
    assert_eq!(status(&["mix", "--help"]), Some(0));
}
