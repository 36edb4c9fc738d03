//! CLI integration tests: byte determinism against the shipped golden
//! files, exit codes, and parse-error locations.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_exss"))
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn run_ok(args: &[&str]) -> Vec<u8> {
    let out = bin().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn golden_cases() -> Vec<(Vec<String>, &'static str)> {
    let f = fixtures();
    let p = |name: &str| f.join(name).to_string_lossy().to_string();
    vec![
        (vec!["pages".into(), p("moore_p2.json"), "--pages".into(), "1..3".into()], "moore_p2.pages.csv"),
        (
            vec!["pages".into(), p("moore_p2.json"), "--pages".into(), "1..2".into(), "--format".into(), "json".into()],
            "moore_p2.pages.json",
        ),
        (vec!["pages".into(), p("sphere.json"), "--pages".into(), "1..1".into()], "sphere.pages.csv"),
        (
            vec!["pages".into(), p("sphere.json"), "--pages".into(), "1..1".into(), "--reindex".into(), "second".into()],
            "sphere.pages.second.csv",
        ),
        (vec!["chart".into(), p("moore_p2.json"), "--page".into(), "2".into()], "moore_p2.chart2.svg"),
        (vec!["chart".into(), p("sphere.json"), "--page".into(), "1".into()], "sphere.chart1.svg"),
        (vec!["tau-module".into(), p("padic_z.json")], "padic_z.taumodule.json"),
        (vec!["omnibus".into(), p("sphere.json"), "--depth".into(), "2".into()], "sphere.omnibus.json"),
        (vec!["omnibus".into(), p("moore_p2.json"), "--depth".into(), "3".into()], "moore_p2.omnibus.json"),
        (vec!["bockstein".into(), p("moore_p2.json")], "moore_p2.bockstein.json"),
        (
            vec!["total-diffs".into(), p("moore_p2.json"), "--max-r".into(), "3".into(), "--max-cap".into(), "4".into()],
            "moore_p2.totaldiffs.json",
        ),
        (vec!["tot".into(), p("cosimplicial_demo.json"), "--pages".into(), "1..2".into()], "cosimplicial_demo.tot.csv"),
        (vec!["decalage".into(), p("cosimplicial_demo.json"), "--max-r".into(), "2".into()], "cosimplicial_demo.decalage.json"),
        (
            vec!["ext".into(), p("exterior.json"), "--range".into(), "0..8".into(), "--t-max".into(), "8".into()],
            "exterior.ext.csv",
        ),
    ]
}

#[test]
fn golden_byte_determinism() {
    for (args, golden) in golden_cases() {
        let args_ref: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
        let run1 = run_ok(&args_ref);
        let run2 = run_ok(&args_ref);
        assert_eq!(run1, run2, "two runs differ for {args:?}");
        let expect = std::fs::read(fixtures().join("golden").join(golden))
            .unwrap_or_else(|_| panic!("golden file {golden} missing"));
        assert_eq!(run1, expect, "output differs from golden {golden}");
    }
}

#[test]
fn exit_code_validation_failure() {
    // truncated file: parse error with location
    let dir = std::env::temp_dir().join("exss-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("truncated.json");
    std::fs::write(&bad, "{ \"format\": 1, \"filtration\": ").unwrap();
    let out = bin().args(["pages", bad.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("truncated.json:1:"), "location missing: {err}");

    // d^2 != 0 payload: named validation error
    let bad2 = dir.join("dsq.json");
    std::fs::write(
        &bad2,
        r#"{
  "format": 1,
  "filtration": {
    "ring": "Z",
    "degree_window": [0, 2],
    "window": [0, 0],
    "profiles": {"below": "constant", "above": "zero"},
    "levels": [{"ranks": [1, 1, 1], "diffs": [[], [[1]], [[1]]]}],
    "transitions": []
  }
}"#,
    )
    .unwrap();
    let out = bin().args(["pages", bad2.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("d^2 != 0"), "named validation error missing: {err}");

    // non-chain transition
    let bad3 = dir.join("nonchain.json");
    std::fs::write(
        &bad3,
        r#"{
  "format": 1,
  "filtration": {
    "ring": "Z",
    "degree_window": [0, 1],
    "window": [0, 1],
    "profiles": {"below": "constant", "above": "zero"},
    "levels": [
      {"ranks": [1, 1], "diffs": [[], [[2]]]},
      {"ranks": [1, 1], "diffs": [[], [[2]]]}
    ],
    "transitions": [[[[1]], [[2]]]]
  }
}"#,
    )
    .unwrap();
    let out = bin().args(["pages", bad3.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("commute") || err.contains("chain"),
        "named transition error missing: {err}"
    );
}

#[test]
fn exit_code_precondition_failure() {
    let inst = fixtures().join("constant_z.json");
    let out = bin().args(["omnibus", inst.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("not complete"), "{err}");
}

#[test]
fn omnibus_report_roundtrip_reverifies() {
    // load the shipped omnibus golden report and replay its witnesses
    let text = std::fs::read_to_string(fixtures().join("golden").join("moore_p2.omnibus.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["all_pass"], serde_json::Value::Bool(true));
    // replay: every recorded lift must reduce to its class under the
    // reduction map (recompute with the library)
    use exss_core::filtration::adic_filtration_complex;
    use exss_core::filtration::moore_complex;
    use exss_core::group::GroupElement;
    use exss_core::sseq::SpectralSequence;
    use num_bigint::BigInt;
    let c = moore_complex(exss_core::Ring::Int, 4);
    let x = adic_filtration_complex(&c, &BigInt::from(2), 6).unwrap().0;
    let ss = SpectralSequence::new(&x);
    let mut replayed = 0;
    for rec in v["records"].as_array().unwrap() {
        let (n, s) = (rec["n"].as_i64().unwrap(), rec["s"].as_i64().unwrap());
        let Some(lift) = rec["lift"].as_array() else { continue };
        let alpha = GroupElement {
            coords: lift.iter().map(|x| x.as_str().unwrap().parse::<BigInt>().unwrap()).collect(),
        };
        let p = ss.couple.proj_hom(n, s);
        let e1 = ss.couple.e_pres(n, s);
        let gen_idx = rec["gen"].as_u64().unwrap() as usize;
        let expected = e1.generator(gen_idx);
        assert!(
            e1.elts_equal(&p.apply(&alpha), &expected),
            "witness fails to re-verify at ({n},{s})"
        );
        replayed += 1;
    }
    assert!(replayed > 0, "no witnesses replayed");
}
