use std::process::{Command, Output};

use rtk_cli::report::{scalar, Report, SCHEMA_VERSION};
use serde_json::Value;

fn rtk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rtk")).args(args).env_remove("RTK_TABLES").env_remove("RTK_EMBEDDINGS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Report, i32) {
    let mut a = args.to_vec();
    a.push("--json");
    let o = rtk(&a);
    let r: Report = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stderr)));
    (r, o.status.code().unwrap())
}

#[test]
fn classify_c3_spin() {
    let o = rtk(&["classify", "--type", "C3", "--lambda", "0,0,1", "--p", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for line in ["omega1: yes", "form: Symplectic", "overgroup: Sp(14)", "regular_torus: yes"] {
        assert!(s.lines().any(|l| l == line), "{line}\n{s}");
    }
}

#[test]
fn weights_of_e8_adjoint() {
    let (r, code) = json(&["weights", "--type", "E8", "--weight-name", "w8"]);
    assert_eq!(code, 0);
    assert_eq!(r.schema_version, SCHEMA_VERSION);
    assert_eq!(r.verdicts["dim"], 248);
    assert_eq!(r.verdicts["dominant_orbits"], 2);
    assert_eq!(r.verdicts["zero_multiplicity"], 8);
    let ms = r.multiset.unwrap();
    assert_eq!(ms.len(), 2);
    assert_eq!(ms[1].weight, vec![0; 8]);
    assert_eq!(ms[0].orbit_size, 240);
    assert_eq!(r.input.lambda, Some(vec![0, 0, 0, 0, 0, 0, 0, 1]));
}

#[test]
fn big_multiplicities_stay_exact() {
    let (r, _) = json(&["weights", "--type", "A1", "--lambda", "40"]);
    assert_eq!(r.verdicts["dim"], 41);
    let (r, _) = json(&["weights", "--type", "E8", "--weight-name", "w1+w8"]);
    assert_eq!(r.verdicts["dim"], 779247);
}

#[test]
fn human_output_agrees_with_json() {
    let cases: &[&[&str]] = &[
        &["classify", "--type", "G2", "--lambda", "0,1"],
        &["classify", "--type", "D4", "--lambda", "0,1,0,0"],
        &["forms", "--type", "C2", "--lambda", "0,1", "--p", "2"],
        &["regular-torus", "--type", "B3", "--lambda", "0,0,1"],
    ];
    for args in cases {
        let (r, code) = json(args);
        let o = rtk(args);
        assert_eq!(o.status.code(), Some(code));
        let text = stdout(&o);
        assert_eq!(text, r.to_text());
        for (k, v) in &r.verdicts {
            assert!(text.contains(&format!("{k}: {}", scalar(v))), "{k}");
        }
        let again: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(again, r);
    }
}

#[test]
fn regular_torus_agrees_with_its_table() {
    for (ty, l, want) in [("D4", "0,1,0,0", false), ("C3", "0,1,0", true), ("A2", "1,1", true), ("B2", "0,2", true), ("G2", "1,0", true)] {
        let (r, code) = json(&["regular-torus", "--type", ty, "--lambda", l]);
        assert_eq!(code, 0, "{ty} {l}");
        assert_eq!(r.verdicts["regular_torus"], want, "{ty} {l}");
        assert_eq!(r.verdicts["table_agrees"], true);
    }
}

#[test]
fn unavailable_verdicts_become_null_with_a_note() {
    let (r, code) = json(&["classify", "--type", "D4", "--lambda", "0,1,0,0", "--p", "3"]);
    assert_eq!(code, 0);
    assert_eq!(r.verdicts["regular_torus"], Value::Null);
    assert!(r.provenance.notes.iter().any(|n| n.starts_with("regular_torus:")));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["weights", "--type", "Q3", "--lambda", "1"][..],
        &["weights", "--type", "B3", "--lambda", "1,0"],
        &["weights", "--type", "B3"],
        &["weights", "--type", "A2", "--lambda", "1,-1"],
        &["classify", "--type", "A2", "--lambda", "1,0", "--p", "4"],
        &["forms", "--type", "B3", "--lambda", "1,0,0", "--p", "2"],
        &["element", "--type", "E6", "--entries", "2"],
        &["nonsense"],
    ] {
        let o = rtk(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty());
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn element_regularity() {
    let (r, _) = json(&["element", "--type", "C2", "--entries", "2,3"]);
    assert_eq!((r.verdicts["regular_in_group"].clone(), r.verdicts["regular_in_gl"].clone()), (true.into(), true.into()));
    // -1 is repeated on the natural module but no root takes the value 1
    let (r, _) = json(&["element", "--type", "B2", "--entries", "e(1/4),-1", "--central", "1"]);
    assert_eq!((r.verdicts["regular_in_group"].clone(), r.verdicts["regular_in_gl"].clone()), (true.into(), false.into()));
}

#[test]
fn exceptional_audit_reports_the_inconsistent_line() {
    let (r, code) = json(&["exceptional"]);
    assert_eq!(code, 1);
    assert_eq!(r.verdicts["checked"], 25);
    assert_eq!(r.verdicts["inconsistent"], serde_json::json!(["A1A2 ⊂ E8 (p>=5)"]));
    assert!(r.provenance.embeddings_checksum.is_some());
    let (r, code) = json(&["exceptional", "--group", "F4"]);
    assert_eq!(code, 0);
    assert_eq!(r.verdicts["checked"], 4);
}

#[test]
fn verify_tables_is_clean() {
    let o = rtk(&["verify-tables", "--max-dim", "5000"]);
    let s = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{s}");
    assert!(s.lines().any(|l| l == "summary: 0 mismatches"), "{s}");
    let (r, _) = json(&["verify-tables", "--max-dim", "500", "--pairing-rank", "0"]);
    assert_eq!(r.verdicts["mismatches"], 0);
    assert_eq!(r.verdicts["pairing_checked"], 0);
}

#[test]
fn tampered_tables_fail_verification() {
    let dir = std::env::temp_dir().join(format!("rtk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let text = rtk_core::tables::TableStore::builtin_text();
    let body = text.splitn(3, '\n').nth(2).unwrap().replacen("T3 | C3 | w3 | - | dim 14 | -", "T3 | C3 | w3 | - | dim 15 | -", 1);
    let path = dir.join("tables.txt");
    std::fs::write(&path, rtk_core::tables::seal(&body)).unwrap();
    let o = rtk(&["verify-tables", "--max-dim", "100", "--pairing-rank", "0", "--tables", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("summary: 1 mismatches"));
    let o = Command::new(env!("CARGO_BIN_EXE_rtk"))
        .args(["verify-tables", "--max-dim", "100", "--pairing-rank", "0"])
        .env("RTK_TABLES", &path)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    // an unsealed edit is refused
    std::fs::write(&path, text.replacen("dim 14", "dim 15", 1)).unwrap();
    assert_eq!(rtk(&["verify-tables", "--max-dim", "10", "--tables", path.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn sweep_is_independent_of_worker_count() {
    let one = rtk(&["sweep", "--type", "B3", "--max-dim", "2000", "--workers", "1", "--json"]);
    let four = rtk(&["sweep", "--type", "B3", "--max-dim", "2000", "--workers", "4", "--json"]);
    assert_eq!(one.status.code(), Some(0));
    let strip = |o: &Output| {
        let mut r: Report = serde_json::from_slice(&o.stdout).unwrap();
        r.input.flags.remove("workers");
        r
    };
    assert_eq!(strip(&one), strip(&four));
    let r = strip(&one);
    assert_eq!(r.verdicts["summary"], "0 mismatches");
    let lams: Vec<&Value> = r.verdicts["weights"].as_array().unwrap().iter().map(|e| &e["lambda"]).collect();
    assert!(lams.len() > 10);
    let p3 = rtk(&["sweep", "--type", "G2", "--max-dim", "500", "--p", "3", "--json"]);
    assert_eq!(p3.status.code(), Some(0));
}
