//! End-to-end tests of the `crk` binary: exit codes, golden JSON output,
//! and agreement between human and machine renderings.

use std::path::Path;
use std::process::{Command, Output};

fn crk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crk"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .env_remove("CRK_LIMIT")
        .output()
        .expect("binary runs")
}

fn crk_with_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crk"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

const FIXTURE: &str = "tests/data/spaces.crk";

#[test]
fn verify_passes_and_exits_zero() {
    let out = crk(&["verify"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(!text.contains("[FAIL]"));
    assert!(text.contains("0 failed"));
}

#[test]
fn verify_family_filter() {
    let out = crk(&["verify", "--family", "dold"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("Dold P(2,3)"));
    assert!(!text.contains("RP5/RP1"));

    let out = crk(&["verify", "--family", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_json_schema() {
    let out = crk(&["verify", "--family", "lens", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["command"], "verify");
    assert_eq!(v["status"], "ok");
    assert_eq!(v["results"]["failed"], 0);
    let claims = v["results"]["claims"].as_array().unwrap();
    assert!(!claims.is_empty());
    for claim in claims {
        assert_eq!(claim["pass"], true);
        assert!(claim["citation"].is_string());
    }
}

#[test]
fn bound_reports_the_expected_value() {
    let out = crk(&[
        "bound", FIXTURE, "--space", "S2xS6", "--bundle", "xi", "--k", "5",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("bound = 2 (exact 2/1)"));
}

#[test]
fn bound_z_out_of_range_exits_one() {
    let out = crk(&["bound", FIXTURE, "--space", "Dold P(2,3)", "--z", "9"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("z out of range"));
}

#[test]
fn bound_without_a_form_is_a_usage_error() {
    let out = crk(&["bound", FIXTURE, "--space", "RP5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn parse_error_exits_two() {
    let out = crk(&["parse", "tests/data/does-not-exist.crk"]);
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.crk");
    std::fs::write(&path, "space \"X\" { dim }").unwrap();
    let out = crk(&["parse", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1:"));
}

#[test]
fn unknown_space_or_bundle_exits_two() {
    let out = crk(&["cup", FIXTURE, "--space", "nowhere"]);
    assert_eq!(out.status.code(), Some(2));
    let out = crk(&["charrank", FIXTURE, "--space", "RP5", "--bundle", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn enumeration_limit_env_var_is_honored() {
    let out = crk_with_env(
        &["ucharrank", FIXTURE, "--space", "RP5", "--constraints", "none"],
        "CRK_LIMIT",
        "4",
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("over the limit"));

    let out = crk_with_env(
        &["ucharrank", FIXTURE, "--space", "RP5", "--constraints", "none"],
        "CRK_LIMIT",
        "not-a-number",
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn explicit_limit_flag_wins() {
    let out = crk_with_env(
        &[
            "ucharrank", FIXTURE, "--space", "RP5", "--constraints", "none", "--limit", "64",
        ],
        "CRK_LIMIT",
        "4",
    );
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("ucharrank (formal) = 5"));
}

#[test]
fn constraint_list_rejects_unknown_flags() {
    let out = crk(&[
        "ucharrank", FIXTURE, "--space", "RP5", "--constraints", "bogus",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn wu_sq1_without_metadata_is_a_violation() {
    let out = crk(&[
        "ucharrank", FIXTURE, "--space", "RP5", "--constraints", "wu-sq1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("sq1"));
}

fn golden(name: &str) -> serde_json::Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn golden_json_outputs() {
    for (args, file) in [
        (
            vec!["cup", FIXTURE, "--space", "RP5", "--json"],
            "cup_rp5.json",
        ),
        (
            vec![
                "charrank", FIXTURE, "--space", "Dold P(2,3)", "--bundle", "eta", "--json",
            ],
            "charrank_dold_eta.json",
        ),
        (
            vec![
                "bound", FIXTURE, "--space", "S2xS6", "--bundle", "xi", "--k", "5", "--json",
            ],
            "bound_s2xs6_xi_k5.json",
        ),
        (
            vec!["ucharrank", FIXTURE, "--space", "S2xS6", "--json"],
            "ucharrank_s2xs6.json",
        ),
    ] {
        let out = crk(&args);
        assert!(out.status.success(), "{args:?}");
        let actual: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(actual, golden(file), "{args:?}");
    }
}

#[test]
fn human_and_json_values_agree() {
    let human = stdout(&crk(&[
        "charrank", FIXTURE, "--space", "RP5", "--bundle", "gamma",
    ]));
    let json_out = stdout(&crk(&[
        "charrank", FIXTURE, "--space", "RP5", "--bundle", "gamma", "--json",
    ]));
    let v: serde_json::Value = serde_json::from_str(&json_out).unwrap();
    assert_eq!(v["results"]["charrank"], 5);
    assert!(human.contains("charrank = 5"));
    assert_eq!(v["results"]["profile"], "w1 = a");
    assert!(human.contains("w1 = a"));

    let human = stdout(&crk(&["cup", FIXTURE, "--space", "S2xS6"]));
    let json_out = stdout(&crk(&["cup", FIXTURE, "--space", "S2xS6", "--json"]));
    let v: serde_json::Value = serde_json::from_str(&json_out).unwrap();
    assert_eq!(v["results"]["cup_length"], 2);
    assert!(human.contains("cup length = 2"));
}

#[test]
fn emitted_catalog_records_feed_back_into_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("moore2.crk");
    let out = crk(&["catalog", "emit", "moore", "2"]);
    assert!(out.status.success());
    std::fs::write(&path, stdout(&out)).unwrap();

    let out = crk(&["ucharrank", path.to_str().unwrap(), "--space", "M(Z2,2)"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("ucharrank (formal) = 3"), "{text}");
    assert!(text.contains("wu-sq1"));

    let out = crk(&["parse", path.to_str().unwrap()]);
    assert!(out.status.success());
}

#[test]
fn catalog_emit_rejects_bad_parameters() {
    let out = crk(&["catalog", "emit", "stunted", "3", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = crk(&["catalog", "emit", "unknown-family", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn catalog_list_names_every_family() {
    let out = crk(&["catalog", "list"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for family in [
        "sphere", "product-spheres", "rp", "cp", "s1-x-cp", "dold", "moore", "stunted", "lens",
    ] {
        assert!(text.contains(family), "missing {family}");
    }
}

#[test]
fn charrank_flags_empty_top_degrees() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gap.crk");
    std::fs::write(
        &path,
        r#"
        space "gap" { dim 3 gen a:4 }
        bundle "t" on "gap" { }
        "#,
    )
    .unwrap();
    let out = crk(&[
        "charrank", path.to_str().unwrap(), "--space", "gap", "--bundle", "t",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("charrank = 3"));
    assert!(text.contains("empty degrees count as covered"), "{text}");
}

#[test]
fn charrank_prints_spherical_lints() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lint.crk");
    std::fs::write(
        &path,
        r#"
        space "demo" { dim 2 gen a:1 rel a^3 meta spherical 2:a2 }
        bundle "p" on "demo" { w1 = a }
        "#,
    )
    .unwrap();
    let out = crk(&[
        "charrank", path.to_str().unwrap(), "--space", "demo", "--bundle", "p",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("charrank = 2"));
    assert!(text.contains("no bundle realizes this profile"), "{text}");
}
