mod common;

use oalg::cli::run_with;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("oalg").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("oalg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn documented_examples() {
    let (code, out, _) = cli(&["varieties", "algebra.gap"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("gap: ✗ ✗ ✓ ✓ ✓\n"));

    let (code, out, _) = cli(&["eval", "lang.gap", "(omega a)"]);
    assert_eq!((code, out.as_str()), (0, "coi\n"));

    let (code, out, _) = cli(&["member", "expr.fNob", "aa"]);
    assert_eq!((code, out.as_str()), (0, "true\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["validate", "algebra.min"]).0, 0);
    assert_eq!(cli(&["member", "expr.fNob", "aba"]).0, 1);
    assert_eq!(cli(&["synth", "lang.pd", "--class", "scatter"]).0, 1);
    assert_eq!(
        cli(&["witness", "lang.gap", "(omega a)", "--below", "cci"]).0,
        1
    );
    assert_eq!(
        cli(&[
            "witness",
            "lang.gap",
            "(cat (omega a) (omegastar a))",
            "--below",
            "cci"
        ])
        .0,
        0
    );

    let (code, _, err) = cli(&["validate", "algebra.nope"]);
    assert_eq!(code, 2);
    assert!(err.contains("algebra.nope"));
    assert_eq!(cli(&["eval", "lang.gap", "(omega"]).0, 2);
    assert_eq!(cli(&["eval", "lang.gap", "c"]).0, 2);
    assert_eq!(cli(&["synth", "lang.min", "--class", "regular"]).0, 2);
    assert_eq!(cli(&["frobnicate"]).0, 2);
    assert_eq!(cli(&["witness", "lang.gap", "a"]).0, 2);
    assert_eq!(cli(&["--help"]).0, 0);
}

#[test]
fn broken_algebra_file_reports_violations() {
    let (_, json, _) = cli(&["export-fixture", "algebra.min"]);
    let mut doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    // Make ci·ci = oi.
    doc["product"][1][1] = "oi".into();
    let path = temp_file("broken.json", &doc.to_string());
    let (code, out, _) = cli(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("violations"));
    let (code, out, _) = cli(&["validate", path.to_str().unwrap(), "--json"]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["valid"], false);
}

#[test]
fn exported_fixtures_load_back() {
    let (code, json, _) = cli(&["export-fixture", "algebra.gap"]);
    assert_eq!(code, 0);
    let alg = temp_file("gap.json", &json);
    let (code, out, _) = cli(&["eggbox", alg.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out, cli(&["eggbox", "algebra.gap"]).1);

    let (_, json, _) = cli(&["export-fixture", "lang.even"]);
    let lang = temp_file("even.json", &json);
    let from_file = cli(&["classify", lang.to_str().unwrap()]);
    assert_eq!(from_file, cli(&["classify", "lang.even"]));

    // A language document may name its algebra by fixture id or by path.
    let doc =
        r#"{"algebra": "gap.json", "alphabet": ["x"], "h": {"x": "cci"}, "accepting": ["0"]}"#;
    let by_path = temp_file("by_path.json", doc);
    let (code, out, _) = cli(&["eval", by_path.to_str().unwrap(), "(shuffle x)"]);
    assert_eq!((code, out.as_str()), (0, "0\n"));
    let by_id = temp_file("by_id.json", &doc.replace("gap.json", "algebra.gap"));
    assert_eq!(
        cli(&["eval", by_id.to_str().unwrap(), "(shuffle x)"]).1,
        "0\n"
    );
}

#[test]
fn json_outputs_parse() {
    for args in [
        vec!["validate", "algebra.pd", "--json"],
        vec!["eggbox", "algebra.gap", "--json"],
        vec!["varieties", "algebra.even", "--json"],
        vec!["classify", "lang.min", "--json"],
        vec!["exprclass", "expr.fGap", "--json"],
        vec!["quotient", "lang.gap", "--json"],
        vec!["export-fixture", "pair.noB"],
        vec!["export-fixture", "expr.scatterA"],
    ] {
        let (code, out, _) = cli(&args);
        assert_eq!(code, 0, "{args:?}");
        serde_json::from_str::<serde_json::Value>(&out).unwrap_or_else(|e| panic!("{args:?}: {e}"));
    }
    let (_, out, _) = cli(&["eggbox", "algebra.gap", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(
        v[1]["cells"],
        serde_json::json!([[["cci"], ["coi"]], [["oci"], ["ooi"]]])
    );
}

#[test]
fn output_is_byte_stable() {
    for args in [
        vec!["green", "algebra.gap"],
        vec!["idempotents", "algebra.pd"],
        vec!["synth", "lang.even", "--class", "marked"],
        vec!["quotient", "lang.min"],
    ] {
        assert_eq!(cli(&args), cli(&args), "{args:?}");
    }
}

#[test]
fn synthesized_expression_reads_back() {
    let (code, out, _) = cli(&["synth", "lang.even", "--class", "marked", "--expr-only"]);
    assert_eq!(code, 0);
    let path = temp_file("even_expr.txt", &out);
    let lang = oalg::corpus::registry::even_a();
    for w in oalg::term::enumerate_finite_words(&lang.alphabet, 5) {
        let (code, _, _) = cli(&["member", path.to_str().unwrap(), &w]);
        assert_eq!(code == 0, lang.accepts_word(&w).unwrap(), "{w:?}");
    }
    let (code, out, _) = cli(&["exprclass", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("marked            yes"));
}

#[test]
fn synth_prints_expression_then_trace() {
    let (code, out, _) = cli(&["synth", "lang.min", "--class", "marked_star_free"]);
    assert_eq!(code, 0);
    let start = out.find("\n{").expect("trace follows the expression");
    let v: serde_json::Value = serde_json::from_str(&out[start + 1..]).unwrap();
    assert_eq!(v["class"], "marked_star_free");
    assert!(v["trace"].as_array().is_some_and(|t| !t.is_empty()));
    assert!(v["validation"]
        .as_str()
        .unwrap()
        .contains("finite words only"));
}
