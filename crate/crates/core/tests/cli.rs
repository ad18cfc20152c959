use std::path::Path;
use std::process::{Command, Output};

const NON_FILLING: &str = "CSF 1\ngenus 2\nvertices 1\nsigma\n0 1 2 3\nalpha\n0 2\n1 3\ncurves 2\nx 0\ny 1\n";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fillcurves")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_family_passes_and_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let fam = dir.path().join("family.csf");
    let o =
        run(&["verify-family", "--pair", "g2_i4", "--d", "3", "--L", "4", "--json", path(&json), "--out", path(&fam)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["payload"]["family"]["ell"], 62);
    assert_eq!(
        report["payload"]["family"]["pairwise"]["counts"],
        serde_json::json!([[0, 16, 32], [16, 0, 16], [32, 16, 0]])
    );
    assert!(report["timing"]["seconds"].is_number());

    let o = run(&["intersect", path(&fam), "c1", "c3"]);
    assert_eq!(stdout(&o).trim(), "32");
}

#[test]
fn reports_are_stable_apart_from_timing() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for i in 0..2 {
        let json = dir.path().join(format!("r{i}.json"));
        let o = run(&["certify-free", "--d", "3", "--L", "4", "--json", path(&json)]);
        assert_eq!(o.status.code(), Some(0));
        let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("timing");
        v["command"] = serde_json::Value::Null;
        reports.push(v);
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn verify_family_usage_errors() {
    let o = run(&["verify-family", "--pair", "g2_i4", "--d", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("d must be >= 2"));

    let o = run(&["verify-family", "--pair", "g3_i5"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["verify-family", "--pair", "/nonexistent/pair.csf", "--d", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_family_rejects_non_filling_pair() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("torus.csf");
    std::fs::write(&f, NON_FILLING).unwrap();
    let o = run(&["verify-family", "--pair", path(&f), "--d", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not a filling pair"));
}

#[test]
fn intersect_cases() {
    let o = run(&["intersect", "g2_i4", "a", "b"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "4");

    let o = run(&["intersect", "g2_i4", "b", "b"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0");
    assert!(stderr(&o).contains("same curve"));

    let o = run(&["intersect", "g2_i4", "a", "zz"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown curve"));
}

#[test]
fn twist_writes_canonical_csf() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csf");
    let o = run(&["twist", "g2_i4", "b", "a", "--k", "-1", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(&["intersect", path(&out), "a_b-1", "a"]);
    assert_eq!(stdout(&o).trim(), "16");

    let replaced = dir.path().join("r.csf");
    let o = run(&["twist", "g2_i4", "b", "a", "--k", "2", "--replace", "--out", path(&replaced)]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["intersect", path(&replaced), "a", "b"]);
    assert_eq!(stdout(&o).trim(), "4");

    let o = run(&["twist", path(&out), "a", "a_b-1", "--k", "1", "--name", "z"]);
    let sys = fillcurves::catalog_io::parse_csf(&stdout(&o)).unwrap();
    assert_eq!(sys.names(), ["a", "a_b-1", "b", "z"]);
}

#[test]
fn twist_by_zero_is_canonical_identity() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csf");
    // non-canonical labels and comments
    std::fs::write(
        &input,
        "# scrambled copy of g2_i4\nCSF 1\ngenus 2\nvertices 4\nsigma\n12 13 14 15\n4 5 6 7\n8 9 10 11\n0 1 2 3\nalpha\n12 6\n13 7\n14 0\n15 9\n4 10\n5 3\n8 2\n11 1\ncurves 2\nb 13\na 12\n",
    )
    .unwrap();
    let canon = run(&["twist", path(&input), "a", "b", "--k", "0"]);
    assert_eq!(canon.status.code(), Some(0), "{}", stderr(&canon));
    let again = fillcurves::catalog_io::serialize_csf(&fillcurves::catalog_io::parse_csf(&stdout(&canon)).unwrap());
    assert_eq!(stdout(&canon), again);
    assert_eq!(
        stdout(&canon),
        fillcurves::catalog_io::serialize_csf(
            &fillcurves::catalog_io::parse_csf(&std::fs::read_to_string(&input).unwrap()).unwrap()
        )
    );
}

#[test]
fn twist_along_itself_is_a_usage_error() {
    let o = run(&["twist", "g2_i4", "a", "a", "--k", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn certify_free_cases() {
    let o = run(&["certify-free", "--d", "5", "--L", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("rank 5 of 5 generators: basis"));
    assert!(stdout(&o).contains("relations up to length 5: 0"));

    let o = run(&["certify-free", "--d", "1"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["certify-free", "--d", "2", "--debug-generators"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("rank 1 of 2"));
}

#[test]
fn faces_and_validate() {
    let o = run(&["faces", "g2_i4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("faces 2 "));

    let o = run(&["validate", "g3_i5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("filling true"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csf");
    std::fs::write(&bad, "CSF 1\ngenus 2\nvertices 1\nsigma\n0 1 2\n").unwrap();
    let o = run(&["validate", path(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line"));
}

#[test]
fn missing_subcommand_is_a_usage_error() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["twist", "g2_i4", "b", "a"]).status.code(), Some(2));
}
