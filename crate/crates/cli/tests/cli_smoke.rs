use std::process::Command;

fn polyprog(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_polyprog")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn analyze_json_and_csv() {
    let (code, out, _) = polyprog(&["analyze", "x, x+y, x+2y, x+y^2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], "polyprog-cli.report/1");
    assert_eq!(v["result"]["homogeneous"], false);
    let (code, out, _) = polyprog(&["analyze", "x, x+y, x+2y, x+y^3", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out, "index,term,complexity,stabilized\n0,x,1,true\n1,x + y,1,true\n2,x + 2y,1,true\n3,x + y^3,0,true\n");
}

#[test]
fn bad_input_exits_with_two() {
    let (code, _, err) = polyprog(&["analyze", "x, x+*y"]);
    assert_eq!(code, 2);
    assert!(err.contains("column 6"), "{}", err);
}

#[test]
fn reports_are_reproducible_and_written_to_dir() {
    let args = ["count", "x, x+y, x+2y", "--N", "31", "--seed", "5"];
    assert_eq!(polyprog(&args).1, polyprog(&args).1);
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, _, _) = polyprog(&["relations", "x, x+y, x+2y", "--out", out]);
    assert_eq!(code, 0);
    assert!(dir.path().join("relations.json").exists());
    assert!(dir.path().join("relations_relations.csv").exists());
}
