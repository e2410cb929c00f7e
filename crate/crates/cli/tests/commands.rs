use std::process::Command;

fn eichler(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_eichler")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn genus_example() {
    for v in ["lambda", "lambda-prime"] {
        let (code, out, _) = eichler(&["genus", "--p", "101", "--c", "3", "--q", "11", "--variant", v]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().filter(|l| l.starts_with("  (")).count(), 5, "{out}");
        assert!(out.contains("eta = 1"), "{out}");
    }
}

#[test]
fn bad_params_are_usage_errors() {
    let (code, _, err) = eichler(&["genus", "--p", "11", "--c", "7"]);
    assert_eq!(code, 2);
    assert!(err.contains("3p/16"), "{err}");
    assert_eq!(eichler(&["verify-paper", "--p", "11", "--c", "7"]).0, 2);
    assert_eq!(eichler(&["eichler", "--p", "101", "--c", "3", "--q", "13", "--r", "1"]).0, 2);
    assert_eq!(eichler(&["no-such-command"]).0, 2);
}

#[test]
fn eichler_example() {
    let (code, out, _) = eichler(&["eichler", "--p", "101", "--c", "3", "--q", "11", "--r", "7"]);
    assert_eq!(code, 0);
    assert!(out.contains("disc 91809"), "{out}");
    assert!(out.contains("form (11, 6, 111)"), "{out}");
    assert!(out.contains("minima (11, 111)"), "{out}");
    let (code, out, _) = eichler(&["eichler", "--p", "101", "--c", "3", "--prime-variant", "--q", "59", "--r", "13"]);
    assert_eq!(code, 0);
    assert!(out.contains("form (2, -1, 38)"), "{out}");
}

#[test]
fn correspond_example() {
    let (code, out, _) = eichler(&["correspond", "--p", "101", "--c", "3"]);
    assert_eq!(code, 0);
    let rows: Vec<Vec<&str>> = out.lines().map(|l| l.split("  ").map(str::trim).filter(|s| !s.is_empty()).collect()).collect();
    for want in [
        ["O'_3(1619,1215)", "(3, 3, 26)", "66"],
        ["O'_3(59,13)", "(2, ±1, 38)", "21"],
        ["O'_3(11,7)", "(8, ±7, 11)", "37+10*a, 37+91*a"],
        ["O_3(1619,1215)", "(3, 0, 404)", "0"],
        ["O_3(11,7)", "(11, ±6, 111)", "57"],
        ["O_3(59,13)", "(32, ±12, 39)", "37+10*a, 37+91*a"],
    ] {
        assert!(rows.iter().any(|r| r == &want), "{want:?} missing from\n{out}");
    }
}

#[test]
fn graph_and_gz() {
    let (code, out, _) = eichler(&["graph", "--p", "101", "--c", "3", "--ell", "2", "--output", "dot"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.contains("[label=")).count(), 20);
    assert!(out.contains("E1p"));
    let (code, out, _) = eichler(&["graph", "--output", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 20);
    let (code, out, _) = eichler(&["gz", "--d1", "-32", "--d2", "-44", "--p", "101"]);
    assert_eq!((code, out.trim()), (0, "2"));
    assert_eq!(eichler(&["gz", "--d1", "-32", "--d2", "-32", "--p", "101"]).0, 2);
}

#[test]
fn hilbert_command() {
    let (code, out, _) = eichler(&["hilbert", "--d", "-303", "--p", "101"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "H_-303 mod 101 = (X + 35)^2 (X + 80)^4 (X^2 + 27*X + 54)^2");
    let (code, out, _) = eichler(&["hilbert", "--d", "-15"]);
    assert_eq!(code, 0);
    assert!(out.contains("191025"), "{out}");
}

#[test]
fn json_round_trips() {
    let (_, out, _) = eichler(&["correspond", "--output", "json"]);
    let tables: Vec<(eichler_core::PrimeParams, Vec<eichler_core::correspond::CorrespondenceRow>)> =
        serde_json::from_str(&out).unwrap();
    assert_eq!(tables.len(), 2);
    assert_eq!(serde_json::to_string_pretty(&tables).unwrap() + "\n", out);
    let (_, out, _) = eichler(&["hilbert", "--d", "-23", "--output", "json"]);
    let h: eichler_core::classpoly::ClassPolynomial = serde_json::from_str(&out).unwrap();
    assert_eq!(h.degree(), 3);
}

#[test]
fn phi3_override() {
    let dir = std::env::temp_dir().join(format!("eichler-phi3-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/phi3.txt")).unwrap();
    let path = dir.join("phi3.txt");
    std::fs::write(&path, &good).unwrap();
    assert_eq!(eichler(&["graph", "--phi3", path.to_str().unwrap()]).0, 0);
    std::fs::write(&path, good.replace("2232", "2233")).unwrap();
    assert_eq!(eichler(&["graph", "--phi3", path.to_str().unwrap()]).0, 2);
}
