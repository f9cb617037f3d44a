use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn volprod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_volprod")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

/// Value of a `key  value` line.
fn field(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| {
            let mut it = l.split_whitespace();
            (it.next() == Some(key)).then(|| it.collect::<Vec<_>>().join(" "))
        })
        .unwrap_or_else(|| panic!("no `{key}` in\n{text}"))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn product_of_named_bodies() {
    for (name, product, floor) in [
        ("triangle.json", "1.5", "1.5"),
        ("tetrahedron.json", "0.666666666667", "0.666666666667"),
        ("cube.json", "1.333333333333", "0.666666666667"),
        ("square.json", "2", "1.5"),
        ("octahedron.json", "1.333333333333", "0.666666666667"),
    ] {
        let o = volprod(&["product", path_str(&data(name))]);
        assert_eq!(code(&o), 0, "{name}");
        let text = stdout(&o);
        assert_eq!(field(&text, "product"), product, "{name}");
        assert_eq!(field(&text, "floor"), floor, "{name}");
    }
    let text = stdout(&volprod(&["product", path_str(&data("triangle.json"))]));
    assert_eq!(field(&text, "volume"), "0.5");
    assert_eq!(field(&text, "difference_volume"), "3");
    assert_eq!(field(&text, "polar_volume"), "3");
}

#[test]
fn product_json_echoes_manifest() {
    let f = data("cube.json");
    let o = volprod(&["product", path_str(&f), "--json", "--tol-geom", "1e-10"]);
    assert_eq!(code(&o), 0);
    let v = json_out(&o);
    let m = &v["manifest"];
    assert_eq!(m["command"], "product");
    assert_eq!(m["inputs"][0], path_str(&f));
    assert_eq!(m["tol_geom"], 1e-10);
    assert_eq!(m["tol_cert"], 1e-7);
    assert_eq!(m["version"], env!("CARGO_PKG_VERSION"));
    assert!((v["results"][0]["product"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-12);
}

#[test]
fn product_csv_batch() {
    let o = volprod(&["product", "--csv", path_str(&data("triangle.json")), path_str(&data("tetrahedron.json"))]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "file,dim,volume,product,floor,margin,valid");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].ends_with(",2,0.5,1.5,1.5,0,true"), "{}", lines[1]);
    assert!(lines[2].contains(",3,2.666666666667,0.666666666667,"), "{}", lines[2]);
}

#[test]
fn product_exit_codes() {
    assert_eq!(code(&volprod(&["product", path_str(&data("malformed.json"))])), 2);
    assert_eq!(code(&volprod(&["product", path_str(&data("does_not_exist.json"))])), 2);
    let o = volprod(&["product", path_str(&data("collinear.json"))]);
    assert_eq!(code(&o), 3);
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("degenerate"));
    assert_eq!(code(&volprod(&["product"])), 2);
}

#[test]
fn certify_triangle_plane() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cert.json");
    let o = volprod(&["certify", path_str(&data("triangle.json")), "--mode", "2d", "--out", path_str(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    for s in ["S1", "S2", "S3"] {
        assert_eq!(field(&text, s), "0.5");
    }
    assert_eq!(field(&text, "valid"), "true");
    let doc: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["manifest"]["command"], "certify");
    assert_eq!(doc["manifest"]["output"], path_str(&out));
    assert_eq!(doc["certificate"]["valid"], true);
    assert!((doc["certificate"]["certified_bound"].as_f64().unwrap() - 1.5).abs() < 1e-12);
}

#[test]
fn certify_default_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let body = dir.path().join("tri.json");
    fs::copy(data("triangle.json"), &body).unwrap();
    assert_eq!(code(&volprod(&["certify", path_str(&body), "--mode", "2d"])), 0);
    assert!(dir.path().join("tri.cert.json").exists());
}

#[test]
fn certify_tetrahedron_space() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cert.json");
    let o = volprod(&["certify", path_str(&data("tetrahedron.json")), "--mode", "3d", "--out", path_str(&out)]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(field(&text, "case").starts_with("Case"));
    assert_eq!(field(&text, "product"), "0.666666666667");
    let doc: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let checks = doc["certificate"]["inequalities"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        for key in ["name", "lhs", "rhs", "residual", "pass"] {
            assert!(c.get(key).is_some(), "{key} missing in {c}");
        }
    }
}

#[test]
fn certify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.json");
    let o = volprod(&["certify", path_str(&data("corner_simplex.json")), "--mode", "3d", "--out", path_str(&out)]);
    assert_eq!(code(&o), 4);
    assert!(!out.exists());
    // Zero tolerance turns rounding-level equality residuals into failures;
    // the certificate is still written.
    let o = volprod(&[
        "certify",
        path_str(&data("pentagon.json")),
        "--mode",
        "2d",
        "--tol-cert",
        "0",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(code(&o), 5);
    let doc: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["certificate"]["valid"], false);
    assert_eq!(code(&volprod(&["certify", path_str(&data("triangle.json")), "--mode", "4d"])), 2);
    assert_eq!(code(&volprod(&["certify", path_str(&data("triangle.json")), "--mode", "3d"])), 2);
}

#[test]
fn search_triangle_class_reaches_floor() {
    let o = volprod(&["search", "--class", "polygon:3", "--restarts", "20", "--iters", "5000", "--seed", "7"]);
    assert_eq!(code(&o), 0);
    let best: f64 = field(&stdout(&o), "best_product").parse().unwrap();
    assert!((best - 1.5).abs() <= 1e-6, "{best}");
}

#[test]
fn search_symmetric_class_reaches_floor() {
    let o = volprod(&["search", "--class", "tetra", "--restarts", "20", "--iters", "5000", "--seed", "7"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(field(&text, "class"), "tetra:1");
    let best: f64 = field(&text, "best_product").parse().unwrap();
    assert!((2.0 / 3.0 - 1e-6..=0.68).contains(&best), "{best}");
}

#[test]
fn search_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let run = |threads: &str| {
        let o = volprod(&[
            "search",
            "--class",
            "polygon:8",
            "--restarts",
            "4",
            "--iters",
            "500",
            "--seed",
            "7",
            "--threads",
            threads,
            "--out",
            path_str(&out),
        ]);
        assert_eq!(code(&o), 0);
        fs::read(&out).unwrap()
    };
    let first = run("1");
    assert_eq!(first, run("1"));
    assert_eq!(first, run("3"));
}

#[test]
fn search_rejects_bad_flags() {
    let base = ["search", "--restarts", "2", "--iters", "10"];
    let with = |extra: &[&str]| code(&volprod(&[&base[..], extra].concat()));
    assert_eq!(with(&["--class", "polygon:8"]), 2, "seed is required");
    assert_eq!(with(&["--class", "hexagon", "--seed", "1"]), 2);
    assert_eq!(with(&["--class", "polygon:2", "--seed", "1"]), 2);
    assert_eq!(with(&["--class", "tetra:0", "--seed", "1"]), 2);
    assert_eq!(
        code(&volprod(&["search", "--class", "polygon:4", "--restarts", "0", "--iters", "5", "--seed", "1"])),
        2
    );
}

#[test]
fn check_named_bodies_pass() {
    for name in ["tetrahedron.json", "cube.json", "octahedron.json", "triangle.json", "orbit12.json"] {
        let o = volprod(&["check", path_str(&data(name)), "--seed", "3", "--json"]);
        assert_eq!(code(&o), 0, "{name}: {}", stdout(&o));
        let v = json_out(&o);
        assert_eq!(v["passed"], true);
        assert_eq!(v["manifest"]["seed"], 3);
    }
    let v = json_out(&volprod(&["check", path_str(&data("octahedron.json")), "--seed", "3", "--json"]));
    let rs = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "rs_ratio").unwrap();
    assert!((rs["lhs"].as_f64().unwrap() - 8.0).abs() < 1e-9);
}

#[test]
fn check_failure_exit_code() {
    // The triangle is an equality case of the projection bound, so a zero
    // tolerance exposes rounding.
    let o = volprod(&["check", path_str(&data("triangle.json")), "--seed", "1", "--tol-cert", "0"]);
    assert_eq!(code(&o), 6);
    assert!(String::from_utf8_lossy(&o.stderr).contains("zang_min_margin"));
    assert_eq!(code(&volprod(&["check", path_str(&data("triangle.json"))])), 2, "seed is required");
}

#[test]
fn classify_bodies() {
    for (name, class) in
        [("tetrahedron.json", "Tetrahedron"), ("octahedron.json", "Octahedron"), ("orbit12.json", "Other")]
    {
        let o = volprod(&["classify", path_str(&data(name))]);
        assert_eq!(code(&o), 0);
        assert_eq!(field(&stdout(&o), "class"), class);
    }
    let v = json_out(&volprod(&["classify", path_str(&data("tetrahedron.json")), "--json"]));
    let sizes: Vec<usize> = v["orbits"].as_array().unwrap().iter().map(|o| o.as_array().unwrap().len()).collect();
    assert_eq!(sizes, vec![1, 3]);
    assert_eq!(code(&volprod(&["classify", path_str(&data("corner_simplex.json"))])), 4);
}

// ---------------------------------------------------------------------------
// Golden schemas: key structure and value types of every JSON document.

fn schema(v: &Value) -> Value {
    match v {
        Value::Null => "null".into(),
        Value::Bool(_) => "boolean".into(),
        Value::Number(_) => "number".into(),
        Value::String(_) => "string".into(),
        Value::Array(a) => Value::Array(a.first().map(schema).into_iter().collect()),
        Value::Object(m) => Value::Object(m.iter().map(|(k, v)| (k.clone(), schema(v))).collect()),
    }
}

fn assert_golden(name: &str, doc: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.schema.json"));
    let actual = serde_json::to_string_pretty(&schema(doc)).unwrap() + "\n";
    if std::env::var_os("VOLPROD_BLESS").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, &actual).unwrap();
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    assert_eq!(actual, expected, "schema of `{name}` changed");
}

#[test]
fn json_schemas_are_stable() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| path_str(&data(n)).to_string();
    let out = dir.path().join("out.json");
    let o = path_str(&out).to_string();

    assert_golden("product", &json_out(&volprod(&["product", &p("triangle.json"), "--json"])));
    assert_golden(
        "certify_2d",
        &json_out(&volprod(&["certify", &p("triangle.json"), "--mode", "2d", "--out", &o, "--json"])),
    );
    assert_golden(
        "certify_3d",
        &json_out(&volprod(&["certify", &p("tetrahedron.json"), "--mode", "3d", "--out", &o, "--json"])),
    );
    let search = json_out(&volprod(&[
        "search",
        "--class",
        "polygon:5",
        "--restarts",
        "2",
        "--iters",
        "50",
        "--seed",
        "1",
        "--out",
        &o,
        "--json",
    ]));
    let written: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(search, written);
    assert_golden("search", &search);
    assert_golden("check_3d", &json_out(&volprod(&["check", &p("cube.json"), "--seed", "1", "--json"])));
    assert_golden("check_2d", &json_out(&volprod(&["check", &p("square.json"), "--seed", "1", "--json"])));
    assert_golden("classify", &json_out(&volprod(&["classify", &p("octahedron.json"), "--json"])));
}
