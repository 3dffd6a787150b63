use mahler::cli::run;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("mahler").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = call(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn expand_prints_the_requested_coefficients() {
    let v = json(&["expand", "--eq", "thue_morse", "-N", "64"]);
    let coeffs: Vec<&str> = v.as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert_eq!(coeffs.len(), 64);
    assert_eq!(&coeffs[..8], ["0", "1", "1", "0", "1", "0", "0", "1"]);
}

#[test]
fn equation_files_are_accepted() {
    let path = std::env::temp_dir().join(format!("mahler-cli-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"name": "geom", "q": 2, "coeffs": ["1", "-1"], "rhs": "z", "seeds": ["0"]}"#).unwrap();
    let v = json(&["expand", "--eq", path.to_str().unwrap(), "-N", "5"]);
    assert_eq!(v, serde_json::json!(["0", "1", "1", "0", "1"]));
    std::fs::remove_file(path).unwrap();
}

#[test]
fn verify_reports_full_order() {
    let v = json(&["verify", "--eq", "cantor", "-N", "40"]);
    assert_eq!(v["residual_vanishes_to_order"], true);
}

#[test]
fn system_build_has_companion_shape() {
    let v = json(&["system", "build", "--eq", "thue_morse"]);
    assert_eq!(v["size"], 2);
    assert_eq!(v["provenance"], "companion");
    let v = json(&["system", "sum", "--eq", "powers2", "thue_morse"]);
    assert_eq!(v["size"], 4);
    let v = json(&["system", "iterate", "--eq", "powers2", "--ell", "3"]);
    assert_eq!(v["q"], 8);
}

#[test]
fn regularity_exit_codes() {
    let (code, out, _) = call(&["regular", "--eq", "thue_morse", "--alpha", "1/2"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"regular\": true"));
    let (code, out, _) = call(&["regular", "--eq", "singular_demo", "--alpha", "1/2"]);
    assert_eq!(code, 1);
    assert!(out.contains("\"witness\": \"1/2\""));
    let (code, _, _) = call(&["regular", "--eq", "singular_demo", "--alpha", "1/2", "--search", "--lmax", "3"]);
    assert!(code == 0 || code == 4, "exit {code}");
}

#[test]
fn invalid_input_exits_with_two() {
    assert_eq!(call(&["expand", "--eq", "no_such_equation"]).0, 2);
    assert_eq!(call(&["eval", "--eq", "powers2", "--alpha", "3/2"]).0, 2);
    assert_eq!(call(&["eval", "--eq", "powers2", "--alpha", "1/2", "--precision", "8"]).0, 2);
    assert_eq!(call(&["lacunary", "--beta-rat", "1/2"]).0, 2);
    assert_eq!(call(&["frobnicate"]).0, 2);
}

#[test]
fn eval_routes_agree() {
    let a = json(&["eval", "--eq", "powers2", "--alpha", "1/2", "--unit-bound"]);
    let b = json(&["eval", "--eq", "powers2", "--alpha", "1/2", "--unit-bound", "--route", "system", "--k", "3"]);
    assert_eq!(a["certified"], true);
    assert_eq!(b["certified"], true);
    let lo = |v: &Value, k: &str| v[k].as_str().unwrap().parse::<f64>().unwrap();
    assert!(lo(&a, "value_lo") <= lo(&b, "value_hi") && lo(&b, "value_lo") <= lo(&a, "value_hi"));
}

#[test]
fn polyscan_flags_rational_decoys() {
    let (code, out, _) = call(&["polyscan", "--xi", "1/2", "--d", "1", "--hmax", "4"]);
    assert_eq!(code, 5);
    assert!(out.starts_with("# config: "));
    assert!(out.contains("# candidate_relations: \"-1 2\""));
    let (code, _, _) = call(&["polyscan", "--xi", "liouville_constant", "--d", "1", "--hmax", "8"]);
    assert_eq!(code, 0);
}

#[test]
fn cf_of_a_rational_is_complete() {
    let v = json(&["cf", "--xi", "10/7"]);
    assert_eq!(v["quotients"], serde_json::json!(["1", "2", "3"]));
    assert_eq!(v["stop"], "complete");
}

#[test]
fn lacunary_growth_table() {
    let (code, out, err) = call(&["lacunary", "--beta", "thue_morse", "--alpha", "1/2", "--unit-bound", "--tower", "2", "5", "--terms", "2"]);
    assert_eq!(code, 0, "{err}");
    let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows, ["n,ratio,holds", "0,2,true", "1,32,true", "2,33554432,true"]);
    assert!(out.contains("# xi_certified: true"));
}

#[test]
fn experiment_writes_plot_data() {
    let dir = std::env::temp_dir().join(format!("mahler-cli-exp-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("elim.csv");
    let (code, _, err) = call(&["--out", csv.to_str().unwrap(), "experiment", "elimsuite", "--count", "10"]);
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 11);
    assert!(text.contains("# violated: 0"));
    let plot: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("elim.plot.json")).unwrap()).unwrap();
    let finite = plot["series"][0]["x"].as_array().unwrap().len();
    assert!(finite > 0 && finite <= 10);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn json_format_wraps_rows() {
    let v = json(&["--format", "json", "multiplicity", "--eq", "powers2", "--mmax", "2", "--nmax", "2", "--trials", "2"]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    assert_eq!(v["config"]["seed"], 0);
}

#[test]
fn siegel_with_iteration() {
    let v = json(&["siegel", "--eq", "powers2", "-N", "2", "--iterate", "2"]);
    assert_eq!(v["iterate"]["identity_holds"], true);
    assert!(v["kernel_dim"].as_u64().unwrap() >= 1);
}
