use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn cfree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfree")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = cfree(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap().trim_end().to_string()
}

fn code(args: &[&str]) -> i32 {
    cfree(args).status.code().expect("exit code")
}

#[test]
fn commutator_moments() {
    let spec = data("semicircle_bernoulli.json");
    let args = ["moments", "--poly", "i*(x*y-y*x)", "--spec", &spec, "--state", "psi", "--order", "6"];
    assert_eq!(stdout(&args), r#"{"moments":["0","2","0","8","0","40"]}"#);
    assert_eq!(stdout(&args), stdout(&args));
    let csv = stdout(&["moments", "--poly", "x+y", "--spec", &spec, "--order", "2", "--format", "csv"]);
    assert_eq!(csv, "n,value\n1,0\n2,2");
}

#[test]
fn denoise_commutator() {
    let spec = data("semicircle_bernoulli.json");
    let out = stdout(&[
        "denoise",
        "--poly",
        "i*(x*y-y*x)",
        "--target",
        "x^2",
        "--degree",
        "2",
        "--spec",
        &spec,
        "--check",
        "8",
    ]);
    assert_eq!(out, r#"{"coefficients":["1/2","0","1/4"],"rank":3,"residuals":["0","0","0"],"verified":true}"#);
    let out = stdout(&["denoise", "--poly", "i*(x*y-y*x)", "--target", "x^4", "--degree", "4", "--spec", &spec]);
    assert!(out.starts_with(r#"{"coefficients":["3/4","0","3/8","0","1/16"]"#), "{out}");
    let out = stdout(&["denoise", "--poly", "i*(x*y-y*x)", "--weight", "x^2", "--order", "2", "--spec", &spec]);
    assert!(out.contains(r#""psi_moments":["0","2"]"#), "{out}");
}

#[test]
fn partitions_and_cumulants() {
    let out = stdout(&["partitions", "--enumerate", "nc", "--n", "4"]);
    assert!(out.starts_with(r#"{"count":14,"#), "{out}");
    assert!(stdout(&["partitions", "--enumerate", "interval", "--n", "3"]).starts_with(r#"{"count":4,"#));
    let spec = data("semicircle_bernoulli.json");
    let out = stdout(&["cumulants", "--kind", "free", "--poly", "x+y", "--spec", &spec, "--order", "4"]);
    assert_eq!(out, r#"{"cumulants":["0","2","0","-1"]}"#);
    let out = stdout(&["cumulants", "--kind", "boolean", "--spec", &spec, "--order", "4"]);
    assert_eq!(out, r#"{"cumulants":["0","1","0","1"]}"#);
}

#[test]
fn conditional_expectations() {
    let spec = data("semicircle_bernoulli.json");
    assert_eq!(stdout(&["condexp", "--word", "XYYX", "--spec", &spec]), r#"{"value":"x^2","provenance":"recursive"}"#);
    let out = stdout(&["condexp", "--resolvent", "--poly", "x*y+y*x", "--spec", &spec, "--order", "2"]);
    assert_eq!(out, r#"{"powers":["1","0","1 + x^2"]}"#);
    let two = data("two_point.json");
    let out = stdout(&["condexp", "--word", "XY", "--spec", &two, "--state", "phi"]);
    assert!(out.contains("provenance"), "{out}");
}

#[test]
fn sigma_and_verify() {
    let out = stdout(&["sigma", "--spec", &data("two_point.json"), "--order", "5"]);
    assert!(out.contains(r#""residual":["0","0","0","0","0"]"#), "{out}");
    let out = stdout(&["verify", "vnrp"]);
    assert!(out.starts_with(r#"{"passed":true"#), "{out}");
    assert!(stdout(&["verify", "sigma"]).starts_with(r#"{"passed":true"#));
}

#[test]
fn exit_codes() {
    let spec = data("semicircle_bernoulli.json");
    assert_eq!(code(&["verify", "nope"]), 2);
    assert_eq!(code(&["moments", "--bogus"]), 2);
    assert_eq!(code(&["moments", "--poly", "x+", "--spec", &spec, "--order", "2"]), 2);
    assert_eq!(code(&["moments", "--poly", "x", "--spec", "/nonexistent.json", "--order", "2"]), 2);
    assert_eq!(code(&["condexp", "--spec", &spec]), 2);
    assert_eq!(code(&["moments", "--poly", "1+x", "--spec", &spec, "--order", "2"]), 3);
    assert_eq!(code(&["sigma", "--spec", &spec, "--order", "4"]), 3);
    assert_eq!(code(&["denoise", "--poly", "x*y", "--weight", "x", "--spec", &spec]), 3);
}
