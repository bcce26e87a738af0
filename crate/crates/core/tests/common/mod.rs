#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

pub fn fixture(name: &str) -> String {
    dir("fixtures").join(name).to_string_lossy().into_owned()
}

pub fn dir(sub: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join(sub)
}

pub fn run_bin(args: &[String]) -> (i32, Vec<u8>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_mbc"))
        .args(args)
        .output()
        .expect("mbc runs");
    (
        out.status.code().unwrap_or(-1),
        out.stdout,
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

pub struct GoldenCase {
    pub golden: &'static str,
    pub args: Vec<String>,
    pub exit: i32,
}

fn case(golden: &'static str, exit: i32, args: &[&str]) -> GoldenCase {
    let args = args
        .iter()
        .map(|a| match a.strip_prefix('@') {
            Some(f) => fixture(f),
            None => a.to_string(),
        })
        .collect();
    GoldenCase { golden, args, exit }
}

/// Every golden CLI invocation; `@name` is a fixture path.
pub fn golden_cases() -> Vec<GoldenCase> {
    vec![
        case("close_five.json", 0, &["close", "-i", "@five.json"]),
        case("faces_five.json", 0, &["faces", "-i", "@five.json"]),
        case("faces_five_codim2.json", 0, &["faces", "-i", "@five.json", "--codim", "2"]),
        case("poset_five.dot", 0, &["faces", "-i", "@five.json", "--format", "dot"]),
        case("incidence_five.dot", 0, &["faces", "-i", "@five.json", "--format", "dot", "--graph", "incidence"]),
        case("check_delta12.json", 0, &["check-map", "-i", "@ws.json", "--map", "delta12", "--quotient"]),
        case("check_shear.json", 1, &["check-map", "-i", "@ws.json", "--map", "shear", "--quotient"]),
        case("lift_delta12.json", 0, &["lift", "-i", "@ws.json", "--map", "delta12", "--require-b-fibration"]),
        case("lift_diag_in.json", 1, &["lift", "-i", "@ws.json", "--map", "diag_in", "--require-b-fibration"]),
        case("charts_run_a.json", 0, &["charts", "run", "-i", "@two_lines_a.json"]),
        case("compare_ab.json", 1, &["charts", "compare", "@two_lines_a.json", "@two_lines_b.json"]),
        case("compare_bc.json", 0, &["charts", "compare", "@two_lines_b.json", "@two_lines_c.json"]),
        case("scatprod3.json", 0, &["scatprod", "--n", "3", "--d", "1"]),
        case("scatprod3.dot", 0, &["scatprod", "--n", "3", "--format", "dot"]),
        case("verify3.json", 0, &["scatprod", "--n", "3", "--verify"]),
    ]
}
pub mod gen;
