#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::io::Write;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

/// CLI invocations with golden stdout: name, argv (`@file` is a data file),
/// expected exit code.
pub const CASES: &[(&str, &[&str], i32)] = &[
    ("valid_m", &["valid", "--algebra", "@alg.json", "--formula", "@M"], 1),
    ("valid_n", &["valid", "--frame", "@frame.json", "--formula", "box T"], 1),
    ("eval", &["eval", "--algebra", "@alg.json", "--formula", "box u -> u", "--assign", r#"{"u":1}"#], 0),
    ("parse", &["parse", "@Conv"], 0),
    ("bax_count", &["bax", "enum", "--n", "2", "--axioms", "@M", "--count"], 0),
    ("bax_count_5", &["bax", "enum", "--n", "5", "--axioms", "@M", "--count"], 0),
    ("bax_enum", &["bax", "enum", "--n", "2", "--axioms", "@M"], 0),
    ("bax_map", &["bax", "map", "--morphism", "@constant.json", "--family", "[1,3]", "--axioms", "@M"], 0),
    ("dualize_frame", &["dualize", "--frame", "@frame.json"], 0),
    ("dualize_algebra", &["dualize", "--algebra", "@alg.json"], 0),
    ("lax_build", &["lax", "build", "--n", "2", "--axioms", "@N,@C,@M"], 0),
    ("lax_check", &["lax", "check", "--n", "2", "--formula", "@M"], 1),
    ("class_filter", &["class", "check", "--frame", "@full2.json", "--class", "filter"], 0),
    ("class_t", &["class", "check", "--algebra", "@alg.json", "--class", "t"], 1),
    ("correspond_random", &["--seed", "7", "class", "correspond", "--pair", "IV4", "--random", "2000", "--n", "3"], 0),
    ("gen_validate", &["gen", "validate", "--gen", "@gen.json"], 0),
    ("gen_sigma", &["gen", "sigma", "--gen", "@gen_top.json"], 0),
    ("gen_pi", &["gen", "pi", "--gen", "@gen_top.json"], 0),
    ("gen_complement", &["gen", "complement", "--gen", "@gen_top.json"], 0),
    ("gen_truncate", &["gen", "truncate", "--frame", "@full2.json", "--admissible", "[0,3]"], 0),
    ("gen_descriptive", &["gen", "descriptive", "--gen", "@gen_top.json"], 1),
    ("morphism_check", &["morphism", "check", "--morphism", "@constant.json", "--dom", "@full2.json", "--cod", "@full1.json"], 0),
    ("morphism_dualize", &["morphism", "dualize", "--morphism", "@constant.json"], 0),
    ("search_m", &["search", "countermodel", "--formula", "@M"], 1),
    ("search_t_filter", &["search", "countermodel", "--formula", "box v -> v", "--class", "filter"], 1),
    ("search_m_monotone", &["search", "countermodel", "--formula", "@M", "--class", "monotone"], 0),
    ("search_enumerate", &["search", "enumerate", "--n", "2", "--class", "filter", "--canonical"], 0),
    ("search_count_3", &["search", "enumerate", "--n", "3", "--canonical", "--count"], 0),
];

pub fn argv(args: &[&str]) -> Vec<String> {
    args.iter()
        .map(|a| match a.strip_prefix('@') {
            Some(file) if file.ends_with(".json") => data(file).to_string_lossy().into_owned(),
            _ => a.to_string(),
        })
        .collect()
}

pub fn golden(name: &str) -> PathBuf {
    data("golden").join(format!("{name}.json"))
}

/// Runs the built binary; returns (exit code, stdout).
pub fn exe(args: &[String], stdin: &str) -> (i32, Vec<u8>) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_nbhd"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn nbhd");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap_or(-1), out.stdout)
}
