#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

/// Invocations whose JSON output is pinned in tests/golden.
pub const GOLDEN: &[(&str, &[&str])] = &[
    ("triangle_p2", &["triangle", "--p", "2", "--n-max", "4"]),
    ("triangle_p5_3", &["triangle", "--p", "5/3", "--n-max", "3"]),
    ("matrix_3_m1_2", &["matrix", "--base", "3", "--d", "-1", "--n", "2"]),
    ("matrix_neg3_m1_2", &["matrix", "--base", "3", "--d", "-1", "--n", "2", "--negative"]),
    (
        "matrix_digits_m1_0_4",
        &["matrix", "--base", "3", "--digits", "-1,0,4", "--n", "2", "--char-poly"],
    ),
    ("verify_5_m1_3", &["verify", "--base", "5", "--d", "-1", "--n", "3"]),
    ("verify_11_m3_3", &["verify", "--base", "11", "--d", "-3", "--n", "3"]),
    ("verify_neg3_m1_2", &["verify", "--base", "3", "--d", "-1", "--n", "2", "--negative"]),
    ("find_system_p5_3_n4", &["find-system", "--p", "5/3", "--n", "4"]),
    ("find_system_p2_n3", &["find-system", "--p", "2", "--n", "3"]),
    ("find_system_p1_n5", &["find-system", "--p", "1", "--n", "5"]),
    (
        "simulate_3_m1_2",
        &["simulate", "--base", "3", "--d", "-1", "--n", "2", "--steps", "20000", "--seed", "42"],
    ),
    ("uniform_sum_p2_n3", &["uniform-sum", "--p", "2", "--n", "3"]),
    ("uniform_sum_p1_n3", &["uniform-sum", "--p", "1", "--n", "3"]),
    ("uniform_sum_p3_n3", &["uniform-sum", "--p", "3", "--n", "3"]),
];

pub fn carries(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_carries"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"))
}

/// Arguments that must be rejected with exit code 2.
pub const USAGE_ERRORS: &[&[&str]] = &[
    &["triangle", "--p", "abc", "--n-max", "3"],
    &["triangle", "--p", "1/0", "--n-max", "3"],
    &["triangle", "--p", "1/2", "--n-max", "3"],
    &["uniform-sum", "--p", "2.5", "--n", "3"],
    &["simulate", "--base", "3", "--d", "-1", "--n", "2", "--steps", "0"],
    &["find-system", "--p", "2", "--n", "1"],
    &["matrix", "--base", "3", "--digits", "1,2,3", "--n", "2"],
    &["matrix", "--base", "3", "--digits", "0,1,4", "--n", "2"],
    &["matrix", "--base", "3", "--d", "1", "--n", "2"],
    &["verify", "--base", "3", "--d", "-1"],
    &["no-such-command"],
];
