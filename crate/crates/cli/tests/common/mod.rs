#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

pub struct Run {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

impl Run {
    pub fn text(&self) -> String {
        String::from_utf8(self.stdout.clone()).expect("utf-8 output")
    }

    pub fn json(&self) -> serde_json::Value {
        serde_json::from_slice(&self.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", self.text()))
    }
}

pub fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

pub fn gerbe_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gerbe"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("run gerbe");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: out.stdout,
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

pub fn gerbe(args: &[&str]) -> Run {
    gerbe_env(args, &[])
}

/// An integer written either as a JSON number or as a decimal string.
pub fn int(v: &serde_json::Value) -> i64 {
    match v {
        serde_json::Value::Number(n) => n.as_i64().expect("small integer"),
        serde_json::Value::String(s) => s.parse().expect("decimal integer"),
        other => panic!("expected an integer, found {other}"),
    }
}

pub fn int_vec(v: &serde_json::Value) -> Vec<i64> {
    v.as_array().expect("array").iter().map(int).collect()
}

pub fn int_matrix(v: &serde_json::Value) -> Vec<Vec<i64>> {
    v.as_array().expect("matrix rows").iter().map(int_vec).collect()
}
