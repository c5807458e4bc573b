#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

pub fn serrin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_serrin"))
        .args(args)
        .output()
        .expect("failed to launch serrin")
}

pub fn json(path: &Path) -> serde_json::Value {
    let text = std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    serde_json::from_str(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Every file of `a` exists in `b` with identical bytes.
pub fn same_files(a: &Path, b: &Path) -> bool {
    let mut names: Vec<_> = std::fs::read_dir(a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    !names.is_empty()
        && names
            .iter()
            .all(|n| std::fs::read(a.join(n)).ok() == std::fs::read(b.join(n)).ok())
}
