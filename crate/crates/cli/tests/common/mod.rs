//! Golden case files: `arg:` lines, a `code:` line, then `--- stdout` and
//! `--- stderr` sections holding the exact expected streams.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Case {
    pub path: PathBuf,
    pub args: Vec<String>,
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn load(path: &Path) -> Case {
    let text = std::fs::read_to_string(path).unwrap();
    let (head, rest) = text.split_once("--- stdout\n").expect("stdout section");
    let (stdout, stderr) = rest.split_once("--- stderr\n").expect("stderr section");
    let mut args = Vec::new();
    let mut code = None;
    for line in head.lines() {
        if let Some(a) = line.strip_prefix("arg: ") {
            args.push(a.to_string());
        } else if let Some(c) = line.strip_prefix("code: ") {
            code = Some(c.parse().unwrap());
        } else {
            panic!("{}: unexpected header line {line:?}", path.display());
        }
    }
    Case { path: path.to_path_buf(), args, code: code.expect("code line"), stdout: stdout.into(), stderr: stderr.into() }
}

pub fn all_cases() -> Vec<Case> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "case"))
        .collect();
    v.sort();
    v.iter().map(|p| load(p)).collect()
}

/// Runs the binary on `case` and describes any difference.
pub fn mismatch(case: &Case) -> Option<String> {
    let out = Command::new(env!("CARGO_BIN_EXE_freeaut"))
        .args(&case.args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    let code = out.status.code().unwrap();
    (stdout != case.stdout || stderr != case.stderr || code != case.code).then(|| {
        format!(
            "{}: exit {code} (want {})\n--- got stdout\n{stdout}--- got stderr\n{stderr}",
            case.path.display(),
            case.code
        )
    })
}
