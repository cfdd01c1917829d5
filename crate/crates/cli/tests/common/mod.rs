//! Shared end-to-end harness: runs the `masking` binary against the fixture
//! directory and checks exit codes and output determinism.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

/// Runs the binary from inside the fixture directory so that the paths
/// recorded in manifests are the short relative ones given here.
pub fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_masking"))
        .args(args)
        .current_dir(fixtures())
        .output()
        .expect("spawn masking")
}

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
}

pub const MATRIX: &[Case] = &[
    Case { name: "mask disk family", args: &["mask", "--builtin", "sharp:2", "--states", "phases.json"], exit: 0 },
    Case { name: "mask |0>,|+>", args: &["mask", "--builtin", "sharp:2", "--states", "zero_plus.json"], exit: 2 },
    Case { name: "mask basis, masker file, set mode", args: &["mask", "--masker", "classical_bit_masker.json", "--states", "basis.json", "--mode", "set"], exit: 0 },
    Case { name: "mask basis, masker file, span mode", args: &["mask", "--masker", "classical_bit_masker.json", "--states", "basis.json"], exit: 2 },
    Case { name: "mask multiparty builtin", args: &["mask", "--builtin", "multiparty:2", "--states", "phases.json"], exit: 0 },
    Case { name: "mask missing file", args: &["mask", "--builtin", "sharp:2", "--states", "does_not_exist.json"], exit: 1 },
    Case { name: "mask malformed json", args: &["mask", "--builtin", "sharp:2", "--states", "malformed.json"], exit: 1 },
    Case { name: "mask unknown builtin", args: &["mask", "--builtin", "sharp", "--states", "phases.json"], exit: 1 },
    Case { name: "mask without masker", args: &["mask", "--states", "phases.json"], exit: 1 },
    Case { name: "mask dimension mismatch", args: &["mask", "--builtin", "sharp:2", "--states", "qutrit.json"], exit: 1 },
    Case { name: "mask invalid masker", args: &["mask", "--masker", "not_isometry.json", "--states", "basis.json"], exit: 1 },
    Case { name: "mask bad mode", args: &["mask", "--builtin", "sharp:2", "--states", "phases.json", "--mode", "both"], exit: 1 },
    Case { name: "witness disk family", args: &["witness", "--states", "phases.json", "--config", "witness_quick.json"], exit: 0 },
    Case { name: "witness truncated", args: &["witness", "--states", "tomographic.json", "--config", "witness_truncated.json"], exit: 0 },
    Case { name: "witness seed override", args: &["witness", "--states", "tomographic.json", "--config", "witness_truncated.json", "--seed", "5"], exit: 0 },
    Case { name: "witness invalid config", args: &["witness", "--states", "phases.json", "--config", "witness_bad.json"], exit: 1 },
    Case { name: "witness unknown config field", args: &["witness", "--states", "phases.json", "--config", "witness_unknown_field.json"], exit: 1 },
    Case { name: "commit honest", args: &["commit", "--psi", "plus.json", "--builtin", "sharp:2"], exit: 0 },
    Case { name: "commit cheat", args: &["commit", "--psi", "plus.json", "--builtin", "sharp:2", "--cheat", "1.5707963267948966"], exit: 0 },
    Case { name: "commit cheat negative phase", args: &["commit", "--psi", "plus.json", "--builtin", "sharp:2", "--cheat", "-0.5"], exit: 0 },
    Case { name: "commit impossible cheat", args: &["commit", "--psi", "plus.json", "--builtin", "classical-bit", "--cheat", "3.141592653589793"], exit: 2 },
    Case { name: "commit dimension mismatch", args: &["commit", "--psi", "qutrit_zero.json", "--builtin", "sharp:2"], exit: 1 },
    Case { name: "probe sharp", args: &["probe", "--builtin", "sharp:2", "--samples", "2000", "--seed", "3", "--tol", "0.01"], exit: 0 },
    Case { name: "probe no samples", args: &["probe", "--builtin", "sharp:3", "--samples", "0"], exit: 0 },
    Case { name: "probe invalid masker", args: &["probe", "--masker", "not_isometry.json"], exit: 1 },
    Case { name: "no subcommand", args: &[], exit: 1 },
    Case { name: "unknown subcommand", args: &["unmask"], exit: 1 },
    Case { name: "help", args: &["--help"], exit: 0 },
];

/// Every matrix case whose exit code differs from the expectation, with
/// the captured stderr.
pub fn exit_code_failures() -> Vec<String> {
    MATRIX
        .iter()
        .filter_map(|case| {
            let out = run(case.args);
            let code = out.status.code().unwrap_or(-1);
            (code != case.exit).then(|| {
                format!(
                    "{}: exit {code}, expected {} ({})",
                    case.name,
                    case.exit,
                    String::from_utf8_lossy(&out.stderr).trim()
                )
            })
        })
        .collect()
}

/// Cases whose stdout differs between two identical invocations.
pub fn nondeterministic_cases() -> Vec<&'static str> {
    MATRIX
        .iter()
        .filter(|case| case.exit != 1)
        .filter(|case| {
            let (a, b) = (run(case.args), run(case.args));
            a.stdout != b.stdout || a.status.code() != b.status.code()
        })
        .map(|case| case.name)
        .collect()
}
