pub mod grid;
pub mod topology;
pub mod torsion;
pub mod verify;

use std::path::Path;

use crate::{Backend, CliError, CliResult, Opts};

/// Canonical command echo built from the parsed configuration, so that the
/// same configuration always prints the same line.
pub fn echo(command: &str, opts: &Opts, extra: &[(&str, String)]) -> String {
    let mut parts = vec![command.to_string()];
    parts.push(format!("backend={}", if opts.backend == Backend::Exact { "exact" } else { "float" }));
    if let Some(t) = opts.tol {
        parts.push(format!("tol={t:e}"));
    }
    if let Some(p) = &opts.preset {
        parts.push(format!("preset={p}"));
    }
    if let Some(i) = &opts.input {
        parts.push(format!("input={}", i.display()));
    }
    if opts.full {
        parts.push("full".into());
    }
    parts.extend(extra.iter().map(|(k, v)| format!("{k}={v}")));
    parts.join(" ")
}

pub fn read_input(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))
}

/// Tolerance shown and applied for a check: zero on the exact backend, the
/// user's `--tol` or `default` otherwise.
pub fn tolerance(opts: &Opts, default: f64) -> f64 {
    if opts.backend == Backend::Exact {
        0.0
    } else {
        opts.tol.unwrap_or(default)
    }
}

pub fn tol_label(t: f64) -> String {
    if t == 0.0 {
        "exact".into()
    } else {
        format!("{t:.0e}")
    }
}
