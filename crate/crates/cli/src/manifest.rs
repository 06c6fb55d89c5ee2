//! TOML pipeline manifests.
//!
//! ```toml
//! seed = 7
//!
//! [[steps]]
//! id = "build"
//! command = ["complex", "build", "--preset", "t3"]
//! output = "t3.json"
//!
//! [[steps]]
//! id = "betti"
//! command = ["homology", "betti", "t3.json"]
//! inputs = ["t3.json"]
//!
//! [[expect]]
//! step = "betti"
//! pointer = "/betti"
//! equals = [1, 3, 3, 1]
//! provenance = "derived: Künneth"
//! ```

use crate::args::{Cli, Command, Format, Global};
use crate::commands::execute;
use crate::io::{render, Output};
use anyhow::{anyhow, bail, Context, Result};
use clap::Parser;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineManifest {
    pub seed: Option<u64>,
    #[serde(default)]
    pub steps: Vec<Step>,
    #[serde(default)]
    pub expect: Vec<Expectation>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Step {
    pub id: String,
    pub command: Vec<String>,
    /// Files this step reads: earlier outputs or files in the work directory.
    #[serde(default)]
    pub inputs: Vec<String>,
    pub output: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub step: String,
    /// JSON pointer into the step's output.
    pub pointer: String,
    pub equals: Option<toml::Value>,
    /// Expected length of an array or object.
    pub length: Option<usize>,
    #[serde(default)]
    pub tolerance: f64,
    pub provenance: String,
}

#[derive(Debug, Serialize)]
struct CheckRecord {
    step: String,
    pointer: String,
    provenance: String,
    status: &'static str,
    expected: Value,
    actual: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    diff: Option<String>,
}

#[derive(Debug, Serialize)]
struct StepRecord {
    id: String,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

pub fn load(path: &Path) -> Result<PipelineManifest> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading manifest {}", path.display()))?;
    let m: PipelineManifest = toml::from_str(&text).with_context(|| format!("manifest schema: {}", path.display()))?;
    Ok(m)
}

/// Checks bindings and expectation records before anything runs.
pub fn validate(m: &PipelineManifest, workdir: &Path) -> Result<()> {
    let mut ids = BTreeSet::new();
    let mut produced = BTreeSet::new();
    for s in &m.steps {
        if !ids.insert(s.id.as_str()) {
            bail!("duplicate step id {:?}", s.id);
        }
        if s.command.is_empty() {
            bail!("step {:?} has an empty command", s.id);
        }
        if s.command[0] == "run-manifest" {
            bail!("step {:?}: manifests do not nest", s.id);
        }
        for f in &s.inputs {
            if !produced.contains(f.as_str()) && !workdir.join(f).exists() {
                bail!(
                    "step {:?} reads {f:?}, which no earlier step produces and is not on disk",
                    s.id
                );
            }
        }
        if let Some(o) = &s.output {
            produced.insert(o.as_str());
        }
    }
    for e in &m.expect {
        if !ids.contains(e.step.as_str()) {
            bail!("expectation refers to unknown step {:?}", e.step);
        }
        if e.provenance.trim().is_empty() {
            bail!("expectation on {}{} has no provenance", e.step, e.pointer);
        }
        if e.equals.is_some() == e.length.is_some() {
            bail!(
                "expectation on {}{} needs exactly one of `equals` and `length`",
                e.step,
                e.pointer
            );
        }
        if !(e.pointer.is_empty() || e.pointer.starts_with('/')) {
            bail!("pointer {:?} must be empty or start with '/'", e.pointer);
        }
    }
    Ok(())
}

/// Structural equality with numbers compared within `tol`.
pub fn approx_eq(expected: &Value, actual: &Value, tol: f64) -> bool {
    match (expected, actual) {
        (Value::Number(a), Value::Number(b)) => match (a.as_i64(), b.as_i64()) {
            (Some(x), Some(y)) if tol == 0.0 => x == y,
            _ => match (a.as_f64(), b.as_f64()) {
                (Some(x), Some(y)) => (x - y).abs() <= tol,
                _ => false,
            },
        },
        (Value::Array(a), Value::Array(b)) => a.len() == b.len() && a.iter().zip(b).all(|(x, y)| approx_eq(x, y, tol)),
        (Value::Object(a), Value::Object(b)) => {
            a.len() == b.len() && a.iter().all(|(k, x)| b.get(k).is_some_and(|y| approx_eq(x, y, tol)))
        }
        _ => expected == actual,
    }
}

fn step_args(step: &Step, files: &BTreeSet<String>, workdir: &Path) -> Vec<String> {
    std::iter::once("tricode".to_string())
        .chain(step.command.iter().map(|a| {
            if files.contains(a) {
                workdir.join(a).to_string_lossy().into_owned()
            } else {
                a.clone()
            }
        }))
        .collect()
}

pub fn run_manifest(path: &Path, workdir: Option<&Path>, global: &Global) -> Result<Output> {
    let m = load(path)?;
    let workdir: PathBuf = match workdir {
        Some(w) => w.to_path_buf(),
        None => path.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    validate(&m, &workdir)?;
    let seed = m.seed.unwrap_or_else(|| global.seed());
    let step_global = Global {
        seed: Some(seed),
        out: None,
        format: None,
    };
    let mut warnings = Vec::new();
    if m.steps.is_empty() && m.expect.is_empty() {
        warnings.push("manifest contains no steps and no checks".to_string());
    }
    if !m.steps.is_empty() {
        std::fs::create_dir_all(&workdir).with_context(|| format!("creating {}", workdir.display()))?;
    }

    let files: BTreeSet<String> = m
        .steps
        .iter()
        .flat_map(|s| s.inputs.iter().chain(s.output.iter()).cloned())
        .collect();
    let mut results: BTreeMap<String, Value> = BTreeMap::new();
    let mut steps = Vec::new();
    let mut aborted = false;
    for s in &m.steps {
        if aborted {
            steps.push(StepRecord {
                id: s.id.clone(),
                status: "skipped",
                output: s.output.clone(),
                error: None,
            });
            continue;
        }
        let run = || -> Result<Output> {
            let cli =
                Cli::try_parse_from(step_args(s, &files, &workdir)).map_err(|e| anyhow!("{}", e.to_string().trim()))?;
            if matches!(cli.command, Command::RunManifest { .. }) {
                bail!("manifests do not nest");
            }
            let out = execute(&cli.command, &step_global)?;
            if let Some(o) = &s.output {
                let p = workdir.join(o);
                std::fs::write(&p, render(&out, Format::Json)).with_context(|| format!("writing {}", p.display()))?;
            }
            Ok(out)
        };
        match run() {
            Ok(out) => {
                results.insert(s.id.clone(), out.json);
                steps.push(StepRecord {
                    id: s.id.clone(),
                    status: "ok",
                    output: s.output.clone(),
                    error: None,
                });
            }
            Err(e) => {
                aborted = true;
                steps.push(StepRecord {
                    id: s.id.clone(),
                    status: "error",
                    output: s.output.clone(),
                    error: Some(format!("{e:#}")),
                });
            }
        }
    }

    let mut checks = Vec::new();
    for e in &m.expect {
        let expected = match (&e.equals, e.length) {
            (Some(v), _) => serde_json::to_value(v)?,
            (None, Some(n)) => json!({ "length": n }),
            _ => unreachable!("validated"),
        };
        let actual = results.get(&e.step).and_then(|v| v.pointer(&e.pointer)).cloned();
        let (ok, shown, diff) = match (&actual, &e.equals, e.length) {
            (None, _, _) => (
                false,
                Value::Null,
                Some(if results.contains_key(&e.step) {
                    format!("no value at {}", e.pointer)
                } else {
                    format!("step {} did not run", e.step)
                }),
            ),
            (Some(a), Some(_), _) => {
                let ok = approx_eq(&expected, a, e.tolerance);
                (ok, a.clone(), (!ok).then(|| format!("expected {expected}, got {a}")))
            }
            (Some(a), None, Some(n)) => {
                let len = match a {
                    Value::Array(v) => Some(v.len()),
                    Value::Object(o) => Some(o.len()),
                    _ => None,
                };
                let ok = len == Some(n);
                let shown = json!({ "length": len });
                (ok, shown, (!ok).then(|| format!("expected length {n}, got {len:?}")))
            }
            _ => unreachable!("validated"),
        };
        checks.push(CheckRecord {
            step: e.step.clone(),
            pointer: e.pointer.clone(),
            provenance: e.provenance.clone(),
            status: if ok { "PASS" } else { "FAIL" },
            expected,
            actual: shown,
            diff,
        });
    }

    let failed = checks.iter().filter(|c| c.status == "FAIL").count() + usize::from(aborted);
    let passed = checks.iter().filter(|c| c.status == "PASS").count();
    let status = if failed == 0 { "PASS" } else { "FAIL" };
    for w in &warnings {
        eprintln!("warning: {w}");
    }

    let mut text = String::new();
    for s in &steps {
        if let Some(err) = &s.error {
            let _ = writeln!(text, "ERROR step {}: {err}", s.id);
        }
    }
    for c in &checks {
        let _ = write!(text, "{} {} {}", c.status, c.step, c.pointer);
        match &c.diff {
            Some(d) => {
                let _ = writeln!(text, ": {d}");
            }
            None => {
                let _ = writeln!(text, " = {}", c.actual);
            }
        }
    }
    for w in &warnings {
        let _ = writeln!(text, "warning: {w}");
    }
    let _ = write!(
        text,
        "{status}: {passed} passed, {failed} failed, {} checks",
        checks.len()
    );

    let report = json!({
        "status": status,
        "seed": seed,
        "steps": steps,
        "checks": checks,
        "passed": passed,
        "failed": failed,
        "warnings": warnings,
    });
    let out = Output {
        json: report,
        text,
        raw: None,
        success: failed == 0,
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_within_tolerance() {
        assert!(approx_eq(&json!(91.2439), &json!(91.24389), 1e-4));
        assert!(!approx_eq(&json!(1), &json!(2), 0.0));
        assert!(approx_eq(&json!([1, 3, 3, 1]), &json!([1, 3, 3, 1]), 0.0));
        assert!(!approx_eq(&json!([1, 3, 3, 1]), &json!([1, 3, 3]), 0.0));
        assert!(approx_eq(&json!({"a": "PASS"}), &json!({"a": "PASS"}), 0.0));
    }

    #[test]
    fn schema_errors() {
        let bad: Result<PipelineManifest, _> = toml::from_str("stepz = []");
        assert!(bad.is_err());
        let m: PipelineManifest = toml::from_str(
            r#"
            [[steps]]
            id = "a"
            command = ["homology", "betti", "missing.json"]
            inputs = ["missing.json"]
            "#,
        )
        .unwrap();
        assert!(validate(&m, Path::new("/nonexistent")).is_err());
        let m: PipelineManifest = toml::from_str(
            r#"
            [[steps]]
            id = "a"
            command = ["complex", "build", "--preset", "t3"]
            [[expect]]
            step = "a"
            pointer = "/dims"
            equals = 3
            provenance = ""
            "#,
        )
        .unwrap();
        assert!(validate(&m, Path::new(".")).is_err());
    }
}
