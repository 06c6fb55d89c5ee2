use crate::io::{load_code, load_complex, read_json, Output};
use anyhow::{bail, Result};
use serde_json::{json, Value};
use std::path::Path;
use tricode::codes::{color_code, distance_z, toric_code, CodeJson, CssCode, DistanceMethod};
use tricode::hypergraph::{base_hypergraph, degree_report, lift_full, magic_state_complexity, Hypergraph, TripleForm};
use tricode::mcg::{parse_word, thurston, ThurstonReport};
use tricode::sullivan::{genus13_factors, synthesize_from_factors};

/// The pseudo-Anosov example: N = [[8,4],[4,0]] and the word T_A·T_B.
pub const THURSTON_N: [[i64; 2]; 2] = [[8, 4], [4, 0]];

fn code_report(code: &CssCode) -> Result<Output> {
    let d = distance_z(code, DistanceMethod::default());
    let text = format!("n={} k={} d_z={}", code.n, code.k(), d.describe());
    Output::new(&json!({"n": code.n, "k": code.k(), "d_z": d}), text)
}

fn hypergraph_report(h: &Hypergraph) -> Result<Output> {
    let deg = degree_report(h);
    let value = json!({
        "kind": h.kind,
        "vertices": h.vertices.len(),
        "hyperedges": h.hyperedges.len(),
        "kappa": magic_state_complexity(h),
        "max_degree": deg.max_degree,
    });
    Output::new(&value, h.to_string())
}

fn thurston_report(r: &ThurstonReport) -> Result<Output> {
    Output::new(r, r.describe())
}

/// Built-in subjects: `toric:<complex>:<copies>`, `color:<complex>`,
/// `hypergraph:<complex>`, `thurston`, `genus13`; otherwise a JSON file
/// holding a code, hypergraph or Thurston report.
pub fn report(subject: &str) -> Result<Output> {
    let path = Path::new(subject);
    if path.exists() {
        let v: Value = read_json(path)?;
        if v.get("hx").is_some() {
            return code_report(&load_code(path)?);
        }
        if v.get("hyperedges").is_some() {
            return hypergraph_report(&serde_json::from_value(v)?);
        }
        if v.get("nu").is_some() {
            return thurston_report(&serde_json::from_value(v)?);
        }
        bail!("unknown subject: {subject} is not a code, hypergraph or Thurston report");
    }
    let (kind, rest) = subject.split_once(':').unwrap_or((subject, ""));
    match kind {
        "toric" => {
            let (k, copies) = rest.rsplit_once(':').unwrap_or((rest, "1"));
            let code = toric_code(&load_complex(k)?, copies.parse()?)?;
            // Round-trip through the file format so reports match saved codes.
            code_report(&CodeJson::from(&code).to_code()?)
        }
        "color" => code_report(&color_code(&load_complex(rest)?)?),
        "hypergraph" => {
            let f = TripleForm::from_cup(&load_complex(rest)?)?;
            hypergraph_report(&lift_full(&base_hypergraph(&f)?)?)
        }
        "thurston" => {
            let n: Vec<Vec<i64>> = THURSTON_N.iter().map(|r| r.to_vec()).collect();
            thurston_report(&thurston(&n, &parse_word("A B")?, Some(2))?)
        }
        "genus13" => {
            let s = synthesize_from_factors(13, &genus13_factors())?;
            let h = base_hypergraph(&s.predicted)?;
            let deg = degree_report(&h);
            let text = format!(
                "{}; H2 rank {}; max degree {}; {} components",
                h, s.h2_rank, deg.max_degree, deg.components
            );
            Output::new(&json!({"hypergraph": h, "degrees": deg, "h2_rank": s.h2_rank}), text)
        }
        _ => bail!("unknown subject {subject:?}"),
    }
}
