use crate::args::{Format, Global};
use anyhow::{anyhow, bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;
use std::io::Write;
use std::path::Path;
use tricode::codes::{CodeJson, CssCode};
use tricode::complex::{
    build_sigma_g, build_sigma_g_coned, build_torus3, build_torus3_grid, handle_rotation, mapping_torus,
    product_with_circle, ComplexJson, DeltaComplex,
};
use tricode::gates::DiagonalCircuit;

/// Result of one command: a JSON document, its text rendering, and an
/// optional raw artifact (DOT) that replaces both.
#[derive(Debug, Clone)]
pub struct Output {
    pub json: Value,
    pub text: String,
    pub raw: Option<String>,
    pub success: bool,
}

impl Output {
    pub fn new<T: Serialize>(value: &T, text: impl Into<String>) -> Result<Self> {
        Ok(Output {
            json: serde_json::to_value(value)?,
            text: text.into(),
            raw: None,
            success: true,
        })
    }

    pub fn failed(mut self) -> Self {
        self.success = false;
        self
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn render(out: &Output, format: Format) -> String {
    if let Some(raw) = &out.raw {
        return raw.clone();
    }
    match format {
        Format::Json => to_json_string(&out.json),
        Format::Text => {
            let mut t = out.text.clone();
            if !t.ends_with('\n') {
                t.push('\n');
            }
            t
        }
    }
}

pub fn emit(global: &Global, out: &Output, default: Format) -> Result<()> {
    let body = render(out, global.format.unwrap_or(default));
    match &global.out {
        Some(path) => std::fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            Ok(())
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn load_code(path: &Path) -> Result<CssCode> {
    let j: CodeJson = read_json(path)?;
    Ok(j.to_code()?)
}

pub fn load_circuit(path: &Path) -> Result<DiagonalCircuit> {
    let c: DiagonalCircuit = read_json(path)?;
    c.validate()?;
    Ok(c)
}

/// A complex file, or a preset name when no such file exists.
pub fn load_complex(spec: &str) -> Result<DeltaComplex> {
    let path = Path::new(spec);
    if path.exists() {
        let j: ComplexJson = read_json(path)?;
        return Ok(j.to_complex()?);
    }
    preset(spec).with_context(|| format!("{spec:?} is neither a file nor a preset"))
}

fn parse_num(s: &str, what: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| anyhow!("bad {what} {s:?}"))
}

fn pair(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| anyhow!("expected <g>,<layers>, got {s:?}"))?;
    Ok((parse_num(a, "genus")?, parse_num(b, "layer count")?))
}

pub fn preset(spec: &str) -> Result<DeltaComplex> {
    let (name, arg) = spec.split_once(':').unwrap_or((spec, ""));
    Ok(match name {
        "t3" => build_torus3(),
        "t3-grid" => build_torus3_grid(parse_num(arg, "grid size")?),
        "sigma" => build_sigma_g(parse_num(arg, "genus")?)?,
        "sigma-coned" => build_sigma_g_coned(parse_num(arg, "genus")?)?,
        "product" => {
            let (g, layers) = pair(arg)?;
            product_with_circle(&build_sigma_g(g)?, layers)?
        }
        "twisted" => {
            let (g, layers) = pair(arg)?;
            mapping_torus(&build_sigma_g_coned(g)?, &handle_rotation(g)?, layers)?
        }
        _ => bail!("unknown preset {spec:?}"),
    })
}
