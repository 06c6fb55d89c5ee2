use crate::args::*;
use crate::io::{load_circuit, load_code, load_complex, read_json, Output};
use crate::{manifest, report};
use anyhow::{anyhow, bail, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use tricode::codes::{color_code, distance, toric_code, CodeJson, DistanceMethod};
use tricode::complex::{barycentric_subdivide, mapping_torus, ComplexJson, DeltaComplex, SimplicialMap};
use tricode::cup::{triple_cup_integral, Cochain, CochainJson};
use tricode::gates::{
    ccz_circuit, check_logical_gate, coset_simulate, cz_membrane_circuit, encode_logical_state, exhaustive_check,
    extract_logical_action, transversal_t, LogicalAction, LogicalStateSpec, Verdict,
};
use tricode::homology::{betti_numbers, homology_basis, smith_normal_form, IntMatrix};
use tricode::hypergraph::{base_hypergraph, base_hypergraph_partial, degree_report, lift_full, Hypergraph, TripleForm};
use tricode::mcg::{
    curve_twist, mapping_torus_homology, parse_sequence, parse_word, thickened_dehn_twist_action, thurston, Coeff,
    Curve, SymplecticMatrix,
};
use tricode::sullivan::{roundtrip_check, synthesize, RoundtripVerdict, ThreeForm};
use tricode::BitVec;

pub fn run(cli: &Cli) -> Result<Output> {
    execute(&cli.command, &cli.global)
}

pub fn execute(cmd: &Command, global: &Global) -> Result<Output> {
    match cmd {
        Command::Complex(c) => complex(c),
        Command::Homology(c) => homology(c),
        Command::Snf { matrix } => snf(matrix),
        Command::Cup(c) => cup(c),
        Command::Code(c) => code(c),
        Command::Gate(c) => gate(c),
        Command::Mcg(c) => mcg(c),
        Command::Hypergraph(c) => hypergraph(c),
        Command::Sullivan(c) => sullivan(c, global),
        Command::RunManifest { manifest, workdir } => manifest::run_manifest(manifest, workdir.as_deref(), global),
        Command::Report { subject } => report::report(subject),
    }
}

fn indices(v: &[BitVec]) -> Vec<Vec<usize>> {
    v.iter().map(BitVec::to_indices).collect()
}

fn complex_output(k: &DeltaComplex) -> Result<Output> {
    let text = format!(
        "{}: dimension {}, simplex counts {:?}, χ = {}",
        k.name().unwrap_or("complex"),
        k.dims(),
        k.counts(),
        k.euler_characteristic()
    );
    Output::new(&ComplexJson::from(k), text)
}

fn complex(cmd: &ComplexCmd) -> Result<Output> {
    match cmd {
        ComplexCmd::Build { preset, twist } => {
            let k = if preset == "mapping-torus" {
                let path = twist
                    .as_ref()
                    .ok_or_else(|| anyhow!("mapping-torus needs --twist <file>"))?;
                twisted_from_file(path)?
            } else {
                crate::io::preset(preset)?
            };
            complex_output(&k)
        }
        ComplexCmd::Validate { complex } => {
            let path = Path::new(complex);
            let k = if path.exists() {
                let j: ComplexJson = read_json(path)?;
                let mut k = DeltaComplex::new(j.dims);
                for s in &j.simplices {
                    if s.dim > j.dims || (s.dim > 0 && s.faces.len() != s.dim + 1) {
                        bail!("malformed simplex record {s:?}");
                    }
                    k.push_simplex(s.dim, &s.faces, s.label.clone());
                }
                k
            } else {
                crate::io::preset(complex)?
            };
            let rep = k.validate();
            let text = if rep.is_valid() {
                "valid".to_string()
            } else {
                rep.violations
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            let out = Output::new(&json!({"valid": rep.is_valid(), "violations": rep.violations}), text)?;
            Ok(if rep.is_valid() { out } else { out.failed() })
        }
        ComplexCmd::Subdivide { complex } => {
            let k = load_complex(complex)?;
            complex_output(&barycentric_subdivide(&k).complex)
        }
    }
}

/// `{"base": <preset or complex>, "map": <map or "handle-rotation:<g>">, "layers": n}`
fn twisted_from_file(path: &Path) -> Result<DeltaComplex> {
    let v: Value = read_json(path)?;
    let base = match v.get("base") {
        Some(Value::String(s)) => crate::io::preset(s)?,
        Some(obj @ Value::Object(_)) => serde_json::from_value::<ComplexJson>(obj.clone())?.to_complex()?,
        _ => bail!("twist file needs a \"base\" preset name or complex"),
    };
    let layers = v.get("layers").and_then(Value::as_u64).unwrap_or(1) as usize;
    let map = match v.get("map") {
        Some(Value::String(s)) if s.starts_with("handle-rotation:") => {
            let g = s["handle-rotation:".len()..]
                .parse()
                .map_err(|_| anyhow!("bad map {s:?}"))?;
            tricode::complex::handle_rotation(g)?
        }
        Some(obj @ Value::Object(_)) => serde_json::from_value::<SimplicialMap>(obj.clone())?,
        _ => bail!("twist file needs a \"map\""),
    };
    map.check_automorphism(&base)?;
    Ok(mapping_torus(&base, &map, layers)?)
}

fn homology(cmd: &HomologyCmd) -> Result<Output> {
    match cmd {
        HomologyCmd::Betti { complex, dim } => {
            let k = load_complex(complex)?;
            let b = betti_numbers(&k);
            match dim {
                Some(n) => {
                    let v = *b.get(*n).ok_or_else(|| anyhow!("dimension {n} exceeds {}", k.dims()))?;
                    Output::new(&json!({"dim": n, "betti": v}), format!("b{n} = {v}"))
                }
                None => {
                    let text = b
                        .iter()
                        .enumerate()
                        .map(|(i, x)| format!("b{i} = {x}"))
                        .collect::<Vec<_>>()
                        .join(", ");
                    Output::new(&json!({"betti": b}), text)
                }
            }
        }
        HomologyCmd::Basis { complex, dim } => {
            let k = load_complex(complex)?;
            if *dim > k.dims() {
                bail!("dimension {dim} exceeds {}", k.dims());
            }
            let h = homology_basis(&k, *dim);
            let text = format!("H_{dim}: {} classes", h.cycles.len());
            Output::new(
                &json!({"dim": dim, "cycles": indices(&h.cycles), "cocycles": indices(&h.cocycles)}),
                text,
            )
        }
    }
}

fn snf(path: &Path) -> Result<Output> {
    let m: IntMatrix = read_json(path)?;
    let r = smith_normal_form(&m);
    let diag: Vec<String> = r.diagonal.iter().map(|d| d.to_string()).collect();
    let text = format!("diag({})", diag.join(", "));
    Output::new(
        &json!({"diagonal": diag.iter().map(|d| d.parse::<i64>().map(Value::from).unwrap_or_else(|_| Value::from(d.as_str()))).collect::<Vec<_>>(), "rank": r.rank(), "p": r.p, "q": r.q, "d": r.d}),
        text,
    )
}

fn cup(cmd: &CupCmd) -> Result<Output> {
    match cmd {
        CupCmd::Triple { complex, cocycles } => {
            if cocycles.len() != 3 {
                bail!("--cocycles takes three indices i,j,k");
            }
            let k = load_complex(complex)?;
            let h = homology_basis(&k, 1);
            let c = cocycles
                .iter()
                .map(|&i| {
                    h.cocycles
                        .get(i)
                        .map(|v| Cochain::from_values(1, v.clone()))
                        .ok_or_else(|| anyhow!("H¹ has {} classes, index {i} out of range", h.cocycles.len()))
                })
                .collect::<Result<Vec<_>>>()?;
            let v = triple_cup_integral(&k, &c[0], &c[1], &c[2])? as u8;
            let cochains: Vec<CochainJson> = c.iter().map(CochainJson::from).collect();
            Output::new(
                &json!({"cocycles": cocycles, "value": v, "cochains": cochains}),
                format!("∫ α{} ∪ α{} ∪ α{} = {v}", cocycles[0], cocycles[1], cocycles[2]),
            )
        }
        CupCmd::Form { complex } => {
            let k = load_complex(complex)?;
            let f = TripleForm::from_cup(&k)?;
            let mut text = format!("{} classes, {} unit triples", f.rank(), f.unit_triples().len());
            for t in f.unit_triples() {
                let _ = write!(text, "\n  ({}, {}, {})", f.labels[t[0]], f.labels[t[1]], f.labels[t[2]]);
            }
            Output::new(&f, text)
        }
    }
}

fn code(cmd: &CodeCmd) -> Result<Output> {
    match cmd {
        CodeCmd::Build { complex, kind } => {
            let k = load_complex(complex)?;
            let code = match kind.split_once(':') {
                Some(("toric", c)) => toric_code(&k, c.parse().map_err(|_| anyhow!("bad copy count {c:?}"))?)?,
                None if kind == "toric" => toric_code(&k, 1)?,
                None if kind == "color" => color_code(&k)?,
                _ => bail!("unknown code type {kind:?} (toric:<copies> | color)"),
            };
            let text = format!(
                "n={} k={} checks: {} X, {} Z",
                code.n,
                code.k(),
                code.hx.nrows(),
                code.hz.nrows()
            );
            Output::new(&CodeJson::from(&code), text)
        }
        CodeCmd::Distance { code, method } => {
            let c = load_code(code)?;
            let m = match method {
                DistanceArg::Exact => DistanceMethod::default(),
                DistanceArg::Bfs => DistanceMethod::SystoleBfs,
            };
            let r = distance(&c, m);
            let text = format!("d_x={} d_z={}", r.d_x.describe(), r.d_z.describe());
            Output::new(&r, text)
        }
    }
}

fn action_json(a: &LogicalAction) -> Value {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for g in &a.gates {
        *counts.entry(g.kind.to_string()).or_default() += 1;
    }
    json!({"gates": a.gates, "counts": counts, "poly": a.poly})
}

fn gate(cmd: &GateCmd) -> Result<Output> {
    match cmd {
        GateCmd::Ccz { complex } => {
            let c = ccz_circuit(&load_complex(complex)?)?;
            let text = format!("{} CCZ gates on {} qubits, depth {}", c.len(), c.n, c.depth());
            Output::new(&c, text)
        }
        GateCmd::Cz {
            complex,
            membrane,
            copies,
        } => {
            if copies.len() != 2 {
                bail!("--copies takes two copy numbers i,j");
            }
            let k = load_complex(complex)?;
            let z = if Path::new(membrane).exists() {
                let j: CochainJson = read_json(Path::new(membrane))?;
                if j.dim != 2 || j.support.iter().any(|&i| i >= k.count(2)) {
                    bail!("membrane must be a 2-chain of the complex");
                }
                BitVec::from_indices(k.count(2), j.support)
            } else {
                k.cycles_of_dim(2)
                    .find(|c| c.label == *membrane)
                    .map(|c| c.support.clone())
                    .ok_or_else(|| anyhow!("no named 2-cycle {membrane:?}"))?
            };
            let c = cz_membrane_circuit(&k, &z, (copies[0], copies[1]))?;
            let text = format!("{} CZ gates on {} qubits", c.len(), c.n);
            Output::new(&c, text)
        }
        GateCmd::T { code } => {
            let c = transversal_t(&load_code(code)?)?;
            let counts = c.counts();
            Output::new(&c, format!("transversal T layer: {counts:?}"))
        }
        GateCmd::Check { circuit, code } => {
            let r = check_logical_gate(&load_circuit(circuit)?, &load_code(code)?)?;
            let text = format!(
                "verdict={} method={} stabilizers={} failures={}",
                serde_json::to_value(r.verdict)?.as_str().unwrap_or("?"),
                r.method,
                r.stabilizers_checked,
                r.failures.len()
            );
            let out = Output::new(&r, text)?;
            Ok(if r.verdict == Verdict::Fail { out.failed() } else { out })
        }
        GateCmd::Action { circuit, code } => {
            let a = extract_logical_action(&load_circuit(circuit)?, &load_code(code)?)?;
            let text = if a.gates.is_empty() {
                "identity".to_string()
            } else {
                a.gates.iter().map(|g| g.to_string()).collect::<Vec<_>>().join("\n")
            };
            Ok(Output {
                json: action_json(&a),
                text,
                raw: None,
                success: true,
            })
        }
        GateCmd::Simulate { circuit, code, state } => {
            let (c, code) = (load_circuit(circuit)?, load_code(code)?);
            let spec = match state {
                Some(s) => s.parse::<LogicalStateSpec>()?,
                None => LogicalStateSpec::all_plus(code.k()),
            };
            let out = coset_simulate(&c, &code, &spec)?;
            let expected = match extract_logical_action(&c, &code) {
                Ok(a) => Some(encode_logical_state(&code, &spec, &a.poly)?),
                Err(_) => None,
            };
            let phase = expected.as_ref().and_then(|e| e.global_phase_to(&out));
            let text = format!(
                "{} basis terms; matches logical action: {}",
                out.len(),
                match phase {
                    Some(p) => format!("yes (global phase ω^{p})"),
                    None => "no".into(),
                }
            );
            let res = Output::new(
                &json!({
                    "terms": out.len(),
                    "state": out,
                    "matches_logical_action": phase.is_some(),
                    "global_phase": phase,
                }),
                text,
            )?;
            Ok(if phase.is_some() { res } else { res.failed() })
        }
        GateCmd::Exhaustive { circuit, code, budget } => {
            let r = exhaustive_check(&load_circuit(circuit)?, &load_code(code)?, *budget)?;
            let poly = (r.verdict == Verdict::Pass).then(|| r.logical_polynomial());
            let text = format!(
                "verdict={} enumerated={}",
                serde_json::to_value(r.verdict)?.as_str().unwrap_or("?"),
                r.enumerated
            );
            let out = Output::new(
                &json!({"verdict": r.verdict, "enumerated": r.enumerated, "logical_poly": poly}),
                text,
            )?;
            Ok(if r.verdict == Verdict::Fail { out.failed() } else { out })
        }
    }
}

fn matrix_text(m: &IntMatrix) -> String {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(|x| format!("{x:>3}")).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n")
}

/// A matrix file: `{"rows", "cols", "entries"}` or the `{"genus", "matrix"}`
/// output of `mcg twist`.
fn load_matrix(path: &Path) -> Result<IntMatrix> {
    let v: Value = read_json(path)?;
    let inner = v.get("matrix").cloned().unwrap_or(v);
    serde_json::from_value(inner).with_context(|| format!("parsing matrix in {}", path.display()))
}

fn mcg(cmd: &McgCmd) -> Result<Output> {
    match cmd {
        McgCmd::Twist { genus, curve, power } => {
            let c: Curve = curve.parse()?;
            let t = curve_twist(&c, *genus)?.pow(*power);
            let text = matrix_text(&t.entries);
            Output::new(&t, text)
        }
        McgCmd::TorusHomology { matrix, coeff } => {
            let m = load_matrix(matrix)?;
            if m.nrows() % 2 != 0 || m.nrows() != m.ncols() {
                bail!("expected a square 2g × 2g matrix");
            }
            let f = SymplecticMatrix::new(m.nrows() / 2, m)?;
            let coeff: Coeff = coeff.parse()?;
            let h = mapping_torus_homology(&f, coeff);
            Output::new(&h, h.describe())
        }
        McgCmd::Thurston { n, word, genus } => {
            let m = load_matrix(n)?;
            let rows = m.to_i64_rows().ok_or_else(|| anyhow!("entries of N must fit in i64"))?;
            let r = thurston(&rows, &parse_word(word)?, *genus)?;
            Output::new(&r, r.describe())
        }
        McgCmd::Thickened { genus, sequence } => {
            let t = thickened_dehn_twist_action(&parse_sequence(sequence)?, *genus)?;
            let text = if t.cnots.is_empty() {
                "identity on Z2 membranes".to_string()
            } else {
                t.cnots
                    .iter()
                    .map(|(c, x)| format!("CNOT({c},{x})"))
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            Output::new(&t, text)
        }
    }
}

fn load_form(path: &Path) -> Result<TripleForm> {
    let v: Value = read_json(path)?;
    if v.get("m").is_some() {
        Ok(serde_json::from_value::<ThreeForm>(v)?.mod2())
    } else {
        Ok(serde_json::from_value(v)?)
    }
}

fn hypergraph(cmd: &HypergraphCmd) -> Result<Output> {
    match cmd {
        HypergraphCmd::Build {
            form,
            lift,
            export,
            allow_unknown,
        } => {
            let f = load_form(form)?;
            let base = if *allow_unknown {
                base_hypergraph_partial(&f)
            } else {
                base_hypergraph(&f)?
            };
            let h = if *lift { lift_full(&base)? } else { base };
            let mut out = Output::new(&h, h.to_string())?;
            if *export == Export::Dot {
                out.raw = Some(h.to_dot());
            }
            Ok(out)
        }
        HypergraphCmd::Degrees { hypergraph } => {
            let h: Hypergraph = read_json(hypergraph)?;
            let r = degree_report(&h);
            let text = format!(
                "max degree {}, {} hyperedges, {} components, star-like: {}, Berge-acyclic: {}",
                r.max_degree, r.hyperedges, r.components, r.star_like, r.berge_acyclic
            );
            Output::new(&r, text)
        }
    }
}

fn sullivan(cmd: &SullivanCmd, global: &Global) -> Result<Output> {
    match cmd {
        SullivanCmd::Synth { form } => {
            let mu: ThreeForm = read_json(form)?;
            let s = synthesize(&mu)?;
            let text = format!(
                "m={} factors={} H2 rank={} predicted unit triples={}",
                mu.m,
                s.factors.len(),
                s.h2_rank,
                s.predicted.unit_triples().len()
            );
            Output::new(&s, text)
        }
        SullivanCmd::Roundtrip { form } => {
            let mu: ThreeForm = read_json(form)?;
            let r = roundtrip_check(&mu)?;
            let pass = r.verdict == RoundtripVerdict::Pass;
            let mut text = String::from(if pass { "PASS" } else { "FAIL" });
            for m in &r.mismatches {
                let _ = write!(text, "\n  {m}");
            }
            let out = Output::new(&r, text)?;
            Ok(if pass { out } else { out.failed() })
        }
        SullivanCmd::Random { m, triples } => {
            if *m < 3 {
                bail!("m must be at least 3");
            }
            let mut rng = ChaCha8Rng::seed_from_u64(global.seed());
            let mut mu = ThreeForm::new(*m);
            for _ in 0..*triples {
                let mut t = [0usize; 3];
                loop {
                    for x in &mut t {
                        *x = rng.gen_range(1..=*m);
                    }
                    if t[0] != t[1] && t[1] != t[2] && t[0] != t[2] {
                        break;
                    }
                }
                mu.add(t[0], t[1], t[2], 1)?;
            }
            let text = serde_json::to_string(&mu)?;
            Output::new(&mu, text)
        }
    }
}
