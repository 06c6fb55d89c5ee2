//! Interaction hypergraphs of logical CCZ gates, CZ interaction graphs and
//! hypergraph magic-state accounting.

use crate::codes::{CssCode, LogicalLabel};
use crate::complex::DeltaComplex;
use crate::cup::{triple_cup_integral, Cochain};
use crate::gates::{LogicalAction, PhasePolynomial};
use crate::homology::labeled_basis;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

/// A Z₂ triple-intersection coefficient, or one that is not determined by the
/// available algebraic data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coefficient {
    Zero,
    One,
    Unknown,
}

/// Symmetric Z₂-valued 3-form on a labeled basis of H₂, stored on sorted
/// triples of distinct indices. Absent triples are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TripleForm {
    pub labels: Vec<String>,
    coeffs: BTreeMap<[usize; 3], Coefficient>,
}

fn sorted(i: usize, j: usize, k: usize) -> Option<[usize; 3]> {
    let mut t = [i, j, k];
    t.sort_unstable();
    (t[0] != t[1] && t[1] != t[2]).then_some(t)
}

impl TripleForm {
    pub fn new(labels: Vec<String>) -> Self {
        TripleForm {
            labels,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    /// Sets the coefficient of {i, j, k}; indices must be distinct.
    pub fn set(&mut self, i: usize, j: usize, k: usize, c: Coefficient) -> Result<()> {
        let n = self.labels.len();
        if i >= n || j >= n || k >= n {
            return Err(Error::OutOfRange(format!("triple ({i},{j},{k}) on a rank-{n} form")));
        }
        let t = sorted(i, j, k).ok_or_else(|| Error::Invalid(format!("triple ({i},{j},{k}) repeats an index")))?;
        if c == Coefficient::Zero {
            self.coeffs.remove(&t);
        } else {
            self.coeffs.insert(t, c);
        }
        Ok(())
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Coefficient {
        sorted(i, j, k)
            .and_then(|t| self.coeffs.get(&t).copied())
            .unwrap_or(Coefficient::Zero)
    }

    pub fn unit_triples(&self) -> Vec<[usize; 3]> {
        self.with(Coefficient::One)
    }

    pub fn unknown_triples(&self) -> Vec<[usize; 3]> {
        self.with(Coefficient::Unknown)
    }

    fn with(&self, c: Coefficient) -> Vec<[usize; 3]> {
        self.coeffs.iter().filter(|(_, &v)| v == c).map(|(t, _)| *t).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Triple intersections ∫ a ∪ b ∪ c of the labeled H₂ basis of a closed
    /// 3-complex, through Poincaré-dual cocycles.
    pub fn from_cup(k: &DeltaComplex) -> Result<TripleForm> {
        let lb = labeled_basis(k)?;
        let co: Vec<Cochain> = lb.cocycles.iter().map(|c| Cochain::from_values(1, c.clone())).collect();
        let mut form = TripleForm::new(lb.labels.clone());
        let r = co.len();
        for i in 0..r {
            for j in i + 1..r {
                for l in j + 1..r {
                    if triple_cup_integral(k, &co[i], &co[j], &co[l])? {
                        form.set(i, j, l, Coefficient::One)?;
                    }
                }
            }
        }
        Ok(form)
    }

    /// Reads the form off the logical action of a circuit on three toric-code
    /// copies: CCZ((i;1),(j;2),(l;3)) contributes to {i, j, l}.
    pub fn from_action(action: &LogicalAction, code: &CssCode) -> Result<TripleForm> {
        let k = code.labels.len();
        if k % 3 != 0 || code.labels.iter().any(|l| l.copy == 0) {
            return Err(Error::Invalid("logical action is not on three labeled copies".into()));
        }
        let r = k / 3;
        let mut form = TripleForm::new(code.labels[..r].iter().map(|l| l.class.clone()).collect());
        for (vars, &c) in &action.poly.terms {
            if vars.len() != 3 || c != 4 {
                return Err(Error::Invalid(format!(
                    "logical term {vars:?} with coefficient {c} is not a CCZ"
                )));
            }
            let mut copies: Vec<usize> = vars.iter().map(|&q| q / r).collect();
            copies.sort_unstable();
            if copies != [0, 1, 2] {
                return Err(Error::Invalid(format!(
                    "CCZ on {vars:?} does not span the three copies"
                )));
            }
            let [a, b, d] = [vars[0] % r, vars[1] % r, vars[2] % r];
            form.set(a, b, d, Coefficient::One)?;
        }
        Ok(form)
    }
}

#[derive(Serialize, Deserialize)]
struct FormJson {
    labels: Vec<String>,
    coeffs: BTreeMap<String, serde_json::Value>,
}

impl Serialize for TripleForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(t, c)| {
                let v = match c {
                    Coefficient::One => serde_json::Value::from(1),
                    _ => serde_json::Value::from("unknown"),
                };
                (format!("{},{},{}", t[0], t[1], t[2]), v)
            })
            .collect();
        FormJson {
            labels: self.labels.clone(),
            coeffs,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TripleForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = FormJson::deserialize(d)?;
        let mut form = TripleForm::new(j.labels);
        for (key, v) in j.coeffs {
            let idx: Vec<usize> = key
                .split(',')
                .map(|p| p.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| D::Error::custom(format!("bad triple key {key:?}")))?;
            if idx.len() != 3 {
                return Err(D::Error::custom(format!("bad triple key {key:?}")));
            }
            let c = match &v {
                serde_json::Value::Number(n) if n.as_u64().is_some() => {
                    if n.as_u64().unwrap_or(0) % 2 == 1 {
                        Coefficient::One
                    } else {
                        Coefficient::Zero
                    }
                }
                serde_json::Value::String(s) if s == "unknown" => Coefficient::Unknown,
                _ => return Err(D::Error::custom(format!("bad coefficient {v} for {key:?}"))),
            };
            form.set(idx[0], idx[1], idx[2], c).map_err(D::Error::custom)?;
        }
        Ok(form)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HypergraphKind {
    Base,
    Full,
}

/// Vertices are logical qubits, hyperedges are logical CCZ gates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypergraph {
    pub kind: HypergraphKind,
    pub vertices: Vec<String>,
    pub hyperedges: Vec<Vec<usize>>,
    /// Triples whose coefficient is undetermined.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unknown: Vec<Vec<usize>>,
}

/// One hyperedge per unit coefficient; fails on the first unknown one.
pub fn base_hypergraph(form: &TripleForm) -> Result<Hypergraph> {
    if let Some(t) = form.unknown_triples().first() {
        return Err(Error::UnknownCoefficient(*t));
    }
    Ok(base_hypergraph_partial(form))
}

/// Like [`base_hypergraph`], but unknown triples are carried along.
pub fn base_hypergraph_partial(form: &TripleForm) -> Hypergraph {
    Hypergraph {
        kind: HypergraphKind::Base,
        vertices: form.labels.clone(),
        hyperedges: form.unit_triples().into_iter().map(|t| t.to_vec()).collect(),
        unknown: form.unknown_triples().into_iter().map(|t| t.to_vec()).collect(),
    }
}

const PERMUTATIONS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Three copies of each vertex, `(label;copy)`, and the 3! copy assignments
/// of every base hyperedge.
pub fn lift_full(base: &Hypergraph) -> Result<Hypergraph> {
    if base.kind != HypergraphKind::Base {
        return Err(Error::Invalid("hypergraph is already lifted".into()));
    }
    let r = base.vertices.len();
    let vertices = (1..=3)
        .flat_map(|copy| {
            base.vertices.iter().map(move |class| {
                LogicalLabel {
                    class: class.clone(),
                    copy,
                }
                .to_string()
            })
        })
        .collect();
    let lift = |edges: &[Vec<usize>]| -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = edges
            .iter()
            .flat_map(|e| {
                PERMUTATIONS
                    .iter()
                    .map(move |p| (0..3).map(|c| c * r + e[p[c]]).collect())
            })
            .collect();
        out.sort();
        out
    };
    Ok(Hypergraph {
        kind: HypergraphKind::Full,
        vertices,
        hyperedges: lift(&base.hyperedges),
        unknown: lift(&base.unknown),
    })
}

/// κ: the number of logical CCZ gates, i.e. hyperedges of the full hypergraph.
pub fn magic_state_complexity(h: &Hypergraph) -> usize {
    match h.kind {
        HypergraphKind::Full => h.hyperedges.len(),
        HypergraphKind::Base => 6 * h.hyperedges.len(),
    }
}

/// Phase polynomial of ∏ CCZ over the hyperedges: applied to |+⟩^⊗k it
/// prepares the hypergraph state.
pub fn hypergraph_state_polynomial(h: &Hypergraph) -> PhasePolynomial {
    let mut p = PhasePolynomial::zero(h.vertices.len());
    for e in &h.hyperedges {
        p.add_term(e, 4);
    }
    p
}

/// CZ edges that fire together when the membrane α sits in one copy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredGraph {
    pub color: String,
    pub edges: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unknown: Vec<[String; 2]>,
}

/// Edges (β;r)–(γ;s) with |α ∩ β ∩ γ| = 1, where α is placed in copy
/// `alpha_copy` and r < s are the other two copies.
pub fn cz_interaction_graph(form: &TripleForm, alpha: usize, alpha_copy: usize) -> Result<ColoredGraph> {
    if alpha >= form.rank() {
        return Err(Error::OutOfRange(format!(
            "class {alpha} on a rank-{} form",
            form.rank()
        )));
    }
    if !(1..=3).contains(&alpha_copy) {
        return Err(Error::OutOfRange(format!("copy {alpha_copy}")));
    }
    let others: Vec<usize> = (1..=3).filter(|&c| c != alpha_copy).collect();
    let (r, s) = (others[0], others[1]);
    let name = |i: usize, copy: usize| {
        LogicalLabel {
            class: form.labels[i].clone(),
            copy,
        }
        .to_string()
    };
    let mut edges = Vec::new();
    let mut unknown = Vec::new();
    for b in 0..form.rank() {
        for g in b + 1..form.rank() {
            let target = match form.get(alpha, b, g) {
                Coefficient::Zero => continue,
                Coefficient::One => &mut edges,
                Coefficient::Unknown => &mut unknown,
            };
            target.push([name(b, r), name(g, s)]);
            target.push([name(g, r), name(b, s)]);
        }
    }
    edges.sort();
    unknown.sort();
    Ok(ColoredGraph {
        color: name(alpha, alpha_copy),
        edges,
        unknown,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub degrees: Vec<(String, usize)>,
    pub histogram: BTreeMap<usize, usize>,
    pub max_degree: usize,
    pub hyperedges: usize,
    /// Some vertex meets at least half of the hyperedges.
    pub star_like: bool,
    /// The vertex–hyperedge incidence graph has no cycle.
    pub berge_acyclic: bool,
    /// Connected components of the incidence graph, isolated vertices included.
    pub components: usize,
}

pub fn degree_report(h: &Hypergraph) -> DegreeReport {
    let n = h.vertices.len();
    let mut deg = vec![0usize; n];
    for e in &h.hyperedges {
        for &v in e {
            deg[v] += 1;
        }
    }
    let mut histogram = BTreeMap::new();
    for &d in &deg {
        *histogram.entry(d).or_insert(0) += 1;
    }
    let max_degree = deg.iter().copied().max().unwrap_or(0);
    let m = h.hyperedges.len();
    // Union-find over vertices 0..n and hyperedges n..n+m.
    let mut parent: Vec<usize> = (0..n + m).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut acyclic = true;
    for (i, e) in h.hyperedges.iter().enumerate() {
        for &v in e {
            let (a, b) = (find(&mut parent, v), find(&mut parent, n + i));
            if a == b {
                acyclic = false;
            } else {
                parent[a] = b;
            }
        }
    }
    let components = (0..n + m).filter(|&x| find(&mut parent, x) == x).count();
    DegreeReport {
        degrees: h.vertices.iter().cloned().zip(deg).collect(),
        histogram,
        max_degree,
        hyperedges: m,
        star_like: m > 0 && 2 * max_degree >= m,
        berge_acyclic: acyclic,
        components,
    }
}

impl Hypergraph {
    /// Graphviz drawing with each hyperedge as a small square junction node;
    /// unknown triples are dashed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph hypergraph {\n  node [shape=ellipse];\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "  v{i} [label=\"{}\"];", v.replace('"', "\\\""));
        }
        let groups = [
            (&self.hyperedges, "e", ""),
            (&self.unknown, "u", ", style=dashed, label=\"?\""),
        ];
        for (edges, prefix, style) in groups {
            for (i, e) in edges.iter().enumerate() {
                let _ = writeln!(out, "  {prefix}{i} [shape=square, width=0.15, label=\"\"{style}];");
                for &v in e {
                    let _ = writeln!(out, "  {prefix}{i} -- v{v};");
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} vertices, {} hyperedges, κ={}",
            self.vertices.len(),
            self.hyperedges.len(),
            magic_state_complexity(self)
        )?;
        if !self.unknown.is_empty() {
            write!(f, ", {} unknown", self.unknown.len())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::toric_code;
    use crate::complex::{build_sigma_g, build_torus3, product_with_circle};
    use crate::gates::{ccz_circuit, extract_logical_action};

    fn quasi(g: usize) -> DeltaComplex {
        product_with_circle(&build_sigma_g(g).unwrap(), 1).unwrap()
    }

    #[test]
    fn torus3_hypergraph() {
        let form = TripleForm::from_cup(&build_torus3()).unwrap();
        let base = base_hypergraph(&form).unwrap();
        assert_eq!((base.vertices.len(), base.hyperedges.len()), (3, 1));
        let full = lift_full(&base).unwrap();
        assert_eq!((full.vertices.len(), full.hyperedges.len()), (9, 6));
        assert_eq!(magic_state_complexity(&full), 6);
        assert_eq!(full.to_string(), "9 vertices, 6 hyperedges, κ=6");
    }

    #[test]
    fn quasi_hyperbolic_is_a_star() {
        for g in 1..=3 {
            let form = TripleForm::from_cup(&quasi(g)).unwrap();
            let base = base_hypergraph(&form).unwrap();
            assert_eq!(base.vertices.len(), 2 * g + 1);
            assert_eq!(base.hyperedges.len(), g);
            let hub = form.labels.iter().position(|l| l == &format!("Sigma_{g}")).unwrap();
            assert!(base.hyperedges.iter().all(|e| e.contains(&hub)));
            let rep = degree_report(&base);
            assert_eq!(rep.degrees[hub].1, g);
            assert!(rep.degrees.iter().enumerate().all(|(i, d)| i == hub || d.1 == 1));
            assert!(rep.star_like);
            assert!(rep.berge_acyclic);
            let full = lift_full(&base).unwrap();
            assert_eq!(full.vertices.len(), 3 * (2 * g + 1));
            assert_eq!(magic_state_complexity(&full), 6 * g);
        }
    }

    #[test]
    fn cup_and_circuit_forms_agree() {
        let t = build_torus3();
        let code = toric_code(&t, 3).unwrap();
        let action = extract_logical_action(&ccz_circuit(&t).unwrap(), &code).unwrap();
        let from_action = TripleForm::from_action(&action, &code).unwrap();
        let from_cup = TripleForm::from_cup(&t).unwrap();
        assert_eq!(
            base_hypergraph(&from_action).unwrap(),
            base_hypergraph(&from_cup).unwrap()
        );
    }

    #[test]
    fn unknown_is_never_silently_zero() {
        let mut form = TripleForm::new(vec!["x".into(), "y".into(), "z".into(), "w".into()]);
        form.set(0, 1, 2, Coefficient::One).unwrap();
        form.set(1, 2, 3, Coefficient::Unknown).unwrap();
        assert_eq!(base_hypergraph(&form), Err(Error::UnknownCoefficient([1, 2, 3])));
        let partial = base_hypergraph_partial(&form);
        assert_eq!(partial.unknown, vec![vec![1, 2, 3]]);
        let json = serde_json::to_string(&partial).unwrap();
        assert!(json.contains("\"unknown\""));
        assert!(partial.to_dot().contains("style=dashed"));
        let back: TripleForm = serde_json::from_str(&serde_json::to_string(&form).unwrap()).unwrap();
        assert_eq!(back, form);
    }

    #[test]
    fn empty_form() {
        let form = TripleForm::new(vec!["x".into(), "y".into()]);
        let base = base_hypergraph(&form).unwrap();
        let full = lift_full(&base).unwrap();
        assert!(full.hyperedges.is_empty());
        assert_eq!(magic_state_complexity(&full), 0);
        let rep = degree_report(&full);
        assert_eq!(rep.max_degree, 0);
        assert!(!rep.star_like);
    }

    #[test]
    fn cz_graph_matches_full_hypergraph() {
        let form = TripleForm::from_cup(&quasi(2)).unwrap();
        let full = lift_full(&base_hypergraph(&form).unwrap()).unwrap();
        let r = form.rank();
        for alpha in 0..r {
            for copy in 1..=3 {
                let g = cz_interaction_graph(&form, alpha, copy).unwrap();
                let v = (copy - 1) * r + alpha;
                let mut through: Vec<[String; 2]> = full
                    .hyperedges
                    .iter()
                    .filter(|e| e.contains(&v))
                    .map(|e| {
                        let rest: Vec<&String> = e.iter().filter(|&&q| q != v).map(|&q| &full.vertices[q]).collect();
                        [rest[0].clone(), rest[1].clone()]
                    })
                    .collect();
                through.sort();
                assert_eq!(g.edges, through);
            }
        }
        let a1 = form.labels.iter().position(|l| l == "a(1)xc").unwrap();
        assert_eq!(cz_interaction_graph(&form, a1, 3).unwrap().edges.len(), 2);
        let hub = form.labels.iter().position(|l| l == "Sigma_2").unwrap();
        assert_eq!(cz_interaction_graph(&form, hub, 3).unwrap().edges.len(), 4);
    }

    #[test]
    fn hypergraph_json_shape() {
        let form = TripleForm::from_cup(&build_torus3()).unwrap();
        let base = base_hypergraph(&form).unwrap();
        let json = serde_json::to_value(&base).unwrap();
        assert_eq!(json["kind"], "base");
        assert_eq!(json["hyperedges"], serde_json::json!([[0, 1, 2]]));
        assert!(json.get("unknown").is_none());
    }
}
