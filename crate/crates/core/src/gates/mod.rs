//! Diagonal circuits over {Z, S, S†, T, T†, CZ, CCZ}: synthesis from
//! complexes, logical-gate verification, logical-action extraction, and an
//! exact coset-state simulator.

mod phase;
mod sim;

pub use phase::{subsets_up_to, PhasePolynomial};
pub use sim::{
    coset_simulate, encode_logical_state, exhaustive_check, ExhaustiveResult, LogicalStateSpec, SparseState,
};

use crate::codes::{CodeKind, CssCode};
use crate::complex::DeltaComplex;
use crate::cup::tet_edges;
use crate::gf2::BitVec;
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateKind {
    Z,
    S,
    #[serde(rename = "SDG", alias = "S†", alias = "Sdg")]
    Sdg,
    T,
    #[serde(rename = "TDG", alias = "T†", alias = "Tdg")]
    Tdg,
    CZ,
    CCZ,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::CZ => 2,
            GateKind::CCZ => 3,
            _ => 1,
        }
    }

    /// Phase coefficient in units of π/4.
    pub fn coefficient(self) -> u8 {
        match self {
            GateKind::Z | GateKind::CZ | GateKind::CCZ => 4,
            GateKind::S => 2,
            GateKind::Sdg => 6,
            GateKind::T => 1,
            GateKind::Tdg => 7,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GateKind::Z => "Z",
            GateKind::S => "S",
            GateKind::Sdg => "S†",
            GateKind::T => "T",
            GateKind::Tdg => "T†",
            GateKind::CZ => "CZ",
            GateKind::CCZ => "CCZ",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Gate(pub GateKind, pub Vec<usize>);

impl Gate {
    pub fn kind(&self) -> GateKind {
        self.0
    }

    pub fn qubits(&self) -> &[usize] {
        &self.1
    }
}

/// A diagonal circuit; gate order is irrelevant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalCircuit {
    pub n: usize,
    pub gates: Vec<Gate>,
}

impl DiagonalCircuit {
    pub fn new(n: usize) -> Self {
        DiagonalCircuit { n, gates: Vec::new() }
    }

    pub fn push(&mut self, kind: GateKind, qubits: &[usize]) {
        assert_eq!(qubits.len(), kind.arity(), "{kind} acts on {} qubits", kind.arity());
        assert!(qubits.iter().all(|&q| q < self.n), "qubit out of range");
        self.gates.push(Gate(kind, qubits.to_vec()));
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        for g in &self.gates {
            if g.1.len() != g.0.arity() {
                return Err(Error::Invalid(format!("{} with {} qubits", g.0, g.1.len())));
            }
            if g.1.iter().any(|&q| q >= self.n) {
                return Err(Error::OutOfRange(format!("gate {} on {:?}", g.0, g.1)));
            }
        }
        Ok(())
    }

    /// Gates with sorted qubit tuples, sorted.
    pub fn canonical(&self) -> DiagonalCircuit {
        let mut gates: Vec<Gate> = self
            .gates
            .iter()
            .map(|g| {
                let mut q = g.1.clone();
                q.sort_unstable();
                Gate(g.0, q)
            })
            .collect();
        gates.sort();
        DiagonalCircuit { n: self.n, gates }
    }

    pub fn counts(&self) -> BTreeMap<GateKind, usize> {
        let mut m = BTreeMap::new();
        for g in &self.gates {
            *m.entry(g.0).or_insert(0) += 1;
        }
        m
    }

    pub fn phase_polynomial(&self) -> PhasePolynomial {
        let mut p = PhasePolynomial::zero(self.n);
        for g in &self.gates {
            p.add_term(&g.1, g.0.coefficient());
        }
        p
    }

    /// Whether every phase is a multiple of π (only Z, CZ, CCZ).
    pub fn is_sign_circuit(&self) -> bool {
        self.gates.iter().all(|g| g.0.coefficient() == 4)
    }

    /// Number of layers in a greedy coloring where gates sharing a qubit get
    /// different layers.
    pub fn depth(&self) -> usize {
        let c = self.canonical();
        let mut last: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        let mut depth = 0;
        for g in &c.gates {
            let used: Vec<usize> = g.1.iter().flat_map(|&q| last[q].iter().copied()).collect();
            let layer = (0..).find(|l| !used.contains(l)).unwrap();
            for &q in &g.1 {
                last[q].push(layer);
            }
            depth = depth.max(layer + 1);
        }
        depth
    }

    /// Concatenation (the product of the two diagonal operators).
    pub fn then(&self, other: &DiagonalCircuit) -> DiagonalCircuit {
        let mut out = self.clone();
        out.n = self.n.max(other.n);
        out.gates.extend(other.gates.iter().cloned());
        out
    }
}

/// Gates realizing a phase polynomial: degree one in {T,S,Z} products,
/// degree two as CZ, degree three as CCZ.
pub fn polynomial_to_gates(p: &PhasePolynomial) -> Result<Vec<Gate>> {
    let mut gates = Vec::new();
    for (vars, &c) in &p.terms {
        match vars.len() {
            0 => {}
            1 => {
                if c & 4 != 0 {
                    gates.push(Gate(GateKind::Z, vars.clone()));
                }
                match c & 3 {
                    1 => gates.push(Gate(GateKind::T, vars.clone())),
                    2 => gates.push(Gate(GateKind::S, vars.clone())),
                    3 => {
                        gates.push(Gate(GateKind::S, vars.clone()));
                        gates.push(Gate(GateKind::T, vars.clone()));
                    }
                    _ => {}
                }
            }
            2 if c == 4 => gates.push(Gate(GateKind::CZ, vars.clone())),
            3 if c == 4 => gates.push(Gate(GateKind::CCZ, vars.clone())),
            _ => {
                return Err(Error::Invalid(format!(
                    "phase {c}π/4 on {vars:?} is outside the gate set"
                )))
            }
        }
    }
    Ok(gates)
}

/// `{"n": .., "gates": [["CCZ", [a, b, c]], ...]}`.
pub type CircuitJson = DiagonalCircuit;

/// One CCZ per tetrahedron on copy-1 `[v₀v₁]`, copy-2 `[v₁v₂]` and copy-3
/// `[v₂v₃]`, for the code `toric_code(K, 3)`.
pub fn ccz_circuit(k: &DeltaComplex) -> Result<DiagonalCircuit> {
    if k.dims() != 3 {
        return Err(Error::Dimension("CCZ circuit needs a 3-complex".into()));
    }
    let e = k.count(1);
    let mut c = DiagonalCircuit::new(3 * e);
    for [e0, e1, e2] in tet_edges(k) {
        c.push(GateKind::CCZ, &[e0, e + e1, 2 * e + e2]);
    }
    Ok(c)
}

/// One CZ per triangle of the 2-cycle z, on the copy-i front edge `[v₀v₁]` and
/// copy-j back edge `[v₁v₂]` (copies 1-based), for `toric_code(K, 3)`.
pub fn cz_membrane_circuit(k: &DeltaComplex, z: &BitVec, copies: (usize, usize)) -> Result<DiagonalCircuit> {
    if z.len() != k.count(2) {
        return Err(Error::Dimension("membrane is not a 2-chain".into()));
    }
    let b = k.boundary(2, z);
    if !b.is_zero() {
        return Err(Error::NotACycle {
            witness: b.to_indices(),
        });
    }
    cz_membrane_circuit_unchecked(k, z, copies)
}

/// [`cz_membrane_circuit`] without the cycle check, for fault injection.
pub fn cz_membrane_circuit_unchecked(
    k: &DeltaComplex,
    z: &BitVec,
    (ci, cj): (usize, usize),
) -> Result<DiagonalCircuit> {
    if !(1..=3).contains(&ci) || !(1..=3).contains(&cj) {
        return Err(Error::OutOfRange("copies are numbered 1 to 3".into()));
    }
    if k.dims() < 2 {
        return Err(Error::Dimension("membrane needs triangles".into()));
    }
    let e = k.count(1);
    let mut c = DiagonalCircuit::new(3 * e);
    for f in z.ones() {
        let front = k.face(2, f, 2);
        let back = k.face(2, f, 0);
        c.push(GateKind::CZ, &[(ci - 1) * e + front, (cj - 1) * e + back]);
    }
    Ok(c)
}

/// T on positive flags and T† on negative flags of a color code.
pub fn transversal_t(code: &CssCode) -> Result<DiagonalCircuit> {
    let signs = code
        .signs()
        .filter(|s| s.iter().all(|&x| x != 0))
        .ok_or_else(|| Error::Invalid("code carries no bipartition".into()))?;
    let mut c = DiagonalCircuit::new(code.n);
    for (q, s) in signs.into_iter().enumerate() {
        c.push(if s > 0 { GateKind::T } else { GateKind::Tdg }, &[q]);
    }
    Ok(c)
}

/// X_x U X_x U† = X-free part: the diagonal phase ω^{residual(z) + global}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralizedPauli {
    pub x_support: Vec<usize>,
    pub residual: PhasePolynomial,
    pub global_phase: u8,
}

/// Conjugation of a {Z, CZ, CCZ} circuit by X on `x`: the residual is
/// P(z ⊕ x) − P(z) with its constant split off.
pub fn conjugate_x(circuit: &DiagonalCircuit, x: &BitVec) -> Result<GeneralizedPauli> {
    if !circuit.is_sign_circuit() {
        return Err(Error::Invalid("conjugation engine takes Z, CZ and CCZ only".into()));
    }
    let p = circuit.phase_polynomial();
    let mut r = p.touching(x).shift(x);
    let global = r.constant();
    r.terms.remove(&Vec::new());
    Ok(GeneralizedPauli {
        x_support: x.to_indices(),
        residual: r,
        global_phase: global,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Verdict {
    Pass,
    Fail,
    /// Passed only the sufficient signed-overlap criterion.
    SufficientCriterion,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckFailure {
    /// Row of hx whose conjugation residual does not vanish.
    pub stabilizer: usize,
    pub residual: PhasePolynomial,
    /// A vector of ker hz on which the residual is nonzero.
    pub witness: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub method: String,
    pub stabilizers_checked: usize,
    pub failures: Vec<CheckFailure>,
}

fn ker_hz_basis(code: &CssCode) -> Vec<BitVec> {
    let mut b = Vec::new();
    let mut e = crate::gf2::Echelon::new(code.n);
    for r in code.hx.rows() {
        if e.insert(r.clone()) {
            b.push(r.clone());
        }
    }
    b.extend(code.logical_x.iter().cloned());
    b
}

/// Decides whether a diagonal circuit preserves the code space.
///
/// For each X check s the residual R(z) = P(z ⊕ s) − P(z) must vanish on
/// ker hz. Restricted to a basis of ker hz, R is a polynomial of degree at
/// most [`PhasePolynomial::restricted_degree_bound`] (≤ 3 for this gate set),
/// so it vanishes iff it vanishes on every basis subset of that size.
pub fn check_logical_gate(circuit: &DiagonalCircuit, code: &CssCode) -> Result<CheckReport> {
    circuit.validate()?;
    if circuit.n != code.n {
        return Err(Error::Dimension(format!(
            "circuit on {} qubits, code on {}",
            circuit.n, code.n
        )));
    }
    let p = circuit.phase_polynomial();
    let basis = ker_hz_basis(code);
    let failures: Vec<CheckFailure> = code
        .hx
        .rows()
        .par_iter()
        .enumerate()
        .filter_map(|(i, s)| {
            let r = p.touching(s).shift(s);
            if r.is_zero() {
                return None;
            }
            let d = r.restricted_degree_bound();
            for subset in subsets_up_to(basis.len(), d) {
                let mut z = BitVec::zeros(code.n);
                for &j in &subset {
                    z.xor_assign(&basis[j]);
                }
                if r.eval(&z) != 0 {
                    return Some(CheckFailure {
                        stabilizer: i,
                        residual: r,
                        witness: z.to_indices(),
                    });
                }
            }
            None
        })
        .collect();
    Ok(CheckReport {
        verdict: if failures.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        method: "polarization".into(),
        stabilizers_checked: code.hx.nrows(),
        failures,
    })
}

/// Sufficient condition for a signed transversal T layer ⊗ T^{σ_j}: for every
/// X check s and all b, b' in a basis of ker hz, Σ_{s} σ ≡ 0 (8),
/// Σ_{s∩b} σ ≡ 0 (4) and |s∩b∩b'| ≡ 0 (2).
pub fn signed_overlap_criterion(code: &CssCode, signs: &[i8]) -> bool {
    let basis = ker_hz_basis(code);
    let signed = |v: &BitVec| -> i64 { v.ones().map(|q| signs[q] as i64).sum() };
    code.hx.rows().iter().all(|s| {
        signed(s).rem_euclid(8) == 0
            && basis.iter().enumerate().all(|(i, b)| {
                let sb = s.and(b);
                signed(&sb).rem_euclid(4) == 0 && basis[i + 1..].iter().all(|b2| sb.overlap(b2) % 2 == 0)
            })
    })
}

/// A logical gate with the labels of the logical qubits it acts on.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LogicalGate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    pub labels: Vec<String>,
}

impl fmt::Display for LogicalGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind, self.labels.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalAction {
    /// Phase polynomial over the logical bits x, with |x̄⟩ ↦ ω^{poly(x)}|x̄⟩.
    pub poly: PhasePolynomial,
    pub gates: Vec<LogicalGate>,
}

impl LogicalAction {
    /// Gates of one kind as sorted label tuples.
    pub fn labeled(&self, kind: GateKind) -> Vec<Vec<String>> {
        let mut v: Vec<Vec<String>> = self
            .gates
            .iter()
            .filter(|g| g.kind == kind)
            .map(|g| g.labels.clone())
            .collect();
        v.sort();
        v
    }
}

/// The logical phase polynomial x ↦ P(Σ xᵢ logical_xᵢ) without its constant,
/// for a circuit that passes [`check_logical_gate`]. Unlike
/// [`extract_logical_action`] it also covers actions outside the gate set,
/// such as a logical controlled-S.
pub fn logical_phase_polynomial(circuit: &DiagonalCircuit, code: &CssCode) -> Result<PhasePolynomial> {
    let report = check_logical_gate(circuit, code)?;
    if report.verdict != Verdict::Pass {
        return Err(Error::CheckFailed(format!(
            "{} X checks do not commute with the circuit on the code space",
            report.failures.len()
        )));
    }
    let p = circuit.phase_polynomial();
    let d = p.restricted_degree_bound();
    let mut poly = p.restrict(&code.logical_x, d);
    poly.terms.remove(&Vec::new());
    Ok(poly)
}

/// Logical action of a circuit that passes [`check_logical_gate`]: the Möbius
/// coefficients of x ↦ P(Σ xᵢ logical_xᵢ) on logical subsets up to the degree
/// bound.
pub fn extract_logical_action(circuit: &DiagonalCircuit, code: &CssCode) -> Result<LogicalAction> {
    let poly = logical_phase_polynomial(circuit, code)?;
    let gates = polynomial_to_gates(&poly)
        .map_err(|e| Error::Invalid(format!("logical action not expressible: {e}")))?
        .into_iter()
        .map(|g| LogicalGate {
            kind: g.0,
            labels: g.1.iter().map(|&q| code.labels[q].to_string()).collect(),
            qubits: g.1,
        })
        .collect();
    Ok(LogicalAction { poly, gates })
}

/// Whether a code has toric-code copy structure with `copies` copies.
pub fn toric_copies(code: &CssCode) -> Option<usize> {
    match code.kind {
        CodeKind::Toric { copies, .. } => Some(copies),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{color_code, toric_code};
    use crate::complex::{build_sigma_g, build_torus3, build_torus3_grid, product_with_circle};
    use crate::cup::{coboundary, triple_cup_integral, Cochain};
    use crate::homology::labeled_basis;

    #[test]
    fn t3_ccz_shape() {
        let t = build_torus3();
        let c = ccz_circuit(&t).unwrap();
        assert_eq!((c.n, c.len()), (21, 6));
        let empty = DeltaComplex::new(3);
        assert!(ccz_circuit(&empty).unwrap().is_empty());
    }

    #[test]
    fn ccz_depth_is_constant_under_refinement() {
        let depths: Vec<usize> = (2..=4)
            .map(|l| ccz_circuit(&build_torus3_grid(l)).unwrap().depth())
            .collect();
        assert!(depths.iter().all(|&d| d == depths[0]), "{depths:?}");
    }

    #[test]
    fn t3_ccz_action_is_six_permutations() {
        let t = build_torus3();
        let code = toric_code(&t, 3).unwrap();
        let c = ccz_circuit(&t).unwrap();
        assert_eq!(check_logical_gate(&c, &code).unwrap().verdict, Verdict::Pass);
        let a = extract_logical_action(&c, &code).unwrap();
        assert_eq!(a.gates.len(), 6);
        assert!(a.gates.iter().all(|g| g.kind == GateKind::CCZ));
        let classes: Vec<Vec<String>> = a
            .gates
            .iter()
            .map(|g| {
                let mut v: Vec<String> = g.qubits.iter().map(|&q| code.labels[q].class.clone()).collect();
                v.sort();
                v
            })
            .collect();
        assert!(classes.iter().all(|v| v == &["axb", "axc", "bxc"]));
    }

    #[test]
    fn grid_ccz_passes_with_nontrivial_checks() {
        let k = build_torus3_grid(2);
        let code = toric_code(&k, 3).unwrap();
        assert!(code.hx.rank() > 0);
        let c = ccz_circuit(&k).unwrap();
        assert_eq!(check_logical_gate(&c, &code).unwrap().verdict, Verdict::Pass);
        let a = extract_logical_action(&c, &code).unwrap();
        assert_eq!(a.gates.len(), 6);
    }

    #[test]
    fn action_matches_triple_cup() {
        let k = build_torus3_grid(2);
        let code = toric_code(&k, 3).unwrap();
        let a = extract_logical_action(&ccz_circuit(&k).unwrap(), &code).unwrap();
        let basis = labeled_basis(&k).unwrap();
        let r = basis.len();
        let co = |i: usize| Cochain::from_values(1, basis.cocycles[i].clone());
        for i in 0..r {
            for j in 0..r {
                for l in 0..r {
                    let want = triple_cup_integral(&k, &co(i), &co(j), &co(l)).unwrap();
                    let got = a.poly.coefficient(&[i, r + j, 2 * r + l]);
                    assert_eq!(got, if want { 4 } else { 0 });
                }
            }
        }
    }

    #[test]
    fn conjugation_by_logical_gives_cup_layer() {
        let k = build_torus3_grid(2);
        let e = k.count(1);
        let basis = labeled_basis(&k).unwrap();
        let alpha = &basis.cocycles[0];
        let c = ccz_circuit(&k).unwrap();
        let x = BitVec::from_indices(3 * e, alpha.ones());
        let gp = conjugate_x(&c, &x).unwrap();
        let mut want = PhasePolynomial::zero(3 * e);
        for [e0, e1, e2] in tet_edges(&k) {
            if alpha.get(e0) {
                want.add_term(&[e + e1, 2 * e + e2], 4);
            }
        }
        assert_eq!(gp.residual, want);
        assert_eq!(gp.residual.degree(), 2);
    }

    #[test]
    fn stabilizer_residual_vanishes_on_cocycles() {
        let k = build_torus3_grid(2);
        let e = k.count(1);
        let c = ccz_circuit(&k).unwrap();
        let dv = coboundary(&k, &Cochain::indicator(&k, 0, 3));
        let x = BitVec::from_indices(3 * e, dv.values.ones());
        let gp = conjugate_x(&c, &x).unwrap();
        let basis = labeled_basis(&k).unwrap();
        for a in &basis.cocycles {
            for b in &basis.cocycles {
                let mut z = BitVec::zeros(3 * e);
                for i in a.ones() {
                    z.flip(e + i);
                }
                for i in b.ones() {
                    z.flip(2 * e + i);
                }
                assert_eq!(gp.residual.eval(&z), 0);
            }
        }
    }

    #[test]
    fn conjugation_rejects_t_gates() {
        let mut c = DiagonalCircuit::new(2);
        c.push(GateKind::T, &[0]);
        assert!(conjugate_x(&c, &BitVec::unit(2, 0)).is_err());
    }

    #[test]
    fn membrane_counts_and_zero() {
        let t = build_torus3();
        let z = t.cycle("axb").unwrap().support.clone();
        let c = cz_membrane_circuit(&t, &z, (1, 2)).unwrap();
        assert_eq!(c.len(), z.count_ones());
        let zero = BitVec::zeros(t.count(2));
        assert!(cz_membrane_circuit(&t, &zero, (1, 2)).unwrap().is_empty());
    }

    #[test]
    fn open_membrane_fails() {
        let k = build_torus3_grid(2);
        let z = BitVec::unit(k.count(2), 0);
        match cz_membrane_circuit(&k, &z, (1, 2)) {
            Err(Error::NotACycle { witness }) => assert_eq!(witness.len(), 3),
            other => panic!("{other:?}"),
        }
        let code = toric_code(&k, 3).unwrap();
        let c = cz_membrane_circuit_unchecked(&k, &z, (1, 2)).unwrap();
        let r = check_logical_gate(&c, &code).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(!r.failures.is_empty());
    }

    #[test]
    fn membrane_route_matches_triple_route() {
        // CZ on α between copies (2,3) acts like CCZ with copy 1 fixed to α's dual.
        let k = build_torus3_grid(2);
        let code = toric_code(&k, 3).unwrap();
        let basis = labeled_basis(&k).unwrap();
        let r = basis.len();
        for (ai, alpha) in basis.membranes.iter().enumerate() {
            let cz = cz_membrane_circuit(&k, alpha, (2, 3)).unwrap();
            let a = extract_logical_action(&cz, &code).unwrap();
            let full = extract_logical_action(&ccz_circuit(&k).unwrap(), &code).unwrap();
            for j in 0..r {
                for l in 0..r {
                    assert_eq!(
                        a.poly.coefficient(&[r + j, 2 * r + l]),
                        full.poly.coefficient(&[ai, r + j, 2 * r + l])
                    );
                }
            }
        }
    }

    #[test]
    fn quasi_hyperbolic_cz() {
        let k = product_with_circle(&build_sigma_g(2).unwrap(), 1).unwrap();
        let code = toric_code(&k, 3).unwrap();
        let z = k.cycle("a(1)xc").unwrap().support.clone();
        let a = extract_logical_action(&cz_membrane_circuit(&k, &z, (1, 2)).unwrap(), &code).unwrap();
        assert_eq!(
            a.labeled(GateKind::CZ),
            vec![
                vec!["(Sigma_2;1)".to_string(), "(b(1)xc;2)".to_string()],
                vec!["(b(1)xc;1)".to_string(), "(Sigma_2;2)".to_string()],
            ]
        );
    }

    #[test]
    fn transversal_t_on_color_code() {
        let code = color_code(&build_torus3()).unwrap();
        let t = transversal_t(&code).unwrap();
        assert_eq!(t.len(), 144);
        let counts = t.counts();
        assert_eq!(counts[&GateKind::T], 72);
        assert_eq!(counts[&GateKind::Tdg], 72);
        let twice = t.then(&t).phase_polynomial();
        let mut s = DiagonalCircuit::new(144);
        for g in &t.gates {
            s.push(if g.0 == GateKind::T { GateKind::S } else { GateKind::Sdg }, &g.1);
        }
        assert_eq!(twice, s.phase_polynomial());
    }

    #[test]
    fn color_bipartition_respects_adjacency() {
        let t = build_torus3();
        let code = color_code(&t).unwrap();
        let signs = code.signs().unwrap();
        let sd = crate::complex::barycentric_subdivide(&t).complex;
        let mut owners = vec![Vec::new(); sd.count(2)];
        for tet in 0..sd.count(3) {
            for i in 0..4 {
                owners[sd.face(3, tet, i)].push(tet);
            }
        }
        for o in owners {
            assert_eq!(o.len(), 2);
            assert_ne!(signs[o[0]], signs[o[1]]);
        }
    }

    #[test]
    fn circuit_json_format() {
        let mut c = DiagonalCircuit::new(3);
        c.push(GateKind::CCZ, &[0, 1, 2]);
        c.push(GateKind::Sdg, &[1]);
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(text, r#"{"n":3,"gates":[["CCZ",[0,1,2]],["SDG",[1]]]}"#);
        let back: DiagonalCircuit = serde_json::from_str(r#"{"n":3,"gates":[["S†",[1]]]}"#).unwrap();
        assert_eq!(back.gates[0].0, GateKind::Sdg);
    }

    #[test]
    fn gates_from_polynomial() {
        let mut p = PhasePolynomial::zero(3);
        p.add_term(&[0], 3);
        p.add_term(&[1, 2], 4);
        let g = polynomial_to_gates(&p).unwrap();
        assert_eq!(g.len(), 3);
        p.add_term(&[0, 1], 2);
        assert!(polynomial_to_gates(&p).is_err());
    }
}
