use super::{DiagonalCircuit, PhasePolynomial, Verdict};
use crate::codes::CssCode;
use crate::gf2::{BitVec, Echelon};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::str::FromStr;

/// Largest coset-support dimension the simulator accepts.
pub const MAX_SUPPORT_DIM: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QubitState {
    Zero,
    One,
    Plus,
}

/// Per-logical-qubit product state, written as a string over `0`, `1`, `+`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalStateSpec(pub Vec<QubitState>);

impl LogicalStateSpec {
    pub fn all_plus(k: usize) -> Self {
        LogicalStateSpec(vec![QubitState::Plus; k])
    }

    pub fn all_zero(k: usize) -> Self {
        LogicalStateSpec(vec![QubitState::Zero; k])
    }
}

impl FromStr for LogicalStateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(QubitState::Zero),
                '1' => Ok(QubitState::One),
                '+' => Ok(QubitState::Plus),
                _ => Err(Error::Invalid(format!("state letter {c:?}"))),
            })
            .collect::<Result<_>>()
            .map(LogicalStateSpec)
    }
}

/// A uniform-magnitude state Σ ω^{phase}|z⟩ over a support set, sorted by z.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseState {
    pub n: usize,
    pub entries: Vec<(Vec<usize>, u8)>,
}

impl SparseState {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The global phase g with self = ω^g · other, if the states agree up
    /// to a global phase.
    pub fn global_phase_to(&self, other: &SparseState) -> Option<u8> {
        if self.n != other.n || self.entries.len() != other.entries.len() {
            return None;
        }
        let mut g = None;
        for ((za, pa), (zb, pb)) in self.entries.iter().zip(&other.entries) {
            if za != zb {
                return None;
            }
            let d = (8 + pa - pb) % 8;
            match g {
                None => g = Some(d),
                Some(x) if x != d => return None,
                _ => {}
            }
        }
        Some(g.unwrap_or(0))
    }

    pub fn equal_up_to_global_phase(&self, other: &SparseState) -> bool {
        self.global_phase_to(other).is_some()
    }
}

/// Base vector and generators of the coset support of a logical state.
fn support(code: &CssCode, spec: &LogicalStateSpec) -> Result<(BitVec, Vec<BitVec>)> {
    if spec.0.len() != code.logical_x.len() {
        return Err(Error::Dimension(format!(
            "state on {} logical qubits, code has {}",
            spec.0.len(),
            code.logical_x.len()
        )));
    }
    let mut base = BitVec::zeros(code.n);
    let mut gens = Vec::new();
    for (s, l) in spec.0.iter().zip(&code.logical_x) {
        match s {
            QubitState::One => base.xor_assign(l),
            QubitState::Plus => gens.push(l.clone()),
            QubitState::Zero => {}
        }
    }
    let mut e = Echelon::new(code.n);
    for r in code.hx.rows() {
        if e.insert(r.clone()) {
            gens.push(r.clone());
        }
    }
    if gens.len() > MAX_SUPPORT_DIM {
        return Err(Error::TooLarge(format!(
            "coset support of dimension {} exceeds {MAX_SUPPORT_DIM}",
            gens.len()
        )));
    }
    Ok((base, gens))
}

/// Visits base + every combination of gens in Gray-code order, passing the
/// current vector and the index of the generator just flipped.
fn gray_walk(base: &BitVec, gens: &[BitVec], mut visit: impl FnMut(&BitVec, Option<usize>)) {
    let mut cur = base.clone();
    visit(&cur, None);
    for step in 1u64..1 << gens.len() {
        let j = step.trailing_zeros() as usize;
        cur.xor_assign(&gens[j]);
        visit(&cur, Some(j));
    }
}

/// Phase of P tracked incrementally along a Gray walk.
struct Tracker {
    parts: Vec<PhasePolynomial>,
    value: u8,
}

impl Tracker {
    fn new(p: &PhasePolynomial, gens: &[BitVec], start: &BitVec) -> Self {
        Tracker {
            parts: gens.iter().map(|g| p.touching(g)).collect(),
            value: p.eval(start),
        }
    }

    fn step(&mut self, j: usize, after: &BitVec, gen: &BitVec) {
        let before = after.xor(gen);
        let d = 8 + self.parts[j].eval(after) - self.parts[j].eval(&before);
        self.value = (self.value + d) % 8;
    }
}

fn collect_state(n: usize, mut entries: Vec<(Vec<usize>, u8)>) -> SparseState {
    entries.sort();
    SparseState { n, entries }
}

/// Exact state after applying the circuit to a logical product state.
pub fn coset_simulate(circuit: &DiagonalCircuit, code: &CssCode, spec: &LogicalStateSpec) -> Result<SparseState> {
    circuit.validate()?;
    let (base, gens) = support(code, spec)?;
    let p = circuit.phase_polynomial();
    let mut t = Tracker::new(&p, &gens, &base);
    let mut entries = Vec::with_capacity(1 << gens.len());
    gray_walk(&base, &gens, |z, j| {
        if let Some(j) = j {
            t.step(j, z, &gens[j]);
        }
        entries.push((z.to_indices(), t.value));
    });
    Ok(collect_state(code.n, entries))
}

/// The encoded logical state after applying the logical phase polynomial at
/// the logical level: phase poly(x(z)) on each z of the coset support.
pub fn encode_logical_state(code: &CssCode, spec: &LogicalStateSpec, logical: &PhasePolynomial) -> Result<SparseState> {
    let (base, gens) = support(code, spec)?;
    let mut entries = Vec::with_capacity(1 << gens.len());
    gray_walk(&base, &gens, |z, _| {
        entries.push((z.to_indices(), logical.eval(&code.x_class(z))));
    });
    Ok(collect_state(code.n, entries))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhaustiveResult {
    pub verdict: Verdict,
    /// P on the representative Σ xᵢ logical_xᵢ of each logical basis state x,
    /// indexed by x as a little-endian integer; empty unless the verdict is Pass.
    pub logical_phases: Vec<u8>,
    pub enumerated: u64,
}

impl ExhaustiveResult {
    /// Möbius transform of the logical phase table.
    pub fn logical_polynomial(&self) -> PhasePolynomial {
        let k = self.logical_phases.len().trailing_zeros() as usize;
        let mut c: Vec<i32> = self.logical_phases.iter().map(|&v| v as i32).collect();
        for bit in 0..k {
            for m in 0..c.len() {
                if m >> bit & 1 == 1 {
                    c[m] -= c[m ^ (1 << bit)];
                }
            }
        }
        let mut p = PhasePolynomial::zero(k);
        for (m, v) in c.into_iter().enumerate() {
            if m != 0 {
                let vars: Vec<usize> = (0..k).filter(|b| m >> b & 1 == 1).collect();
                p.add_term(&vars, v.rem_euclid(8) as u8);
            }
        }
        p
    }
}

/// Checks by enumeration that the circuit's phase is constant on every coset
/// x + rowspace(hx), x ∈ span(logical_x).
pub fn exhaustive_check(circuit: &DiagonalCircuit, code: &CssCode, budget: u64) -> Result<ExhaustiveResult> {
    circuit.validate()?;
    let k = code.logical_x.len();
    let mut e = Echelon::new(code.n);
    let stabs: Vec<BitVec> = code
        .hx
        .rows()
        .iter()
        .filter(|r| e.insert((*r).clone()))
        .cloned()
        .collect();
    let dim = k + stabs.len();
    if dim >= 63 || 1u64 << dim > budget {
        return Err(Error::TooLarge(format!("2^{dim} vectors exceed the budget")));
    }
    let p = circuit.phase_polynomial();
    let mut phases = Vec::with_capacity(1 << k);
    let mut ok = true;
    for x in 0u64..1 << k {
        let mut base = BitVec::zeros(code.n);
        for (i, l) in code.logical_x.iter().enumerate() {
            if x >> i & 1 == 1 {
                base.xor_assign(l);
            }
        }
        let mut t = Tracker::new(&p, &stabs, &base);
        let first = t.value;
        gray_walk(&base, &stabs, |z, j| {
            if let Some(j) = j {
                t.step(j, z, &stabs[j]);
                if t.value != first {
                    ok = false;
                }
            }
        });
        phases.push(first);
    }
    let zero = phases[0];
    Ok(ExhaustiveResult {
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        logical_phases: if ok {
            phases.iter().map(|&v| (8 + v - zero) % 8).collect()
        } else {
            Vec::new()
        },
        enumerated: 1 << dim,
    })
}
