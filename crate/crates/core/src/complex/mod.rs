//! Δ-complexes (semi-simplicial sets) with per-simplex vertex order.
//!
//! A simplex is known only through its face maps: `face(n, σ, i)` is the
//! (n−1)-simplex obtained by deleting vertex position `i`. One-vertex models
//! of T³ and Σ_g are legal, so nothing here assumes a simplex is determined
//! by its vertex set. Builders attach human-readable labels and named cycles
//! (`a(1)`, `b(2)xc`, `Sigma_2`, ...) that survive products, mapping tori and
//! subdivision, so downstream reports can name logical operators.

mod builders;
mod iso;
mod json;
mod subdivide;

pub use builders::{
    build_sigma_g, build_sigma_g_coned, build_torus3, build_torus3_grid, circle, cyclic_cover, extend_cocycle_mod,
    handle_rotation, mapping_torus, product_with_circle, CyclicCover,
};
pub use iso::find_isomorphism;
pub use json::{ComplexJson, CycleJson, SimplexJson};
pub use subdivide::{barycentric_subdivide, Subdivision};

use crate::gf2::{BitMatrix, BitVec};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// A chain of fixed dimension carried by a builder under a readable name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedCycle {
    pub dim: usize,
    pub label: String,
    pub support: BitVec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaComplex {
    name: Option<String>,
    counts: Vec<usize>,
    // faces[n] is flat with stride n+1; faces[0] is empty.
    faces: Vec<Vec<usize>>,
    labels: Vec<Vec<Option<String>>>,
    cycles: Vec<NamedCycle>,
}

impl DeltaComplex {
    pub fn new(dims: usize) -> Self {
        DeltaComplex {
            name: None,
            counts: vec![0; dims + 1],
            faces: vec![Vec::new(); dims + 1],
            labels: vec![Vec::new(); dims + 1],
            cycles: Vec::new(),
        }
    }

    /// Appends an n-simplex with the given faces and returns its index.
    /// Faces are not checked here; see [`DeltaComplex::validate`].
    pub fn push_simplex(&mut self, dim: usize, faces: &[usize], label: Option<String>) -> usize {
        assert!(dim < self.counts.len(), "dimension {dim} exceeds complex");
        let expected = if dim == 0 { 0 } else { dim + 1 };
        assert_eq!(faces.len(), expected, "an {dim}-simplex has {expected} faces");
        self.faces[dim].extend_from_slice(faces);
        self.labels[dim].push(label);
        self.counts[dim] += 1;
        self.counts[dim] - 1
    }

    pub fn dims(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn count(&self, n: usize) -> usize {
        self.counts.get(n).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = Some(name.into());
    }

    #[inline]
    pub fn face(&self, n: usize, sigma: usize, i: usize) -> usize {
        self.faces[n][sigma * (n + 1) + i]
    }

    #[inline]
    pub fn faces_of(&self, n: usize, sigma: usize) -> &[usize] {
        &self.faces[n][sigma * (n + 1)..(sigma + 1) * (n + 1)]
    }

    #[cfg(test)]
    pub(crate) fn faces_mut(&mut self, n: usize) -> &mut Vec<usize> {
        &mut self.faces[n]
    }

    pub fn label(&self, n: usize, sigma: usize) -> Option<&str> {
        self.labels[n][sigma].as_deref()
    }

    pub fn set_label(&mut self, n: usize, sigma: usize, label: Option<String>) {
        self.labels[n][sigma] = label;
    }

    pub fn cycles(&self) -> &[NamedCycle] {
        &self.cycles
    }

    pub fn cycles_of_dim(&self, dim: usize) -> impl Iterator<Item = &NamedCycle> {
        self.cycles.iter().filter(move |c| c.dim == dim)
    }

    pub fn cycle(&self, label: &str) -> Option<&NamedCycle> {
        self.cycles.iter().find(|c| c.label == label)
    }

    pub fn add_cycle(&mut self, dim: usize, label: impl Into<String>, support: BitVec) {
        assert_eq!(support.len(), self.count(dim), "cycle support length");
        self.cycles.push(NamedCycle {
            dim,
            label: label.into(),
            support,
        });
    }

    pub fn clear_cycles(&mut self) {
        self.cycles.clear();
    }

    /// The face of `sigma` spanned by the given (increasing) vertex positions.
    pub fn sub_simplex(&self, n: usize, sigma: usize, positions: &[usize]) -> usize {
        debug_assert!(positions.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(positions.last().is_none_or(|&p| p <= n));
        let mut dim = n;
        let mut cur = sigma;
        // Delete the unwanted positions from the top down so lower positions
        // keep their meaning.
        for p in (0..=n).rev() {
            if positions.binary_search(&p).is_err() {
                cur = self.face(dim, cur, p);
                dim -= 1;
            }
        }
        cur
    }

    /// Vertex at position `j` of an n-simplex.
    pub fn vertex(&self, n: usize, sigma: usize, j: usize) -> usize {
        self.sub_simplex(n, sigma, &[j])
    }

    pub fn vertices(&self, n: usize, sigma: usize) -> Vec<usize> {
        (0..=n).map(|j| self.vertex(n, sigma, j)).collect()
    }

    /// Edge between vertex positions `i < j` of an n-simplex.
    pub fn edge(&self, n: usize, sigma: usize, i: usize, j: usize) -> usize {
        self.sub_simplex(n, sigma, &[i, j])
    }

    /// Rows are n-simplices, each holding its GF(2) boundary over (n−1)-simplices.
    /// This is ∂_nᵀ, which is also the coboundary δ^{n−1}.
    pub fn boundary_rows(&self, n: usize) -> BitMatrix {
        assert!(n >= 1 && n <= self.dims(), "no boundary map in dimension {n}");
        let rows = (0..self.count(n))
            .map(|s| BitVec::from_indices(self.count(n - 1), self.faces_of(n, s).iter().copied()))
            .collect();
        BitMatrix::from_rows(self.count(n - 1), rows)
    }

    /// The boundary matrix ∂_n with rows (n−1)-simplices and columns n-simplices.
    pub fn boundary_matrix(&self, n: usize) -> BitMatrix {
        self.boundary_rows(n).transpose()
    }

    /// GF(2) boundary of an n-chain.
    pub fn boundary(&self, n: usize, chain: &BitVec) -> BitVec {
        assert_eq!(chain.len(), self.count(n), "chain length");
        let mut out = BitVec::zeros(if n == 0 { 0 } else { self.count(n - 1) });
        if n == 0 {
            return out;
        }
        for s in chain.ones() {
            for &f in self.faces_of(n, s) {
                out.flip(f);
            }
        }
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(n, &c)| if n % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// The sum of all top simplices as a GF(2) chain.
    pub fn top_chain(&self) -> BitVec {
        let n = self.dims();
        BitVec::from_indices(self.count(n), 0..self.count(n))
    }

    /// Whether the sum of all top simplices is a GF(2) cycle, i.e. integration
    /// over all top simplices is a valid fundamental class.
    pub fn has_fundamental_cycle(&self) -> bool {
        let n = self.dims();
        n == 0 || self.boundary(n, &self.top_chain()).is_zero()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for n in 1..=self.dims() {
            for s in 0..self.count(n) {
                for (i, &f) in self.faces_of(n, s).iter().enumerate() {
                    if f >= self.count(n - 1) {
                        violations.push(Violation::FaceOutOfRange {
                            dim: n,
                            simplex: s,
                            slot: i,
                            value: f,
                        });
                    }
                }
            }
        }
        if !violations.is_empty() {
            return ValidationReport { violations };
        }
        for n in 2..=self.dims() {
            for s in 0..self.count(n) {
                for j in 1..=n {
                    for i in 0..j {
                        let lhs = self.face(n - 1, self.face(n, s, j), i);
                        let rhs = self.face(n - 1, self.face(n, s, i), j - 1);
                        if lhs != rhs {
                            violations.push(Violation::SimplicialIdentity {
                                dim: n,
                                simplex: s,
                                i,
                                j,
                            });
                        }
                    }
                }
            }
            let dd = self.boundary_rows(n).mul(&self.boundary_rows(n - 1));
            for (s, row) in dd.rows().iter().enumerate() {
                if !row.is_zero() {
                    violations.push(Violation::BoundaryNotClosed { dim: n, simplex: s });
                }
            }
        }
        for c in &self.cycles {
            let malformed = c.dim > self.dims() || c.support.len() != self.count(c.dim);
            if malformed || (c.dim > 0 && !self.boundary(c.dim, &c.support).is_zero()) {
                violations.push(Violation::NamedCycle { label: c.label.clone() });
            }
        }
        ValidationReport { violations }
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        match report.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidComplex(format!(
                "{} violation(s), first: {v}",
                report.violations.len()
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    FaceOutOfRange {
        dim: usize,
        simplex: usize,
        slot: usize,
        value: usize,
    },
    SimplicialIdentity {
        dim: usize,
        simplex: usize,
        i: usize,
        j: usize,
    },
    BoundaryNotClosed {
        dim: usize,
        simplex: usize,
    },
    NamedCycle {
        label: String,
    },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::FaceOutOfRange {
                dim,
                simplex,
                slot,
                value,
            } => write!(f, "{dim}-simplex {simplex}: face {slot} = {value} out of range"),
            Violation::SimplicialIdentity { dim, simplex, i, j } => {
                write!(f, "{dim}-simplex {simplex}: d_{i} d_{j} != d_{} d_{i}", j - 1)
            }
            Violation::BoundaryNotClosed { dim, simplex } => {
                write!(f, "{dim}-simplex {simplex}: boundary of boundary is nonzero")
            }
            Violation::NamedCycle { label } => write!(f, "named cycle {label} is not a cycle"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A dimension-wise map of simplices that commutes with face maps.
///
/// Used for automorphisms (mapping-torus twists, deck transformations),
/// isomorphisms, and projections such as covering maps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialMap {
    pub perm: Vec<Vec<usize>>,
}

pub type SimplicialAutomorphism = SimplicialMap;

impl SimplicialMap {
    pub fn identity(k: &DeltaComplex) -> Self {
        SimplicialMap {
            perm: (0..=k.dims()).map(|n| (0..k.count(n)).collect()).collect(),
        }
    }

    #[inline]
    pub fn apply(&self, n: usize, sigma: usize) -> usize {
        self.perm[n][sigma]
    }

    pub fn apply_chain(&self, n: usize, chain: &BitVec, target_count: usize) -> BitVec {
        let mut out = BitVec::zeros(target_count);
        for s in chain.ones() {
            out.flip(self.apply(n, s));
        }
        out
    }

    pub fn compose(&self, first: &SimplicialMap) -> SimplicialMap {
        SimplicialMap {
            perm: first
                .perm
                .iter()
                .enumerate()
                .map(|(n, p)| p.iter().map(|&s| self.perm[n][s]).collect())
                .collect(),
        }
    }

    pub fn power(&self, e: usize, k: &DeltaComplex) -> SimplicialMap {
        let mut out = SimplicialMap::identity(k);
        for _ in 0..e {
            out = self.compose(&out);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().all(|p| p.iter().enumerate().all(|(i, &j)| i == j))
    }

    /// Checks that this is a simplicial map `from → to` (faces commute).
    pub fn check_map(&self, from: &DeltaComplex, to: &DeltaComplex) -> Result<()> {
        if self.perm.len() != from.dims() + 1 || from.dims() != to.dims() {
            return Err(Error::InvalidMap("dimension mismatch".into()));
        }
        for n in 0..=from.dims() {
            if self.perm[n].len() != from.count(n) {
                return Err(Error::InvalidMap(format!("wrong length in dimension {n}")));
            }
            if let Some(&bad) = self.perm[n].iter().find(|&&s| s >= to.count(n)) {
                return Err(Error::InvalidMap(format!("{n}-simplex image {bad} out of range")));
            }
        }
        for n in 1..=from.dims() {
            for s in 0..from.count(n) {
                for i in 0..=n {
                    let lhs = self.perm[n - 1][from.face(n, s, i)];
                    let rhs = to.face(n, self.perm[n][s], i);
                    if lhs != rhs {
                        return Err(Error::InvalidMap(format!(
                            "does not commute with face {i} of {n}-simplex {s}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks that this is a simplicial automorphism of `k`.
    pub fn check_automorphism(&self, k: &DeltaComplex) -> Result<()> {
        self.check_map(k, k)?;
        for (n, p) in self.perm.iter().enumerate() {
            let mut seen = vec![false; p.len()];
            for &s in p {
                if std::mem::replace(&mut seen[s], true) {
                    return Err(Error::InvalidMap(format!("not bijective in dimension {n}")));
                }
            }
        }
        Ok(())
    }

    pub fn inverse(&self) -> SimplicialMap {
        SimplicialMap {
            perm: self
                .perm
                .iter()
                .map(|p| {
                    let mut inv = vec![0; p.len()];
                    for (i, &j) in p.iter().enumerate() {
                        inv[j] = i;
                    }
                    inv
                })
                .collect(),
        }
    }
}

/// A coherent integer orientation of the top simplices, if one exists.
///
/// Returns signs ε(σ) ∈ {±1} with Σ ε(σ)·∂σ = 0 over Z, where ∂ uses the
/// alternating signs (−1)^i. Requires every codimension-one simplex to have
/// exactly two incidences.
pub fn coherent_orientation(k: &DeltaComplex) -> Option<Vec<i8>> {
    let n = k.dims();
    if n == 0 {
        return Some(vec![1; k.count(0)]);
    }
    let mut incid: Vec<Vec<(usize, usize)>> = vec![Vec::new(); k.count(n - 1)];
    for s in 0..k.count(n) {
        for i in 0..=n {
            incid[k.face(n, s, i)].push((s, i));
        }
    }
    if incid.iter().any(|v| v.len() != 2) {
        return None;
    }
    let mut sign = vec![0i8; k.count(n)];
    for start in 0..k.count(n) {
        if sign[start] != 0 {
            continue;
        }
        sign[start] = 1;
        let mut stack = vec![start];
        while let Some(s) = stack.pop() {
            for i in 0..=n {
                let f = k.face(n, s, i);
                let [(s1, i1), (s2, i2)] = [incid[f][0], incid[f][1]];
                let (other, oi, mine) = if (s1, i1) == (s, i) { (s2, i2, i1) } else { (s1, i1, i2) };
                // ε(s)(−1)^mine + ε(other)(−1)^oi = 0
                let parity = if (mine + oi) % 2 == 0 { -1 } else { 1 };
                let want = sign[s] * parity;
                if sign[other] == 0 {
                    sign[other] = want;
                    stack.push(other);
                } else if sign[other] != want {
                    return None;
                }
            }
        }
    }
    Some(sign)
}
