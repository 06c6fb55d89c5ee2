//! CSS codes built from Δ-complexes: copies of the toric code with qubits on
//! edges, and the color code on the flags of a barycentric subdivision.

mod distance;

pub use distance::{distance, distance_x, distance_z, DistanceMethod, DistanceReport, DistanceStatus, SectorDistance};

use crate::complex::{barycentric_subdivide, coherent_orientation, DeltaComplex};
use crate::gf2::{BitMatrix, BitVec, Echelon};
use crate::homology::labeled_basis;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Where a physical qubit comes from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum QubitMeta {
    /// Edge `edge` of toric-code copy `copy` (1-based).
    Edge {
        copy: usize,
        edge: usize,
    },
    /// A top simplex of the subdivision: its chain of original cells
    /// `(dim, index)` and its bipartition sign.
    Flag {
        cells: Vec<(usize, usize)>,
        sign: i8,
    },
    Plain,
}

/// Name of a logical qubit: a homology class and a copy (0 when the code has
/// no copy structure).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LogicalLabel {
    pub class: String,
    pub copy: usize,
}

impl fmt::Display for LogicalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.copy == 0 {
            write!(f, "{}", self.class)
        } else {
            write!(f, "({};{})", self.class, self.copy)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CodeKind {
    Toric { copies: usize, edges: usize },
    Color,
    Custom,
}

/// A CSS code with X checks `hx`, Z checks `hz` and dual logical bases:
/// `logical_x[i]·logical_z[j] = δ_ij`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CssCode {
    pub n: usize,
    pub hx: BitMatrix,
    pub hz: BitMatrix,
    pub logical_x: Vec<BitVec>,
    pub logical_z: Vec<BitVec>,
    pub labels: Vec<LogicalLabel>,
    pub meta: Vec<QubitMeta>,
    pub kind: CodeKind,
}

impl CssCode {
    /// Builds a code from its checks, computing canonical logical bases.
    pub fn from_checks(hx: BitMatrix, hz: BitMatrix) -> Result<CssCode> {
        let n = hx.ncols();
        if hz.ncols() != n {
            return Err(Error::Dimension("hx and hz widths differ".into()));
        }
        if !hx.mul(&hz.transpose()).is_zero() {
            return Err(Error::Invalid("checks do not commute".into()));
        }
        let (logical_x, logical_z) = css_logicals(&hx, &hz);
        let labels = (0..logical_x.len())
            .map(|i| LogicalLabel {
                class: format!("L{i}"),
                copy: 0,
            })
            .collect();
        Ok(CssCode {
            n,
            hx,
            hz,
            logical_x,
            logical_z,
            labels,
            meta: vec![QubitMeta::Plain; n],
            kind: CodeKind::Custom,
        })
    }

    /// k = n − rank hx − rank hz.
    pub fn k(&self) -> usize {
        self.n - self.hx.rank() - self.hz.rank()
    }

    pub fn label_index(&self, class: &str, copy: usize) -> Option<usize> {
        self.labels.iter().position(|l| l.class == class && l.copy == copy)
    }

    /// GF(2) pairing matrix `logical_x[i]·logical_z[j]`.
    pub fn pairing(&self) -> BitMatrix {
        let k = self.logical_x.len();
        let mut m = BitMatrix::zeros(k, self.logical_z.len());
        for i in 0..k {
            for j in 0..self.logical_z.len() {
                m.set(i, j, self.logical_x[i].dot(&self.logical_z[j]));
            }
        }
        m
    }

    /// Checks commutation of checks and logicals, the pairing, and k.
    pub fn verify(&self) -> Result<()> {
        if !self.hx.mul(&self.hz.transpose()).is_zero() {
            return Err(Error::CheckFailed("hx·hzᵀ ≠ 0".into()));
        }
        for (i, x) in self.logical_x.iter().enumerate() {
            if !self.hz.mul_vec(x).is_zero() {
                return Err(Error::CheckFailed(format!("logical X {i} violates a Z check")));
            }
        }
        for (i, z) in self.logical_z.iter().enumerate() {
            if !self.hx.mul_vec(z).is_zero() {
                return Err(Error::CheckFailed(format!("logical Z {i} violates an X check")));
            }
        }
        if self.pairing() != BitMatrix::identity(self.logical_x.len()) {
            return Err(Error::CheckFailed("logical pairing is not the identity".into()));
        }
        if self.logical_x.len() != self.k() {
            return Err(Error::CheckFailed(format!(
                "{} logicals for k = {}",
                self.logical_x.len(),
                self.k()
            )));
        }
        Ok(())
    }

    /// Logical class of an X-type operator in ker hz: bit i is set when the
    /// operator contains logical_x[i].
    pub fn x_class(&self, x: &BitVec) -> BitVec {
        BitVec::from_bools(&self.logical_z.iter().map(|z| z.dot(x)).collect::<Vec<_>>())
    }

    pub fn z_class(&self, z: &BitVec) -> BitVec {
        BitVec::from_bools(&self.logical_x.iter().map(|x| x.dot(z)).collect::<Vec<_>>())
    }

    /// Largest row weights of hx and hz.
    pub fn max_check_weights(&self) -> (usize, usize) {
        let w = |m: &BitMatrix| m.rows().iter().map(BitVec::count_ones).max().unwrap_or(0);
        (w(&self.hx), w(&self.hz))
    }

    /// Bipartition signs of a color code's qubits.
    pub fn signs(&self) -> Option<Vec<i8>> {
        self.meta
            .iter()
            .map(|m| match m {
                QubitMeta::Flag { sign, .. } => Some(*sign),
                _ => None,
            })
            .collect()
    }
}

/// Canonical logical bases: X representatives completing rowspace(hx) inside
/// ker hz, and Z representatives dual to them.
pub fn css_logicals(hx: &BitMatrix, hz: &BitMatrix) -> (Vec<BitVec>, Vec<BitVec>) {
    let reps = |checks: &BitMatrix, stabs: &BitMatrix| {
        let mut image = Echelon::new(checks.ncols());
        for r in stabs.rows() {
            image.insert(r.clone());
        }
        let base = image.clone();
        checks
            .kernel()
            .into_iter()
            .filter(|v| image.insert(v.clone()))
            .map(|v| base.reduce(&v))
            .collect::<Vec<_>>()
    };
    let xs = reps(hz, hx);
    let zs = reps(hx, hz);
    let k = xs.len();
    let mut p = BitMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            p.set(i, j, xs[i].dot(&zs[j]));
        }
    }
    let inv = p.inverse().expect("logical pairing is nondegenerate");
    // New z_j = Σ_l inv[l][j] z_l gives xs·zs' = P·inv = I.
    let inv_t = inv.transpose();
    let zs = (0..k)
        .map(|j| {
            let mut z = BitVec::zeros(hx.ncols());
            for l in inv_t.row(j).ones() {
                z.xor_assign(&zs[l]);
            }
            z
        })
        .collect();
    (xs, zs)
}

fn block_diagonal(block: &BitMatrix, copies: usize) -> BitMatrix {
    let w = block.ncols();
    let mut rows = Vec::with_capacity(block.nrows() * copies);
    for c in 0..copies {
        for r in block.rows() {
            rows.push(BitVec::from_indices(w * copies, r.ones().map(|e| c * w + e)));
        }
    }
    BitMatrix::from_rows(w * copies, rows)
}

/// `copies` identical toric codes on K: qubit `copy·E + e` sits on edge e of
/// the copy; X checks are vertex coboundaries, Z checks triangle boundaries.
/// Logical qubit `copy·r + i` is X̄ on the dual cocycle of membrane i.
pub fn toric_code(k: &DeltaComplex, copies: usize) -> Result<CssCode> {
    if !(1..=3).contains(&copies) {
        return Err(Error::OutOfRange(format!("{copies} copies (1 to 3 supported)")));
    }
    if k.dims() < 2 {
        return Err(Error::Dimension("toric code needs dimension 2 or 3".into()));
    }
    let e = k.count(1);
    let hx = block_diagonal(&k.boundary_matrix(1), copies);
    let hz = block_diagonal(&k.boundary_rows(2), copies);
    let basis = labeled_basis(k)?;
    let lift = |v: &BitVec, c: usize| BitVec::from_indices(e * copies, v.ones().map(|i| c * e + i));
    let mut logical_x = Vec::new();
    let mut logical_z = Vec::new();
    let mut labels = Vec::new();
    for c in 0..copies {
        for i in 0..basis.len() {
            logical_x.push(lift(&basis.cocycles[i], c));
            logical_z.push(lift(&basis.cycles[i], c));
            labels.push(LogicalLabel {
                class: basis.labels[i].clone(),
                copy: c + 1,
            });
        }
    }
    let meta = (0..copies)
        .flat_map(|c| (0..e).map(move |edge| QubitMeta::Edge { copy: c + 1, edge }))
        .collect();
    let code = CssCode {
        n: e * copies,
        hx,
        hz,
        logical_x,
        logical_z,
        labels,
        meta,
        kind: CodeKind::Toric { copies, edges: e },
    };
    code.verify()?;
    Ok(code)
}

/// Color code on the barycentric subdivision of a closed 3-complex: qubits on
/// flags, an X check for every subdivision vertex and a Z check for every
/// subdivision edge, each supported on the flags containing it.
///
/// Flag signs come from a coherent orientation of the subdivision, so flags
/// sharing a triangle have opposite signs.
pub fn color_code(k: &DeltaComplex) -> Result<CssCode> {
    if k.dims() != 3 {
        return Err(Error::Dimension("color code needs a 3-complex".into()));
    }
    let sd = barycentric_subdivide(k);
    let c = &sd.complex;
    let n = c.count(3);
    let mut xrows: Vec<Vec<usize>> = vec![Vec::new(); c.count(0)];
    let mut zrows: Vec<Vec<usize>> = vec![Vec::new(); c.count(1)];
    for t in 0..n {
        for j in 0..4 {
            xrows[c.vertex(3, t, j)].push(t);
        }
        for i in 0..4 {
            for j in i + 1..4 {
                zrows[c.edge(3, t, i, j)].push(t);
            }
        }
    }
    let to_matrix =
        |rows: Vec<Vec<usize>>| BitMatrix::from_rows(n, rows.into_iter().map(|r| BitVec::from_indices(n, r)).collect());
    let hx = to_matrix(xrows);
    let hz = to_matrix(zrows);
    let signs = coherent_orientation(c);
    let meta = (0..n)
        .map(|t| QubitMeta::Flag {
            cells: sd.flag(t).to_vec(),
            sign: signs.as_ref().map_or(0, |s| s[t]),
        })
        .collect();
    let mut code = CssCode::from_checks(hx, hz)?;
    code.meta = meta;
    code.kind = CodeKind::Color;
    code.verify()?;
    Ok(code)
}

/// Code JSON: checks and logicals as support lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeJson {
    pub n: usize,
    pub hx: Vec<Vec<usize>>,
    pub hz: Vec<Vec<usize>>,
    pub logical_x: Vec<Vec<usize>>,
    pub logical_z: Vec<Vec<usize>>,
    #[serde(default)]
    pub labels: Vec<LogicalLabel>,
    #[serde(default)]
    pub meta: Vec<QubitMeta>,
    #[serde(default = "custom_kind")]
    pub kind: CodeKind,
}

fn custom_kind() -> CodeKind {
    CodeKind::Custom
}

impl From<&CssCode> for CodeJson {
    fn from(c: &CssCode) -> Self {
        let supports = |m: &BitMatrix| m.rows().iter().map(BitVec::to_indices).collect();
        CodeJson {
            n: c.n,
            hx: supports(&c.hx),
            hz: supports(&c.hz),
            logical_x: c.logical_x.iter().map(BitVec::to_indices).collect(),
            logical_z: c.logical_z.iter().map(BitVec::to_indices).collect(),
            labels: c.labels.clone(),
            meta: c.meta.clone(),
            kind: c.kind.clone(),
        }
    }
}

impl CodeJson {
    pub fn to_code(&self) -> Result<CssCode> {
        let n = self.n;
        let vecs = |rows: &[Vec<usize>]| -> Result<Vec<BitVec>> {
            rows.iter()
                .map(|r| {
                    if r.iter().any(|&i| i >= n) {
                        Err(Error::OutOfRange("qubit index".into()))
                    } else {
                        Ok(BitVec::from_indices(n, r.iter().copied()))
                    }
                })
                .collect()
        };
        let k = self.logical_x.len();
        let labels = if self.labels.len() == k {
            self.labels.clone()
        } else {
            (0..k)
                .map(|i| LogicalLabel {
                    class: format!("L{i}"),
                    copy: 0,
                })
                .collect()
        };
        let code = CssCode {
            n,
            hx: BitMatrix::from_rows(n, vecs(&self.hx)?),
            hz: BitMatrix::from_rows(n, vecs(&self.hz)?),
            logical_x: vecs(&self.logical_x)?,
            logical_z: vecs(&self.logical_z)?,
            labels,
            meta: if self.meta.len() == n {
                self.meta.clone()
            } else {
                vec![QubitMeta::Plain; n]
            },
            kind: self.kind.clone(),
        };
        code.verify()?;
        Ok(code)
    }
}
