//! Simplicial cochains over GF(2): coboundary, cup product, integration.
//!
//! Front and back faces are computed only through face maps, which keeps the
//! formulas valid on one-vertex Δ-complexes where vertex lists are ambiguous.

use crate::complex::DeltaComplex;
use crate::gf2::{BitMatrix, BitVec};
use crate::homology::homology_basis;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cochain {
    pub dim: usize,
    pub values: BitVec,
}

impl Cochain {
    pub fn zero(k: &DeltaComplex, dim: usize) -> Self {
        Cochain {
            dim,
            values: BitVec::zeros(k.count(dim)),
        }
    }

    pub fn from_values(dim: usize, values: BitVec) -> Self {
        Cochain { dim, values }
    }

    pub fn indicator(k: &DeltaComplex, dim: usize, sigma: usize) -> Self {
        Cochain {
            dim,
            values: BitVec::unit(k.count(dim), sigma),
        }
    }

    #[inline]
    pub fn eval(&self, sigma: usize) -> bool {
        self.values.get(sigma)
    }

    /// Evaluation on a chain: Σ c(σ) over σ in the chain.
    pub fn pair(&self, chain: &BitVec) -> bool {
        self.values.dot(chain)
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        assert_eq!(self.dim, other.dim, "cochain degree mismatch");
        Cochain {
            dim: self.dim,
            values: self.values.xor(&other.values),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_zero()
    }
}

/// `{"dim": n, "support": [indices]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CochainJson {
    pub dim: usize,
    pub support: Vec<usize>,
}

impl From<&Cochain> for CochainJson {
    fn from(c: &Cochain) -> Self {
        CochainJson {
            dim: c.dim,
            support: c.values.to_indices(),
        }
    }
}

impl CochainJson {
    pub fn to_cochain(&self, k: &DeltaComplex) -> Result<Cochain> {
        let n = k.count(self.dim);
        if self.dim > k.dims() || self.support.iter().any(|&i| i >= n) {
            return Err(Error::OutOfRange("cochain support".into()));
        }
        Ok(Cochain {
            dim: self.dim,
            values: BitVec::from_indices(n, self.support.iter().copied()),
        })
    }
}

/// (dc)(σ) = Σᵢ c(dᵢσ).
pub fn coboundary(k: &DeltaComplex, c: &Cochain) -> Cochain {
    let n = c.dim + 1;
    if n > k.dims() {
        return Cochain {
            dim: n,
            values: BitVec::zeros(0),
        };
    }
    let mut out = BitVec::zeros(k.count(n));
    for s in 0..k.count(n) {
        let v = k.faces_of(n, s).iter().filter(|&&f| c.eval(f)).count() % 2 == 1;
        out.set(s, v);
    }
    Cochain { dim: n, values: out }
}

/// Front p-face: the first p+1 vertices, reached by deleting the top vertex.
pub fn front_face(k: &DeltaComplex, n: usize, sigma: usize, p: usize) -> usize {
    let mut cur = sigma;
    for d in (p + 1..=n).rev() {
        cur = k.face(d, cur, d);
    }
    cur
}

/// Back q-face: the last q+1 vertices, reached by deleting vertex 0.
pub fn back_face(k: &DeltaComplex, n: usize, sigma: usize, q: usize) -> usize {
    let mut cur = sigma;
    for d in (q + 1..=n).rev() {
        cur = k.face(d, cur, 0);
    }
    cur
}

/// (a ∪ b)(σ) = a(front_p σ)·b(back_q σ).
pub fn cup(k: &DeltaComplex, a: &Cochain, b: &Cochain) -> Result<Cochain> {
    let n = a.dim + b.dim;
    if n > k.dims() {
        return Err(Error::Dimension(format!(
            "cup of degrees {} and {} exceeds dimension {}",
            a.dim,
            b.dim,
            k.dims()
        )));
    }
    let mut out = BitVec::zeros(k.count(n));
    for s in 0..k.count(n) {
        if a.eval(front_face(k, n, s, a.dim)) && b.eval(back_face(k, n, s, b.dim)) {
            out.set(s, true);
        }
    }
    Ok(Cochain { dim: n, values: out })
}

/// Integral of a top-degree cochain over the sum of all top simplices.
pub fn integrate(k: &DeltaComplex, c: &Cochain) -> bool {
    assert_eq!(c.dim, k.dims(), "integrand must have top degree");
    c.values.count_ones() % 2 == 1
}

/// ∫ a ∪ b for complementary degrees, evaluated without materializing the cup.
pub fn cup_integral(k: &DeltaComplex, a: &Cochain, b: &Cochain) -> bool {
    let n = k.dims();
    assert_eq!(a.dim + b.dim, n, "degrees must add up to the dimension");
    (0..k.count(n))
        .filter(|&s| a.eval(front_face(k, n, s, a.dim)) && b.eval(back_face(k, n, s, b.dim)))
        .count()
        % 2
        == 1
}

/// Front, middle and back edges `[v₀v₁]`, `[v₁v₂]`, `[v₂v₃]` of every tetrahedron.
pub fn tet_edges(k: &DeltaComplex) -> Vec<[usize; 3]> {
    assert_eq!(k.dims(), 3, "tetrahedra need a 3-complex");
    (0..k.count(3))
        .map(|t| {
            let d3 = k.face(3, t, 3);
            [k.face(2, d3, 2), k.face(2, d3, 0), k.face(2, k.face(3, t, 0), 0)]
        })
        .collect()
}

/// ∫ a ∪ b ∪ c = Σ_tets a([v₀v₁])·b([v₁v₂])·c([v₂v₃]) mod 2.
pub fn triple_cup_integral(k: &DeltaComplex, a: &Cochain, b: &Cochain, c: &Cochain) -> Result<bool> {
    if k.dims() != 3 || a.dim != 1 || b.dim != 1 || c.dim != 1 {
        return Err(Error::Dimension("triple cup needs 1-cochains on a 3-complex".into()));
    }
    Ok(tet_edges(k)
        .iter()
        .filter(|[e0, e1, e2]| a.eval(*e0) && b.eval(*e1) && c.eval(*e2))
        .count()
        % 2
        == 1)
}

/// Matrix of ∫ cᵢ ∪ cⱼ over the given 1-cocycles of a closed surface.
pub fn intersection_matrix(s: &DeltaComplex, cocycles: &[Cochain]) -> BitMatrix {
    let n = cocycles.len();
    let mut m = BitMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, cup_integral(s, &cocycles[i], &cocycles[j]));
        }
    }
    m
}

/// The GF(2) intersection form on the canonical H¹ basis of a closed surface.
pub fn surface_intersection_form(s: &DeltaComplex) -> Result<BitMatrix> {
    if s.dims() != 2 || !s.has_fundamental_cycle() {
        return Err(Error::Dimension("intersection form needs a closed 2-complex".into()));
    }
    let basis = homology_basis(s, 1);
    let cocycles: Vec<Cochain> = basis
        .cocycles
        .iter()
        .map(|c| Cochain::from_values(1, c.clone()))
        .collect();
    let m = intersection_matrix(s, &cocycles);
    if m.rank() != cocycles.len() {
        return Err(Error::Degenerate(format!(
            "rank {} on a {}-dimensional H1",
            m.rank(),
            cocycles.len()
        )));
    }
    Ok(m)
}
