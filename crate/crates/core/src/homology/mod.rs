//! GF(2) homology and cohomology of Δ-complexes, Poincaré duality, and
//! integer Smith normal form.

mod snf;

pub use snf::{integer_kernel, smith_normal_form, AbelianGroup, IntMatrix, MatrixJson, SnfResult};

use crate::complex::DeltaComplex;
use crate::cup::{cup_integral, Cochain};
use crate::gf2::{BitMatrix, BitVec, Echelon};
use crate::{Error, Result};

/// Basis of ker ∂_n as a list of chains (all unit vectors for n = 0).
pub fn cycle_space(k: &DeltaComplex, n: usize) -> Vec<BitVec> {
    if n == 0 {
        return (0..k.count(0)).map(|v| BitVec::unit(k.count(0), v)).collect();
    }
    k.boundary_matrix(n).kernel()
}

/// Echelon of im ∂_{n+1} inside the n-chains.
pub fn boundary_space(k: &DeltaComplex, n: usize) -> Echelon {
    let mut e = Echelon::new(k.count(n));
    if n < k.dims() {
        for row in k.boundary_rows(n + 1).into_rows() {
            e.insert(row);
        }
    }
    e
}

/// Basis of ker δ^n (δ^n = ∂_{n+1}ᵀ).
pub fn cocycle_space(k: &DeltaComplex, n: usize) -> Vec<BitVec> {
    if n == k.dims() {
        return (0..k.count(n)).map(|s| BitVec::unit(k.count(n), s)).collect();
    }
    k.boundary_rows(n + 1).kernel()
}

/// Echelon of im δ^{n−1} inside the n-cochains.
pub fn coboundary_space(k: &DeltaComplex, n: usize) -> Echelon {
    let mut e = Echelon::new(k.count(n));
    if n >= 1 {
        for row in k.boundary_matrix(n).into_rows() {
            e.insert(row);
        }
    }
    e
}

pub fn rank_boundary(k: &DeltaComplex, n: usize) -> usize {
    if n == 0 || n > k.dims() {
        0
    } else {
        k.boundary_rows(n).rank()
    }
}

/// b_n = dim ker ∂_n − rank ∂_{n+1} over GF(2).
pub fn betti(k: &DeltaComplex, n: usize) -> usize {
    if n > k.dims() {
        return 0;
    }
    k.count(n) - rank_boundary(k, n) - rank_boundary(k, n + 1)
}

pub fn betti_numbers(k: &DeltaComplex) -> Vec<usize> {
    (0..=k.dims()).map(|n| betti(k, n)).collect()
}

/// Dual bases of H_n and H^n: `pairing[i][j] = cocycles[j](cycles[i])` is the
/// identity after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyBasis {
    pub dim: usize,
    pub cycles: Vec<BitVec>,
    pub cocycles: Vec<BitVec>,
    pub pairing: BitMatrix,
}

/// Representatives chosen greedily from the canonical kernel basis and reduced
/// to their normal form modulo the image, so they are reproducible.
fn class_representatives(kernel: Vec<BitVec>, image: &Echelon) -> Vec<BitVec> {
    let mut e = image.clone();
    kernel
        .into_iter()
        .filter(|z| e.insert(z.clone()))
        .map(|z| image.reduce(&z))
        .collect()
}

pub fn homology_basis(k: &DeltaComplex, n: usize) -> HomologyBasis {
    let boundaries = boundary_space(k, n);
    let coboundaries = coboundary_space(k, n);
    let cycles = class_representatives(cycle_space(k, n), &boundaries);
    let raw = class_representatives(cocycle_space(k, n), &coboundaries);
    assert_eq!(cycles.len(), raw.len(), "homology and cohomology ranks differ");
    let r = cycles.len();
    let mut p = BitMatrix::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            p.set(i, j, raw[j].dot(&cycles[i]));
        }
    }
    // New cocycle j = Σ_k M[j][k] raw_k with P·Mᵀ = I.
    let m = p.inverse().expect("evaluation pairing is nondegenerate").transpose();
    let cocycles: Vec<BitVec> = (0..r)
        .map(|j| {
            let mut c = BitVec::zeros(k.count(n));
            for kk in m.row(j).ones() {
                c.xor_assign(&raw[kk]);
            }
            coboundaries.reduce(&c)
        })
        .collect();
    let mut pairing = BitMatrix::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            pairing.set(i, j, cocycles[j].dot(&cycles[i]));
        }
    }
    HomologyBasis {
        dim: n,
        cycles,
        cocycles,
        pairing,
    }
}

pub fn is_cycle(k: &DeltaComplex, n: usize, z: &BitVec) -> bool {
    n == 0 || k.boundary(n, z).is_zero()
}

pub fn is_boundary(k: &DeltaComplex, n: usize, z: &BitVec) -> bool {
    boundary_space(k, n).contains(z)
}

pub fn is_cocycle(k: &DeltaComplex, n: usize, c: &BitVec) -> bool {
    n == k.dims() || k.boundary_rows(n + 1).mul_vec(c).is_zero()
}

pub fn is_coboundary(k: &DeltaComplex, n: usize, c: &BitVec) -> bool {
    coboundary_space(k, n).contains(c)
}

/// Poincaré dual of a p-cycle on a closed n-complex: an (n−p)-cocycle c with
/// ∫ c ∪ β = β(z) for every β in the canonical H^p basis.
pub fn poincare_dual(k: &DeltaComplex, z: &BitVec, p: usize) -> Result<BitVec> {
    let n = k.dims();
    if p > n || z.len() != k.count(p) {
        return Err(Error::Dimension("cycle does not fit the complex".into()));
    }
    if !k.has_fundamental_cycle() {
        return Err(Error::InvalidComplex("complex has no GF(2) fundamental cycle".into()));
    }
    if !is_cycle(k, p, z) {
        return Err(Error::NotACycle {
            witness: k.boundary(p, z).to_indices(),
        });
    }
    let q = n - p;
    let hq = homology_basis(k, q);
    let hp = homology_basis(k, p);
    if hq.cocycles.len() != hp.cocycles.len() {
        return Err(Error::NoSolution("H^p and H^(n-p) differ in rank".into()));
    }
    let r = hp.cocycles.len();
    // G[j][i] = ∫ c_i ∪ β_j, so G·x = rhs with rhs_j = β_j(z).
    let mut g = BitMatrix::zeros(r, r);
    for (i, ci) in hq.cocycles.iter().enumerate() {
        let ci = Cochain::from_values(q, ci.clone());
        for (j, bj) in hp.cocycles.iter().enumerate() {
            g.set(j, i, cup_integral(k, &ci, &Cochain::from_values(p, bj.clone())));
        }
    }
    let rhs = BitVec::from_bools(&hp.cocycles.iter().map(|b| b.dot(z)).collect::<Vec<_>>());
    let x = g
        .solve(&rhs)
        .ok_or_else(|| Error::NoSolution("duality system is inconsistent".into()))?;
    let mut c = BitVec::zeros(k.count(q));
    for i in x.ones() {
        c.xor_assign(&hq.cocycles[i]);
    }
    Ok(c)
}

/// Homology classes of codimension one labeled by name, their dual
/// 1-cocycles, and dual 1-cycles.
///
/// This is the logical basis of a toric code on K: `cocycles[i]` is the
/// support of the X logical for the membrane `labels[i]`, and `cycles[i]` is
/// the Z logical with `cocycles[j](cycles[i]) = δ_ij`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledBasis {
    pub labels: Vec<String>,
    pub membranes: Vec<BitVec>,
    pub cocycles: Vec<BitVec>,
    pub cycles: Vec<BitVec>,
    pub cycle_labels: Vec<String>,
}

impl LabeledBasis {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Builds the labeled basis from the complex's named (n−1)-cycles, completed
/// by canonical representatives (`h<dim>[i]`) where the names fall short.
pub fn labeled_basis(k: &DeltaComplex) -> Result<LabeledBasis> {
    let n = k.dims();
    if n < 2 {
        return Err(Error::Dimension("labeled basis needs dimension at least 2".into()));
    }
    let m = n - 1;
    let boundaries = boundary_space(k, m);
    let mut e = boundaries.clone();
    let mut labels = Vec::new();
    let mut membranes = Vec::new();
    for c in k.cycles_of_dim(m) {
        if e.insert(c.support.clone()) {
            labels.push(c.label.clone());
            membranes.push(c.support.clone());
        }
    }
    let canonical = homology_basis(k, m);
    for (i, z) in canonical.cycles.iter().enumerate() {
        if e.insert(z.clone()) {
            labels.push(format!("h{m}[{i}]"));
            membranes.push(z.clone());
        }
    }
    let cocycles: Vec<BitVec> = membranes
        .iter()
        .map(|z| poincare_dual(k, z, m))
        .collect::<Result<_>>()?;
    let r = cocycles.len();
    // Prefer named 1-cycles that already form the dual basis.
    let named1: Vec<_> = k.cycles_of_dim(1).collect();
    let mut cycles: Vec<Option<(BitVec, String)>> = vec![None; r];
    for i in 0..r {
        for c in &named1 {
            if (0..r).all(|j| cocycles[j].dot(&c.support) == (i == j)) {
                cycles[i] = Some((c.support.clone(), c.label.clone()));
                break;
            }
        }
    }
    let h1 = homology_basis(k, 1);
    let mut p = BitMatrix::zeros(r, r);
    for (kk, z) in h1.cycles.iter().enumerate() {
        for (j, c) in cocycles.iter().enumerate() {
            p.set(kk, j, c.dot(z));
        }
    }
    let inv = p
        .inverse()
        .ok_or_else(|| Error::Degenerate("duality pairing is singular".into()))?;
    let b1 = boundary_space(k, 1);
    let (cycles, cycle_labels): (Vec<BitVec>, Vec<String>) = cycles
        .into_iter()
        .enumerate()
        .map(|(i, found)| match found {
            Some(pair) => pair,
            None => {
                let mut w = BitVec::zeros(k.count(1));
                for kk in inv.row(i).ones() {
                    w.xor_assign(&h1.cycles[kk]);
                }
                (b1.reduce(&w), format!("dual({})", labels[i]))
            }
        })
        .unzip();
    Ok(LabeledBasis {
        labels,
        membranes,
        cocycles,
        cycles,
        cycle_labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_sigma_g, build_torus3, circle};

    #[test]
    fn torus3_betti() {
        assert_eq!(betti_numbers(&build_torus3()), vec![1, 3, 3, 1]);
    }

    #[test]
    fn circle_betti() {
        assert_eq!(betti_numbers(&circle(5)), vec![1, 1]);
    }

    #[test]
    fn surface_betti() {
        for g in 1..=3 {
            assert_eq!(betti_numbers(&build_sigma_g(g).unwrap()), vec![1, 2 * g, 1]);
        }
    }

    #[test]
    fn basis_is_dual() {
        let t = build_torus3();
        for n in 0..=3 {
            let b = homology_basis(&t, n);
            assert_eq!(b.pairing, BitMatrix::identity(b.cycles.len()));
            for z in &b.cycles {
                assert!(is_cycle(&t, n, z));
            }
            for c in &b.cocycles {
                assert!(is_cocycle(&t, n, c));
            }
        }
    }

    #[test]
    fn torus3_labels() {
        let t = build_torus3();
        let lb = labeled_basis(&t).unwrap();
        assert_eq!(lb.labels, vec!["axb", "axc", "bxc"]);
        assert_eq!(lb.cycle_labels, vec!["c", "b", "a"]);
    }

    #[test]
    fn dual_of_torus_evaluates_on_c() {
        let t = build_torus3();
        let axb = t.cycle("axb").unwrap().support.clone();
        let pd = poincare_dual(&t, &axb, 2).unwrap();
        assert!(pd.dot(&t.cycle("c").unwrap().support));
        assert!(!pd.dot(&t.cycle("a").unwrap().support));
        let bd = t.boundary(3, &BitVec::unit(6, 0));
        let zero = poincare_dual(&t, &bd, 2).unwrap();
        assert!(is_coboundary(&t, 1, &zero));
    }
}
