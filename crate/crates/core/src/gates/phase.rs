use crate::gf2::BitVec;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// f(z) = Σ_S c_S Π_{i∈S} z_i mod 8 over bit variables, in multilinear form.
///
/// Every function {0,1}ⁿ → Z₈ has exactly one such representation, so two
/// polynomials are equal as functions iff their term maps are equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhasePolynomial {
    pub n: usize,
    /// Sorted variable sets (the empty set is the constant) to nonzero
    /// coefficients mod 8.
    #[serde(with = "crate::serde_util::term_map")]
    pub terms: BTreeMap<Vec<usize>, u8>,
}

/// 2-adic valuation of a nonzero residue mod 8.
fn valuation(c: u8) -> usize {
    (c % 8).trailing_zeros() as usize
}

impl PhasePolynomial {
    pub fn zero(n: usize) -> Self {
        PhasePolynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// Adds c·Π z_i; repeated variables collapse since z² = z.
    pub fn add_term(&mut self, vars: &[usize], c: u8) {
        let mut key: Vec<usize> = vars.to_vec();
        key.sort_unstable();
        key.dedup();
        debug_assert!(key.iter().all(|&v| v < self.n));
        let e = self.terms.entry(key.clone()).or_insert(0);
        *e = (*e + c) % 8;
        if *e == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn coefficient(&self, vars: &[usize]) -> u8 {
        let mut key = vars.to_vec();
        key.sort_unstable();
        key.dedup();
        self.terms.get(&key).copied().unwrap_or(0)
    }

    pub fn constant(&self) -> u8 {
        self.coefficient(&[])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Bound on the degree of f(⊕ⱼ yⱼbⱼ) as a polynomial in y, for any
    /// vectors bⱼ: a parity of ℓ bits expands with coefficients ±2^{ℓ−1}, so a
    /// term of degree d and coefficient c contributes degree ≤ 2 + d − v₂(c).
    pub fn restricted_degree_bound(&self) -> usize {
        self.terms
            .iter()
            .filter(|(k, _)| !k.is_empty())
            .map(|(k, &c)| 2 + k.len() - valuation(c).min(2))
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, z: &BitVec) -> u8 {
        let mut acc = 0u32;
        for (vars, &c) in &self.terms {
            if vars.iter().all(|&v| z.get(v)) {
                acc += c as u32;
            }
        }
        (acc % 8) as u8
    }

    pub fn add(&self, other: &PhasePolynomial) -> PhasePolynomial {
        let mut out = self.clone();
        out.n = out.n.max(other.n);
        for (k, &c) in &other.terms {
            out.add_term(k, c);
        }
        out
    }

    pub fn neg(&self) -> PhasePolynomial {
        PhasePolynomial {
            n: self.n,
            terms: self.terms.iter().map(|(k, &c)| (k.clone(), (8 - c) % 8)).collect(),
        }
    }

    pub fn sub(&self, other: &PhasePolynomial) -> PhasePolynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: u8) -> PhasePolynomial {
        let mut out = PhasePolynomial::zero(self.n);
        for (k, &c) in &self.terms {
            out.add_term(k, ((c as u32 * s as u32) % 8) as u8);
        }
        out
    }

    /// f(z ⊕ x): every z_i with x_i = 1 becomes 1 − z_i.
    pub fn flip(&self, x: &BitVec) -> PhasePolynomial {
        let mut out = PhasePolynomial::zero(self.n);
        for (vars, &c) in &self.terms {
            let (flipped, kept): (Vec<usize>, Vec<usize>) = vars.iter().partition(|&&v| x.get(v));
            // Π_{kept} z · Π_{flipped} (1 − z) = Σ_{U ⊆ flipped} (−1)^{|U|} z^{kept ∪ U}
            for mask in 0u32..1 << flipped.len() {
                let mut key = kept.clone();
                key.extend(
                    flipped
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &v)| v),
                );
                let coeff = if mask.count_ones() % 2 == 0 { c } else { (8 - c) % 8 };
                out.add_term(&key, coeff);
            }
        }
        out
    }

    /// f(z ⊕ x) − f(z).
    pub fn shift(&self, x: &BitVec) -> PhasePolynomial {
        self.flip(x).sub(self)
    }

    /// The terms that mention a variable of `x`.
    pub fn touching(&self, x: &BitVec) -> PhasePolynomial {
        PhasePolynomial {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.iter().any(|&v| x.get(v)))
                .map(|(k, &c)| (k.clone(), c))
                .collect(),
        }
    }

    /// The function values on all subsets of `basis` of size at most `d`,
    /// turned into Möbius coefficients: the result g satisfies
    /// g(y) = f(⊕ yⱼ basisⱼ) whenever that composite has degree ≤ d.
    pub fn restrict(&self, basis: &[BitVec], d: usize) -> PhasePolynomial {
        let m = basis.len();
        let width = basis.first().map_or(self.n, BitVec::len);
        let mut out = PhasePolynomial::zero(m);
        for subset in subsets_up_to(m, d) {
            let mut z = BitVec::zeros(width);
            for &j in &subset {
                z.xor_assign(&basis[j]);
            }
            let v = self.eval(&z);
            // Möbius: c_U = f(U) − Σ_{W ⊊ U} c_W, with proper subsets listed first.
            let mut c = v as i32;
            for w in proper_subsets(&subset) {
                c -= out.coefficient(&w) as i32;
            }
            out.add_term(&subset, c.rem_euclid(8) as u8);
        }
        out
    }
}

/// All subsets of {0..m} with at most d elements, by increasing size.
pub fn subsets_up_to(m: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..d.min(m) {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().map_or(0, |&l| l + 1);
            for j in start..m {
                let mut t: Vec<usize> = s.clone();
                t.push(j);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn proper_subsets(s: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let k = s.len();
    (0u32..(1u32 << k) - 1).map(move |mask| {
        s.iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_poly(n: usize) -> impl Strategy<Value = PhasePolynomial> {
        proptest::collection::vec((proptest::collection::vec(0..n, 0..=3), 0u8..8), 0..8).prop_map(move |ts| {
            let mut p = PhasePolynomial::zero(n);
            for (vars, c) in ts {
                p.add_term(&vars, c);
            }
            p
        })
    }

    fn all_points(n: usize) -> impl Iterator<Item = BitVec> {
        (0u32..1 << n).map(move |m| BitVec::from_indices(n, (0..n).filter(|i| m >> i & 1 == 1)))
    }

    #[test]
    fn repeated_variables_collapse() {
        let mut p = PhasePolynomial::zero(3);
        p.add_term(&[1, 1], 4);
        assert_eq!(p.coefficient(&[1]), 4);
        p.add_term(&[1], 4);
        assert!(p.is_zero());
    }

    #[test]
    fn ccz_conjugated_by_x_is_cz() {
        let mut p = PhasePolynomial::zero(3);
        p.add_term(&[0, 1, 2], 4);
        let r = p.shift(&BitVec::unit(3, 0));
        let mut cz = PhasePolynomial::zero(3);
        cz.add_term(&[1, 2], 4);
        assert_eq!(r, cz);
    }

    #[test]
    fn subsets_are_ordered_by_size() {
        let s = subsets_up_to(4, 2);
        assert_eq!(s.len(), 1 + 4 + 6);
        assert!(s.windows(2).all(|w| w[0].len() <= w[1].len()));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn flip_matches_pointwise(p in arb_poly(5), xm in 0u32..32) {
            let x = BitVec::from_indices(5, (0..5).filter(|i| xm >> i & 1 == 1));
            let f = p.flip(&x);
            for z in all_points(5) {
                prop_assert_eq!(f.eval(&z), p.eval(&z.xor(&x)));
            }
        }

        #[test]
        fn flip_is_an_involution(p in arb_poly(6), xm in 0u32..64) {
            let x = BitVec::from_indices(6, (0..6).filter(|i| xm >> i & 1 == 1));
            prop_assert_eq!(p.flip(&x).flip(&x), p);
        }

        #[test]
        fn restriction_is_exact_within_the_bound(p in arb_poly(6), seeds in proptest::collection::vec(0u32..64, 3)) {
            let basis: Vec<BitVec> = seeds
                .iter()
                .map(|&m| BitVec::from_indices(6, (0..6).filter(|i| m >> i & 1 == 1)))
                .collect();
            let d = p.restricted_degree_bound();
            let g = p.restrict(&basis, d);
            for y in all_points(3) {
                let mut z = BitVec::zeros(6);
                for j in y.ones() {
                    z.xor_assign(&basis[j]);
                }
                prop_assert_eq!(g.eval(&y), p.eval(&z));
            }
        }
    }
}
