//! Realizing a prescribed 3-form μ : ∧³V → Z as the triple-intersection form
//! of a Heegaard-glued 3-manifold H(τ), with τ a product of σ blocks.
//!
//! The surface basis is (a₁..a_m, b₁..b_m); the aᵢ span the kernel lattice
//! K(m) of the handlebody.

use crate::homology::{integer_kernel, AbelianGroup, IntMatrix};
use crate::hypergraph::{Coefficient, TripleForm};
use crate::mcg::{is_symplectic, SymplecticMatrix};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Integer 3-form on m generators, with 1-based sorted index triples.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ThreeForm {
    pub m: usize,
    pub coeffs: BTreeMap<[usize; 3], i64>,
}

impl ThreeForm {
    pub fn new(m: usize) -> Self {
        ThreeForm {
            m,
            coeffs: BTreeMap::new(),
        }
    }

    /// Adds `a` to the coefficient of {i, j, k}.
    pub fn add(&mut self, i: usize, j: usize, k: usize, a: i64) -> Result<()> {
        let mut t = [i, j, k];
        t.sort_unstable();
        if t[0] == 0 || t[2] > self.m || t[0] == t[1] || t[1] == t[2] {
            return Err(Error::OutOfRange(format!("triple ({i},{j},{k}) with m = {}", self.m)));
        }
        let e = self.coeffs.entry(t).or_insert(0);
        *e += a;
        if *e == 0 {
            self.coeffs.remove(&t);
        }
        Ok(())
    }

    pub fn from_triples(m: usize, triples: &[[usize; 3]]) -> Result<Self> {
        let mut f = ThreeForm::new(m);
        for t in triples {
            f.add(t[0], t[1], t[2], 1)?;
        }
        Ok(f)
    }

    pub fn plus(&self, other: &ThreeForm) -> ThreeForm {
        let mut out = ThreeForm::new(self.m.max(other.m));
        for (t, &a) in self.coeffs.iter().chain(&other.coeffs) {
            out.add(t[0], t[1], t[2], a).expect("indices in range");
        }
        out
    }

    /// μ mod 2 as a triple form on labels Gamma_1..Gamma_m.
    pub fn mod2(&self) -> TripleForm {
        let mut f = TripleForm::new(gamma_labels(self.m));
        for (t, &a) in &self.coeffs {
            if a.rem_euclid(2) == 1 {
                f.set(t[0] - 1, t[1] - 1, t[2] - 1, Coefficient::One)
                    .expect("indices in range");
            }
        }
        f
    }
}

pub fn gamma_labels(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("Gamma_{i}")).collect()
}

/// `{"m": m, "coeffs": {"1,2,3": 1, ...}}`
#[derive(Serialize, Deserialize)]
struct ThreeFormJson {
    m: usize,
    coeffs: BTreeMap<String, i64>,
}

impl Serialize for ThreeForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ThreeFormJson {
            m: self.m,
            coeffs: self
                .coeffs
                .iter()
                .map(|(t, &a)| (format!("{},{},{}", t[0], t[1], t[2]), a))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ThreeForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = ThreeFormJson::deserialize(d)?;
        let mut f = ThreeForm::new(j.m);
        for (key, a) in j.coeffs {
            let idx: Vec<usize> = key
                .split(',')
                .map(|p| p.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| D::Error::custom(format!("bad triple key {key:?}")))?;
            if idx.len() != 3 {
                return Err(D::Error::custom(format!("bad triple key {key:?}")));
            }
            f.add(idx[0], idx[1], idx[2], a).map_err(D::Error::custom)?;
        }
        Ok(f)
    }
}

/// The 3×3 block S with zero diagonal and ones elsewhere: the upper-right
/// part of σ on (a_i, a_j, a_k | b_i, b_j, b_k).
fn upper_block() -> [[i64; 3]; 3] {
    [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
}

/// Completes σ = [[I, S], [X, I]] to a symplectic matrix.
///
/// The constraints are X = Xᵀ and XᵀS = 0. They are homogeneous, so X = 0 is
/// always the minimal-norm solution; the integer solution lattice is returned
/// alongside (empty when S is nonsingular, which forces X = 0).
pub fn complete_sigma() -> (IntMatrix, Vec<Vec<BigInt>>) {
    let s = upper_block();
    // Unknowns: x00 x01 x02 x11 x12 x22 of the symmetric X.
    let sym = |p: usize, q: usize| -> usize {
        let (a, b) = if p <= q { (p, q) } else { (q, p) };
        [[0, 1, 2], [1, 3, 4], [2, 4, 5]][a][b]
    };
    let mut rows = Vec::new();
    for r in 0..3 {
        for c in 0..3 {
            // (XᵀS)_{rc} = Σ_t X_{tr} S_{tc}
            let mut row = vec![0i64; 6];
            for (t, srow) in s.iter().enumerate() {
                row[sym(t, r)] += srow[c];
            }
            rows.push(row);
        }
    }
    let lattice = integer_kernel(&IntMatrix::from_rows(&rows));
    (IntMatrix::zeros(3, 3), lattice)
}

/// σ_{i,j,k} on the 2m-dimensional surface lattice (1-based indices).
pub fn sigma_block(i: usize, j: usize, k: usize, m: usize) -> Result<SymplecticMatrix> {
    let mut idx = [i, j, k];
    idx.sort_unstable();
    if idx[0] == 0 || idx[2] > m || idx[0] == idx[1] || idx[1] == idx[2] {
        return Err(Error::OutOfRange(format!("σ({i},{j},{k}) with m = {m}")));
    }
    let (x, _) = complete_sigma();
    let s = upper_block();
    let mut out = IntMatrix::identity(2 * m);
    for p in 0..3 {
        for q in 0..3 {
            let (ap, aq) = (idx[p] - 1, idx[q] - 1);
            if s[p][q] != 0 {
                out.set(ap, m + aq, BigInt::from(s[p][q]));
            }
            if !x.get(p, q).is_zero() {
                out.set(m + ap, aq, x.get(p, q).clone());
            }
        }
    }
    SymplecticMatrix::new(m, out).map_err(|_| Error::NoSolution(format!("σ({i},{j},{k}) has no symplectic completion")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Synthesis {
    pub form: ThreeForm,
    /// Factors (i, j, k; exponent) of τ in product order.
    pub factors: Vec<([usize; 3], i64)>,
    pub tau: SymplecticMatrix,
    /// Triple form predicted by |Γᵢ ∩ Γⱼ ∩ Γ_k| = a_{ijk} mod 2.
    pub predicted: TripleForm,
    /// Rank of H₂(H(τ); Z) from Z^{2m} / (K + τK).
    pub h2_rank: usize,
    #[serde(with = "crate::serde_util::bigint_vec")]
    pub h2_torsion: Vec<BigInt>,
}

fn kernel_lattice_quotient(tau: &SymplecticMatrix) -> AbelianGroup {
    let m = tau.g;
    let mut gens = IntMatrix::zeros(2 * m, 2 * m);
    for i in 0..m {
        gens.set(i, i, BigInt::one());
        for r in 0..2 * m {
            gens.set(r, m + i, tau.entries.get(r, i).clone());
        }
    }
    AbelianGroup::cokernel(&gens)
}

/// τ = ∏_{i<j<k} σ_{i,j,k}^{a_{ijk}} with the predicted triple form.
pub fn synthesize(mu: &ThreeForm) -> Result<Synthesis> {
    if mu.m < 3 && !mu.coeffs.is_empty() {
        return Err(Error::OutOfRange("a nonzero 3-form needs m ≥ 3".into()));
    }
    let factors: Vec<([usize; 3], i64)> = mu.coeffs.iter().map(|(t, &a)| (*t, a)).collect();
    synthesize_from_factors(mu.m, &factors)
}

/// τ from an explicit ordered factor list, e.g. a product written out by hand.
pub fn synthesize_from_factors(m: usize, factors: &[([usize; 3], i64)]) -> Result<Synthesis> {
    let mut tau = SymplecticMatrix::identity(m);
    let mut form = ThreeForm::new(m);
    for &(t, a) in factors {
        tau = tau.mul(&sigma_block(t[0], t[1], t[2], m)?.pow(a));
        form.add(t[0], t[1], t[2], a)?;
    }
    let q = kernel_lattice_quotient(&tau);
    Ok(Synthesis {
        predicted: form.mod2(),
        form,
        factors: factors.to_vec(),
        tau,
        h2_rank: q.free_rank,
        h2_torsion: q.torsion,
    })
}

pub fn synthesize_all(forms: &[ThreeForm]) -> Vec<Result<Synthesis>> {
    forms.par_iter().map(synthesize).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum RoundtripVerdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundtripReport {
    pub verdict: RoundtripVerdict,
    pub symplectic: bool,
    pub fixes_kernel: bool,
    pub h2_rank: usize,
    pub form_matches: bool,
    /// The H₁ action agrees with the form: τ(b_p) − b_p = Σ_q (Σ_r a_{pqr}) a_q.
    pub contraction_matches: bool,
    pub mismatches: Vec<String>,
}

pub fn roundtrip_check(mu: &ThreeForm) -> Result<RoundtripReport> {
    let s = synthesize(mu)?;
    let m = mu.m;
    let symplectic = is_symplectic(&s.tau.entries, m);
    let fixes_kernel = (0..m).all(|i| (0..2 * m).all(|r| *s.tau.entries.get(r, i) == BigInt::from((r == i) as i64)));
    let expected = mu.mod2();
    let mut mismatches = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let (got, want) = (s.predicted.get(i, j, k), expected.get(i, j, k));
                if got != want {
                    mismatches.push(format!(
                        "({},{},{}): predicted {got:?}, expected {want:?}",
                        i + 1,
                        j + 1,
                        k + 1
                    ));
                }
            }
        }
    }
    let mut contraction_matches = true;
    for p in 1..=m {
        for q in 1..=m {
            let want: i64 = if p == q {
                0
            } else {
                (1..=m)
                    .filter(|&r| r != p && r != q)
                    .map(|r| {
                        let mut t = [p, q, r];
                        t.sort_unstable();
                        mu.coeffs.get(&t).copied().unwrap_or(0)
                    })
                    .sum()
            };
            let got = s.tau.entries.get(q - 1, m + p - 1);
            let diag = if p == q { BigInt::one() } else { BigInt::zero() };
            if *got != BigInt::from(want) || *s.tau.entries.get(m + q - 1, m + p - 1) != diag {
                contraction_matches = false;
            }
        }
    }
    let form_matches = mismatches.is_empty();
    let ok =
        symplectic && fixes_kernel && s.h2_rank == m && s.h2_torsion.is_empty() && form_matches && contraction_matches;
    Ok(RoundtripReport {
        verdict: if ok {
            RoundtripVerdict::Pass
        } else {
            RoundtripVerdict::Fail
        },
        symplectic,
        fixes_kernel,
        h2_rank: s.h2_rank,
        form_matches,
        contraction_matches,
        mismatches,
    })
}

/// The genus-13 product σ₁₂₃·σ₁₄₅·σ₄,₁₁,₁₂·σ₅₉₈·σ₂,₁₂,₁₃·σ₃₆₇.
pub fn genus13_factors() -> Vec<([usize; 3], i64)> {
    [[1, 2, 3], [1, 4, 5], [4, 11, 12], [5, 9, 8], [2, 12, 13], [3, 6, 7]]
        .into_iter()
        .map(|mut t| {
            t.sort_unstable();
            (t, 1)
        })
        .collect()
}

/// The two-prong example σ₁₂₃·σ₁₄₅ on m = 5.
pub fn two_prong_factors() -> Vec<([usize; 3], i64)> {
    vec![([1, 2, 3], 1), ([1, 4, 5], 1)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{base_hypergraph, degree_report};
    use proptest::prelude::*;

    #[test]
    fn sigma_upper_rows_and_completion() {
        let s = sigma_block(1, 2, 3, 3).unwrap();
        let rows = s.entries.to_i64_rows().unwrap();
        assert_eq!(rows[0], vec![1, 0, 0, 0, 1, 1]);
        assert_eq!(rows[1], vec![0, 1, 0, 1, 0, 1]);
        assert_eq!(rows[2], vec![0, 0, 1, 1, 1, 0]);
        assert_eq!(&rows[3][3..], &[1, 0, 0]);
        assert!(is_symplectic(&s.entries, 3));
        let (_, lattice) = complete_sigma();
        assert!(lattice.is_empty());
        for i in 0..3 {
            for r in 0..6 {
                assert_eq!(rows[r][i], (r == i) as i64);
            }
        }
        assert!(sigma_block(1, 1, 2, 3).is_err());
        assert!(sigma_block(1, 2, 4, 3).is_err());
    }

    #[test]
    fn single_triple_is_the_three_torus() {
        let mu = ThreeForm::from_triples(3, &[[1, 2, 3]]).unwrap();
        let s = synthesize(&mu).unwrap();
        assert_eq!(s.h2_rank, 3);
        assert_eq!(s.predicted.unit_triples(), vec![[0, 1, 2]]);
        assert_eq!(roundtrip_check(&mu).unwrap().verdict, RoundtripVerdict::Pass);
    }

    #[test]
    fn shared_pair() {
        let mu = ThreeForm::from_triples(4, &[[1, 2, 3], [2, 3, 4]]).unwrap();
        let h = base_hypergraph(&synthesize(&mu).unwrap().predicted).unwrap();
        assert_eq!(h.hyperedges, vec![vec![0, 1, 2], vec![1, 2, 3]]);
    }

    #[test]
    fn two_prong_tree() {
        let s = synthesize_from_factors(5, &two_prong_factors()).unwrap();
        let rep = degree_report(&base_hypergraph(&s.predicted).unwrap());
        assert_eq!(rep.max_degree, 2);
        assert!(rep.berge_acyclic);
        assert_eq!(rep.components, 1);
    }

    #[test]
    fn genus13_example() {
        let s = synthesize_from_factors(13, &genus13_factors()).unwrap();
        assert_eq!(s.h2_rank, 13);
        let h = base_hypergraph(&s.predicted).unwrap();
        assert_eq!(h.hyperedges.len(), 6);
        let rep = degree_report(&h);
        assert_eq!(rep.max_degree, 2);
        assert_eq!(roundtrip_check(&s.form).unwrap().verdict, RoundtripVerdict::Pass);
    }

    #[test]
    fn zero_form() {
        let mu = ThreeForm::new(4);
        let s = synthesize(&mu).unwrap();
        assert!(s.tau.is_torelli());
        assert!(s.predicted.is_zero());
        assert_eq!(roundtrip_check(&mu).unwrap().verdict, RoundtripVerdict::Pass);
    }

    #[test]
    fn json_roundtrip() {
        let mu: ThreeForm = serde_json::from_str(r#"{"m":5,"coeffs":{"1,2,3":1,"5,4,1":-2}}"#).unwrap();
        assert_eq!(mu.coeffs.get(&[1, 4, 5]), Some(&-2));
        let back: ThreeForm = serde_json::from_str(&serde_json::to_string(&mu).unwrap()).unwrap();
        assert_eq!(back, mu);
    }

    fn arb_form() -> impl Strategy<Value = ThreeForm> {
        (3usize..=8).prop_flat_map(|m| {
            proptest::collection::vec(((1..=m), (1..=m), (1..=m), -3i64..=3), 0..6).prop_map(move |ts| {
                let mut f = ThreeForm::new(m);
                for (i, j, k, a) in ts {
                    let _ = f.add(i, j, k, a);
                }
                f
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn random_forms_roundtrip(mu in arb_form()) {
            let r = roundtrip_check(&mu).unwrap();
            prop_assert_eq!(r.verdict, RoundtripVerdict::Pass, "{:?}", r);
        }

        #[test]
        fn prediction_is_additive(a in arb_form(), b in arb_form()) {
            let m = a.m.max(b.m);
            let lift = |f: &ThreeForm| ThreeForm { m, coeffs: f.coeffs.clone() };
            let (a, b) = (lift(&a), lift(&b));
            let sum = synthesize(&a.plus(&b)).unwrap().predicted;
            let pa = synthesize(&a).unwrap().predicted;
            let pb = synthesize(&b).unwrap().predicted;
            for i in 0..m {
                for j in i + 1..m {
                    for k in j + 1..m {
                        let bit = |f: &TripleForm| f.get(i, j, k) == Coefficient::One;
                        prop_assert_eq!(bit(&sum), bit(&pa) ^ bit(&pb));
                    }
                }
            }
        }
    }
}
