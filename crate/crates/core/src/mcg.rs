//! Mapping-class-group algebra on H₁ of a closed surface: Dehn-twist
//! transvections, mapping-torus homology, Thurston's construction, Torelli
//! triple forms and thickened Dehn twists on Σ_g × S¹.
//!
//! Classes are integer vectors in the basis (a₁..a_g, b₁..b_g) with
//! ⟨aᵢ, bⱼ⟩ = δᵢⱼ; matrices act on column vectors.

use crate::complex::{cyclic_cover, extend_cocycle_mod, DeltaComplex, SimplicialMap};
use crate::cup::cup_integral;
use crate::cup::Cochain;
use crate::gf2::{BitMatrix, BitVec};
use crate::homology::{homology_basis, poincare_dual, smith_normal_form, AbelianGroup, IntMatrix};
use crate::hypergraph::{Coefficient, TripleForm};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// The standard form J = [[0, I], [−I, 0]].
pub fn symplectic_form(g: usize) -> IntMatrix {
    let mut j = IntMatrix::zeros(2 * g, 2 * g);
    for i in 0..g {
        j.set(i, g + i, BigInt::one());
        j.set(g + i, i, -BigInt::one());
    }
    j
}

pub fn is_symplectic(m: &IntMatrix, g: usize) -> bool {
    m.nrows() == 2 * g && m.ncols() == 2 * g && {
        let j = symplectic_form(g);
        m.transpose().mul(&j).mul(m) == j
    }
}

/// ω(x, y) = xᵀ J y.
pub fn intersection(x: &[BigInt], y: &[BigInt]) -> BigInt {
    let g = x.len() / 2;
    (0..g).map(|i| &x[i] * &y[g + i] - &x[g + i] * &y[i]).sum()
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymplecticMatrix {
    pub g: usize,
    pub entries: IntMatrix,
}

impl SymplecticMatrix {
    pub fn new(g: usize, entries: IntMatrix) -> Result<Self> {
        if !is_symplectic(&entries, g) {
            return Err(Error::InvalidMap(format!("matrix is not in Sp({}, Z)", 2 * g)));
        }
        Ok(SymplecticMatrix { g, entries })
    }

    pub fn from_rows(g: usize, rows: &[Vec<i64>]) -> Result<Self> {
        if rows.len() != 2 * g || rows.iter().any(|r| r.len() != 2 * g) {
            return Err(Error::Dimension(format!("expected a {0}×{0} matrix", 2 * g)));
        }
        Self::new(g, IntMatrix::from_rows(rows))
    }

    pub fn identity(g: usize) -> Self {
        SymplecticMatrix {
            g,
            entries: IntMatrix::identity(2 * g),
        }
    }

    pub fn mul(&self, other: &SymplecticMatrix) -> SymplecticMatrix {
        assert_eq!(self.g, other.g, "genus mismatch");
        SymplecticMatrix {
            g: self.g,
            entries: self.entries.mul(&other.entries),
        }
    }

    /// M⁻¹ = −J Mᵀ J.
    pub fn inverse(&self) -> SymplecticMatrix {
        let j = symplectic_form(self.g);
        SymplecticMatrix {
            g: self.g,
            entries: j.mul(&self.entries.transpose()).mul(&j).neg(),
        }
    }

    pub fn pow(&self, e: i64) -> SymplecticMatrix {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        SymplecticMatrix {
            g: self.g,
            entries: base.entries.pow(e.unsigned_abs() as u32),
        }
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        (0..2 * self.g)
            .map(|i| (0..2 * self.g).map(|j| self.entries.get(i, j) * &x[j]).sum())
            .collect()
    }

    pub fn is_torelli(&self) -> bool {
        self.entries == IntMatrix::identity(2 * self.g)
    }

    pub fn mod2(&self) -> BitMatrix {
        self.entries.mod2()
    }
}

impl Serialize for SymplecticMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct J<'a> {
            genus: usize,
            matrix: &'a IntMatrix,
        }
        J {
            genus: self.g,
            matrix: &self.entries,
        }
        .serialize(s)
    }
}

/// A curve class: a(i), b(i), f(i) = b(i+1) − b(i) (1-based), or an explicit
/// vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Curve {
    A(usize),
    B(usize),
    F(usize),
    Vector(Vec<i64>),
}

impl FromStr for Curve {
    type Err = Error;

    /// `a:i`, `b:i`, `f:i`, or a comma-separated vector (brackets optional).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((kind, idx)) = s.split_once(':') {
            let i: usize = idx
                .trim()
                .parse()
                .map_err(|_| Error::Invalid(format!("curve index {idx:?}")))?;
            return match kind.trim() {
                "a" => Ok(Curve::A(i)),
                "b" => Ok(Curve::B(i)),
                "f" => Ok(Curve::F(i)),
                k => Err(Error::Invalid(format!("curve kind {k:?}"))),
            };
        }
        let body = s.trim_start_matches('[').trim_end_matches(']');
        body.split(',')
            .map(|p| {
                p.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Invalid(format!("curve {s:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Curve::Vector)
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Curve::A(i) => write!(f, "a({i})"),
            Curve::B(i) => write!(f, "b({i})"),
            Curve::F(i) => write!(f, "f({i})"),
            Curve::Vector(v) => write!(f, "{v:?}"),
        }
    }
}

impl Curve {
    pub fn class(&self, g: usize) -> Result<Vec<BigInt>> {
        let mut v = vec![BigInt::zero(); 2 * g];
        let check = |i: usize, hi: usize| {
            if i == 0 || i > hi {
                Err(Error::OutOfRange(format!("{self} on genus {g}")))
            } else {
                Ok(())
            }
        };
        match *self {
            Curve::A(i) => {
                check(i, g)?;
                v[i - 1] = BigInt::one();
            }
            Curve::B(i) => {
                check(i, g)?;
                v[g + i - 1] = BigInt::one();
            }
            Curve::F(i) => {
                check(i, g.saturating_sub(1))?;
                v[g + i - 1] = -BigInt::one();
                v[g + i] = BigInt::one();
            }
            Curve::Vector(ref x) => {
                if x.len() != 2 * g {
                    return Err(Error::Dimension(format!("class of length {} on genus {g}", x.len())));
                }
                v = x.iter().map(|&e| BigInt::from(e)).collect();
            }
        }
        Ok(v)
    }
}

/// The transvection T_c(x) = x + ⟨c, x⟩ c, i.e. I + c cᵀJ.
pub fn dehn_twist_matrix(c: &[BigInt], g: usize) -> Result<SymplecticMatrix> {
    if c.len() != 2 * g {
        return Err(Error::Dimension(format!("class of length {} on genus {g}", c.len())));
    }
    let j = symplectic_form(g);
    let mut m = IntMatrix::identity(2 * g);
    for col in 0..2 * g {
        // (cᵀJ)_col
        let w: BigInt = (0..2 * g).map(|k| &c[k] * j.get(k, col)).sum();
        if w.is_zero() {
            continue;
        }
        for row in 0..2 * g {
            let v = m.get(row, col) + &c[row] * &w;
            m.set(row, col, v);
        }
    }
    Ok(SymplecticMatrix { g, entries: m })
}

pub fn curve_twist(curve: &Curve, g: usize) -> Result<SymplecticMatrix> {
    dehn_twist_matrix(&curve.class(g)?, g)
}

/// Genus-2 Humphries curves t₁..t₅: a₁, b₁, a₁+a₂, b₂, a₂.
pub fn humphries_curves() -> [Curve; 5] {
    [
        Curve::A(1),
        Curve::B(1),
        Curve::Vector(vec![1, 1, 0, 0]),
        Curve::B(2),
        Curve::A(2),
    ]
}

pub fn humphries_generators() -> Vec<SymplecticMatrix> {
    humphries_curves()
        .iter()
        .map(|c| curve_twist(c, 2).expect("genus-2 curve"))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coeff {
    Z,
    Z2,
}

impl FromStr for Coeff {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "z" => Ok(Coeff::Z),
            "z2" => Ok(Coeff::Z2),
            _ => Err(Error::Invalid(format!("coefficients {s:?}"))),
        }
    }
}

/// Homology of the mapping torus M(f).
///
/// Over Z, H₁ = Z ⊕ Coker(f̂ − I) and H₂ ≅ H¹ is its free part. Over Z₂ both
/// are Z₂^b with b = 1 + dim ker(f̂ − I).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingTorusHomology {
    pub coeff: Coeff,
    /// Diagonal of SNF(f̂ − I) (over Z₂, its rank-many ones).
    #[serde(with = "crate::serde_util::bigint_vec")]
    pub snf_diagonal: Vec<BigInt>,
    pub h1: AbelianGroup,
    pub h2: AbelianGroup,
    /// Rank of H₁ (over Z) or its dimension (over Z₂).
    pub rank: usize,
}

impl MappingTorusHomology {
    pub fn describe(&self) -> String {
        match self.coeff {
            Coeff::Z => format!("H1 = {}, H2 = {}", self.h1, self.h2),
            Coeff::Z2 => format!("H1 = Z2^{0}, H2 = Z2^{0}", self.rank),
        }
    }
}

pub fn mapping_torus_homology(f: &SymplecticMatrix, coeff: Coeff) -> MappingTorusHomology {
    let n = 2 * f.g;
    let d = f.entries.sub(&IntMatrix::identity(n));
    match coeff {
        Coeff::Z => {
            let snf = smith_normal_form(&d);
            let coker = AbelianGroup::cokernel(&d);
            let h1 = AbelianGroup {
                free_rank: 1,
                torsion: vec![],
            }
            .direct_sum(&coker);
            let h2 = AbelianGroup {
                free_rank: h1.free_rank,
                torsion: vec![],
            };
            MappingTorusHomology {
                coeff,
                snf_diagonal: snf.diagonal,
                rank: h1.free_rank,
                h1,
                h2,
            }
        }
        Coeff::Z2 => {
            let r = d.mod2().rank();
            let b = 1 + n - r;
            let g = AbelianGroup {
                free_rank: b,
                torsion: vec![],
            };
            MappingTorusHomology {
                coeff,
                snf_diagonal: vec![BigInt::one(); r],
                h1: g.clone(),
                h2: g,
                rank: b,
            }
        }
    }
}

fn class_label(v: &BitVec, g: usize) -> String {
    let parts: Vec<String> = v
        .ones()
        .map(|i| {
            if i < g {
                format!("a({})", i + 1)
            } else {
                format!("b({})", i - g + 1)
            }
        })
        .collect();
    if parts.len() == 1 {
        format!("{}xc", parts[0])
    } else {
        format!("({})xc", parts.join("+"))
    }
}

/// Triple form on H₂(M(f); Z₂) with basis Γ (the fiber) followed by the
/// extensions v̂ of a basis of the invariant classes ker(f̂ − I) mod 2.
///
/// |Γ ∩ v̂ ∩ ŵ| is the surface intersection ⟨v, w⟩ mod 2; triples without Γ
/// are not determined by H₁ data and are marked unknown.
pub fn torelli_triple_form(f: &SymplecticMatrix) -> TripleForm {
    let g = f.g;
    let mut m = f.mod2();
    for i in 0..2 * g {
        m.set(i, i, m.get(i, i) ^ true);
    }
    let inv = m.kernel();
    let mut labels = vec![format!("Sigma_{g}")];
    labels.extend(inv.iter().map(|v| class_label(v, g)));
    let mut form = TripleForm::new(labels);
    let omega = |x: &BitVec, y: &BitVec| {
        (0..g)
            .filter(|&i| (x.get(i) && y.get(g + i)) ^ (x.get(g + i) && y.get(i)))
            .count()
            % 2
            == 1
    };
    let r = inv.len();
    for i in 0..r {
        for j in i + 1..r {
            if omega(&inv[i], &inv[j]) {
                form.set(0, i + 1, j + 1, Coefficient::One).expect("indices in range");
            }
            for l in j + 1..r {
                form.set(i + 1, j + 1, l + 1, Coefficient::Unknown)
                    .expect("indices in range");
            }
        }
    }
    form
}

/// Letters of a word in T_A, T_B and their inverses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Letter {
    A,
    B,
    AInv,
    BInv,
}

/// Parses `"A B A^-1 b"`: lowercase letters and `^-1` denote inverses and
/// `^n` repeats a letter.
pub fn parse_word(s: &str) -> Result<Vec<Letter>> {
    let mut out = Vec::new();
    for tok in s
        .split(|c: char| c.is_whitespace() || c == '.' || c == '*')
        .filter(|t| !t.is_empty())
    {
        let (head, exp) = match tok.split_once('^') {
            Some((h, e)) => (
                h,
                e.trim_matches(|c| c == '(' || c == ')')
                    .parse::<i64>()
                    .map_err(|_| Error::Invalid(format!("exponent in {tok:?}")))?,
            ),
            None => (tok, 1),
        };
        let (base, inv) = match head.trim_start_matches("T_").trim_start_matches('T') {
            "A" => (Letter::A, Letter::AInv),
            "B" => (Letter::B, Letter::BInv),
            "a" => (Letter::AInv, Letter::A),
            "b" => (Letter::BInv, Letter::B),
            _ => return Err(Error::Invalid(format!("word letter {tok:?}"))),
        };
        let l = if exp < 0 { inv } else { base };
        out.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
    }
    Ok(out)
}

/// Polynomial in s = √ν with integer coefficients, lowest degree first.
type SPoly = Vec<BigInt>;

fn spoly_mul(a: &SPoly, b: &SPoly) -> SPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn spoly_add(a: &SPoly, b: &SPoly) -> SPoly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] += x;
    }
    trim(out)
}

fn trim(mut v: SPoly) -> SPoly {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn spoly_eval(p: &SPoly, s: f64) -> f64 {
    p.iter()
        .rev()
        .fold(0.0, |acc, c| acc * s + c.to_f64().unwrap_or(f64::NAN))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThurstonReport {
    pub nu: f64,
    /// Trace of the word's image as integer coefficients of powers of √ν.
    pub trace_polynomial: Vec<String>,
    pub trace: f64,
    pub is_pseudo_anosov: bool,
    pub stretch_factor: f64,
    pub volume_upper_bound: Option<f64>,
}

impl ThurstonReport {
    pub fn describe(&self) -> String {
        format!(
            "ν≈{:.4} stretch≈{:.4} pA={}",
            self.nu,
            self.stretch_factor,
            if self.is_pseudo_anosov { "yes" } else { "no" }
        )
    }
}

fn irreducible(m: &[Vec<f64>]) -> bool {
    let n = m.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if !seen[j] && (m[i][j] != 0.0 || m[j][i] != 0.0) {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Perron–Frobenius eigenvalue of N·Nᵀ (closed form for 2×2, power
/// iteration otherwise).
pub fn perron_frobenius(n: &[Vec<i64>]) -> Result<f64> {
    if n.is_empty() || n.iter().any(|r| r.len() != n[0].len()) || n[0].is_empty() {
        return Err(Error::Dimension("N must be a nonempty rectangular matrix".into()));
    }
    if n.iter().flatten().any(|&x| x < 0) {
        return Err(Error::Invalid("N has negative entries".into()));
    }
    let r = n.len();
    let m: Vec<Vec<f64>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| n[i].iter().zip(&n[j]).map(|(a, b)| (a * b) as f64).sum())
                .collect()
        })
        .collect();
    if !irreducible(&m) || m.iter().all(|row| row.iter().all(|&x| x == 0.0)) {
        return Err(Error::Degenerate("N·Nᵀ is reducible".into()));
    }
    if r == 1 {
        return Ok(m[0][0]);
    }
    if r == 2 {
        let (p, q, s) = (m[0][0], m[0][1], m[1][1]);
        let half = (p - s) / 2.0;
        return Ok((p + s) / 2.0 + (half * half + q * q).sqrt());
    }
    // Shift by I so the iteration converges for periodic matrices too.
    let mut v = vec![1.0; r];
    let mut lambda = 0.0;
    for _ in 0..100_000 {
        let w: Vec<f64> = (0..r)
            .map(|i| v[i] + (0..r).map(|j| m[i][j] * v[j]).sum::<f64>())
            .collect();
        let norm = w.iter().cloned().fold(0.0, f64::max);
        let next: Vec<f64> = w.iter().map(|x| x / norm).collect();
        let done = (norm - 1.0 - lambda).abs() <= 1e-15 * norm;
        lambda = norm - 1.0;
        v = next;
        if done {
            break;
        }
    }
    Ok(lambda)
}

/// Thurston's representation T_A ↦ [[1, √ν], [0, 1]], T_B ↦ [[1, 0], [−√ν, 1]]
/// applied to a word (left to right product).
pub fn thurston(n: &[Vec<i64>], word: &[Letter], genus: Option<usize>) -> Result<ThurstonReport> {
    let nu = perron_frobenius(n)?;
    let one: SPoly = vec![BigInt::one()];
    let s_pos: SPoly = vec![BigInt::zero(), BigInt::one()];
    let s_neg: SPoly = vec![BigInt::zero(), -BigInt::one()];
    let mut m: [[SPoly; 2]; 2] = [[one.clone(), Vec::new()], [Vec::new(), one.clone()]];
    for &l in word {
        let g: [[SPoly; 2]; 2] = match l {
            Letter::A => [[one.clone(), s_pos.clone()], [Vec::new(), one.clone()]],
            Letter::AInv => [[one.clone(), s_neg.clone()], [Vec::new(), one.clone()]],
            Letter::B => [[one.clone(), Vec::new()], [s_neg.clone(), one.clone()]],
            Letter::BInv => [[one.clone(), Vec::new()], [s_pos.clone(), one.clone()]],
        };
        let prod = |i: usize, j: usize| spoly_add(&spoly_mul(&m[i][0], &g[0][j]), &spoly_mul(&m[i][1], &g[1][j]));
        m = [[prod(0, 0), prod(0, 1)], [prod(1, 0), prod(1, 1)]];
    }
    let tr = spoly_add(&m[0][0], &m[1][1]);
    let s = nu.sqrt();
    let trace = spoly_eval(&tr, s);
    // A constant trace is exact; otherwise √ν is irrational or large enough
    // that the float comparison is decisive.
    let exact_two = tr.len() <= 1 && tr.first().map_or(BigInt::zero(), Clone::clone).abs() <= BigInt::from(2);
    let is_pa = !exact_two && trace.abs() > 2.0;
    let t = trace.abs();
    let stretch = if t > 2.0 { (t + (t * t - 4.0).sqrt()) / 2.0 } else { 1.0 };
    let volume_upper_bound = genus.map(|g| 3.0 * std::f64::consts::PI * (2.0 * g as f64 - 2.0) * stretch.ln());
    Ok(ThurstonReport {
        nu,
        trace_polynomial: tr.iter().map(ToString::to_string).collect(),
        trace,
        is_pseudo_anosov: is_pa,
        stretch_factor: stretch,
        volume_upper_bound,
    })
}

/// Homology action of a thickened Dehn twist D̃_{γ×c} on Σ_g × S¹.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThickenedTwist {
    pub g: usize,
    /// Curve labels, rightmost applied first.
    pub sequence: Vec<String>,
    /// H₁ map on (a₁..a_g, b₁..b_g, c).
    pub h1: IntMatrix,
    /// H₂ map on (a₁×c..a_g×c, b₁×c..b_g×c, Σ_g).
    pub h2: IntMatrix,
    pub h2_labels: Vec<String>,
    /// Logical CNOTs (control, target) in application order, for the X̄
    /// operators of toric-code copy 1.
    pub cnots: Vec<(String, String)>,
}

pub fn membrane_labels(g: usize) -> Vec<String> {
    let mut l: Vec<String> = (1..=g).map(|i| format!("a({i})xc")).collect();
    l.extend((1..=g).map(|i| format!("b({i})xc")));
    l.push(format!("Sigma_{g}"));
    l
}

fn thicken(t: &SymplecticMatrix) -> IntMatrix {
    let n = 2 * t.g;
    let mut m = IntMatrix::identity(n + 1);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, t.entries.get(i, j).clone());
        }
    }
    m
}

/// CNOTs realizing an invertible GF(2) map on X̄ operators (columns are
/// images). Commuting CNOTs are read off directly; otherwise the map is
/// synthesized by elimination.
pub fn cnot_decomposition(m: &BitMatrix) -> Result<Vec<(usize, usize)>> {
    let n = m.nrows();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && m.get(i, j) {
                pairs.push((j, i));
            }
        }
    }
    let diag_ok = (0..n).all(|i| m.get(i, i));
    let controls: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    if diag_ok && pairs.iter().all(|p| !controls.contains(&p.1)) {
        pairs.sort();
        return Ok(pairs);
    }
    // Row reduction: adding row c to row t is left multiplication by the
    // X̄ map of CNOT(c, t); M = E₁⋯E_k, so E_k acts first.
    let mut a = m.clone();
    let mut ops = Vec::new();
    for col in 0..n {
        if !a.get(col, col) {
            let p = (col + 1..n)
                .find(|&r| a.get(r, col))
                .ok_or_else(|| Error::InvalidMap("map is not invertible".into()))?;
            add_row(&mut a, col, p);
            ops.push((p, col));
        }
        for r in 0..n {
            if r != col && a.get(r, col) {
                add_row(&mut a, r, col);
                ops.push((col, r));
            }
        }
    }
    ops.reverse();
    Ok(ops)
}

fn add_row(a: &mut BitMatrix, target: usize, source: usize) {
    let src = a.row(source).clone();
    let mut row = a.row(target).clone();
    row.xor_assign(&src);
    for j in 0..a.ncols() {
        a.set(target, j, row.get(j));
    }
}

/// The product D̃_{γ_1} ⋯ D̃_{γ_k} (γ_k applied first) and its logical reading.
pub fn thickened_dehn_twist_action(sequence: &[Curve], g: usize) -> Result<ThickenedTwist> {
    let mut t = SymplecticMatrix::identity(g);
    for c in sequence {
        t = t.mul(&curve_twist(c, g)?);
    }
    let h1 = thicken(&t);
    let h2 = h1.clone();
    let labels = membrane_labels(g);
    let cnots = cnot_decomposition(&h2.mod2())?
        .into_iter()
        .map(|(c, x)| (format!("({};1)", labels[c]), format!("({};1)", labels[x])))
        .collect();
    Ok(ThickenedTwist {
        g,
        sequence: sequence.iter().map(ToString::to_string).collect(),
        h1,
        h2,
        h2_labels: labels,
        cnots,
    })
}

/// Parses `"b:2 b:1 f:1"` into curves.
pub fn parse_sequence(s: &str) -> Result<Vec<Curve>> {
    s.split_whitespace().map(str::parse).collect()
}

/// Whether D̃_{b(i+1)×c} D̃_{b(i)×c} D̃_{f(i)×c} acts on Z₂ membranes as
/// CNOT((a(i)×c;1),(b(i+1)×c;1)) · CNOT((a(i+1)×c;1),(b(i)×c;1)).
pub fn verify_cnot_between_genus(g: usize, i: usize) -> Result<bool> {
    if i == 0 || i >= g {
        return Err(Error::OutOfRange(format!("i = {i} on genus {g}")));
    }
    let act = thickened_dehn_twist_action(&[Curve::B(i + 1), Curve::B(i), Curve::F(i)], g)?;
    let mut expected = BitMatrix::identity(2 * g + 1);
    // Column = image of X̄(control): gains the target.
    expected.set(g + i, i - 1, true);
    expected.set(g + i - 1, i, true);
    Ok(act.h2.mod2() == expected)
}

/// Matrix of φ_* on H₁(K; Z₂) in the canonical homology basis of K.
pub fn induced_h1_action_mod2(k: &DeltaComplex, phi: &SimplicialMap) -> BitMatrix {
    let hb = homology_basis(k, 1);
    let r = hb.cycles.len();
    let mut m = BitMatrix::zeros(r, r);
    for (j, z) in hb.cycles.iter().enumerate() {
        let img = phi.apply_chain(1, z, k.count(1));
        for i in 0..r {
            m.set(i, j, hb.cocycles[i].dot(&img));
        }
    }
    m
}

/// Intersection form on τ-invariant classes of a cyclic cover compared with
/// the form on the quotient surface through the projection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagramCheck {
    pub sheets: u64,
    pub cover_genus: usize,
    pub invariant_dim: usize,
    pub quotient_dim: usize,
    pub projection_is_iso: bool,
    pub restricted_form: Vec<Vec<u8>>,
    pub quotient_form: Vec<Vec<u8>>,
    pub commutes: bool,
}

/// Builds the m-sheeted cyclic cover of a closed surface classified by the
/// prescribed edge values, and checks that π_* : I(τ_*) → H₁(base; Z₂) is an
/// isometry of the intersection forms.
pub fn commutative_diagram_check(base: &DeltaComplex, m: u64, prescribed: &[(usize, u64)]) -> Result<DiagramCheck> {
    let rho = extend_cocycle_mod(base, m, prescribed)?;
    let cc = cyclic_cover(base, m, &rho)?;
    let cover = &cc.cover;
    let hb = homology_basis(cover, 1);
    let tau = induced_h1_action_mod2(cover, &cc.deck);
    let r = hb.cycles.len();
    let mut fixed = tau.clone();
    for i in 0..r {
        fixed.set(i, i, tau.get(i, i) ^ true);
    }
    let invariant: Vec<BitVec> = fixed
        .kernel()
        .into_iter()
        .map(|coords| {
            let mut z = BitVec::zeros(cover.count(1));
            for j in coords.ones() {
                z.xor_assign(&hb.cycles[j]);
            }
            z
        })
        .collect();
    let duals = |k: &DeltaComplex, zs: &[BitVec]| -> Result<Vec<Cochain>> {
        zs.iter()
            .map(|z| Ok(Cochain::from_values(1, poincare_dual(k, z, 1)?)))
            .collect()
    };
    let form = |k: &DeltaComplex, cs: &[Cochain]| -> Vec<Vec<u8>> {
        cs.iter()
            .map(|a| cs.iter().map(|b| cup_integral(k, a, b) as u8).collect())
            .collect()
    };
    let up = duals(cover, &invariant)?;
    let pushed: Vec<BitVec> = invariant
        .iter()
        .map(|z| cc.projection.apply_chain(1, z, base.count(1)))
        .collect();
    let down = duals(base, &pushed)?;
    let base_hb = homology_basis(base, 1);
    let coords = BitMatrix::from_rows(
        base_hb.cycles.len(),
        pushed
            .iter()
            .map(|z| {
                BitVec::from_indices(
                    base_hb.cycles.len(),
                    (0..base_hb.cycles.len()).filter(|&i| base_hb.cocycles[i].dot(z)),
                )
            })
            .collect(),
    );
    let projection_is_iso = invariant.len() == base_hb.cycles.len() && coords.rank() == invariant.len();
    let restricted_form = form(cover, &up);
    let quotient_form = form(base, &down);
    Ok(DiagramCheck {
        sheets: m,
        cover_genus: r / 2,
        invariant_dim: invariant.len(),
        quotient_dim: base_hb.cycles.len(),
        projection_is_iso,
        commutes: projection_is_iso && restricted_form == quotient_form,
        restricted_form,
        quotient_form,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_sigma_g, build_sigma_g_coned, handle_rotation, mapping_torus, product_with_circle};
    use crate::homology::betti;
    use proptest::prelude::*;

    fn m(rows: &[[i64; 4]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn humphries_matrices() {
        let t = humphries_generators();
        let expected = [
            m(&[[1, 0, 1, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]),
            m(&[[1, 0, 0, 0], [0, 1, 0, 0], [-1, 0, 1, 0], [0, 0, 0, 1]]),
            m(&[[1, 0, 1, 1], [0, 1, 1, 1], [0, 0, 1, 0], [0, 0, 0, 1]]),
            m(&[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, -1, 0, 1]]),
            m(&[[1, 0, 0, 0], [0, 1, 0, 1], [0, 0, 1, 0], [0, 0, 0, 1]]),
        ];
        for (a, b) in t.iter().zip(&expected) {
            assert_eq!(&a.entries, b);
            assert!(is_symplectic(&a.entries, 2));
        }
    }

    #[test]
    fn null_homologous_twist_is_trivial() {
        let t = dehn_twist_matrix(&[BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()], 2).unwrap();
        assert!(t.is_torelli());
    }

    #[test]
    fn t5_powers() {
        let t5 = &humphries_generators()[4];
        for a in [1i64, 2, 5, 100] {
            let h = mapping_torus_homology(&t5.pow(a), Coeff::Z);
            let mut d = vec![BigInt::from(a)];
            d.extend([0, 0, 0].map(BigInt::from));
            assert_eq!(h.snf_diagonal, d);
            assert_eq!(h.h1.free_rank, 4);
            let torsion: Vec<BigInt> = if a > 1 { vec![BigInt::from(a)] } else { vec![] };
            assert_eq!(h.h1.torsion, torsion);
            assert_eq!(h.h2.free_rank, 4);
        }
    }

    #[test]
    fn torelli_rank_is_maximal() {
        for g in 1..=4 {
            let id = SymplecticMatrix::identity(g);
            assert_eq!(mapping_torus_homology(&id, Coeff::Z).rank, 2 * g + 1);
            let z2 = mapping_torus_homology(&id, Coeff::Z2);
            assert_eq!(z2.rank, 2 * g + 1);
            let prod = product_with_circle(&build_sigma_g(g).unwrap(), 1).unwrap();
            assert_eq!(betti(&prod, 1), z2.rank);
        }
    }

    #[test]
    fn generic_word_has_rank_one() {
        let t = humphries_generators();
        let w = t[0].mul(&t[1]).mul(&t[2]).mul(&t[3]).mul(&t[4]);
        assert_eq!(mapping_torus_homology(&w, Coeff::Z).rank, 1);
        assert!(torelli_triple_form(&w).is_zero());
    }

    #[test]
    fn twisted_bundle_matches_complex() {
        let g = 2;
        let s = build_sigma_g_coned(g).unwrap();
        let rot = handle_rotation(g).unwrap();
        let mt = mapping_torus(&s, &rot, 2).unwrap();
        // Handle rotation permutes (a₁, a₂) and (b₁, b₂).
        let f = SymplecticMatrix::from_rows(
            2,
            &[vec![0, 1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 0, 1], vec![0, 0, 1, 0]],
        )
        .unwrap();
        assert_eq!(betti(&mt, 1), mapping_torus_homology(&f, Coeff::Z2).rank);
        assert_eq!(betti(&mt, 1), 3);
    }

    #[test]
    fn torelli_forms() {
        for g in 1..=4 {
            let form = torelli_triple_form(&SymplecticMatrix::identity(g));
            assert_eq!(form.rank(), 2 * g + 1);
            let units = form.unit_triples();
            assert_eq!(units.len(), g);
            for i in 1..=g {
                assert!(units.contains(&[0, i, g + i]));
            }
        }
        assert_eq!(torelli_triple_form(&SymplecticMatrix::identity(3)).rank(), 7);
        // Rank-1 cokernel: only the fiber survives.
        let t = humphries_generators();
        let w = t[0].mul(&t[1]).mul(&t[2]).mul(&t[3]).mul(&t[4]);
        assert_eq!(torelli_triple_form(&w).rank(), 1);
        // t5 fixes a₁, b₁, a₂ with ⟨a₁, b₁⟩ = 1.
        let f5 = torelli_triple_form(&t[4]);
        assert_eq!(f5.rank(), 4);
        assert_eq!(f5.unit_triples().len(), 1);
        assert_eq!(f5.unknown_triples().len(), 1);
    }

    #[test]
    fn thurston_example() {
        let n = vec![vec![8, 4], vec![4, 0]];
        let r = thurston(&n, &parse_word("A B").unwrap(), Some(3)).unwrap();
        let s2 = 2f64.sqrt();
        assert!((r.nu - 16.0 * (3.0 + 2.0 * s2)).abs() < 1e-9);
        let closed = 23.0 + 16.0 * s2 + 4.0 * (65.0 + 46.0 * s2).sqrt();
        assert!((r.stretch_factor - closed).abs() < 1e-6);
        assert!((r.stretch_factor - 91.2439).abs() < 1e-4);
        assert!(r.is_pseudo_anosov);
        assert_eq!(r.describe(), "ν≈93.2548 stretch≈91.2439 pA=yes");
        let vol = r.volume_upper_bound.unwrap();
        assert!((vol - 12.0 * std::f64::consts::PI * closed.ln()).abs() < 1e-9);
        let id = thurston(&n, &parse_word("A A^-1").unwrap(), None).unwrap();
        assert!(!id.is_pseudo_anosov);
        assert_eq!(id.trace, 2.0);
        assert!(thurston(&[vec![1, 0], vec![0, 1]], &[], None).is_err());
    }

    #[test]
    fn word_parsing() {
        assert_eq!(
            parse_word("A b^2 T_B^-1").unwrap(),
            vec![Letter::A, Letter::BInv, Letter::BInv, Letter::BInv]
        );
        assert!(parse_word("C").is_err());
    }

    #[test]
    fn power_iteration_matches_closed_form() {
        let n = vec![vec![2, 1, 0], vec![1, 1, 1], vec![0, 1, 3]];
        let nu = perron_frobenius(&n).unwrap();
        // Largest eigenvalue of N·Nᵀ by a residual check.
        let nn: Vec<Vec<f64>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| (0..3).map(|k| (n[i][k] * n[j][k]) as f64).sum())
                    .collect()
            })
            .collect();
        let det = |l: f64| {
            let a: Vec<Vec<f64>> = (0..3)
                .map(|i| (0..3).map(|j| nn[i][j] - if i == j { l } else { 0.0 }).collect())
                .collect();
            a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
        };
        assert!(det(nu).abs() < 1e-6 * nu.powi(3));
        let trace: f64 = (0..3).map(|i| nn[i][i]).sum();
        assert!(nu > trace / 3.0);
    }

    #[test]
    fn thickened_twists() {
        let g = 3;
        let b = thickened_dehn_twist_action(&[Curve::B(2)], g).unwrap();
        assert_eq!(b.cnots, vec![("(a(2)xc;1)".to_string(), "(b(2)xc;1)".to_string())]);
        let a = thickened_dehn_twist_action(&[Curve::A(2)], g).unwrap();
        assert_eq!(a.cnots, vec![("(b(2)xc;1)".to_string(), "(a(2)xc;1)".to_string())]);
        let seq = thickened_dehn_twist_action(&parse_sequence("b:2 b:1 f:1").unwrap(), g).unwrap();
        let mut got = seq.cnots.clone();
        got.sort();
        assert_eq!(
            got,
            vec![
                ("(a(1)xc;1)".to_string(), "(b(2)xc;1)".to_string()),
                ("(a(2)xc;1)".to_string(), "(b(1)xc;1)".to_string()),
            ]
        );
        for g in 2..=6 {
            for i in 1..g {
                assert!(verify_cnot_between_genus(g, i).unwrap());
            }
        }
        assert!(verify_cnot_between_genus(3, 3).is_err());
        assert!(thickened_dehn_twist_action(&[Curve::F(3)], 3).is_err());
    }

    #[test]
    fn elimination_synthesis_reproduces_the_map() {
        // A 3-cycle of CNOTs that is not a commuting product.
        let mut mtx = BitMatrix::identity(3);
        mtx.set(1, 0, true);
        mtx.set(2, 1, true);
        let ops = cnot_decomposition(&mtx).unwrap();
        let mut acc = BitMatrix::identity(3);
        for (c, t) in ops {
            let mut e = BitMatrix::identity(3);
            e.set(t, c, true);
            acc = e.mul(&acc);
        }
        assert_eq!(acc, mtx);
    }

    #[test]
    fn covering_diagram_commutes() {
        let base = build_sigma_g(2).unwrap();
        let check = commutative_diagram_check(&base, 3, &[(0, 1), (1, 0), (2, 0), (3, 0)]).unwrap();
        assert_eq!(check.cover_genus, 4);
        assert_eq!(check.invariant_dim, 4);
        assert!(check.projection_is_iso);
        assert!(check.commutes);
    }

    fn arb_word() -> impl Strategy<Value = Vec<(usize, i64)>> {
        proptest::collection::vec((0usize..5, -3i64..=3), 0..12)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn humphries_words_are_symplectic(w in arb_word()) {
            let t = humphries_generators();
            let mut acc = SymplecticMatrix::identity(2);
            for (i, e) in w {
                acc = acc.mul(&t[i].pow(e));
            }
            prop_assert!(is_symplectic(&acc.entries, 2));
            prop_assert!(acc.mul(&acc.inverse()).is_torelli());
        }

        #[test]
        fn transvections_are_symplectic(g in 1usize..5, c in proptest::collection::vec(-4i64..=4, 8)) {
            let v: Vec<BigInt> = c[..2 * g].iter().map(|&x| BigInt::from(x)).collect();
            let t = dehn_twist_matrix(&v, g).unwrap();
            prop_assert!(is_symplectic(&t.entries, g));
            prop_assert_eq!(t.apply(&v), v);
        }
    }
}
