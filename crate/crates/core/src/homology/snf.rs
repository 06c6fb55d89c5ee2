//! Integer matrices and Smith normal form over arbitrary-precision integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{:?}", self.to_rows())
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row.iter().cloned().map(Into::into));
        }
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).clone()).collect())
            .collect()
    }

    /// Entries as i64 when they all fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| i64::try_from(self.get(i, j)).ok()).collect())
            .collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> IntMatrix {
        assert_eq!(self.rows, self.cols, "power of a non-square matrix");
        let mut result = IntMatrix::identity(self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }

    /// Reduction mod 2 as a GF(2) matrix.
    pub fn mod2(&self) -> crate::gf2::BitMatrix {
        let rows = (0..self.rows)
            .map(|i| crate::gf2::BitVec::from_indices(self.cols, (0..self.cols).filter(|&j| self.get(i, j).is_odd())))
            .collect();
        crate::gf2::BitMatrix::from_rows(self.cols, rows)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    // row[dst] += f * row[src]
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(src, j) * f;
            self.data[dst * self.cols + j] += v;
        }
    }

    // col[dst] += f * col[src]
    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, src) * f;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self.get(r, j);
            self.set(r, j, v);
        }
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let m = MatrixJson::deserialize(d)?;
        m.to_matrix().map_err(serde::de::Error::custom)
    }
}

/// `{"rows": r, "cols": c, "entries": [[...], ...]}` with decimal entries.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<serde_json::Value>>,
}

impl From<&IntMatrix> for MatrixJson {
    fn from(m: &IntMatrix) -> Self {
        MatrixJson {
            rows: m.rows,
            cols: m.cols,
            entries: m
                .to_rows()
                .into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|v| match i64::try_from(&v) {
                            Ok(x) => serde_json::Value::from(x),
                            Err(_) => serde_json::Value::from(v.to_string()),
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<IntMatrix, String> {
        if self.entries.len() != self.rows {
            return Err(format!("expected {} rows, found {}", self.rows, self.entries.len()));
        }
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != self.cols {
                return Err(format!("row {i} has {} entries, expected {}", row.len(), self.cols));
            }
            for (j, v) in row.iter().enumerate() {
                let x: BigInt = match v {
                    serde_json::Value::Number(n) => n
                        .as_i64()
                        .map(BigInt::from)
                        .ok_or_else(|| format!("entry ({i},{j}) is not an integer"))?,
                    serde_json::Value::String(s) => {
                        s.parse().map_err(|_| format!("entry ({i},{j}) is not an integer"))?
                    }
                    _ => return Err(format!("entry ({i},{j}) is not an integer")),
                };
                m.set(i, j, x);
            }
        }
        Ok(m)
    }
}

/// `P·M·Q = D` with `D` diagonal, `A(i) | A(i+1)`, and `P`, `Q` unimodular.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub diagonal: Vec<BigInt>,
    pub p: IntMatrix,
    pub q: IntMatrix,
    pub d: IntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|a| !a.is_zero()).count()
    }
}

/// Smith normal form by unimodular row and column reduction.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut p = IntMatrix::identity(r);
    let mut q = IntMatrix::identity(c);
    let steps = r.min(c);
    'outer: for t in 0..steps {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let v = a.get(i, j);
                    if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                break 'outer;
            };
            a.swap_rows(t, bi);
            p.swap_rows(t, bi);
            a.swap_cols(t, bj);
            q.swap_cols(t, bj);
            let mut clean = true;
            for i in t + 1..r {
                if !a.get(i, t).is_zero() {
                    let f = -(a.get(i, t) / a.get(t, t));
                    a.add_row(i, t, &f);
                    p.add_row(i, t, &f);
                    clean &= a.get(i, t).is_zero();
                }
            }
            for j in t + 1..c {
                if !a.get(t, j).is_zero() {
                    let f = -(a.get(t, j) / a.get(t, t));
                    a.add_col(j, t, &f);
                    q.add_col(j, t, &f);
                    clean &= a.get(t, j).is_zero();
                }
            }
            if !clean {
                continue;
            }
            let pivot = a.get(t, t).clone();
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row(t, i, &one);
                    p.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            p.negate_row(t);
        }
    }
    let diagonal = (0..steps).map(|i| a.get(i, i).clone()).collect();
    SnfResult { diagonal, p, q, d: a }
}

/// Basis of the integer kernel `{x ∈ Zⁿ : M·x = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    (rank..m.cols)
        .map(|j| (0..m.cols).map(|i| snf.q.get(i, j).clone()).collect())
        .collect()
}

/// A finitely generated abelian group Z^free ⊕ ⊕ Z/tᵢ with tᵢ > 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    #[serde(with = "crate::serde_util::bigint_vec")]
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    /// Cokernel Zʳ / im(M) of an r×c matrix.
    pub fn cokernel(m: &IntMatrix) -> AbelianGroup {
        let snf = smith_normal_form(m);
        let rank = snf.rank();
        AbelianGroup {
            free_rank: m.rows - rank,
            torsion: snf
                .diagonal
                .iter()
                .filter(|a| !a.is_zero() && !a.is_one())
                .cloned()
                .collect(),
        }
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut torsion = self.torsion.clone();
        torsion.extend(other.torsion.iter().cloned());
        torsion.sort();
        AbelianGroup {
            free_rank: self.free_rank + other.free_rank,
            torsion,
        }
    }

    /// Dimension of G ⊗ Z₂.
    pub fn rank_mod2(&self) -> usize {
        self.free_rank + self.torsion.iter().filter(|t| t.is_even()).count()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            n => parts.push(format!("Z^{n}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(m: &IntMatrix) -> SnfResult {
        let s = smith_normal_form(m);
        assert_eq!(s.p.mul(m).mul(&s.q), s.d);
        assert!(s.p.is_unimodular() && s.q.is_unimodular());
        for i in 0..s.d.nrows() {
            for j in 0..s.d.ncols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        for w in s.diagonal.windows(2) {
            if !w[0].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]));
            } else {
                assert!(w[1].is_zero());
            }
        }
        assert!(s.diagonal.iter().all(|a| !a.is_negative()));
        s
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k);
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }

    // D(i) = gcd of all i×i minors; A(i) = D(i)/D(i−1).
    fn minor_gcd_invariants(m: &IntMatrix) -> Vec<BigInt> {
        let mut d_prev = BigInt::one();
        let mut out = Vec::new();
        for k in 1..=m.nrows().min(m.ncols()) {
            let mut g = BigInt::zero();
            for rs in subsets(m.nrows(), k) {
                for cs in subsets(m.ncols(), k) {
                    let sub = IntMatrix::from_rows(
                        &rs.iter()
                            .map(|&i| cs.iter().map(|&j| m.get(i, j).clone()).collect())
                            .collect::<Vec<Vec<BigInt>>>(),
                    );
                    g = g.gcd(&sub.det());
                }
            }
            if g.is_zero() {
                out.push(BigInt::zero());
                d_prev = BigInt::zero();
            } else {
                out.push(&g / &d_prev);
                d_prev = g;
            }
        }
        out
    }

    #[test]
    fn identity_3x3() {
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.diagonal, vec![BigInt::one(); 3]);
    }

    #[test]
    fn known_example() {
        let m = IntMatrix::from_rows(&[vec![2i64, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = check(&m);
        assert_eq!(s.diagonal, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn determinant() {
        let m = IntMatrix::from_rows(&[vec![2i64, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]);
        assert_eq!(m.det(), BigInt::from(6));
        let z = IntMatrix::from_rows(&[vec![0i64, 1], vec![0, 2]]);
        assert_eq!(z.det(), BigInt::zero());
    }

    #[test]
    fn cokernel_display() {
        let m = IntMatrix::from_rows(&[vec![2i64, 0], vec![0, 0], vec![0, 0]]);
        let g = AbelianGroup::cokernel(&m);
        assert_eq!(g.to_string(), "Z^2 + Z/2");
        assert_eq!(g.rank_mod2(), 3);
    }

    #[test]
    fn kernel_vectors() {
        let m = IntMatrix::from_rows(&[vec![1i64, 2, 3], vec![2, 4, 6]]);
        let k = integer_kernel(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            let col = IntMatrix::from_rows(&v.iter().map(|x| vec![x.clone()]).collect::<Vec<_>>());
            assert!(m.mul(&col).is_zero());
        }
    }

    fn arb_int_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-9i64..=9, c), r)
                .prop_map(|rows| IntMatrix::from_rows(&rows))
        })
    }

    fn arb_unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
        proptest::collection::vec((0..n, 0..n, -3i64..=3), 0..12).prop_map(move |ops| {
            let mut u = IntMatrix::identity(n);
            for (i, j, f) in ops {
                if i != j {
                    u.add_row(i, j, &BigInt::from(f));
                }
            }
            u
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn snf_matches_minor_gcd_oracle(m in arb_int_matrix()) {
            let s = check(&m);
            prop_assert_eq!(s.diagonal, minor_gcd_invariants(&m));
        }

        #[test]
        fn snf_invariant_under_unimodular_change(
            m in proptest::collection::vec(proptest::collection::vec(-9i64..=9, 4), 4),
            u in arb_unimodular(4),
            v in arb_unimodular(4),
        ) {
            let m = IntMatrix::from_rows(&m);
            let a = check(&m).diagonal;
            let b = check(&u.mul(&m).mul(&v)).diagonal;
            prop_assert_eq!(a, b);
        }
    }
}
