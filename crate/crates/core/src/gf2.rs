//! Bit-packed linear algebra over GF(2).
//!
//! Elimination always picks the lowest available pivot index, so every
//! basis produced here is a deterministic function of its input.

use std::fmt;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &BitVec) -> BitVec {
        assert_eq!(self.len, other.len, "length mismatch");
        BitVec {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    /// Number of positions where both vectors are set.
    pub fn overlap(&self, other: &BitVec) -> usize {
        assert_eq!(self.len, other.len, "length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    #[inline]
    pub fn dot(&self, other: &BitVec) -> bool {
        self.overlap(other) % 2 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * WORD + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn ones(&self) -> Ones<'_> {
        Ones {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_indices(&self) -> Vec<usize> {
        self.ones().collect()
    }

    /// Concatenation `self ‖ other`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.ones() {
            out.set(i, true);
        }
        for i in other.ones() {
            out.set(self.len + i, true);
        }
        out
    }

    pub fn slice(&self, start: usize, end: usize) -> BitVec {
        BitVec::from_indices(
            end - start,
            self.ones().filter(|&i| i >= start && i < end).map(|i| i - start),
        )
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec[{}]{:?}", self.len, self.to_indices())
    }
}

pub struct Ones<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

/// Dense GF(2) matrix stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows.len(), self.cols)?;
        for r in &self.rows {
            let line: String = (0..self.cols).map(|j| if r.get(j) { '1' } else { '.' }).collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            cols,
            rows: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix {
            cols: n,
            rows: (0..n).map(|i| BitVec::unit(n, i)).collect(),
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length mismatch");
        }
        BitMatrix { cols, rows }
    }

    pub fn from_dense(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        BitMatrix {
            cols,
            rows: rows
                .iter()
                .map(|r| {
                    assert_eq!(r.len(), cols, "ragged matrix");
                    BitVec::from_indices(cols, r.iter().enumerate().filter(|(_, &x)| x % 2 == 1).map(|(j, _)| j))
                })
                .collect(),
        }
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVec> {
        self.rows
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value);
    }

    pub fn push_row(&mut self, row: BitVec) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.rows.push(row);
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    /// `self · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        BitVec::from_bools(&self.rows.iter().map(|r| r.dot(v)).collect::<Vec<_>>())
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.nrows(), "dimension mismatch");
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = BitVec::zeros(other.cols);
                for k in r.ones() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        BitMatrix { cols: other.cols, rows }
    }

    /// Reduced row echelon form and the pivot column of each nonzero row.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..m.len()).find(|&i| m[i].get(c)) else {
                continue;
            };
            m.swap(r, p);
            let pivot_row = m[r].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i != r && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
            if r == m.len() {
                break;
            }
        }
        m.truncate(r);
        (
            BitMatrix {
                cols: self.cols,
                rows: m,
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.cols);
        for r in &self.rows {
            e.insert(r.clone());
        }
        e.rank()
    }

    /// Basis of `{x : self · x = 0}`, one vector per free column in increasing order.
    pub fn kernel(&self) -> Vec<BitVec> {
        let (rref, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut x = BitVec::unit(self.cols, f);
                for (row, &p) in rref.rows.iter().zip(&pivots) {
                    if row.get(f) {
                        x.set(p, true);
                    }
                }
                x
            })
            .collect()
    }

    /// Some `x` with `self · x = b`, if one exists.
    pub fn solve(&self, b: &BitVec) -> Option<BitVec> {
        assert_eq!(b.len(), self.rows.len(), "dimension mismatch");
        let mut e = Echelon::tracked(self.cols, self.rows.len());
        for c in self.transpose().rows {
            e.insert(c);
        }
        let (rest, combo) = e.reduce_tracked(b);
        rest.is_zero().then_some(combo)
    }

    pub fn inverse(&self) -> Option<BitMatrix> {
        let n = self.rows.len();
        if n != self.cols {
            return None;
        }
        let mut e = Echelon::tracked(n, n);
        for r in &self.rows {
            if !e.insert(r.clone()) {
                return None;
            }
        }
        // Row i of the inverse expresses e_i in terms of the rows of self.
        let rows = (0..n)
            .map(|i| {
                let (rest, combo) = e.reduce_tracked(&BitVec::unit(n, i));
                debug_assert!(rest.is_zero());
                combo
            })
            .collect::<Vec<_>>();
        // combo_i · self = e_i, so stacking gives X with X·self = I.
        Some(BitMatrix { cols: n, rows })
    }

    pub fn vstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.cols, "column mismatch");
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        BitMatrix { cols: self.cols, rows }
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|r| (0..self.cols).map(|j| r.get(j) as u8).collect())
            .collect()
    }
}

/// Incrementally maintained reduced row basis.
///
/// Every stored row has a distinct pivot (its lowest set bit) and no other
/// stored row has that bit set, so reduction is a single pass.
#[derive(Clone, Debug)]
pub struct Echelon {
    width: usize,
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
    combos: Option<Vec<BitVec>>,
    capacity: usize,
    inserted: usize,
}

impl Echelon {
    pub fn new(width: usize) -> Self {
        Echelon {
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
            combos: None,
            capacity: 0,
            inserted: 0,
        }
    }

    /// Echelon that records each stored row as a combination of the
    /// (at most `capacity`) vectors inserted so far.
    pub fn tracked(capacity: usize, width: usize) -> Self {
        Echelon {
            combos: Some(Vec::new()),
            capacity,
            ..Echelon::new(width)
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut out = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                out.xor_assign(row);
            }
        }
        out
    }

    /// Reduction together with the combination of inserted vectors that was
    /// subtracted: `v = rest + Σ combo_i · inserted_i`.
    pub fn reduce_tracked(&self, v: &BitVec) -> (BitVec, BitVec) {
        let combos = self.combos.as_ref().expect("echelon is not tracked");
        let mut out = v.clone();
        let mut combo = BitVec::zeros(self.capacity);
        for ((row, &p), c) in self.rows.iter().zip(&self.pivots).zip(combos) {
            if v.get(p) {
                out.xor_assign(row);
                combo.xor_assign(c);
            }
        }
        (out, combo)
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v`; returns whether it was independent of the stored rows.
    pub fn insert(&mut self, v: BitVec) -> bool {
        assert_eq!(v.len(), self.width, "width mismatch");
        let index = self.inserted;
        self.inserted += 1;
        let (rest, mut combo) = match &self.combos {
            Some(_) => {
                let (r, c) = self.reduce_tracked(&v);
                (r, Some(c))
            }
            None => (self.reduce(&v), None),
        };
        let Some(p) = rest.first_one() else {
            return false;
        };
        if let Some(c) = combo.as_mut() {
            assert!(index < self.capacity, "tracked echelon capacity exceeded");
            c.flip(index);
        }
        for k in 0..self.rows.len() {
            if self.rows[k].get(p) {
                self.rows[k].xor_assign(&rest);
                if let (Some(cs), Some(c)) = (self.combos.as_mut(), combo.as_ref()) {
                    cs[k].xor_assign(c);
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, rest);
        self.pivots.insert(at, p);
        if let (Some(cs), Some(c)) = (self.combos.as_mut(), combo) {
            cs.insert(at, c);
        }
        true
    }
}

/// Indices of the vectors in `candidates` that extend `base` to a larger
/// independent set, chosen greedily in order.
pub fn complement_indices(base: &Echelon, candidates: &[BitVec]) -> Vec<usize> {
    let mut e = base.clone();
    candidates
        .iter()
        .enumerate()
        .filter_map(|(i, v)| e.insert(v.clone()).then_some(i))
        .collect()
}
