//! Dense linear algebra over the two-element field.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = BitVec::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_indices(len: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut v = BitVec::zeros(len);
        for i in idx {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, o: &BitVec) {
        debug_assert_eq!(self.len, o.len);
        for (a, b) in self.words.iter_mut().zip(&o.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Lowest set index.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "[{s}]")
    }
}

/// A subspace kept in reduced row echelon form: every pivot column is zero in
/// all rows but its own, so coordinates of a member can be read off at the pivots.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn spanned_by<'a>(dim: usize, vs: impl IntoIterator<Item = &'a BitVec>) -> Self {
        let mut e = Echelon::new(dim);
        for v in vs {
            e.insert(v.clone());
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut v = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.xor_assign(row);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: BitVec) -> bool {
        let r = self.reduce(&v);
        let Some(p) = r.first_one() else {
            return false;
        };
        for (row, _) in self.rows.iter_mut().zip(&self.pivots).filter(|(row, _)| row.get(p)) {
            row.xor_assign(&r);
        }
        self.rows.push(r);
        self.pivots.push(p);
        true
    }

    /// Coordinates of a member of the span with respect to `rows()`.
    pub fn coordinates(&self, v: &BitVec) -> Option<BitVec> {
        let mut c = BitVec::zeros(self.rows.len());
        for (k, &p) in self.pivots.iter().enumerate() {
            if v.get(p) {
                c.set(k, true);
            }
        }
        let mut check = BitVec::zeros(self.dim);
        for k in c.ones() {
            check.xor_assign(&self.rows[k]);
        }
        (check == *v).then_some(c)
    }
}

/// Rank of the matrix with the given columns.
pub fn rank(cols: &[BitVec], dim: usize) -> usize {
    Echelon::spanned_by(dim, cols).rank()
}

/// Basis of `{c : Σ c_j cols[j] = 0}`, vectors of length `cols.len()`.
pub fn kernel(cols: &[BitVec], dim: usize) -> Vec<BitVec> {
    let n = cols.len();
    // rows of the augmented [col | e_j] with pivots searched in the first part only
    let mut reduced: Vec<(BitVec, BitVec, usize)> = Vec::new();
    let mut kernel = Vec::new();
    for (j, col) in cols.iter().enumerate() {
        let mut v = col.clone();
        let mut comb = BitVec::unit(n, j);
        for (rv, rc, p) in &reduced {
            if v.get(*p) {
                v.xor_assign(rv);
                comb.xor_assign(rc);
            }
        }
        match v.first_one() {
            Some(p) => reduced.push((v, comb, p)),
            None => kernel.push(comb),
        }
    }
    debug_assert!(reduced.iter().all(|(v, _, _)| v.len() == dim));
    kernel
}

/// Product `a · b` where both are given by columns; `a` maps `F^m → F^k`,
/// `b` has columns in `F^m`.
pub fn mul_columns(a: &[BitVec], k: usize, b: &[BitVec]) -> Vec<BitVec> {
    b.iter()
        .map(|col| {
            let mut out = BitVec::zeros(k);
            for i in col.ones() {
                out.xor_assign(&a[i]);
            }
            out
        })
        .collect()
}

/// Basis of `span(a) ∩ span(b)`.
pub fn intersect(a: &[BitVec], b: &[BitVec], dim: usize) -> Vec<BitVec> {
    let stacked: Vec<BitVec> = a.iter().chain(b).cloned().collect();
    let mut out = Echelon::new(dim);
    for k in kernel(&stacked, dim) {
        let mut v = BitVec::zeros(dim);
        for i in k.ones().take_while(|&i| i < a.len()) {
            v.xor_assign(&a[i]);
        }
        out.insert(v);
    }
    out.rows
}
