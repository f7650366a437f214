//! Dense linear algebra over GF(2) on word-packed bit rows.
//!
//! [`BitMatrix`] stores rows contiguously, 64 columns per word. [`Subspace`]
//! keeps its basis in reduced row-echelon form, so two subspaces of the same
//! ambient space are equal exactly when their bases are equal.

use std::fmt;

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[inline]
fn xor_words(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "BitVec[{s}]")
    }
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; words_for(len)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.set(i, true);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_indices(bits.len(), bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i))
    }

    pub fn len(&self) -> usize {
        self.len
    }

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
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch");
        xor_words(&mut self.words, &other.words);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of set bits, ascending.
    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + b)
            })
        })
    }

    pub fn first_one(&self) -> Option<usize> {
        self.ones_iter().next()
    }

    /// Coordinates at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> BitVec {
        BitVec::from_indices(indices.len(), indices.iter().enumerate().filter(|(_, &i)| self.get(i)).map(|(k, _)| k))
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

/// Restriction of a function on the point set to the coordinates in `subset`.
pub fn restrict(v: &BitVec, subset: &[usize]) -> BitVec {
    v.select(subset)
}

/// A dense GF(2) matrix with word-packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n_rows: usize,
    n_cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.n_rows, self.n_cols)?;
        for r in 0..self.n_rows.min(32) {
            let s: String = (0..self.n_cols.min(96)).map(|c| if self.get(r, c) { '1' } else { '.' }).collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

impl BitMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        let stride = words_for(n_cols);
        BitMatrix { n_rows, n_cols, stride, data: vec![0; n_rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Stacks vectors as rows; an empty list needs the column count.
    pub fn from_rows(n_cols: usize, rows: &[BitVec]) -> Self {
        let mut m = Self::zeros(rows.len(), n_cols);
        for (r, v) in rows.iter().enumerate() {
            assert_eq!(v.len(), n_cols, "row {r} has wrong length");
            m.row_words_mut(r).copy_from_slice(&v.words);
        }
        m
    }

    /// Builds a matrix from lists of set column indices per row.
    pub fn from_row_indices(n_cols: usize, rows: &[Vec<usize>]) -> Self {
        let mut m = Self::zeros(rows.len(), n_cols);
        for (r, cols) in rows.iter().enumerate() {
            for &c in cols {
                m.set(r, c, true);
            }
        }
        m
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.n_rows && c < self.n_cols);
        (self.data[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.n_rows && c < self.n_cols);
        let w = &mut self.data[r * self.stride + c / WORD];
        let mask = 1u64 << (c % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitVec {
        BitVec { len: self.n_cols, words: self.row_words(r).to_vec() }
    }

    pub fn rows(&self) -> impl Iterator<Item = BitVec> + '_ {
        (0..self.n_rows).map(|r| self.row(r))
    }

    pub fn column(&self, c: usize) -> BitVec {
        BitVec::from_indices(self.n_rows, (0..self.n_rows).filter(|&r| self.get(r, c)))
    }

    /// Column indices of the ones in row `r`.
    pub fn row_support(&self, r: usize) -> Vec<usize> {
        let v = BitVec { len: self.n_cols, words: self.row_words(r).to_vec() };
        v.ones_iter().collect()
    }

    pub fn row_weights(&self) -> Vec<usize> {
        (0..self.n_rows)
            .map(|r| self.row_words(r).iter().map(|w| w.count_ones() as usize).sum())
            .collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut out = vec![0; self.n_cols];
        for r in 0..self.n_rows {
            for c in self.row_support(r) {
                out[c] += 1;
            }
        }
        out
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.n_cols, self.n_rows);
        for r in 0..self.n_rows {
            for c in self.row_support(r) {
                t.set(c, r, true);
            }
        }
        t
    }

    pub fn select_rows(&self, rows: &[usize]) -> BitMatrix {
        let mut m = BitMatrix::zeros(rows.len(), self.n_cols);
        for (i, &r) in rows.iter().enumerate() {
            m.row_words_mut(i).copy_from_slice(self.row_words(r));
        }
        m
    }

    pub fn select_columns(&self, cols: &[usize]) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.n_rows, cols.len());
        for r in 0..self.n_rows {
            for (j, &c) in cols.iter().enumerate() {
                if self.get(r, c) {
                    m.set(r, j, true);
                }
            }
        }
        m
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> BitMatrix {
        self.select_rows(rows).select_columns(cols)
    }

    /// `M v` (the syndrome when `M` is a parity-check matrix).
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.n_cols, "length mismatch");
        let mut out = BitVec::zeros(self.n_rows);
        for r in 0..self.n_rows {
            let parity = self
                .row_words(r)
                .iter()
                .zip(&v.words)
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>()
                & 1;
            if parity == 1 {
                out.set(r, true);
            }
        }
        out
    }

    /// Entry `(i, j)` of the result is entry `(row_perm[i], col_perm[j])` of `self`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> BitMatrix {
        self.submatrix(row_perm, col_perm)
    }

    /// In-place Gauss-Jordan elimination; returns the pivot columns.
    /// With `full = false` only rows below each pivot are cleared.
    fn eliminate(&mut self, full: bool) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..self.n_cols {
            if rank == self.n_rows {
                break;
            }
            let w = c / WORD;
            let mask = 1u64 << (c % WORD);
            let Some(pr) = (rank..self.n_rows).find(|&r| self.data[r * self.stride + w] & mask != 0) else {
                continue;
            };
            if pr != rank {
                for k in 0..self.stride {
                    self.data.swap(pr * self.stride + k, rank * self.stride + k);
                }
            }
            let (head, tail) = self.data.split_at_mut((rank + 1) * self.stride);
            let (above, pivot_row) = head.split_at_mut(rank * self.stride);
            for row in tail.chunks_exact_mut(self.stride) {
                if row[w] & mask != 0 {
                    xor_words(&mut row[w..], &pivot_row[w..]);
                }
            }
            if full {
                for row in above.chunks_exact_mut(self.stride) {
                    if row[w] & mask != 0 {
                        xor_words(&mut row[w..], &pivot_row[w..]);
                    }
                }
            }
            pivots.push(c);
            rank += 1;
        }
        pivots
    }

    /// Rank over GF(2).
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.eliminate(false).len()
    }

    /// Reduced row-echelon form with zero rows dropped, plus pivot columns.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.eliminate(true);
        m.n_rows = pivots.len();
        m.data.truncate(pivots.len() * m.stride);
        (m, pivots)
    }

    /// Columns chosen greedily left to right that are independent of the
    /// columns before them.
    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut m = self.clone();
        m.eliminate(false)
    }

    /// Basis of `{v : M v = 0}`.
    pub fn nullspace(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.n_cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut vectors = Vec::new();
        for f in (0..self.n_cols).filter(|&c| !is_pivot[c]) {
            let mut v = BitVec::zeros(self.n_cols);
            v.set(f, true);
            for (i, &p) in pivots.iter().enumerate() {
                if r.get(i, f) {
                    v.set(p, true);
                }
            }
            vectors.push(v);
        }
        Subspace::span(self.n_cols, &vectors)
    }

    pub fn row_space(&self) -> Subspace {
        let (basis, pivots) = self.rref();
        Subspace { ambient: self.n_cols, basis, pivots }
    }

    pub fn column_space(&self) -> Subspace {
        self.transpose().row_space()
    }
}

/// Rank over GF(2).
pub fn rank2(m: &BitMatrix) -> usize {
    m.rank()
}

/// A subspace of GF(2)^n held as an RREF basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: BitMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: BitMatrix::zeros(0, ambient), pivots: Vec::new() }
    }

    pub fn span(ambient: usize, vectors: &[BitVec]) -> Self {
        BitMatrix::from_rows(ambient, vectors).row_space()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis(&self) -> &BitMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_vectors(&self) -> Vec<BitVec> {
        self.basis.rows().collect()
    }

    /// Reduces `v` against the basis in place.
    fn reduce(&self, v: &mut BitVec) {
        for (i, &p) in self.pivots.iter().enumerate() {
            if v.get(p) {
                xor_words(&mut v.words, self.basis.row_words(i));
            }
        }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        assert_eq!(v.len(), self.ambient, "ambient dimension mismatch");
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_zero()
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        assert_eq!(v.len(), self.ambient, "ambient dimension mismatch");
        let mut w = v.clone();
        self.reduce(&mut w);
        let Some(p) = w.first_one() else {
            return false;
        };
        let stride = self.basis.stride;
        for i in 0..self.pivots.len() {
            if self.basis.get(i, p) {
                xor_words(&mut self.basis.data[i * stride..(i + 1) * stride], &w.words);
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        let at = pos * stride;
        self.basis.data.splice(at..at, w.words.iter().copied());
        self.basis.n_rows += 1;
        true
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.rows().all(|v| self.contains(&v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for v in other.basis.rows() {
            s.insert(&v);
        }
        s
    }

    /// Intersection by the Zassenhaus construction.
    pub fn intersection(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient dimension mismatch");
        let n = self.ambient;
        let mut rows = Vec::with_capacity(self.dim() + other.dim());
        for v in self.basis.rows() {
            let idx: Vec<usize> = v.ones_iter().flat_map(|i| [i, n + i]).collect();
            rows.push(BitVec::from_indices(2 * n, idx));
        }
        for v in other.basis.rows() {
            rows.push(BitVec::from_indices(2 * n, v.ones_iter()));
        }
        let (r, pivots) = BitMatrix::from_rows(2 * n, &rows).rref();
        let right: Vec<usize> = (n..2 * n).collect();
        let vectors: Vec<BitVec> = pivots
            .iter()
            .enumerate()
            .filter(|(_, &p)| p >= n)
            .map(|(i, _)| r.row(i).select(&right))
            .collect();
        Subspace::span(n, &vectors)
    }

    /// Basis vectors restricted to `coords`.
    pub fn restrict(&self, coords: &[usize]) -> BitMatrix {
        self.basis.select_columns(coords)
    }
}

/// Dimension of `{c in C : c vanishes on coords}`.
pub fn kernel_intersection_dim(c: &Subspace, coords: &[usize]) -> usize {
    c.dim() - c.restrict(coords).rank()
}

/// The subspace `{c in C : c vanishes on coords}` itself.
pub fn kernel_intersection(c: &Subspace, coords: &[usize]) -> Subspace {
    let restricted = c.restrict(coords);
    // Combinations x with x^T R = 0 give kernel elements x^T B.
    let left_null = restricted.transpose().nullspace();
    let vectors: Vec<BitVec> = left_null
        .basis_vectors()
        .iter()
        .map(|x| {
            let mut v = BitVec::zeros(c.ambient());
            for i in x.ones_iter() {
                xor_words(&mut v.words, c.basis.row_words(i));
            }
            v
        })
        .collect();
    Subspace::span(c.ambient(), &vectors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_zero_ranks() {
        assert_eq!(BitMatrix::identity(5).rank(), 5);
        assert_eq!(BitMatrix::zeros(4, 7).rank(), 0);
        assert_eq!(BitMatrix::identity(5).nullspace().dim(), 0);
    }

    #[test]
    fn small_rank_and_nullspace() {
        // rows 110, 011, 101: rank 2, kernel spanned by 111
        let m = BitMatrix::from_row_indices(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.dim(), 1);
        assert_eq!(ns.basis().row(0), BitVec::ones(3));
    }

    #[test]
    fn wide_matrix_crosses_word_boundary() {
        let n = 130;
        let rows: Vec<Vec<usize>> = (0..n - 1).map(|i| vec![i, i + 1]).collect();
        let m = BitMatrix::from_row_indices(n, &rows);
        assert_eq!(m.rank(), n - 1);
        let ns = m.nullspace();
        assert_eq!(ns.dim(), 1);
        assert_eq!(ns.basis().row(0), BitVec::ones(n));
    }

    #[test]
    fn restrict_examples() {
        let v = BitVec::from_indices(6, [0, 2, 5]);
        assert_eq!(restrict(&v, &[1, 3, 4]), BitVec::zeros(3));
        assert_eq!(restrict(&BitVec::ones(6), &[1, 5]), BitVec::ones(2));
        assert_eq!(restrict(&BitVec::from_indices(6, [5]), &[2, 5]), BitVec::from_indices(2, [1]));
    }

    #[test]
    fn span_membership() {
        let vs = vec![BitVec::from_indices(4, [0, 1]), BitVec::from_indices(4, [1, 2])];
        let s = Subspace::span(4, &vs);
        assert!(s.contains(&vs[0]));
        assert!(s.contains(&BitVec::zeros(4)));
        assert!(s.contains(&BitVec::from_indices(4, [0, 2])));
        assert!(!s.contains(&BitVec::from_indices(4, [3])));
    }

    #[test]
    fn incremental_insert_matches_batch() {
        let vs: Vec<BitVec> = (0..20u64)
            .map(|i| BitVec::from_indices(70, (0..70).filter(|j| (i * 7919 + *j as u64 * 104729) % 5 < 2)))
            .collect();
        let mut s = Subspace::zero(70);
        for v in &vs {
            s.insert(v);
        }
        assert_eq!(s, Subspace::span(70, &vs));
    }

    #[test]
    fn intersection_dimension_formula() {
        let a = Subspace::span(5, &[BitVec::from_indices(5, [0]), BitVec::from_indices(5, [1])]);
        let b = Subspace::span(5, &[BitVec::from_indices(5, [0, 1]), BitVec::from_indices(5, [2])]);
        let i = a.intersection(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&BitVec::from_indices(5, [0, 1])));
        assert_eq!(a.dim() + b.dim(), a.sum(&b).dim() + i.dim());
    }

    #[test]
    fn kernel_intersection_agrees() {
        let c = Subspace::span(
            5,
            &[BitVec::from_indices(5, [0, 1]), BitVec::from_indices(5, [1, 2]), BitVec::from_indices(5, [3, 4])],
        );
        let coords = [2, 3, 4];
        let k = kernel_intersection(&c, &coords);
        assert_eq!(k.dim(), kernel_intersection_dim(&c, &coords));
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&BitVec::from_indices(5, [0, 1])));
    }

    #[test]
    fn pivot_columns_are_greedy() {
        let m = BitMatrix::from_row_indices(4, &[vec![0, 1, 3], vec![2, 3]]);
        assert_eq!(m.pivot_columns(), vec![0, 2]);
    }
}
