//! Dense exact linear algebra over GF(2).
//!
//! `BitMatrix` is the carrier for everything else in this crate: comodule
//! structure maps, morphisms, lifting systems, tensor (Kronecker)
//! constructions. Rows are packed into `u64` words.
//!
//! All row reductions are *reduced* row echelon forms with a fixed pivot
//! order, so `rank`, `kernel_basis`, `solve` and the canonical subspace
//! forms are bit-for-bit deterministic. `solve` zeroes every free variable,
//! which pins one canonical solution for certificate reproducibility.

use std::fmt;

/// Dense matrix over GF(2), one or more words per row.
///
/// Invariant: bits at positions `>= cols` of the trailing word of every
/// row are zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    wpr: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    /// Zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let wpr = cols.div_ceil(64).max(1);
        Self { rows, cols, wpr, words: vec![0; rows * wpr] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Build from a closure on (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Build from row-major 0/1 entries; `bits.len()` must be `rows * cols`.
    pub fn from_bits(rows: usize, cols: usize, bits: &[u8]) -> Self {
        assert_eq!(bits.len(), rows * cols, "entry count mismatch");
        Self::from_fn(rows, cols, |i, j| bits[i * cols + j] != 0)
    }

    /// Convenience constructor from nested arrays, used heavily in tests.
    pub fn from_rows(rows: &[&[u8]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
        }
        Self::from_fn(r, c, |i, j| rows[i][j] != 0)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Entry access. Out-of-bounds indices are a caller bug.
    ///
    /// # Panics
    /// Panics if `i >= rows` or `j >= cols`.
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        (self.words[i * self.wpr + j / 64] >> (j % 64)) & 1 == 1
    }

    /// # Panics
    /// Panics if `i >= rows` or `j >= cols`.
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        let w = i * self.wpr + j / 64;
        if value {
            self.words[w] |= 1 << (j % 64);
        } else {
            self.words[w] &= !(1 << (j % 64));
        }
    }

    fn row_slice(&self, i: usize) -> &[u64] {
        &self.words[i * self.wpr..(i + 1) * self.wpr]
    }

    fn xor_row_into(&mut self, dst: usize, src: usize) {
        let (d, s) = (dst * self.wpr, src * self.wpr);
        for k in 0..self.wpr {
            let v = self.words[s + k];
            self.words[d + k] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.wpr {
            self.words.swap(a * self.wpr + k, b * self.wpr + k);
        }
    }

    /// Row-major 0/1 entries, the wire format used by serialization.
    pub fn to_bits(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.rows * self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.push(u8::from(self.get(i, j)));
            }
        }
        out
    }

    /// Matrix sum; over GF(2) this is XOR, so `add(a, a)` is zero.
    ///
    /// # Panics
    /// Panics on shape mismatch.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a ^ b).collect();
        Self { rows: self.rows, cols: self.cols, wpr: self.wpr, words }
    }

    /// Matrix product `self * other`.
    ///
    /// # Panics
    /// Panics if `self.cols != other.rows`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in compose");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for (wi, &word) in self.row_slice(i).iter().enumerate() {
                let mut w = word;
                while w != 0 {
                    let k = wi * 64 + w.trailing_zeros() as usize;
                    for t in 0..out.wpr {
                        out.words[i * out.wpr + t] ^= other.words[k * other.wpr + t];
                    }
                    w &= w - 1;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::from_fn(self.rows + other.rows, self.cols + other.cols, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j)
            } else if i >= self.rows && j >= self.cols {
                other.get(i - self.rows, j - self.cols)
            } else {
                false
            }
        })
    }

    /// Kronecker (tensor) product with index convention
    /// `(i_a * other.rows + i_b, j_a * other.cols + j_b)`.
    pub fn kronecker(&self, other: &Self) -> Self {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            let (ia, ib) = (i / other.rows, i % other.rows);
            let (ja, jb) = (j / other.cols, j % other.cols);
            self.get(ia, ja) && other.get(ib, jb)
        })
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        })
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut words = self.words.clone();
        words.extend_from_slice(&other.words);
        Self { rows: self.rows + other.rows, cols: self.cols, wpr: self.wpr, words }
    }

    pub fn column(&self, j: usize) -> Self {
        Self::from_fn(self.rows, 1, |i, _| self.get(i, j))
    }

    pub fn submatrix_cols(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]))
    }

    /// Reduced row echelon form together with the pivot column list.
    /// Pivot search is lowest-index-first, so the result is canonical.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..m.cols {
            let Some(pivot_row) = (rank..m.rows).find(|&r| m.get(r, col)) else {
                continue;
            };
            m.swap_rows(rank, pivot_row);
            for r in 0..m.rows {
                if r != rank && m.get(r, col) {
                    m.xor_row_into(r, rank);
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Columns form a canonical basis of `ker(self)`; the column count is
    /// `cols - rank`. Free variables are taken in ascending column order.
    pub fn kernel_basis(&self) -> Self {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Self::zeros(self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            basis.set(fc, k, true);
            for (prow, &pc) in pivots.iter().enumerate() {
                if r.get(prow, fc) {
                    basis.set(pc, k, true);
                }
            }
        }
        basis
    }

    /// Canonical solution `X` of `self * X = rhs`, or `None` if the system
    /// is inconsistent. All free variables are zero, so the result is the
    /// same on every run.
    ///
    /// # Panics
    /// Panics if the row counts differ.
    pub fn solve(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.rows, rhs.rows, "row mismatch in solve");
        let aug = self.hstack(rhs);
        let (red, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(self.cols, rhs.cols);
        for (prow, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                if red.get(prow, self.cols + j) {
                    x.set(pc, j, true);
                }
            }
        }
        Some(x)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Inverse of a square invertible matrix.
    ///
    /// # Panics
    /// Panics if the matrix is not invertible.
    pub fn inverse(&self) -> Self {
        assert!(self.is_square(), "inverse of a non-square matrix");
        self.solve(&Self::identity(self.rows)).expect("matrix is singular")
    }

    /// Canonical basis of the column space: the RREF of the transpose,
    /// restricted to its nonzero rows, transposed back. Two matrices have
    /// equal column spaces iff their canonical forms are equal.
    pub fn column_space_canonical(&self) -> Self {
        let (r, pivots) = self.transpose().rref();
        Self::from_fn(self.rows, pivots.len(), |i, j| r.get(j, i))
    }

    /// True iff the column space of `other` is contained in ours.
    pub fn column_space_contains(&self, other: &Self) -> bool {
        assert_eq!(self.rows, other.rows, "ambient mismatch");
        self.hstack(other).rank() == self.rank()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix({}x{})[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                write!(f, "{}", u8::from(self.get(i, j)))?;
            }
        }
        write!(f, "]")
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                write!(f, "{}", u8::from(self.get(i, j)))?;
            }
            if i + 1 < self.rows {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// All subspaces of GF(2)^`ambient`, each as a canonical (RREF) basis
/// matrix whose *rows* are the basis vectors. Deterministic order:
/// ascending dimension, then pivot columns, then free entries as binary
/// counters.
pub fn subspace_bases(ambient: usize) -> Vec<BitMatrix> {
    let mut out = Vec::new();
    for dim in 0..=ambient {
        let mut pivots = Vec::new();
        enumerate_pivot_sets(ambient, dim, 0, &mut pivots, &mut out);
    }
    out
}

fn enumerate_pivot_sets(
    ambient: usize,
    dim: usize,
    start: usize,
    pivots: &mut Vec<usize>,
    out: &mut Vec<BitMatrix>,
) {
    if pivots.len() == dim {
        emit_rref_matrices(ambient, pivots, out);
        return;
    }
    for col in start..ambient {
        pivots.push(col);
        enumerate_pivot_sets(ambient, dim, col + 1, pivots, out);
        pivots.pop();
    }
}

fn emit_rref_matrices(ambient: usize, pivots: &[usize], out: &mut Vec<BitMatrix>) {
    // Free positions of row i: columns past pivots[i] that are not pivots.
    let free: Vec<(usize, usize)> = pivots
        .iter()
        .enumerate()
        .flat_map(|(i, &p)| {
            (p + 1..ambient).filter(|c| !pivots.contains(c)).map(move |c| (i, c))
        })
        .collect();
    let combos = 1u64 << free.len();
    for mask in 0..combos {
        let mut m = BitMatrix::zeros(pivots.len(), ambient);
        for (i, &p) in pivots.iter().enumerate() {
            m.set(i, p, true);
        }
        for (k, &(i, c)) in free.iter().enumerate() {
            if (mask >> k) & 1 == 1 {
                m.set(i, c, true);
            }
        }
        out.push(m);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_zero_identity_and_rank_one() {
        assert_eq!(BitMatrix::zeros(2, 2).rank(), 0);
        assert_eq!(BitMatrix::identity(2).rank(), 2);
        // [[1,1],[1,1]] row-reduces to a single nonzero row.
        let m = BitMatrix::from_rows(&[&[1, 1], &[1, 1]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_of_injective_map_is_empty() {
        let k = BitMatrix::identity(2).kernel_basis();
        assert_eq!(k.cols(), 0);
        assert_eq!(k.rows(), 2);
    }

    #[test]
    fn kernel_of_zero_map_is_everything() {
        let k = BitMatrix::zeros(2, 2).kernel_basis();
        assert_eq!(k.cols(), 2);
        assert_eq!(k.rank(), 2);
    }

    #[test]
    fn kernel_of_elementary_nilpotent() {
        // d = [[0,1],[0,0]]: kernel is span{e1}; checked against brute force
        // over the four vectors of GF(2)^2.
        let d = BitMatrix::from_rows(&[&[0, 1], &[0, 0]]);
        let k = d.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!(k.get(0, 0) && !k.get(1, 0));
        let mut kernel_vectors = 0;
        for bits in 0..4u8 {
            let v = BitMatrix::from_bits(2, 1, &[bits & 1, bits >> 1]);
            if d.compose(&v).is_zero() {
                kernel_vectors += 1;
            }
        }
        assert_eq!(kernel_vectors, 2); // zero vector and e1
    }

    #[test]
    fn solve_identity_and_inconsistent() {
        let b = BitMatrix::from_rows(&[&[1], &[0]]);
        assert_eq!(BitMatrix::identity(2).solve(&b), Some(b.clone()));
        assert_eq!(BitMatrix::zeros(2, 2).solve(&b), None);
    }

    #[test]
    fn solve_returns_canonical_solution() {
        // [[1,1],[0,0]] x = [1;0]: solutions are [1;0] and [0;1]; the
        // canonical one zeroes the free variable, giving [1;0]. Enumerating
        // all four candidate vectors confirms those are the only solutions.
        let a = BitMatrix::from_rows(&[&[1, 1], &[0, 0]]);
        let b = BitMatrix::from_rows(&[&[1], &[0]]);
        let x = a.solve(&b).unwrap();
        assert_eq!(x, BitMatrix::from_rows(&[&[1], &[0]]));
        let solutions: Vec<_> = (0..4u8)
            .map(|bits| BitMatrix::from_bits(2, 1, &[bits & 1, bits >> 1]))
            .filter(|v| a.compose(v) == b)
            .collect();
        assert_eq!(solutions.len(), 2);
        assert!(solutions.contains(&x));
    }

    #[test]
    fn compose_add_direct_sum_kronecker_basics() {
        let a = BitMatrix::from_rows(&[&[1, 1], &[0, 1]]);
        assert_eq!(BitMatrix::identity(2).compose(&a), a);
        assert!(a.add(&a).is_zero());
        let one = BitMatrix::from_rows(&[&[1]]);
        assert_eq!(one.direct_sum(&one), BitMatrix::identity(2));
        assert_eq!(BitMatrix::identity(1).kronecker(&a), a);
    }

    #[test]
    fn column_space_canonical_detects_equality() {
        let a = BitMatrix::from_rows(&[&[1, 1], &[0, 0]]);
        let b = BitMatrix::from_rows(&[&[1], &[0]]);
        assert_eq!(a.column_space_canonical(), b.column_space_canonical());
        let c = BitMatrix::from_rows(&[&[0], &[1]]);
        assert_ne!(a.column_space_canonical(), c.column_space_canonical());
    }

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        // Number of subspaces of GF(2)^n: 2, 5, 16, 67 for n = 1..4.
        assert_eq!(subspace_bases(1).len(), 2);
        assert_eq!(subspace_bases(2).len(), 5);
        assert_eq!(subspace_bases(3).len(), 16);
        assert_eq!(subspace_bases(4).len(), 67);
    }

    #[test]
    fn subspace_bases_are_distinct_canonical() {
        let all = subspace_bases(3);
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                if a.rows() == b.rows() {
                    assert_ne!(a, b);
                }
            }
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let a = BitMatrix::from_rows(&[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]]);
        let inv = a.inverse();
        assert_eq!(a.compose(&inv), BitMatrix::identity(3));
        assert_eq!(inv.compose(&a), BitMatrix::identity(3));
    }

    #[test]
    fn wide_matrices_cross_word_boundaries() {
        // 72 columns forces two words per row.
        let mut a = BitMatrix::zeros(3, 72);
        a.set(0, 0, true);
        a.set(0, 63, true);
        a.set(1, 64, true);
        a.set(2, 71, true);
        assert_eq!(a.rank(), 3);
        assert_eq!(a.kernel_basis().cols(), 69);
        let t = a.transpose();
        assert_eq!(t.rows(), 72);
        assert_eq!(t.compose(&BitMatrix::identity(3)), t);
        // solve on the wide system round-trips.
        let rhs = BitMatrix::from_fn(3, 1, |i, _| i != 1);
        let x = a.solve(&rhs).unwrap();
        assert_eq!(a.compose(&x), rhs);
    }
}
