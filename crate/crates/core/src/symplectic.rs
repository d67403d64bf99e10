//! Packed binary symplectic vectors, GF(2) row reduction, and the duality
//! checks between a stabilizer and its normalizer.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymplecticError {
    #[error("qubit count mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid character {found:?} at column {column}")]
    BadChar { column: usize, found: char },
    #[error("expected `<u>|<v>` with {expected} bits per half")]
    BadShape { expected: usize },
}

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

#[inline]
fn extract(words: &[u64], offset: usize, len: usize) -> u64 {
    debug_assert!(len <= 64);
    if len == 0 {
        return 0;
    }
    let (w, b) = (offset / 64, offset % 64);
    let mut v = words[w] >> b;
    if b != 0 && b + len > 64 {
        v |= words[w + 1] << (64 - b);
    }
    if len == 64 {
        v
    } else {
        v & ((1u64 << len) - 1)
    }
}

/// A Pauli operator on `n` qubits as `(u | v)`: `u` is the X part, `v` the Z
/// part. Concatenated bit index `p < n` addresses `u_p`, `n + p` addresses `v_p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymplecticVector {
    n: usize,
    // u occupies words[..half], v occupies words[half..]
    words: Vec<u64>,
}

impl SymplecticVector {
    pub fn zeros(n: usize) -> Self {
        SymplecticVector { n, words: vec![0; 2 * words_for(n)] }
    }

    /// Builds a vector from its two halves given as bit iterators.
    pub fn from_halves<I, J>(n: usize, u: I, v: J) -> Self
    where
        I: IntoIterator<Item = bool>,
        J: IntoIterator<Item = bool>,
    {
        let mut x = Self::zeros(n);
        for (p, b) in u.into_iter().enumerate().take(n) {
            if b {
                x.set_x(p, true);
            }
        }
        for (p, b) in v.into_iter().enumerate().take(n) {
            if b {
                x.set_z(p, true);
            }
        }
        x
    }

    /// Qubit count.
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn half(&self) -> usize {
        self.words.len() / 2
    }

    #[inline]
    pub fn x(&self, p: usize) -> bool {
        debug_assert!(p < self.n);
        self.words[p / 64] >> (p % 64) & 1 == 1
    }

    #[inline]
    pub fn z(&self, p: usize) -> bool {
        debug_assert!(p < self.n);
        self.words[self.half() + p / 64] >> (p % 64) & 1 == 1
    }

    #[inline]
    pub fn set_x(&mut self, p: usize, b: bool) {
        assert!(p < self.n);
        let w = &mut self.words[p / 64];
        *w = (*w & !(1 << (p % 64))) | (u64::from(b) << (p % 64));
    }

    #[inline]
    pub fn set_z(&mut self, p: usize, b: bool) {
        assert!(p < self.n);
        let h = self.half();
        let w = &mut self.words[h + p / 64];
        *w = (*w & !(1 << (p % 64))) | (u64::from(b) << (p % 64));
    }

    /// Bit at concatenated index `idx < 2n`.
    #[inline]
    pub fn bit(&self, idx: usize) -> bool {
        if idx < self.n {
            self.x(idx)
        } else {
            self.z(idx - self.n)
        }
    }

    /// `len <= 64` consecutive X bits starting at qubit `offset`, LSB first.
    #[inline]
    pub fn x_bits(&self, offset: usize, len: usize) -> u64 {
        extract(&self.words[..self.half()], offset, len)
    }

    /// `len <= 64` consecutive Z bits starting at qubit `offset`, LSB first.
    #[inline]
    pub fn z_bits(&self, offset: usize, len: usize) -> u64 {
        extract(&self.words[self.half()..], offset, len)
    }

    /// Writes `len` X bits from `bits` starting at qubit `offset`.
    pub fn set_x_bits(&mut self, offset: usize, len: usize, bits: u64) {
        for j in 0..len {
            self.set_x(offset + j, bits >> j & 1 == 1);
        }
    }

    /// Writes `len` Z bits from `bits` starting at qubit `offset`.
    pub fn set_z_bits(&mut self, offset: usize, len: usize, bits: u64) {
        for j in 0..len {
            self.set_z(offset + j, bits >> j & 1 == 1);
        }
    }

    /// Flips the bit at concatenated index `idx < 2n`.
    pub fn flip(&mut self, idx: usize) {
        let b = self.bit(idx);
        if idx < self.n {
            self.set_x(idx, !b);
        } else {
            self.set_z(idx - self.n, !b);
        }
    }

    /// `self ^= other`.
    #[inline]
    pub fn xor_assign(&mut self, other: &SymplecticVector) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Number of qubits on which the operator acts nontrivially.
    #[inline]
    pub fn weight(&self) -> usize {
        let h = self.half();
        let (u, v) = self.words.split_at(h);
        u.iter().zip(v).map(|(a, b)| (a | b).count_ones() as usize).sum()
    }

    /// The X and Z halves as packed words.
    #[inline]
    pub fn halves(&self) -> (&[u64], &[u64]) {
        self.words.split_at(self.half())
    }

    /// Symplectic inner product `u.v' + v.u'` over GF(2).
    pub fn product(&self, other: &SymplecticVector) -> Result<u8, SymplecticError> {
        if self.n != other.n {
            return Err(SymplecticError::LengthMismatch { left: self.n, right: other.n });
        }
        Ok(self.product_unchecked(other))
    }

    #[inline]
    pub(crate) fn product_unchecked(&self, other: &SymplecticVector) -> u8 {
        let (u, v) = self.halves();
        let (u2, v2) = other.halves();
        let mut acc = 0u32;
        for i in 0..u.len() {
            acc ^= ((u[i] & v2[i]) ^ (v[i] & u2[i])).count_ones();
        }
        (acc & 1) as u8
    }

    /// Lowest concatenated index holding a one.
    pub fn leading_index(&self) -> Option<usize> {
        let h = self.half();
        for (i, &w) in self.words[..h].iter().enumerate() {
            if w != 0 {
                return Some(i * 64 + w.trailing_zeros() as usize);
            }
        }
        for (i, &w) in self.words[h..].iter().enumerate() {
            if w != 0 {
                return Some(self.n + i * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Renders the vector as `<u-bits>|<v-bits>` with bit `p` at string index `p`.
    pub fn to_bit_string(&self) -> String {
        let mut s = String::with_capacity(2 * self.n + 1);
        s.extend((0..self.n).map(|p| if self.x(p) { '1' } else { '0' }));
        s.push('|');
        s.extend((0..self.n).map(|p| if self.z(p) { '1' } else { '0' }));
        s
    }

    pub fn parse_bit_string(n: usize, line: &str) -> Result<Self, SymplecticError> {
        let bytes = line.as_bytes();
        if bytes.len() != 2 * n + 1 {
            return Err(SymplecticError::BadShape { expected: n });
        }
        let mut x = Self::zeros(n);
        for (column, &c) in bytes.iter().enumerate() {
            match (column.cmp(&n), c) {
                (std::cmp::Ordering::Equal, b'|') => {}
                (std::cmp::Ordering::Less, b'0') | (std::cmp::Ordering::Greater, b'0') => {}
                (std::cmp::Ordering::Less, b'1') => x.set_x(column, true),
                (std::cmp::Ordering::Greater, b'1') => x.set_z(column - n - 1, true),
                _ => {
                    return Err(SymplecticError::BadChar { column, found: c as char });
                }
            }
        }
        Ok(x)
    }

    /// Pauli string with `(0,0)->I`, `(1,0)->X`, `(0,1)->Z`, `(1,1)->Y`.
    pub fn to_pauli_string(&self) -> String {
        (0..self.n)
            .map(|p| match (self.x(p), self.z(p)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            })
            .collect()
    }
}

impl fmt::Debug for SymplecticVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymplecticVector({})", self.to_bit_string())
    }
}

/// Symplectic product of two vectors on the same number of qubits.
pub fn symplectic_product(x: &SymplecticVector, y: &SymplecticVector) -> Result<u8, SymplecticError> {
    x.product(y)
}

/// Symplectic weight: positions `p` with `(u_p, v_p) != (0, 0)`.
pub fn symplectic_weight(x: &SymplecticVector) -> usize {
    x.weight()
}

/// A list of `2n`-bit rows sharing one qubit count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    n: usize,
    rows: Vec<SymplecticVector>,
}

impl BinaryMatrix {
    pub fn new(n: usize) -> Self {
        BinaryMatrix { n, rows: Vec::new() }
    }

    pub fn from_rows(n: usize, rows: Vec<SymplecticVector>) -> Result<Self, SymplecticError> {
        if let Some(r) = rows.iter().find(|r| r.n() != n) {
            return Err(SymplecticError::LengthMismatch { left: n, right: r.n() });
        }
        Ok(BinaryMatrix { n, rows })
    }

    pub fn push(&mut self, row: SymplecticVector) -> Result<(), SymplecticError> {
        if row.n() != self.n {
            return Err(SymplecticError::LengthMismatch { left: self.n, right: row.n() });
        }
        self.rows.push(row);
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn rows(&self) -> &[SymplecticVector] {
        &self.rows
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Reduced row-echelon form with leftmost pivots.
    pub fn row_reduce(&self) -> RowReduced {
        let mut rows: Vec<SymplecticVector> = self.rows.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..2 * self.n {
            let Some(found) = (rank..rows.len()).find(|&r| rows[r].bit(col)) else {
                continue;
            };
            rows.swap(rank, found);
            let (head, tail) = rows.split_at_mut(rank);
            let (pivot, tail) = tail.split_first_mut().expect("pivot row exists");
            for r in head.iter_mut().chain(tail.iter_mut()) {
                if r.bit(col) {
                    r.xor_assign(pivot);
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rows.truncate(rank);
        RowReduced { matrix: BinaryMatrix { n: self.n, rows }, pivots }
    }

    pub fn rank(&self) -> usize {
        self.row_reduce().rank()
    }

    /// Membership of `x` in the row space.
    pub fn in_span(&self, x: &SymplecticVector) -> Result<bool, SymplecticError> {
        self.row_reduce().in_span(x)
    }
}

/// A matrix in reduced row-echelon form together with its pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowReduced {
    matrix: BinaryMatrix,
    pivots: Vec<usize>,
}

impl RowReduced {
    #[inline]
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    #[inline]
    pub fn matrix(&self) -> &BinaryMatrix {
        &self.matrix
    }

    #[inline]
    pub fn rows(&self) -> &[SymplecticVector] {
        self.matrix.rows()
    }

    #[inline]
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn into_matrix(self) -> BinaryMatrix {
        self.matrix
    }

    /// Reduces `x` against the pivot rows and returns the remainder.
    pub fn reduce(&self, x: &SymplecticVector) -> Result<SymplecticVector, SymplecticError> {
        if x.n() != self.matrix.n {
            return Err(SymplecticError::LengthMismatch { left: self.matrix.n, right: x.n() });
        }
        let mut r = x.clone();
        self.reduce_in_place(&mut r);
        Ok(r)
    }

    #[inline]
    pub(crate) fn reduce_in_place(&self, r: &mut SymplecticVector) {
        for (row, &col) in self.matrix.rows.iter().zip(&self.pivots) {
            if r.bit(col) {
                r.xor_assign(row);
            }
        }
    }

    pub fn in_span(&self, x: &SymplecticVector) -> Result<bool, SymplecticError> {
        Ok(self.reduce(x)?.is_zero())
    }
}

/// A pair of rows whose symplectic product is nonzero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowPair {
    pub s_row: usize,
    pub n_row: usize,
}

/// Outcome of checking that a stabilizer and normalizer are symplectic duals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityReport {
    pub n: usize,
    pub rank_s: usize,
    pub rank_n: usize,
    pub products_checked: usize,
    /// At most [`DualityReport::MAX_WITNESSES`] nonorthogonal pairs.
    pub nonorthogonal: Vec<RowPair>,
    pub nonorthogonal_count: usize,
    /// Stabilizer rows missing from the normalizer span.
    pub not_contained: Vec<usize>,
}

impl DualityReport {
    pub const MAX_WITNESSES: usize = 16;

    pub fn all_orthogonal(&self) -> bool {
        self.nonorthogonal_count == 0
    }

    pub fn dims_complementary(&self) -> bool {
        self.rank_s + self.rank_n == 2 * self.n
    }

    pub fn contained(&self) -> bool {
        self.not_contained.is_empty()
    }

    pub fn passed(&self) -> bool {
        self.all_orthogonal() && self.dims_complementary() && self.contained()
    }
}

/// Checks pairwise orthogonality, complementary dimensions, and containment
/// of the stabilizer row space in the normalizer row space.
pub fn verify_duality(stabilizer: &BinaryMatrix, normalizer: &BinaryMatrix) -> Result<DualityReport, SymplecticError> {
    if stabilizer.n() != normalizer.n() {
        return Err(SymplecticError::LengthMismatch { left: stabilizer.n(), right: normalizer.n() });
    }
    let mut nonorthogonal = Vec::new();
    let mut nonorthogonal_count = 0;
    for (i, s) in stabilizer.rows().iter().enumerate() {
        for (j, t) in normalizer.rows().iter().enumerate() {
            if s.product_unchecked(t) == 1 {
                nonorthogonal_count += 1;
                if nonorthogonal.len() < DualityReport::MAX_WITNESSES {
                    nonorthogonal.push(RowPair { s_row: i, n_row: j });
                }
            }
        }
    }
    let reduced_n = normalizer.row_reduce();
    let not_contained = stabilizer
        .rows()
        .iter()
        .enumerate()
        .filter(|(_, s)| !reduced_n.in_span(s).expect("lengths checked"))
        .map(|(i, _)| i)
        .collect();
    Ok(DualityReport {
        n: stabilizer.n(),
        rank_s: stabilizer.rank(),
        rank_n: reduced_n.rank(),
        products_checked: stabilizer.len() * normalizer.len(),
        nonorthogonal,
        nonorthogonal_count,
        not_contained,
    })
}
