//! Dense bit-packed linear algebra over the two-element field.
//!
//! Chains are row vectors. A matrix `M` with `rows` rows maps a row vector
//! `v` of length `rows` to `v × M` of length `cols`, so the boundary of a
//! single cell is literally one matrix row.

use std::fmt;

use thiserror::Error;

const WORD: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("dimension mismatch: {left_rows}x{left_cols} times {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("vector length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
}

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Unit vector with a single set coordinate.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    /// Builds a vector from coordinates to flip. Repeated indices cancel.
    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_indices(
            bits.len(),
            bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i),
        )
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    fn check(&self, index: usize) {
        assert!(
            index < self.len,
            "index {index} out of bounds for BitVector of length {}",
            self.len
        );
    }

    pub fn get(&self, index: usize) -> bool {
        self.check(index);
        (self.words[index / WORD] >> (index % WORD)) & 1 == 1
    }

    pub fn set(&mut self, index: usize, value: bool) {
        self.check(index);
        let mask = 1u64 << (index % WORD);
        if value {
            self.words[index / WORD] |= mask;
        } else {
            self.words[index / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, index: usize) {
        self.check(index);
        self.words[index / WORD] ^= 1u64 << (index % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Lowest set coordinate.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD + bit)
            })
        })
    }

    /// In-place addition (XOR). Panics on length mismatch.
    pub fn add_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "BitVector length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn try_add(&self, other: &BitVector) -> Result<BitVector, Gf2Error> {
        if self.len != other.len {
            return Err(Gf2Error::LengthMismatch {
                expected: self.len,
                found: other.len,
            });
        }
        let mut out = self.clone();
        out.add_assign(other);
        Ok(out)
    }

    /// Concatenation `self ‖ other`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.len + other.len);
        for i in self.ones() {
            out.set(i, true);
        }
        for i in other.ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Coordinates `range.start..range.end` as a new vector.
    pub fn slice(&self, start: usize, end: usize) -> BitVector {
        assert!(start <= end && end <= self.len);
        BitVector::from_indices(
            end - start,
            self.ones().filter(|i| *i >= start && *i < end).map(|i| i - start),
        )
    }
}

impl std::ops::Add for &BitVector {
    type Output = BitVector;

    fn add(self, rhs: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector[")?;
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        write!(f, "]")
    }
}

/// Row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of common length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self, Gf2Error> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Gf2Error::LengthMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.data[i]
    }

    pub fn row_vectors(&self) -> &[BitVector] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value)
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.data[r].flip(c)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVector::is_zero)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for c in row.ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Row vector times matrix: `v × self`.
    pub fn left_mul(&self, v: &BitVector) -> Result<BitVector, Gf2Error> {
        if v.len() != self.rows {
            return Err(Gf2Error::LengthMismatch {
                expected: self.rows,
                found: v.len(),
            });
        }
        let mut out = BitVector::zeros(self.cols);
        for i in v.ones() {
            out.add_assign(&self.data[i]);
        }
        Ok(out)
    }

    pub fn multiply(&self, other: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.cols != other.rows {
            return Err(Gf2Error::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        let data = self
            .data
            .iter()
            .map(|row| other.left_mul(row))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BitMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    /// Row-reduces the matrix while tracking which original rows produced
    /// each reduced row.
    pub fn echelon(&self) -> Echelon {
        let mut span = SpanBasis::new(self.cols);
        let mut kernel = Vec::new();
        for (i, row) in self.data.iter().enumerate() {
            let tag = BitVector::unit(self.rows, i);
            if let Some(combo) = span.insert_tagged(row.clone(), tag) {
                kernel.push(combo);
            }
        }
        Echelon { span, kernel }
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Basis of the left kernel `{v : v × self = 0}`.
    pub fn kernel_basis(&self) -> Vec<BitVector> {
        self.echelon().kernel
    }

    /// Basis of the row space `{v × self}`.
    pub fn image_basis(&self) -> Vec<BitVector> {
        self.echelon().span.vectors().cloned().collect()
    }

    /// Image basis vectors paired with a preimage `p` such that `p × self`
    /// equals the image vector.
    pub fn image_with_preimages(&self) -> Vec<(BitVector, BitVector)> {
        self.echelon()
            .span
            .entries
            .into_iter()
            .map(|e| (e.vector, e.tag))
            .collect()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for row in &self.data {
            for c in 0..self.cols {
                write!(f, "{}", if row.get(c) { '1' } else { '.' })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Result of [`BitMatrix::echelon`].
#[derive(Debug, Clone)]
pub struct Echelon {
    span: SpanBasis,
    kernel: Vec<BitVector>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.span.len()
    }

    pub fn kernel(&self) -> &[BitVector] {
        &self.kernel
    }

    pub fn span(&self) -> &SpanBasis {
        &self.span
    }
}

#[derive(Debug, Clone)]
struct SpanEntry {
    pivot: usize,
    vector: BitVector,
    tag: BitVector,
}

/// Incrementally built basis of a subspace in echelon form.
///
/// Each stored vector carries a tag recording how it was combined from the
/// inserted inputs, so membership queries can return explicit coefficients.
/// Pivots are first-nonzero coordinates; every stored vector is zero at every
/// other stored pivot.
#[derive(Debug, Clone)]
pub struct SpanBasis {
    len: usize,
    entries: Vec<SpanEntry>,
    inserted: usize,
}

impl SpanBasis {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            entries: Vec::new(),
            inserted: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.len
    }

    pub fn vectors(&self) -> impl Iterator<Item = &BitVector> {
        self.entries.iter().map(|e| &e.vector)
    }

    /// Reduces `v` against the stored basis, accumulating the tags used.
    fn reduce(&self, v: &mut BitVector, tag: &mut BitVector) {
        for e in &self.entries {
            if v.get(e.pivot) {
                v.add_assign(&e.vector);
                tag.add_assign(&e.tag);
            }
        }
    }

    /// Inserts `v` with a caller-supplied tag. Returns `None` when `v`
    /// enlarged the span, or `Some(combination)` — the tag sum of a
    /// dependency that reduced `v` to zero.
    pub fn insert_tagged(&mut self, v: BitVector, tag: BitVector) -> Option<BitVector> {
        assert_eq!(v.len(), self.len, "vector length mismatch");
        self.inserted += 1;
        let mut v = v;
        let mut tag = tag;
        self.reduce(&mut v, &mut tag);
        match v.first_one() {
            None => Some(tag),
            Some(pivot) => {
                for e in &mut self.entries {
                    if e.vector.get(pivot) {
                        e.vector.add_assign(&v);
                        e.tag.add_assign(&tag);
                    }
                }
                self.entries.push(SpanEntry {
                    pivot,
                    vector: v,
                    tag,
                });
                None
            }
        }
    }

    /// Inserts `v`; true iff the span grew.
    pub fn insert(&mut self, v: BitVector) -> bool {
        let tag = BitVector::zeros(0);
        self.insert_tagged(v, tag).is_none()
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        let mut v = v.clone();
        let mut tag = self.entries.first().map_or_else(
            || BitVector::zeros(0),
            |e| BitVector::zeros(e.tag.len()),
        );
        self.reduce(&mut v, &mut tag);
        v.is_zero()
    }

    /// Tag combination expressing `v`, if `v` lies in the span.
    pub fn express(&self, v: &BitVector, tag_len: usize) -> Option<BitVector> {
        let mut v = v.clone();
        let mut tag = BitVector::zeros(tag_len);
        self.reduce(&mut v, &mut tag);
        v.is_zero().then_some(tag)
    }
}

/// Coefficients `c` with `Σ cᵢ·vectorsᵢ = target`, or `None` when the target
/// is not in the span. Coefficients are unique when the vectors are
/// independent; otherwise one solution is returned.
pub fn solve_in_span(
    vectors: &[BitVector],
    target: &BitVector,
) -> Result<Option<BitVector>, Gf2Error> {
    let len = target.len();
    if let Some(bad) = vectors.iter().find(|v| v.len() != len) {
        return Err(Gf2Error::LengthMismatch {
            expected: len,
            found: bad.len(),
        });
    }
    let mut span = SpanBasis::new(len);
    for (i, v) in vectors.iter().enumerate() {
        span.insert_tagged(v.clone(), BitVector::unit(vectors.len(), i));
    }
    Ok(span.express(target, vectors.len()))
}

/// Rank of a list of equal-length vectors.
pub fn rank_of(vectors: &[BitVector]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let mut span = SpanBasis::new(first.len());
    vectors.iter().filter(|v| span.insert((*v).clone())).count()
}

/// Σ cᵢ·vectorsᵢ.
pub fn combine(vectors: &[BitVector], coefficients: &BitVector, len: usize) -> BitVector {
    let mut out = BitVector::zeros(len);
    for i in coefficients.ones() {
        out.add_assign(&vectors[i]);
    }
    out
}
