//! Integer combinatorics of inclusion matrices.
//!
//! An inclusion `B = ⊕_j M_{m_j} ⊂ A = ⊕_i M_{n_i}` is determined up to
//! isomorphism by its inclusion matrix `A = [a_ij]` (how often `M_{m_j}` sits
//! inside `M_{n_i}`) together with the dimension vectors `m'` and `n' = A m'`.
//! This module validates that data, computes row supports and the partition
//! they induce, decides the normalizer-matrix property, and brings normalizer
//! matrices to block-diagonal canonical form.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest row/column count accepted by [`pseudo_equivalent`].
pub const PSEUDO_EQUIVALENCE_LIMIT: usize = 10;

/// Irredundant `s × r` matrix of nonnegative multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InclusionMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl InclusionMatrix {
    /// Builds a matrix from its rows, rejecting ragged, empty or redundant input.
    pub fn new(rows: Vec<Vec<u64>>) -> Result<Self> {
        let s = rows.len();
        let r = rows.first().map_or(0, Vec::len);
        if s == 0 || r == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut data = Vec::with_capacity(s * r);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != r {
                return Err(Error::RaggedMatrix { row: i, expected: r, got: row.len() });
            }
            data.extend(row);
        }
        Self::from_flat(s, r, data)
    }

    /// Row-major constructor with the same validation as [`InclusionMatrix::new`].
    pub fn from_flat(rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix);
        }
        assert_eq!(data.len(), rows * cols, "flat data length must be rows * cols");
        let m = Self { rows, cols, data };
        if let Some(i) = (0..rows).find(|&i| m.row(i).iter().all(|&a| a == 0)) {
            return Err(Error::ZeroRow(i));
        }
        if let Some(j) = (0..cols).find(|&j| (0..rows).all(|i| m.get(i, j) == 0)) {
            return Err(Error::ZeroColumn(j));
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let data = (0..self.cols)
            .flat_map(|j| (0..self.rows).map(move |i| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        Self { rows: self.cols, cols: self.rows, data }
    }

    /// `PAQ`, i.e. the matrix `[a_{σ(i) τ(j)}]` for `row_perm = σ`, `col_perm = τ`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        assert_eq!(row_perm.len(), self.rows);
        assert_eq!(col_perm.len(), self.cols);
        self.select(row_perm, col_perm)
    }

    /// Entries at the given rows and columns, in the given order.
    fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let data = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        Self { rows: rows.len(), cols: cols.len(), data }
    }

    /// `A v`.
    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, x)| a * x).sum())
            .collect()
    }

    /// `Aᵀ v`.
    pub fn tr_mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.get(i, j) * v[i]).sum())
            .collect()
    }

    /// Kronecker product; rows and columns are indexed lexicographically.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut data = vec![0; rows * cols];
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        data[(i1 * other.rows + i2) * cols + j1 * other.cols + j2] =
                            a * other.get(i2, j2);
                    }
                }
            }
        }
        Self { rows, cols, data }
    }

    /// Block-diagonal assembly `bl-diag(blocks…)`.
    pub fn block_diag(blocks: &[Self]) -> Self {
        assert!(!blocks.is_empty());
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut data = vec![0; rows * cols];
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    data[(r0 + i) * cols + c0 + j] = b.get(i, j);
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        Self { rows, cols, data }
    }

    fn nonzero(&self, i: usize, j: usize) -> bool {
        self.get(i, j) != 0
    }
}

impl fmt::Display for InclusionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}

impl Serialize for InclusionMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for InclusionMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<u64>>::deserialize(d)?;
        Self::new(rows).map_err(serde::de::Error::custom)
    }
}

/// Sizes of the simple summands of a multi-matrix algebra; all positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct DimensionVector(Vec<u64>);

impl DimensionVector {
    pub fn new(dims: Vec<u64>) -> Result<Self> {
        if let Some(index) = dims.iter().position(|&d| d == 0) {
            return Err(Error::NonPositiveDim { index });
        }
        Ok(Self(dims))
    }

    pub fn into_inner(self) -> Vec<u64> {
        self.0
    }
}

impl Deref for DimensionVector {
    type Target = [u64];
    fn deref(&self) -> &[u64] {
        &self.0
    }
}

/// The triple `(A, m', n')` with `n' = A m'`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InclusionDescriptor {
    matrix: InclusionMatrix,
    b_dims: DimensionVector,
    a_dims: DimensionVector,
}

/// Checks `b_dims` against `matrix` and computes `a_dims = A · b_dims`.
pub fn validate_descriptor(
    matrix: InclusionMatrix,
    b_dims: DimensionVector,
) -> Result<InclusionDescriptor> {
    if b_dims.len() != matrix.cols() {
        return Err(Error::DimLengthMismatch { expected: matrix.cols(), got: b_dims.len() });
    }
    // Irredundancy guarantees every row sum is positive.
    let a_dims = DimensionVector(matrix.mul_vec(&b_dims));
    Ok(InclusionDescriptor { matrix, b_dims, a_dims })
}

impl InclusionDescriptor {
    /// Convenience constructor from raw rows and `m'`.
    pub fn from_rows(rows: Vec<Vec<u64>>, b_dims: Vec<u64>) -> Result<Self> {
        validate_descriptor(InclusionMatrix::new(rows)?, DimensionVector::new(b_dims)?)
    }

    pub fn matrix(&self) -> &InclusionMatrix {
        &self.matrix
    }

    /// `m'`, the summand sizes of `B`.
    pub fn b_dims(&self) -> &DimensionVector {
        &self.b_dims
    }

    /// `n'`, the summand sizes of `A`.
    pub fn a_dims(&self) -> &DimensionVector {
        &self.a_dims
    }

    /// `Σ n_i²`, the complex dimension of `A`.
    pub fn dim_a(&self) -> u64 {
        self.a_dims.iter().map(|n| n * n).sum()
    }

    /// `Σ m_j²`, the complex dimension of `B`.
    pub fn dim_b(&self) -> u64 {
        self.b_dims.iter().map(|m| m * m).sum()
    }

    /// The isomorphic inclusion with summands of `A` reordered by `row_perm`
    /// and those of `B` by `col_perm` (same convention as [`InclusionMatrix::permuted`]).
    pub fn relabel(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        Self {
            matrix: self.matrix.permuted(row_perm, col_perm),
            b_dims: DimensionVector(col_perm.iter().map(|&j| self.b_dims[j]).collect()),
            a_dims: DimensionVector(row_perm.iter().map(|&i| self.a_dims[i]).collect()),
        }
    }

    /// Direct sum of inclusions: block-diagonal matrix, concatenated dimensions.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let cat = |x: &DimensionVector, y: &DimensionVector| {
            DimensionVector(x.iter().chain(y.iter()).copied().collect())
        };
        Self {
            matrix: InclusionMatrix::block_diag(&[self.matrix.clone(), other.matrix.clone()]),
            b_dims: cat(&self.b_dims, &other.b_dims),
            a_dims: cat(&self.a_dims, &other.a_dims),
        }
    }

    /// Tensor product of inclusions: Kronecker matrix, lexicographic summand order.
    pub fn tensor(&self, other: &Self) -> Self {
        let prod = |x: &DimensionVector, y: &DimensionVector| {
            DimensionVector(x.iter().flat_map(|a| y.iter().map(move |b| a * b)).collect())
        };
        Self {
            matrix: self.matrix.kron(&other.matrix),
            b_dims: prod(&self.b_dims, &other.b_dims),
            a_dims: prod(&self.a_dims, &other.a_dims),
        }
    }
}

/// `Y_i`, the columns where row `i` is nonzero, in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowSupport {
    pub row_index: usize,
    pub support: Vec<usize>,
}

pub fn row_supports(matrix: &InclusionMatrix) -> Vec<RowSupport> {
    (0..matrix.rows())
        .map(|i| RowSupport {
            row_index: i,
            support: (0..matrix.cols()).filter(|&j| matrix.nonzero(i, j)).collect(),
        })
        .collect()
}

/// One class of the support partition: rows sharing the support `cols`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportClass {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

/// Row classes `R_k` and column classes `C_k`, ordered by smallest row index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportPartition {
    pub classes: Vec<SupportClass>,
}

impl SupportPartition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// Indices with `a_ij = 0`, `a_kj ≠ 0`, `a_il ≠ 0`, `a_kl ≠ 0`: rows `i` and `k`
/// have supports that overlap (at `l`) without coinciding (at `j`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionWitness {
    pub i: usize,
    pub k: usize,
    pub j: usize,
    pub l: usize,
}

impl PartitionWitness {
    /// Re-checks the witness against `matrix`.
    pub fn holds_for(&self, matrix: &InclusionMatrix) -> bool {
        let (s, r) = (matrix.rows(), matrix.cols());
        self.i < s
            && self.k < s
            && self.j < r
            && self.l < r
            && !matrix.nonzero(self.i, self.j)
            && matrix.nonzero(self.k, self.j)
            && matrix.nonzero(self.i, self.l)
            && matrix.nonzero(self.k, self.l)
    }
}

impl fmt::Display for PartitionWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rows {} and {} have overlapping but distinct supports (a[{}][{}] = 0, a[{}][{}] != 0, shared column {})",
            self.i, self.k, self.i, self.j, self.k, self.j, self.l
        )
    }
}

/// Returns the support partition, or the lexicographically smallest
/// `(i, k, j, l)` witnessing that two supports overlap without being equal.
pub fn check_support_partition(
    matrix: &InclusionMatrix,
) -> std::result::Result<SupportPartition, PartitionWitness> {
    let mut classes: Vec<SupportClass> = Vec::new();
    for ys in row_supports(matrix) {
        match classes.iter_mut().find(|c| c.cols == ys.support) {
            Some(c) => c.rows.push(ys.row_index),
            None => classes.push(SupportClass { rows: vec![ys.row_index], cols: ys.support }),
        }
    }
    let mut owner = vec![usize::MAX; matrix.cols()];
    let mut disjoint = true;
    'outer: for (c, class) in classes.iter().enumerate() {
        for &j in &class.cols {
            if owner[j] != usize::MAX {
                disjoint = false;
                break 'outer;
            }
            owner[j] = c;
        }
    }
    if disjoint {
        return Ok(SupportPartition { classes });
    }
    let (s, r) = (matrix.rows(), matrix.cols());
    for i in 0..s {
        for k in 0..s {
            for j in (0..r).filter(|&j| !matrix.nonzero(i, j) && matrix.nonzero(k, j)) {
                if let Some(l) = (0..r).find(|&l| matrix.nonzero(i, l) && matrix.nonzero(k, l)) {
                    return Err(PartitionWitness { i, k, j, l });
                }
            }
        }
    }
    unreachable!("overlapping distinct supports always admit a witness")
}

/// Why a matrix fails to be a normalizer matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormalizerFailure {
    /// Row `row` has distinct nonzero entries at columns `first` and `other`.
    UnequalRowEntries { row: usize, first: usize, other: usize },
    /// Row supports do not form a partition.
    Partition(PartitionWitness),
}

impl NormalizerFailure {
    pub fn holds_for(&self, matrix: &InclusionMatrix) -> bool {
        match *self {
            Self::UnequalRowEntries { row, first, other } => {
                row < matrix.rows()
                    && first < matrix.cols()
                    && other < matrix.cols()
                    && matrix.nonzero(row, first)
                    && matrix.nonzero(row, other)
                    && matrix.get(row, first) != matrix.get(row, other)
            }
            Self::Partition(w) => w.holds_for(matrix),
        }
    }
}

impl fmt::Display for NormalizerFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UnequalRowEntries { row, first, other } => write!(
                f,
                "row {row} has unequal nonzero entries at columns {first} and {other}"
            ),
            Self::Partition(w) => write!(f, "{w}"),
        }
    }
}

fn first_unequal_row_entry(matrix: &InclusionMatrix) -> Option<NormalizerFailure> {
    (0..matrix.rows()).find_map(|i| {
        let row = matrix.row(i);
        let first = row.iter().position(|&a| a != 0)?;
        let other = row.iter().position(|&a| a != 0 && a != row[first])?;
        Some(NormalizerFailure::UnequalRowEntries { row: i, first, other })
    })
}

/// Normalizer-matrix test returning the support partition on success and
/// the first failing condition (row entries before partition) otherwise.
pub fn check_normalizer_matrix(
    matrix: &InclusionMatrix,
) -> std::result::Result<SupportPartition, NormalizerFailure> {
    if let Some(failure) = first_unequal_row_entry(matrix) {
        return Err(failure);
    }
    check_support_partition(matrix).map_err(NormalizerFailure::Partition)
}

pub fn is_normalizer_matrix(matrix: &InclusionMatrix) -> bool {
    check_normalizer_matrix(matrix).is_ok()
}

/// One diagonal block `A_kk` of the canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalBlock {
    /// `R_k` in natural order.
    pub rows: Vec<usize>,
    /// `C_k` in natural order.
    pub cols: Vec<usize>,
    /// Common nonzero entry of each row of the block.
    pub row_entries: Vec<u64>,
    pub matrix: InclusionMatrix,
}

/// Permutations `σ` (rows) and `τ` (columns) with `[a_{σ(i) τ(j)}] = bl-diag(A_11, …, A_pp)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonicalForm {
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
    pub blocks: Vec<CanonicalBlock>,
}

impl CanonicalForm {
    pub fn block_diagonal(&self) -> InclusionMatrix {
        let blocks: Vec<_> = self.blocks.iter().map(|b| b.matrix.clone()).collect();
        InclusionMatrix::block_diag(&blocks)
    }
}

pub fn canonicalize(matrix: &InclusionMatrix) -> Result<CanonicalForm> {
    let partition = check_normalizer_matrix(matrix).map_err(Error::NotNormalizerMatrix)?;
    let mut row_perm = Vec::with_capacity(matrix.rows());
    let mut col_perm = Vec::with_capacity(matrix.cols());
    let mut blocks = Vec::with_capacity(partition.len());
    for class in partition.classes {
        row_perm.extend(&class.rows);
        col_perm.extend(&class.cols);
        let row_entries: Vec<u64> =
            class.rows.iter().map(|&i| matrix.get(i, class.cols[0])).collect();
        let block = matrix.select(&class.rows, &class.cols);
        blocks.push(CanonicalBlock {
            rows: class.rows,
            cols: class.cols,
            row_entries,
            matrix: block,
        });
    }
    Ok(CanonicalForm { row_perm, col_perm, blocks })
}

/// Exact decision of `b = P a Q` for permutation matrices `P`, `Q`.
pub fn pseudo_equivalent(a: &InclusionMatrix, b: &InclusionMatrix) -> Result<bool> {
    Ok(find_pseudo_equivalence(a, b)?.is_some())
}

/// Finds `(σ, τ)` with `b == a.permuted(σ, τ)`, if any.
///
/// Backtracks over column assignments; a partial assignment survives only
/// while the multiset of rows of `a` restricted to the chosen columns equals
/// the multiset of rows of `b` restricted to the assigned prefix.
pub fn find_pseudo_equivalence(
    a: &InclusionMatrix,
    b: &InclusionMatrix,
) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    for m in [a, b] {
        if m.rows() > PSEUDO_EQUIVALENCE_LIMIT || m.cols() > PSEUDO_EQUIVALENCE_LIMIT {
            return Err(Error::SizeLimit {
                rows: m.rows(),
                cols: m.cols(),
                limit: PSEUDO_EQUIVALENCE_LIMIT,
            });
        }
    }
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Ok(None);
    }
    let sorted = |mut v: Vec<u64>| {
        v.sort_unstable();
        v
    };
    let row_sig = |m: &InclusionMatrix| {
        let mut rows: Vec<_> = (0..m.rows()).map(|i| sorted(m.row(i).to_vec())).collect();
        rows.sort();
        rows
    };
    let col_sig = |m: &InclusionMatrix| {
        let mut cols: Vec<_> = (0..m.cols()).map(|j| sorted(m.column(j))).collect();
        cols.sort();
        cols
    };
    if row_sig(a) != row_sig(b) || col_sig(a) != col_sig(b) {
        return Ok(None);
    }

    let b_col_sigs: Vec<_> = (0..b.cols()).map(|j| sorted(b.column(j))).collect();
    let a_col_sigs: Vec<_> = (0..a.cols()).map(|j| sorted(a.column(j))).collect();
    let mut tau = Vec::with_capacity(a.cols());
    let mut used = vec![false; a.cols()];
    if !assign_columns(a, b, &a_col_sigs, &b_col_sigs, &mut tau, &mut used) {
        return Ok(None);
    }

    let mut sigma = Vec::with_capacity(a.rows());
    let mut taken = vec![false; a.rows()];
    for i in 0..b.rows() {
        let target = b.row(i);
        let src = (0..a.rows())
            .find(|&x| !taken[x] && tau.iter().zip(target).all(|(&t, &v)| a.get(x, t) == v))
            .expect("row multisets agree after full column assignment");
        taken[src] = true;
        sigma.push(src);
    }
    Ok(Some((sigma, tau)))
}

fn assign_columns(
    a: &InclusionMatrix,
    b: &InclusionMatrix,
    a_col_sigs: &[Vec<u64>],
    b_col_sigs: &[Vec<u64>],
    tau: &mut Vec<usize>,
    used: &mut [bool],
) -> bool {
    let j = tau.len();
    if j == b.cols() {
        return true;
    }
    for c in 0..a.cols() {
        if used[c] || a_col_sigs[c] != b_col_sigs[j] {
            continue;
        }
        tau.push(c);
        if prefix_rows_agree(a, b, tau) {
            used[c] = true;
            if assign_columns(a, b, a_col_sigs, b_col_sigs, tau, used) {
                return true;
            }
            used[c] = false;
        }
        tau.pop();
    }
    false
}

fn prefix_rows_agree(a: &InclusionMatrix, b: &InclusionMatrix, tau: &[usize]) -> bool {
    let mut ra: Vec<Vec<u64>> =
        (0..a.rows()).map(|i| tau.iter().map(|&t| a.get(i, t)).collect()).collect();
    let mut rb: Vec<Vec<u64>> = (0..b.rows()).map(|i| b.row(i)[..tau.len()].to_vec()).collect();
    ra.sort_unstable();
    rb.sort_unstable();
    ra == rb
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u64]]) -> InclusionMatrix {
        InclusionMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn descriptor_dims() {
        let d = InclusionDescriptor::from_rows(vec![vec![3, 3, 0, 3], vec![0, 0, 2, 2]], vec![1; 4])
            .unwrap();
        assert_eq!(&**d.a_dims(), &[9, 4]);
        let d = InclusionDescriptor::from_rows(vec![vec![1]], vec![7]).unwrap();
        assert_eq!(&**d.a_dims(), &[7]);
        let d = InclusionDescriptor::from_rows(vec![vec![1; 5]], vec![1; 5]).unwrap();
        assert_eq!(&**d.a_dims(), &[5]);
    }

    #[test]
    fn descriptor_rejects_bad_input() {
        assert!(matches!(InclusionMatrix::new(vec![vec![1, 0], vec![0, 0]]), Err(Error::ZeroRow(1))));
        assert!(matches!(InclusionMatrix::new(vec![vec![1, 0], vec![2, 0]]), Err(Error::ZeroColumn(1))));
        assert!(matches!(InclusionMatrix::new(vec![]), Err(Error::EmptyMatrix)));
        assert!(matches!(
            InclusionMatrix::new(vec![vec![1, 1], vec![1]]),
            Err(Error::RaggedMatrix { row: 1, .. })
        ));
        assert!(matches!(
            InclusionDescriptor::from_rows(vec![vec![1, 1]], vec![1, 0]),
            Err(Error::NonPositiveDim { index: 1 })
        ));
        assert!(matches!(
            InclusionDescriptor::from_rows(vec![vec![1, 1]], vec![1]),
            Err(Error::DimLengthMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn supports() {
        let ys = row_supports(&m(&[&[3, 3, 0, 3], &[0, 0, 2, 2]]));
        assert_eq!(ys[0].support, vec![0, 1, 3]);
        assert_eq!(ys[1].support, vec![2, 3]);
        let ys = row_supports(&m(&[&[4, 0, 1, 0], &[0, 2, 0, 5]]));
        assert_eq!(ys[0].support, vec![0, 2]);
        assert_eq!(ys[1].support, vec![1, 3]);
        assert_eq!(row_supports(&m(&[&[1]]))[0].support, vec![0]);
    }

    #[test]
    fn partition_and_witness() {
        let w = check_support_partition(&m(&[&[3, 3, 0, 3], &[0, 0, 2, 2]])).unwrap_err();
        assert_eq!(w, PartitionWitness { i: 0, k: 1, j: 2, l: 3 });
        let p = check_support_partition(&m(&[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!(
            p.classes,
            vec![
                SupportClass { rows: vec![0], cols: vec![0] },
                SupportClass { rows: vec![1], cols: vec![1] }
            ]
        );
    }

    #[test]
    fn normalizer_predicate() {
        assert!(matches!(
            check_normalizer_matrix(&m(&[&[3, 3, 0, 3], &[0, 0, 2, 2]])),
            Err(NormalizerFailure::Partition(_))
        ));
        assert!(is_normalizer_matrix(&m(&[&[2, 2, 0], &[0, 0, 5]])));
        assert_eq!(
            check_normalizer_matrix(&m(&[&[1, 2]])).unwrap_err(),
            NormalizerFailure::UnequalRowEntries { row: 0, first: 0, other: 1 }
        );
    }

    #[test]
    fn canonical_forms() {
        let a = m(&[&[0, 2], &[3, 0]]);
        let cf = canonicalize(&a).unwrap();
        assert_eq!(cf.row_perm, vec![0, 1]);
        assert_eq!(cf.col_perm, vec![1, 0]);
        assert_eq!(cf.blocks.len(), 2);
        assert_eq!(cf.blocks[0].matrix, m(&[&[2]]));
        assert_eq!(cf.blocks[1].matrix, m(&[&[3]]));
        assert_eq!(a.permuted(&cf.row_perm, &cf.col_perm), m(&[&[2, 0], &[0, 3]]));

        let a = m(&[&[2, 2, 0], &[0, 0, 5]]);
        let cf = canonicalize(&a).unwrap();
        assert_eq!(cf.row_perm, vec![0, 1]);
        assert_eq!(cf.col_perm, vec![0, 1, 2]);
        assert_eq!(cf.blocks[0].matrix, m(&[&[2, 2]]));
        assert_eq!(cf.blocks[1].row_entries, vec![5]);
        assert_eq!(cf.block_diagonal(), a);

        let cf = canonicalize(&m(&[&[4, 4, 4]])).unwrap();
        assert_eq!(cf.blocks.len(), 1);
        assert_eq!(cf.col_perm, vec![0, 1, 2]);

        assert!(matches!(canonicalize(&m(&[&[1, 2]])), Err(Error::NotNormalizerMatrix(_))));
    }

    #[test]
    fn pseudo_equivalence_examples() {
        assert!(pseudo_equivalent(&m(&[&[0, 2], &[3, 0]]), &m(&[&[2, 0], &[0, 3]])).unwrap());
        assert!(pseudo_equivalent(&m(&[&[1, 2]]), &m(&[&[2, 1]])).unwrap());
        assert!(!pseudo_equivalent(&m(&[&[1, 1], &[1, 2]]), &m(&[&[1, 1], &[2, 2]])).unwrap());
        let big = InclusionMatrix::new(vec![vec![1; 11]]).unwrap();
        assert!(matches!(pseudo_equivalent(&big, &big), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn found_permutations_reproduce_target() {
        let a = m(&[&[1, 0, 2], &[0, 3, 0], &[1, 1, 0]]);
        let b = a.permuted(&[2, 0, 1], &[1, 2, 0]);
        let (s, t) = find_pseudo_equivalence(&a, &b).unwrap().unwrap();
        assert_eq!(a.permuted(&s, &t), b);
    }

    #[test]
    fn kron_and_block_diag() {
        let col = m(&[&[1], &[2]]);
        let ones = m(&[&[1, 1]]);
        assert_eq!(col.kron(&ones), m(&[&[1, 1], &[2, 2]]));
        assert_eq!(
            InclusionMatrix::block_diag(&[m(&[&[2, 2]]), m(&[&[5]])]),
            m(&[&[2, 2, 0], &[0, 0, 5]])
        );
        assert_eq!(m(&[&[1, 2, 3]]).transpose(), m(&[&[1], &[2], &[3]]));
    }
}
