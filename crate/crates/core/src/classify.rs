//! Regularity classification, spectral condition, depth and the reductions
//! (corner, center) used to analyse an inclusion.
//!
//! An inclusion is regular exactly when its inclusion matrix is a normalizer
//! matrix and, within every row support, the summands of `B` all have the same
//! size. In that case it splits, after relabelling summands, into a direct sum
//! over support classes of tensor products
//! `(M_m ⊂ M_m) ⊗ (ℂ ⊂ ⊕_i M_{a_i}) ⊗ (ℂ^r ⊂ M_r)`.

use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inclusion::{
    canonicalize, check_normalizer_matrix, row_supports, validate_descriptor, CanonicalForm,
    DimensionVector, InclusionDescriptor, InclusionMatrix, NormalizerFailure, PartitionWitness,
};

/// Default upper bound for the depth search.
pub const DEFAULT_DEPTH_MAX: usize = 6;

/// Tolerance used when comparing `q` against the top eigenvalue of `AᵀA`.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// A reason an inclusion is not regular, checked in this priority order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FailureWitness {
    UnequalRowEntries { row: usize, first: usize, other: usize },
    Partition { i: usize, k: usize, j: usize, l: usize },
    /// Columns `j` and `j_prime` both lie in the support of `row` but `m_j ≠ m_j'`.
    UnequalDimensions { row: usize, j: usize, j_prime: usize },
}

impl FailureWitness {
    /// Independent re-verification against the descriptor.
    pub fn holds_for(&self, d: &InclusionDescriptor) -> bool {
        let a = d.matrix();
        match *self {
            Self::UnequalRowEntries { row, first, other } => {
                NormalizerFailure::UnequalRowEntries { row, first, other }.holds_for(a)
            }
            Self::Partition { i, k, j, l } => PartitionWitness { i, k, j, l }.holds_for(a),
            Self::UnequalDimensions { row, j, j_prime } => {
                row < a.rows()
                    && j < a.cols()
                    && j_prime < a.cols()
                    && a.get(row, j) != 0
                    && a.get(row, j_prime) != 0
                    && d.b_dims()[j] != d.b_dims()[j_prime]
            }
        }
    }
}

impl From<NormalizerFailure> for FailureWitness {
    fn from(f: NormalizerFailure) -> Self {
        match f {
            NormalizerFailure::UnequalRowEntries { row, first, other } => {
                Self::UnequalRowEntries { row, first, other }
            }
            NormalizerFailure::Partition(PartitionWitness { i, k, j, l }) => {
                Self::Partition { i, k, j, l }
            }
        }
    }
}

impl fmt::Display for FailureWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::UnequalRowEntries { row, first, other } => write!(
                f,
                "row {row} has unequal nonzero entries at columns {first} and {other}"
            ),
            Self::Partition { i, k, j, l } => write!(
                f,
                "supports of rows {i} and {k} overlap at column {l} but differ at column {j}"
            ),
            Self::UnequalDimensions { row, j, j_prime } => write!(
                f,
                "columns {j} and {j_prime} lie in the support of row {row} with different summand sizes"
            ),
        }
    }
}

/// Building-block data of one canonical block:
/// `M_{m_k} ⊗ ℂ^{r_k} ⊂ ⊕_i M_{n_{k_i}}` with `n_{k_i} = m_k · r_k · a_{k_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockFactorization {
    pub m_k: u64,
    pub r_k: usize,
    pub s_k: usize,
    /// Common row entry `a_{k_i k¹}` for each row of the block.
    pub column_entries: Vec<u64>,
}

impl BlockFactorization {
    /// `(a_{k_i})ᵢ ⊗ (1, …, 1)`.
    pub fn matrix(&self) -> InclusionMatrix {
        let rows = self.column_entries.iter().map(|&a| vec![a; self.r_k]).collect();
        InclusionMatrix::new(rows).expect("block entries are positive")
    }

    pub fn descriptor(&self) -> InclusionDescriptor {
        validate_descriptor(
            self.matrix(),
            DimensionVector::new(vec![self.m_k; self.r_k]).expect("m_k is positive"),
        )
        .expect("block dimensions match")
    }

    pub fn a_dims(&self) -> Vec<u64> {
        self.column_entries.iter().map(|&a| self.m_k * self.r_k as u64 * a).collect()
    }

    /// `d_k = r_k Σ_i a_{k_i}²`.
    pub fn spectral_d(&self) -> u64 {
        self.r_k as u64 * self.column_entries.iter().map(|a| a * a).sum::<u64>()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionTree {
    pub canonical: CanonicalForm,
    pub blocks: Vec<BlockFactorization>,
}

impl DecompositionTree {
    /// Direct sum of the block inclusions in canonical order.
    pub fn reassemble(&self) -> InclusionDescriptor {
        let mut it = self.blocks.iter().map(BlockFactorization::descriptor);
        let first = it.next().expect("at least one block");
        it.fold(first, |acc, b| acc.direct_sum(&b))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegularityVerdict {
    Regular(DecompositionTree),
    NonRegular(FailureWitness),
}

impl RegularityVerdict {
    pub fn is_regular(&self) -> bool {
        matches!(self, Self::Regular(_))
    }

    pub fn witness(&self) -> Option<&FailureWitness> {
        match self {
            Self::NonRegular(w) => Some(w),
            Self::Regular(_) => None,
        }
    }

    pub fn decomposition(&self) -> Option<&DecompositionTree> {
        match self {
            Self::Regular(t) => Some(t),
            Self::NonRegular(_) => None,
        }
    }
}

impl Serialize for RegularityVerdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RegularityVerdict", 2)?;
        match self {
            Self::Regular(t) => {
                st.serialize_field("regular", &true)?;
                st.serialize_field("certificate", t)?;
            }
            Self::NonRegular(w) => {
                st.serialize_field("regular", &false)?;
                st.serialize_field("certificate", w)?;
            }
        }
        st.end()
    }
}

fn unequal_dimension(d: &InclusionDescriptor) -> Option<FailureWitness> {
    let m = d.b_dims();
    row_supports(d.matrix()).into_iter().find_map(|ys| {
        let j = ys.support[0];
        let j_prime = ys.support.iter().copied().find(|&jp| m[jp] != m[j])?;
        Some(FailureWitness::UnequalDimensions { row: ys.row_index, j, j_prime })
    })
}

pub fn classify_regular(d: &InclusionDescriptor) -> RegularityVerdict {
    if let Err(f) = check_normalizer_matrix(d.matrix()) {
        return RegularityVerdict::NonRegular(f.into());
    }
    if let Some(w) = unequal_dimension(d) {
        return RegularityVerdict::NonRegular(w);
    }
    let canonical = canonicalize(d.matrix()).expect("normalizer matrix canonicalizes");
    let blocks = canonical
        .blocks
        .iter()
        .map(|b| BlockFactorization {
            m_k: d.b_dims()[b.cols[0]],
            r_k: b.cols.len(),
            s_k: b.rows.len(),
            column_entries: b.row_entries.clone(),
        })
        .collect();
    RegularityVerdict::Regular(DecompositionTree { canonical, blocks })
}

pub fn decompose(d: &InclusionDescriptor) -> Result<DecompositionTree> {
    match classify_regular(d) {
        RegularityVerdict::Regular(t) => Ok(t),
        RegularityVerdict::NonRegular(w) => Err(Error::NotRegular(w)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectralReport {
    pub satisfied: bool,
    /// The common ratio when `Aᵀ n' = d m'`.
    pub d: Option<u64>,
    /// `Aᵀ n'`.
    pub at_n: Vec<u64>,
    /// `d_k` per canonical block, present when the inclusion is regular.
    pub per_block_d: Option<Vec<u64>>,
}

pub fn spectral_condition(desc: &InclusionDescriptor) -> SpectralReport {
    let at_n = desc.matrix().tr_mul_vec(desc.a_dims());
    let m = desc.b_dims();
    let ratio = at_n[0] / m[0];
    let satisfied = at_n.iter().zip(m.iter()).all(|(&x, &mj)| x % mj == 0 && x / mj == ratio);
    let per_block_d = decompose(desc)
        .ok()
        .map(|t| t.blocks.iter().map(BlockFactorization::spectral_d).collect::<Vec<_>>());
    if let Some(dk) = &per_block_d {
        debug_assert_eq!(satisfied, dk.iter().all(|&x| x == dk[0]));
    }
    SpectralReport { satisfied, d: satisfied.then_some(ratio), at_n, per_block_d }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DepthReport {
    pub depth: usize,
    pub q_min: u64,
    /// `‖A‖²`, the largest eigenvalue of `AᵀA`.
    pub norm_sq_bound: f64,
}

type IntMat = Vec<Vec<u128>>;

fn int_mul(x: &IntMat, y: &IntMat) -> Result<IntMat> {
    let (n, k, m) = (x.len(), y.len(), y[0].len());
    let mut out = vec![vec![0u128; m]; n];
    for i in 0..n {
        for t in 0..k {
            let a = x[i][t];
            if a == 0 {
                continue;
            }
            for j in 0..m {
                let p = a.checked_mul(y[t][j]).ok_or(Error::Overflow("matrix power"))?;
                out[i][j] = out[i][j].checked_add(p).ok_or(Error::Overflow("matrix power"))?;
            }
        }
    }
    Ok(out)
}

/// Largest eigenvalue of `AᵀA`.
pub fn norm_squared(matrix: &InclusionMatrix) -> f64 {
    let a = DMatrix::from_fn(matrix.rows(), matrix.cols(), |i, j| matrix.get(i, j) as f64);
    let ata = a.transpose() * &a;
    SymmetricEigen::new(ata).eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Smallest `n ∈ [2, n_max]` with `A^{n+1} ≤ q A^{n-1}` for some positive
/// integer `q`, where `A² = AAᵀ`, `A³ = AAᵀA`, and so on.
pub fn depth(matrix: &InclusionMatrix, n_max: usize) -> Result<DepthReport> {
    if n_max < 2 {
        return Err(Error::InvalidConfig(format!("n_max must be at least 2, got {n_max}")));
    }
    let a: IntMat = matrix.to_rows().into_iter().map(|r| r.into_iter().map(u128::from).collect()).collect();
    let at: IntMat = matrix
        .transpose()
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(u128::from).collect())
        .collect();
    // powers[k] = A^{k+1}
    let mut powers = vec![a.clone()];
    for k in 1..=n_max {
        let next = int_mul(&powers[k - 1], if k % 2 == 1 { &at } else { &a })?;
        powers.push(next);
    }
    for n in 2..=n_max {
        let hi = &powers[n];
        let lo = &powers[n - 2];
        let mut q: u128 = 1;
        let mut covered = true;
        'scan: for (row_hi, row_lo) in hi.iter().zip(lo) {
            for (&h, &l) in row_hi.iter().zip(row_lo) {
                if h == 0 {
                    continue;
                }
                if l == 0 {
                    covered = false;
                    break 'scan;
                }
                q = q.max(h.div_ceil(l));
            }
        }
        if covered {
            let q_min = u64::try_from(q).map_err(|_| Error::Overflow("q_min"))?;
            return Ok(DepthReport { depth: n, q_min, norm_sq_bound: norm_squared(matrix) });
        }
    }
    Err(Error::DepthExceeds { n_max })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DepthTwoCheck {
    pub holds: bool,
    /// `max_k d_k`.
    pub q: u64,
    pub norm_sq: f64,
}

/// For a regular inclusion, checks `A³ ≤ qA` with `q = max_k r_k Σ a²` and
/// that this `q` equals `‖A‖²`.
pub fn verify_depth_two_theorem(d: &InclusionDescriptor) -> Result<DepthTwoCheck> {
    let tree = decompose(d)?;
    let q = tree.blocks.iter().map(BlockFactorization::spectral_d).max().expect("nonempty");
    let a = d.matrix();
    let rows: IntMat = a.to_rows().into_iter().map(|r| r.into_iter().map(u128::from).collect()).collect();
    let cols: IntMat =
        a.transpose().to_rows().into_iter().map(|r| r.into_iter().map(u128::from).collect()).collect();
    let cube = int_mul(&int_mul(&rows, &cols)?, &rows)?;
    let bounded = cube
        .iter()
        .zip(&rows)
        .all(|(c, r)| c.iter().zip(r).all(|(&x, &y)| x <= u128::from(q) * y));
    let norm_sq = norm_squared(a);
    let matches_norm = (q as f64 - norm_sq).abs() <= NORM_TOLERANCE * (q as f64).max(1.0);
    Ok(DepthTwoCheck { holds: bounded && matches_norm, q, norm_sq })
}

/// The corner inclusion `P_i B ⊂ P_i A` (row `i` restricted to its support).
pub fn restrict_to_corner(d: &InclusionDescriptor, i: usize) -> Result<InclusionDescriptor> {
    let a = d.matrix();
    if i >= a.rows() {
        return Err(Error::IndexOutOfRange { index: i, len: a.rows() });
    }
    let support: Vec<usize> = (0..a.cols()).filter(|&j| a.get(i, j) != 0).collect();
    let row = support.iter().map(|&j| a.get(i, j)).collect();
    let dims = support.iter().map(|&j| d.b_dims()[j]).collect();
    InclusionDescriptor::from_rows(vec![row], dims)
}

/// The inclusion `Z(B) ⊂ A`, with matrix `[m_j a_ij]`.
pub fn center_descriptor(d: &InclusionDescriptor) -> InclusionDescriptor {
    let a = d.matrix();
    let m = d.b_dims();
    let rows = (0..a.rows())
        .map(|i| (0..a.cols()).map(|j| m[j] * a.get(i, j)).collect())
        .collect();
    InclusionDescriptor::from_rows(rows, vec![1; a.cols()]).expect("center of a valid inclusion")
}

/// Size bounds for the seeded descriptor generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorLimits {
    pub max_blocks: usize,
    pub max_block_rows: usize,
    pub max_block_cols: usize,
    pub max_entry: u64,
    pub max_dim: u64,
    /// Apply random row/column permutations to the assembled block form.
    pub scramble: bool,
}

impl Default for GeneratorLimits {
    fn default() -> Self {
        Self {
            max_blocks: 3,
            max_block_rows: 3,
            max_block_cols: 3,
            max_entry: 3,
            max_dim: 3,
            scramble: true,
        }
    }
}

/// The defect planted by [`generate_broken_descriptor`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    UnequalRowEntry,
    BrokenPartition,
    UnequalDimension,
}

struct RawBlocks {
    blocks: Vec<(Vec<u64>, usize, u64)>,
}

impl RawBlocks {
    fn random(rng: &mut ChaCha8Rng, lim: &GeneratorLimits, min_blocks: usize, wide_first: bool) -> Self {
        let p = rng.random_range(min_blocks.min(lim.max_blocks.max(1))..=lim.max_blocks.max(min_blocks));
        let blocks = (0..p)
            .map(|k| {
                let s_k = rng.random_range(1..=lim.max_block_rows.max(1));
                let lo = if k == 0 && wide_first { 2 } else { 1 };
                let r_k = rng.random_range(lo..=lim.max_block_cols.max(lo));
                let entries = (0..s_k).map(|_| rng.random_range(1..=lim.max_entry.max(1))).collect();
                (entries, r_k, rng.random_range(1..=lim.max_dim.max(1)))
            })
            .collect();
        Self { blocks }
    }

    fn assemble(&self) -> (Vec<Vec<u64>>, Vec<u64>, Vec<usize>) {
        let s: usize = self.blocks.iter().map(|b| b.0.len()).sum();
        let r: usize = self.blocks.iter().map(|b| b.1).sum();
        let mut rows = vec![vec![0u64; r]; s];
        let mut dims = Vec::with_capacity(r);
        let mut col_starts = Vec::with_capacity(self.blocks.len());
        let (mut r0, mut c0) = (0, 0);
        for (entries, r_k, m_k) in &self.blocks {
            col_starts.push(c0);
            for (x, &a) in entries.iter().enumerate() {
                rows[r0 + x][c0..c0 + r_k].fill(a);
            }
            dims.extend(std::iter::repeat_n(*m_k, *r_k));
            r0 += entries.len();
            c0 += r_k;
        }
        (rows, dims, col_starts)
    }
}

fn scramble(
    rng: &mut ChaCha8Rng,
    rows: Vec<Vec<u64>>,
    dims: Vec<u64>,
    enabled: bool,
) -> InclusionDescriptor {
    let d = InclusionDescriptor::from_rows(rows, dims).expect("generated descriptor is valid");
    if !enabled {
        return d;
    }
    let mut sigma: Vec<usize> = (0..d.matrix().rows()).collect();
    let mut tau: Vec<usize> = (0..d.matrix().cols()).collect();
    sigma.shuffle(rng);
    tau.shuffle(rng);
    d.relabel(&sigma, &tau)
}

/// Deterministic regular descriptor assembled from random building blocks.
pub fn generate_regular_descriptor(seed: u64, limits: &GeneratorLimits) -> InclusionDescriptor {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw = RawBlocks::random(&mut rng, limits, 1, false);
    let (rows, dims, _) = raw.assemble();
    scramble(&mut rng, rows, dims, limits.scramble)
}

/// Like [`generate_regular_descriptor`] but with one planted defect, so the
/// result is never regular.
pub fn generate_broken_descriptor(
    seed: u64,
    limits: &GeneratorLimits,
    violation: Violation,
) -> InclusionDescriptor {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let min_blocks = if violation == Violation::BrokenPartition { 2 } else { 1 };
    let raw = RawBlocks::random(&mut rng, limits, min_blocks, true);
    let (mut rows, mut dims, col_starts) = raw.assemble();
    match violation {
        Violation::UnequalRowEntry => rows[0][1] += 1,
        Violation::BrokenPartition => rows[0][col_starts[1]] = rows[0][0],
        Violation::UnequalDimension => dims[1] += 1,
    }
    scramble(&mut rng, rows, dims, limits.scramble)
}

/// Regular descriptor that also satisfies the spectral condition: every
/// block is drawn with the same `d = r_k Σ a²`.
pub fn generate_spectral_descriptor(seed: u64, limits: &GeneratorLimits) -> InclusionDescriptor {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut shapes: Vec<(u64, Vec<u64>, usize)> = Vec::new();
    for s in 1..=limits.max_block_rows.max(1) {
        let mut entries = vec![1u64; s];
        loop {
            for r in 1..=limits.max_block_cols.max(1) {
                let d = r as u64 * entries.iter().map(|a| a * a).sum::<u64>();
                shapes.push((d, entries.clone(), r));
            }
            // next nondecreasing tuple
            let Some(pos) = (0..s).rev().find(|&x| entries[x] < limits.max_entry.max(1)) else {
                break;
            };
            let v = entries[pos] + 1;
            entries[pos..].fill(v);
        }
    }
    let mut ds: Vec<u64> = shapes.iter().map(|x| x.0).collect();
    ds.sort_unstable();
    ds.dedup();
    let target = ds[rng.random_range(0..ds.len())];
    let pool: Vec<_> = shapes.iter().filter(|x| x.0 == target).collect();
    let p = rng.random_range(1..=limits.max_blocks.max(1));
    let blocks = (0..p)
        .map(|_| {
            let (_, entries, r) = pool[rng.random_range(0..pool.len())];
            let mut entries = entries.clone();
            entries.shuffle(&mut rng);
            (entries, *r, rng.random_range(1..=limits.max_dim.max(1)))
        })
        .collect();
    let (rows, dims, _) = RawBlocks { blocks }.assemble();
    scramble(&mut rng, rows, dims, limits.scramble)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inclusion::pseudo_equivalent;

    fn desc(rows: &[&[u64]], dims: &[u64]) -> InclusionDescriptor {
        InclusionDescriptor::from_rows(rows.iter().map(|r| r.to_vec()).collect(), dims.to_vec())
            .unwrap()
    }

    #[test]
    fn worked_example_is_not_regular() {
        let v = classify_regular(&desc(&[&[3, 3, 0, 3], &[0, 0, 2, 2]], &[1, 1, 1, 1]));
        assert_eq!(v.witness(), Some(&FailureWitness::Partition { i: 0, k: 1, j: 2, l: 3 }));
    }

    #[test]
    fn diagonal_is_regular() {
        for n in 1..6 {
            assert!(classify_regular(&desc(&[&vec![1; n]], &vec![1; n])).is_regular());
        }
    }

    #[test]
    fn dimension_perturbation_is_detected() {
        let (c, m) = (2, 3);
        let rows: &[&[u64]] = &[&[c, 0, c, 0], &[0, c, 0, c]];
        assert!(classify_regular(&desc(rows, &[m, m, m, m])).is_regular());
        let v = classify_regular(&desc(rows, &[m, m, m + 1, m]));
        assert_eq!(
            v.witness(),
            Some(&FailureWitness::UnequalDimensions { row: 0, j: 0, j_prime: 2 })
        );
    }

    #[test]
    fn witness_priority_prefers_row_entries() {
        // fails all three conditions
        let d = desc(&[&[1, 2, 0], &[0, 1, 1]], &[1, 2, 3]);
        assert!(matches!(
            classify_regular(&d).witness(),
            Some(FailureWitness::UnequalRowEntries { row: 0, .. })
        ));
    }

    #[test]
    fn decompositions() {
        let t = decompose(&desc(&[&[2]], &[3])).unwrap();
        assert_eq!(t.blocks, vec![BlockFactorization { m_k: 3, r_k: 1, s_k: 1, column_entries: vec![2] }]);
        assert_eq!(t.blocks[0].a_dims(), vec![6]);

        let t = decompose(&desc(&[&[1, 1, 1, 1]], &[1, 1, 1, 1])).unwrap();
        assert_eq!(t.blocks[0].m_k, 1);
        assert_eq!(t.blocks[0].r_k, 4);
        assert_eq!(t.blocks[0].column_entries, vec![1]);

        let m = 5;
        let d = desc(&[&[1, 1], &[2, 2]], &[m, m]);
        let t = decompose(&d).unwrap();
        assert_eq!(t.blocks.len(), 1);
        assert_eq!((t.blocks[0].m_k, t.blocks[0].r_k), (m, 2));
        assert_eq!(t.blocks[0].column_entries, vec![1, 2]);
        assert_eq!(t.blocks[0].a_dims(), vec![2 * m, 4 * m]);
        assert_eq!(t.reassemble(), d);

        assert!(matches!(
            decompose(&desc(&[&[1, 2]], &[1, 1])),
            Err(Error::NotRegular(FailureWitness::UnequalRowEntries { .. }))
        ));
    }

    #[test]
    fn spectral_examples() {
        let r = spectral_condition(&desc(&[&[1, 0], &[0, 2]], &[1, 1]));
        assert!(!r.satisfied);
        assert_eq!(r.at_n, vec![1, 4]);
        assert_eq!(r.per_block_d, Some(vec![1, 4]));

        let r = spectral_condition(&desc(&[&[1; 4]], &[1; 4]));
        assert!(r.satisfied);
        assert_eq!(r.d, Some(4));

        let r = spectral_condition(&desc(&[&[2], &[1]], &[1]));
        assert_eq!(r.d, Some(5));
        assert_eq!(r.per_block_d, Some(vec![5]));
    }

    #[test]
    fn spectral_needs_integer_ratio() {
        // n' = (12), Aᵀn' = (36) = 9·m'
        let r = spectral_condition(&desc(&[&[3]], &[4]));
        assert_eq!(r.at_n, vec![36]);
        assert_eq!(r.d, Some(9));
        let r = spectral_condition(&desc(&[&[1, 1]], &[2, 3]));
        // Aᵀn' = (5, 5) is not a multiple of m' = (2, 3)
        assert!(!r.satisfied);
        assert_eq!(r.per_block_d, None);
    }

    #[test]
    fn depth_examples() {
        let m = |rows: &[&[u64]]| InclusionMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap();
        let r = depth(&m(&[&[1, 1], &[1, 1]]), 6).unwrap();
        assert_eq!((r.depth, r.q_min), (2, 4));
        assert!((r.norm_sq_bound - 4.0).abs() < 1e-9);
        let r = depth(&m(&[&[1, 1], &[0, 1]]), 6).unwrap();
        assert_eq!((r.depth, r.q_min), (3, 3));
        let r = depth(&m(&[&[1]]), 6).unwrap();
        assert_eq!((r.depth, r.q_min), (2, 1));
        assert!(matches!(depth(&m(&[&[1, 1], &[0, 1]]), 2), Err(Error::DepthExceeds { n_max: 2 })));
        assert!(matches!(depth(&m(&[&[1]]), 1), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn depth_two_theorem_examples() {
        let c = verify_depth_two_theorem(&desc(&[&[1, 1], &[1, 1]], &[1, 1])).unwrap();
        assert!(c.holds);
        assert_eq!(c.q, 4);
        for n in 1..6u64 {
            let c = verify_depth_two_theorem(&desc(&[&vec![1; n as usize]], &vec![1; n as usize])).unwrap();
            assert!(c.holds);
            assert_eq!(c.q, n);
        }
        assert!(verify_depth_two_theorem(&desc(&[&[3, 3, 0, 3], &[0, 0, 2, 2]], &[1; 4])).is_err());
    }

    #[test]
    fn corners() {
        let d = desc(&[&[3, 3, 0, 3], &[0, 0, 2, 2]], &[1; 4]);
        let c = restrict_to_corner(&d, 1).unwrap();
        assert_eq!(c.matrix().to_rows(), vec![vec![2, 2]]);
        assert_eq!(&**c.b_dims(), &[1, 1]);
        assert_eq!(&**c.a_dims(), &[4]);
        assert!(matches!(restrict_to_corner(&d, 2), Err(Error::IndexOutOfRange { index: 2, len: 2 })));
        let single = desc(&[&[2, 2, 2]], &[3, 3, 3]);
        assert_eq!(restrict_to_corner(&single, 0).unwrap(), single);
    }

    #[test]
    fn centers() {
        let c = center_descriptor(&desc(&[&[2, 1]], &[1, 2]));
        assert_eq!(c.matrix().to_rows(), vec![vec![2, 2]]);
        assert_eq!(&**c.b_dims(), &[1, 1]);
        assert_eq!(&**c.a_dims(), &[4]);
        let d = desc(&[&[1, 0, 2], &[0, 3, 1]], &[1, 1, 1]);
        assert_eq!(center_descriptor(&d), d);
        let c = center_descriptor(&desc(&[&[3, 3, 3]], &[2, 2, 2]));
        assert_eq!(c.matrix().to_rows(), vec![vec![6, 6, 6]]);
    }

    #[test]
    fn generator_is_deterministic_and_regular() {
        let lim = GeneratorLimits::default();
        let a = generate_regular_descriptor(0, &lim);
        assert_eq!(a, generate_regular_descriptor(0, &lim));
        assert!(classify_regular(&a).is_regular());
        for v in [Violation::UnequalRowEntry, Violation::BrokenPartition, Violation::UnequalDimension] {
            let b = generate_broken_descriptor(1, &lim, v);
            let verdict = classify_regular(&b);
            let w = verdict.witness().expect("planted violation is detected");
            assert!(w.holds_for(&b));
        }
    }

    #[test]
    fn spectral_generator_satisfies_condition() {
        let lim = GeneratorLimits::default();
        for seed in 0..50 {
            let d = generate_spectral_descriptor(seed, &lim);
            assert!(classify_regular(&d).is_regular());
            assert!(spectral_condition(&d).satisfied, "seed {seed}: {:?}", d);
        }
    }

    #[test]
    fn reassembly_matches_input() {
        let lim = GeneratorLimits::default();
        for seed in 0..30 {
            let d = generate_regular_descriptor(seed, &lim);
            let t = decompose(&d).unwrap();
            let back = t.reassemble();
            assert!(pseudo_equivalent(d.matrix(), back.matrix()).unwrap());
            let sorted = |v: &[u64]| {
                let mut v = v.to_vec();
                v.sort_unstable();
                v
            };
            assert_eq!(sorted(d.b_dims()), sorted(back.b_dims()));
            assert_eq!(sorted(d.a_dims()), sorted(back.a_dims()));
        }
    }
}
