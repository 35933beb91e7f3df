//! Numerical certification of unitary families and normalizing unitaries.
//!
//! Nothing here trusts the builder: orthonormality is recomputed through the
//! conditional expectation, the basis property through the reconstruction
//! identity on random elements, and membership in the normalizer by projecting
//! `u ι(e) u*` back onto `ι(B)` for every matrix unit `e`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{AlgebraElement, CMatrix, EmbeddedInclusion};
use crate::basis::{UnitaryFamily, UNITARY_TOLERANCE};
use crate::error::{Error, Result};

/// Tolerance used by the CLI and by [`verify_family`] unless overridden.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Seed of the random elements in [`check_reconstruction`].
pub const DEFAULT_SEED: u64 = 0x5EED;
pub const DEFAULT_TRIALS: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
    /// Indices of the worst offender (pair, member or trial), if any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub at: Option<Vec<usize>>,
}

impl Check {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64, at: Option<Vec<usize>>) -> Self {
        Self { name: name.into(), passed: residual <= tolerance, residual, tolerance, at }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub overall: bool,
}

impl VerificationReport {
    pub fn new(checks: Vec<Check>) -> Self {
        let overall = checks.iter().all(|c| c.passed);
        Self { checks, overall }
    }

    pub fn merge(mut self, other: VerificationReport) -> Self {
        self.checks.extend(other.checks);
        self.overall = self.checks.iter().all(|c| c.passed);
        self
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn op_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

/// Operator norm of an element of a multi-matrix algebra.
pub fn element_norm(x: &AlgebraElement) -> f64 {
    x.blocks().iter().map(op_norm).fold(0.0, f64::max)
}

fn check_members(f: &UnitaryFamily) -> Result<()> {
    for m in f.members() {
        m.check_shape(f.inclusion().a_shape())?;
    }
    Ok(())
}

/// Largest unitarity defect `max ‖W*W − 1‖` over the members.
pub fn check_unitarity(f: &UnitaryFamily, tol: f64) -> Result<VerificationReport> {
    check_members(f)?;
    let (at, residual) = f
        .members()
        .iter()
        .map(AlgebraElement::unitarity_residual)
        .enumerate()
        .fold((None, 0.0), |(at, best), (j, r)| if r > best { (Some(vec![j]), r) } else { (at, best) });
    Ok(VerificationReport::new(vec![Check::new("unitarity", residual, tol, at)]))
}

/// `max_{j,k} ‖E(W_j* W_k) − δ_jk 1_B‖` in operator norm.
pub fn check_orthonormal(f: &UnitaryFamily, tol: f64) -> Result<VerificationReport> {
    check_members(f)?;
    let inc = f.inclusion();
    let one = AlgebraElement::identity(inc.b_shape());
    let zero = AlgebraElement::zeros(inc.b_shape());
    let adj: Vec<AlgebraElement> = f.members().iter().map(AlgebraElement::adjoint).collect();
    let mut worst = (0.0, None);
    for (j, wj) in adj.iter().enumerate() {
        for (k, wk) in f.members().iter().enumerate().skip(j) {
            let e = inc.cond_expectation(&(wj * wk))?;
            let target = if j == k { &one } else { &zero };
            let r = element_norm(&(&e - target));
            if r > worst.0 || worst.1.is_none() {
                worst = (r, Some(vec![j, k]));
            }
        }
    }
    Ok(VerificationReport::new(vec![Check::new("orthonormality", worst.0, tol, worst.1)]))
}

/// `Σ_j W_j ι(E(W_j* x))`.
pub fn reconstruct(f: &UnitaryFamily, x: &AlgebraElement) -> Result<AlgebraElement> {
    let inc = f.inclusion();
    let mut acc = AlgebraElement::zeros(inc.a_shape());
    for w in f.members() {
        let coeff = inc.embed(&inc.cond_expectation(&(&w.adjoint() * x))?)?;
        acc = &acc + &(w * &coeff);
    }
    Ok(acc)
}

/// Relative residual `max |x − Σ W_j E(W_j* x)| / max |x|` over `trials`
/// seeded random elements.
pub fn check_reconstruction(f: &UnitaryFamily, trials: usize, tol: f64) -> Result<VerificationReport> {
    check_members(f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut worst = (0.0, None);
    for trial in 0..trials {
        let x = AlgebraElement::random(f.inclusion().a_shape(), &mut rng);
        let r = (&x - &reconstruct(f, &x)?).max_abs() / x.max_abs();
        if r > worst.0 || worst.1.is_none() {
            worst = (r, Some(vec![trial]));
        }
    }
    Ok(VerificationReport::new(vec![Check::new("reconstruction", worst.0, tol, worst.1)]))
}

/// Largest relative φ-distance from `u ι(e) u*` to `ι(B)` over the matrix
/// units `e` of `B`. Errors when `u` is not unitary to `tol`.
pub fn normalizer_residual(inc: &EmbeddedInclusion, u: &AlgebraElement, tol: f64) -> Result<f64> {
    u.check_shape(inc.a_shape())?;
    let unitarity = u.unitarity_residual();
    if unitarity > tol.max(UNITARY_TOLERANCE) {
        return Err(Error::NotUnitary { member: 0, residual: unitarity });
    }
    let state = inc.state();
    let u_adj = u.adjoint();
    let mut worst: f64 = 0.0;
    for (_, _, _, e) in inc.b_matrix_units() {
        let y = &(u * &e) * &u_adj;
        let (_, residual) = inc.project_onto_image(&y)?;
        worst = worst.max(residual / state.norm(&e));
    }
    Ok(worst)
}

/// Whether `u ι(B) u* ⊆ ι(B)` to `tol`; equality follows by dimension.
pub fn check_normalizer_membership(inc: &EmbeddedInclusion, u: &AlgebraElement, tol: f64) -> Result<bool> {
    Ok(normalizer_residual(inc, u, tol)? <= tol)
}

/// Normalizer membership of every member of a family, as one check.
pub fn check_family_membership(f: &UnitaryFamily, tol: f64) -> Result<VerificationReport> {
    check_members(f)?;
    let mut worst = (0.0, None);
    for (j, w) in f.members().iter().enumerate() {
        let r = match normalizer_residual(f.inclusion(), w, tol) {
            Ok(r) => r,
            // only raised above tolerance, so the check still fails
            Err(Error::NotUnitary { residual, .. }) => residual,
            Err(e) => return Err(e),
        };
        if r > worst.0 || worst.1.is_none() {
            worst = (r, Some(vec![j]));
        }
    }
    Ok(VerificationReport::new(vec![Check::new("normalizer_membership", worst.0, tol, worst.1)]))
}

/// σ_i and the nonzero blocks of a normalizing unitary in one summand.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummandPermutation {
    /// The row support `Y_i`, ascending.
    pub support: Vec<usize>,
    /// `sigma[x] = σ_i(support[x])`.
    pub sigma: Vec<usize>,
    /// `blocks[x] = U_i^{(σ_i(k), k)}` for `k = support[x]`.
    #[serde(skip)]
    pub blocks: Vec<CMatrix>,
}

impl SummandPermutation {
    pub fn sigma_of(&self, k: usize) -> Option<usize> {
        self.support.iter().position(|&c| c == k).map(|x| self.sigma[x])
    }

    pub fn block(&self, k: usize) -> Option<&CMatrix> {
        self.support.iter().position(|&c| c == k).map(|x| &self.blocks[x])
    }
}

/// Block-permutation structure of a unitary normalizing a commutative `B`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockPermutationWitness {
    pub summands: Vec<SummandPermutation>,
}

fn require_block_structure(inc: &EmbeddedInclusion) -> Result<()> {
    let d = inc.descriptor();
    if d.b_dims().iter().any(|&m| m != 1) {
        return Err(Error::UnsupportedInclusion("B is not commutative".into()));
    }
    let a = d.matrix();
    for i in 0..a.rows() {
        let mut nz = a.row(i).iter().filter(|&&x| x != 0);
        let first = nz.next().copied();
        if nz.any(|&x| Some(x) != first) {
            return Err(Error::UnsupportedInclusion(format!("row {i} has unequal nonzero entries")));
        }
    }
    Ok(())
}

fn support_of(inc: &EmbeddedInclusion, i: usize) -> Vec<usize> {
    let a = inc.descriptor().matrix();
    (0..a.cols()).filter(|&j| a.get(i, j) != 0).collect()
}

impl BlockPermutationWitness {
    /// The unitary with block `blocks[x]` at `(σ_i(k), k)` and zeros elsewhere.
    pub fn assemble(&self, inc: &EmbeddedInclusion) -> Result<AlgebraElement> {
        require_block_structure(inc)?;
        if self.summands.len() != inc.a_shape().len() {
            return Err(Error::CountMismatch { left: self.summands.len(), right: inc.a_shape().len() });
        }
        let mut blocks = Vec::with_capacity(self.summands.len());
        for (i, sp) in self.summands.iter().enumerate() {
            let n = inc.a_shape().dims()[i];
            let y = support_of(inc, i);
            let mut sorted = sp.sigma.clone();
            sorted.sort_unstable();
            if sp.support != y || sorted != y || sp.blocks.len() != y.len() {
                return Err(Error::InvalidConfig(format!("summand {i}: σ is not a bijection of the row support")));
            }
            let mut m = CMatrix::zeros(n, n);
            for ((&k, &l), b) in sp.support.iter().zip(&sp.sigma).zip(&sp.blocks) {
                let (rows, cols) = (inc.layout(i, l), inc.layout(i, k));
                if b.shape() != (rows.len(), cols.len()) {
                    return Err(Error::ShapeMismatch { expected: vec![rows.len()], got: vec![b.nrows()] });
                }
                m.view_mut((rows.start, cols.start), b.shape()).copy_from(b);
            }
            blocks.push(m);
        }
        Ok(AlgebraElement::from_blocks(blocks))
    }
}

/// Reads off `σ_i` and the blocks `U_i^{(l,k)}` of `u` for commutative `B`
/// with constant nonzero rows. A block counts as nonzero when its largest
/// entry exceeds `tol` times the largest entry of the summand.
///
/// Membership of `u` in the normalizer is not checked here; a unitary with a
/// clean block-permutation pattern is extracted either way.
pub fn extract_block_structure(
    inc: &EmbeddedInclusion,
    u: &AlgebraElement,
    tol: f64,
) -> Result<BlockPermutationWitness> {
    require_block_structure(inc)?;
    u.check_shape(inc.a_shape())?;
    let mut summands = Vec::with_capacity(inc.a_shape().len());
    for (i, ui) in u.blocks().iter().enumerate() {
        let y = support_of(inc, i);
        let scale = ui.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let threshold = tol * scale;
        let mut sigma = Vec::with_capacity(y.len());
        let mut blocks = Vec::with_capacity(y.len());
        let mut used = vec![false; inc.descriptor().matrix().cols()];
        for &k in &y {
            let cols = inc.layout(i, k);
            let hits: Vec<usize> = y
                .iter()
                .copied()
                .filter(|&l| {
                    let rows = inc.layout(i, l);
                    ui.view((rows.start, cols.start), (rows.len(), cols.len()))
                        .iter()
                        .any(|z| z.norm() > threshold)
                })
                .collect();
            let [l] = hits[..] else {
                return Err(Error::AmbiguousBlockPattern { summand: i, column: k });
            };
            if std::mem::replace(&mut used[l], true) {
                return Err(Error::AmbiguousBlockPattern { summand: i, column: k });
            }
            let rows = inc.layout(i, l);
            let b = ui.view((rows.start, cols.start), (rows.len(), cols.len())).into_owned();
            let r = AlgebraElement::from_blocks(vec![b.clone()]).unitarity_residual();
            if r > tol.max(UNITARY_TOLERANCE) {
                return Err(Error::NotUnitary { member: i, residual: r });
            }
            sigma.push(l);
            blocks.push(b);
        }
        summands.push(SummandPermutation { support: y, sigma, blocks });
    }
    Ok(BlockPermutationWitness { summands })
}

/// Outcome of [`certify_regularity_by_span`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpanCertificate {
    pub certified: bool,
    pub reconstruction_residual: f64,
    pub rank: usize,
    pub dim_a: usize,
}

/// Numerical rank of a set of vectors (columns), relative threshold `tol`.
fn numerical_rank(vectors: &[Vec<crate::algebra::C64>], tol: f64) -> usize {
    let Some(len) = vectors.first().map(Vec::len) else { return 0 };
    let m = CMatrix::from_fn(len, vectors.len(), |r, c| vectors[c][r]);
    let sv = m.singular_values();
    let top = sv.max();
    let cutoff = tol.max(f64::EPSILON * len.max(vectors.len()) as f64) * top;
    sv.iter().filter(|&&s| s > cutoff).count()
}

/// Certifies `A = span_B {W_j}` through the reconstruction identity, with the
/// rank of `{ι(e) W_j}` reported as corroboration. Every member must lie in
/// the normalizer.
pub fn certify_regularity_by_span(
    inc: &EmbeddedInclusion,
    family: &UnitaryFamily,
    tol: f64,
) -> Result<SpanCertificate> {
    if inc.descriptor() != family.descriptor() {
        return Err(Error::ShapeMismatch {
            expected: inc.a_shape().dims().to_vec(),
            got: family.inclusion().a_shape().dims().to_vec(),
        });
    }
    check_members(family)?;
    for (member, w) in family.members().iter().enumerate() {
        let residual = normalizer_residual(inc, w, tol)?;
        if residual > tol {
            return Err(Error::NotInNormalizer { member, residual });
        }
    }
    let recon = check_reconstruction(family, DEFAULT_TRIALS, tol)?;
    let units = inc.b_matrix_units();
    let vectors: Vec<_> = family
        .members()
        .iter()
        .flat_map(|w| units.iter().map(move |(_, _, _, e)| (e * w).to_vector()))
        .collect();
    let rank = numerical_rank(&vectors, tol);
    let dim_a = inc.a_shape().dim();
    Ok(SpanCertificate {
        certified: recon.overall && rank == dim_a,
        reconstruction_residual: recon.checks[0].residual,
        rank,
        dim_a,
    })
}

/// Unitarity, orthonormality, reconstruction and per-member normalizer
/// membership of a family. Unitarity is held to the fixed member tolerance.
pub fn verify_family(f: &UnitaryFamily, tol: f64) -> Result<VerificationReport> {
    Ok(check_unitarity(f, UNITARY_TOLERANCE)?
        .merge(check_orthonormal(f, tol)?)
        .merge(check_reconstruction(f, DEFAULT_TRIALS, tol)?)
        .merge(check_family_membership(f, tol)?))
}
