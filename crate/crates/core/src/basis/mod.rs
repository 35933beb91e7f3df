//! Unitary orthonormal bases contained in the normalizer.
//!
//! The three building blocks have explicit bases: the identity for
//! `M_k ⊂ M_k`, powers of the cyclic shift for `ℂ^n ⊂ M_n`, and shift-clock
//! products for `ℂ ⊂ M_n`. The scalar inclusion into several summands is
//! handled by [`solver`]. Tensor products and equal-size direct sums of
//! bases are bases again, which yields [`build_regular_onb`] for every
//! regular inclusion that satisfies the spectral condition.
//!
//! Every family lives on the standard embedding of its descriptor (see
//! [`EmbeddedInclusion`]); combinators conjugate by the permutation that
//! carries the tensor-product layout onto the standard one.

pub mod solver;

use std::f64::consts::TAU;
use std::sync::Arc;

use crate::algebra::{AlgebraElement, CMatrix, EmbeddedInclusion, Slot, C64};
use crate::classify::{decompose, spectral_condition, BlockFactorization};
use crate::error::{Error, Result};
use crate::inclusion::InclusionDescriptor;

pub use solver::{solve_scalar_basis, ScalarSolution, SolverConfig};

/// Largest unitarity defect accepted for a family member.
pub const UNITARY_TOLERANCE: f64 = 1e-10;
/// Largest φ-Gram defect for a family to count as certified.
pub const GRAM_TOLERANCE: f64 = 1e-8;

/// An ordered family of unitaries on a fixed inclusion, with its φ-Gram
/// residual `max_{j,k} |φ(W_j* W_k) − δ_jk|` recorded at construction.
#[derive(Debug, Clone)]
pub struct UnitaryFamily {
    inclusion: Arc<EmbeddedInclusion>,
    members: Vec<AlgebraElement>,
    gram_residual: f64,
    unitarity_residual: f64,
}

impl UnitaryFamily {
    /// Wraps arbitrary members without certifying them; shapes must match.
    pub fn new_unchecked(inclusion: Arc<EmbeddedInclusion>, members: Vec<AlgebraElement>) -> Result<Self> {
        for m in &members {
            m.check_shape(inclusion.a_shape())?;
        }
        let state = inclusion.state();
        let mut gram_residual: f64 = 0.0;
        for (j, wj) in members.iter().enumerate() {
            for (k, wk) in members.iter().enumerate().skip(j) {
                let target = if j == k { 1.0 } else { 0.0 };
                gram_residual = gram_residual.max((state.inner(wj, wk) - C64::new(target, 0.0)).norm());
            }
        }
        let unitarity_residual =
            members.iter().map(AlgebraElement::unitarity_residual).fold(0.0, f64::max);
        Ok(Self { inclusion, members, gram_residual, unitarity_residual })
    }

    /// Like [`UnitaryFamily::new_unchecked`] but requires unitary members and
    /// a φ-Gram residual within `tolerance`.
    pub fn certified(
        inclusion: Arc<EmbeddedInclusion>,
        members: Vec<AlgebraElement>,
        tolerance: f64,
    ) -> Result<Self> {
        let f = Self::new_unchecked(inclusion, members)?;
        f.ensure_certified(tolerance)?;
        Ok(f)
    }

    fn ensure_certified(&self, tolerance: f64) -> Result<()> {
        if let Some((member, residual)) = self
            .members
            .iter()
            .map(AlgebraElement::unitarity_residual)
            .enumerate()
            .find(|&(_, r)| r > UNITARY_TOLERANCE)
        {
            return Err(Error::NotUnitary { member, residual });
        }
        if self.gram_residual > tolerance {
            return Err(Error::UnverifiedFamily { residual: self.gram_residual });
        }
        Ok(())
    }

    pub fn inclusion(&self) -> &Arc<EmbeddedInclusion> {
        &self.inclusion
    }

    pub fn descriptor(&self) -> &InclusionDescriptor {
        self.inclusion.descriptor()
    }

    pub fn members(&self) -> &[AlgebraElement] {
        &self.members
    }

    pub fn into_members(self) -> Vec<AlgebraElement> {
        self.members
    }

    pub fn d(&self) -> usize {
        self.members.len()
    }

    pub fn gram_residual(&self) -> f64 {
        self.gram_residual
    }

    pub fn unitarity_residual(&self) -> f64 {
        self.unitarity_residual
    }

    /// The same family with member `index` removed (no re-certification).
    pub fn without_member(&self, index: usize) -> Self {
        let mut members = self.members.clone();
        members.remove(index);
        Self::new_unchecked(self.inclusion.clone(), members).expect("shapes unchanged")
    }
}

fn family_on(rows: Vec<Vec<u64>>, b_dims: Vec<u64>, members: Vec<AlgebraElement>) -> UnitaryFamily {
    let d = InclusionDescriptor::from_rows(rows, b_dims).expect("building-block descriptor");
    UnitaryFamily::certified(Arc::new(EmbeddedInclusion::new(d)), members, GRAM_TOLERANCE)
        .expect("closed-form building-block basis")
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// Cyclic shift `S e_t = e_{t+1 mod n}`.
pub fn shift(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |r, c| if r == (c + 1) % n { one() } else { C64::new(0.0, 0.0) })
}

/// Clock `C = diag(ω^t)` with `ω = e^{2πi/n}`.
pub fn clock(n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |r, c| {
        if r == c {
            C64::from_polar(1.0, TAU * r as f64 / n as f64)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// `{1_k}` for the trivial inclusion `M_k ⊂ M_k`.
pub fn basis_trivial(k: usize) -> Result<UnitaryFamily> {
    if k == 0 {
        return Err(Error::NonPositiveDim { index: 0 });
    }
    Ok(family_on(
        vec![vec![1]],
        vec![k as u64],
        vec![AlgebraElement::from_blocks(vec![CMatrix::identity(k, k)])],
    ))
}

/// Shift powers `{S^a : a ∈ ℤ_n}` for the diagonal inclusion `ℂ^n ⊂ M_n`.
pub fn basis_diagonal(n: usize) -> Result<UnitaryFamily> {
    if n == 0 {
        return Err(Error::NonPositiveDim { index: 0 });
    }
    let s = shift(n);
    let mut power = CMatrix::identity(n, n);
    let mut members = Vec::with_capacity(n);
    for _ in 0..n {
        members.push(AlgebraElement::from_blocks(vec![power.clone()]));
        power = &s * power;
    }
    Ok(family_on(vec![vec![1; n]], vec![1; n], members))
}

/// Shift-clock products `S^a C^b`, `(a, b)` lexicographic, for `ℂ ⊂ M_n`.
pub fn basis_scalar_single(n: usize) -> Result<UnitaryFamily> {
    if n == 0 {
        return Err(Error::NonPositiveDim { index: 0 });
    }
    Ok(family_on(vec![vec![n as u64]], vec![1], weyl_members(n)))
}

fn weyl_members(n: usize) -> Vec<AlgebraElement> {
    let (s, c) = (shift(n), clock(n));
    let mut members = Vec::with_capacity(n * n);
    let mut sa = CMatrix::identity(n, n);
    for _ in 0..n {
        let mut cb = CMatrix::identity(n, n);
        for _ in 0..n {
            members.push(AlgebraElement::from_blocks(vec![&sa * &cb]));
            cb = &c * cb;
        }
        sa = &s * sa;
    }
    members
}

/// Unitary orthonormal basis of `ℂ ⊂ ⊕_i M_{dims[i]}` with `Σ dims[i]²`
/// members, the first being the identity.
///
/// A single summand uses the shift-clock basis. Equal sizes `l` use the
/// shift-clock basis of `M_l` twisted by the characters of `ℤ_s`; mixed sizes
/// go to the numerical solver.
pub fn basis_scalar_multi(dims: &[usize], cfg: &SolverConfig) -> Result<UnitaryFamily> {
    if dims.is_empty() {
        return Err(Error::InvalidConfig("at least one summand is required".into()));
    }
    if let Some(index) = dims.iter().position(|&l| l == 0) {
        return Err(Error::NonPositiveDim { index });
    }
    if dims.len() == 1 {
        return basis_scalar_single(dims[0]);
    }
    let rows = dims.iter().map(|&l| vec![l as u64]).collect();
    let members = if dims.iter().all(|&l| l == dims[0]) {
        homogeneous_scalar_members(dims[0], dims.len())
    } else {
        cfg.validate()?;
        solve_scalar_basis(dims, cfg)?
            .members
            .into_iter()
            .map(AlgebraElement::from_blocks)
            .collect()
    };
    let d = InclusionDescriptor::from_rows(rows, vec![1])?;
    UnitaryFamily::certified(Arc::new(EmbeddedInclusion::new(d)), members, cfg.tolerance.max(GRAM_TOLERANCE))
}

/// `⊕_i χ(i) S^a C^b` over characters `χ` of `ℤ_s` and `(a, b)` in `ℤ_l²`.
fn homogeneous_scalar_members(l: usize, s: usize) -> Vec<AlgebraElement> {
    let weyl = weyl_members(l);
    let mut members = Vec::with_capacity(s * l * l);
    for chi in 0..s {
        for w in &weyl {
            let blocks = (0..s)
                .map(|i| w.block(0) * C64::from_polar(1.0, TAU * (chi * i) as f64 / s as f64))
                .collect();
            members.push(AlgebraElement::from_blocks(blocks));
        }
    }
    members
}

/// Conjugates each member by per-summand index permutations:
/// `out_i[x, y] = src_{source[i]}[map_i(x), map_i(y)]`.
fn transport(
    members: impl Iterator<Item = AlgebraElement>,
    source: &[usize],
    maps: &[Vec<usize>],
) -> Vec<AlgebraElement> {
    members
        .map(|m| {
            let blocks = source
                .iter()
                .zip(maps)
                .map(|(&src, map)| {
                    let b = m.block(src);
                    CMatrix::from_fn(map.len(), map.len(), |x, y| b[(map[x], map[y])])
                })
                .collect();
            AlgebraElement::from_blocks(blocks)
        })
        .collect()
}

/// `{U_j(1) ⊗ U_k(2)}` for the tensor-product inclusion, `(j, k)` lexicographic.
pub fn combine_tensor(f1: &UnitaryFamily, f2: &UnitaryFamily) -> Result<UnitaryFamily> {
    f1.ensure_certified(GRAM_TOLERANCE)?;
    f2.ensure_certified(GRAM_TOLERANCE)?;
    let (inc1, inc2) = (f1.inclusion(), f2.inclusion());
    let inc = Arc::new(EmbeddedInclusion::new(f1.descriptor().tensor(f2.descriptor())));
    let (a1, a2) = (inc1.descriptor().matrix(), inc2.descriptor().matrix());
    let m2 = inc2.b_shape().dims();
    let (s1, s2) = (a1.rows(), a2.rows());
    let r2 = a2.cols();

    // maps[i][standard index] = Kronecker index of ι1(X) ⊗ ι2(Y) in summand i
    let mut maps = Vec::with_capacity(s1 * s2);
    for i1 in 0..s1 {
        for i2 in 0..s2 {
            let i = i1 * s2 + i2;
            let (n1, n2) = (inc1.a_shape().dims()[i1], inc2.a_shape().dims()[i2]);
            let mut map = vec![0; n1 * n2];
            for x1 in 0..n1 {
                let sl1 = inc1.slot(i1, x1);
                for x2 in 0..n2 {
                    let sl2 = inc2.slot(i2, x2);
                    let a_22 = a2.get(i2, sl2.j) as usize;
                    let slot = Slot {
                        j: sl1.j * r2 + sl2.j,
                        p: sl1.p * m2[sl2.j] + sl2.p,
                        t: sl1.t * a_22 + sl2.t,
                    };
                    map[inc.index(i, slot)] = x1 * n2 + x2;
                }
            }
            maps.push(map);
        }
    }
    let source: Vec<usize> = (0..s1 * s2).collect();
    let products = f1
        .members()
        .iter()
        .flat_map(|u| f2.members().iter().map(move |v| u.kron(v)));
    let members = transport(products, &source, &maps);
    UnitaryFamily::certified(inc, members, GRAM_TOLERANCE)
}

/// `{U_j(1) ⊕ U_j(2)}` for the direct-sum inclusion; requires `d₁ = d₂`.
pub fn combine_direct_sum(f1: &UnitaryFamily, f2: &UnitaryFamily) -> Result<UnitaryFamily> {
    if f1.d() != f2.d() {
        return Err(Error::CountMismatch { left: f1.d(), right: f2.d() });
    }
    f1.ensure_certified(GRAM_TOLERANCE)?;
    f2.ensure_certified(GRAM_TOLERANCE)?;
    let inc = Arc::new(EmbeddedInclusion::new(f1.descriptor().direct_sum(f2.descriptor())));
    let members = f1.members().iter().zip(f2.members()).map(|(u, v)| u.direct_sum(v)).collect();
    UnitaryFamily::certified(inc, members, GRAM_TOLERANCE)
}

/// `trivial(m_k) ⊗ scalar(entries) ⊗ diagonal(r_k)` for one canonical block.
pub fn build_block_basis(block: &BlockFactorization, cfg: &SolverConfig) -> Result<UnitaryFamily> {
    let entries: Vec<usize> = block.column_entries.iter().map(|&a| a as usize).collect();
    let trivial = basis_trivial(block.m_k as usize)?;
    let scalar = basis_scalar_multi(&entries, cfg)?;
    let diagonal = basis_diagonal(block.r_k)?;
    combine_tensor(&combine_tensor(&trivial, &scalar)?, &diagonal)
}

/// Unitary orthonormal basis in the normalizer of a regular inclusion that
/// satisfies the spectral condition, on the original summand ordering.
pub fn build_regular_onb(desc: &InclusionDescriptor, cfg: &SolverConfig) -> Result<UnitaryFamily> {
    let tree = decompose(desc)?;
    let spectral = spectral_condition(desc);
    if !spectral.satisfied {
        return Err(Error::SpectralConditionFails(Box::new(spectral)));
    }
    let mut blocks = tree.blocks.iter();
    let first = build_block_basis(blocks.next().expect("at least one block"), cfg)?;
    let canonical = blocks.try_fold(first, |acc, b| combine_direct_sum(&acc, &build_block_basis(b, cfg)?))?;

    let cf = &tree.canonical;
    debug_assert_eq!(canonical.descriptor(), &desc.relabel(&cf.row_perm, &cf.col_perm));
    let target = Arc::new(EmbeddedInclusion::new(desc.clone()));
    let src_inc = canonical.inclusion().clone();
    let s = desc.matrix().rows();
    let mut source = vec![0; s];
    let mut inv_col = vec![0; cf.col_perm.len()];
    for (jc, &j) in cf.col_perm.iter().enumerate() {
        inv_col[j] = jc;
    }
    for (ic, &i) in cf.row_perm.iter().enumerate() {
        source[i] = ic;
    }
    // canonical slot (j', p, t) of summand i' is slot (τ(j'), p, t) of summand σ(i')
    let maps: Vec<Vec<usize>> = (0..s)
        .map(|i| {
            let ic = source[i];
            (0..target.a_shape().dims()[i])
                .map(|x| {
                    let sl = target.slot(i, x);
                    src_inc.index(ic, Slot { j: inv_col[sl.j], ..sl })
                })
                .collect()
        })
        .collect();
    let members = transport(canonical.into_members().into_iter(), &source, &maps);
    UnitaryFamily::certified(target, members, GRAM_TOLERANCE)
}
