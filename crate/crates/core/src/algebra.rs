//! Dense realization of multi-matrix algebras and of the standard embedding
//! `⊕_j X_j ↦ ⊕_i bl-diag(X_0 ⊗ 1_{a_i0}, X_1 ⊗ 1_{a_i1}, …)`.
//!
//! The trace state weights summand `i` of `A` by `n_i / Σ_k n_k²`. The
//! conditional expectation is the orthogonal projection onto `ι(B)` for the
//! inner product `⟨u, v⟩ = φ(u* v)`, computed from the Gram matrix of the
//! embedded matrix units of `B`.

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::inclusion::InclusionDescriptor;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

/// Summand sizes of a multi-matrix algebra `⊕_i M_{n_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraShape {
    summand_dims: Vec<usize>,
}

impl AlgebraShape {
    pub fn new(summand_dims: Vec<usize>) -> Result<Self> {
        if summand_dims.is_empty() {
            return Err(Error::ShapeMismatch { expected: vec![], got: vec![] });
        }
        if let Some(index) = summand_dims.iter().position(|&n| n == 0) {
            return Err(Error::NonPositiveDim { index });
        }
        Ok(Self { summand_dims })
    }

    pub fn from_dims(dims: &[u64]) -> Result<Self> {
        Self::new(dims.iter().map(|&d| d as usize).collect())
    }

    pub fn dims(&self) -> &[usize] {
        &self.summand_dims
    }

    pub fn len(&self) -> usize {
        self.summand_dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summand_dims.is_empty()
    }

    /// Complex vector-space dimension `Σ n_i²`.
    pub fn dim(&self) -> usize {
        self.summand_dims.iter().map(|n| n * n).sum()
    }
}

/// An element `⊕_i X_i` stored as one dense square block per summand.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    blocks: Vec<CMatrix>,
}

impl AlgebraElement {
    pub fn from_blocks(blocks: Vec<CMatrix>) -> Self {
        assert!(!blocks.is_empty());
        assert!(blocks.iter().all(|b| b.is_square() && b.nrows() > 0), "blocks must be square");
        Self { blocks }
    }

    pub fn zeros(shape: &AlgebraShape) -> Self {
        Self { blocks: shape.dims().iter().map(|&n| CMatrix::zeros(n, n)).collect() }
    }

    pub fn identity(shape: &AlgebraShape) -> Self {
        Self { blocks: shape.dims().iter().map(|&n| CMatrix::identity(n, n)).collect() }
    }

    /// Complex Gaussian entries.
    pub fn random<R: Rng + ?Sized>(shape: &AlgebraShape, rng: &mut R) -> Self {
        Self {
            blocks: shape.dims().iter().map(|&n| random_gaussian(n, n, rng)).collect(),
        }
    }

    /// Haar-distributed unitary in every summand.
    pub fn random_unitary<R: Rng + ?Sized>(shape: &AlgebraShape, rng: &mut R) -> Self {
        Self { blocks: shape.dims().iter().map(|&n| random_unitary(n, rng)).collect() }
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &CMatrix {
        &self.blocks[i]
    }

    pub fn into_blocks(self) -> Vec<CMatrix> {
        self.blocks
    }

    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.nrows()).collect()
    }

    pub fn shape(&self) -> AlgebraShape {
        AlgebraShape { summand_dims: self.dims() }
    }

    pub fn check_shape(&self, shape: &AlgebraShape) -> Result<()> {
        if self.dims() != shape.dims() {
            return Err(Error::ShapeMismatch { expected: shape.dims().to_vec(), got: self.dims() });
        }
        Ok(())
    }

    pub fn adjoint(&self) -> Self {
        Self { blocks: self.blocks.iter().map(|b| b.adjoint()).collect() }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { blocks: self.blocks.iter().map(|b| b * c).collect() }
    }

    /// Largest entry modulus over all blocks.
    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().flat_map(|b| b.iter()).map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max(‖U*U − 1‖, ‖UU* − 1‖)` in the entrywise max norm.
    pub fn unitarity_residual(&self) -> f64 {
        self.blocks
            .iter()
            .map(|u| {
                let id = CMatrix::identity(u.nrows(), u.ncols());
                let a = (u.adjoint() * u - &id).iter().map(|z| z.norm()).fold(0.0, f64::max);
                let b = (u * u.adjoint() - &id).iter().map(|z| z.norm()).fold(0.0, f64::max);
                a.max(b)
            })
            .fold(0.0, f64::max)
    }

    /// Tensor product; summand `(i1, i2)` sits at index `i1 * s2 + i2`.
    pub fn kron(&self, other: &Self) -> Self {
        Self {
            blocks: self
                .blocks
                .iter()
                .flat_map(|x| other.blocks.iter().map(move |y| x.kronecker(y)))
                .collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self { blocks: self.blocks.iter().chain(&other.blocks).cloned().collect() }
    }

    /// All entries, summand by summand, each block row-major.
    pub fn to_vector(&self) -> Vec<C64> {
        self.blocks
            .iter()
            .flat_map(|b| (0..b.nrows()).flat_map(move |r| (0..b.ncols()).map(move |c| b[(r, c)])))
            .collect()
    }
}

impl<'a> Add<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.dims(), rhs.dims(), "shape mismatch");
        AlgebraElement { blocks: self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.dims(), rhs.dims(), "shape mismatch");
        AlgebraElement { blocks: self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a - b).collect() }
    }
}

impl<'a> Mul<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.dims(), rhs.dims(), "shape mismatch");
        AlgebraElement { blocks: self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a * b).collect() }
    }
}

pub fn random_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)) / 2f64.sqrt()
    })
}

/// Haar unitary via QR with the phases of `R`'s diagonal folded into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let qr = random_gaussian(n, n, rng).qr();
    let (mut q, r) = qr.unpack();
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        let col = q.column(k) * phase;
        q.set_column(k, &col);
    }
    q
}

/// Unitary polar factor `UVᵀ` of `M = UΣVᵀ`.
pub fn polar_unitary(m: &CMatrix) -> CMatrix {
    let svd = m.clone().svd(true, true);
    svd.u.expect("requested U") * svd.v_t.expect("requested Vᵀ")
}

/// `φ(⊕X_i) = Σ_i c_i trace(X_i)` with `c_i = n_i / Σ_k n_k²`.
///
/// Sums are taken as `Σ_i n_i trace(X_i)` and divided once, so `φ(1) = 1`
/// holds exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceState {
    dims: Vec<usize>,
    weights: Vec<f64>,
    total: f64,
}

impl TraceState {
    pub fn for_shape(shape: &AlgebraShape) -> Self {
        let total: f64 = shape.dims().iter().map(|&n| (n * n) as f64).sum();
        Self {
            dims: shape.dims().to_vec(),
            weights: shape.dims().iter().map(|&n| n as f64 / total).collect(),
            total,
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn phi(&self, x: &AlgebraElement) -> Result<C64> {
        if x.dims() != self.dims {
            return Err(Error::ShapeMismatch { expected: self.dims.clone(), got: x.dims() });
        }
        let sum: C64 = self.dims.iter().zip(&x.blocks).map(|(&n, b)| b.trace() * n as f64).sum();
        Ok(sum / self.total)
    }

    /// `⟨u, v⟩ = φ(u* v)`, computed without forming the product.
    pub fn inner(&self, u: &AlgebraElement, v: &AlgebraElement) -> C64 {
        let sum: C64 = self
            .dims
            .iter()
            .zip(u.blocks.iter().zip(&v.blocks))
            .map(|(&n, (a, b))| a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum::<C64>() * n as f64)
            .sum();
        sum / self.total
    }

    pub fn norm(&self, x: &AlgebraElement) -> f64 {
        self.inner(x, x).re.max(0.0).sqrt()
    }
}

/// Free-function form of [`TraceState::phi`].
pub fn phi(state: &TraceState, x: &AlgebraElement) -> Result<C64> {
    state.phi(x)
}

/// Where one matrix unit `e^j_{pq}` of `B` lands in `A`: entries equal to one
/// at `(summand, row, col)`.
#[derive(Debug, Clone)]
struct UnitImage {
    j: usize,
    p: usize,
    q: usize,
    support: Vec<(usize, usize, usize)>,
}

/// Position of an index of summand `i` of `A` inside the standard embedding:
/// copy `t` of row `p` of the `j`-th summand of `B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slot {
    pub j: usize,
    pub p: usize,
    pub t: usize,
}

/// The standard embedding of an inclusion descriptor, with its layout, trace
/// state and the Gram data needed for the conditional expectation.
#[derive(Debug, Clone)]
pub struct EmbeddedInclusion {
    descriptor: InclusionDescriptor,
    b_shape: AlgebraShape,
    a_shape: AlgebraShape,
    /// `offsets[i][j]`: first index of the copies of `X_j` in summand `i`.
    offsets: Vec<Vec<usize>>,
    state: TraceState,
    units: Vec<UnitImage>,
    gram_inverse: CMatrix,
}

impl EmbeddedInclusion {
    pub fn new(descriptor: InclusionDescriptor) -> Self {
        let a = descriptor.matrix();
        let b_shape = AlgebraShape::from_dims(descriptor.b_dims()).expect("validated dims");
        let a_shape = AlgebraShape::from_dims(descriptor.a_dims()).expect("validated dims");
        let m = b_shape.dims().to_vec();
        let offsets: Vec<Vec<usize>> = (0..a.rows())
            .map(|i| {
                let mut acc = 0;
                (0..a.cols())
                    .map(|j| {
                        let start = acc;
                        acc += a.get(i, j) as usize * m[j];
                        start
                    })
                    .collect()
            })
            .collect();
        let state = TraceState::for_shape(&a_shape);

        let mut units = Vec::with_capacity(b_shape.dim());
        for (j, &mj) in m.iter().enumerate() {
            for p in 0..mj {
                for q in 0..mj {
                    let mut support = Vec::new();
                    for (i, offs) in offsets.iter().enumerate() {
                        let aij = a.get(i, j) as usize;
                        for t in 0..aij {
                            support.push((i, offs[j] + p * aij + t, offs[j] + q * aij + t));
                        }
                    }
                    units.push(UnitImage { j, p, q, support });
                }
            }
        }

        let weights = state.weights();
        let k = units.len();
        let mut gram = CMatrix::zeros(k, k);
        // Images of matrix units are 0/1 matrices; ⟨f_u, f_v⟩ counts shared
        // positions weighted by the summand weight.
        for (x, u) in units.iter().enumerate() {
            for (y, v) in units.iter().enumerate() {
                let mut acc = 0.0;
                for &(i, r, c) in &u.support {
                    if v.support.contains(&(i, r, c)) {
                        acc += weights[i];
                    }
                }
                gram[(x, y)] = C64::new(acc, 0.0);
            }
        }
        let gram_inverse = gram
            .cholesky()
            .expect("embedded matrix units are linearly independent")
            .inverse();

        Self { descriptor, b_shape, a_shape, offsets, state, units, gram_inverse }
    }

    pub fn descriptor(&self) -> &InclusionDescriptor {
        &self.descriptor
    }

    pub fn b_shape(&self) -> &AlgebraShape {
        &self.b_shape
    }

    pub fn a_shape(&self) -> &AlgebraShape {
        &self.a_shape
    }

    pub fn state(&self) -> &TraceState {
        &self.state
    }

    /// Index range of the copies of `X_j` in summand `i` (empty when `a_ij = 0`).
    pub fn layout(&self, i: usize, j: usize) -> std::ops::Range<usize> {
        let start = self.offsets[i][j];
        let len = self.descriptor.matrix().get(i, j) as usize * self.b_shape.dims()[j];
        start..start + len
    }

    /// Inverse of [`EmbeddedInclusion::index`].
    pub fn slot(&self, i: usize, index: usize) -> Slot {
        let a = self.descriptor.matrix();
        let j = (0..a.cols())
            .find(|&j| self.layout(i, j).contains(&index))
            .expect("index inside summand");
        let aij = a.get(i, j) as usize;
        let local = index - self.offsets[i][j];
        Slot { j, p: local / aij, t: local % aij }
    }

    pub fn index(&self, i: usize, slot: Slot) -> usize {
        let aij = self.descriptor.matrix().get(i, slot.j) as usize;
        self.offsets[i][slot.j] + slot.p * aij + slot.t
    }

    /// Embedded matrix units `ι(e^j_{pq})` in the order used by the Gram data.
    pub fn b_matrix_units(&self) -> Vec<(usize, usize, usize, AlgebraElement)> {
        self.units
            .iter()
            .map(|u| {
                let mut x = AlgebraElement::zeros(&self.a_shape);
                for &(i, r, c) in &u.support {
                    x.blocks[i][(r, c)] = C64::new(1.0, 0.0);
                }
                (u.j, u.p, u.q, x)
            })
            .collect()
    }

    pub fn embed(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        x.check_shape(&self.b_shape)?;
        let a = self.descriptor.matrix();
        let mut out = AlgebraElement::zeros(&self.a_shape);
        for (i, block) in out.blocks.iter_mut().enumerate() {
            for (j, xj) in x.blocks.iter().enumerate() {
                let aij = a.get(i, j) as usize;
                if aij == 0 {
                    continue;
                }
                let amp = xj.kronecker(&CMatrix::identity(aij, aij));
                let o = self.offsets[i][j];
                block.view_mut((o, o), (amp.nrows(), amp.ncols())).copy_from(&amp);
            }
        }
        Ok(out)
    }

    /// Minimal central projections `P_i` of `A` and the embedded `Q_j` of `B`.
    pub fn central_projections(&self) -> (Vec<AlgebraElement>, Vec<AlgebraElement>) {
        let p = (0..self.a_shape.len())
            .map(|i| {
                let mut x = AlgebraElement::zeros(&self.a_shape);
                x.blocks[i].fill_with_identity();
                x
            })
            .collect();
        let q = (0..self.b_shape.len())
            .map(|j| {
                let mut y = AlgebraElement::zeros(&self.b_shape);
                y.blocks[j].fill_with_identity();
                self.embed(&y).expect("shape from b_shape")
            })
            .collect();
        (p, q)
    }

    /// The trace-preserving conditional expectation `E: A → B`, in `B` coordinates.
    pub fn cond_expectation(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        x.check_shape(&self.a_shape)?;
        let w = self.state.weights();
        let rhs = nalgebra::DVector::from_iterator(
            self.units.len(),
            self.units.iter().map(|u| {
                u.support.iter().map(|&(i, r, c)| x.blocks[i][(r, c)] * w[i]).sum::<C64>()
            }),
        );
        let coeffs = &self.gram_inverse * rhs;
        let mut out = AlgebraElement::zeros(&self.b_shape);
        for (u, &c) in self.units.iter().zip(coeffs.iter()) {
            out.blocks[u.j][(u.p, u.q)] = c;
        }
        Ok(out)
    }

    /// `(ι(E(x)), ‖x − ι(E(x))‖_φ)`.
    pub fn project_onto_image(&self, x: &AlgebraElement) -> Result<(AlgebraElement, f64)> {
        let proj = self.embed(&self.cond_expectation(x)?)?;
        let residual = self.state.norm(&(x - &proj));
        Ok((proj, residual))
    }
}

/// Free-function form of [`EmbeddedInclusion::embed`].
pub fn embed(inc: &EmbeddedInclusion, x: &AlgebraElement) -> Result<AlgebraElement> {
    inc.embed(x)
}

/// Free-function form of [`EmbeddedInclusion::cond_expectation`].
pub fn cond_expectation(inc: &EmbeddedInclusion, x: &AlgebraElement) -> Result<AlgebraElement> {
    inc.cond_expectation(x)
}
