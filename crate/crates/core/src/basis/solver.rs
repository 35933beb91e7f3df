//! Numerical search for unitary orthonormal bases of `ℂ ⊂ ⊕_i M_{l_i}`.
//!
//! With weights `w_i = l_i / Σ l²` a tuple `U = ⊕_i U_i` maps to the unit
//! vector `⊕_i √w_i vec(U_i)` of length `d = Σ l_i²`, and φ-orthonormality
//! of `d` such tuples says the `d × d` matrix of these columns is unitary.
//! The search alternates between the nearest unitary `d × d` matrix and the
//! nearest column-wise tuple of unitaries (both polar factors). Once close,
//! a Levenberg–Marquardt polish on the off-diagonal Gram entries finishes the
//! job; fresh Haar-random restarts take over when progress stalls.

use std::sync::atomic::{AtomicUsize, Ordering};

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{polar_unitary, random_unitary, CMatrix, C64};
use crate::error::{Error, Result};

/// Settings for [`solve_scalar_basis`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Target for the largest deviation of the φ-Gram matrix from identity.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { tolerance: 1e-8, max_iterations: 5000, restarts: 20, seed: 0 }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::InvalidConfig(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.max_iterations == 0 || self.restarts == 0 {
            return Err(Error::InvalidConfig("iteration and restart counts must be at least 1".into()));
        }
        Ok(())
    }
}

/// Residual below which polishing stops.
const POLISH_TARGET: f64 = 1e-14;
/// A restart is abandoned when the residual improves by less than this
/// factor over a window of iterations.
const STALL_WINDOW: usize = 400;
const STALL_FACTOR: f64 = 0.9;

/// Outcome of a solver run: one tuple of unitaries per basis member.
#[derive(Debug, Clone)]
pub struct ScalarSolution {
    pub members: Vec<Vec<CMatrix>>,
    pub residual: f64,
    pub restart: usize,
    pub iterations: usize,
}

struct Layout {
    dims: Vec<usize>,
    sqrt_w: Vec<f64>,
    offsets: Vec<usize>,
    d: usize,
}

impl Layout {
    fn new(dims: &[usize]) -> Self {
        let d: usize = dims.iter().map(|l| l * l).sum();
        let sqrt_w = dims.iter().map(|&l| (l as f64 / d as f64).sqrt()).collect();
        let mut offsets = Vec::with_capacity(dims.len());
        let mut acc = 0;
        for &l in dims {
            offsets.push(acc);
            acc += l * l;
        }
        Self { dims: dims.to_vec(), sqrt_w, offsets, d }
    }

    fn to_frame(&self, members: &[Vec<CMatrix>]) -> CMatrix {
        let mut v = CMatrix::zeros(self.d, self.d);
        for (col, tuple) in members.iter().enumerate() {
            for (i, u) in tuple.iter().enumerate() {
                let l = self.dims[i];
                for r in 0..l {
                    for c in 0..l {
                        v[(self.offsets[i] + r * l + c, col)] = u[(r, c)] * self.sqrt_w[i];
                    }
                }
            }
        }
        v
    }

    /// Nearest tuple of unitaries to each column.
    fn nearest_tuples(&self, v: &CMatrix) -> Vec<Vec<CMatrix>> {
        (0..self.d)
            .map(|col| {
                self.dims
                    .iter()
                    .enumerate()
                    .map(|(i, &l)| {
                        let z = DMatrix::from_fn(l, l, |r, c| v[(self.offsets[i] + r * l + c, col)]);
                        polar_unitary(&z)
                    })
                    .collect()
            })
            .collect()
    }

    fn residual(&self, members: &[Vec<CMatrix>]) -> f64 {
        let v = self.to_frame(members);
        let g = v.adjoint() * &v;
        let mut worst: f64 = 0.0;
        for r in 0..self.d {
            for c in 0..self.d {
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((g[(r, c)] - C64::new(target, 0.0)).norm());
            }
        }
        worst
    }
}

/// Gauss–Newton polish is attempted once the residual falls below this.
const NEWTON_SWITCH: f64 = 1e-2;
const NEWTON_STEPS: usize = 25;
/// Alternating-projection iterations between two polish attempts.
const NEWTON_RETRY: usize = 200;

/// `found` holds the lowest restart index known to succeed; restarts above
/// it stop early since their result can no longer be chosen.
fn run_restart(
    layout: &Layout,
    cfg: &SolverConfig,
    restart: usize,
    found: &AtomicUsize,
) -> (Vec<Vec<CMatrix>>, f64, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut members: Vec<Vec<CMatrix>> = (0..layout.d)
        .map(|_| layout.dims.iter().map(|&l| random_unitary(l, &mut rng)).collect())
        .collect();
    let mut residual = layout.residual(&members);
    let mut best = (members.clone(), residual);
    let mut window_start = residual;
    let mut last_polish: Option<usize> = None;
    let mut iterations = 0;
    while iterations < cfg.max_iterations {
        if found.load(Ordering::Relaxed) < restart {
            break;
        }
        iterations += 1;
        let frame = polar_unitary(&layout.to_frame(&members));
        members = layout.nearest_tuples(&frame);
        residual = layout.residual(&members);
        if residual < best.1 {
            best = (members.clone(), residual);
        }
        let due = last_polish.is_none_or(|at| iterations - at >= NEWTON_RETRY);
        if residual <= NEWTON_SWITCH && due {
            last_polish = Some(iterations);
            let mut polished = members.clone();
            pin_identity(&mut polished);
            let r = newton_polish(layout, &mut polished, NEWTON_STEPS);
            if r < best.1 {
                best = (polished, r);
            }
            if best.1 <= cfg.tolerance {
                break;
            }
        }
        if iterations % STALL_WINDOW == 0 {
            if residual > STALL_FACTOR * window_start {
                break;
            }
            window_start = residual;
        }
    }
    (best.0, best.1, iterations)
}

/// Off-diagonal Gram entries `φ(U_j* U_k)`, `j < k`, as interleaved real and
/// imaginary parts, and their Jacobian with member 0 held fixed. Member `k`
/// moves as `U_{k,i} ↦ U_{k,i}(1 + iH)` for Hermitian `H`.
fn linearize(layout: &Layout, members: &[Vec<CMatrix>]) -> (DMatrix<f64>, DVector<f64>) {
    let d = layout.d;
    let weights: Vec<f64> = layout.sqrt_w.iter().map(|x| x * x).collect();
    // products[j][k][i] = U_{j,i}* U_{k,i}
    let products: Vec<Vec<Vec<CMatrix>>> = (0..d)
        .map(|j| {
            (0..d)
                .map(|k| members[j].iter().zip(&members[k]).map(|(a, b)| a.adjoint() * b).collect())
                .collect()
        })
        .collect();
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|j| (j + 1..d).map(move |k| (j, k))).collect();
    let mut jac = DMatrix::<f64>::zeros(2 * pairs.len(), (d - 1) * d);
    let mut f = DVector::<f64>::zeros(2 * pairs.len());
    let mut pair_index = vec![vec![usize::MAX; d]; d];
    for (row, &(j, k)) in pairs.iter().enumerate() {
        pair_index[j][k] = row;
        let g: C64 = (0..layout.dims.len()).map(|i| products[j][k][i].trace() * weights[i]).sum();
        f[2 * row] = g.re;
        f[2 * row + 1] = g.im;
    }
    let mut col = 0;
    for member in 1..d {
        for (i, &l) in layout.dims.iter().enumerate() {
            for a in 0..l {
                for b in a..l {
                    for imag in [false, true] {
                        if a == b && imag {
                            continue;
                        }
                        // generator E: E_aa, E_ab + E_ba, or i(E_ab - E_ba)
                        let tr_me = |m: &CMatrix| -> C64 {
                            if a == b {
                                m[(a, a)]
                            } else if !imag {
                                m[(b, a)] + m[(a, b)]
                            } else {
                                (m[(b, a)] - m[(a, b)]) * C64::i()
                            }
                        };
                        let w = weights[i];
                        // member as second argument: d<U_j, U_k> = i w tr(M_jk E)
                        for j in 0..member {
                            let row = pair_index[j][member];
                            let v = C64::i() * tr_me(&products[j][member][i]) * w;
                            jac[(2 * row, col)] += v.re;
                            jac[(2 * row + 1, col)] += v.im;
                        }
                        // member as first argument: d<U_k, U_j> = -i w tr(E M_kj)
                        for j in member + 1..d {
                            let row = pair_index[member][j];
                            let v = -C64::i() * tr_me(&products[member][j][i]) * w;
                            jac[(2 * row, col)] += v.re;
                            jac[(2 * row + 1, col)] += v.im;
                        }
                        col += 1;
                    }
                }
            }
        }
    }
    (jac, f)
}

/// Applies a generator step to members `1..d`, retracting with the polar factor.
fn retract(layout: &Layout, members: &[Vec<CMatrix>], step: &DVector<f64>) -> Vec<Vec<CMatrix>> {
    let mut trial = members.to_vec();
    let mut col = 0;
    for tuple in trial.iter_mut().skip(1) {
        for (u, &l) in tuple.iter_mut().zip(&layout.dims) {
            let mut h = CMatrix::zeros(l, l);
            for a in 0..l {
                for b in a..l {
                    if a == b {
                        h[(a, a)] += C64::new(step[col], 0.0);
                        col += 1;
                    } else {
                        let (re, im) = (step[col], step[col + 1]);
                        h[(a, b)] += C64::new(re, im);
                        h[(b, a)] += C64::new(re, -im);
                        col += 2;
                    }
                }
            }
            let moved = &*u * (CMatrix::identity(l, l) + h * C64::i());
            *u = polar_unitary(&moved);
        }
    }
    trial
}

/// Levenberg–Marquardt on the off-diagonal Gram entries (member 0 fixed).
/// Steps are accepted when the Euclidean norm of those entries decreases.
/// Returns the max-entry residual of the result.
fn newton_polish(layout: &Layout, members: &mut [Vec<CMatrix>], steps: usize) -> f64 {
    if layout.d < 2 {
        return layout.residual(members);
    }
    let mut mu = 1e-3;
    let (mut jac, mut f) = linearize(layout, members);
    for _ in 0..steps {
        if f.amax() <= POLISH_TARGET {
            break;
        }
        let jt = jac.transpose();
        let jtj = &jt * &jac;
        let g = &jt * &f;
        let mut accepted = false;
        for _ in 0..8 {
            let mut a = jtj.clone();
            for x in 0..a.nrows() {
                a[(x, x)] += mu;
            }
            let Some(chol) = a.cholesky() else {
                mu *= 10.0;
                continue;
            };
            let step = -chol.solve(&g);
            let trial = retract(layout, members, &step);
            let (tj, tf) = linearize(layout, &trial);
            if tf.norm() < f.norm() {
                members.clone_from_slice(&trial);
                (jac, f) = (tj, tf);
                mu = (mu / 3.0).max(1e-15);
                accepted = true;
                break;
            }
            mu *= 4.0;
        }
        if !accepted {
            break;
        }
    }
    layout.residual(members)
}

/// Rotates every member by `U_0*` so the first member becomes the identity;
/// left multiplication by a unitary preserves φ-inner products.
fn pin_identity(members: &mut [Vec<CMatrix>]) {
    let first_adj: Vec<CMatrix> = members[0].iter().map(|u| u.adjoint()).collect();
    for tuple in members.iter_mut() {
        for (u, f) in tuple.iter_mut().zip(&first_adj) {
            *u = f * &*u;
        }
    }
    for u in members[0].iter_mut() {
        *u = CMatrix::identity(u.nrows(), u.ncols());
    }
}

/// Searches for `d = Σ l_i²` unitaries in `⊕_i M_{l_i}` whose φ-Gram matrix
/// is within `cfg.tolerance` of identity; the first member is the identity.
///
/// Restarts run in parallel; the returned solution is the first by restart
/// index that meets the tolerance, so results do not depend on scheduling.
pub fn solve_scalar_basis(dims: &[usize], cfg: &SolverConfig) -> Result<ScalarSolution> {
    cfg.validate()?;
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidConfig(format!("summand sizes must be positive, got {dims:?}")));
    }
    let layout = Layout::new(dims);
    let found = AtomicUsize::new(usize::MAX);
    let outcomes: Vec<_> = (0..cfg.restarts)
        .into_par_iter()
        .map(|restart| {
            let (mut members, _, iterations) = run_restart(&layout, cfg, restart, &found);
            pin_identity(&mut members);
            let residual = layout.residual(&members);
            if residual <= cfg.tolerance {
                found.fetch_min(restart, Ordering::Relaxed);
            }
            (restart, members, residual, iterations)
        })
        .collect();
    let best_residual = outcomes.iter().map(|o| o.2).fold(f64::INFINITY, f64::min);
    outcomes
        .into_iter()
        .find(|o| o.2 <= cfg.tolerance)
        .map(|(restart, members, residual, iterations)| ScalarSolution {
            members,
            residual,
            restart,
            iterations,
        })
        .ok_or(Error::SolverExhausted {
            tolerance: cfg.tolerance,
            restarts: cfg.restarts,
            best_residual,
        })
}
