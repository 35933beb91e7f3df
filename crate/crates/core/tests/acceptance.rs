//! Acceptance criteria, run in order by one driver so timings are not
//! disturbed by other tests. Each criterion prints one PASS/FAIL line.

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use regincl::algebra::{random_unitary, AlgebraElement, CMatrix, EmbeddedInclusion, C64};
use regincl::basis::{build_regular_onb, solve_scalar_basis, SolverConfig, UnitaryFamily};
use regincl::classify::{
    classify_regular, depth, generate_broken_descriptor, generate_regular_descriptor,
    generate_spectral_descriptor, spectral_condition, FailureWitness, GeneratorLimits, RegularityVerdict,
    Violation, DEFAULT_DEPTH_MAX,
};
use regincl::inclusion::{canonicalize, check_support_partition, pseudo_equivalent, PartitionWitness};
use regincl::report::{exit_code, run_analyze, RunOptions, EXIT_REFUSED};
use regincl::verify::{
    check_family_membership, check_normalizer_membership, check_orthonormal, check_reconstruction,
    check_unitarity, extract_block_structure, BlockPermutationWitness, SummandPermutation,
};
use regincl::{Error, InclusionDescriptor, InclusionMatrix};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn worked_example() -> InclusionDescriptor {
    InclusionDescriptor::from_rows(vec![vec![3, 3, 0, 3], vec![0, 0, 2, 2]], vec![1; 4]).unwrap()
}

fn is_permutation(p: &[usize], n: usize) -> bool {
    p.len() == n && p.iter().copied().collect::<BTreeSet<_>>() == (0..n).collect()
}

fn criterion_1() -> Outcome {
    let d = worked_example();
    let start = Instant::now();
    let report = run_analyze(&d, None, &RunOptions::default());
    let elapsed = start.elapsed();
    let want = FailureWitness::Partition { i: 0, k: 1, j: 2, l: 3 };
    ensure(report.verdict == RegularityVerdict::NonRegular(want), || format!("verdict {:?}", report.verdict))?;
    within(elapsed, Duration::from_millis(10))?;
    Ok(format!("non-regular, witness (0,1,2,3), {elapsed:?}"))
}

/// Smallest `(i, k, j, l)` with `a_ij = 0` and `a_kj, a_il, a_kl ≠ 0`.
fn quadruple_oracle(rows: &[Vec<u64>]) -> Option<(usize, usize, usize, usize)> {
    let (s, r) = (rows.len(), rows[0].len());
    for i in 0..s {
        for k in 0..s {
            for j in 0..r {
                for l in 0..r {
                    if rows[i][j] == 0 && rows[k][j] != 0 && rows[i][l] != 0 && rows[k][l] != 0 {
                        return Some((i, k, j, l));
                    }
                }
            }
        }
    }
    None
}

/// Row supports pairwise equal or disjoint, by set comparison.
fn partition_oracle(rows: &[Vec<u64>]) -> bool {
    let supports: Vec<BTreeSet<usize>> =
        rows.iter().map(|row| (0..row.len()).filter(|&j| row[j] != 0).collect()).collect();
    supports.iter().all(|y| supports.iter().all(|z| y == z || y.is_disjoint(z)))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let (mut checked, mut disagreements) = (0usize, 0usize);
    for s in 1..=4 {
        for r in 1..=4 {
            for bits in 0u32..(1 << (s * r)) {
                let rows: Vec<Vec<u64>> =
                    (0..s).map(|i| (0..r).map(|j| u64::from(bits >> (i * r + j) & 1)).collect()).collect();
                let Ok(m) = InclusionMatrix::new(rows.clone()) else { continue };
                checked += 1;
                let quad = quadruple_oracle(&rows);
                let lib = check_support_partition(&m);
                let agree = match (&lib, quad) {
                    (Ok(_), None) => partition_oracle(&rows),
                    (Err(PartitionWitness { i, k, j, l }), Some(q)) => {
                        (*i, *k, *j, *l) == q && !partition_oracle(&rows)
                    }
                    _ => false,
                };
                if !agree {
                    disagreements += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(disagreements == 0, || format!("{disagreements} disagreements out of {checked}"))?;
    ensure(checked > 0, || "no irredundant patterns".into())?;
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!("{checked} irredundant patterns, 0 disagreements, {elapsed:?}"))
}

fn criterion_3() -> Outcome {
    let limits = GeneratorLimits::default();
    let start = Instant::now();
    for seed in 0..200 {
        let a = generate_regular_descriptor(seed, &limits).matrix().clone();
        let cf = canonicalize(&a).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(is_permutation(&cf.row_perm, a.rows()) && is_permutation(&cf.col_perm, a.cols()), || {
            format!("seed {seed}: invalid permutations")
        })?;
        let paq = a.permuted(&cf.row_perm, &cf.col_perm);
        ensure(paq == cf.block_diagonal(), || format!("seed {seed}: PAQ differs from the block form"))?;
        // contiguous blocks, constant nonzero rows, zeros elsewhere
        let (mut r0, mut c0) = (0, 0);
        let mut owner = vec![vec![None; a.cols()]; a.rows()];
        for (k, b) in cf.blocks.iter().enumerate() {
            for x in 0..b.rows.len() {
                for y in 0..b.cols.len() {
                    owner[r0 + x][c0 + y] = Some(k);
                }
            }
            r0 += b.rows.len();
            c0 += b.cols.len();
        }
        ensure(r0 == a.rows() && c0 == a.cols(), || format!("seed {seed}: blocks do not tile"))?;
        for i in 0..a.rows() {
            let inside: Vec<u64> = (0..a.cols()).filter(|&j| owner[i][j].is_some()).map(|j| paq.get(i, j)).collect();
            ensure(inside.iter().all(|&x| x != 0 && x == inside[0]), || format!("seed {seed}: row {i} not constant"))?;
            ensure((0..a.cols()).all(|j| owner[i][j].is_some() || paq.get(i, j) == 0), || {
                format!("seed {seed}: entry outside blocks in row {i}")
            })?;
        }
        ensure(pseudo_equivalent(&a, &cf.block_diagonal()).unwrap_or(false), || {
            format!("seed {seed}: not pseudo-equivalent to its canonical form")
        })?;
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(5))?;
    Ok(format!("200 scrambled normalizer matrices, {elapsed:?}"))
}

fn criterion_4() -> Outcome {
    let limits = GeneratorLimits::default();
    let start = Instant::now();
    for seed in 0..200 {
        let d = generate_regular_descriptor(seed, &limits);
        let RegularityVerdict::Regular(tree) = classify_regular(&d) else {
            return Err(format!("seed {seed}: regular descriptor classified non-regular"));
        };
        let cf = &tree.canonical;
        let back = tree.reassemble();
        ensure(back == d.relabel(&cf.row_perm, &cf.col_perm), || format!("seed {seed}: reassembly mismatch"))?;
        ensure(pseudo_equivalent(back.matrix(), d.matrix()).unwrap_or(false), || {
            format!("seed {seed}: reassembly not pseudo-equivalent")
        })?;
        for v in [Violation::UnequalRowEntry, Violation::BrokenPartition, Violation::UnequalDimension] {
            let b = generate_broken_descriptor(seed, &limits, v);
            let RegularityVerdict::NonRegular(w) = classify_regular(&b) else {
                return Err(format!("seed {seed}: {v:?} classified regular"));
            };
            ensure(w.holds_for(&b), || format!("seed {seed}: witness {w:?} does not hold"))?;
            let kind_ok = matches!(
                (v, w),
                (Violation::UnequalRowEntry, FailureWitness::UnequalRowEntries { .. })
                    | (Violation::BrokenPartition, FailureWitness::Partition { .. })
                    | (Violation::UnequalDimension, FailureWitness::UnequalDimensions { .. })
            );
            ensure(kind_ok, || format!("seed {seed}: {v:?} reported as {w:?}"))?;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!("200 regular + 600 broken descriptors, {elapsed:?}"))
}

/// `d` with `Aᵀ n' = d m'`, computed from scratch.
fn spectral_ratio(d: &InclusionDescriptor) -> Option<u64> {
    let a = d.matrix();
    let n: Vec<u64> = (0..a.rows()).map(|i| (0..a.cols()).map(|j| a.get(i, j) * d.b_dims()[j]).sum()).collect();
    let atn: Vec<u64> = (0..a.cols()).map(|j| (0..a.rows()).map(|i| a.get(i, j) * n[i]).sum()).collect();
    let ratio = atn[0] / d.b_dims()[0];
    (0..a.cols()).all(|j| atn[j] == ratio * d.b_dims()[j]).then_some(ratio)
}

fn spectral_suite() -> Vec<InclusionDescriptor> {
    let limits = GeneratorLimits::default();
    let mut suite: Vec<InclusionDescriptor> = (0..200)
        .map(|seed| generate_regular_descriptor(seed, &limits))
        .chain((0..100).map(|seed| generate_spectral_descriptor(seed, &limits)))
        .filter(|d| d.dim_a() <= 64 && spectral_ratio(d).is_some())
        .collect();
    let mut seen = BTreeSet::new();
    suite.retain(|d| seen.insert(format!("{:?}{:?}", d.matrix().to_rows(), d.b_dims().to_vec())));
    suite
}

fn criterion_5() -> Outcome {
    let suite = spectral_suite();
    let cfg = SolverConfig::default();
    let start = Instant::now();
    let mut largest = 0;
    for d in &suite {
        let label = format!("{:?} m'={:?}", d.matrix().to_rows(), d.b_dims().to_vec());
        let f = build_regular_onb(d, &cfg).map_err(|e| format!("{label}: {e}"))?;
        let want = spectral_ratio(d).unwrap() as usize;
        ensure(f.d() == want, || format!("{label}: {} members, spectral d = {want}", f.d()))?;
        let checks = [
            check_unitarity(&f, 1e-10),
            check_family_membership(&f, 1e-9),
            check_orthonormal(&f, 1e-9),
            check_reconstruction(&f, 16, 1e-9),
        ];
        for c in checks {
            let c = c.map_err(|e| format!("{label}: {e}"))?;
            ensure(c.overall, || format!("{label}: {:?}", c.checks[0]))?;
        }
        largest = largest.max(d.dim_a());
    }
    let elapsed = start.elapsed();
    ensure(suite.len() >= 20, || format!("suite has only {} descriptors", suite.len()))?;
    within(elapsed, Duration::from_secs(60))?;
    Ok(format!("{} descriptors (largest dim A = {largest}), {elapsed:?}", suite.len()))
}

fn criterion_6() -> Outcome {
    let d = InclusionDescriptor::from_rows(vec![vec![1, 0], vec![0, 2]], vec![1, 1]).unwrap();
    ensure(classify_regular(&d).is_regular(), || "descriptor should be regular".into())?;
    let err = build_regular_onb(&d, &SolverConfig::default()).map(|_| ()).unwrap_err();
    let Error::SpectralConditionFails(report) = &err else {
        return Err(format!("unexpected error {err}"));
    };
    ensure(report.per_block_d == Some(vec![1, 4]), || format!("per_block_d = {:?}", report.per_block_d))?;
    ensure(exit_code(&err) == EXIT_REFUSED, || format!("exit code {}", exit_code(&err)))?;

    let dir = std::env::temp_dir().join(format!("regincl-acc6-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("nonspectral.json");
    std::fs::write(&path, r#"{"inclusion_matrix": [[1, 0], [0, 2]], "b_dims": [1, 1]}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_regincl")).arg("build-basis").arg(&path).output().unwrap();
    let _ = std::fs::remove_dir_all(&dir);
    ensure(out.status.code() == Some(2), || format!("binary exited with {:?}", out.status.code()))?;
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    ensure(v["certificate"]["per_block_d"] == serde_json::json!([1, 4]), || format!("certificate {v}"))?;
    Ok("refused with per_block_d = (1, 4), exit code 2".into())
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for r in 1..=4u32 {
        for code in 0..4u32.pow(r) {
            let row: Vec<u64> = (0..r).map(|x| u64::from(code / 4u32.pow(x) % 4 + 1)).collect();
            let d = InclusionDescriptor::from_rows(vec![row.clone()], vec![1; r as usize]).unwrap();
            let regular = classify_regular(&d).is_regular();
            let spectral = spectral_condition(&d).satisfied;
            let equal = row.iter().all(|&a| a == row[0]);
            ensure(regular == spectral && spectral == equal && spectral_ratio(&d).is_some() == equal, || {
                format!("{row:?}: regular {regular}, spectral {spectral}")
            })?;
            count += 1;
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("{count} single-row descriptors, {elapsed:?}"))
}

/// Largest eigenvalue of `AᵀA` by power iteration from a positive start.
fn top_eigenvalue(a: &InclusionMatrix) -> f64 {
    let m = DMatrix::from_fn(a.rows(), a.cols(), |i, j| a.get(i, j) as f64);
    let ata = m.transpose() * &m;
    let mut v = nalgebra::DVector::from_element(a.cols(), 1.0);
    let mut lambda = 0.0;
    for _ in 0..10_000 {
        let w = &ata * &v;
        let next = w.norm() / v.norm();
        v = w.normalize();
        if (next - lambda).abs() <= 1e-15 * next {
            return next;
        }
        lambda = next;
    }
    lambda
}

fn criterion_8() -> Outcome {
    let limits = GeneratorLimits::default();
    let start = Instant::now();
    for seed in 0..200 {
        let d = generate_regular_descriptor(seed, &limits);
        let r = depth(d.matrix(), DEFAULT_DEPTH_MAX).map_err(|e| format!("seed {seed}: {e}"))?;
        let lambda = top_eigenvalue(d.matrix());
        ensure(r.depth == 2, || format!("seed {seed}: depth {}", r.depth))?;
        ensure((r.norm_sq_bound - lambda).abs() <= 1e-9 * lambda.max(1.0), || {
            format!("seed {seed}: ‖A‖² = {} vs power iteration {lambda}", r.norm_sq_bound)
        })?;
        ensure(r.q_min as f64 <= lambda + 1e-9, || format!("seed {seed}: q_min {} > {lambda}", r.q_min))?;
    }
    let m = InclusionMatrix::new(vec![vec![1, 1], vec![0, 1]]).unwrap();
    let r = depth(&m, DEFAULT_DEPTH_MAX).map_err(|e| e.to_string())?;
    ensure(r.depth == 3 && r.q_min == 3, || format!("[[1,1],[0,1]]: {r:?}"))?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("200 regular descriptors at depth 2; [[1,1],[0,1]] depth 3, q_min 3; {elapsed:?}"))
}

fn criterion_9() -> Outcome {
    let limits = GeneratorLimits { max_dim: 1, ..GeneratorLimits::default() };
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for trial in 0..100u64 {
        let d = generate_regular_descriptor(1000 + trial, &limits);
        let a = d.matrix().clone();
        let inc = EmbeddedInclusion::new(d);
        // σ moves columns only among identical column vectors
        let mut sigma: Vec<usize> = (0..a.cols()).collect();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for j in 0..a.cols() {
            match groups.iter_mut().find(|g| a.column(g[0]) == a.column(j)) {
                Some(g) => g.push(j),
                None => groups.push(vec![j]),
            }
        }
        for g in &groups {
            let mut image = g.clone();
            image.shuffle(&mut rng);
            for (&k, &l) in g.iter().zip(&image) {
                sigma[k] = l;
            }
        }
        let summands: Vec<SummandPermutation> = (0..a.rows())
            .map(|i| {
                let support: Vec<usize> = (0..a.cols()).filter(|&j| a.get(i, j) != 0).collect();
                let n = a.row(i)[support[0]] as usize;
                SummandPermutation {
                    sigma: support.iter().map(|&k| sigma[k]).collect(),
                    blocks: support.iter().map(|_| random_unitary(n, &mut rng)).collect(),
                    support,
                }
            })
            .collect();
        let chosen = BlockPermutationWitness { summands };
        let u = chosen.assemble(&inc).map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(check_normalizer_membership(&inc, &u, 1e-9).unwrap_or(false), || {
            format!("trial {trial}: assembled unitary fails membership")
        })?;
        let got = extract_block_structure(&inc, &u, 1e-9).map_err(|e| format!("trial {trial}: {e}"))?;
        for (g, c) in got.summands.iter().zip(&chosen.summands) {
            ensure(g.support == c.support && g.sigma == c.sigma, || format!("trial {trial}: σ differs"))?;
            for (x, y) in g.blocks.iter().zip(&c.blocks) {
                ensure((x - y).iter().all(|z| z.norm() <= 1e-12), || format!("trial {trial}: block differs"))?;
            }
        }
    }
    let mut rejected = 0;
    for trial in 0..100 {
        let n = 2 + trial % 3;
        let inc = EmbeddedInclusion::new(InclusionDescriptor::from_rows(vec![vec![1; n]], vec![1; n]).unwrap());
        let u = AlgebraElement::random_unitary(inc.a_shape(), &mut rng);
        if !check_normalizer_membership(&inc, &u, 1e-9).map_err(|e| e.to_string())? {
            rejected += 1;
        }
    }
    ensure(rejected == 100, || format!("only {rejected}/100 generic unitaries rejected"))?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!("100 round trips exact, 100/100 generic unitaries rejected, {elapsed:?}"))
}

/// `max |φ(W_j* W_k) − δ_jk|` with φ = Σ_i (n_i / Σ n²) Tr_i.
fn independent_gram(members: &[Vec<CMatrix>]) -> f64 {
    let dims: Vec<usize> = members[0].iter().map(|b| b.nrows()).collect();
    let total: f64 = dims.iter().map(|&n| (n * n) as f64).sum();
    let mut worst: f64 = 0.0;
    for (j, wj) in members.iter().enumerate() {
        for (k, wk) in members.iter().enumerate() {
            let phi: C64 = wj
                .iter()
                .zip(wk)
                .zip(&dims)
                .map(|((x, y), &n)| (x.adjoint() * y).trace() * (n as f64 / total))
                .sum();
            let delta = if j == k { 1.0 } else { 0.0 };
            worst = worst.max((phi - C64::new(delta, 0.0)).norm());
        }
    }
    worst
}

fn criterion_10() -> Outcome {
    let cfg = SolverConfig::default();
    let mut lines = Vec::new();
    for dims in [vec![2usize, 1], vec![2, 2], vec![3, 1]] {
        let start = Instant::now();
        let sol = solve_scalar_basis(&dims, &cfg).map_err(|e| format!("{dims:?}: {e}"))?;
        let elapsed = start.elapsed();
        within(elapsed, Duration::from_secs(30))?;
        let gram = independent_gram(&sol.members);
        let rows = dims.iter().map(|&l| vec![l as u64]).collect();
        let inc = Arc::new(EmbeddedInclusion::new(InclusionDescriptor::from_rows(rows, vec![1]).unwrap()));
        let members = sol.members.iter().cloned().map(AlgebraElement::from_blocks).collect();
        let family = UnitaryFamily::new_unchecked(inc, members).map_err(|e| e.to_string())?;
        let ortho = check_orthonormal(&family, 1e-8).map_err(|e| e.to_string())?;
        let want = dims.iter().map(|l| l * l).sum::<usize>();
        ensure(sol.members.len() == want, || format!("{dims:?}: {} members", sol.members.len()))?;
        ensure(gram < 1e-8 && ortho.overall, || {
            format!("{dims:?}: gram {gram:e}, orthonormality {:e}", ortho.checks[0].residual)
        })?;
        lines.push(format!("{dims:?} gram {gram:.1e} in {elapsed:.2?}"));
    }
    Ok(lines.join("; "))
}

fn random_descriptor(rng: &mut ChaCha8Rng) -> InclusionDescriptor {
    loop {
        let s = rng.random_range(1..=3);
        let r = rng.random_range(1..=3);
        let rows: Vec<Vec<u64>> = (0..s).map(|_| (0..r).map(|_| rng.random_range(0..=2)).collect()).collect();
        let dims: Vec<u64> = (0..r).map(|_| rng.random_range(1..=3)).collect();
        if let Ok(d) = InclusionDescriptor::from_rows(rows, dims) {
            if d.dim_a() <= 64 {
                return d;
            }
        }
    }
}

fn criterion_11() -> Outcome {
    const TOL: f64 = 1e-11;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for case in 0..50 {
        let inc = EmbeddedInclusion::new(random_descriptor(&mut rng));
        let (a_shape, b_shape) = (inc.a_shape().clone(), inc.b_shape().clone());
        let x = AlgebraElement::random(&a_shape, &mut rng);
        let x = x.scale(C64::new(1.0 / x.max_abs(), 0.0));
        let b1 = AlgebraElement::random(&b_shape, &mut rng);
        let b2 = AlgebraElement::random(&b_shape, &mut rng);
        let e = |y: &AlgebraElement| inc.cond_expectation(y).unwrap();
        let state = inc.state();
        let ex = e(&x);

        let trace = (state.phi(&inc.embed(&ex).unwrap()).unwrap() - state.phi(&x).unwrap()).norm();
        let sandwich = &(&inc.embed(&b1).unwrap() * &x) * &inc.embed(&b2).unwrap();
        let bimodule = (&e(&sandwich) - &(&(&b1 * &ex) * &b2)).max_abs() / (b1.max_abs() * b2.max_abs());
        let idempotent = (&e(&inc.embed(&ex).unwrap()) - &ex).max_abs();
        let positive = e(&(&x.adjoint() * &x))
            .blocks()
            .iter()
            .map(|blk| {
                let herm = (blk + blk.adjoint()) * C64::new(0.5, 0.0);
                (-herm.symmetric_eigenvalues().min()).max(0.0)
            })
            .fold(0.0, f64::max);
        for (name, r) in [("trace", trace), ("bimodularity", bimodule), ("idempotence", idempotent), ("positivity", positive)] {
            ensure(r <= TOL, || format!("case {case}: {name} residual {r:e}"))?;
            worst = worst.max(r);
        }
    }
    let mut diag_worst: f64 = 0.0;
    for n in 1..=8 {
        let inc = EmbeddedInclusion::new(InclusionDescriptor::from_rows(vec![vec![1; n]], vec![1; n]).unwrap());
        let x = AlgebraElement::random(inc.a_shape(), &mut rng);
        let ex = inc.cond_expectation(&x).unwrap();
        for j in 0..n {
            diag_worst = diag_worst.max((ex.block(j)[(0, 0)] - x.block(0)[(j, j)]).norm());
        }
    }
    ensure(diag_worst <= 1e-12, || format!("diagonal extraction off by {diag_worst:e}"))?;
    Ok(format!("50 inclusions, worst residual {worst:.1e}; diagonal cross-check {diag_worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("worked example witness", criterion_1),
        ("quadruple vs partition condition", criterion_2),
        ("canonicalization", criterion_3),
        ("regularity round trip", criterion_4),
        ("basis construction", criterion_5),
        ("non-spectral refusal", criterion_6),
        ("single-row descriptors", criterion_7),
        ("depth two", criterion_8),
        ("block-structure round trip", criterion_9),
        ("scalar-multi solver", criterion_10),
        ("conditional expectation", criterion_11),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2} ({name}): {detail}", k + 1),
            Err(why) => {
                println!("FAIL criterion {:>2} ({name}): {why}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
