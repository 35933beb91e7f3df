//! Numerical search for a unitary orthonormal basis of ℂ ⊂ ⊕ M_{l_i} when
//! the sizes differ.
//!
//! cargo run --release --example scalar_solver

use std::time::Instant;

use regincl::basis::{basis_scalar_multi, solve_scalar_basis, SolverConfig};
use regincl::verify::{verify_family, DEFAULT_TOLERANCE};
use regincl::Result;

fn main() -> Result<()> {
    let cfg = SolverConfig { tolerance: 1e-10, ..SolverConfig::default() };
    for dims in [vec![1, 2], vec![2, 3], vec![1, 2, 2]] {
        let start = Instant::now();
        let sol = solve_scalar_basis(&dims, &cfg)?;
        println!(
            "{dims:?}: {} unitaries, residual {:.1e}, restart {}, {} iterations, {:.2?}",
            sol.members.len(),
            sol.residual,
            sol.restart,
            sol.iterations,
            start.elapsed()
        );
    }

    let f = basis_scalar_multi(&[2, 2], &cfg)?;
    println!("[2, 2] uses the closed form: {} members, verified {}", f.d(), verify_family(&f, DEFAULT_TOLERANCE)?.overall);

    let starved = SolverConfig { max_iterations: 1, restarts: 1, ..cfg };
    println!("one iteration: {}", solve_scalar_basis(&[2, 3], &starved).unwrap_err());
    Ok(())
}
