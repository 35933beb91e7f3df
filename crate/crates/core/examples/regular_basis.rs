//! End to end: decide regularity, build a unitary orthonormal basis in the
//! normalizer and certify it.
//!
//! cargo run --release --example regular_basis

use std::sync::Arc;

use regincl::algebra::EmbeddedInclusion;
use regincl::basis::{build_regular_onb, SolverConfig};
use regincl::verify::{certify_regularity_by_span, verify_family, DEFAULT_TOLERANCE};
use regincl::{InclusionDescriptor, Result};

fn main() -> Result<()> {
    let d = InclusionDescriptor::from_rows(vec![vec![3, 0, 0], vec![0, 1, 1], vec![1, 0, 0], vec![0, 2, 2]], vec![2, 1, 1])?;
    let family = build_regular_onb(&d, &SolverConfig::default())?;
    println!("{} unitaries in A = {:?}", family.d(), &d.a_dims()[..]);

    let report = verify_family(&family, DEFAULT_TOLERANCE)?;
    for c in &report.checks {
        println!("  {:<22} residual {:.2e}  {}", c.name, c.residual, if c.passed { "ok" } else { "FAIL" });
    }

    let inc = Arc::new(EmbeddedInclusion::new(d.clone()));
    let span = certify_regularity_by_span(&inc, &family, DEFAULT_TOLERANCE)?;
    println!("span certified {} (rank {} of {})", span.certified, span.rank, span.dim_a);

    let worked = InclusionDescriptor::from_rows(vec![vec![3, 3, 0, 3], vec![0, 0, 2, 2]], vec![1; 4])?;
    println!("worked example: {}", build_regular_onb(&worked, &SolverConfig::default()).unwrap_err());
    Ok(())
}
