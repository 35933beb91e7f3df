//! Reading off the permutation of summands and the unitary blocks of a
//! normalizing unitary when B is commutative.
//!
//! cargo run --example block_structure

use regincl::basis::{build_regular_onb, SolverConfig};
use regincl::verify::{check_normalizer_membership, extract_block_structure, DEFAULT_TOLERANCE};
use regincl::{InclusionDescriptor, Result};

fn main() -> Result<()> {
    let d = InclusionDescriptor::from_rows(vec![vec![1, 1, 1]], vec![1; 3])?;
    let family = build_regular_onb(&d, &SolverConfig::default())?;
    let inc = family.inclusion().clone();
    for (n, w) in family.members().iter().enumerate() {
        let witness = extract_block_structure(&inc, w, DEFAULT_TOLERANCE)?;
        let sp = &witness.summands[0];
        let phases: Vec<String> = sp.blocks.iter().map(|b| format!("{:.3}", b[(0, 0)])).collect();
        println!("W_{n}: sigma {:?} over support {:?}, blocks [{}]", sp.sigma, sp.support, phases.join(", "));
        let rebuilt = witness.assemble(&inc)?;
        assert!(check_normalizer_membership(&inc, &rebuilt, DEFAULT_TOLERANCE)?);
    }
    Ok(())
}
