//! Regularity verdicts with their certificates.
//!
//! cargo run --example classify

use regincl::classify::{classify_regular, generate_broken_descriptor, GeneratorLimits, Violation};
use regincl::{InclusionDescriptor, Result};

fn show(name: &str, d: &InclusionDescriptor) {
    let verdict = classify_regular(d);
    match verdict.witness() {
        Some(w) => {
            println!("{name}: not regular, {w}");
            assert!(w.holds_for(d));
        }
        None => println!("{name}: regular, {} block(s)", verdict.decomposition().unwrap().blocks.len()),
    }
}

fn main() -> Result<()> {
    show("worked", &InclusionDescriptor::from_rows(vec![vec![3, 3, 0, 3], vec![0, 0, 2, 2]], vec![1; 4])?);
    show("uneven row", &InclusionDescriptor::from_rows(vec![vec![1, 2]], vec![1, 1])?);
    show("mixed sizes in a support", &InclusionDescriptor::from_rows(vec![vec![1, 1]], vec![1, 2])?);
    show("regular", &InclusionDescriptor::from_rows(vec![vec![1, 1, 0], vec![2, 2, 0], vec![0, 0, 1]], vec![1; 3])?);

    let planted = [Violation::UnequalRowEntry, Violation::BrokenPartition, Violation::UnequalDimension];
    for (seed, v) in planted.into_iter().enumerate() {
        let broken = generate_broken_descriptor(seed as u64, &GeneratorLimits::default(), v);
        show(&format!("generated {v:?}"), &broken);
    }
    Ok(())
}
