//! Splitting a regular inclusion into building blocks.
//!
//! cargo run --example decompose

use regincl::classify::decompose;
use regincl::inclusion::pseudo_equivalent;
use regincl::{InclusionDescriptor, Result};

fn main() -> Result<()> {
    let d = InclusionDescriptor::from_rows(
        vec![vec![0, 1, 0, 1, 0], vec![2, 0, 0, 0, 0], vec![0, 2, 0, 2, 0], vec![0, 0, 1, 0, 1]],
        vec![1, 2, 3, 2, 3],
    )?;
    println!("A dims {:?}", &d.a_dims()[..]);

    let tree = decompose(&d)?;
    for (k, b) in tree.blocks.iter().enumerate() {
        println!(
            "block {k}: M_{} x C^{} inside {:?}, entries {:?}, d_k = {}",
            b.m_k, b.r_k, b.a_dims(), b.column_entries, b.spectral_d()
        );
    }

    let back = tree.reassemble();
    assert!(pseudo_equivalent(back.matrix(), d.matrix())?);
    println!("reassembled matrix is a relabelling of the input");
    Ok(())
}
