//! Canonical block-diagonal form of a normalizer matrix and exact
//! pseudo-equivalence.
//!
//! cargo run --example canonicalize

use regincl::inclusion::{canonicalize, find_pseudo_equivalence};
use regincl::{InclusionMatrix, Result};

fn print(m: &InclusionMatrix) {
    for i in 0..m.rows() {
        println!("  {:?}", m.row(i));
    }
}

fn main() -> Result<()> {
    let a = InclusionMatrix::new(vec![vec![0, 2, 0, 2], vec![1, 0, 1, 0], vec![0, 3, 0, 3]])?;
    println!("input:");
    print(&a);

    let cf = canonicalize(&a)?;
    println!("row_perm {:?}, col_perm {:?}", cf.row_perm, cf.col_perm);
    let canonical = cf.block_diagonal();
    println!("canonical:");
    print(&canonical);
    assert_eq!(a.permuted(&cf.row_perm, &cf.col_perm), canonical);

    let (sigma, tau) = find_pseudo_equivalence(&a, &canonical)?.expect("same matrix up to relabelling");
    println!("pseudo-equivalence: sigma {sigma:?}, tau {tau:?}");

    let not_normalizer = InclusionMatrix::new(vec![vec![1, 1, 0], vec![0, 1, 1]])?;
    println!("refused: {}", canonicalize(&not_normalizer).unwrap_err());
    Ok(())
}
