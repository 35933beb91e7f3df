//! Closed-form bases for the three building blocks and the tensor and
//! direct-sum combinators.
//!
//! cargo run --example building_blocks

use regincl::basis::{basis_diagonal, basis_scalar_single, basis_trivial, combine_direct_sum, combine_tensor};
use regincl::verify::{verify_family, DEFAULT_TOLERANCE};
use regincl::Result;

fn main() -> Result<()> {
    let trivial = basis_trivial(2)?;
    let weyl = basis_scalar_single(3)?;
    let diagonal = basis_diagonal(2)?;
    for (name, f) in [("trivial(2)", &trivial), ("weyl(3)", &weyl), ("diagonal(2)", &diagonal)] {
        let a = f.descriptor().matrix();
        println!("{name}: {} members, matrix {:?}", f.d(), a.to_rows());
    }

    let t = combine_tensor(&weyl, &diagonal)?;
    println!("weyl(3) x diagonal(2): {} members, A dims {:?}", t.d(), &t.descriptor().a_dims()[..]);
    let report = verify_family(&t, DEFAULT_TOLERANCE)?;
    for c in &report.checks {
        println!("  {:<22} residual {:.2e}  {}", c.name, c.residual, if c.passed { "ok" } else { "FAIL" });
    }

    let s = combine_direct_sum(&weyl, &basis_scalar_single(3)?)?;
    println!("weyl(3) + weyl(3): {} members, verified {}", s.d(), verify_family(&s, DEFAULT_TOLERANCE)?.overall);
    println!("weyl(3) + diagonal(2): {}", combine_direct_sum(&weyl, &diagonal).unwrap_err());
    Ok(())
}
