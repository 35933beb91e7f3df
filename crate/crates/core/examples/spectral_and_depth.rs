//! Spectral condition, depth and the minimal q.
//!
//! cargo run --example spectral_and_depth

use regincl::classify::{depth, norm_squared, spectral_condition, verify_depth_two_theorem, DEFAULT_DEPTH_MAX};
use regincl::{InclusionDescriptor, Result};

fn main() -> Result<()> {
    let cases = [
        ("pair", InclusionDescriptor::from_rows(vec![vec![1, 1], vec![2, 2]], vec![1, 1])?),
        ("two blocks", InclusionDescriptor::from_rows(vec![vec![1, 0], vec![0, 2]], vec![1, 1])?),
        ("not a normalizer", InclusionDescriptor::from_rows(vec![vec![1, 1], vec![0, 1]], vec![1, 1])?),
    ];
    for (name, d) in &cases {
        let s = spectral_condition(d);
        println!("{name}: A^t n' = {:?}, spectral {} (d = {:?})", s.at_n, s.satisfied, s.d);
        match depth(d.matrix(), DEFAULT_DEPTH_MAX) {
            Ok(r) => println!("  depth {} with q_min {}, |A|^2 = {:.6}", r.depth, r.q_min, norm_squared(d.matrix())),
            Err(e) => println!("  {e}"),
        }
        if let Ok(check) = verify_depth_two_theorem(d) {
            println!("  depth two with q = max d_k = {}: {}", check.q, check.holds);
        }
    }
    Ok(())
}
