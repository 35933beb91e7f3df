//! The embedding, the Markov trace and the trace-preserving conditional
//! expectation onto the image of B.
//!
//! cargo run --example trace_and_expectation

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use regincl::algebra::{AlgebraElement, EmbeddedInclusion};
use regincl::verify::element_norm;
use regincl::{InclusionDescriptor, Result};

fn main() -> Result<()> {
    let d = InclusionDescriptor::from_rows(vec![vec![1, 2], vec![0, 1]], vec![2, 1])?;
    let inc = EmbeddedInclusion::new(d);
    println!("B = {:?}, A = {:?}", inc.b_shape().dims(), inc.a_shape().dims());
    println!("trace weights {:?}", inc.state().weights());

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let x = AlgebraElement::random(inc.a_shape(), &mut rng);
    let b = AlgebraElement::random(inc.b_shape(), &mut rng);

    let ex = inc.cond_expectation(&x)?;
    let iex = inc.embed(&ex)?;
    let phi = inc.state();
    println!("phi(x) = {:.6}, phi(E(x)) = {:.6}", phi.phi(&x)?, phi.phi(&iex)?);

    let lhs = inc.cond_expectation(&(&inc.embed(&b)? * &x))?;
    println!("|E(bx) - bE(x)| = {:.2e}", element_norm(&(&lhs - &(&b * &ex))));
    println!("|E(E(x)) - E(x)| = {:.2e}", element_norm(&(&inc.cond_expectation(&iex)? - &ex)));
    Ok(())
}
