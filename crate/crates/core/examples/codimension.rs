//! Exact codimension of a cell's jet conditions.
//!
//! `cargo run --example codimension -- V1+ 3` certifies cell V1+ with
//! seed 3; both arguments are optional.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tricell::conditions::{instantiate, random_system, template_for, Moduli, Rational};
use tricell::rank::{codimension, evaluation_matrix, verify_containments, FunctionBasis};
use tricell::Cell;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let cell: Cell = args.next().as_deref().unwrap_or("V1+").parse()?;
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0);

    println!("template for {}:\n{}", cell.pretty(), template_for(&cell));

    let system = random_system(&cell, &mut ChaCha8Rng::seed_from_u64(seed));
    print!("{}", system.dump());
    let rank = codimension(&system, FunctionBasis::default())?;
    let containment = verify_containments(&system, 10)?;
    println!("codimension {rank}; contains constants {}, contains vanishing ideal {}", containment.contains_constants, containment.contains_ideal);

    // A hand-picked instance: the second-type cell Θ̄ at 1/2 with α = 1,
    // seen through polynomials of degree at most 5.
    let theta: Cell = "TH".parse()?;
    let half = Rational::new(1.into(), 2.into());
    let sys = instantiate(&theta, &[half], &Moduli::alpha(Rational::from_integer(1.into())))?;
    let m = evaluation_matrix(&sys, FunctionBasis::new(5))?;
    println!("Θ at 1/2 on degree <= 5: {}x{} matrix of rank {}", m.rows(), m.cols(), m.rank());
    Ok(())
}
