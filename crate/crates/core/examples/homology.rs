//! Betti numbers, homology generators and class relations.

use tricell::complex::ChainComplex;
use tricell::ingest::{shipped_errata, Dataset};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = Dataset::shipped();
    let (files, _) = data.corrected(&shipped_errata())?;
    let complex = ChainComplex::from_boundary_files(&files)?
        .validated()
        .map_err(|(e, _)| e)?;

    println!("betti numbers {:?}", complex.betti_numbers());
    println!("euler characteristic {}", complex.euler_characteristic());
    for d in 0..=complex.top_degree() {
        for g in complex.homology_generators(d)? {
            println!("H{d}: {}", complex.names_of(&g).join(" + "));
        }
    }

    let omega = complex.chain_of(&["bOM"])?;
    let v1 = complex.chain_of(&["bV1+", "bV1-"])?;
    println!("bOM ~ bV1+ + bV1- : {}", complex.class_equal(&omega, &v1)?);

    let x = complex.chain_of(&["bX+", "bX-"])?;
    let s1 = complex.chain_of(&["bS1"])?;
    let sum = x.plus(&omega)?.plus(&s1)?;
    println!("bX+ + bX- + bOM + bS1 is a boundary: {}", complex.is_boundary(&sum)?);

    let listed = complex.listed_chains(&data.kernel)?;
    let kernel = complex.verify_kernel_generators(&listed)?;
    println!(
        "{} listed cycles: independent {}, span the {}-dimensional cycle space {}",
        kernel.listed, kernel.independent, kernel.kernel_dim, kernel.spans
    );

    let expansions = complex.verify_expansion_file(&data.expansions, &data.kernel)?;
    println!("stated expansions reproduced: {}/{}", expansions.matched, expansions.total);
    for row in expansions.mismatches() {
        println!("  {}: stated {:?}, recomputed {:?}", row.cell, row.stated, row.recomputed);
    }
    Ok(())
}
