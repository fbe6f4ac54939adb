//! Lints the transcribed boundary data, applies the errata ledger and
//! checks that the boundary squares to zero.
//!
//! Pass a directory to validate data files on disk instead of the
//! built-in copy: `cargo run --example validate_data -- path/to/data`.

use std::path::PathBuf;

use tricell::complex::ChainComplex;
use tricell::ingest::{cross_check_matrices, load_errata, shipped_errata, Dataset};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (data, ledger) = match std::env::args().nth(1).map(PathBuf::from) {
        Some(dir) => {
            let ledger_path = dir.join("errata.txt");
            let ledger = if ledger_path.is_file() { load_errata(&ledger_path)? } else { Default::default() };
            (Dataset::load(&dir)?, ledger)
        }
        None => (Dataset::shipped(), shipped_errata()),
    };

    println!("lint on the data as transcribed:");
    for f in data.lint() {
        println!("  line {:>3}: {} lists {} {:?}", f.line, f.generator, f.term, f.kinds);
    }

    let (fixed, applied) = data.corrected(&ledger)?;
    for a in &applied {
        println!("errata {:?}: {}", a.status, a.entry);
    }

    for m in &data.matrices {
        let formulas = fixed.iter().find(|f| f.degree == m.degree).expect("formulas for every matrix");
        let check = cross_check_matrices(formulas, m);
        println!("matrix for degree {} agrees with the formulas: {}", m.degree, check.is_clean());
    }

    let complex = ChainComplex::from_boundary_files(&fixed)?;
    let report = complex.validate();
    for d in &report.degrees {
        println!("degree {}: {} generators, {} with nonzero square", d.degree, d.generators, d.failures.len());
    }
    println!("boundary squares to zero: {}", report.is_ok());
    Ok(())
}
