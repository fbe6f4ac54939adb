//! Builds the full JSON dossier. Pass a file name to write it to disk.

use tricell::report::{build_dossier, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = RunConfig { seed: 2024, jobs: 4, ..RunConfig::default() };
    let dossier = build_dossier(&config)?;
    let json = serde_json::to_string_pretty(&dossier)?;
    match std::env::args().nth(1) {
        Some(path) => {
            std::fs::write(&path, &json)?;
            println!("wrote {} bytes to {path}", json.len());
        }
        None => println!("{json}"),
    }
    println!("census {:?}", dossier.census.per_dimension);
    println!("sweep certified {} systems; all passed {}", dossier.codimension_sweep.systems, dossier.codimension_sweep.ok);
    println!("every check passed: {}", dossier.ok);
    Ok(())
}
