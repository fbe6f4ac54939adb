//! Lists the cells of the complex by dimension and type.
//!
//! Run with `cargo run --example census`.

use tricell::cells::{census, enumerate_cells, ordered_basis, TOP_DIMENSION};

fn main() {
    let cells = enumerate_cells();
    let first = cells.iter().filter(|c| !c.is_barred()).count();
    println!("{} cells: {first} of the first type, {} of the second", cells.len(), cells.len() - first);
    println!("cells per dimension: {:?}", census());

    for d in 0..=TOP_DIMENSION {
        let basis = ordered_basis(d).expect("dimension in range");
        let names: Vec<String> = basis.iter().map(|c| c.pretty()).collect();
        println!("C{d} ({:>2}): {}", basis.len(), names.join(" "));
    }

    // Names round-trip through the ASCII grammar used by the data files.
    let cell: tricell::Cell = "bJ321-".parse().expect("valid name");
    println!("{cell} is {} of dimension {}, unbarred {}", cell.pretty(), cell.dimension(), cell.unbarred());
}
