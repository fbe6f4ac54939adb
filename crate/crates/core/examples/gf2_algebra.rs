//! Linear algebra over the two-element field: rank, kernels and solving.

use tricell::gf2::{solve_in_span, BitMatrix, BitVector};

fn main() {
    // Rows are the images of basis vectors: the map sends e0 and e1 to the
    // same vector, so (1, 1, 0) spans its left kernel.
    let rows = vec![
        BitVector::from_indices(3, [0, 2]),
        BitVector::from_indices(3, [0, 2]),
        BitVector::from_indices(3, [1]),
    ];
    let m = BitMatrix::from_rows(3, rows.clone()).expect("rows have length 3");
    println!("matrix:\n{m:?}");
    println!("rank {}", m.rank());
    for k in m.kernel_basis() {
        println!("kernel vector {k:?}");
    }

    let target = BitVector::from_indices(3, [0, 1, 2]);
    match solve_in_span(&rows, &target).expect("lengths agree") {
        Some(coeffs) => println!("{target:?} = combination {coeffs:?} of the rows"),
        None => println!("{target:?} is not in the row space"),
    }
}
