//! The graded mod-2 cellular chain complex and its homology.
//!
//! Chains are bit vectors over the ordered cell basis of their degree. A
//! boundary matrix `∂_d` has one row per `d`-cell and one column per
//! `(d−1)`-cell, so the boundary of a chain is the chain times the matrix.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::cells::{ordered_basis, Cell, TOP_DIMENSION};
use crate::gf2::{solve_in_span, BitMatrix, BitVector, SpanBasis};
use crate::ingest::{BoundaryFile, ExpansionFile, KernelFile};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("degree {0} is outside the complex")]
    DegreeOutOfRange(usize),
    #[error("cell {cell} is not a basis cell of degree {degree}")]
    NotInBasis { cell: String, degree: usize },
    #[error("boundary of {generator} lists {term}, which is not a cell of degree {expected}")]
    Inhomogeneous { generator: String, term: String, expected: usize },
    #[error("no boundary formula for {0}")]
    MissingGenerator(String),
    #[error("boundary formula given twice for {0}")]
    DuplicateGenerator(String),
    #[error("a chain of degree 0 has no boundary")]
    ZeroDegree,
    #[error("chains of degree {0} and {1} cannot be compared")]
    DegreeMismatch(usize, usize),
    #[error("the {0} chain is not a cycle")]
    NotACycle(&'static str),
    #[error("boundary matrix for degree {degree} has shape {rows}x{cols}, expected {want_rows}x{want_cols}")]
    Shape { degree: usize, rows: usize, cols: usize, want_rows: usize, want_cols: usize },
    #[error("the square of the boundary is nonzero on {0} generators")]
    Invalid(usize),
}

/// A mod-2 chain of fixed degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    pub degree: usize,
    pub vector: BitVector,
}

impl Chain {
    pub fn is_zero(&self) -> bool {
        self.vector.is_zero()
    }

    /// Sum of two chains of the same degree.
    pub fn plus(&self, other: &Chain) -> Result<Chain, ComplexError> {
        if self.degree != other.degree {
            return Err(ComplexError::DegreeMismatch(self.degree, other.degree));
        }
        Ok(Chain {
            degree: self.degree,
            vector: &self.vector + &other.vector,
        })
    }
}

/// Cell bases `C_0 … C_n` and boundary matrices `∂_1 … ∂_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    bases: Vec<Vec<Cell>>,
    positions: Vec<HashMap<Cell, usize>>,
    /// `boundaries[d - 1]` is `∂_d`.
    boundaries: Vec<BitMatrix>,
}

fn positions_of(basis: &[Cell]) -> HashMap<Cell, usize> {
    basis.iter().enumerate().map(|(i, c)| (*c, i)).collect()
}

impl ChainComplex {
    /// Builds a complex from explicit bases and boundary matrices, checking
    /// shapes only.
    pub fn from_parts(bases: Vec<Vec<Cell>>, boundaries: Vec<BitMatrix>) -> Result<Self, ComplexError> {
        if bases.is_empty() || boundaries.len() + 1 != bases.len() {
            return Err(ComplexError::DegreeOutOfRange(boundaries.len()));
        }
        for (k, m) in boundaries.iter().enumerate() {
            let d = k + 1;
            let (want_rows, want_cols) = (bases[d].len(), bases[d - 1].len());
            if m.rows() != want_rows || m.cols() != want_cols {
                return Err(ComplexError::Shape {
                    degree: d,
                    rows: m.rows(),
                    cols: m.cols(),
                    want_rows,
                    want_cols,
                });
            }
        }
        let positions = bases.iter().map(|b| positions_of(b)).collect();
        Ok(ChainComplex {
            bases,
            positions,
            boundaries,
        })
    }

    /// Builds the full complex from boundary formulas for degrees 2 through
    /// 6; `∂_1` is zero. Every generator of those degrees needs a formula,
    /// and every term must be a basis cell one degree down.
    pub fn from_boundary_files(files: &[BoundaryFile]) -> Result<Self, ComplexError> {
        let bases: Vec<Vec<Cell>> = (0..=TOP_DIMENSION)
            .map(|d| ordered_basis(d).expect("degree within the catalog"))
            .collect();
        let positions: Vec<HashMap<Cell, usize>> = bases.iter().map(|b| positions_of(b)).collect();
        let mut boundaries = vec![BitMatrix::zeros(bases[1].len(), bases[0].len())];
        for d in 2..=TOP_DIMENSION {
            let mut m = BitMatrix::zeros(bases[d].len(), bases[d - 1].len());
            let mut filled = vec![false; bases[d].len()];
            for file in files.iter().filter(|f| f.degree == d) {
                for line in &file.lines {
                    let row = *positions[d].get(&line.generator).ok_or_else(|| ComplexError::NotInBasis {
                        cell: line.generator.to_string(),
                        degree: d,
                    })?;
                    if std::mem::replace(&mut filled[row], true) {
                        return Err(ComplexError::DuplicateGenerator(line.generator.to_string()));
                    }
                    for term in &line.terms {
                        let col = *positions[d - 1].get(term).ok_or_else(|| ComplexError::Inhomogeneous {
                            generator: line.generator.to_string(),
                            term: term.to_string(),
                            expected: d - 1,
                        })?;
                        m.flip(row, col);
                    }
                }
            }
            if let Some(row) = filled.iter().position(|f| !f) {
                return Err(ComplexError::MissingGenerator(bases[d][row].to_string()));
            }
            boundaries.push(m);
        }
        Ok(ChainComplex {
            bases,
            positions,
            boundaries,
        })
    }

    pub fn top_degree(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn basis(&self, degree: usize) -> Result<&[Cell], ComplexError> {
        self.bases
            .get(degree)
            .map(Vec::as_slice)
            .ok_or(ComplexError::DegreeOutOfRange(degree))
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    /// `∂_d`; degree 0 and degrees above the top have no matrix.
    pub fn boundary_matrix(&self, degree: usize) -> Result<&BitMatrix, ComplexError> {
        degree
            .checked_sub(1)
            .and_then(|k| self.boundaries.get(k))
            .ok_or(ComplexError::DegreeOutOfRange(degree))
    }

    pub fn chain(&self, degree: usize, cells: &[Cell]) -> Result<Chain, ComplexError> {
        let pos = self.positions.get(degree).ok_or(ComplexError::DegreeOutOfRange(degree))?;
        let mut v = BitVector::zeros(self.bases[degree].len());
        for c in cells {
            let i = pos.get(c).ok_or_else(|| ComplexError::NotInBasis {
                cell: c.to_string(),
                degree,
            })?;
            v.flip(*i);
        }
        Ok(Chain { degree, vector: v })
    }

    /// Chain from ASCII cell names; the degree is taken from the first name.
    pub fn chain_of(&self, names: &[&str]) -> Result<Chain, ComplexError> {
        let cells = names
            .iter()
            .map(|n| {
                n.parse::<Cell>().map_err(|_| ComplexError::NotInBasis {
                    cell: n.to_string(),
                    degree: 0,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let degree = cells.first().map_or(0, Cell::dimension);
        self.chain(degree, &cells)
    }

    pub fn zero_chain(&self, degree: usize) -> Result<Chain, ComplexError> {
        self.chain(degree, &[])
    }

    /// Cells with coefficient one, in basis order.
    pub fn cells_of(&self, chain: &Chain) -> Vec<Cell> {
        chain.vector.ones().map(|i| self.bases[chain.degree][i]).collect()
    }

    pub fn names_of(&self, chain: &Chain) -> Vec<String> {
        self.cells_of(chain).iter().map(Cell::to_string).collect()
    }

    pub fn boundary(&self, chain: &Chain) -> Result<Chain, ComplexError> {
        if chain.degree == 0 {
            return Err(ComplexError::ZeroDegree);
        }
        let m = self.boundary_matrix(chain.degree)?;
        let vector = m
            .left_mul(&chain.vector)
            .map_err(|_| ComplexError::DegreeOutOfRange(chain.degree))?;
        Ok(Chain {
            degree: chain.degree - 1,
            vector,
        })
    }

    pub fn is_cycle(&self, chain: &Chain) -> bool {
        chain.degree == 0 || self.boundary(chain).is_ok_and(|b| b.is_zero())
    }

    /// Checks `∂(∂(c)) = 0` for every generator, localizing failures.
    pub fn validate(&self) -> ValidationReport {
        let mut degrees = Vec::new();
        for d in 2..=self.top_degree() {
            let square = self.boundaries[d - 1]
                .multiply(&self.boundaries[d - 2])
                .expect("shapes agree by construction");
            let failures = (0..square.rows())
                .filter(|r| !square.row(*r).is_zero())
                .map(|r| SquareFailure {
                    generator: self.bases[d][r],
                    residue: square.row(r).ones().map(|c| self.bases[d - 2][c]).collect(),
                })
                .collect();
            degrees.push(DegreeValidation {
                degree: d,
                generators: self.bases[d].len(),
                failures,
            });
        }
        ValidationReport { degrees }
    }

    /// The complex, provided the square of the boundary vanishes.
    pub fn validated(self) -> Result<ValidatedComplex, (ComplexError, ValidationReport)> {
        let report = self.validate();
        if !report.is_ok() {
            return Err((ComplexError::Invalid(report.failure_count()), report));
        }
        let ranks = (0..=self.top_degree() + 1)
            .map(|d| if d == 0 || d > self.top_degree() { 0 } else { self.boundaries[d - 1].rank() })
            .collect();
        Ok(ValidatedComplex { complex: self, ranks })
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.bases
            .iter()
            .enumerate()
            .map(|(d, b)| if d % 2 == 0 { b.len() as i64 } else { -(b.len() as i64) })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareFailure {
    pub generator: Cell,
    /// Cells two degrees down with coefficient one in `∂(∂(generator))`.
    pub residue: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeValidation {
    pub degree: usize,
    pub generators: usize,
    pub failures: Vec<SquareFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub degrees: Vec<DegreeValidation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.failure_count() == 0
    }

    pub fn failure_count(&self) -> usize {
        self.degrees.iter().map(|d| d.failures.len()).sum()
    }

    pub fn failures(&self) -> impl Iterator<Item = &SquareFailure> {
        self.degrees.iter().flat_map(|d| &d.failures)
    }
}

/// A complex known to satisfy `∂² = 0`, with cached ranks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidatedComplex {
    complex: ChainComplex,
    /// `ranks[d]` is the rank of `∂_d`, zero for `d = 0` and `d = top + 1`.
    ranks: Vec<usize>,
}

impl std::ops::Deref for ValidatedComplex {
    type Target = ChainComplex;

    fn deref(&self) -> &ChainComplex {
        &self.complex
    }
}

/// Named representatives tried first when picking homology generators.
pub fn preferred_representatives(degree: usize) -> Vec<Vec<&'static str>> {
    match degree {
        1 => vec![vec!["bTH"]],
        2 => vec![vec!["bX+", "bX-"], vec!["bOM"], vec!["bS1"]],
        _ => vec![],
    }
}

impl ValidatedComplex {
    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn rank(&self, degree: usize) -> Result<usize, ComplexError> {
        if degree > self.top_degree() {
            return Err(ComplexError::DegreeOutOfRange(degree));
        }
        Ok(self.ranks[degree])
    }

    pub fn kernel_dim(&self, degree: usize) -> Result<usize, ComplexError> {
        Ok(self.basis(degree)?.len() - self.ranks[degree])
    }

    pub fn betti(&self, degree: usize) -> Result<usize, ComplexError> {
        Ok(self.kernel_dim(degree)? - self.ranks[degree + 1])
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        (0..=self.top_degree()).map(|d| self.betti(d).expect("degree in range")).collect()
    }

    /// Basis of the cycles of the given degree.
    pub fn cycle_basis(&self, degree: usize) -> Result<Vec<Chain>, ComplexError> {
        let n = self.basis(degree)?.len();
        let vectors = if degree == 0 {
            (0..n).map(|i| BitVector::unit(n, i)).collect()
        } else {
            self.boundary_matrix(degree)?.kernel_basis()
        };
        Ok(vectors.into_iter().map(|vector| Chain { degree, vector }).collect())
    }

    fn boundary_span(&self, degree: usize) -> Result<SpanBasis, ComplexError> {
        let n = self.basis(degree)?.len();
        let mut span = SpanBasis::new(n);
        if degree < self.top_degree() {
            for v in self.boundary_matrix(degree + 1)?.image_basis() {
                span.insert(v);
            }
        }
        Ok(span)
    }

    /// Cycles whose classes form a basis of homology, preferring the given
    /// candidates (skipped when not cycles or already dependent).
    pub fn homology_generators_with(&self, degree: usize, preferred: &[Chain]) -> Result<Vec<Chain>, ComplexError> {
        let betti = self.betti(degree)?;
        let mut span = self.boundary_span(degree)?;
        let mut out = Vec::new();
        let candidates = preferred
            .iter()
            .filter(|c| c.degree == degree)
            .cloned()
            .chain(self.cycle_basis(degree)?);
        for c in candidates {
            if out.len() == betti {
                break;
            }
            if self.is_cycle(&c) && span.insert(c.vector.clone()) {
                out.push(c);
            }
        }
        Ok(out)
    }

    pub fn homology_generators(&self, degree: usize) -> Result<Vec<Chain>, ComplexError> {
        let preferred: Vec<Chain> = preferred_representatives(degree)
            .iter()
            .filter_map(|names| self.chain_of(names).ok())
            .collect();
        self.homology_generators_with(degree, &preferred)
    }

    /// True when `a + b` is a boundary. Both inputs must be cycles.
    pub fn class_equal(&self, a: &Chain, b: &Chain) -> Result<bool, ComplexError> {
        let sum = a.plus(b)?;
        if !self.is_cycle(a) {
            return Err(ComplexError::NotACycle("first"));
        }
        if !self.is_cycle(b) {
            return Err(ComplexError::NotACycle("second"));
        }
        Ok(self.boundary_span(a.degree)?.contains(&sum.vector))
    }

    /// True when the cycle is a boundary.
    pub fn is_boundary(&self, chain: &Chain) -> Result<bool, ComplexError> {
        let zero = self.zero_chain(chain.degree)?;
        self.class_equal(chain, &zero)
    }

    /// Checks listed chains are cycles, independent and spanning the cycles.
    pub fn verify_kernel_generators(&self, listed: &[(String, Chain)]) -> Result<KernelReport, ComplexError> {
        let degree = listed.first().map_or(0, |(_, c)| c.degree);
        let non_cycles: Vec<String> = listed
            .iter()
            .filter(|(_, c)| !self.is_cycle(c))
            .map(|(l, _)| l.clone())
            .collect();
        let vectors: Vec<BitVector> = listed.iter().map(|(_, c)| c.vector.clone()).collect();
        let rank = crate::gf2::rank_of(&vectors);
        let kernel_dim = self.kernel_dim(degree)?;
        let all_cycles = non_cycles.is_empty();
        Ok(KernelReport {
            degree,
            listed: listed.len(),
            all_cycles,
            non_cycles,
            independent: rank == listed.len(),
            rank,
            kernel_dim,
            boundary_rank: self.rank(degree)?,
            spans: all_cycles && rank == kernel_dim,
        })
    }

    /// Recomputes each stated expansion of a boundary in the listed cycles.
    pub fn verify_expansions(&self, stated: &[(Cell, Vec<usize>)], listed: &[(String, Chain)]) -> Result<ExpansionReport, ComplexError> {
        let vectors: Vec<BitVector> = listed.iter().map(|(_, c)| c.vector.clone()).collect();
        let mut rows = Vec::new();
        for (cell, labels) in stated {
            let chain = self.chain(cell.dimension(), &[*cell])?;
            let image = self.boundary(&chain)?;
            let recomputed = solve_in_span(&vectors, &image.vector)
                .ok()
                .flatten()
                .map(|coeffs| coeffs.ones().map(|i| i + 1).collect::<Vec<_>>());
            let mut want = labels.clone();
            want.sort_unstable();
            want.dedup();
            let matches = recomputed.as_ref() == Some(&want);
            rows.push(ExpansionRow {
                cell: *cell,
                stated: want,
                recomputed,
                matches,
            });
        }
        let matched = rows.iter().filter(|r| r.matches).count();
        Ok(ExpansionReport {
            total: rows.len(),
            matched,
            rows,
        })
    }

    /// Betti numbers, ranks and generators in one serializable record.
    pub fn homology_report(&self) -> Result<HomologyReport, ComplexError> {
        let top = self.top_degree();
        let mut generators = Vec::new();
        for d in 0..=top {
            generators.push(
                self.homology_generators(d)?
                    .iter()
                    .map(|c| self.names_of(c))
                    .collect(),
            );
        }
        Ok(HomologyReport {
            sizes: self.sizes(),
            ranks: self.ranks[..=top].to_vec(),
            kernel_dims: (0..=top).map(|d| self.kernel_dim(d)).collect::<Result<_, _>>()?,
            betti: self.betti_numbers(),
            euler_characteristic: self.euler_characteristic(),
            generators,
        })
    }

    /// Kernel generators from a parsed list.
    pub fn listed_chains(&self, file: &KernelFile) -> Result<Vec<(String, Chain)>, ComplexError> {
        file.generators
            .iter()
            .map(|(label, cells)| Ok((label.clone(), self.chain(file.degree, cells)?)))
            .collect()
    }

    pub fn verify_expansion_file(&self, file: &ExpansionFile, kernel: &KernelFile) -> Result<ExpansionReport, ComplexError> {
        let listed = self.listed_chains(kernel)?;
        self.verify_expansions(&file.rows, &listed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelReport {
    pub degree: usize,
    pub listed: usize,
    pub all_cycles: bool,
    pub non_cycles: Vec<String>,
    pub independent: bool,
    pub rank: usize,
    pub kernel_dim: usize,
    pub boundary_rank: usize,
    pub spans: bool,
}

impl KernelReport {
    pub fn holds(&self) -> bool {
        self.all_cycles && self.independent && self.spans
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpansionRow {
    pub cell: Cell,
    pub stated: Vec<usize>,
    /// `None` when the boundary is not in the span of the listed cycles.
    pub recomputed: Option<Vec<usize>>,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpansionReport {
    pub total: usize,
    pub matched: usize,
    pub rows: Vec<ExpansionRow>,
}

impl ExpansionReport {
    pub fn holds(&self) -> bool {
        self.matched == self.total
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &ExpansionRow> {
        self.rows.iter().filter(|r| !r.matches)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub sizes: Vec<usize>,
    pub ranks: Vec<usize>,
    pub kernel_dims: Vec<usize>,
    pub betti: Vec<usize>,
    pub euler_characteristic: i64,
    pub generators: Vec<Vec<Vec<String>>>,
}
