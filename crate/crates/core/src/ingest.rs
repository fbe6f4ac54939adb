//! Plain-text data files: boundary formulas, incidence matrices, kernel
//! generators, expansions, the cell list and the errata ledger.
//!
//! Every file is UTF-8, line oriented, with `#` comment lines. Boundary data
//! is kept exactly as transcribed; corrections are applied from the ledger.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::cells::{enumerate_cells, Cell};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IngestError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {reason}")]
    BadName { line: usize, name: String, reason: String },
    #[error("line {line}: generator {name} already listed on line {first}")]
    DuplicateGenerator { line: usize, name: String, first: usize },
    #[error("line {line}: generator {name} has dimension {found}, expected {expected}")]
    GeneratorDegree { line: usize, name: String, found: usize, expected: usize },
    #[error("missing `degree N` header")]
    MissingDegree,
    #[error("line {line}: row {name} has {found} marks for {expected} columns")]
    Ragged { line: usize, name: String, found: usize, expected: usize },
    #[error("errata line {line}: {what} not found in the boundary data")]
    Dangling { line: usize, what: String },
    #[error("cell list for dimension {dim} disagrees with the catalog")]
    CatalogMismatch { dim: usize },
    #[error("missing data file {0}")]
    MissingFile(PathBuf),
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{file}: {source}")]
    InFile {
        file: String,
        #[source]
        source: Box<IngestError>,
    },
}

impl IngestError {
    fn in_file(self, file: &str) -> IngestError {
        IngestError::InFile {
            file: file.to_string(),
            source: Box::new(self),
        }
    }
}

fn parse_cell(name: &str, line: usize) -> Result<Cell, IngestError> {
    name.parse::<Cell>().map_err(|e| IngestError::BadName {
        line,
        name: name.to_string(),
        reason: e.to_string(),
    })
}

/// Non-comment, non-blank lines with one-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Splits off the leading `degree N` header.
fn take_degree<'a, I>(lines: &mut std::iter::Peekable<I>) -> Result<usize, IngestError>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let (line, text) = lines.next().ok_or(IngestError::MissingDegree)?;
    let rest = text.strip_prefix("degree").ok_or(IngestError::MissingDegree)?;
    rest.trim().parse().map_err(|_| IngestError::Syntax {
        line,
        message: format!("bad degree header `{text}`"),
    })
}

/// Parses `NAME : A + B + ...`, returning the name and the raw term names.
fn split_formula(text: &str, line: usize) -> Result<(&str, Vec<&str>), IngestError> {
    let (lhs, rhs) = text.split_once(':').ok_or_else(|| IngestError::Syntax {
        line,
        message: format!("expected `NAME : ...`, got `{text}`"),
    })?;
    let lhs = lhs.trim();
    if lhs.is_empty() || lhs.contains(char::is_whitespace) {
        return Err(IngestError::Syntax {
            line,
            message: format!("bad generator `{lhs}`"),
        });
    }
    let rhs = rhs.trim();
    if rhs.is_empty() {
        return Ok((lhs, Vec::new()));
    }
    // Terms are separated by a spaced plus; a trailing `+` is a sign.
    let tokens: Vec<&str> = rhs.split_whitespace().collect();
    let mut terms = Vec::new();
    for (i, tok) in tokens.iter().enumerate() {
        let expect_term = i % 2 == 0;
        match (expect_term, *tok) {
            (false, "+") => {}
            (true, t) if t != "+" => terms.push(t),
            _ => {
                return Err(IngestError::Syntax {
                    line,
                    message: format!("malformed sum `{rhs}`"),
                })
            }
        }
    }
    if tokens.len().is_multiple_of(2) {
        return Err(IngestError::Syntax {
            line,
            message: format!("dangling `+` in `{rhs}`"),
        });
    }
    Ok((lhs, terms))
}

/// One boundary formula `∂(generator) = Σ terms`.
#[derive(Debug, Clone, Eq, Serialize)]
pub struct BoundaryLine {
    pub generator: Cell,
    pub terms: Vec<Cell>,
    /// Source line, or 0 when built in memory.
    #[serde(skip)]
    pub line: usize,
}

impl PartialEq for BoundaryLine {
    fn eq(&self, other: &Self) -> bool {
        self.generator == other.generator && self.terms == other.terms
    }
}

impl BoundaryLine {
    /// Terms reduced mod 2: repeated terms cancel in pairs.
    pub fn reduced_terms(&self) -> BTreeSet<Cell> {
        let mut set = BTreeSet::new();
        for t in &self.terms {
            if !set.remove(t) {
                set.insert(*t);
            }
        }
        set
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryFile {
    pub degree: usize,
    pub lines: Vec<BoundaryLine>,
}

impl BoundaryFile {
    pub fn get(&self, generator: &Cell) -> Option<&BoundaryLine> {
        self.lines.iter().find(|l| l.generator == *generator)
    }

    /// All `(generator, term)` incidences, reduced mod 2.
    pub fn entries(&self) -> BTreeSet<(Cell, Cell)> {
        self.lines
            .iter()
            .flat_map(|l| l.reduced_terms().into_iter().map(move |t| (l.generator, t)))
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("degree {}\n", self.degree);
        for l in &self.lines {
            let terms: Vec<String> = l.terms.iter().map(Cell::to_string).collect();
            if terms.is_empty() {
                out.push_str(&format!("{} :\n", l.generator));
            } else {
                out.push_str(&format!("{} : {}\n", l.generator, terms.join(" + ")));
            }
        }
        out
    }
}

/// Parses a boundary formula file. Generators must have the declared
/// dimension and appear at most once; terms are only checked for syntax.
pub fn parse_boundary_file(text: &str) -> Result<BoundaryFile, IngestError> {
    let mut lines = content_lines(text).peekable();
    let degree = take_degree(&mut lines)?;
    let mut seen: BTreeMap<Cell, usize> = BTreeMap::new();
    let mut out = Vec::new();
    for (line, text) in lines {
        let (lhs, rhs) = split_formula(text, line)?;
        let generator = parse_cell(lhs, line)?;
        if generator.dimension() != degree {
            return Err(IngestError::GeneratorDegree {
                line,
                name: lhs.to_string(),
                found: generator.dimension(),
                expected: degree,
            });
        }
        if let Some(first) = seen.insert(generator, line) {
            return Err(IngestError::DuplicateGenerator {
                line,
                name: lhs.to_string(),
                first,
            });
        }
        let terms = rhs
            .into_iter()
            .map(|t| parse_cell(t, line))
            .collect::<Result<Vec<_>, _>>()?;
        out.push(BoundaryLine {
            generator,
            terms,
            line,
        });
    }
    Ok(BoundaryFile { degree, lines: out })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Justification {
    DimensionLint,
    TypeLint,
    DSquaredLocalization,
}

impl Justification {
    pub fn as_str(self) -> &'static str {
        match self {
            Justification::DimensionLint => "dimension-lint",
            Justification::TypeLint => "type-lint",
            Justification::DSquaredLocalization => "d-squared-localization",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [
            Justification::DimensionLint,
            Justification::TypeLint,
            Justification::DSquaredLocalization,
        ]
        .into_iter()
        .find(|j| j.as_str() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "action", rename_all = "lowercase")]
pub enum ErrataAction {
    Add { term: Cell },
    Remove { term: Cell },
    Replace { old: Cell, new: Cell },
}

#[derive(Debug, Clone, Copy, Eq, Serialize)]
pub struct ErrataEntry {
    pub generator: Cell,
    #[serde(flatten)]
    pub action: ErrataAction,
    pub justification: Justification,
    #[serde(skip)]
    pub line: usize,
}

impl PartialEq for ErrataEntry {
    fn eq(&self, other: &Self) -> bool {
        (self.generator, self.action, self.justification) == (other.generator, other.action, other.justification)
    }
}

impl fmt::Display for ErrataEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : ", self.generator)?;
        match self.action {
            ErrataAction::Add { term } => write!(f, "add {term}")?,
            ErrataAction::Remove { term } => write!(f, "remove {term}")?,
            ErrataAction::Replace { old, new } => write!(f, "replace {old} -> {new}")?,
        }
        write!(f, " [{}]", self.justification.as_str())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ErrataLedger {
    pub entries: Vec<ErrataEntry>,
}

impl ErrataLedger {
    pub fn parse(text: &str) -> Result<Self, IngestError> {
        let mut entries = Vec::new();
        for (line, text) in content_lines(text) {
            let syntax = |message: String| IngestError::Syntax { line, message };
            let (lhs, rhs) = text
                .split_once(':')
                .ok_or_else(|| syntax(format!("expected `GENERATOR : action [tag]`, got `{text}`")))?;
            let generator = parse_cell(lhs.trim(), line)?;
            let rhs = rhs.trim();
            let (body, tag) = match (rhs.rfind('['), rhs.ends_with(']')) {
                (Some(open), true) => (rhs[..open].trim(), &rhs[open + 1..rhs.len() - 1]),
                _ => return Err(syntax(format!("missing justification tag in `{text}`"))),
            };
            let justification =
                Justification::parse(tag.trim()).ok_or_else(|| syntax(format!("unknown justification `{tag}`")))?;
            let words: Vec<&str> = body.split_whitespace().collect();
            let action = match words.as_slice() {
                ["add", t] => ErrataAction::Add {
                    term: parse_cell(t, line)?,
                },
                ["remove", t] => ErrataAction::Remove {
                    term: parse_cell(t, line)?,
                },
                ["replace", old, "->", new] => ErrataAction::Replace {
                    old: parse_cell(old, line)?,
                    new: parse_cell(new, line)?,
                },
                _ => return Err(syntax(format!("unknown errata action `{body}`"))),
            };
            entries.push(ErrataEntry {
                generator,
                action,
                justification,
                line,
            });
        }
        Ok(ErrataLedger { entries })
    }

    pub fn to_text(&self) -> String {
        self.entries.iter().map(|e| format!("{e}\n")).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// The ledger with entry `index` dropped.
    pub fn without(&self, index: usize) -> ErrataLedger {
        let mut entries = self.entries.clone();
        entries.remove(index);
        ErrataLedger { entries }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrataStatus {
    Applied,
    AlreadyPresent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AppliedErratum {
    pub entry: String,
    pub status: ErrataStatus,
}

/// Applies every ledger entry whose generator lives in this file's degree.
///
/// An entry whose effect is already visible (the new term present and the
/// old one gone) is a no-op, so applying twice gives the same file.
pub fn apply_errata(raw: &BoundaryFile, ledger: &ErrataLedger) -> Result<(BoundaryFile, Vec<AppliedErratum>), IngestError> {
    let mut out = raw.clone();
    let mut report = Vec::new();
    for entry in ledger.entries.iter().filter(|e| e.generator.dimension() == raw.degree) {
        let dangling = |what: String| IngestError::Dangling { line: entry.line, what };
        let line = out
            .lines
            .iter_mut()
            .find(|l| l.generator == entry.generator)
            .ok_or_else(|| dangling(format!("generator {}", entry.generator)))?;
        let pos = |t: &Cell, terms: &[Cell]| terms.iter().position(|x| x == t);
        let status = match entry.action {
            ErrataAction::Add { term } => {
                if pos(&term, &line.terms).is_some() {
                    ErrataStatus::AlreadyPresent
                } else {
                    line.terms.push(term);
                    ErrataStatus::Applied
                }
            }
            ErrataAction::Remove { term } => match pos(&term, &line.terms) {
                Some(i) => {
                    line.terms.remove(i);
                    ErrataStatus::Applied
                }
                None => ErrataStatus::AlreadyPresent,
            },
            ErrataAction::Replace { old, new } => match (pos(&old, &line.terms), pos(&new, &line.terms)) {
                (Some(i), _) => {
                    line.terms[i] = new;
                    ErrataStatus::Applied
                }
                (None, Some(_)) => ErrataStatus::AlreadyPresent,
                (None, None) => {
                    return Err(dangling(format!("term {old} in the boundary of {}", entry.generator)));
                }
            },
        };
        report.push(AppliedErratum {
            entry: entry.to_string(),
            status,
        });
    }
    Ok((out, report))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LintKind {
    /// The term's dimension is not one less than the generator's.
    Dimension,
    /// A second-type generator lists a first-type term.
    Type,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LintFinding {
    pub generator: Cell,
    pub term: Cell,
    pub line: usize,
    pub kinds: Vec<LintKind>,
}

/// Terms violating dimension homogeneity or type closure.
pub fn lint(raw: &BoundaryFile) -> Vec<LintFinding> {
    let mut findings = Vec::new();
    for l in &raw.lines {
        for term in &l.terms {
            let mut kinds = Vec::new();
            if term.dimension() + 1 != l.generator.dimension() {
                kinds.push(LintKind::Dimension);
            }
            if l.generator.is_barred() && !term.is_barred() {
                kinds.push(LintKind::Type);
            }
            if !kinds.is_empty() {
                findings.push(LintFinding {
                    generator: l.generator,
                    term: *term,
                    line: l.line,
                    kinds,
                });
            }
        }
    }
    findings
}

/// One printed block of an incidence matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixPart {
    pub columns: Vec<Cell>,
    pub rows: Vec<(Cell, Vec<bool>)>,
}

/// Incidence matrix, possibly split into several printed parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFile {
    pub degree: usize,
    pub parts: Vec<MatrixPart>,
}

impl MatrixFile {
    pub fn parse(text: &str) -> Result<Self, IngestError> {
        let mut lines = content_lines(text).peekable();
        let degree = take_degree(&mut lines)?;
        let mut parts: Vec<MatrixPart> = Vec::new();
        let mut awaiting_columns = false;
        for (line, text) in lines {
            if text.starts_with("part") {
                parts.push(MatrixPart {
                    columns: Vec::new(),
                    rows: Vec::new(),
                });
                awaiting_columns = true;
                continue;
            }
            let Some(part) = parts.last_mut() else {
                return Err(IngestError::Syntax {
                    line,
                    message: "matrix data before the first `part` line".into(),
                });
            };
            if let Some(cols) = text.strip_prefix("columns:") {
                part.columns = cols
                    .split_whitespace()
                    .map(|c| parse_cell(c, line))
                    .collect::<Result<_, _>>()?;
                awaiting_columns = false;
                continue;
            }
            if awaiting_columns {
                return Err(IngestError::Syntax {
                    line,
                    message: "expected a `columns:` line".into(),
                });
            }
            let mut tokens = text.split_whitespace();
            let name = tokens.next().unwrap_or_default();
            let row = parse_cell(name, line)?;
            let marks = tokens
                .map(|t| match t {
                    "+" => Ok(true),
                    "." => Ok(false),
                    other => Err(IngestError::Syntax {
                        line,
                        message: format!("bad mark `{other}`"),
                    }),
                })
                .collect::<Result<Vec<bool>, _>>()?;
            if marks.len() != part.columns.len() {
                return Err(IngestError::Ragged {
                    line,
                    name: name.to_string(),
                    found: marks.len(),
                    expected: part.columns.len(),
                });
            }
            part.rows.push((row, marks));
        }
        Ok(MatrixFile { degree, parts })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("degree {}\n", self.degree);
        for (k, part) in self.parts.iter().enumerate() {
            out.push_str(&format!("part {}\n", k + 1));
            let cols: Vec<String> = part.columns.iter().map(Cell::to_string).collect();
            out.push_str(&format!("columns: {}\n", cols.join(" ")));
            for (row, marks) in &part.rows {
                let marks: Vec<&str> = marks.iter().map(|m| if *m { "+" } else { "." }).collect();
                out.push_str(&format!("{:<7} {}\n", row.to_string(), marks.join(" ")));
            }
        }
        out
    }

    /// All marked `(row, column)` pairs across parts.
    pub fn entries(&self) -> BTreeSet<(Cell, Cell)> {
        let mut set = BTreeSet::new();
        for part in &self.parts {
            for (row, marks) in &part.rows {
                for (col, m) in part.columns.iter().zip(marks) {
                    if *m {
                        set.insert((*row, *col));
                    }
                }
            }
        }
        set
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub degree: usize,
    pub formula_only: Vec<(Cell, Cell)>,
    pub matrix_only: Vec<(Cell, Cell)>,
}

impl CrossCheck {
    pub fn is_clean(&self) -> bool {
        self.formula_only.is_empty() && self.matrix_only.is_empty()
    }
}

/// Incidences present in exactly one of the two sources.
pub fn cross_check_matrices(formulas: &BoundaryFile, matrix: &MatrixFile) -> CrossCheck {
    let a = formulas.entries();
    let b = matrix.entries();
    CrossCheck {
        degree: formulas.degree,
        formula_only: a.difference(&b).copied().collect(),
        matrix_only: b.difference(&a).copied().collect(),
    }
}

/// Labelled chains, e.g. listed kernel generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelFile {
    pub degree: usize,
    pub generators: Vec<(String, Vec<Cell>)>,
}

impl KernelFile {
    pub fn parse(text: &str) -> Result<Self, IngestError> {
        let mut lines = content_lines(text).peekable();
        let degree = take_degree(&mut lines)?;
        let mut generators = Vec::new();
        for (line, text) in lines {
            let (label, terms) = split_formula(text, line)?;
            let terms = terms
                .into_iter()
                .map(|t| parse_cell(t, line))
                .collect::<Result<Vec<_>, _>>()?;
            generators.push((label.to_string(), terms));
        }
        Ok(KernelFile { degree, generators })
    }
}

/// Stated expansions of boundaries in terms of one-based kernel labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionFile {
    pub degree: usize,
    pub rows: Vec<(Cell, Vec<usize>)>,
}

impl ExpansionFile {
    pub fn parse(text: &str) -> Result<Self, IngestError> {
        let mut lines = content_lines(text).peekable();
        let degree = take_degree(&mut lines)?;
        let mut rows = Vec::new();
        for (line, text) in lines {
            let (lhs, rhs) = text.split_once(':').ok_or_else(|| IngestError::Syntax {
                line,
                message: format!("expected `NAME : labels`, got `{text}`"),
            })?;
            let cell = parse_cell(lhs.trim(), line)?;
            let labels = rhs
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>().ok().filter(|n| *n > 0).ok_or_else(|| IngestError::Syntax {
                        line,
                        message: format!("bad label `{t}`"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push((cell, labels));
        }
        Ok(ExpansionFile { degree, rows })
    }
}

/// The cell list, one line per dimension: `dim N : NAME NAME ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellsFile {
    pub dims: BTreeMap<usize, Vec<Cell>>,
}

impl CellsFile {
    pub fn parse(text: &str) -> Result<Self, IngestError> {
        let mut dims = BTreeMap::new();
        for (line, text) in content_lines(text) {
            let syntax = || IngestError::Syntax {
                line,
                message: format!("expected `dim N : names`, got `{text}`"),
            };
            let (lhs, rhs) = text.split_once(':').ok_or_else(syntax)?;
            let dim: usize = lhs
                .trim()
                .strip_prefix("dim")
                .and_then(|d| d.trim().parse().ok())
                .ok_or_else(syntax)?;
            let cells = rhs
                .split_whitespace()
                .map(|c| parse_cell(c, line))
                .collect::<Result<Vec<_>, _>>()?;
            dims.insert(dim, cells);
        }
        Ok(CellsFile { dims })
    }

    pub fn from_catalog() -> Self {
        let mut dims: BTreeMap<usize, Vec<Cell>> = BTreeMap::new();
        for c in enumerate_cells() {
            dims.entry(c.dimension()).or_default().push(c);
        }
        CellsFile { dims }
    }

    pub fn to_text(&self) -> String {
        self.dims
            .iter()
            .map(|(d, cells)| {
                let names: Vec<String> = cells.iter().map(Cell::to_string).collect();
                format!("dim {d} : {}\n", names.join(" "))
            })
            .collect()
    }

    /// Checks the listed cells against the built-in catalog, as sets.
    pub fn check_catalog(&self) -> Result<(), IngestError> {
        let catalog = CellsFile::from_catalog();
        for d in 0..=crate::cells::TOP_DIMENSION {
            let listed: BTreeSet<&Cell> = self.dims.get(&d).into_iter().flatten().collect();
            let expected: BTreeSet<&Cell> = catalog.dims.get(&d).into_iter().flatten().collect();
            let count = self.dims.get(&d).map_or(0, Vec::len);
            if listed != expected || count != expected.len() {
                return Err(IngestError::CatalogMismatch { dim: d });
            }
        }
        Ok(())
    }
}

pub const CELLS_FILE: &str = "cells.txt";
pub const KERNEL_FILE: &str = "kernel_d2.txt";
pub const EXPANSIONS_FILE: &str = "expansions_d3.txt";
pub const ERRATA_FILE: &str = "errata.txt";

pub fn boundary_file_name(degree: usize) -> String {
    format!("boundary_d{degree}.txt")
}

pub fn matrix_file_name(degree: usize) -> String {
    format!("matrix_d{degree}.txt")
}

/// Degrees with transcribed boundary formulas.
pub const BOUNDARY_DEGREES: std::ops::RangeInclusive<usize> = 2..=6;
/// Degrees with a transcribed incidence matrix.
pub const MATRIX_DEGREES: [usize; 2] = [2, 3];

/// Every data file, as parsed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub cells: CellsFile,
    /// Raw boundary formulas for degrees 2 through 6, in order.
    pub boundaries: Vec<BoundaryFile>,
    pub matrices: Vec<MatrixFile>,
    pub kernel: KernelFile,
    pub expansions: ExpansionFile,
}

fn read(dir: &Path, name: &str) -> Result<String, IngestError> {
    let path = dir.join(name);
    if !path.is_file() {
        return Err(IngestError::MissingFile(path));
    }
    std::fs::read_to_string(&path).map_err(|e| IngestError::Io {
        path,
        message: e.to_string(),
    })
}

fn with_file<T>(name: &str, r: Result<T, IngestError>) -> Result<T, IngestError> {
    r.map_err(|e| e.in_file(name))
}

fn check_degree(name: &str, found: usize, expected: usize) -> Result<(), IngestError> {
    if found == expected {
        Ok(())
    } else {
        Err(IngestError::Syntax {
            line: 0,
            message: format!("declares degree {found}, expected {expected}"),
        }
        .in_file(name))
    }
}

impl Dataset {
    /// Parses the data files from a source of file contents by name.
    fn from_source(mut get: impl FnMut(&str) -> Result<String, IngestError>) -> Result<Self, IngestError> {
        let cells = with_file(CELLS_FILE, CellsFile::parse(&get(CELLS_FILE)?))?;
        with_file(CELLS_FILE, cells.check_catalog())?;
        let mut boundaries = Vec::new();
        for d in BOUNDARY_DEGREES {
            let name = boundary_file_name(d);
            let file = with_file(&name, parse_boundary_file(&get(&name)?))?;
            check_degree(&name, file.degree, d)?;
            boundaries.push(file);
        }
        let mut matrices = Vec::new();
        for d in MATRIX_DEGREES {
            let name = matrix_file_name(d);
            let file = with_file(&name, MatrixFile::parse(&get(&name)?))?;
            check_degree(&name, file.degree, d)?;
            matrices.push(file);
        }
        let kernel = with_file(KERNEL_FILE, KernelFile::parse(&get(KERNEL_FILE)?))?;
        let expansions = with_file(EXPANSIONS_FILE, ExpansionFile::parse(&get(EXPANSIONS_FILE)?))?;
        Ok(Dataset {
            cells,
            boundaries,
            matrices,
            kernel,
            expansions,
        })
    }

    /// Reads every required file from `dir`.
    pub fn load(dir: &Path) -> Result<Self, IngestError> {
        Dataset::from_source(|name| read(dir, name))
    }

    /// The data compiled into the library.
    pub fn shipped() -> Self {
        Dataset::from_source(|name| {
            shipped_file(name)
                .map(str::to_string)
                .ok_or_else(|| IngestError::MissingFile(PathBuf::from(name)))
        })
        .expect("shipped data parses")
    }

    pub fn boundary(&self, degree: usize) -> Option<&BoundaryFile> {
        self.boundaries.iter().find(|b| b.degree == degree)
    }

    pub fn matrix(&self, degree: usize) -> Option<&MatrixFile> {
        self.matrices.iter().find(|m| m.degree == degree)
    }

    /// Lint findings over all boundary files.
    pub fn lint(&self) -> Vec<LintFinding> {
        self.boundaries.iter().flat_map(lint).collect()
    }

    /// Boundary files with the ledger applied, plus the application report.
    pub fn corrected(&self, ledger: &ErrataLedger) -> Result<(Vec<BoundaryFile>, Vec<AppliedErratum>), IngestError> {
        let mut files = Vec::new();
        let mut report = Vec::new();
        for raw in &self.boundaries {
            let (fixed, applied) = apply_errata(raw, ledger)?;
            files.push(fixed);
            report.extend(applied);
        }
        // Entries whose generator has no boundary file at all are dangling too.
        for e in &ledger.entries {
            if !BOUNDARY_DEGREES.contains(&e.generator.dimension()) {
                return Err(IngestError::Dangling {
                    line: e.line,
                    what: format!("generator {}", e.generator),
                });
            }
        }
        Ok((files, report))
    }
}

/// Contents of a shipped data file by name.
pub fn shipped_file(name: &str) -> Option<&'static str> {
    Some(match name {
        "cells.txt" => include_str!("../data/cells.txt"),
        "boundary_d2.txt" => include_str!("../data/boundary_d2.txt"),
        "boundary_d3.txt" => include_str!("../data/boundary_d3.txt"),
        "boundary_d4.txt" => include_str!("../data/boundary_d4.txt"),
        "boundary_d5.txt" => include_str!("../data/boundary_d5.txt"),
        "boundary_d6.txt" => include_str!("../data/boundary_d6.txt"),
        "matrix_d2.txt" => include_str!("../data/matrix_d2.txt"),
        "matrix_d3.txt" => include_str!("../data/matrix_d3.txt"),
        "kernel_d2.txt" => include_str!("../data/kernel_d2.txt"),
        "expansions_d3.txt" => include_str!("../data/expansions_d3.txt"),
        "errata.txt" => include_str!("../data/errata.txt"),
        _ => return None,
    })
}

/// The shipped errata ledger.
pub fn shipped_errata() -> ErrataLedger {
    ErrataLedger::parse(shipped_file(ERRATA_FILE).unwrap_or_default()).expect("shipped ledger parses")
}

/// Reads a ledger from disk.
pub fn load_errata(path: &Path) -> Result<ErrataLedger, IngestError> {
    if !path.is_file() {
        return Err(IngestError::MissingFile(path.to_path_buf()));
    }
    let text = std::fs::read_to_string(path).map_err(|e| IngestError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let name = path.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
    with_file(&name, ErrataLedger::parse(&text))
}
