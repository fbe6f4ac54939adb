//! Batch commands: validate the boundary data, compute homology, certify
//! codimensions, and assemble everything into one JSON dossier.
//!
//! Every command returns a [`CommandReport`] carrying both renderings and
//! a pass flag; errors are environment or input problems.

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cells::{census, enumerate_cells, Cell, Family};
use crate::complex::{ChainComplex, ComplexError, ExpansionReport, HomologyReport, KernelReport, ValidatedComplex, ValidationReport};
use crate::conditions::{instantiate, random_moduli, random_support, ConditionError, Moduli, Rational};
use crate::ingest::{
    cross_check_matrices, lint, load_errata, shipped_errata, AppliedErratum, CrossCheck, Dataset, ErrataLedger, IngestError,
    LintFinding, ERRATA_FILE,
};
use crate::rank::{codimension, verify_containments, FunctionBasis, RankError, DEFAULT_DEGREE};

/// Version tag written at the top of every dossier.
pub const SCHEMA: &str = "tricell-dossier/1";
/// Random parameter draws per cell in the sweep.
pub const DRAWS_PER_CELL: usize = 3;
/// Shifts `t^j`, `j = 0..=10`, used for the ideal containment check.
pub const IDEAL_SHIFTS: usize = 10;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_ENVIRONMENT: i32 = 2;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Condition(#[from] ConditionError),
    #[error(transparent)]
    Rank(#[from] RankError),
    #[error("invalid complex: {0}")]
    Complex(#[from] ComplexError),
    #[error("bad cell name `{name}`: {reason}")]
    BadCell { name: String, reason: String },
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

impl ReportError {
    /// Validation failures are mathematical; everything else is environmental.
    pub fn exit_code(&self) -> i32 {
        match self {
            ReportError::Complex(ComplexError::Invalid(_)) | ReportError::Complex(ComplexError::Inhomogeneous { .. }) => {
                EXIT_CHECK_FAILED
            }
            _ => EXIT_ENVIRONMENT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

/// Where the errata ledger comes from.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum ErrataChoice {
    /// `errata.txt` next to the data, or the built-in ledger for built-in data.
    #[default]
    Auto,
    File(PathBuf),
    /// No corrections at all.
    Off,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    /// `None` selects the data compiled into the library.
    pub data_dir: Option<PathBuf>,
    pub errata: ErrataChoice,
    pub output: OutputFormat,
    pub seed: u64,
    pub degree_bound: usize,
    /// Worker threads for the codimension sweep; 1 runs inline.
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            data_dir: None,
            errata: ErrataChoice::Auto,
            output: OutputFormat::Text,
            seed: 0,
            degree_bound: DEFAULT_DEGREE,
            jobs: 1,
        }
    }
}

/// Result of one command in both renderings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandReport {
    pub ok: bool,
    pub text: String,
    pub json: String,
}

impl CommandReport {
    fn new<T: Serialize>(ok: bool, body: &T, text: String) -> Self {
        let mut json = serde_json::to_string_pretty(body).expect("report types serialize");
        json.push('\n');
        CommandReport { ok, text, json }
    }

    pub fn render(&self, format: OutputFormat) -> &str {
        match format {
            OutputFormat::Text => &self.text,
            OutputFormat::Json => &self.json,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.ok {
            EXIT_OK
        } else {
            EXIT_CHECK_FAILED
        }
    }
}

struct Loaded {
    dataset: Dataset,
    ledger: ErrataLedger,
    data_source: String,
    errata_source: String,
}

fn load(config: &RunConfig) -> Result<Loaded, ReportError> {
    let (dataset, data_source) = match &config.data_dir {
        Some(dir) => (Dataset::load(dir)?, dir.display().to_string()),
        None => (Dataset::shipped(), "built-in".to_string()),
    };
    let (ledger, errata_source) = match (&config.errata, &config.data_dir) {
        (ErrataChoice::Off, _) => (ErrataLedger::default(), "none".to_string()),
        (ErrataChoice::File(path), _) => (load_errata(path)?, path.display().to_string()),
        (ErrataChoice::Auto, None) => (shipped_errata(), "built-in".to_string()),
        (ErrataChoice::Auto, Some(dir)) => {
            let path = dir.join(ERRATA_FILE);
            if path.is_file() {
                (load_errata(&path)?, path.display().to_string())
            } else {
                (ErrataLedger::default(), "none".to_string())
            }
        }
    };
    Ok(Loaded {
        dataset,
        ledger,
        data_source,
        errata_source,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidateSummary {
    pub data_source: String,
    pub errata_source: String,
    /// Findings on the data as transcribed.
    pub lint: Vec<LintFinding>,
    pub errata: Vec<AppliedErratum>,
    /// Findings left after the ledger is applied.
    pub remaining_lint: Vec<LintFinding>,
    pub cross_checks: Vec<CrossCheck>,
    pub build_error: Option<String>,
    pub validation: Option<ValidationReport>,
    pub ok: bool,
}

/// Lint, errata, matrix cross-checks and the `∂² = 0` check, in that order.
fn run_validation(loaded: &Loaded) -> Result<(ValidateSummary, Option<ChainComplex>), ReportError> {
    let d = &loaded.dataset;
    let raw_lint = d.lint();
    let (fixed, applied) = d.corrected(&loaded.ledger)?;
    let remaining_lint: Vec<LintFinding> = fixed.iter().flat_map(lint).collect();
    let cross_checks: Vec<CrossCheck> = d
        .matrices
        .iter()
        .filter_map(|m| fixed.iter().find(|f| f.degree == m.degree).map(|f| cross_check_matrices(f, m)))
        .collect();
    let (complex, build_error) = match ChainComplex::from_boundary_files(&fixed) {
        Ok(c) => (Some(c), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let validation = complex.as_ref().map(ChainComplex::validate);
    let ok = remaining_lint.is_empty()
        && cross_checks.iter().all(CrossCheck::is_clean)
        && validation.as_ref().is_some_and(ValidationReport::is_ok);
    let summary = ValidateSummary {
        data_source: loaded.data_source.clone(),
        errata_source: loaded.errata_source.clone(),
        lint: raw_lint,
        errata: applied,
        remaining_lint,
        cross_checks,
        build_error,
        validation,
        ok,
    };
    Ok((summary, complex))
}

fn pair_list(pairs: &[(Cell, Cell)]) -> String {
    pairs.iter().map(|(a, b)| format!("({a}, {b})")).collect::<Vec<_>>().join(" ")
}

fn validate_text(s: &ValidateSummary) -> String {
    let mut out = format!("data: {}\nerrata: {}\n", s.data_source, s.errata_source);
    out.push_str(&format!("lint findings on transcribed data: {}\n", s.lint.len()));
    for f in &s.lint {
        let kinds: Vec<&str> = f
            .kinds
            .iter()
            .map(|k| match k {
                crate::ingest::LintKind::Dimension => "dimension",
                crate::ingest::LintKind::Type => "type",
            })
            .collect();
        out.push_str(&format!("  line {}: {} lists {} [{}]\n", f.line, f.generator, f.term, kinds.join(", ")));
    }
    out.push_str(&format!("errata entries used: {}\n", s.errata.len()));
    for e in &s.errata {
        out.push_str(&format!("  {}\n", e.entry));
    }
    out.push_str(&format!("lint findings after errata: {}\n", s.remaining_lint.len()));
    for c in &s.cross_checks {
        if c.is_clean() {
            out.push_str(&format!("matrix cross-check degree {}: clean\n", c.degree));
        } else {
            out.push_str(&format!(
                "matrix cross-check degree {}: formulas only {}; matrix only {}\n",
                c.degree,
                pair_list(&c.formula_only),
                pair_list(&c.matrix_only)
            ));
        }
    }
    if let Some(e) = &s.build_error {
        out.push_str(&format!("complex not built: {e}\n"));
    }
    if let Some(v) = &s.validation {
        for d in &v.degrees {
            out.push_str(&format!(
                "square of boundary, degree {}: {} generators, {} failures\n",
                d.degree,
                d.generators,
                d.failures.len()
            ));
            for f in &d.failures {
                let cells: Vec<String> = f.residue.iter().map(Cell::to_string).collect();
                out.push_str(&format!("  {} -> {}\n", f.generator, cells.join(" + ")));
            }
        }
    }
    out.push_str(if s.ok { "validation passed\n" } else { "validation FAILED\n" });
    out
}

pub fn cmd_validate(config: &RunConfig) -> Result<CommandReport, ReportError> {
    let loaded = load(config)?;
    let (summary, _) = run_validation(&loaded)?;
    Ok(CommandReport::new(summary.ok, &summary, validate_text(&summary)))
}

fn validated(loaded: &Loaded) -> Result<ValidatedComplex, ReportError> {
    let (fixed, _) = loaded.dataset.corrected(&loaded.ledger)?;
    let complex = ChainComplex::from_boundary_files(&fixed)?;
    Ok(complex.validated().map_err(|(e, _)| e)?)
}

/// One class relation in the second homology.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub statement: String,
    pub holds: bool,
}

/// The second-homology relations and the first-homology generator check.
pub fn relation_checks(v: &ValidatedComplex) -> Result<Vec<RelationCheck>, ReportError> {
    let ch = |names: &[&str]| v.chain_of(names);
    let x = ch(&["bX+", "bX-"])?;
    let om = ch(&["bOM"])?;
    let s1 = ch(&["bS1"])?;
    let th = ch(&["bTH"])?;
    let sum = x.plus(&om)?.plus(&s1)?;
    let h1 = v.homology_generators(1)?;
    let checks = vec![
        (
            "bTH generates the first homology",
            h1.len() == 1 && v.class_equal(&h1[0], &th)? && !v.is_boundary(&th)?,
        ),
        ("bX+ + bX- is not a boundary", !v.is_boundary(&x)?),
        ("bOM ~ bV1+ + bV1-", v.class_equal(&om, &ch(&["bV1+", "bV1-"])?)?),
        ("bOM ~ bV2+ + bV2-", v.class_equal(&om, &ch(&["bV2+", "bV2-"])?)?),
        ("bS1 ~ bS2", v.class_equal(&s1, &ch(&["bS2"])?)?),
        ("bX+ + bX- + bOM + bS1 ~ 0", v.is_boundary(&sum)?),
    ];
    Ok(checks
        .into_iter()
        .map(|(s, holds)| RelationCheck {
            statement: s.to_string(),
            holds,
        })
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct HomologySummary {
    pub homology: HomologyReport,
    pub relations: Vec<RelationCheck>,
    pub kernel: KernelReport,
    pub ok: bool,
}

fn homology_summary(v: &ValidatedComplex, d: &Dataset) -> Result<HomologySummary, ReportError> {
    let homology = v.homology_report()?;
    let relations = relation_checks(v)?;
    let kernel = v.verify_kernel_generators(&v.listed_chains(&d.kernel)?)?;
    let ok = relations.iter().all(|r| r.holds) && kernel.holds();
    Ok(HomologySummary {
        homology,
        relations,
        kernel,
        ok,
    })
}

fn homology_text(h: &HomologySummary) -> String {
    let r = &h.homology;
    let mut out = String::new();
    out.push_str(&format!("cells per degree: {:?}\n", r.sizes));
    out.push_str(&format!("boundary ranks:   {:?}\n", r.ranks));
    out.push_str(&format!("cycle dimensions: {:?}\n", r.kernel_dims));
    out.push_str(&format!("betti numbers:    {:?}\n", r.betti));
    out.push_str(&format!("euler characteristic: {}\n", r.euler_characteristic));
    for (d, gens) in r.generators.iter().enumerate() {
        for g in gens {
            out.push_str(&format!("H{d} generator: {}\n", g.join(" + ")));
        }
    }
    for rel in &h.relations {
        out.push_str(&format!("[{}] {}\n", if rel.holds { "ok" } else { "FAIL" }, rel.statement));
    }
    let k = &h.kernel;
    out.push_str(&format!(
        "listed cycles: {} listed, all cycles {}, independent {}, rank {}, cycle space dimension {}, span {}\n",
        k.listed, k.all_cycles, k.independent, k.rank, k.kernel_dim, k.spans
    ));
    out
}

pub fn cmd_homology(config: &RunConfig) -> Result<CommandReport, ReportError> {
    let loaded = load(config)?;
    let v = validated(&loaded)?;
    let summary = homology_summary(&v, &loaded.dataset)?;
    Ok(CommandReport::new(summary.ok, &summary, homology_text(&summary)))
}

/// Explicit parameters for a single codimension run; missing pieces are
/// drawn from the seeded generator.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CodimParams {
    pub points: Option<Vec<Rational>>,
    pub moduli: Moduli,
}

/// Generator for draw `draw` of the cell at catalog position `index`. Each
/// pair gets its own stream so results do not depend on evaluation order.
pub fn draw_rng(seed: u64, index: usize, draw: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((index * DRAWS_PER_CELL + draw) as u64);
    rng
}

fn catalog_index(cell: &Cell) -> usize {
    enumerate_cells().iter().position(|c| c == cell).unwrap_or_default()
}

#[derive(Debug, Clone, Serialize)]
pub struct CodimSummary {
    pub cell: Cell,
    pub support: Vec<String>,
    pub moduli: Vec<(String, String)>,
    pub functionals: Vec<String>,
    pub multiplicities: Vec<usize>,
    pub degree_bound: usize,
    pub rank: usize,
    pub contains_constants: bool,
    pub contains_ideal: bool,
    pub ok: bool,
}

fn moduli_list(m: &Moduli) -> Vec<(String, String)> {
    [
        ("alpha", &m.alpha),
        ("beta", &m.beta),
        ("gamma", &m.gamma),
    ]
    .into_iter()
    .filter_map(|(n, v)| v.as_ref().map(|v| (n.to_string(), v.to_string())))
    .collect()
}

/// Instantiates `cell`, computes its exact rank and runs both containment checks.
pub fn certify(cell: &Cell, support: &[Rational], moduli: &Moduli, degree_bound: usize) -> Result<CodimSummary, ReportError> {
    let system = instantiate(cell, support, moduli)?;
    let rank = codimension(&system, FunctionBasis::new(degree_bound))?;
    let containment = verify_containments(&system, IDEAL_SHIFTS)?;
    Ok(CodimSummary {
        cell: *cell,
        support: support.iter().map(ToString::to_string).collect(),
        moduli: moduli_list(&system.moduli),
        functionals: system.functionals.iter().map(ToString::to_string).collect(),
        multiplicities: containment.multiplicities.clone(),
        degree_bound,
        rank,
        contains_constants: containment.contains_constants,
        contains_ideal: containment.contains_ideal,
        ok: rank == 4 && containment.holds(),
    })
}

fn codim_text(s: &CodimSummary) -> String {
    let mut out = format!("cell {} ({})\n", s.cell, s.cell.pretty());
    for (i, p) in s.support.iter().enumerate() {
        out.push_str(&format!("p{} = {p}\n", i + 1));
    }
    for (n, v) in &s.moduli {
        out.push_str(&format!("{n} = {v}\n"));
    }
    for f in &s.functionals {
        out.push_str(&format!("  {f}\n"));
    }
    out.push_str(&format!("rank on polynomials of degree <= {}: {}\n", s.degree_bound, s.rank));
    out.push_str(&format!("multiplicities: {:?}\n", s.multiplicities));
    out.push_str(&format!("contains constants: {}\n", s.contains_constants));
    out.push_str(&format!("contains vanishing ideal: {}\n", s.contains_ideal));
    out
}

pub fn cmd_codim(config: &RunConfig, cell_name: &str, params: &CodimParams) -> Result<CommandReport, ReportError> {
    let cell: Cell = cell_name.parse().map_err(|e: crate::cells::CatalogError| ReportError::BadCell {
        name: cell_name.to_string(),
        reason: e.to_string(),
    })?;
    let mut rng = draw_rng(config.seed, catalog_index(&cell), 0);
    let support = match &params.points {
        Some(p) => p.clone(),
        None => random_support(&cell, &mut rng),
    };
    let drawn = random_moduli(&cell, &mut rng);
    let moduli = Moduli {
        alpha: params.moduli.alpha.clone().or(drawn.alpha),
        beta: params.moduli.beta.clone().or(drawn.beta),
        gamma: params.moduli.gamma.clone().or(drawn.gamma),
    };
    let summary = certify(&cell, &support, &moduli, config.degree_bound)?;
    Ok(CommandReport::new(summary.ok, &summary, codim_text(&summary)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepEntry {
    pub cell: Cell,
    pub ranks: Vec<usize>,
    pub containments: Vec<bool>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilySweep {
    pub family: String,
    pub second_type: bool,
    pub cells: usize,
    pub systems: usize,
    pub all_rank_four: bool,
    pub all_contained: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub seed: u64,
    pub degree_bound: usize,
    pub draws_per_cell: usize,
    pub systems: usize,
    pub families: Vec<FamilySweep>,
    pub cells: Vec<SweepEntry>,
    pub ok: bool,
}

fn sweep_cell(index: usize, cell: &Cell, seed: u64, degree_bound: usize, draws: usize) -> Result<SweepEntry, ReportError> {
    let mut ranks = Vec::new();
    let mut containments = Vec::new();
    for k in 0..draws {
        let mut rng = draw_rng(seed, index, k);
        let support = random_support(cell, &mut rng);
        let moduli = random_moduli(cell, &mut rng);
        let s = certify(cell, &support, &moduli, degree_bound)?;
        ranks.push(s.rank);
        containments.push(s.contains_constants && s.contains_ideal);
    }
    let ok = ranks.iter().all(|r| *r == 4) && containments.iter().all(|c| *c);
    Ok(SweepEntry {
        cell: *cell,
        ranks,
        containments,
        ok,
    })
}

/// Certifies every cell of the catalog with `draws` seeded parameter draws.
/// The output order is the catalog order whatever the number of workers.
pub fn codimension_sweep(seed: u64, degree_bound: usize, draws: usize, jobs: usize) -> Result<SweepReport, ReportError> {
    let cells = enumerate_cells();
    let run = || -> Result<Vec<SweepEntry>, ReportError> {
        if jobs <= 1 {
            cells
                .iter()
                .enumerate()
                .map(|(i, c)| sweep_cell(i, c, seed, degree_bound, draws))
                .collect()
        } else {
            cells
                .par_iter()
                .enumerate()
                .map(|(i, c)| sweep_cell(i, c, seed, degree_bound, draws))
                .collect()
        }
    };
    let entries = if jobs <= 1 {
        run()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| ReportError::Pool(e.to_string()))?
            .install(run)?
    };
    let mut families = Vec::new();
    for second_type in [false, true] {
        for family in Family::ALL {
            let group: Vec<&SweepEntry> = entries
                .iter()
                .filter(|e| e.cell.family() == family && e.cell.is_barred() == second_type)
                .collect();
            families.push(FamilySweep {
                family: family.tag().to_string(),
                second_type,
                cells: group.len(),
                systems: group.iter().map(|e| e.ranks.len()).sum(),
                all_rank_four: group.iter().all(|e| e.ranks.iter().all(|r| *r == 4)),
                all_contained: group.iter().all(|e| e.containments.iter().all(|c| *c)),
            });
        }
    }
    let ok = entries.iter().all(|e| e.ok);
    Ok(SweepReport {
        seed,
        degree_bound,
        draws_per_cell: draws,
        systems: entries.len() * draws,
        families,
        cells: entries,
        ok,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusSection {
    pub total: usize,
    pub first_type: usize,
    pub second_type: usize,
    pub per_dimension: Vec<usize>,
    pub first_type_per_dimension: Vec<usize>,
    pub euler_characteristic: i64,
}

pub fn census_section() -> CensusSection {
    let cells = enumerate_cells();
    let per_dimension = census().to_vec();
    let mut first = vec![0; per_dimension.len()];
    for c in cells.iter().filter(|c| !c.is_barred()) {
        first[c.dimension()] += 1;
    }
    let euler = per_dimension
        .iter()
        .enumerate()
        .map(|(d, n)| if d % 2 == 0 { *n as i64 } else { -(*n as i64) })
        .sum();
    CensusSection {
        total: cells.len(),
        first_type: cells.iter().filter(|c| !c.is_barred()).count(),
        second_type: cells.iter().filter(|c| c.is_barred()).count(),
        per_dimension,
        first_type_per_dimension: first,
        euler_characteristic: euler,
    }
}

/// The machine-readable record of a full run.
#[derive(Debug, Clone, Serialize)]
pub struct Dossier {
    pub schema: &'static str,
    pub seed: u64,
    pub degree_bound: usize,
    pub census: CensusSection,
    pub validation: ValidateSummary,
    pub homology: Option<HomologySummary>,
    pub expansions: Option<ExpansionReport>,
    pub homology_error: Option<String>,
    pub codimension_sweep: SweepReport,
    pub ok: bool,
}

pub fn build_dossier(config: &RunConfig) -> Result<Dossier, ReportError> {
    let loaded = load(config)?;
    let (validation, _) = run_validation(&loaded)?;
    let (homology, expansions, homology_error) = match validated(&loaded) {
        Ok(v) => {
            let h = homology_summary(&v, &loaded.dataset)?;
            let e = v.verify_expansion_file(&loaded.dataset.expansions, &loaded.dataset.kernel)?;
            (Some(h), Some(e), None)
        }
        Err(e) if e.exit_code() == EXIT_CHECK_FAILED => (None, None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let sweep = codimension_sweep(config.seed, config.degree_bound, DRAWS_PER_CELL, config.jobs)?;
    let ok = validation.ok
        && homology.as_ref().is_some_and(|h| h.ok)
        && expansions.as_ref().is_some_and(ExpansionReport::holds)
        && sweep.ok;
    Ok(Dossier {
        schema: SCHEMA,
        seed: config.seed,
        degree_bound: config.degree_bound,
        census: census_section(),
        validation,
        homology,
        expansions,
        homology_error,
        codimension_sweep: sweep,
        ok,
    })
}

fn dossier_text(d: &Dossier) -> String {
    let mut out = format!("{}\n", d.schema);
    let c = &d.census;
    out.push_str(&format!(
        "census: {} cells ({} first type, {} second type), per dimension {:?}\n",
        c.total, c.first_type, c.second_type, c.per_dimension
    ));
    out.push_str(&format!(
        "validation: {} ({} lint findings, {} errata entries)\n",
        if d.validation.ok { "passed" } else { "FAILED" },
        d.validation.lint.len(),
        d.validation.errata.len()
    ));
    if let Some(h) = &d.homology {
        out.push_str(&format!("betti numbers: {:?}\n", h.homology.betti));
        let held = h.relations.iter().filter(|r| r.holds).count();
        out.push_str(&format!("relations: {held}/{} hold\n", h.relations.len()));
    }
    if let Some(e) = &d.expansions {
        out.push_str(&format!("expansions: {}/{} match\n", e.matched, e.total));
        for r in e.mismatches() {
            out.push_str(&format!("  {} stated {:?}, recomputed {:?}\n", r.cell, r.stated, r.recomputed));
        }
    }
    if let Some(e) = &d.homology_error {
        out.push_str(&format!("homology not computed: {e}\n"));
    }
    let s = &d.codimension_sweep;
    let good = s.cells.iter().filter(|e| e.ok).count();
    out.push_str(&format!(
        "codimension sweep: {good}/{} cells certified, {} systems, degree bound {}\n",
        s.cells.len(),
        s.systems,
        s.degree_bound
    ));
    out.push_str(if d.ok { "all checks passed\n" } else { "some checks FAILED\n" });
    out
}

pub fn cmd_report(config: &RunConfig) -> Result<CommandReport, ReportError> {
    let dossier = build_dossier(config)?;
    Ok(CommandReport::new(dossier.ok, &dossier, dossier_text(&dossier)))
}

/// The data directory from an explicit flag or the environment.
pub fn resolve_data_dir(flag: Option<&Path>, env: Option<&str>) -> Option<PathBuf> {
    flag.map(Path::to_path_buf)
        .or_else(|| env.filter(|s| !s.is_empty()).map(PathBuf::from))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::shipped_file;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn write_data(dir: &Path, with_errata: bool) {
        for name in [
            "cells.txt",
            "boundary_d2.txt",
            "boundary_d3.txt",
            "boundary_d4.txt",
            "boundary_d5.txt",
            "boundary_d6.txt",
            "matrix_d2.txt",
            "matrix_d3.txt",
            "kernel_d2.txt",
            "expansions_d3.txt",
        ] {
            std::fs::write(dir.join(name), shipped_file(name).unwrap()).unwrap();
        }
        if with_errata {
            std::fs::write(dir.join(ERRATA_FILE), shipped_file(ERRATA_FILE).unwrap()).unwrap();
        }
    }

    #[test]
    fn validate_shipped() {
        let r = cmd_validate(&RunConfig::default()).unwrap();
        assert!(r.ok, "{}", r.text);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn validate_raw_fails_with_findings() {
        let config = RunConfig {
            errata: ErrataChoice::Off,
            ..Default::default()
        };
        let r = cmd_validate(&config).unwrap();
        assert!(!r.ok);
        assert_eq!(r.exit_code(), 1);
        assert!(r.text.contains("lint findings on transcribed data: 6"));
    }

    #[test]
    fn validate_directory_picks_up_errata() {
        let dir = tempfile::tempdir().unwrap();
        write_data(dir.path(), false);
        let mut config = RunConfig {
            data_dir: Some(dir.path().to_path_buf()),
            ..Default::default()
        };
        assert!(!cmd_validate(&config).unwrap().ok);
        write_data(dir.path(), true);
        assert!(cmd_validate(&config).unwrap().ok);
        config.errata = ErrataChoice::Off;
        assert!(!cmd_validate(&config).unwrap().ok);
    }

    #[test]
    fn empty_directory_is_an_environment_error() {
        let dir = tempfile::tempdir().unwrap();
        let config = RunConfig {
            data_dir: Some(dir.path().to_path_buf()),
            ..Default::default()
        };
        let err = cmd_validate(&config).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_ENVIRONMENT);
        assert!(err.to_string().contains("missing data file"));
    }

    #[test]
    fn homology_command() {
        let r = cmd_homology(&RunConfig::default()).unwrap();
        assert!(r.ok, "{}", r.text);
        assert!(r.text.contains("betti numbers:    [1, 1, 2,"));
        assert!(r.text.contains("H1 generator: bTH"));
        let raw = RunConfig {
            errata: ErrataChoice::Off,
            ..Default::default()
        };
        assert_eq!(cmd_homology(&raw).unwrap_err().exit_code(), EXIT_CHECK_FAILED);
    }

    #[test]
    fn codim_examples() {
        let config = RunConfig::default();
        let r = cmd_codim(&config, "V1+", &CodimParams::default()).unwrap();
        assert!(r.ok, "{}", r.text);
        assert!(r.json.contains("\"rank\": 4"));
        assert!(cmd_codim(&config, "NB", &CodimParams::default()).unwrap().ok);
        let params = CodimParams {
            points: None,
            moduli: Moduli {
                alpha: Some(q(0, 1)),
                ..Default::default()
            },
        };
        let err = cmd_codim(&config, "E+", &params).unwrap_err();
        assert!(err.to_string().contains("αβγ ≠ 0 violated"));
        assert_eq!(err.exit_code(), EXIT_ENVIRONMENT);
        assert!(matches!(
            cmd_codim(&config, "Q9", &CodimParams::default()),
            Err(ReportError::BadCell { .. })
        ));
    }

    #[test]
    fn codim_with_explicit_points() {
        let params = CodimParams {
            points: Some(vec![q(1, 2)]),
            moduli: Moduli::alpha(q(1, 1)),
        };
        let r = cmd_codim(&RunConfig::default(), "TH", &params).unwrap();
        assert!(r.text.contains("p1 = 1/2"));
        assert!(r.ok);
    }

    #[test]
    fn sweep_is_order_independent() {
        let serial = codimension_sweep(5, 12, 1, 1).unwrap();
        let parallel = codimension_sweep(5, 12, 1, 3).unwrap();
        assert_eq!(serial, parallel);
        assert_eq!(serial.families.len(), 50);
    }

    #[test]
    fn census_numbers() {
        let c = census_section();
        assert_eq!(c.total, 244);
        assert_eq!(c.first_type, 122);
        assert_eq!(c.first_type_per_dimension, [0, 1, 6, 23, 45, 37, 10]);
        assert_eq!(c.euler_characteristic, 0);
    }

    #[test]
    fn data_dir_resolution() {
        assert_eq!(resolve_data_dir(None, None), None);
        assert_eq!(resolve_data_dir(None, Some("")), None);
        assert_eq!(resolve_data_dir(None, Some("/x")), Some(PathBuf::from("/x")));
        assert_eq!(
            resolve_data_dir(Some(Path::new("/y")), Some("/x")),
            Some(PathBuf::from("/y"))
        );
    }
}
