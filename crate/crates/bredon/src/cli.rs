//! Command-line interface: JSON input documents, dispatch to the four
//! computation modes, and report emission in text or JSON.
//!
//! Exit codes: 0 success, 2 input or validation error, 3 cross-route
//! disagreement, 4 theorem-verification mismatch.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cog::{cd_from_omega, AcyclicityRow, CogError, SimpleComplexOfGroups};
use crate::coxeter::{graph_product_to_coxeter, CoxeterError, CoxeterMatrix};
use crate::pgroup::{PGroupError, PermGroup, Permutation, TotalOrder};
use crate::poset::{FinitePoset, PosetError};
use crate::report::{CheckReport, ComparisonReport, DimensionTable};
use crate::DEFAULT_SIZE_CAP;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Group(#[from] PGroupError),
    #[error(transparent)]
    Cog(#[from] CogError),
    #[error("Coxeter matrix entry {value} at ({row}, {col}) is out of range")]
    EntryOutOfRange { row: usize, col: usize, value: u64 },
    #[error("mode {mode:?} is not supported by `{command}`")]
    UnsupportedMode { mode: String, command: String },
}

/// One parsed input file. The `mode` tag selects the payload; infinity in
/// Coxeter matrices is written as 0, permutations as 0-indexed image
/// arrays, posets as elements plus generating relations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum InputDocument {
    Coxeter {
        generators: Vec<String>,
        matrix: Vec<Vec<u64>>,
    },
    GraphProduct {
        vertices: Vec<GraphVertex>,
        edges: Vec<(String, String)>,
    },
    PosetOmega {
        elements: Vec<String>,
        relations: Vec<(String, String)>,
        classes: Vec<Vec<String>>,
    },
    FiniteDevelopment {
        degree: usize,
        group: Vec<Vec<u32>>,
        elements: Vec<String>,
        relations: Vec<(String, String)>,
        locals: BTreeMap<String, Vec<Vec<u32>>>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphVertex {
    pub name: String,
    pub order: u64,
}

impl InputDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn mode_name(&self) -> &'static str {
        match self {
            InputDocument::Coxeter { .. } => "coxeter",
            InputDocument::GraphProduct { .. } => "graph_product",
            InputDocument::PosetOmega { .. } => "poset_omega",
            InputDocument::FiniteDevelopment { .. } => "finite_development",
        }
    }
}

/// Canonical serialization; parsing then re-emitting is idempotent.
pub fn canonical_json(doc: &InputDocument) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("serializable");
    out.push('\n');
    out
}

fn coxeter_from_document(
    generators: &[String],
    matrix: &[Vec<u64>],
) -> Result<CoxeterMatrix, CliError> {
    let mut m = Vec::with_capacity(matrix.len());
    for (i, row) in matrix.iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (j, &v) in row.iter().enumerate() {
            if v == 0 {
                out.push(None); // documented sentinel for infinity
            } else {
                let small = u32::try_from(v)
                    .map_err(|_| CliError::EntryOutOfRange { row: i, col: j, value: v })?;
                out.push(Some(small));
            }
        }
        m.push(out);
    }
    Ok(CoxeterMatrix::new(generators.to_vec(), m)?)
}

fn scog_from_document(
    degree: usize,
    group: &[Vec<u32>],
    elements: &[String],
    relations: &[(String, String)],
    locals: &BTreeMap<String, Vec<Vec<u32>>>,
    size_cap: usize,
) -> Result<SimpleComplexOfGroups, CliError> {
    let perms = |images: &[Vec<u32>]| -> Result<Vec<Permutation>, CliError> {
        images
            .iter()
            .map(|im| Ok(Permutation::from_images(im.clone())?))
            .collect()
    };
    let ambient = PermGroup::new(degree, perms(group)?)?;
    let mut named = Vec::with_capacity(locals.len());
    for (name, gens) in locals {
        named.push((name.clone(), PermGroup::new(degree, perms(gens)?)?));
    }
    let q = FinitePoset::new(elements.to_vec(), relations)?;
    Ok(SimpleComplexOfGroups::new(q, ambient, named, size_cap)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    /// Direct-sum decomposition of the fixed pair over the transversal.
    Decomposition,
    /// Orbit-category cochain complex against the fixed pair.
    Bredon,
    /// Cellwise overlap identities and the transport chain-map identity.
    Lemma34,
    /// Vanishing reduced cohomology of fixed subcomplexes.
    Acyclic,
}

impl Theorem {
    fn name(&self) -> &'static str {
        match self {
            Theorem::Decomposition => "decomposition",
            Theorem::Bredon => "bredon",
            Theorem::Lemma34 => "lemma34",
            Theorem::Acyclic => "acyclic",
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "bredon", version, about = "Exact Bredon cohomological dimension for proper actions at finite scale")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report rendering.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Cap on parallel per-class workers (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Group-enumeration size cap (overrides BREDON_SIZE_CAP).
    #[arg(long, global = true)]
    size_cap: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bredon cohomological dimension of the input.
    Cd {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Virtual cohomological dimension via both formulas, with agreement check.
    Vcd {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Brute-force verification of one theorem on a finite development.
    Verify {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        theorem: Theorem,
    },
    /// Build the development and summarize it.
    Develop {
        #[arg(short, long)]
        input: PathBuf,
        /// Include the full face list in the report.
        #[arg(long)]
        dump: bool,
    },
}

/// Everything a command reports. Optional sections are omitted from JSON
/// when absent; the text renderer prints the same numbers.
#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub headline: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<DimensionTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub link_route: Option<DimensionTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub building_route: Option<DimensionTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub routes_agree: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparisons: Option<Vec<ComparisonReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<NamedCheck>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub acyclicity: Option<Vec<AcyclicityRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub development: Option<DevelopmentSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub all_passed: Option<bool>,
    pub elapsed_ms: u128,
}

#[derive(Debug, Serialize)]
pub struct NamedCheck {
    pub label: String,
    #[serde(flatten)]
    pub check: CheckReport,
}

#[derive(Debug, Serialize)]
pub struct DevelopmentSummary {
    pub vertex_count: usize,
    pub face_counts: Vec<usize>,
    pub connected_components: usize,
    pub orbits: Vec<OrbitSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Serialize)]
pub struct OrbitSummary {
    pub representative: String,
    pub base_element: String,
    pub size: usize,
    pub stabilizer_order: usize,
}

impl Report {
    fn new(command: &str, mode: &str) -> Report {
        Report {
            schema_version: 1,
            command: command.to_string(),
            mode: mode.to_string(),
            headline: None,
            table: None,
            link_route: None,
            building_route: None,
            routes_agree: None,
            theorem: None,
            comparisons: None,
            checks: None,
            acyclicity: None,
            development: None,
            all_passed: None,
            elapsed_ms: 0,
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {} (mode {})\n", self.command, self.mode));
        if let Some(t) = &self.theorem {
            out.push_str(&format!("theorem: {t}\n"));
        }
        if let Some(h) = self.headline {
            out.push_str(&format!("dimension: {h}\n"));
        }
        if let Some(t) = &self.table {
            out.push_str(&t.render_text());
        }
        if let Some(t) = &self.link_route {
            out.push_str("link route:\n");
            out.push_str(&t.render_text());
        }
        if let Some(t) = &self.building_route {
            out.push_str("building route:\n");
            out.push_str(&t.render_text());
        }
        if let Some(a) = self.routes_agree {
            out.push_str(&format!("routes agree: {a}\n"));
        }
        if let Some(cs) = &self.comparisons {
            for c in cs {
                out.push_str(&c.render_text());
            }
        }
        if let Some(cs) = &self.checks {
            for c in cs {
                out.push_str(&format!(
                    "{}: {}\n",
                    c.label,
                    if c.check.passed { "pass" } else { "FAIL" }
                ));
                for f in &c.check.failures {
                    out.push_str(&format!("  {f}\n"));
                }
            }
        }
        if let Some(rows) = &self.acyclicity {
            for r in rows {
                if r.acyclic {
                    out.push_str(&format!("fixed complex of {}: acyclic\n", r.label));
                } else {
                    let degrees: Vec<String> = r
                        .nonzero
                        .iter()
                        .map(|(n, g)| format!("H^{n} = {g}"))
                        .collect();
                    out.push_str(&format!(
                        "fixed complex of {}: NOT acyclic ({})\n",
                        r.label,
                        degrees.join(", ")
                    ));
                }
            }
        }
        if let Some(d) = &self.development {
            out.push_str(&format!("vertices: {}\n", d.vertex_count));
            out.push_str(&format!("face counts by dimension: {:?}\n", d.face_counts));
            out.push_str(&format!("connected components: {}\n", d.connected_components));
            for o in &d.orbits {
                out.push_str(&format!(
                    "orbit of {} (over {}): {} cells, stabilizer order {}\n",
                    o.representative, o.base_element, o.size, o.stabilizer_order
                ));
            }
            if let Some(faces) = &d.faces {
                out.push_str("faces:\n");
                for f in faces {
                    out.push_str(&format!("  {}\n", f.join(" < ")));
                }
            }
        }
        if let Some(p) = self.all_passed {
            out.push_str(&format!("all passed: {p}\n"));
        }
        out.push_str(&format!("elapsed: {} ms\n", self.elapsed_ms));
        out
    }
}

fn effective_size_cap(flag: Option<usize>) -> usize {
    if let Some(cap) = flag {
        return cap;
    }
    if let Ok(value) = std::env::var("BREDON_SIZE_CAP") {
        if let Ok(cap) = value.parse::<usize>() {
            return cap;
        }
    }
    DEFAULT_SIZE_CAP
}

fn read_document(path: &PathBuf) -> Result<InputDocument, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    InputDocument::parse(&text)
}

/// `cd` for any mode: the dimension table from the mode's formula.
pub fn run_cd(doc: &InputDocument, size_cap: usize) -> Result<Report, CliError> {
    let mut report = Report::new("cd", doc.mode_name());
    let table = match doc {
        InputDocument::Coxeter { generators, matrix } => {
            coxeter_from_document(generators, matrix)?.cd_building_formula()
        }
        InputDocument::GraphProduct { vertices, edges } => {
            let pairs: Vec<(String, u64)> =
                vertices.iter().map(|v| (v.name.clone(), v.order)).collect();
            graph_product_to_coxeter(&pairs, edges)?.cd_building_formula()
        }
        InputDocument::PosetOmega { elements, relations, classes } => {
            let q = FinitePoset::new(elements.clone(), relations)?;
            cd_from_omega(&q, classes)?
        }
        InputDocument::FiniteDevelopment { degree, group, elements, relations, locals } => {
            let scog =
                scog_from_document(*degree, group, elements, relations, locals, size_cap)?;
            let classes = scog.omega_partition()?;
            cd_from_omega(scog.q(), &classes)?
        }
    };
    report.headline = Some(table.dimension);
    report.table = Some(table);
    Ok(report)
}

/// `vcd` for Coxeter-like modes: both formulas plus the agreement flag.
pub fn run_vcd(doc: &InputDocument) -> Result<(Report, bool), CliError> {
    let matrix = match doc {
        InputDocument::Coxeter { generators, matrix } => {
            coxeter_from_document(generators, matrix)?
        }
        InputDocument::GraphProduct { vertices, edges } => {
            let pairs: Vec<(String, u64)> =
                vertices.iter().map(|v| (v.name.clone(), v.order)).collect();
            graph_product_to_coxeter(&pairs, edges)?
        }
        other => {
            return Err(CliError::UnsupportedMode {
                mode: other.mode_name().to_string(),
                command: "vcd".to_string(),
            })
        }
    };
    let link = matrix.vcd_link_formula();
    let building = matrix.cd_building_formula();
    let agree = link == building;
    let mut report = Report::new("vcd", doc.mode_name());
    report.headline = Some(link.dimension);
    report.routes_agree = Some(agree);
    report.link_route = Some(link);
    report.building_route = Some(building);
    Ok((report, agree))
}

/// `verify` on a finite development; returns the report and whether every
/// check passed.
pub fn run_verify(
    doc: &InputDocument,
    theorem: Theorem,
    size_cap: usize,
) -> Result<(Report, bool), CliError> {
    let InputDocument::FiniteDevelopment { degree, group, elements, relations, locals } = doc
    else {
        return Err(CliError::UnsupportedMode {
            mode: doc.mode_name().to_string(),
            command: "verify".to_string(),
        });
    };
    let scog = scog_from_document(*degree, group, elements, relations, locals, size_cap)?;
    let dev = scog.develop(&TotalOrder::lex())?;
    let mut report = Report::new("verify", doc.mode_name());
    report.theorem = Some(theorem.name().to_string());
    let passed;
    match theorem {
        Theorem::Decomposition => {
            let comparisons: Vec<ComparisonReport> =
                (0..scog.q().len()).map(|j| dev.verify_decomposition(j)).collect();
            passed = comparisons.iter().all(|c| c.passed());
            report.comparisons = Some(comparisons);
        }
        Theorem::Bredon => {
            let comparisons: Vec<ComparisonReport> =
                (0..scog.q().len()).map(|j| dev.bredon_comparison(j)).collect();
            passed = comparisons.iter().all(|c| c.passed());
            report.comparisons = Some(comparisons);
        }
        Theorem::Lemma34 => {
            let mut checks = Vec::new();
            for j in 0..scog.q().len() {
                let mut check = CheckReport::pass();
                for member in &dev.l_set(j).members {
                    check.merge(dev.overlap_identities(j, &member.g));
                }
                check.merge(dev.transport_chain_map(j));
                checks.push(NamedCheck { label: scog.q().name(j).to_string(), check });
            }
            passed = checks.iter().all(|c| c.check.passed);
            report.checks = Some(checks);
        }
        Theorem::Acyclic => {
            let rows = dev.check_acyclicity();
            passed = rows.iter().all(|r| r.acyclic);
            report.acyclicity = Some(rows);
        }
    }
    report.all_passed = Some(passed);
    Ok((report, passed))
}

/// `develop`: build the development and summarize counts, components, and
/// cell orbits with their stabilizer orders.
pub fn run_develop(
    doc: &InputDocument,
    dump: bool,
    size_cap: usize,
) -> Result<Report, CliError> {
    let InputDocument::FiniteDevelopment { degree, group, elements, relations, locals } = doc
    else {
        return Err(CliError::UnsupportedMode {
            mode: doc.mode_name().to_string(),
            command: "develop".to_string(),
        });
    };
    let scog = scog_from_document(*degree, group, elements, relations, locals, size_cap)?;
    let dev = scog.develop(&TotalOrder::lex())?;
    let orbits = dev
        .vertex_orbits()
        .into_iter()
        .map(|orbit| {
            let rep = orbit[0];
            OrbitSummary {
                representative: dev.vertex_name(rep).to_string(),
                base_element: scog.q().name(dev.vertex_q_idx(rep)).to_string(),
                size: orbit.len(),
                stabilizer_order: dev
                    .vertex_stabilizer(rep)
                    .order(size_cap)
                    .expect("enumerated in develop"),
            }
        })
        .collect();
    let faces = dump.then(|| {
        dev.complex()
            .faces()
            .map(|f| dev.complex().face_names(f))
            .collect()
    });
    let mut report = Report::new("develop", doc.mode_name());
    report.development = Some(DevelopmentSummary {
        vertex_count: dev.vertex_count(),
        face_counts: dev.complex().face_counts(),
        connected_components: dev.complex().connected_components(),
        orbits,
        faces,
    });
    Ok(report)
}

fn emit(report: &Report, format: Format) {
    match format {
        Format::Text => print!("{}", report.render_text()),
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(report).expect("serializable"))
        }
    }
}

fn emit_error(err: &CliError, format: Format) {
    match format {
        Format::Text => eprintln!("error: {err}"),
        Format::Json => println!(
            "{}",
            serde_json::json!({
                "schema_version": 1,
                "error": err.to_string(),
            })
        ),
    }
}

fn execute(cli: Cli) -> Result<(Report, i32), CliError> {
    if let Some(jobs) = cli.jobs {
        // Ignore failure: the global pool may already exist (e.g. tests).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let size_cap = effective_size_cap(cli.size_cap);
    let started = Instant::now();
    let (mut report, code) = match &cli.command {
        Command::Cd { input } => (run_cd(&read_document(input)?, size_cap)?, 0),
        Command::Vcd { input } => {
            let (report, agree) = run_vcd(&read_document(input)?)?;
            (report, if agree { 0 } else { 3 })
        }
        Command::Verify { input, theorem } => {
            let (report, passed) = run_verify(&read_document(input)?, *theorem, size_cap)?;
            (report, if passed { 0 } else { 4 })
        }
        Command::Develop { input, dump } => {
            (run_develop(&read_document(input)?, *dump, size_cap)?, 0)
        }
    };
    report.elapsed_ms = started.elapsed().as_millis();
    Ok((report, code))
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    let format = cli.format;
    match execute(cli) {
        Ok((report, code)) => {
            emit(&report, format);
            code
        }
        Err(err) => {
            emit_error(&err, format);
            2
        }
    }
}
