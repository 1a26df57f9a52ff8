//! Runs any subset of the computations over catalog cases and assembles the
//! results into a JSON document and Markdown tables.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::catalog::{CatalogEntry, Pi1Label};
use crate::cohomology::{self, PicardReport};
use crate::geometry::{self, GeometryReport};
use crate::modular::{self, ModularReport, SuiteConfig};
use crate::normalizer::{self, L0Tag};
use crate::toric::{self, ToricReport};
use crate::golden;

pub const SCHEMA: &str = "cy3lab/1";

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Normalizer,
    Picard,
    Hodge,
    Pi1,
    Toric,
    Modular,
}

impl Task {
    pub const ALL: [Task; 6] = [Task::Normalizer, Task::Picard, Task::Hodge, Task::Pi1, Task::Toric, Task::Modular];

    pub fn name(self) -> &'static str {
        match self {
            Task::Normalizer => "normalizer",
            Task::Picard => "picard",
            Task::Hodge => "hodge",
            Task::Pi1 => "pi1",
            Task::Toric => "toric",
            Task::Modular => "modular",
        }
    }

    fn per_case(self) -> bool {
        !matches!(self, Task::Toric | Task::Modular)
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Task {
    type Err = ReportError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Task::ALL.into_iter().find(|t| t.name() == s.trim()).ok_or_else(|| ReportError::UnknownTask(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaseSelection {
    All,
    Labels(Vec<String>),
}

impl FromStr for CaseSelection {
    type Err = ReportError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == "all" {
            return Ok(CaseSelection::All);
        }
        let labels: Vec<String> = s.split(',').map(|l| l.trim().to_string()).filter(|l| !l.is_empty()).collect();
        if labels.is_empty() {
            return Err(ReportError::UnknownLabel(s.to_string()));
        }
        Ok(CaseSelection::Labels(labels))
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub cases: CaseSelection,
    pub tasks: BTreeSet<Task>,
    pub tol: f64,
    pub samples: usize,
    pub seed: u64,
    /// Bound on the entries of sampled `SL(2, Z)` matrices.
    pub entry_bound: i64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            cases: CaseSelection::All,
            tasks: Task::ALL.into_iter().collect(),
            tol: 1e-12,
            samples: 100,
            seed: 0,
            entry_bound: 10,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ReportError {
    #[error("unknown case label: {0}")]
    UnknownLabel(String),
    #[error("unknown task: {0}")]
    UnknownTask(String),
    #[error("picard requested for {0}, which is not rigid")]
    NotRigid(String),
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("samples must be at least 1")]
    NoSamples,
    #[error("case {case}: {message}")]
    Module { case: String, message: String },
}

impl ReportError {
    /// Errors caused by the configuration rather than by a computation.
    pub fn is_usage(&self) -> bool {
        !matches!(self, ReportError::Module { .. })
    }

    fn module(case: &str, e: impl fmt::Display) -> ReportError {
        ReportError::Module { case: case.to_string(), message: e.to_string() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalizerFragment {
    pub label: String,
    #[serde(rename = "Lorder")]
    pub l_order: usize,
    #[serde(rename = "L0order")]
    pub l0_order: usize,
    #[serde(rename = "L0tag")]
    pub l0_tag: String,
    #[serde(rename = "L0generators")]
    pub l0_generators: Vec<String>,
    #[serde(rename = "translationKernelOrder")]
    pub translation_kernel_order: usize,
    /// For the exceptional shape: whether a complement to `N` exists.
    #[serde(rename = "splitExtension", skip_serializing_if = "Option::is_none")]
    pub split_extension: Option<bool>,
    #[serde(rename = "expectedL0tag", skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(rename = "matchesTable1", skip_serializing_if = "Option::is_none")]
    pub matches: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PicardFragment {
    #[serde(flatten)]
    pub report: PicardReport,
    pub conclusion: String,
    pub torsion_check: bool,
    pub expected_rank: usize,
    pub matches_table2: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GeometryFragment {
    #[serde(flatten)]
    pub report: GeometryReport,
    pub expected_h11: u32,
    pub expected_h21: u32,
    pub expected_pi1: Pi1Label,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalizer: Option<NormalizerFragment>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub picard: Option<PicardFragment>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryFragment>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ToricChecks {
    pub triangulation_count: usize,
    pub charts_per_triangulation: Vec<usize>,
    pub hub: Option<usize>,
    pub hub_is_central: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ToricSection {
    #[serde(flatten)]
    pub report: ToricReport,
    pub checks: ToricChecks,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ModularThresholds {
    pub residual: f64,
    pub metric_rel_tol: f64,
    pub eta_i: f64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ModularSection {
    #[serde(flatten)]
    pub report: ModularReport,
    pub thresholds: ModularThresholds,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ConfigEcho {
    pub cases: Vec<String>,
    pub tasks: Vec<Task>,
    pub tol: f64,
    pub samples: usize,
    pub seed: u64,
    pub entry_bound: i64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub schema: &'static str,
    pub config: ConfigEcho,
    pub cases: Vec<CaseReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub toric: Option<ToricSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modular: Option<ModularSection>,
    pub mismatches: Vec<String>,
    pub all_matched: bool,
}

/// The catalog entries a selection refers to, in catalog order for `All`
/// and in the given order otherwise.
pub fn select<'a>(cases: &CaseSelection, catalog: &'a [CatalogEntry]) -> Result<Vec<&'a CatalogEntry>, ReportError> {
    match cases {
        CaseSelection::All => Ok(catalog.iter().collect()),
        CaseSelection::Labels(labels) => labels
            .iter()
            .map(|l| {
                catalog.iter().find(|e| e.label.to_string() == *l).ok_or_else(|| ReportError::UnknownLabel(l.clone()))
            })
            .collect(),
    }
}

fn validate(cfg: &RunConfig, entries: &[&CatalogEntry]) -> Result<(), ReportError> {
    if !(cfg.tol > 0.0) {
        return Err(ReportError::BadTolerance(cfg.tol));
    }
    if cfg.samples == 0 {
        return Err(ReportError::NoSamples);
    }
    if cfg.tasks.contains(&Task::Picard) {
        if let CaseSelection::Labels(_) = cfg.cases {
            if let Some(e) = entries.iter().find(|e| !e.is_rigid()) {
                return Err(ReportError::NotRigid(e.label.to_string()));
            }
        }
    }
    Ok(())
}

fn case_seed(seed: u64, entry: &CatalogEntry) -> u64 {
    seed ^ ((entry.label.rank as u64) << 40 | (entry.label.index as u64) << 20)
}

pub fn normalizer_fragment(entry: &CatalogEntry, l: &normalizer::LGroup) -> NormalizerFragment {
    let label = entry.label.to_string();
    let d = normalizer::describe_l0(l);
    let split_extension = (d.tag == L0Tag::Case41).then(|| !normalizer::case41_checks(&d.elements).non_split);
    let expected = golden::expected_tag(&label);
    let matches = expected.as_ref().map(|t| *t == d.tag && split_extension != Some(true));
    NormalizerFragment {
        label,
        l_order: l.order(),
        l0_order: d.order(),
        l0_tag: d.tag.to_string(),
        l0_generators: d.generators.iter().map(ToString::to_string).collect(),
        translation_kernel_order: d.translation_kernel.len(),
        split_extension,
        expected: expected.map(|t| if t == L0Tag::Case41 { format!("{t}, non-split") } else { t.to_string() }),
        matches,
    }
}

fn run_case(cfg: &RunConfig, entry: &CatalogEntry) -> Result<CaseReport, ReportError> {
    let label = entry.label.to_string();
    let wants = |t: Task| cfg.tasks.contains(&t);
    let picard_here = wants(Task::Picard) && entry.is_rigid();
    let mut report = CaseReport { label: label.clone(), normalizer: None, picard: None, geometry: None };
    if wants(Task::Normalizer) || picard_here {
        let l = normalizer::compute_l(&entry.group()).map_err(|e| ReportError::module(&label, e))?;
        if wants(Task::Normalizer) {
            report.normalizer = Some(normalizer_fragment(entry, &l));
        }
        if picard_here {
            let p = cohomology::picard_rank(&label, &l.l0()).map_err(|e| ReportError::module(&label, e))?;
            let expected_rank = golden::expected_rank(&label).expect("rigid cases have a published rank");
            report.picard = Some(PicardFragment {
                conclusion: p.conclusion(),
                torsion_check: p.torsion_free_above_three(),
                matches_table2: p.rank_q == expected_rank,
                expected_rank,
                report: p,
            });
        }
    }
    if wants(Task::Hodge) || wants(Task::Pi1) {
        let mut rng = ChaCha8Rng::seed_from_u64(case_seed(cfg.seed, entry));
        let g = geometry::analyze(entry, &mut rng).map_err(|e| ReportError::module(&label, e))?;
        report.geometry = Some(GeometryFragment {
            expected_h11: entry.expected_hodge.0,
            expected_h21: entry.expected_hodge.1,
            expected_pi1: entry.expected_pi1,
            report: g,
        });
    }
    Ok(report)
}

/// Runs `work` on every item with a small pool of threads; results keep the input order.
fn parallel_map<T: Sync, R: Send>(items: &[T], work: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(items.len().max(1));
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<R>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = work(&items[i]);
                slots.lock().unwrap()[i] = Some(r);
            });
        }
    });
    slots.into_inner().unwrap().into_iter().map(|r| r.expect("every slot is filled")).collect()
}

pub fn toric_section() -> Result<ToricSection, ReportError> {
    let report = toric::analyze().map_err(|e| ReportError::module("toric", e))?;
    let mut degree = vec![0usize; report.triangulations.len()];
    for &(a, b) in &report.flop_graph {
        degree[a] += 1;
        degree[b] += 1;
    }
    let hub = degree.iter().position(|&d| d + 1 == degree.len());
    let hub_is_central = hub.is_some_and(|h| report.triangulations[h].is_central);
    let charts_per_triangulation: Vec<usize> = report.triangulations.iter().map(|t| t.charts.len()).collect();
    let passed = report.triangulations.len() == golden::CREPANT_TRIANGULATIONS
        && charts_per_triangulation.iter().all(|&c| c == 4)
        && report.flop_graph.len() + 1 == degree.len()
        && hub_is_central;
    Ok(ToricSection {
        checks: ToricChecks {
            triangulation_count: report.triangulations.len(),
            charts_per_triangulation,
            hub,
            hub_is_central,
            passed,
        },
        report,
    })
}

/// Metric agreement required between the analytic and finite-difference forms.
pub const METRIC_REL_TOL: f64 = 1e-6;
/// Agreement of `η(i)` in double precision with the double-double oracle.
pub const ETA_I_TOL: f64 = 1e-12;

pub fn modular_section(cfg: &RunConfig) -> Result<ModularSection, ReportError> {
    let suite = SuiteConfig {
        samples: cfg.samples,
        entry_bound: cfg.entry_bound,
        tol: cfg.tol,
        metric_rel_tol: METRIC_REL_TOL,
        ..SuiteConfig::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let report = modular::run_suite(&suite, &mut rng).map_err(|e| ReportError::module("modular", e))?;
    let thresholds =
        ModularThresholds { residual: modular::residual_threshold(cfg.tol), metric_rel_tol: METRIC_REL_TOL, eta_i: ETA_I_TOL };
    let passed = modular_passes(&report, &thresholds);
    Ok(ModularSection { report, thresholds, passed })
}

pub fn modular_passes(r: &ModularReport, t: &ModularThresholds) -> bool {
    r.max_delta_residual < t.residual
        && r.max_section_residual < t.residual
        && r.max_potential_invariance_residual < t.residual
        && r.metric_checks.max_rel_error < t.metric_rel_tol
        && r.metric_checks.min_eigenvalue > 0.0
        && r.eta_i_oracle_error < t.eta_i
        && r.multiplier_orders.keys().all(|k| 24 % k == 0)
        && r.twelfth_power_signs.0 + r.twelfth_power_signs.1 == r.samples
        && r.min_log_abs_delta.is_finite()
}

fn collect_mismatches(cfg: &RunConfig, cases: &[CaseReport], toric: Option<&ToricSection>, modular: Option<&ModularSection>) -> Vec<String> {
    let mut out = Vec::new();
    for c in cases {
        if let Some(n) = &c.normalizer {
            if n.matches == Some(false) {
                let split = if n.split_extension == Some(true) { " (split)" } else { "" };
                out.push(format!("table1 {}: expected {}, computed {}{split}", c.label, n.expected.as_deref().unwrap_or("-"), n.l0_tag));
            }
        }
        if let Some(p) = &c.picard {
            if !p.matches_table2 {
                out.push(format!("table2 {}: expected rank {}, computed {}", c.label, p.expected_rank, p.report.rank_q));
            }
            if !p.torsion_check {
                out.push(format!(
                    "torsion {}: rank {} over Q, {} over F5, {} over F7",
                    c.label, p.report.rank_q, p.report.dim_f5, p.report.dim_f7
                ));
            }
        }
        if let Some(g) = &c.geometry {
            let r = &g.report;
            if cfg.tasks.contains(&Task::Hodge) && (r.h11, r.h21) != (g.expected_h11, g.expected_h21) {
                out.push(format!(
                    "table3 {}: expected hodge ({}, {}), computed ({}, {})",
                    c.label, g.expected_h11, g.expected_h21, r.h11, r.h21
                ));
            }
            if cfg.tasks.contains(&Task::Pi1) && r.pi1 != g.expected_pi1 {
                out.push(format!("table3 {}: expected pi1 {}, computed {}", c.label, g.expected_pi1, r.pi1));
            }
        }
    }
    if let Some(t) = toric {
        if !t.checks.passed {
            out.push(format!("toric: {:?}", t.checks));
        }
    }
    if let Some(m) = modular {
        if !m.passed {
            out.push("modular: a residual or metric check exceeded its threshold".to_string());
        }
    }
    out
}

pub fn run_report(cfg: &RunConfig, catalog: &[CatalogEntry]) -> Result<Report, ReportError> {
    let entries = select(&cfg.cases, catalog)?;
    validate(cfg, &entries)?;
    let cases: Vec<CaseReport> = if cfg.tasks.iter().any(|t| t.per_case()) {
        parallel_map(&entries, |e| run_case(cfg, e)).into_iter().collect::<Result<_, _>>()?
    } else {
        Vec::new()
    };
    let toric = cfg.tasks.contains(&Task::Toric).then(toric_section).transpose()?;
    let modular = cfg.tasks.contains(&Task::Modular).then(|| modular_section(cfg)).transpose()?;
    let mismatches = collect_mismatches(cfg, &cases, toric.as_ref(), modular.as_ref());
    Ok(Report {
        schema: SCHEMA,
        config: ConfigEcho {
            cases: entries.iter().map(|e| e.label.to_string()).collect(),
            tasks: cfg.tasks.iter().copied().collect(),
            tol: cfg.tol,
            samples: cfg.samples,
            seed: cfg.seed,
            entry_bound: cfg.entry_bound,
        },
        all_matched: mismatches.is_empty(),
        cases,
        toric,
        modular,
        mismatches,
    })
}

/// Rounds every float to ten significant digits so that output is stable.
fn canonical_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap();
            let rounded: f64 = format!("{x:.9e}").parse().unwrap();
            if let Some(m) = serde_json::Number::from_f64(rounded) {
                *n = m;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(canonical_floats),
        Value::Object(map) => map.values_mut().for_each(canonical_floats),
        _ => {}
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        canonical_floats(&mut v);
        serde_json::to_string_pretty(&v).expect("value serializes") + "\n"
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::from("# cy3lab report\n");
        let normalizers: Vec<&NormalizerFragment> = self.cases.iter().filter_map(|c| c.normalizer.as_ref()).collect();
        if !normalizers.is_empty() {
            out += "\n## Table 1: normalizer images\n\n";
            out += &table1_markdown(&normalizers);
        }
        let picards: Vec<&PicardFragment> = self.cases.iter().filter_map(|c| c.picard.as_ref()).collect();
        if !picards.is_empty() {
            out += "\n## Table 2: Picard ranks\n\n";
            out += &table2_markdown(&picards);
        }
        let geometries: Vec<&GeometryFragment> = self.cases.iter().filter_map(|c| c.geometry.as_ref()).collect();
        if !geometries.is_empty() {
            out += "\n## Table 3: Hodge numbers and fundamental groups\n\n";
            out += &table3_markdown(&geometries);
        }
        if let Some(t) = &self.toric {
            out += "\n## Toric resolutions of abc = d^2\n\n";
            out += &toric_markdown(t);
        }
        if let Some(m) = &self.modular {
            out += "\n## Modular checks\n\n";
            out += &modular_markdown(m);
        }
        out += &format!("\n**{}**\n", if self.all_matched { "all comparisons match" } else { "mismatches found" });
        for m in &self.mismatches {
            let _ = writeln!(out, "- {m}");
        }
        out
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn table1_markdown(rows: &[&NormalizerFragment]) -> String {
    let mut out = String::from("| Case | \\|L\\| | \\|L0\\| | L0 | expected | match |\n|---|---|---|---|---|---|\n");
    for n in rows {
        let computed = match n.split_extension {
            Some(true) => format!("{} (split)", n.l0_tag),
            Some(false) => format!("{} (non-split)", n.l0_tag),
            None => n.l0_tag.clone(),
        };
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} |",
            n.label,
            n.l_order,
            n.l0_order,
            computed,
            n.expected.as_deref().unwrap_or("-"),
            n.matches.map_or("-", yes_no)
        );
    }
    out
}

pub fn table2_markdown(rows: &[&PicardFragment]) -> String {
    let mut out = String::from("| Case | rank over Q | dim over F5 | dim over F7 | expected | match |\n|---|---|---|---|---|---|\n");
    for p in rows {
        let r = &p.report;
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} |",
            r.label,
            r.rank_q,
            r.dim_f5,
            r.dim_f7,
            p.expected_rank,
            yes_no(p.matches_table2)
        );
    }
    out
}

pub fn table3_markdown(rows: &[&GeometryFragment]) -> String {
    let mut out = String::from("| Case | h11 | h21 | pi1 | expected | match |\n|---|---|---|---|---|---|\n");
    for g in rows {
        let r = &g.report;
        let matches = (r.h11, r.h21, r.pi1) == (g.expected_h11, g.expected_h21, g.expected_pi1);
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | ({}, {}) {} | {} |",
            r.label,
            r.h11,
            r.h21,
            r.pi1,
            g.expected_h11,
            g.expected_h21,
            g.expected_pi1,
            yes_no(matches)
        );
    }
    out
}

fn toric_markdown(t: &ToricSection) -> String {
    let mut out = String::from("| Triangulation | central | charts | chart generators |\n|---|---|---|---|\n");
    for (i, tr) in t.report.triangulations.iter().enumerate() {
        let gens: Vec<String> = tr.charts.iter().map(|c| format!("[{}]", c.rendered().join(", "))).collect();
        let _ = writeln!(out, "| {} | {} | {} | {} |", i, yes_no(tr.is_central), tr.charts.len(), gens.join(" "));
    }
    let edges: Vec<String> = t.report.flop_graph.iter().map(|(a, b)| format!("{a}-{b}")).collect();
    let _ = writeln!(out, "\nFlop graph edges: {}; star with central hub: {}", edges.join(", "), yes_no(t.checks.passed));
    out
}

fn modular_markdown(m: &ModularSection) -> String {
    let r = &m.report;
    let t = &m.thresholds;
    let mut out = String::from("| Check | value | threshold |\n|---|---|---|\n");
    let rows = [
        ("weight-12 residual", r.max_delta_residual, t.residual),
        ("section residual", r.max_section_residual, t.residual),
        ("potential invariance", r.max_potential_invariance_residual, t.residual),
        ("metric relative error", r.metric_checks.max_rel_error, t.metric_rel_tol),
        ("eta(i) oracle error", r.eta_i_oracle_error, t.eta_i),
    ];
    for (name, v, thr) in rows {
        let _ = writeln!(out, "| {name} | {v:.3e} | {thr:.1e} |");
    }
    let orders: Vec<String> = r.multiplier_orders.iter().map(|(k, n)| format!("{k}: {n}")).collect();
    let _ = writeln!(
        out,
        "\nSamples: {}, precision: {:?}, minimum eigenvalue {:.4e}, multiplier orders {{{}}}, eps^12 = +1 in {} and -1 in {} samples.",
        r.samples,
        r.precision,
        r.metric_checks.min_eigenvalue,
        orders.join(", "),
        r.twelfth_power_signs.0,
        r.twelfth_power_signs.1
    );
    out
}
