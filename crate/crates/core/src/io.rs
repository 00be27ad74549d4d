//! Input parsing, batch classification and report serialization.

use std::path::{Path, PathBuf};
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::duality::{build_reflexive, DualPair, HeightFunction, ReflexivePolytope};
use crate::error::{Error, Result};
use crate::fixtures::Fixture;
use crate::lattice::{fmt_rat, LatticeVector, Rat};
use crate::screen::{classify, ClassifyOptions, StructuralVerdict};
use crate::singular::{
    chart_labels, connectivity, pushforward_residual, smst_hypothesis_holds,
    smst_projection_convexity_test, DiscretePotential, HypothesisPolicy,
};
use crate::transport::PivotRule;

pub const SCHEMA_VERSION: u32 = 1;

pub(crate) fn ser_rat<S: Serializer>(q: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rat(q))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Fixture,
    File,
}

/// One polytope to classify: vertices and optional non-default heights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeInput {
    pub id: String,
    pub source: Source,
    pub vertices: Vec<Vec<i64>>,
    pub heights: Option<Vec<(Vec<i64>, i64)>>,
}

impl PolytopeInput {
    pub fn from_fixture(f: &Fixture) -> Self {
        PolytopeInput {
            id: f.id.to_string(),
            source: Source::Fixture,
            vertices: f.vertices.clone(),
            heights: (!f.heights.is_empty()).then(|| f.heights.clone()),
        }
    }

    pub fn dim(&self) -> usize {
        self.vertices.first().map_or(0, Vec::len)
    }

    pub fn pair(&self) -> Result<DualPair> {
        let vs: Vec<LatticeVector> = self
            .vertices
            .iter()
            .map(|v| LatticeVector::from_i64(v))
            .collect();
        let p = build_reflexive(&vs)?;
        let h = match &self.heights {
            None => HeightFunction::trivial(&p),
            Some(hs) => HeightFunction::with_values(
                &p,
                hs.iter()
                    .map(|(m, v)| (LatticeVector::from_i64(m), BigInt::from(*v))),
            )?,
        };
        DualPair::new(p, h)
    }
}

fn tokens(line: &str) -> impl Iterator<Item = &str> {
    line.split_whitespace()
}

fn parse_int(tok: &str, line: usize) -> Result<i64> {
    tok.parse::<i64>()
        .map_err(|_| Error::parse(line, format!("expected an integer, found {tok:?}")))
}

/// Parses vertex blocks. Each block starts with a header `R C`; further
/// header tokens (as in PALP output) are ignored. If `R < C` the next `R`
/// rows are coordinates and the columns are vertices, otherwise the rows
/// are vertices. A `# id: NAME` line names the following block.
pub fn parse_vertices(text: &str) -> Result<Vec<PolytopeInput>> {
    let lines: Vec<&str> = text.lines().collect();
    let mut out = Vec::new();
    let mut pending_id: Option<String> = None;
    let mut i = 0;
    while i < lines.len() {
        let line = lines[i].trim();
        let lineno = i + 1;
        i += 1;
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(name) = rest.trim().strip_prefix("id:") {
                pending_id = Some(name.trim().to_string());
            }
            continue;
        }
        let mut head = tokens(line);
        let r = head
            .next()
            .ok_or_else(|| Error::parse(lineno, "missing block header"))
            .and_then(|t| parse_int(t, lineno))?;
        let c = head
            .next()
            .ok_or_else(|| Error::parse(lineno, "block header needs two integers"))
            .and_then(|t| parse_int(t, lineno))?;
        if r <= 0 || c <= 0 {
            return Err(Error::parse(lineno, "block dimensions must be positive"));
        }
        let (r, c) = (r as usize, c as usize);
        let mut rows = Vec::with_capacity(r);
        while rows.len() < r {
            let Some(raw) = lines.get(i) else {
                return Err(Error::parse(
                    i,
                    format!("block ends after {} of {r} rows", rows.len()),
                ));
            };
            let rowno = i + 1;
            i += 1;
            let raw = raw.trim();
            if raw.is_empty() || raw.starts_with('#') {
                continue;
            }
            let row = tokens(raw)
                .map(|t| parse_int(t, rowno))
                .collect::<Result<Vec<_>>>()?;
            if row.len() != c {
                return Err(Error::parse(
                    rowno,
                    format!("expected {c} entries, found {}", row.len()),
                ));
            }
            rows.push(row);
        }
        let vertices = if r < c {
            (0..c)
                .map(|j| rows.iter().map(|row| row[j]).collect())
                .collect()
        } else {
            rows
        };
        let id = pending_id
            .take()
            .unwrap_or_else(|| format!("block-{:04}", out.len() + 1));
        out.push(PolytopeInput {
            id,
            source: Source::File,
            vertices,
            heights: None,
        });
    }
    Ok(out)
}

pub fn parse_vertex_file(path: &Path) -> Result<Vec<PolytopeInput>> {
    parse_vertices(&std::fs::read_to_string(path)?)
}

/// Parses lines `c_1 ... c_{d+1} h`; unlisted points keep their `h0` value.
pub fn parse_heights(text: &str, polytope: &ReflexivePolytope) -> Result<Vec<(Vec<i64>, i64)>> {
    let dim = polytope.dim;
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let lineno = k + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let vals = tokens(line)
            .map(|t| parse_int(t, lineno))
            .collect::<Result<Vec<_>>>()?;
        if vals.len() != dim + 1 {
            return Err(Error::parse(
                lineno,
                format!("expected {} integers, found {}", dim + 1, vals.len()),
            ));
        }
        let m = vals[..dim].to_vec();
        let h = vals[dim];
        let lm = LatticeVector::from_i64(&m);
        if !polytope.is_lattice_point(&lm) {
            return Err(Error::parse(
                lineno,
                format!("{lm} is not a lattice point of the polytope"),
            ));
        }
        if lm.is_zero() && h != 0 {
            return Err(Error::parse(lineno, "h(0) must be 0"));
        }
        if !lm.is_zero() && h <= 0 {
            return Err(Error::parse(lineno, format!("h{lm} must be positive")));
        }
        out.push((m, h));
    }
    Ok(out)
}

pub fn parse_height_file(path: &Path, polytope: &ReflexivePolytope) -> Result<HeightFunction> {
    let values = parse_heights(&std::fs::read_to_string(path)?, polytope)?;
    HeightFunction::with_values(
        polytope,
        values
            .into_iter()
            .map(|(m, h)| (LatticeVector::from_i64(&m), BigInt::from(h))),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    /// Keep only polytopes of this ambient dimension.
    pub dim: Option<usize>,
    /// Refinement level of the transport certificate.
    pub level: u32,
    /// Mesh resolution of the singular diagnostics; a power of two.
    pub mesh: usize,
    /// Probe resolution of the pushforward residual.
    pub probes: usize,
    pub pivot: PivotRule,
    pub transport: bool,
    pub singular: bool,
    pub format: Format,
    /// Worker threads; 0 uses every core.
    pub workers: usize,
    pub seed: u64,
    /// Record wall-clock times; off keeps reports byte-stable.
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            inputs: Vec::new(),
            dim: None,
            level: 1,
            mesh: 8,
            probes: 16,
            pivot: PivotRule::Bland,
            transport: false,
            singular: false,
            format: Format::Json,
            workers: 0,
            seed: 0,
            timing: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.mesh.is_power_of_two() {
            return Err(Error::domain("mesh resolution must be a power of two"));
        }
        if self.probes == 0 {
            return Err(Error::domain("probe resolution must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub label: String,
    pub family: String,
    pub relation: String,
    pub ratio: String,
    pub raw: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransportRecord {
    pub level: u32,
    pub restricted_feasible: bool,
    pub stable: bool,
    pub gap: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularRecord {
    /// `None` when the restricted problem has no solution to probe.
    pub cells: Option<usize>,
    pub singular_cells: Option<usize>,
    pub components: Option<usize>,
    pub pushforward_facet_tv: Option<String>,
    pub smst_failures: Option<usize>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeRecord {
    pub id: String,
    pub source: Source,
    pub dim: usize,
    pub vertices: Vec<Vec<i64>>,
    pub heights: Option<Vec<(Vec<i64>, i64)>>,
    pub n_vertices: usize,
    pub n_lattice_points: Option<usize>,
    pub verdict: Option<String>,
    pub unstable: Option<bool>,
    pub sss: Option<bool>,
    pub li: Option<bool>,
    pub max_violation_ratio: Option<String>,
    pub witnesses: Vec<WitnessRecord>,
    pub transport: Option<TransportRecord>,
    pub singular: Option<SingularRecord>,
    pub summary: Option<String>,
    pub error: Option<String>,
    pub wall_ms: Option<u64>,
}

impl PolytopeRecord {
    pub fn discrete_stable(&self) -> Option<bool> {
        self.transport.as_ref().map(|t| t.stable)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Aggregates {
    pub total: usize,
    pub strictly_semistable: usize,
    pub unstable: usize,
    pub li_admissible: usize,
    pub sss_and_li: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub run_config: RunConfig,
    pub records: Vec<PolytopeRecord>,
    pub aggregates: Aggregates,
}

fn verdict_name(v: StructuralVerdict) -> &'static str {
    match v {
        StructuralVerdict::Unstable => "unstable",
        StructuralVerdict::StrictlySemistable => "strictly_semistable",
        StructuralVerdict::Pass => "pass",
    }
}

fn singular_record(pair: &DualPair, config: &RunConfig) -> Result<SingularRecord> {
    let level_b = config.mesh.trailing_zeros();
    let mut rec = SingularRecord {
        cells: None,
        singular_cells: None,
        components: None,
        pushforward_facet_tv: None,
        smst_failures: None,
        note: None,
    };
    match DiscretePotential::for_pair(pair, config.level, level_b) {
        Err(Error::HypothesisNotSatisfied(msg)) => rec.note = Some(msg),
        Err(e) => return Err(e),
        Ok(pot) => {
            let sm = chart_labels(pair, &pot)?;
            rec.cells = Some(sm.labels.len());
            rec.singular_cells = Some(sm.singular_cells().len());
            rec.components = Some(connectivity(&sm).count);
            let r = pushforward_residual(pair, &pot, config.probes)?;
            rec.pushforward_facet_tv = Some(fmt_rat(&r.facet_tv));
        }
    }
    if smst_hypothesis_holds(pair) {
        let v = &pair.primal.vertices[0];
        let t =
            smst_projection_convexity_test(pair, v, 200, config.seed, HypothesisPolicy::Require)?;
        rec.smst_failures = Some(t.failures);
    }
    Ok(rec)
}

fn classify_one(input: &PolytopeInput, config: &RunConfig) -> PolytopeRecord {
    let start = Instant::now();
    let mut rec = PolytopeRecord {
        id: input.id.clone(),
        source: input.source,
        dim: input.dim(),
        vertices: input.vertices.clone(),
        heights: input.heights.clone(),
        n_vertices: input.vertices.len(),
        n_lattice_points: None,
        verdict: None,
        unstable: None,
        sss: None,
        li: None,
        max_violation_ratio: None,
        witnesses: Vec::new(),
        transport: None,
        singular: None,
        summary: None,
        error: None,
        wall_ms: None,
    };
    let outcome = (|| -> Result<()> {
        let pair = input.pair()?;
        rec.n_vertices = pair.primal.vertices.len();
        rec.n_lattice_points = Some(pair.primal.lattice_points.len());
        let options = ClassifyOptions {
            transport_level: config.transport.then_some(config.level),
            pivot: config.pivot,
        };
        let report = classify(&pair, &options)?;
        rec.verdict = Some(verdict_name(report.verdict).to_string());
        rec.unstable = Some(report.structurally_unstable);
        rec.sss = Some(report.structurally_strictly_semistable);
        rec.li = report.li_admissible;
        rec.max_violation_ratio = report.worst_violation().map(|w| w.ratio_string());
        rec.witnesses = report
            .witnesses
            .iter()
            .map(|w| WitnessRecord {
                label: w.label(),
                family: format!("{:?}", w.family),
                relation: format!("{:?}", w.relation),
                ratio: w.ratio_string(),
                raw: w.raw_string(),
            })
            .collect();
        rec.transport = report.discrete.as_ref().map(|d| TransportRecord {
            level: d.level,
            restricted_feasible: d.restricted_feasible,
            stable: d.stable,
            gap: d.gap.as_ref().map(fmt_rat),
        });
        rec.summary = Some(report.summary.clone());
        if config.singular {
            rec.singular = Some(singular_record(&pair, config)?);
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        rec.error = Some(e.to_string());
    }
    if config.timing {
        rec.wall_ms = Some(start.elapsed().as_millis() as u64);
    }
    rec
}

pub fn aggregate(records: &[PolytopeRecord]) -> Aggregates {
    let mut a = Aggregates {
        total: records.len(),
        ..Aggregates::default()
    };
    for r in records {
        let sss = r.sss == Some(true);
        let li = r.li == Some(true);
        a.strictly_semistable += usize::from(sss);
        a.unstable += usize::from(r.unstable == Some(true));
        a.li_admissible += usize::from(li);
        a.sss_and_li += usize::from(sss && li);
        a.failed += usize::from(r.error.is_some());
    }
    a
}

/// Classifies every input in parallel; records come back ordered by id.
/// Failures are recorded per record and do not stop the run.
pub fn run_classification(config: &RunConfig, inputs: Vec<PolytopeInput>) -> Result<Report> {
    config.validate()?;
    let inputs: Vec<PolytopeInput> = inputs
        .into_iter()
        .filter(|p| config.dim.map_or(true, |d| p.dim() == d))
        .collect();
    let mut ids: Vec<&str> = inputs.iter().map(|p| p.id.as_str()).collect();
    ids.sort_unstable();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::domain(format!("duplicate id {}", w[0])));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::internal(e.to_string()))?;
    let mut records: Vec<PolytopeRecord> =
        pool.install(|| inputs.par_iter().map(|p| classify_one(p, config)).collect());
    records.sort_by(|a, b| a.id.cmp(&b.id));
    let aggregates = aggregate(&records);
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        run_config: config.clone(),
        records,
        aggregates,
    })
}

fn opt_bool(b: Option<bool>) -> String {
    b.map(|x| x.to_string()).unwrap_or_default()
}

/// Renders a report as pretty JSON or as CSV with a final aggregate row.
pub fn emit_report(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s =
                serde_json::to_string_pretty(report).map_err(|e| Error::internal(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| Error::internal(e.to_string());
            w.write_record([
                "id",
                "dim",
                "n_vertices",
                "n_lattice_points",
                "unstable",
                "sss",
                "li",
                "discrete_stable",
                "max_violation_ratio",
                "wall_ms",
            ])
            .map_err(csv_err)?;
            for r in &report.records {
                w.write_record([
                    r.id.clone(),
                    r.dim.to_string(),
                    r.n_vertices.to_string(),
                    r.n_lattice_points
                        .map(|n| n.to_string())
                        .unwrap_or_default(),
                    opt_bool(r.unstable),
                    opt_bool(r.sss),
                    opt_bool(r.li),
                    opt_bool(r.discrete_stable()),
                    r.max_violation_ratio.clone().unwrap_or_default(),
                    r.wall_ms.map(|t| t.to_string()).unwrap_or_default(),
                ])
                .map_err(csv_err)?;
            }
            let a = &report.aggregates;
            w.write_record([
                format!("aggregate(total={};sss_and_li={})", a.total, a.sss_and_li),
                String::new(),
                String::new(),
                String::new(),
                a.unstable.to_string(),
                a.strictly_semistable.to_string(),
                a.li_admissible.to_string(),
                String::new(),
                String::new(),
                String::new(),
            ])
            .map_err(csv_err)?;
            let bytes = w.into_inner().map_err(|e| Error::internal(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::internal(e.to_string()))
        }
    }
}

pub fn parse_report(json: &str) -> Result<Report> {
    serde_json::from_str(json).map_err(|e| Error::parse(e.line(), e.to_string()))
}
