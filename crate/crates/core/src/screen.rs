//! Facet-level mass screens: structural instability, structural strict
//! semistability and Li admissibility.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::duality::DualPair;
use crate::error::{Error, Result};
use crate::lattice::{fmt_rat, LatticeVector, Rat, RationalVector};
use crate::volume::{measure_A, measure_B, FacetMeasure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    /// `nu_N(tau)` against `mu_M(St(m_tau))`.
    DualFacet,
    /// `mu_M(sigma)` against `nu_N(union of tau_m, m on sigma)`.
    PrimalFacet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    Greater,
    Equal,
}

/// One inequality that fails or holds with equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub family: Family,
    pub facet: usize,
    /// Normal of the facet, `m_tau` or `n_sigma`.
    pub normal: LatticeVector,
    pub lhs: Rat,
    pub rhs: Rat,
    /// Unreduced volumes: `(part, total)` on each side.
    pub lhs_raw: (Rat, Rat),
    pub rhs_raw: (Rat, Rat),
    pub relation: Relation,
}

impl Witness {
    pub fn label(&self) -> String {
        match self.family {
            Family::DualFacet => format!("tau_{}", self.normal),
            Family::PrimalFacet => format!("sigma_{}", self.normal),
        }
    }

    /// `lhs vs rhs` with reduced fractions.
    pub fn ratio_string(&self) -> String {
        format!("{} vs {}", fmt_rat(&self.lhs), fmt_rat(&self.rhs))
    }

    pub fn raw_string(&self) -> String {
        let op = match self.relation {
            Relation::Greater => ">",
            Relation::Equal => "=",
        };
        format!(
            "{}/{} {} {}/{}",
            fmt_rat(&self.lhs_raw.0),
            fmt_rat(&self.lhs_raw.1),
            op,
            fmt_rat(&self.rhs_raw.0),
            fmt_rat(&self.rhs_raw.1)
        )
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.relation {
            Relation::Greater => ">",
            Relation::Equal => "=",
        };
        write!(
            f,
            "{}: {} {} {}",
            self.label(),
            fmt_rat(&self.lhs),
            op,
            fmt_rat(&self.rhs)
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StructuralVerdict {
    Unstable,
    StrictlySemistable,
    Pass,
}

impl fmt::Display for StructuralVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StructuralVerdict::Unstable => "structurally unstable",
            StructuralVerdict::StrictlySemistable => "structurally strictly semistable",
            StructuralVerdict::Pass => "passes structural screens",
        })
    }
}

#[derive(Clone, Debug)]
pub struct StructuralResult {
    pub verdict: StructuralVerdict,
    pub witnesses: Vec<Witness>,
}

impl StructuralResult {
    pub fn violations(&self) -> impl Iterator<Item = &Witness> {
        self.witnesses
            .iter()
            .filter(|w| w.relation == Relation::Greater)
    }

    pub fn equalities(&self) -> impl Iterator<Item = &Witness> {
        self.witnesses
            .iter()
            .filter(|w| w.relation == Relation::Equal)
    }

    /// The headline violation: dual-facet witnesses first, since they name
    /// the face a transport cut certificate finds, then the largest `lhs / rhs`.
    pub fn worst_violation(&self) -> Option<&Witness> {
        worst(self.witnesses.iter())
    }
}

fn worst<'a>(ws: impl Iterator<Item = &'a Witness>) -> Option<&'a Witness> {
    ws.filter(|w| w.relation == Relation::Greater)
        .max_by(|a, b| severity(a).cmp(&severity(b)))
}

/// Family rank, then `lhs / rhs` with a zero right-hand side above every finite ratio.
fn severity(w: &Witness) -> (bool, bool, Rat) {
    let dual = w.family == Family::DualFacet;
    if w.rhs.is_zero() {
        (dual, true, w.lhs.clone())
    } else {
        (dual, false, &w.lhs / &w.rhs)
    }
}

/// Evaluates both inequality families on every facet.
pub fn structural_check(pair: &DualPair, mu: &FacetMeasure, nu: &FacetMeasure) -> StructuralResult {
    let mut witnesses = Vec::new();
    let mut push = |family, facet, normal: &LatticeVector, lhs: (Rat, Rat), rhs: (Rat, Rat)| {
        let l = &lhs.0 / &lhs.1;
        let r = &rhs.0 / &rhs.1;
        let relation = match l.cmp(&r) {
            Ordering::Greater => Relation::Greater,
            Ordering::Equal => Relation::Equal,
            Ordering::Less => return,
        };
        witnesses.push(Witness {
            family,
            facet,
            normal: normal.clone(),
            lhs: l,
            rhs: r,
            lhs_raw: lhs,
            rhs_raw: rhs,
            relation,
        });
    };
    for (t, f) in pair.dual.facets.iter().enumerate() {
        let st: Vec<usize> = (0..pair.primal.facets.len())
            .filter(|&s| pair.allowed(s, t))
            .collect();
        push(
            Family::DualFacet,
            t,
            &f.normal,
            (nu.raw[t].clone(), nu.total.clone()),
            (mu.raw_mass(&st), mu.total.clone()),
        );
    }
    for (s, f) in pair.primal.facets.iter().enumerate() {
        let over = pair.dual_facets_over(s);
        push(
            Family::PrimalFacet,
            s,
            &f.normal,
            (mu.raw[s].clone(), mu.total.clone()),
            (nu.raw_mass(&over), nu.total.clone()),
        );
    }
    let verdict = if witnesses.iter().any(|w| w.relation == Relation::Greater) {
        StructuralVerdict::Unstable
    } else if witnesses.is_empty() {
        StructuralVerdict::Pass
    } else {
        StructuralVerdict::StrictlySemistable
    };
    StructuralResult { verdict, witnesses }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiResult {
    pub admissible: bool,
    /// A vertex `v` of `Delta` and a vertex `w` of the dual with `<v, w> = 0`.
    pub violation: Option<(LatticeVector, RationalVector)>,
}

/// Checks that no vertex of `Delta` pairs to zero with a vertex of `Delta^vee`.
pub fn li_admissible(pair: &DualPair) -> Result<LiResult> {
    if !pair.height.is_trivial() {
        return Err(Error::domain("Li admissibility needs the trivial height"));
    }
    for v in &pair.primal.vertices {
        for w in &pair.dual.vertices {
            if w.dot_lattice(v).is_zero() {
                return Ok(LiResult {
                    admissible: false,
                    violation: Some((v.clone(), w.clone())),
                });
            }
        }
    }
    Ok(LiResult {
        admissible: true,
        violation: None,
    })
}

#[derive(Clone, Debug, Default)]
pub struct ClassifyOptions {
    /// Run the discrete transport certificate at this refinement level.
    pub transport_level: Option<u32>,
    pub pivot: crate::transport::PivotRule,
}

/// Outcome of the discrete transport certificate, as reported alongside the screens.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteSummary {
    pub level: u32,
    pub stable: bool,
    pub restricted_feasible: bool,
    pub gap: Option<Rat>,
}

#[derive(Clone, Debug)]
pub struct StabilityReport {
    pub verdict: StructuralVerdict,
    pub structurally_unstable: bool,
    pub structurally_strictly_semistable: bool,
    /// `None` for non-trivial heights, where the check is undefined.
    pub li_admissible: Option<bool>,
    pub li_violation: Option<(LatticeVector, RationalVector)>,
    pub discrete: Option<DiscreteSummary>,
    pub witnesses: Vec<Witness>,
    pub mu: FacetMeasure,
    pub nu: FacetMeasure,
    pub summary: String,
}

impl StabilityReport {
    pub fn discrete_stable(&self) -> Option<bool> {
        self.discrete.as_ref().map(|d| d.stable)
    }

    pub fn worst_violation(&self) -> Option<&Witness> {
        worst(self.witnesses.iter())
    }

    /// The witness quoted in one-line summaries: the worst violation, else
    /// the first equality.
    pub fn headline_witness(&self) -> Option<&Witness> {
        self.worst_violation().or_else(|| {
            self.witnesses
                .iter()
                .find(|w| w.relation == Relation::Equal)
        })
    }
}

pub fn classify(pair: &DualPair, options: &ClassifyOptions) -> Result<StabilityReport> {
    let mu = measure_A(pair)?;
    let nu = measure_B(pair)?;
    let structural = structural_check(pair, &mu, &nu);
    let li = if pair.height.is_trivial() {
        Some(li_admissible(pair)?)
    } else {
        None
    };
    let discrete = match options.transport_level {
        Some(level) => Some(crate::transport::discrete_summary(
            pair,
            level,
            options.pivot,
        )?),
        None => None,
    };
    let mut summary = structural.verdict.to_string();
    if let Some(w) = structural
        .worst_violation()
        .or_else(|| structural.equalities().next())
    {
        summary.push_str(&format!(" ({w})"));
    }
    match &li {
        Some(l) if l.admissible => summary.push_str("; Li-admissible"),
        Some(_) => summary.push_str("; not Li-admissible"),
        None => {}
    }
    if let Some(d) = &discrete {
        let verdict = if d.stable { "stable" } else { "not stable" };
        summary.push_str(&format!(
            "; discrete certificate at L={}: {verdict}",
            d.level
        ));
    }
    Ok(StabilityReport {
        verdict: structural.verdict,
        structurally_unstable: structural.verdict == StructuralVerdict::Unstable,
        structurally_strictly_semistable: structural.verdict
            == StructuralVerdict::StrictlySemistable,
        li_admissible: li.as_ref().map(|l| l.admissible),
        li_violation: li.and_then(|l| l.violation),
        discrete,
        witnesses: structural.witnesses,
        mu,
        nu,
        summary,
    })
}
