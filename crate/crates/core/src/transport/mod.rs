//! Discretized boundary measures and exact optimal transport between them.
//!
//! Costs are `c(a, b) = -<a, b>`. A plan is *restricted* when it only uses
//! arcs `(a in sigma, b in tau)` with `m_tau in sigma`; the discrete
//! certificate compares the restricted and unrestricted optimal costs.

mod flow;
mod simplex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

pub use simplex::PivotRule;

use crate::duality::DualPair;
use crate::error::{Error, Result};
use crate::geometry::{edgewise_subdivision, simplex_normalized_volume, Polytope};
use crate::lattice::{Rat, RationalVector};
use crate::screen::DiscreteSummary;
use crate::volume::{measure_A, measure_B, FacetChart, FacetMeasure, Side};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub point: RationalVector,
    pub weight: Rat,
    pub facet: usize,
    pub chart: RationalVector,
}

#[derive(Clone, Debug)]
pub struct SampleCloud {
    pub side: Side,
    pub level: u32,
    pub samples: Vec<Sample>,
}

impl SampleCloud {
    pub fn total(&self) -> Rat {
        self.samples.iter().map(|s| s.weight.clone()).sum()
    }

    pub fn facet_mass(&self, facet: usize) -> Rat {
        self.samples
            .iter()
            .filter(|s| s.facet == facet)
            .map(|s| s.weight.clone())
            .sum()
    }
}

/// The cells of one facet at refinement factor `k`: simplices in ambient
/// coordinates together with the chart used to build them.
pub(crate) fn facet_cells(
    vertices: &[RationalVector],
    chart: &FacetChart,
    k: usize,
) -> Result<Vec<Vec<RationalVector>>> {
    if chart.dim() == 0 {
        return Ok(vec![vec![vertices[0].clone()]]);
    }
    let coords: Vec<RationalVector> = vertices.iter().map(|v| chart.coords(v)).collect();
    let poly = Polytope::from_points(&coords)?;
    let mut cells = Vec::new();
    for s in poly.triangulate() {
        let simplex: Vec<RationalVector> = s.iter().map(|&i| poly.vertices[i].clone()).collect();
        for sub in edgewise_subdivision(&simplex, k) {
            cells.push(sub.iter().map(|y| chart.point(y)).collect());
        }
    }
    Ok(cells)
}

/// The vertices, normal and offset of facet `i` on a side.
pub(crate) fn facet_data(
    pair: &DualPair,
    side: Side,
    i: usize,
) -> (Vec<RationalVector>, FacetChart) {
    let (pts, normal, offset) = match side {
        Side::A => {
            let f = &pair.primal.facets[i];
            let pts = f
                .vertices
                .iter()
                .map(|&v| pair.primal.vertices[v].to_rational())
                .collect();
            (pts, f.normal.clone(), Rat::one())
        }
        Side::B => {
            let f = &pair.dual.facets[i];
            (
                pair.dual.facet_points(i),
                f.normal.clone(),
                Rat::from_integer(f.offset.clone()),
            )
        }
    };
    let chart = FacetChart::new(&normal, &offset).expect("facets have primitive integral normals");
    (pts, chart)
}

/// Samples a facet measure at the barycenters of a `2^level`-fold edgewise
/// subdivision of each facet. Facets of zero weight contribute no samples.
pub fn sample_measure(pair: &DualPair, measure: &FacetMeasure, level: u32) -> Result<SampleCloud> {
    let samples = sample_at_factor(pair, measure, 1usize << level)?;
    Ok(SampleCloud {
        side: measure.side,
        level,
        samples,
    })
}

/// Barycentric samples of an edgewise subdivision with factor `k`.
pub fn sample_at_factor(pair: &DualPair, measure: &FacetMeasure, k: usize) -> Result<Vec<Sample>> {
    let side = measure.side;
    let mut samples = Vec::new();
    for (i, w) in measure.weights.iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        let (pts, chart) = facet_data(pair, side, i);
        let cells = facet_cells(&pts, &chart, k)?;
        let vols: Vec<Rat> = cells
            .iter()
            .map(|c| {
                if chart.dim() == 0 {
                    Rat::one()
                } else {
                    let local: Vec<RationalVector> = c.iter().map(|p| chart.coords(p)).collect();
                    simplex_normalized_volume(&local)
                }
            })
            .collect();
        let total: Rat = vols.iter().sum();
        for (cell, vol) in cells.iter().zip(&vols) {
            let point = RationalVector::barycenter(cell);
            samples.push(Sample {
                chart: chart.coords(&point),
                point,
                weight: w * vol / &total,
                facet: i,
            });
        }
    }
    Ok(samples)
}

/// A balanced transportation problem between `A` (rows) and `B` (columns).
#[derive(Clone, Debug)]
pub struct TransportInstance {
    pub a_mass: Vec<Rat>,
    pub b_mass: Vec<Rat>,
    pub a_facet: Vec<usize>,
    pub b_facet: Vec<usize>,
    pub a_points: Option<Vec<RationalVector>>,
    pub b_points: Option<Vec<RationalVector>>,
    pub cost: Vec<Vec<Rat>>,
    pub allowed: Vec<Vec<bool>>,
    pub level: Option<u32>,
}

impl TransportInstance {
    /// An instance given directly by masses and a cost matrix; each sample
    /// is its own group in cut witnesses.
    pub fn from_costs(
        a_mass: Vec<Rat>,
        b_mass: Vec<Rat>,
        cost: Vec<Vec<Rat>>,
        allowed: Option<Vec<Vec<bool>>>,
    ) -> Result<Self> {
        if a_mass.iter().sum::<Rat>() != b_mass.iter().sum::<Rat>() {
            return Err(Error::domain("unbalanced masses"));
        }
        if cost.len() != a_mass.len() || cost.iter().any(|r| r.len() != b_mass.len()) {
            return Err(Error::domain("cost matrix has the wrong shape"));
        }
        let allowed = allowed.unwrap_or_else(|| vec![vec![true; b_mass.len()]; a_mass.len()]);
        Ok(TransportInstance {
            a_facet: (0..a_mass.len()).collect(),
            b_facet: (0..b_mass.len()).collect(),
            a_mass,
            b_mass,
            a_points: None,
            b_points: None,
            cost,
            allowed,
            level: None,
        })
    }

    /// An instance with cost `-<a, b>` between point clouds.
    pub fn from_points(
        a: Vec<(RationalVector, Rat)>,
        b: Vec<(RationalVector, Rat)>,
    ) -> Result<Self> {
        let cost = a
            .iter()
            .map(|(p, _)| b.iter().map(|(q, _)| -p.dot(q)).collect())
            .collect();
        let mut inst = Self::from_costs(
            a.iter().map(|x| x.1.clone()).collect(),
            b.iter().map(|x| x.1.clone()).collect(),
            cost,
            None,
        )?;
        inst.a_points = Some(a.into_iter().map(|x| x.0).collect());
        inst.b_points = Some(b.into_iter().map(|x| x.0).collect());
        Ok(inst)
    }

    pub fn rows(&self) -> usize {
        self.a_mass.len()
    }

    pub fn cols(&self) -> usize {
        self.b_mass.len()
    }

    pub fn is_balanced(&self) -> bool {
        self.a_mass.iter().sum::<Rat>() == self.b_mass.iter().sum::<Rat>()
    }

    pub fn allowed_count(&self) -> usize {
        self.allowed.iter().flatten().filter(|&&x| x).count()
    }
}

/// Builds the transport instance between samples of `mu` and `nu`.
pub fn discretize(
    pair: &DualPair,
    mu: &FacetMeasure,
    nu: &FacetMeasure,
    level: u32,
) -> Result<TransportInstance> {
    discretize_levels(pair, mu, nu, level, level)
}

/// As [`discretize`], with separate refinement levels on `A` and `B`.
pub fn discretize_levels(
    pair: &DualPair,
    mu: &FacetMeasure,
    nu: &FacetMeasure,
    level_a: u32,
    level_b: u32,
) -> Result<TransportInstance> {
    if mu.side != Side::A || nu.side != Side::B {
        return Err(Error::domain("expected a measure on A and a measure on B"));
    }
    let a = sample_measure(pair, mu, level_a)?;
    let b = sample_measure(pair, nu, level_b)?;
    let cost = a
        .samples
        .iter()
        .map(|s| b.samples.iter().map(|t| -s.point.dot(&t.point)).collect())
        .collect();
    let allowed = a
        .samples
        .iter()
        .map(|s| {
            b.samples
                .iter()
                .map(|t| pair.allowed(s.facet, t.facet))
                .collect()
        })
        .collect();
    Ok(TransportInstance {
        a_mass: a.samples.iter().map(|s| s.weight.clone()).collect(),
        b_mass: b.samples.iter().map(|s| s.weight.clone()).collect(),
        a_facet: a.samples.iter().map(|s| s.facet).collect(),
        b_facet: b.samples.iter().map(|s| s.facet).collect(),
        a_points: Some(a.samples.into_iter().map(|s| s.point).collect()),
        b_points: Some(b.samples.into_iter().map(|s| s.point).collect()),
        cost,
        allowed,
        level: (level_a == level_b).then_some(level_a),
    })
}

/// Instance for `(mu_M, nu_N)` at the given level.
pub fn discretize_canonical(pair: &DualPair, level: u32) -> Result<TransportInstance> {
    discretize(pair, &measure_A(pair)?, &measure_B(pair)?, level)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransportPlan {
    /// Positive entries `(i, j, gamma_ij)`.
    pub flows: Vec<(usize, usize, Rat)>,
    pub cost: Rat,
    /// Solver duals: `phi_i + psi_j >= -c(i, j)` on every usable arc, with
    /// equality on the support.
    pub phi: Vec<Rat>,
    pub psi: Vec<Rat>,
    pub restricted: bool,
    pub pivots: usize,
}

impl TransportPlan {
    pub fn row_sums(&self, rows: usize) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); rows];
        for (i, _, g) in &self.flows {
            out[*i] += g;
        }
        out
    }

    pub fn col_sums(&self, cols: usize) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); cols];
        for (_, j, g) in &self.flows {
            out[*j] += g;
        }
        out
    }
}

/// A set of facets on one side whose mass exceeds what its allowed arcs can
/// carry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutWitness {
    pub side: Side,
    pub facets: Vec<usize>,
    /// Mass of the samples in `facets`.
    #[serde(serialize_with = "crate::io::ser_rat")]
    pub mass: Rat,
    /// Mass on the other side reachable through allowed arcs.
    #[serde(serialize_with = "crate::io::ser_rat")]
    pub reachable: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Optimal(TransportPlan),
    Infeasible(CutWitness),
}

impl SolveOutcome {
    pub fn plan(&self) -> Option<&TransportPlan> {
        match self {
            SolveOutcome::Optimal(p) => Some(p),
            SolveOutcome::Infeasible(_) => None,
        }
    }
}

fn lcm_of_denominators<'a>(vals: impl Iterator<Item = &'a Rat>) -> BigInt {
    vals.fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

fn scale(v: &Rat, s: &BigInt) -> BigInt {
    (v * Rat::from_integer(s.clone())).to_integer()
}

/// Mass of each group of samples and mass reachable from the group through
/// usable arcs.
fn group_balance(
    inst: &TransportInstance,
    usable: &dyn Fn(usize, usize) -> bool,
    side: Side,
    members: &dyn Fn(usize) -> bool,
) -> (Rat, Rat) {
    let (own_mass, other_mass, n_own, n_other) = match side {
        Side::A => (&inst.a_mass, &inst.b_mass, inst.rows(), inst.cols()),
        Side::B => (&inst.b_mass, &inst.a_mass, inst.cols(), inst.rows()),
    };
    let own: Vec<usize> = (0..n_own).filter(|&x| members(x)).collect();
    let mass = own.iter().map(|&x| own_mass[x].clone()).sum();
    let reachable = (0..n_other)
        .filter(|&y| {
            own.iter().any(|&x| match side {
                Side::A => usable(x, y),
                Side::B => usable(y, x),
            })
        })
        .map(|y| other_mass[y].clone())
        .sum();
    (mass, reachable)
}

/// Finds the most explanatory cut: a single `B` facet, else a single `A`
/// facet, else the set found by the max-flow.
fn cut_witness(
    inst: &TransportInstance,
    usable: &dyn Fn(usize, usize) -> bool,
    sample_cut: &[usize],
) -> CutWitness {
    let mut best: Option<(Rat, CutWitness)> = None;
    for side in [Side::B, Side::A] {
        let groups = match side {
            Side::A => &inst.a_facet,
            Side::B => &inst.b_facet,
        };
        let mut ids: Vec<usize> = groups.clone();
        ids.sort_unstable();
        ids.dedup();
        for f in ids {
            let (mass, reachable) = group_balance(inst, usable, side, &|x| groups[x] == f);
            let excess = &mass - &reachable;
            if excess.is_positive() && best.as_ref().map_or(true, |(e, _)| excess > *e) {
                best = Some((
                    excess,
                    CutWitness {
                        side,
                        facets: vec![f],
                        mass,
                        reachable,
                    },
                ));
            }
        }
        if let Some((_, w)) = best {
            return w;
        }
    }
    let mut facets: Vec<usize> = sample_cut.iter().map(|&j| inst.b_facet[j]).collect();
    facets.sort_unstable();
    facets.dedup();
    let (mass, reachable) = group_balance(inst, usable, Side::B, &|j| sample_cut.contains(&j));
    CutWitness {
        side: Side::B,
        facets,
        mass,
        reachable,
    }
}

/// Exact optimal transport. With `restrict`, only allowed arcs are used and
/// infeasibility is reported with a cut witness.
pub fn solve_ot(inst: &TransportInstance, restrict: bool, rule: PivotRule) -> Result<SolveOutcome> {
    if !inst.is_balanced() {
        return Err(Error::domain("unbalanced masses"));
    }
    let (na, nb) = (inst.rows(), inst.cols());
    let usable = |i: usize, j: usize| !restrict || inst.allowed[i][j];
    let mass_scale = lcm_of_denominators(inst.a_mass.iter().chain(&inst.b_mass));
    let a_int: Vec<BigInt> = inst.a_mass.iter().map(|m| scale(m, &mass_scale)).collect();
    let b_int: Vec<BigInt> = inst.b_mass.iter().map(|m| scale(m, &mass_scale)).collect();
    let total: BigInt = a_int.iter().sum();

    if restrict {
        let (s, t) = (na + nb, na + nb + 1);
        let mut g = flow::MaxFlow::new(na + nb + 2);
        let inf = &total + BigInt::one();
        for i in 0..na {
            g.add_edge(s, i, a_int[i].clone());
        }
        for j in 0..nb {
            g.add_edge(na + j, t, b_int[j].clone());
        }
        for i in 0..na {
            for j in 0..nb {
                if usable(i, j) {
                    g.add_edge(i, na + j, inf.clone());
                }
            }
        }
        if g.run(s, t, &inf) < total {
            let reach = g.reachable(s);
            let cut: Vec<usize> = (0..nb).filter(|&j| !reach[na + j]).collect();
            return Ok(SolveOutcome::Infeasible(cut_witness(inst, &usable, &cut)));
        }
    }

    let cost_scale = lcm_of_denominators(inst.cost.iter().flatten());
    let mut arcs = Vec::new();
    let mut arc_ij = Vec::new();
    for i in 0..na {
        for j in 0..nb {
            if usable(i, j) {
                arcs.push((i, na + j, scale(&inst.cost[i][j], &cost_scale)));
                arc_ij.push((i, j));
            }
        }
    }
    let mut supply = a_int;
    supply.extend(b_int.iter().map(|b| -b));
    let net = simplex::Network {
        nodes: na + nb,
        supply,
        arcs,
    };
    let sol = simplex::solve(&net, rule)?;
    if !sol.artificial_flow.is_zero() {
        return Err(Error::internal(
            "feasible instance left flow on artificial arcs",
        ));
    }
    let ms = Rat::from_integer(mass_scale);
    let cs = Rat::from_integer(cost_scale);
    let flows: Vec<(usize, usize, Rat)> = sol
        .flow
        .iter()
        .zip(&arc_ij)
        .filter(|(f, _)| f.is_positive())
        .map(|(f, &(i, j))| (i, j, Rat::from_integer(f.clone()) / &ms))
        .collect();
    let cost = flows.iter().map(|(i, j, g)| g * &inst.cost[*i][*j]).sum();
    // c(i,j) >= pi_j - pi_i, so phi_i = pi_i and psi_j = -pi_j satisfy
    // phi_i + psi_j >= -c(i,j).
    let phi = (0..na)
        .map(|i| Rat::from_integer(sol.potential[i].clone()) / &cs)
        .collect();
    let psi = (0..nb)
        .map(|j| -Rat::from_integer(sol.potential[na + j].clone()) / &cs)
        .collect();
    Ok(SolveOutcome::Optimal(TransportPlan {
        flows,
        cost,
        phi,
        psi,
        restricted: restrict,
        pivots: sol.pivots,
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CertificateVerdict {
    Stable,
    Unstable,
    InfeasibleRestricted,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub verdict: CertificateVerdict,
    pub cost_unrestricted: Rat,
    pub cost_restricted: Option<Rat>,
    /// `cost_restricted - cost_unrestricted`, when the restricted problem is feasible.
    pub gap: Option<Rat>,
    pub witness: Option<CutWitness>,
    pub unrestricted: TransportPlan,
    pub restricted: Option<TransportPlan>,
}

/// Stable iff the restricted problem is feasible and matches the
/// unrestricted optimum exactly.
pub fn stability_certificate(inst: &TransportInstance, rule: PivotRule) -> Result<Certificate> {
    let unrestricted = match solve_ot(inst, false, rule)? {
        SolveOutcome::Optimal(p) => p,
        SolveOutcome::Infeasible(_) => {
            return Err(Error::internal("unrestricted problem infeasible"))
        }
    };
    match solve_ot(inst, true, rule)? {
        SolveOutcome::Infeasible(w) => Ok(Certificate {
            verdict: CertificateVerdict::InfeasibleRestricted,
            cost_unrestricted: unrestricted.cost.clone(),
            cost_restricted: None,
            gap: None,
            witness: Some(w),
            unrestricted,
            restricted: None,
        }),
        SolveOutcome::Optimal(r) => {
            let gap = &r.cost - &unrestricted.cost;
            if gap.is_negative() {
                return Err(Error::internal(
                    "restricted optimum below unrestricted optimum",
                ));
            }
            Ok(Certificate {
                verdict: if gap.is_zero() {
                    CertificateVerdict::Stable
                } else {
                    CertificateVerdict::Unstable
                },
                cost_unrestricted: unrestricted.cost.clone(),
                cost_restricted: Some(r.cost.clone()),
                gap: Some(gap),
                witness: None,
                unrestricted,
                restricted: Some(r),
            })
        }
    }
}

/// Runs the certificate for `(mu_M, nu_N)` at one level.
pub fn discrete_summary(pair: &DualPair, level: u32, rule: PivotRule) -> Result<DiscreteSummary> {
    let inst = discretize_canonical(pair, level)?;
    let cert = stability_certificate(&inst, rule)?;
    Ok(DiscreteSummary {
        level,
        stable: cert.verdict == CertificateVerdict::Stable,
        restricted_feasible: cert.verdict != CertificateVerdict::InfeasibleRestricted,
        gap: cert.gap,
    })
}

/// `phi` on `A` samples and `psi` on `B` samples with
/// `phi_i + psi_j >= -c(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PotentialPair {
    pub phi: Vec<Rat>,
    pub psi: Vec<Rat>,
    pub restricted: bool,
}

fn usable_arc(inst: &TransportInstance, restricted: bool, i: usize, j: usize) -> bool {
    !restricted || inst.allowed[i][j]
}

/// `phi_i = max_j (-c(i, j) - psi_j)` over usable arcs.
pub fn c_transform_b_to_a(inst: &TransportInstance, psi: &[Rat], restricted: bool) -> Vec<Rat> {
    (0..inst.rows())
        .map(|i| {
            (0..inst.cols())
                .filter(|&j| usable_arc(inst, restricted, i, j))
                .map(|j| -&inst.cost[i][j] - &psi[j])
                .max()
                .expect("every sample has a usable arc")
        })
        .collect()
}

/// `psi_j = max_i (-c(i, j) - phi_i)` over usable arcs.
pub fn c_transform_a_to_b(inst: &TransportInstance, phi: &[Rat], restricted: bool) -> Vec<Rat> {
    (0..inst.cols())
        .map(|j| {
            (0..inst.rows())
                .filter(|&i| usable_arc(inst, restricted, i, j))
                .map(|i| -&inst.cost[i][j] - &phi[i])
                .max()
                .expect("every sample has a usable arc")
        })
        .collect()
}

/// Solver duals with `phi` replaced by the c-transform of `psi`.
pub fn kantorovich_potentials(inst: &TransportInstance, plan: &TransportPlan) -> PotentialPair {
    PotentialPair {
        phi: c_transform_b_to_a(inst, &plan.psi, plan.restricted),
        psi: plan.psi.clone(),
        restricted: plan.restricted,
    }
}

/// `J(psi) = -sum phi mu - sum psi nu`; equals the optimal cost at optimum.
pub fn dual_value(inst: &TransportInstance, pot: &PotentialPair) -> Rat {
    let a: Rat = pot.phi.iter().zip(&inst.a_mass).map(|(p, m)| p * m).sum();
    let b: Rat = pot.psi.iter().zip(&inst.b_mass).map(|(p, m)| p * m).sum();
    -(a + b)
}

/// Checks dual feasibility on usable arcs and equality on the support.
pub fn complementary_slackness(
    inst: &TransportInstance,
    plan: &TransportPlan,
    pot: &PotentialPair,
) -> bool {
    let feasible = (0..inst.rows()).all(|i| {
        (0..inst.cols())
            .filter(|&j| usable_arc(inst, pot.restricted, i, j))
            .all(|j| &pot.phi[i] + &pot.psi[j] >= -&inst.cost[i][j])
    });
    feasible
        && plan
            .flows
            .iter()
            .all(|(i, j, _)| &pot.phi[*i] + &pot.psi[*j] == -&inst.cost[*i][*j])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotonicityResult {
    pub monotone: bool,
    /// Support arcs `(i, j)`, `(i', j')` and the value
    /// `c(i, j') + c(i', j) - c(i, j) - c(i', j')`, which is
    /// `<a_i' - a_i, b_j' - b_j>` for the pairing cost.
    pub violation: Option<((usize, usize), (usize, usize), Rat)>,
}

/// Pairwise c-monotonicity of a plan's support. Crossed arcs that are not
/// usable are skipped.
pub fn c_monotonicity_check(inst: &TransportInstance, plan: &TransportPlan) -> MonotonicityResult {
    for (x, (i, j, _)) in plan.flows.iter().enumerate() {
        for (i2, j2, _) in &plan.flows[x + 1..] {
            if !usable_arc(inst, plan.restricted, *i, *j2)
                || !usable_arc(inst, plan.restricted, *i2, *j)
            {
                continue;
            }
            let c = &inst.cost;
            let value = &c[*i][*j2] + &c[*i2][*j] - &c[*i][*j] - &c[*i2][*j2];
            if value.is_negative() {
                return MonotonicityResult {
                    monotone: false,
                    violation: Some(((*i, *j), (*i2, *j2), value)),
                };
            }
        }
    }
    MonotonicityResult {
        monotone: true,
        violation: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::{build_reflexive, HeightFunction};
    use crate::lattice::{frac, rat, LatticeVector};

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(c)
    }

    fn two_by_two() -> TransportInstance {
        TransportInstance::from_costs(
            vec![frac(1, 2); 2],
            vec![frac(1, 2); 2],
            vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]],
            None,
        )
        .unwrap()
    }

    fn p2() -> DualPair {
        DualPair::from_vertices(&[lv(&[2, -1]), lv(&[-1, 2]), lv(&[-1, -1])]).unwrap()
    }

    #[test]
    fn two_by_two_matches_brute_force() {
        let inst = two_by_two();
        // Couplings are diag(t, t) + anti(1/2 - t, 1/2 - t); cost is 1 - 2t.
        let brute = (0..=10)
            .map(|k| frac(k, 20))
            .map(|t| rat(1) - rat(2) * t)
            .min()
            .unwrap();
        for rule in [PivotRule::Bland, PivotRule::Best] {
            let plan = solve_ot(&inst, false, rule)
                .unwrap()
                .plan()
                .unwrap()
                .clone();
            assert_eq!(plan.cost, brute);
            let mut flows = plan.flows.clone();
            flows.sort();
            assert_eq!(flows, vec![(0, 0, frac(1, 2)), (1, 1, frac(1, 2))]);
            let pot = kantorovich_potentials(&inst, &plan);
            assert_eq!(dual_value(&inst, &pot), plan.cost);
            assert!(complementary_slackness(&inst, &plan, &pot));
        }
    }

    #[test]
    fn crossed_plan_is_not_monotone() {
        let inst = two_by_two();
        let plan = TransportPlan {
            flows: vec![(0, 1, frac(1, 2)), (1, 0, frac(1, 2))],
            cost: rat(1),
            phi: vec![],
            psi: vec![],
            restricted: false,
            pivots: 0,
        };
        let r = c_monotonicity_check(&inst, &plan);
        assert!(!r.monotone);
        assert_eq!(r.violation.unwrap().2, rat(-2));

        let pts = TransportInstance::from_points(
            vec![
                (RationalVector::from_i64(&[0]), frac(1, 2)),
                (RationalVector::from_i64(&[1]), frac(1, 2)),
            ],
            vec![
                (RationalVector::from_i64(&[0]), frac(1, 2)),
                (RationalVector::from_i64(&[1]), frac(1, 2)),
            ],
        )
        .unwrap();
        let r = c_monotonicity_check(&pts, &plan);
        assert_eq!(r.violation.unwrap().2, rat(-1));
        let single = TransportPlan {
            flows: vec![(0, 0, rat(1))],
            ..plan
        };
        assert!(c_monotonicity_check(&inst, &single).monotone);
    }

    #[test]
    fn p2_level_zero_samples() {
        let pair = p2();
        let inst = discretize_canonical(&pair, 0).unwrap();
        assert_eq!((inst.rows(), inst.cols()), (3, 3));
        assert!(inst.a_mass.iter().all(|m| *m == frac(1, 3)));
        let mids = inst.a_points.as_ref().unwrap();
        assert!(mids.contains(&RationalVector(vec![frac(1, 2), frac(1, 2)])));
        assert_eq!(inst.a_mass.iter().sum::<Rat>(), rat(1));
        assert_eq!(inst.b_mass.iter().sum::<Rat>(), rat(1));
    }

    #[test]
    fn p2_is_discretely_stable() {
        let pair = p2();
        for level in 0..=2 {
            let inst = discretize_canonical(&pair, level).unwrap();
            let cert = stability_certificate(&inst, PivotRule::Bland).unwrap();
            assert_eq!(cert.verdict, CertificateVerdict::Stable, "level {level}");
            assert_eq!(cert.gap, Some(rat(0)));
        }
    }

    #[test]
    fn heights_example_is_restricted_infeasible() {
        let p = build_reflexive(&[lv(&[2, -1]), lv(&[-1, 2]), lv(&[-1, -1])]).unwrap();
        let h = HeightFunction::max_of_linear(&p, &[lv(&[-1, 4]), lv(&[1, 5])]).unwrap();
        let pair = DualPair::new(p, h).unwrap();
        let inst = discretize_canonical(&pair, 1).unwrap();
        let cert = stability_certificate(&inst, PivotRule::Bland).unwrap();
        assert_eq!(cert.verdict, CertificateVerdict::InfeasibleRestricted);
        let w = cert.witness.unwrap();
        assert_eq!(w.side, Side::B);
        assert_eq!(pair.dual.facets[w.facets[0]].normal, lv(&[-1, 0]));
        assert_eq!((w.mass, w.reachable), (frac(4, 11), frac(1, 3)));
    }

    #[test]
    fn point_mass_like_nu_is_restricted_infeasible() {
        let pair = p2();
        let mu = measure_A(&pair).unwrap();
        let mut raw = vec![rat(0); pair.dual.facets.len()];
        raw[0] = rat(1);
        let nu = FacetMeasure::from_raw(Side::B, raw);
        let inst = discretize(&pair, &mu, &nu, 1).unwrap();
        let cert = stability_certificate(&inst, PivotRule::Bland).unwrap();
        assert_eq!(cert.verdict, CertificateVerdict::InfeasibleRestricted);
    }

    #[test]
    fn c_transform_of_zero() {
        let pair = p2();
        // A single A point (1,1) against the vertices of Delta with zero potential.
        let a = vec![(RationalVector::from_i64(&[1, 1]), rat(1))];
        let b: Vec<(RationalVector, Rat)> = pair
            .primal
            .vertices
            .iter()
            .map(|v| (v.to_rational(), frac(1, 3)))
            .collect();
        let probe = TransportInstance::from_points(a, b).unwrap();
        let phi = c_transform_b_to_a(&probe, &vec![rat(0); 3], false);
        assert_eq!(phi, vec![rat(1)]);
    }

    #[test]
    fn gauge_shift() {
        let pair = p2();
        let inst = discretize_canonical(&pair, 1).unwrap();
        let plan = solve_ot(&inst, false, PivotRule::Bland)
            .unwrap()
            .plan()
            .unwrap()
            .clone();
        let pot = kantorovich_potentials(&inst, &plan);
        let k = frac(7, 3);
        let shifted: Vec<Rat> = pot.psi.iter().map(|p| p + &k).collect();
        let phi2 = c_transform_b_to_a(&inst, &shifted, false);
        for (a, b) in phi2.iter().zip(&pot.phi) {
            assert_eq!(a, &(b - &k));
        }
        let pot2 = PotentialPair {
            phi: phi2,
            psi: shifted,
            restricted: false,
        };
        assert_eq!(dual_value(&inst, &pot2), plan.cost);
    }
}
