#![allow(dead_code)]

use std::collections::BTreeSet;

use reflexive_ma::duality::{build_reflexive, compatible_chart_pair, DualPair};
use reflexive_ma::lattice::{LatticeVector, Rat};
use reflexive_ma::singular::{c_gradient, chart_labels, t_map, DiscretePotential};
use reflexive_ma::transport::{
    c_monotonicity_check, discretize_canonical, dual_value, kantorovich_potentials, solve_ot,
    PivotRule, SolveOutcome,
};
use reflexive_ma::volume::{measure_A, measure_B};

pub fn lv(c: &[i64]) -> LatticeVector {
    LatticeVector::from_i64(c)
}

fn vertex_set(vs: &[LatticeVector]) -> BTreeSet<LatticeVector> {
    vs.iter().cloned().collect()
}

/// Dual of the dual is the polytope itself (trivial heights only).
pub fn check_involution(pair: &DualPair) -> Result<(), String> {
    if !pair.height.is_trivial() {
        return Ok(());
    }
    let dual_vs: Vec<LatticeVector> = pair
        .dual
        .vertices
        .iter()
        .map(|v| v.to_lattice().ok_or("dual vertex is not integral"))
        .collect::<Result<_, _>>()?;
    let back =
        DualPair::from_vertices(&dual_vs).map_err(|e| format!("dual is not reflexive: {e}"))?;
    let again: Vec<LatticeVector> = back
        .dual
        .vertices
        .iter()
        .map(|v| v.to_lattice().ok_or("double dual vertex is not integral"))
        .collect::<Result<_, _>>()?;
    if vertex_set(&again) != vertex_set(&pair.primal.vertices) {
        return Err("double dual differs from the polytope".into());
    }
    Ok(())
}

pub fn check_primitive_normals(pair: &DualPair) -> Result<(), String> {
    let one = num_bigint::BigInt::from(1);
    let primal = pair.primal.facets.iter().map(|f| &f.normal);
    let dual = pair.dual.facets.iter().map(|f| &f.normal);
    match primal.chain(dual).find(|n| n.content() != one) {
        Some(n) => Err(format!("normal {n} is not primitive")),
        None => Ok(()),
    }
}

pub fn check_normalization(pair: &DualPair) -> Result<(), String> {
    let mu = measure_A(pair).map_err(|e| e.to_string())?;
    let nu = measure_B(pair).map_err(|e| e.to_string())?;
    if mu.is_probability() && nu.is_probability() {
        Ok(())
    } else {
        Err("a boundary measure does not sum to 1".into())
    }
}

/// Both compatibility identities for every compatible `(sigma, tau)`;
/// returns the number of pairs checked.
pub fn check_compatibility_all(pair: &DualPair) -> Result<usize, String> {
    let mut count = 0;
    for s in 0..pair.primal.facets.len() {
        for t in 0..pair.dual.facets.len() {
            if pair.allowed(s, t) {
                compatible_chart_pair(pair, s, t)
                    .map_err(|e| format!("(sigma {s}, tau {t}): {e}"))?;
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Exact marginals, zero duality gap and c-monotonicity of every optimal
/// solve at `level`; returns the number of solves checked.
pub fn check_solves(pair: &DualPair, level: u32) -> Result<usize, String> {
    let inst = discretize_canonical(pair, level).map_err(|e| e.to_string())?;
    let mut count = 0;
    for restrict in [false, true] {
        for rule in [PivotRule::Bland, PivotRule::Best] {
            let plan = match solve_ot(&inst, restrict, rule).map_err(|e| e.to_string())? {
                SolveOutcome::Optimal(p) => p,
                SolveOutcome::Infeasible(_) => continue,
            };
            if plan.row_sums(inst.rows()) != inst.a_mass
                || plan.col_sums(inst.cols()) != inst.b_mass
            {
                return Err(format!("marginals off (restricted = {restrict})"));
            }
            let pot = kantorovich_potentials(&inst, &plan);
            if dual_value(&inst, &pot) != plan.cost {
                return Err(format!("duality gap (restricted = {restrict})"));
            }
            let mono = c_monotonicity_check(&inst, &plan);
            if !mono.monotone {
                return Err(format!("support not c-monotone: {:?}", mono.violation));
            }
            count += 1;
        }
    }
    Ok(count)
}

/// Chart labels, c-gradients and `T` are unchanged by a constant shift of the potential.
pub fn check_gauge(pair: &DualPair, level_a: u32, level_b: u32, shift: &Rat) -> Result<(), String> {
    let pot = match DiscretePotential::for_pair(pair, level_a, level_b) {
        Ok(p) => p,
        Err(reflexive_ma::Error::HypothesisNotSatisfied(_)) => return Ok(()),
        Err(e) => return Err(e.to_string()),
    };
    let moved = pot.shifted(shift);
    let a = chart_labels(pair, &pot).map_err(|e| e.to_string())?;
    let b = chart_labels(pair, &moved).map_err(|e| e.to_string())?;
    if a.labels != b.labels {
        return Err("chart labels depend on the gauge".into());
    }
    for (j, n) in pot.b_points.iter().enumerate() {
        let taus = [pot.b_facets[j]];
        if c_gradient(&pot, n, &taus) != c_gradient(&moved, n, &taus) {
            return Err("c-gradient depends on the gauge".into());
        }
    }
    for (i, m) in pot.points.iter().enumerate() {
        let x = t_map(pair, &pot, m, pot.facets[i]).map_err(|e| e.to_string())?;
        let y = t_map(pair, &moved, m, pot.facets[i]).map_err(|e| e.to_string())?;
        if x != y {
            return Err("T depends on the gauge".into());
        }
    }
    Ok(())
}

pub fn reflexive(vs: &[&[i64]]) -> DualPair {
    let p = build_reflexive(&vs.iter().map(|v| lv(v)).collect::<Vec<_>>()).unwrap();
    DualPair::trivial(p).unwrap()
}
