//! Randomized invariants: unimodular invariance of the screens and exact
//! optimality of the transport solver.

use std::collections::BTreeSet;

use num_rational::BigRational;
use proptest::prelude::*;
use reflexive_ma::duality::DualPair;
use reflexive_ma::fixtures;
use reflexive_ma::lattice::{LatticeVector, Rat};
use reflexive_ma::screen::{classify, ClassifyOptions};
use reflexive_ma::transport::{
    c_monotonicity_check, dual_value, kantorovich_potentials, solve_ot, PivotRule, SolveOutcome,
    TransportInstance,
};

/// A unimodular matrix as a product of elementary row operations.
fn unimodular(dim: usize, ops: &[(usize, usize, i64)]) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..dim)
        .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
        .collect();
    for &(a, b, k) in ops {
        let (a, b) = (a % dim, b % dim);
        if a == b {
            m[a].iter_mut().for_each(|x| *x = -*x);
        } else {
            let src = m[b].clone();
            m[a].iter_mut().zip(src).for_each(|(x, y)| *x += k * y);
        }
    }
    m
}

fn transform(g: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    g.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

type Signature = (String, BTreeSet<(String, Rat, Rat)>);

fn signature(pair: &DualPair) -> Signature {
    let r = classify(pair, &ClassifyOptions::default()).unwrap();
    let ws = r
        .witnesses
        .iter()
        .map(|w| {
            (
                format!("{:?}{:?}", w.family, w.relation),
                w.lhs.clone(),
                w.rhs.clone(),
            )
        })
        .collect();
    (format!("{:?} {:?}", r.verdict, r.li_admissible), ws)
}

fn rat(n: u8) -> Rat {
    BigRational::from_integer(n.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn screens_are_unimodular_invariants(
        which in 0usize..19,
        ops in prop::collection::vec((0usize..3, 0usize..3, -2i64..=2), 0..6),
    ) {
        let mut pool = fixtures::reflexive_polygons();
        pool.extend(["id-2", "id-16", "unstable-quad"].iter().map(|id| fixtures::by_id(id).unwrap()));
        let f = &pool[which];
        let g = unimodular(f.dim(), &ops);
        let moved: Vec<LatticeVector> =
            f.vertices.iter().map(|v| LatticeVector::from_i64(&transform(&g, v))).collect();
        let original = f.pair().unwrap();
        let image = DualPair::from_vertices(&moved).unwrap();
        prop_assert_eq!(signature(&original), signature(&image));
    }

    #[test]
    fn solver_is_exact_and_rule_independent(
        a in prop::collection::vec(1u8..6, 1..5),
        b in prop::collection::vec(1u8..6, 1..5),
        costs in prop::collection::vec(-9i64..10, 16),
        mask in prop::collection::vec(any::<bool>(), 16),
    ) {
        // Balance the two sides by scaling to a common total.
        let ta: u32 = a.iter().map(|&x| u32::from(x)).sum();
        let tb: u32 = b.iter().map(|&x| u32::from(x)).sum();
        let a_mass: Vec<Rat> = a.iter().map(|&x| rat(x) / Rat::from_integer(ta.into())).collect();
        let b_mass: Vec<Rat> = b.iter().map(|&x| rat(x) / Rat::from_integer(tb.into())).collect();
        let cost: Vec<Vec<Rat>> = (0..a.len())
            .map(|i| (0..b.len()).map(|j| Rat::from_integer(costs[i * 4 + j].into())).collect())
            .collect();
        let allowed: Vec<Vec<bool>> = (0..a.len()).map(|i| (0..b.len()).map(|j| mask[i * 4 + j]).collect()).collect();
        let inst = TransportInstance::from_costs(a_mass.clone(), b_mass.clone(), cost, Some(allowed)).unwrap();

        let mut costs_seen = Vec::new();
        for rule in [PivotRule::Bland, PivotRule::Best] {
            let free = solve_ot(&inst, false, rule).unwrap();
            let SolveOutcome::Optimal(plan) = free else { panic!("unrestricted problem must be feasible") };
            prop_assert_eq!(plan.row_sums(inst.rows()), a_mass.clone());
            prop_assert_eq!(plan.col_sums(inst.cols()), b_mass.clone());
            prop_assert_eq!(dual_value(&inst, &kantorovich_potentials(&inst, &plan)), plan.cost.clone());
            prop_assert!(c_monotonicity_check(&inst, &plan).monotone);
            match solve_ot(&inst, true, rule).unwrap() {
                SolveOutcome::Optimal(r) => {
                    prop_assert!(r.cost >= plan.cost);
                    prop_assert!(r.flows.iter().all(|(i, j, _)| inst.allowed[*i][*j]));
                    costs_seen.push(Some(r.cost));
                }
                SolveOutcome::Infeasible(w) => {
                    prop_assert!(w.mass > w.reachable);
                    costs_seen.push(None);
                }
            }
            costs_seen.push(Some(plan.cost));
        }
        prop_assert_eq!(&costs_seen[..2], &costs_seen[2..]);
    }
}
