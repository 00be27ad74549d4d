//! Embedded fixtures: the 16 reflexive polygons and the named examples.

use num_bigint::BigInt;

use crate::duality::{build_reflexive, DualPair, HeightFunction};
use crate::error::Result;
use crate::lattice::LatticeVector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub id: &'static str,
    pub description: &'static str,
    pub vertices: Vec<Vec<i64>>,
    /// Non-default heights `(m, h(m))`; empty for `h0`.
    pub heights: Vec<(Vec<i64>, i64)>,
}

impl Fixture {
    pub fn lattice_vertices(&self) -> Vec<LatticeVector> {
        self.vertices
            .iter()
            .map(|v| LatticeVector::from_i64(v))
            .collect()
    }

    pub fn pair(&self) -> Result<DualPair> {
        let p = build_reflexive(&self.lattice_vertices())?;
        let h = HeightFunction::with_values(
            &p,
            self.heights
                .iter()
                .map(|(m, v)| (LatticeVector::from_i64(m), BigInt::from(*v))),
        )?;
        DualPair::new(p, h)
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }
}

fn fixture(id: &'static str, description: &'static str, vertices: &[&[i64]]) -> Fixture {
    Fixture {
        id,
        description,
        vertices: vertices.iter().map(|v| v.to_vec()).collect(),
        heights: Vec::new(),
    }
}

/// The 16 reflexive polygons up to unimodular equivalence.
pub fn reflexive_polygons() -> Vec<Fixture> {
    const POLYGONS: [&[[i64; 2]]; 16] = [
        &[[-1, -1], [1, 0], [0, 1]],
        &[[-1, -1], [1, -1], [0, 1]],
        &[[-1, 0], [0, -1], [1, 0], [0, 1]],
        &[[-1, -1], [0, -1], [1, 0], [0, 1]],
        &[[-1, -1], [0, -1], [1, 0], [-1, 1]],
        &[[-1, -1], [0, -1], [1, 0], [0, 1], [-1, 0]],
        &[[-2, -1], [1, -1], [0, 1]],
        &[[-1, -1], [0, -1], [1, 1], [-1, 1]],
        &[[-1, -1], [0, -1], [1, 0], [0, 1], [-1, 1]],
        &[[-1, -1], [0, -1], [1, 0], [1, 1], [0, 1], [-1, 0]],
        &[[-2, -1], [1, -1], [1, 0], [0, 1]],
        &[[-1, -1], [0, -1], [1, 0], [1, 1], [-1, 1]],
        &[[-2, -1], [2, -1], [0, 1]],
        &[[-1, -1], [1, -1], [1, 1], [-1, 1]],
        &[[-2, -1], [1, -1], [1, 1], [0, 1]],
        &[[-2, -1], [1, -1], [1, 2]],
    ];
    const IDS: [&str; 16] = [
        "2d-01", "2d-02", "2d-03", "2d-04", "2d-05", "2d-06", "2d-07", "2d-08", "2d-09", "2d-10",
        "2d-11", "2d-12", "2d-13", "2d-14", "2d-15", "2d-16",
    ];
    POLYGONS
        .iter()
        .zip(IDS)
        .map(|(vs, id)| Fixture {
            id,
            description: "reflexive polygon",
            vertices: vs.iter().map(|v| v.to_vec()).collect(),
            heights: Vec::new(),
        })
        .collect()
}

/// Named examples used throughout the tests and the guide.
pub fn named() -> Vec<Fixture> {
    let mut p2_heights = fixture(
        "p2-heights",
        "projective plane with h = max(h0, <(-1,4),.>, <(1,5),.>)",
        &[&[2, -1], &[-1, 2], &[-1, -1]],
    );
    p2_heights.heights = vec![(vec![0, 1], 5), (vec![-1, 1], 5), (vec![-1, 2], 9)];
    vec![
        fixture("p2", "projective plane", &[&[2, -1], &[-1, 2], &[-1, -1]]),
        p2_heights,
        fixture(
            "unstable-quad",
            "conv{e0+e1, e0, -e1, -e0+e1}",
            &[&[1, 1], &[1, 0], &[0, -1], &[-1, 1]],
        ),
        fixture(
            "diamond",
            "conv{+-e0, +-e1}",
            &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]],
        ),
        fixture("segment", "the reflexive segment [-1, 1]", &[&[-1], &[1]]),
        fixture(
            "id-16",
            "conv{e0, e1, e2, -2e0-e1-e2, -e0+e1}",
            &[
                &[1, 0, 0],
                &[0, 1, 0],
                &[0, 0, 1],
                &[-2, -1, -1],
                &[-1, 1, 0],
            ],
        ),
        fixture(
            "id-2",
            "conv{e0, e1, e2, -3e0-e1-e2}",
            &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-3, -1, -1]],
        ),
        fixture(
            "simplex-3",
            "reflexive simplex whose dual is the unimodular simplex",
            &[&[3, -1, -1], &[-1, 3, -1], &[-1, -1, 3], &[-1, -1, -1]],
        ),
        fixture(
            "cube-2",
            "the square [-1, 1]^2",
            &[&[-1, -1], &[1, -1], &[1, 1], &[-1, 1]],
        ),
        fixture(
            "cube-3",
            "the cube [-1, 1]^3",
            &[
                &[-1, -1, -1],
                &[1, -1, -1],
                &[-1, 1, -1],
                &[1, 1, -1],
                &[-1, -1, 1],
                &[1, -1, 1],
                &[-1, 1, 1],
                &[1, 1, 1],
            ],
        ),
    ]
}

/// Every embedded fixture, polygons first.
pub fn all() -> Vec<Fixture> {
    let mut v = reflexive_polygons();
    v.extend(named());
    v
}

pub fn by_id(id: &str) -> Option<Fixture> {
    all().into_iter().find(|f| f.id == id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::screen::{classify, ClassifyOptions, StructuralVerdict};
    use std::collections::BTreeSet;

    #[test]
    fn every_fixture_is_reflexive() {
        for f in all() {
            f.pair().unwrap_or_else(|e| panic!("{}: {e}", f.id));
        }
    }

    #[test]
    fn polygons_are_distinct() {
        let polys = reflexive_polygons();
        let sets: BTreeSet<BTreeSet<Vec<i64>>> = polys
            .iter()
            .map(|f| f.vertices.iter().cloned().collect())
            .collect();
        assert_eq!(sets.len(), 16);
        // Unimodular invariants: lattice points, vertices, and sorted edge
        // lengths of the polygon and of its dual.
        type Invariant = (
            usize,
            usize,
            Vec<crate::lattice::Rat>,
            Vec<crate::lattice::Rat>,
        );
        let invariants: BTreeSet<Invariant> = polys
            .iter()
            .map(|f| {
                let pair = f.pair().unwrap();
                let mut edges = crate::volume::measure_A(&pair).unwrap().raw;
                edges.sort();
                let mut dual_edges = crate::volume::measure_B(&pair).unwrap().raw;
                dual_edges.sort();
                (
                    pair.primal.lattice_points.len(),
                    pair.primal.vertices.len(),
                    edges,
                    dual_edges,
                )
            })
            .collect();
        assert_eq!(invariants.len(), 16);
    }

    #[test]
    fn polygon_aggregates() {
        let mut sss = 0;
        let mut unstable = 0;
        let mut li = 0;
        let mut both = 0;
        for f in reflexive_polygons() {
            let r = classify(&f.pair().unwrap(), &ClassifyOptions::default()).unwrap();
            let s = r.verdict == StructuralVerdict::StrictlySemistable;
            let l = r.li_admissible == Some(true);
            sss += usize::from(s);
            unstable += usize::from(r.verdict == StructuralVerdict::Unstable);
            li += usize::from(l);
            both += usize::from(s && l);
        }
        assert_eq!((sss, unstable, li, both), (5, 2, 7, 3));
    }

    #[test]
    fn height_fixture_matches_its_formula() {
        let f = by_id("p2-heights").unwrap();
        let pair = f.pair().unwrap();
        let p = build_reflexive(&f.lattice_vertices()).unwrap();
        let g = HeightFunction::max_of_linear(
            &p,
            &[
                LatticeVector::from_i64(&[-1, 4]),
                LatticeVector::from_i64(&[1, 5]),
            ],
        )
        .unwrap();
        assert_eq!(pair.height, g);
    }
}
