//! Lattice-normalized facet volumes and the boundary measures built from them.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::duality::DualPair;
use crate::error::{Error, Result};
use crate::geometry::Polytope;
use crate::lattice::{
    fmt_rat, solve_rational, unimodular_completion, Halfspace, IntegerMatrix, LatticeVector, Rat,
    RationalVector,
};

/// Integral affine coordinates on the hyperplane `<n, x> = c`.
///
/// Points are written `x = c u_0 + y_1 b_1 + ... + y_d b_d` where `b_i` span
/// `n^perp cap Z^{d+1}`, so unit simplices in `y` have lattice volume 1.
#[derive(Clone, Debug)]
pub struct FacetChart {
    pub normal: LatticeVector,
    pub offset: Rat,
    pub origin: RationalVector,
    pub basis: Vec<LatticeVector>,
    dual_rows: Vec<LatticeVector>,
}

impl FacetChart {
    pub fn new(normal: &LatticeVector, offset: &Rat) -> Result<Self> {
        if !offset.is_integer() {
            return Err(Error::NonIntegralAffineLattice);
        }
        let cols = unimodular_completion(normal)?;
        let dim = normal.dim();
        let u = IntegerMatrix::from_columns(&cols);
        let mut inv_cols = Vec::with_capacity(dim);
        for j in 0..dim {
            let e = LatticeVector::unit(dim, j).to_rational();
            let c = solve_rational(&u, &e)?
                .to_lattice()
                .ok_or_else(|| Error::internal("completion is not unimodular"))?;
            inv_cols.push(c);
        }
        let inv = IntegerMatrix::from_columns(&inv_cols);
        let dual_rows = (1..dim).map(|i| inv.row(i)).collect();
        Ok(FacetChart {
            normal: normal.clone(),
            offset: offset.clone(),
            origin: cols[0].to_rational().scale(offset),
            basis: cols[1..].to_vec(),
            dual_rows,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Chart coordinates of a point on the hyperplane.
    pub fn coords(&self, x: &RationalVector) -> RationalVector {
        RationalVector(self.dual_rows.iter().map(|r| x.dot_lattice(r)).collect())
    }

    pub fn point(&self, y: &RationalVector) -> RationalVector {
        let mut x = self.origin.clone();
        for (yi, b) in y.0.iter().zip(&self.basis) {
            x = x.add_scaled_lattice(yi, b);
        }
        x
    }

    /// Restricts `<a, x> <= beta` to the hyperplane, in chart coordinates.
    pub fn pull_back(&self, h: &Halfspace) -> (LatticeVector, Rat) {
        let normal = LatticeVector(self.basis.iter().map(|b| b.dot(&h.normal)).collect());
        let offset = &h.offset - self.origin.dot_lattice(&h.normal);
        (normal, offset)
    }
}

/// Lattice volume of the convex hull of `vertices`, which lie on
/// `<normal, x> = offset`, normalized so a unimodular simplex has volume 1.
pub fn lattice_volume_on_hyperplane(
    vertices: &[RationalVector],
    normal: &LatticeVector,
    offset: &Rat,
) -> Result<Rat> {
    let chart = FacetChart::new(normal, offset)?;
    if chart.dim() == 0 {
        return Ok(Rat::one());
    }
    let coords: Vec<RationalVector> = vertices.iter().map(|v| chart.coords(v)).collect();
    Ok(Polytope::from_points(&coords)?.normalized_volume())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    /// `A = boundary of Delta`.
    A,
    /// `B = boundary of Delta^vee_h`.
    B,
}

pub fn facet_lattice_volume(pair: &DualPair, side: Side, facet: usize) -> Result<Rat> {
    match side {
        Side::A => {
            let f = &pair.primal.facets[facet];
            let pts: Vec<RationalVector> = f
                .vertices
                .iter()
                .map(|&i| pair.primal.vertices[i].to_rational())
                .collect();
            lattice_volume_on_hyperplane(&pts, &f.normal, &Rat::one())
        }
        Side::B => {
            let f = &pair.dual.facets[facet];
            lattice_volume_on_hyperplane(
                &pair.dual.facet_points(facet),
                &f.normal,
                &Rat::from_integer(f.offset.clone()),
            )
        }
    }
}

/// The cone measure on one side: raw facet volumes and their normalized weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetMeasure {
    pub side: Side,
    pub raw: Vec<Rat>,
    pub total: Rat,
    pub weights: Vec<Rat>,
}

impl FacetMeasure {
    pub fn from_raw(side: Side, raw: Vec<Rat>) -> Self {
        let total: Rat = raw.iter().sum();
        let weights = raw.iter().map(|r| r / &total).collect();
        FacetMeasure {
            side,
            raw,
            total,
            weights,
        }
    }

    /// Normalized mass of a set of facets.
    pub fn mass(&self, facets: &[usize]) -> Rat {
        facets.iter().map(|&i| self.weights[i].clone()).sum()
    }

    /// Raw volume of a set of facets.
    pub fn raw_mass(&self, facets: &[usize]) -> Rat {
        facets.iter().map(|&i| self.raw[i].clone()).sum()
    }

    pub fn is_probability(&self) -> bool {
        self.weights.iter().sum::<Rat>().is_one() && self.weights.iter().all(|w| *w >= Rat::zero())
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self.raw.iter().map(fmt_rat).collect();
        format!("[{}] / {}", parts.join(", "), fmt_rat(&self.total))
    }
}

#[allow(non_snake_case)]
pub fn measure_A(pair: &DualPair) -> Result<FacetMeasure> {
    let raw = (0..pair.primal.facets.len())
        .map(|i| facet_lattice_volume(pair, Side::A, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(FacetMeasure::from_raw(Side::A, raw))
}

#[allow(non_snake_case)]
pub fn measure_B(pair: &DualPair) -> Result<FacetMeasure> {
    let raw = (0..pair.dual.facets.len())
        .map(|i| facet_lattice_volume(pair, Side::B, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(FacetMeasure::from_raw(Side::B, raw))
}
