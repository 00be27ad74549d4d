//! Exact convex hulls, face lattices, pulling triangulations and edgewise
//! subdivision for small point sets.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{
    cofactor_normal, gauss_solve, primitive_direction, rank, rat, Halfspace, LatticeVector, Rat,
    RationalVector,
};

/// A supporting hyperplane of a full-dimensional hull together with the
/// indices of the points lying on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullFacet {
    pub halfspace: Halfspace,
    pub incident: Vec<usize>,
}

/// Facets of the hull of a full-dimensional point set in `R^k`.
///
/// Normals are primitive integer vectors; offsets are rational.
pub fn hull_facets(points: &[RationalVector]) -> Result<Vec<HullFacet>> {
    let Some(first) = points.first() else {
        return Err(Error::Degenerate);
    };
    let k = first.dim();
    if affine_rank(points) < k {
        return Err(Error::Degenerate);
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut consider = |normal: LatticeVector, offset: Rat| {
        let slacks: Vec<Rat> = points
            .iter()
            .map(|p| &offset - p.dot_lattice(&normal))
            .collect();
        let (normal, offset) = if slacks.iter().all(|s| !s.is_negative()) {
            (normal, offset)
        } else if slacks.iter().all(|s| !s.is_positive()) {
            (normal.neg(), -offset)
        } else {
            return;
        };
        let hs = Halfspace::new(normal, offset);
        if seen.insert(hs.clone()) {
            let incident = (0..points.len())
                .filter(|&i| hs.is_tight(&points[i]))
                .collect();
            out.push(HullFacet {
                halfspace: hs,
                incident,
            });
        }
    };
    if k == 1 {
        for p in points {
            consider(LatticeVector::from_i64(&[1]), p.0[0].clone());
        }
    } else {
        for subset in (0..points.len()).combinations(k) {
            let rows: Vec<Vec<Rat>> = subset[1..]
                .iter()
                .map(|&i| points[i].sub(&points[subset[0]]).0)
                .collect();
            let Some(normal) = primitive_direction(&cofactor_normal(&rows, k)) else {
                continue;
            };
            let offset = points[subset[0]].dot_lattice(&normal);
            consider(normal, offset);
        }
    }
    out.sort_by(|a, b| a.halfspace.cmp(&b.halfspace));
    Ok(out)
}

pub fn affine_rank(points: &[RationalVector]) -> usize {
    if points.len() < 2 {
        return 0;
    }
    let diffs: Vec<Vec<Rat>> = points[1..].iter().map(|p| p.sub(&points[0]).0).collect();
    rank(&diffs)
}

/// The affine span of a point set with an exact coordinate chart, plus the
/// hull inequalities expressed in that chart.
#[derive(Clone, Debug)]
pub struct AffineHull {
    pub origin: RationalVector,
    pub basis: Vec<RationalVector>,
    pivots: Vec<usize>,
    facets: Vec<Halfspace>,
}

impl AffineHull {
    pub fn new(points: &[RationalVector]) -> Self {
        let origin = points[0].clone();
        let mut basis: Vec<RationalVector> = Vec::new();
        for p in &points[1..] {
            let d = p.sub(&origin);
            let mut rows: Vec<Vec<Rat>> = basis.iter().map(|b| b.0.clone()).collect();
            rows.push(d.0.clone());
            if rank(&rows) > basis.len() {
                basis.push(d);
            }
        }
        let r = basis.len();
        let k = origin.dim();
        let mut pivots = Vec::new();
        for c in 0..k {
            let mut cand = pivots.clone();
            cand.push(c);
            let rows: Vec<Vec<Rat>> = cand
                .iter()
                .map(|&j| basis.iter().map(|b| b.0[j].clone()).collect())
                .collect();
            if rank(&rows) == cand.len() {
                pivots = cand;
            }
            if pivots.len() == r {
                break;
            }
        }
        let mut hull = AffineHull {
            origin,
            basis,
            pivots,
            facets: Vec::new(),
        };
        if r > 0 {
            let coords: Vec<RationalVector> =
                points.iter().map(|p| hull.coords(p).unwrap()).collect();
            hull.facets = hull_facets(&coords)
                .expect("chart coordinates span the chart")
                .into_iter()
                .map(|f| f.halfspace)
                .collect();
        }
        hull
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Chart coordinates of `p`, or `None` when `p` is off the affine span.
    pub fn coords(&self, p: &RationalVector) -> Option<RationalVector> {
        let d = p.sub(&self.origin);
        let r = self.basis.len();
        if r == 0 {
            return d
                .0
                .iter()
                .all(Zero::is_zero)
                .then(|| RationalVector(Vec::new()));
        }
        let a: Vec<Vec<Rat>> = self
            .pivots
            .iter()
            .map(|&j| self.basis.iter().map(|b| b.0[j].clone()).collect())
            .collect();
        let b: Vec<Rat> = self.pivots.iter().map(|&j| d.0[j].clone()).collect();
        let y = gauss_solve(a, b)?;
        let back = self.point(&RationalVector(y.clone()));
        (back == *p).then_some(RationalVector(y))
    }

    pub fn point(&self, y: &RationalVector) -> RationalVector {
        let mut x = self.origin.clone();
        for (c, b) in y.0.iter().zip(&self.basis) {
            x = x.add(&b.scale(c));
        }
        x
    }

    pub fn contains(&self, p: &RationalVector) -> bool {
        match self.coords(p) {
            Some(y) => self.facets.iter().all(|f| f.contains(&y)),
            None => false,
        }
    }
}

/// A face given by the indices of its vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    pub vertices: Vec<usize>,
    pub dim: usize,
}

/// All non-empty faces, obtained by closing the facet vertex sets under
/// intersection, plus the polytope itself. Sorted by dimension.
pub fn face_lattice(points: &[RationalVector], facet_sets: &[Vec<usize>]) -> Vec<Face> {
    let mut sets: BTreeSet<Vec<usize>> = facet_sets.iter().cloned().collect();
    let mut frontier: Vec<Vec<usize>> = sets.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for b in facet_sets {
                let c: Vec<usize> = a.iter().filter(|i| b.contains(i)).copied().collect();
                if !c.is_empty() && sets.insert(c.clone()) {
                    next.push(c);
                }
            }
        }
        frontier = next;
    }
    sets.insert((0..points.len()).collect());
    let mut faces: Vec<Face> = sets
        .into_iter()
        .map(|vertices| {
            let pts: Vec<RationalVector> = vertices.iter().map(|&i| points[i].clone()).collect();
            Face {
                dim: affine_rank(&pts),
                vertices,
            }
        })
        .collect();
    faces.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));
    faces
}

/// A full-dimensional polytope in `R^k` given by exact points.
#[derive(Clone, Debug)]
pub struct Polytope {
    pub vertices: Vec<RationalVector>,
    pub facets: Vec<HullFacet>,
    pub faces: Vec<Face>,
}

impl Polytope {
    /// Builds the hull, discarding points that are not vertices.
    pub fn from_points(points: &[RationalVector]) -> Result<Self> {
        let uniq: Vec<RationalVector> = points
            .iter()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let facets = hull_facets(&uniq)?;
        let k = uniq[0].dim();
        let vertices: Vec<RationalVector> = uniq
            .iter()
            .filter(|p| {
                let rows: Vec<Vec<Rat>> = facets
                    .iter()
                    .filter(|f| f.halfspace.is_tight(p))
                    .map(|f| f.halfspace.normal.to_rational().0)
                    .collect();
                rank(&rows) == k
            })
            .cloned()
            .collect();
        let facets = hull_facets(&vertices)?;
        let sets: Vec<Vec<usize>> = facets.iter().map(|f| f.incident.clone()).collect();
        let faces = face_lattice(&vertices, &sets);
        Ok(Polytope {
            vertices,
            facets,
            faces,
        })
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    /// Pulling triangulation: every face is coned from its smallest vertex
    /// over the triangulations of its facets that avoid it.
    pub fn triangulate(&self) -> Vec<Vec<usize>> {
        let top = self.faces.len() - 1;
        self.triangulate_face(top)
    }

    fn triangulate_face(&self, idx: usize) -> Vec<Vec<usize>> {
        let face = &self.faces[idx];
        if face.dim == 0 {
            return vec![face.vertices.clone()];
        }
        let apex = face.vertices[0];
        let mut out = Vec::new();
        for (j, g) in self.faces.iter().enumerate() {
            if g.dim + 1 == face.dim
                && !g.vertices.contains(&apex)
                && g.vertices.iter().all(|v| face.vertices.contains(v))
            {
                for mut s in self.triangulate_face(j) {
                    s.insert(0, apex);
                    out.push(s);
                }
            }
        }
        out
    }

    /// `k!` times the Lebesgue volume.
    pub fn normalized_volume(&self) -> Rat {
        self.triangulate()
            .iter()
            .map(|s| {
                let pts: Vec<RationalVector> =
                    s.iter().map(|&i| self.vertices[i].clone()).collect();
                simplex_normalized_volume(&pts)
            })
            .sum()
    }

    pub fn contains(&self, p: &RationalVector) -> bool {
        self.facets.iter().all(|f| f.halfspace.contains(p))
    }
}

/// `|det(p_1 - p_0, ..., p_k - p_0)|` for a full-dimensional simplex.
pub fn simplex_normalized_volume(pts: &[RationalVector]) -> Rat {
    let rows: Vec<Vec<Rat>> = pts[1..].iter().map(|p| p.sub(&pts[0]).0).collect();
    crate::lattice::det_rational(&rows).abs()
}

/// Splits a `d`-simplex (any ambient dimension) into `k^d` simplices of equal
/// volume by edgewise subdivision, i.e. the Freudenthal triangulation of the
/// staircase simplex `{k >= y_1 >= ... >= y_d >= 0}`.
pub fn edgewise_subdivision(simplex: &[RationalVector], k: usize) -> Vec<Vec<RationalVector>> {
    let d = simplex.len() - 1;
    if d == 0 || k == 1 {
        return vec![simplex.to_vec()];
    }
    let kr = rat(k as i64);
    let steps: Vec<RationalVector> = (1..=d).map(|i| simplex[i].sub(&simplex[i - 1])).collect();
    let to_point = |y: &[i64]| {
        let mut x = simplex[0].clone();
        for (yi, s) in y.iter().zip(&steps) {
            x = x.add(&s.scale(&(rat(*yi) / &kr)));
        }
        x
    };
    let inside =
        |y: &[i64]| y[0] <= k as i64 && y[d - 1] >= 0 && y.windows(2).all(|w| w[0] >= w[1]);
    let mut out = Vec::new();
    for z in (0..d).map(|_| 0..k as i64).multi_cartesian_product() {
        for perm in (0..d).permutations(d) {
            let mut y = z.clone();
            let mut verts = vec![y.clone()];
            for &p in &perm {
                y[p] += 1;
                verts.push(y.clone());
            }
            if verts.iter().all(|v| inside(v)) {
                out.push(verts.iter().map(|v| to_point(v)).collect());
            }
        }
    }
    debug_assert_eq!(out.len(), k.pow(d as u32));
    out
}

/// Positive rational weight of each point when the first point is the
/// reference; used only in tests of the subdivision.
#[cfg(test)]
fn total(v: &[Rat]) -> Rat {
    v.iter().fold(Rat::zero(), |a, b| a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::frac;

    fn rv(c: &[i64]) -> RationalVector {
        RationalVector::from_i64(c)
    }

    #[test]
    fn square_hull_and_faces() {
        let pts = vec![
            rv(&[1, 1]),
            rv(&[1, -1]),
            rv(&[-1, 1]),
            rv(&[-1, -1]),
            rv(&[0, 0]),
        ];
        let p = Polytope::from_points(&pts).unwrap();
        assert_eq!(p.vertices.len(), 4);
        assert_eq!(p.facets.len(), 4);
        assert!(p.facets.iter().all(|f| f.halfspace.offset == rat(1)));
        assert_eq!(p.faces.iter().filter(|f| f.dim == 0).count(), 4);
        assert_eq!(p.faces.iter().filter(|f| f.dim == 1).count(), 4);
        assert_eq!(p.triangulate().len(), 2);
        assert_eq!(p.normalized_volume(), rat(8));
    }

    #[test]
    fn cube_triangulation_volume() {
        let pts: Vec<RationalVector> = (0..8)
            .map(|i| rv(&[(i & 1) as i64, ((i >> 1) & 1) as i64, ((i >> 2) & 1) as i64]))
            .collect();
        let p = Polytope::from_points(&pts).unwrap();
        assert_eq!(p.facets.len(), 6);
        assert_eq!(p.normalized_volume(), rat(6));
    }

    #[test]
    fn affine_hull_of_segment() {
        let h = AffineHull::new(&[rv(&[-1, 0]), rv(&[1, 0])]);
        assert_eq!(h.dim(), 1);
        assert!(h.contains(&rv(&[0, 0])));
        assert!(!h.contains(&rv(&[0, 1])));
        assert!(!h.contains(&rv(&[2, 0])));
    }

    #[test]
    fn subdivision_counts_and_volumes() {
        let tri = vec![rv(&[0, 0]), rv(&[3, 0]), rv(&[0, 3])];
        for k in 1..5 {
            let parts = edgewise_subdivision(&tri, k);
            assert_eq!(parts.len(), k * k);
            let vols: Vec<Rat> = parts.iter().map(|s| simplex_normalized_volume(s)).collect();
            assert!(vols.iter().all(|v| *v == rat(9) / rat((k * k) as i64)));
            assert_eq!(total(&vols), rat(9));
        }
        let tet = vec![
            rv(&[0, 0, 0]),
            rv(&[1, 0, 0]),
            rv(&[0, 1, 0]),
            rv(&[0, 0, 1]),
        ];
        let parts = edgewise_subdivision(&tet, 2);
        assert_eq!(parts.len(), 8);
        assert!(parts
            .iter()
            .all(|s| simplex_normalized_volume(s) == frac(1, 8)));
    }
}
