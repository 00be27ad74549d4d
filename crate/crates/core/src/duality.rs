//! Reflexive polytopes, height functions, the deformed dual and the chart
//! maps relating the two boundaries.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{affine_rank, Face, Polytope};
use crate::lattice::{
    kernel_lattice_basis, lattice_points, rat, vertex_enumeration, Halfspace, HalfspaceSystem,
    IntegerMatrix, LatticeVector, Rat, RationalVector,
};

/// A facet `sigma` of `Delta`: `<m, n_sigma> <= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimalFacet {
    pub normal: LatticeVector,
    pub vertices: Vec<usize>,
    /// Indices into [`ReflexivePolytope::lattice_points`] of the points on the facet.
    pub lattice_points: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct ReflexivePolytope {
    pub dim: usize,
    pub vertices: Vec<LatticeVector>,
    pub facets: Vec<PrimalFacet>,
    pub lattice_points: Vec<LatticeVector>,
    pub faces: Vec<Face>,
}

impl ReflexivePolytope {
    pub fn vertex_points(&self) -> Vec<RationalVector> {
        self.vertices.iter().map(|v| v.to_rational()).collect()
    }

    pub fn contains(&self, m: &RationalVector) -> bool {
        self.facets
            .iter()
            .all(|f| m.dot_lattice(&f.normal) <= rat(1))
    }

    pub fn is_lattice_point(&self, m: &LatticeVector) -> bool {
        self.lattice_points.binary_search(m).is_ok()
    }

    pub fn facet_contains(&self, facet: usize, m: &LatticeVector) -> bool {
        m.dot(&self.facets[facet].normal).is_one()
    }

    pub fn vertex_index(&self, v: &LatticeVector) -> Option<usize> {
        self.vertices.iter().position(|w| w == v)
    }
}

/// Builds `Delta` from integral points whose hull is full-dimensional and
/// checks reflexivity.
pub fn build_reflexive(points: &[LatticeVector]) -> Result<ReflexivePolytope> {
    if points.is_empty() {
        return Err(Error::domain("no vertices"));
    }
    let dim = points[0].dim();
    if points.iter().any(|p| p.dim() != dim) {
        return Err(Error::domain("vertices of mixed dimension"));
    }
    let rational: Vec<RationalVector> = points.iter().map(|p| p.to_rational()).collect();
    let hull = Polytope::from_points(&rational)
        .map_err(|_| Error::domain("hull is not full-dimensional"))?;
    if hull
        .facets
        .iter()
        .any(|f| !f.halfspace.offset.is_positive())
    {
        return Err(Error::NotReflexiveOrigin);
    }
    if hull.facets.iter().any(|f| f.halfspace.offset != rat(1)) {
        return Err(Error::NotReflexiveOffset);
    }
    let vertices: Vec<LatticeVector> = hull
        .vertices
        .iter()
        .map(|v| v.to_lattice().expect("integral input"))
        .collect();
    let lattice_points = lattice_points(&vertices);
    let facets = hull
        .facets
        .iter()
        .map(|f| PrimalFacet {
            normal: f.halfspace.normal.clone(),
            vertices: f.incident.clone(),
            lattice_points: (0..lattice_points.len())
                .filter(|&i| lattice_points[i].dot(&f.halfspace.normal).is_one())
                .collect(),
        })
        .collect();
    Ok(ReflexivePolytope {
        dim,
        vertices,
        facets,
        lattice_points,
        faces: hull.faces,
    })
}

/// Integral heights on `Delta cap M` with `h(0) = 0 < h(m)` elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightFunction {
    values: BTreeMap<LatticeVector, BigInt>,
}

impl HeightFunction {
    /// The trivial height `h0`: 1 on every non-zero lattice point.
    pub fn trivial(p: &ReflexivePolytope) -> Self {
        let values = p
            .lattice_points
            .iter()
            .map(|m| {
                let h = if m.is_zero() {
                    BigInt::zero()
                } else {
                    BigInt::one()
                };
                (m.clone(), h)
            })
            .collect();
        HeightFunction { values }
    }

    /// `h0` with the listed values overridden.
    pub fn with_values(
        p: &ReflexivePolytope,
        values: impl IntoIterator<Item = (LatticeVector, BigInt)>,
    ) -> Result<Self> {
        let mut h = Self::trivial(p);
        for (m, v) in values {
            if !p.is_lattice_point(&m) {
                return Err(Error::domain(format!(
                    "{m} is not a lattice point of the polytope"
                )));
            }
            if m.is_zero() && !v.is_zero() {
                return Err(Error::domain("h(0) must be 0"));
            }
            if !m.is_zero() && !v.is_positive() {
                return Err(Error::domain(format!("h{m} must be positive")));
            }
            h.values.insert(m, v);
        }
        Ok(h)
    }

    /// `max(h0, <f_1, .>, ..., <f_k, .>)` on the lattice points.
    pub fn max_of_linear(p: &ReflexivePolytope, functionals: &[LatticeVector]) -> Result<Self> {
        let values: Vec<(LatticeVector, BigInt)> = p
            .lattice_points
            .iter()
            .filter(|m| !m.is_zero())
            .map(|m| {
                let best = functionals
                    .iter()
                    .map(|f| f.dot(m))
                    .fold(BigInt::one(), |a, b| a.max(b));
                (m.clone(), best)
            })
            .collect();
        Self::with_values(p, values)
    }

    pub fn get(&self, m: &LatticeVector) -> Option<&BigInt> {
        self.values.get(m)
    }

    pub fn is_trivial(&self) -> bool {
        self.values
            .iter()
            .all(|(m, h)| if m.is_zero() { h.is_zero() } else { h.is_one() })
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LatticeVector, &BigInt)> {
        self.values.iter()
    }
}

/// A facet `tau` of `Delta^vee_h`: `<m_tau, n> <= h(m_tau)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualFacet {
    pub normal: LatticeVector,
    pub offset: BigInt,
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct DualPolytope {
    pub dim: usize,
    pub vertices: Vec<RationalVector>,
    pub facets: Vec<DualFacet>,
    pub faces: Vec<Face>,
}

impl DualPolytope {
    pub fn contains(&self, n: &RationalVector) -> bool {
        self.facets
            .iter()
            .all(|f| n.dot_lattice(&f.normal) <= Rat::from_integer(f.offset.clone()))
    }

    /// The facet whose normal is `m`, if any.
    pub fn facet_of(&self, m: &LatticeVector) -> Option<usize> {
        self.facets.iter().position(|f| &f.normal == m)
    }

    pub fn facet_points(&self, facet: usize) -> Vec<RationalVector> {
        self.facets[facet]
            .vertices
            .iter()
            .map(|&i| self.vertices[i].clone())
            .collect()
    }
}

/// Computes `Delta^vee_h = {n : <m, n> <= h(m) for all m in Delta cap M}`.
pub fn dual_polytope(p: &ReflexivePolytope, h: &HeightFunction) -> Result<DualPolytope> {
    let constraints: Vec<Halfspace> = if h.is_trivial() {
        p.vertices
            .iter()
            .map(|v| Halfspace::new(v.clone(), rat(1)))
            .collect()
    } else {
        p.lattice_points
            .iter()
            .filter(|m| !m.is_zero())
            .map(|m| Halfspace::new(m.clone(), Rat::from_integer(h.get(m).unwrap().clone())))
            .collect()
    };
    let system = HalfspaceSystem::new(p.dim, constraints)?;
    let verts = vertex_enumeration(&system)?;
    let hull = Polytope::from_points(&verts)?;
    let mut facets = Vec::with_capacity(hull.facets.len());
    for f in &hull.facets {
        let m = &f.halfspace.normal;
        let tight = p.is_lattice_point(m)
            && h.get(m)
                .is_some_and(|hm| Rat::from_integer(hm.clone()) == f.halfspace.offset);
        if !tight {
            return Err(Error::HeightNotAdmissible);
        }
        facets.push(DualFacet {
            normal: m.clone(),
            offset: f.halfspace.offset.to_integer(),
            vertices: f.incident.clone(),
        });
    }
    Ok(DualPolytope {
        dim: p.dim,
        vertices: hull.vertices,
        facets,
        faces: hull.faces,
    })
}

/// `Delta`, a height and `Delta^vee_h` bundled together.
#[derive(Clone, Debug)]
pub struct DualPair {
    pub primal: ReflexivePolytope,
    pub height: HeightFunction,
    pub dual: DualPolytope,
}

impl DualPair {
    pub fn new(primal: ReflexivePolytope, height: HeightFunction) -> Result<Self> {
        let dual = dual_polytope(&primal, &height)?;
        Ok(DualPair {
            primal,
            height,
            dual,
        })
    }

    pub fn trivial(primal: ReflexivePolytope) -> Result<Self> {
        let h = HeightFunction::trivial(&primal);
        Self::new(primal, h)
    }

    pub fn from_vertices(vertices: &[LatticeVector]) -> Result<Self> {
        Self::trivial(build_reflexive(vertices)?)
    }

    pub fn dim(&self) -> usize {
        self.primal.dim
    }

    /// Whether the dual facet `tau` lies in `tau_m` for some `m` on `sigma`,
    /// i.e. `m_tau in sigma`.
    pub fn allowed(&self, sigma: usize, tau: usize) -> bool {
        self.primal
            .facet_contains(sigma, &self.dual.facets[tau].normal)
    }

    /// Dual facets `tau` with `m_tau` on the primal facet `sigma`.
    pub fn dual_facets_over(&self, sigma: usize) -> Vec<usize> {
        (0..self.dual.facets.len())
            .filter(|&t| self.allowed(sigma, t))
            .collect()
    }

    pub fn h_of(&self, m: &LatticeVector) -> Rat {
        Rat::from_integer(self.height.get(m).cloned().unwrap_or_else(BigInt::zero))
    }
}

/// `tau_m`: the face of `Delta^vee_h` on which `<m, .>` attains `h(m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DualFace {
    /// `m = 0`: the zero functional attains `h(0) = 0` everywhere.
    Whole,
    /// The maximum of `<m, .>` stays below `h(m)`.
    Empty,
    Face {
        vertices: Vec<usize>,
        dim: usize,
    },
}

pub fn dual_face(pair: &DualPair, m: &LatticeVector) -> Result<DualFace> {
    if !pair.primal.is_lattice_point(m) {
        return Err(Error::domain(format!("{m} is not in Delta cap M")));
    }
    if m.is_zero() {
        return Ok(DualFace::Whole);
    }
    let hm = pair.h_of(m);
    let vals: Vec<Rat> = pair
        .dual
        .vertices
        .iter()
        .map(|n| n.dot_lattice(m))
        .collect();
    let max = vals.iter().max().unwrap();
    if *max < hm {
        return Ok(DualFace::Empty);
    }
    let vertices: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] == hm).collect();
    let pts: Vec<RationalVector> = vertices
        .iter()
        .map(|&i| pair.dual.vertices[i].clone())
        .collect();
    Ok(DualFace::Face {
        dim: affine_rank(&pts),
        vertices,
    })
}

/// `St(m)`: the facets of `Delta` containing the boundary lattice point `m`.
pub fn star(p: &ReflexivePolytope, m: &LatticeVector) -> Result<Vec<usize>> {
    if !p.is_lattice_point(m) {
        return Err(Error::domain(format!("{m} is not in Delta cap M")));
    }
    let facets: Vec<usize> = (0..p.facets.len())
        .filter(|&i| p.facet_contains(i, m))
        .collect();
    if facets.is_empty() {
        return Err(Error::domain(format!(
            "{m} is interior; its star is undefined"
        )));
    }
    Ok(facets)
}

/// One facet's share of `SmSt(v)`: the points of the facet at least as close
/// to `v` as to any other vertex (Euclidean norm of the given presentation).
#[derive(Clone, Debug)]
pub struct SmallStarPiece {
    pub facet: usize,
    pub facet_normal: LatticeVector,
    /// Facet inequalities of `Delta` and the bisector inequalities.
    pub halfspaces: Vec<Halfspace>,
    pub vertices: Vec<RationalVector>,
}

impl SmallStarPiece {
    pub fn contains(&self, x: &RationalVector) -> bool {
        x.dot_lattice(&self.facet_normal) == rat(1) && self.halfspaces.iter().all(|h| h.contains(x))
    }
}

pub fn small_star(p: &ReflexivePolytope, v: &LatticeVector) -> Result<Vec<SmallStarPiece>> {
    if p.vertex_index(v).is_none() {
        return Err(Error::domain(format!("{v} is not a vertex")));
    }
    let two = rat(2);
    let vr = v.to_rational();
    let mut ambient: Vec<Halfspace> = p
        .facets
        .iter()
        .map(|f| Halfspace::new(f.normal.clone(), rat(1)))
        .collect();
    for w in p.vertices.iter().filter(|w| *w != v) {
        let wr = w.to_rational();
        ambient.push(Halfspace::new(
            w.sub(v),
            (wr.norm_sq() - vr.norm_sq()) / &two,
        ));
    }
    let mut pieces = Vec::new();
    for sigma in star(p, v)? {
        let chart = crate::volume::FacetChart::new(&p.facets[sigma].normal, &rat(1))?;
        let mut local = Vec::new();
        let mut empty = false;
        for hs in &ambient {
            let (normal, offset) = chart.pull_back(hs);
            if normal.is_zero() {
                empty |= offset.is_negative();
            } else {
                local.push(Halfspace::new(normal, offset));
            }
        }
        if empty {
            continue;
        }
        let d = p.dim - 1;
        let coords = if d == 0 {
            vec![RationalVector(Vec::new())]
        } else {
            match vertex_enumeration(&HalfspaceSystem::new(d, local)?) {
                Ok(c) => c,
                Err(Error::Degenerate) => continue,
                Err(e) => return Err(e),
            }
        };
        pieces.push(SmallStarPiece {
            facet: sigma,
            facet_normal: p.facets[sigma].normal.clone(),
            halfspaces: ambient.clone(),
            vertices: coords.iter().map(|y| chart.point(y)).collect(),
        });
    }
    Ok(pieces)
}

/// Result of a ray shot along a facet normal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    pub point: RationalVector,
    pub rho: Rat,
}

/// `p_sigma(n) = n + rho n_sigma` with `rho` maximal such that the point stays
/// in `Delta^vee_h`.
pub fn project_p_sigma(pair: &DualPair, n: &RationalVector, sigma: usize) -> Result<Projection> {
    if !pair.dual.contains(n) {
        return Err(Error::domain("point is not in the dual polytope"));
    }
    let dir = &pair.primal.facets[sigma].normal;
    let rho = pair
        .dual
        .facets
        .iter()
        .filter_map(|f| {
            let rate = Rat::from_integer(f.normal.dot(dir));
            rate.is_positive()
                .then(|| (Rat::from_integer(f.offset.clone()) - n.dot_lattice(&f.normal)) / rate)
        })
        .min()
        .ok_or_else(|| Error::internal("dual polytope is unbounded along n_sigma"))?;
    Ok(Projection {
        point: n.add_scaled_lattice(&rho, dir),
        rho,
    })
}

/// `p_tau(m) = m + rho m_tau` with `rho` maximal such that the point stays in
/// `Delta`.
pub fn project_p_tau(pair: &DualPair, m: &RationalVector, tau: usize) -> Result<Projection> {
    if !pair.primal.contains(m) {
        return Err(Error::domain("point is not in the polytope"));
    }
    let dir = &pair.dual.facets[tau].normal;
    let rho = pair
        .primal
        .facets
        .iter()
        .filter_map(|f| {
            let rate = Rat::from_integer(f.normal.dot(dir));
            rate.is_positive()
                .then(|| (rat(1) - m.dot_lattice(&f.normal)) / rate)
        })
        .min()
        .ok_or_else(|| Error::internal("polytope is unbounded along m_tau"))?;
    Ok(Projection {
        point: m.add_scaled_lattice(&rho, dir),
        rho,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChartKind {
    /// `beta_sigma` on `B`, anchored at a facet of `Delta`.
    Beta,
    /// `alpha_tau` on `A`, anchored at a facet of `Delta^vee_h`.
    Alpha,
}

/// A linear coordinate map `x -> (<b_1, x>, ..., <b_d, x>)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    pub kind: ChartKind,
    pub anchor: usize,
    pub anchor_normal: LatticeVector,
    pub basis: Vec<LatticeVector>,
}

impl Chart {
    pub fn apply(&self, x: &RationalVector) -> RationalVector {
        RationalVector(self.basis.iter().map(|b| x.dot_lattice(b)).collect())
    }
}

/// `beta_sigma(n) = (<m_1, n>, ..., <m_d, n>)` for a basis of `n_sigma^perp cap M`.
pub fn beta_chart(pair: &DualPair, sigma: usize) -> Result<Chart> {
    let normal = pair.primal.facets[sigma].normal.clone();
    Ok(Chart {
        kind: ChartKind::Beta,
        anchor: sigma,
        basis: kernel_lattice_basis(&normal)?,
        anchor_normal: normal,
    })
}

/// `alpha_tau(m) = (<m, n_1>, ..., <m, n_d>)` for a basis of `m_tau^perp cap N`.
pub fn alpha_chart(pair: &DualPair, tau: usize) -> Result<Chart> {
    let normal = pair.dual.facets[tau].normal.clone();
    Ok(Chart {
        kind: ChartKind::Alpha,
        anchor: tau,
        basis: kernel_lattice_basis(&normal)?,
        anchor_normal: normal,
    })
}

#[derive(Clone, Debug)]
pub struct CompatiblePair {
    pub sigma: usize,
    pub tau: usize,
    pub alpha: Chart,
    pub beta: Chart,
}

/// Charts `(alpha_tau, beta_sigma)` with dual bases, so that
/// `<m - m_tau, n> = <alpha(m), beta(n)>` on `sigma x Delta^vee_h` and
/// `<m, n - h(m_tau) n_sigma> = <alpha(m), beta(n)>` on `Delta x tau`.
pub fn compatible_chart_pair(pair: &DualPair, sigma: usize, tau: usize) -> Result<CompatiblePair> {
    let m_tau = pair.dual.facets[tau].normal.clone();
    if !pair.allowed(sigma, tau) {
        return Err(Error::domain(format!("m_tau = {m_tau} is not on sigma")));
    }
    let beta = beta_chart(pair, sigma)?;
    let mut rows = vec![m_tau.clone()];
    rows.extend(beta.basis.iter().cloned());
    let mat = IntegerMatrix::from_rows(rows);
    let dim = pair.dim();
    let mut dual_cols = Vec::with_capacity(dim);
    for j in 0..dim {
        let e = LatticeVector::unit(dim, j).to_rational();
        let col = crate::lattice::solve_rational(&mat, &e)
            .map_err(|_| Error::internal("m_tau and the beta basis are dependent"))?;
        let col = col
            .to_lattice()
            .ok_or_else(|| Error::internal("dual basis is not integral"))?;
        dual_cols.push(col);
    }
    if dual_cols[0] != pair.primal.facets[sigma].normal {
        return Err(Error::internal("dual basis does not recover n_sigma"));
    }
    let alpha = Chart {
        kind: ChartKind::Alpha,
        anchor: tau,
        anchor_normal: m_tau,
        basis: dual_cols[1..].to_vec(),
    };
    let cp = CompatiblePair {
        sigma,
        tau,
        alpha,
        beta,
    };
    check_compatibility(pair, &cp)?;
    Ok(cp)
}

/// Verifies both compatibility identities on all relevant vertex pairs.
pub fn check_compatibility(pair: &DualPair, cp: &CompatiblePair) -> Result<()> {
    let pairing = |a: &RationalVector, b: &RationalVector| a.dot(b);
    let m_tau = cp.alpha.anchor_normal.to_rational();
    let n_sigma = &pair.primal.facets[cp.sigma].normal;
    let h_tau = pair.h_of(&cp.alpha.anchor_normal);
    for &i in &pair.primal.facets[cp.sigma].vertices {
        let m = pair.primal.vertices[i].to_rational();
        for n in &pair.dual.vertices {
            let lhs = m.sub(&m_tau).dot(n);
            if lhs != pairing(&cp.alpha.apply(&m), &cp.beta.apply(n)) {
                return Err(Error::internal("first compatibility identity fails"));
            }
        }
    }
    for m in pair.primal.vertex_points() {
        for &j in &pair.dual.facets[cp.tau].vertices {
            let n = &pair.dual.vertices[j];
            let shifted = n.add_scaled_lattice(&-h_tau.clone(), n_sigma);
            if m.dot(&shifted) != pairing(&cp.alpha.apply(&m), &cp.beta.apply(n)) {
                return Err(Error::internal("second compatibility identity fails"));
            }
        }
    }
    Ok(())
}
