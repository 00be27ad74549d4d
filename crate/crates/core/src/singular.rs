//! Singular-set diagnostics reconstructed from a discrete optimal transport
//! solution: the c-gradient, the map `T`, chart labels on a mesh of `B`,
//! connectivity of the regular part and convexity checks.

use std::collections::{BTreeSet, HashMap};

use num_traits::{Signed, Zero};
use petgraph::unionfind::UnionFind;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::duality::{alpha_chart, small_star, DualPair};
use crate::error::{Error, Result};
use crate::geometry::{affine_rank, simplex_normalized_volume, AffineHull, Polytope};
use crate::lattice::{solve_rational, IntegerMatrix, LatticeVector, Rat, RationalVector};
use crate::transport::{
    c_transform_b_to_a, discretize_levels, facet_cells, facet_data, sample_at_factor, solve_ot,
    PivotRule, SolveOutcome, TransportInstance,
};
use crate::volume::{measure_A, measure_B, Side};

/// Lattice automorphisms of `Delta` preserving `h`, as integer matrices.
pub fn automorphisms(pair: &DualPair) -> Vec<IntegerMatrix> {
    let vs = &pair.primal.vertices;
    let dim = pair.dim();
    let mut basis: Vec<usize> = Vec::new();
    for i in 0..vs.len() {
        let mut cand: Vec<RationalVector> = basis.iter().map(|&b| vs[b].to_rational()).collect();
        cand.push(vs[i].to_rational());
        cand.insert(0, RationalVector::zero(dim));
        if affine_rank(&cand) == basis.len() + 1 {
            basis.push(i);
        }
        if basis.len() == dim {
            break;
        }
    }
    let v = IntegerMatrix::from_columns(&basis.iter().map(|&b| vs[b].clone()).collect::<Vec<_>>());
    let coeffs: Vec<RationalVector> = (0..dim)
        .map(|k| {
            solve_rational(&v, &LatticeVector::unit(dim, k).to_rational())
                .expect("basis is invertible")
        })
        .collect();
    let vertex_set: BTreeSet<&LatticeVector> = vs.iter().collect();
    let mut out = Vec::new();
    let mut images = vec![0usize; dim];
    assign(0, &mut images, vs.len(), &mut |img| {
        let mut cols = Vec::with_capacity(dim);
        for c in &coeffs {
            let mut x = RationalVector::zero(dim);
            for (w, &t) in c.0.iter().zip(img) {
                x = x.add_scaled_lattice(w, &vs[t]);
            }
            match x.to_lattice() {
                Some(col) => cols.push(col),
                None => return,
            }
        }
        let g = IntegerMatrix::from_columns(&cols);
        let permutes = vs.iter().all(|x| vertex_set.contains(&g.mul_vec(x)));
        let unimodular = g
            .determinant()
            .map(|d| d.abs() == 1.into())
            .unwrap_or(false);
        let keeps_h = pair
            .primal
            .lattice_points
            .iter()
            .all(|m| pair.height.get(&g.mul_vec(m)) == pair.height.get(m));
        if permutes && unimodular && keeps_h {
            out.push(g);
        }
    });
    out
}

fn assign(k: usize, images: &mut Vec<usize>, n: usize, f: &mut dyn FnMut(&[usize])) {
    if k == images.len() {
        f(images);
        return;
    }
    for t in 0..n {
        if images[..k].contains(&t) {
            continue;
        }
        images[k] = t;
        assign(k + 1, images, n, f);
    }
}

fn apply_rational(g: &IntegerMatrix, x: &RationalVector) -> RationalVector {
    RationalVector((0..x.dim()).map(|i| x.dot_lattice(&g.row(i))).collect())
}

/// Sample permutations induced by the automorphisms that map both sample
/// sets onto themselves with equal masses.
fn sample_symmetries(pair: &DualPair, inst: &TransportInstance) -> Vec<(Vec<usize>, Vec<usize>)> {
    let (Some(ap), Some(bp)) = (&inst.a_points, &inst.b_points) else {
        return Vec::new();
    };
    let a_index: HashMap<&RationalVector, usize> =
        ap.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let b_index: HashMap<&RationalVector, usize> =
        bp.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut out = Vec::new();
    for g in automorphisms(pair) {
        let gt = g.transpose();
        let a_perm: Option<Vec<usize>> = ap
            .iter()
            .enumerate()
            .map(|(i, p)| {
                a_index
                    .get(&apply_rational(&g, p))
                    .copied()
                    .filter(|&k| inst.a_mass[k] == inst.a_mass[i])
            })
            .collect();
        // The dual action is g^{-T}, which keeps `<a, b>` fixed.
        let b_perm: Option<Vec<usize>> = bp
            .iter()
            .enumerate()
            .map(|(j, q)| {
                let image = solve_rational(&gt, q).ok()?;
                b_index
                    .get(&image)
                    .copied()
                    .filter(|&k| inst.b_mass[k] == inst.b_mass[j])
            })
            .collect();
        if let (Some(a), Some(b)) = (a_perm, b_perm) {
            out.push((a, b));
        }
    }
    out
}

/// A discrete optimal plan and its potentials, averaged over the symmetries
/// of the sampled problem. Averaging keeps both optimal and removes the
/// arbitrary choices the solver makes among equally good solutions.
///
/// `Psi(n) = max_i <a_i, n> - phi_i`; a restricted solution only ranges over
/// samples on facets `sigma` with `m_tau` in `sigma`, for the facets `tau` of
/// `B` containing `n`.
#[derive(Clone, Debug)]
pub struct DiscretePotential {
    pub level_a: u32,
    pub level_b: u32,
    pub points: Vec<RationalVector>,
    pub facets: Vec<usize>,
    pub mass: Vec<Rat>,
    pub phi: Vec<Rat>,
    pub b_points: Vec<RationalVector>,
    pub b_facets: Vec<usize>,
    pub b_mass: Vec<Rat>,
    pub psi: Vec<Rat>,
    /// Facets of `Delta` met by the plan's support at each `B` sample.
    pub support: Vec<BTreeSet<usize>>,
    /// `allowed[sigma][tau]`, present for restricted solutions.
    pub allowed: Option<Vec<Vec<bool>>>,
    /// Number of symmetries averaged over.
    pub symmetries: usize,
}

impl DiscretePotential {
    pub fn from_instance(
        pair: &DualPair,
        inst: &TransportInstance,
        restrict: bool,
        rule: PivotRule,
    ) -> Result<Self> {
        let (points, b_points) = match (&inst.a_points, &inst.b_points) {
            (Some(a), Some(b)) => (a.clone(), b.clone()),
            _ => return Err(Error::domain("instance has no sample points")),
        };
        let plan = match solve_ot(inst, restrict, rule)? {
            SolveOutcome::Optimal(p) => p,
            SolveOutcome::Infeasible(_) => {
                return Err(Error::HypothesisNotSatisfied(
                    "restricted transport problem is infeasible".into(),
                ))
            }
        };
        let syms = sample_symmetries(pair, inst);
        let count = Rat::from_integer((syms.len().max(1) as i64).into());
        let (psi, flows) = if syms.is_empty() {
            (plan.psi.clone(), plan.flows.clone())
        } else {
            let psi = (0..inst.cols())
                .map(|j| {
                    syms.iter()
                        .map(|(_, b)| plan.psi[b[j]].clone())
                        .sum::<Rat>()
                        / &count
                })
                .collect();
            let mut acc: HashMap<(usize, usize), Rat> = HashMap::new();
            let mut a_inv = vec![0; inst.rows()];
            let mut b_inv = vec![0; inst.cols()];
            for (a, b) in &syms {
                for (i, &x) in a.iter().enumerate() {
                    a_inv[x] = i;
                }
                for (j, &y) in b.iter().enumerate() {
                    b_inv[y] = j;
                }
                for (i, j, f) in &plan.flows {
                    *acc.entry((a_inv[*i], b_inv[*j])).or_insert_with(Rat::zero) += f / &count;
                }
            }
            (psi, acc.into_iter().map(|((i, j), f)| (i, j, f)).collect())
        };
        let phi = c_transform_b_to_a(inst, &psi, restrict);
        let mut support = vec![BTreeSet::new(); inst.cols()];
        for (i, j, _) in &flows {
            support[*j].insert(inst.a_facet[*i]);
        }
        let allowed = restrict.then(|| {
            (0..pair.primal.facets.len())
                .map(|s| {
                    (0..pair.dual.facets.len())
                        .map(|t| pair.allowed(s, t))
                        .collect()
                })
                .collect()
        });
        let level = |l: Option<u32>| l.unwrap_or(0);
        Ok(DiscretePotential {
            level_a: level(inst.level),
            level_b: level(inst.level),
            points,
            facets: inst.a_facet.clone(),
            mass: inst.a_mass.clone(),
            phi,
            b_points,
            b_facets: inst.b_facet.clone(),
            b_mass: inst.b_mass.clone(),
            psi,
            support,
            allowed,
            symmetries: syms.len(),
        })
    }

    /// Restricted solution for `(mu_M, nu_N)` sampled at `level_a` on `A`
    /// and `level_b` on `B`. Refuses when the restricted problem is
    /// infeasible, since then there is no solution to probe.
    pub fn for_pair(pair: &DualPair, level_a: u32, level_b: u32) -> Result<Self> {
        let inst = discretize_levels(pair, &measure_A(pair)?, &measure_B(pair)?, level_a, level_b)?;
        let mut pot = Self::from_instance(pair, &inst, true, PivotRule::Bland)?;
        pot.level_a = level_a;
        pot.level_b = level_b;
        Ok(pot)
    }

    fn usable(&self, i: usize, taus: &[usize]) -> bool {
        match &self.allowed {
            None => true,
            Some(a) => taus.iter().any(|&t| a[self.facets[i]][t]),
        }
    }

    fn values(&self, n: &RationalVector, taus: &[usize]) -> Vec<Option<Rat>> {
        (0..self.points.len())
            .map(|i| {
                self.usable(i, taus)
                    .then(|| self.points[i].dot(n) - &self.phi[i])
            })
            .collect()
    }

    /// `Psi(n)` for `n` on the facets `taus` of `B`.
    pub fn eval(&self, n: &RationalVector, taus: &[usize]) -> Rat {
        self.values(n, taus)
            .into_iter()
            .flatten()
            .max()
            .expect("some sample is usable")
    }

    /// The same solution after adding `k` to `psi`, i.e. `phi - k`.
    pub fn shifted(&self, k: &Rat) -> Self {
        DiscretePotential {
            phi: self.phi.iter().map(|p| p - k).collect(),
            psi: self.psi.iter().map(|p| p + k).collect(),
            ..self.clone()
        }
    }
}

/// Indices of the `A` samples attaining `Psi(n)`; exact ties are kept.
pub fn c_gradient(pot: &DiscretePotential, n: &RationalVector, taus: &[usize]) -> Vec<usize> {
    let vals = pot.values(n, taus);
    let best = vals.iter().flatten().max().cloned();
    (0..vals.len())
        .filter(|&i| vals[i].is_some() && vals[i] == best)
        .collect()
}

/// Facets of `Delta` met by the c-gradient at `n`.
pub fn gradient_facets(
    pot: &DiscretePotential,
    n: &RationalVector,
    taus: &[usize],
) -> BTreeSet<usize> {
    c_gradient(pot, n, taus)
        .into_iter()
        .map(|i| pot.facets[i])
        .collect()
}

#[derive(Clone, Debug)]
pub struct MeshCell {
    /// Facet `tau` of `Delta^vee_h` containing the cell.
    pub facet: usize,
    pub vertices: Vec<usize>,
    pub barycenter: RationalVector,
    /// Lattice volume relative to the facet, in `(0, 1]`.
    pub share: Rat,
    pub touches_boundary: bool,
}

/// Edgewise-subdivided facets of `B` with vertices shared across facets.
#[derive(Clone, Debug)]
pub struct BMesh {
    pub factor: usize,
    pub vertices: Vec<RationalVector>,
    /// Facets of `B` containing each vertex.
    pub vertex_taus: Vec<Vec<usize>>,
    /// Whether a vertex lies on `B_{d-1}`, i.e. on two or more facets.
    pub on_boundary: Vec<bool>,
    pub cells: Vec<MeshCell>,
    pub vertex_cells: Vec<Vec<usize>>,
}

pub fn build_mesh(pair: &DualPair, factor: usize) -> Result<BMesh> {
    let mut index: HashMap<RationalVector, usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut cells = Vec::new();
    for t in 0..pair.dual.facets.len() {
        let (pts, chart) = facet_data(pair, Side::B, t);
        let raw = facet_cells(&pts, &chart, factor)?;
        let vols: Vec<Rat> = raw
            .iter()
            .map(|c| {
                let local: Vec<RationalVector> = c.iter().map(|p| chart.coords(p)).collect();
                if chart.dim() == 0 {
                    Rat::from_integer(1.into())
                } else {
                    simplex_normalized_volume(&local)
                }
            })
            .collect();
        let total: Rat = vols.iter().sum();
        for (c, v) in raw.iter().zip(vols) {
            let ids = c
                .iter()
                .map(|p| {
                    *index.entry(p.clone()).or_insert_with(|| {
                        vertices.push(p.clone());
                        vertices.len() - 1
                    })
                })
                .collect();
            cells.push(MeshCell {
                facet: t,
                vertices: ids,
                barycenter: RationalVector::barycenter(c),
                share: v / &total,
                touches_boundary: false,
            });
        }
    }
    let vertex_taus: Vec<Vec<usize>> = vertices
        .iter()
        .map(|p| {
            (0..pair.dual.facets.len())
                .filter(|&t| {
                    let f = &pair.dual.facets[t];
                    p.dot_lattice(&f.normal) == Rat::from_integer(f.offset.clone())
                })
                .collect()
        })
        .collect();
    let on_boundary: Vec<bool> = vertex_taus.iter().map(|t| t.len() >= 2).collect();
    let mut vertex_cells = vec![Vec::new(); vertices.len()];
    for (c, cell) in cells.iter_mut().enumerate() {
        cell.touches_boundary = cell.vertices.iter().any(|&v| on_boundary[v]);
        for &v in &cell.vertices {
            vertex_cells[v].push(c);
        }
    }
    Ok(BMesh {
        factor,
        vertices,
        vertex_taus,
        on_boundary,
        cells,
        vertex_cells,
    })
}

impl BMesh {
    /// Cells sharing a codimension-one face.
    pub fn adjacency(&self) -> Vec<(usize, usize)> {
        let mut by_face: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for (c, cell) in self.cells.iter().enumerate() {
            let k = cell.vertices.len();
            for skip in 0..k {
                let mut face: Vec<usize> = (0..k)
                    .filter(|&i| i != skip)
                    .map(|i| cell.vertices[i])
                    .collect();
                face.sort_unstable();
                by_face.entry(face).or_default().push(c);
            }
        }
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for cs in by_face.values() {
            for (i, &a) in cs.iter().enumerate() {
                for &b in &cs[i + 1..] {
                    edges.push((a.min(b), a.max(b)));
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
        edges
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CellLabel {
    /// The c-gradient over the cell lies in the open facet `sigma`: the cell is in `U_sigma`.
    Chart(usize),
    /// An open-facet cell whose c-gradient meets several facets of `Delta`;
    /// it is regular through the chart of its own facet of `B`.
    Facet(usize),
    /// A cell meeting `B_{d-1}` at a point outside every `U_sigma`.
    Singular,
}

#[derive(Clone, Debug)]
pub struct SingularMesh {
    pub mesh: BMesh,
    pub labels: Vec<CellLabel>,
    /// Facets of `Delta` met by the c-gradient over each cell.
    pub cell_facets: Vec<BTreeSet<usize>>,
    /// For vertices on `B_{d-1}`, the facets of `Delta` met around them.
    pub vertex_facets: Vec<Option<BTreeSet<usize>>>,
}

impl SingularMesh {
    pub fn singular_cells(&self) -> Vec<usize> {
        (0..self.labels.len())
            .filter(|&c| self.labels[c] == CellLabel::Singular)
            .collect()
    }

    /// Vertices on `B_{d-1}` outside every chart.
    pub fn singular_vertices(&self) -> Vec<usize> {
        (0..self.vertex_facets.len())
            .filter(|&v| self.vertex_facets[v].as_ref().is_some_and(|s| s.len() >= 2))
            .collect()
    }
}

/// Labels every cell of the mesh of `B` whose cells are the `B` samples of
/// the solution, i.e. the factor `2^level_b` mesh.
///
/// The c-gradient over a cell is read off the optimal plan at its sample. A
/// vertex on `B_{d-1}` is singular when the cells around it reach two or more
/// facets of `Delta`; a cell touching a singular vertex is [`CellLabel::Singular`].
pub fn chart_labels(pair: &DualPair, pot: &DiscretePotential) -> Result<SingularMesh> {
    let mesh = build_mesh(pair, 1usize << pot.level_b)?;
    let index: HashMap<&RationalVector, usize> = pot
        .b_points
        .iter()
        .enumerate()
        .map(|(j, p)| (p, j))
        .collect();
    let cell_facets = mesh
        .cells
        .iter()
        .map(|c| {
            index
                .get(&c.barycenter)
                .map(|&j| pot.support[j].clone())
                .ok_or_else(|| Error::internal("mesh cell without a matching sample"))
        })
        .collect::<Result<Vec<_>>>()?;
    let vertex_facets: Vec<Option<BTreeSet<usize>>> = (0..mesh.vertices.len())
        .map(|v| {
            mesh.on_boundary[v].then(|| {
                mesh.vertex_cells[v]
                    .iter()
                    .flat_map(|&c| cell_facets[c].iter().copied())
                    .collect()
            })
        })
        .collect();
    let labels = mesh
        .cells
        .iter()
        .enumerate()
        .map(|(c, cell)| {
            let singular = cell
                .vertices
                .iter()
                .any(|&v| vertex_facets[v].as_ref().is_some_and(|s| s.len() >= 2));
            if singular {
                CellLabel::Singular
            } else if cell_facets[c].len() == 1 {
                CellLabel::Chart(*cell_facets[c].iter().next().unwrap())
            } else {
                CellLabel::Facet(cell.facet)
            }
        })
        .collect();
    Ok(SingularMesh {
        mesh,
        labels,
        cell_facets,
        vertex_facets,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    pub count: usize,
    /// Component of each cell; `None` for singular cells.
    pub assignment: Vec<Option<usize>>,
}

/// Connected components of the non-singular cells.
pub fn connectivity(mesh: &SingularMesh) -> Components {
    let n = mesh.labels.len();
    let regular = |c: usize| mesh.labels[c] != CellLabel::Singular;
    let mut uf = UnionFind::<usize>::new(n);
    for (a, b) in mesh.mesh.adjacency() {
        if regular(a) && regular(b) {
            uf.union(a, b);
        }
    }
    let mut ids: HashMap<usize, usize> = HashMap::new();
    let assignment = (0..n)
        .map(|c| {
            regular(c).then(|| {
                let root = uf.find(c);
                let next = ids.len();
                *ids.entry(root).or_insert(next)
            })
        })
        .collect();
    Components {
        count: ids.len(),
        assignment,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TImage {
    /// Index of the `B` sample.
    pub sample: usize,
    pub point: RationalVector,
    /// Several samples attained the maximum; the smallest point was taken.
    pub tie: bool,
}

/// `T(m)`: the `B` sample maximizing `<m, b> - psi(b)` among samples on
/// facets `tau` with `m_tau` on the facet `sigma` of `m`.
pub fn t_map(
    pair: &DualPair,
    pot: &DiscretePotential,
    m: &RationalVector,
    sigma: usize,
) -> Result<TImage> {
    let mut best: Option<(Rat, usize)> = None;
    let mut tie = false;
    for j in 0..pot.b_points.len() {
        if !pair.allowed(sigma, pot.b_facets[j]) {
            continue;
        }
        let v = m.dot(&pot.b_points[j]) - &pot.psi[j];
        match &best {
            None => best = Some((v, j)),
            Some((b, bj)) => {
                if v > *b {
                    best = Some((v, j));
                    tie = false;
                } else if v == *b {
                    tie = true;
                    if pot.b_points[j] < pot.b_points[*bj] {
                        best = Some((v, j));
                    }
                }
            }
        }
    }
    let (_, j) = best.ok_or_else(|| Error::domain("no dual facet lies over this facet"))?;
    Ok(TImage {
        sample: j,
        point: pot.b_points[j].clone(),
        tie,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushforwardResidual {
    /// Total variation between the pushed-forward mass and `nu_N`, per facet of `B`.
    pub facet_tv: Rat,
    /// The same at the resolution of the `B` samples.
    pub cell_tv: Rat,
    pub facet_mass: Vec<Rat>,
    pub ties: usize,
    pub probes: usize,
}

/// Pushes `mu_M`, probed at the barycenters of a factor-`r` subdivision,
/// through `T` and compares with `nu_N`.
pub fn pushforward_residual(
    pair: &DualPair,
    pot: &DiscretePotential,
    r: usize,
) -> Result<PushforwardResidual> {
    let mu = measure_A(pair)?;
    let nu = measure_B(pair)?;
    let probes = sample_at_factor(pair, &mu, r)?;
    let mut sample_mass = vec![Rat::zero(); pot.b_points.len()];
    let mut ties = 0;
    for p in &probes {
        let img = t_map(pair, pot, &p.point, p.facet)?;
        ties += usize::from(img.tie);
        sample_mass[img.sample] += &p.weight;
    }
    let mut facet_mass = vec![Rat::zero(); pair.dual.facets.len()];
    let mut cell_tv = Rat::zero();
    for (j, m) in sample_mass.iter().enumerate() {
        facet_mass[pot.b_facets[j]] += m;
        cell_tv += (m - &pot.b_mass[j]).abs();
    }
    let facet_tv: Rat = facet_mass
        .iter()
        .zip(&nu.weights)
        .map(|(a, b)| (a - b).abs())
        .sum();
    let half = Rat::new(1.into(), 2.into());
    Ok(PushforwardResidual {
        facet_tv: facet_tv * &half,
        cell_tv: cell_tv * &half,
        facet_mass,
        ties,
        probes: probes.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexityReport {
    pub facet: usize,
    /// Distinct `A` samples in the c-gradient image of the facet.
    pub image_size: usize,
    /// Lattice volume of the hull of the image in `alpha_tau` coordinates.
    pub hull_volume: Rat,
    /// Image size over the number of `St(m_tau)` samples whose
    /// `alpha_tau` image lies in that hull; 1 means no gaps were seen.
    pub score: Rat,
}

/// HEURISTIC: how convex the c-gradient image of `tau` looks in `alpha_tau`
/// coordinates, the image being the envelope argmax at the `B` samples of `tau`.
pub fn gradient_image_convexity(
    pair: &DualPair,
    pot: &DiscretePotential,
    tau: usize,
) -> Result<ConvexityReport> {
    let alpha = alpha_chart(pair, tau)?;
    let mut image: BTreeSet<usize> = BTreeSet::new();
    for j in (0..pot.b_points.len()).filter(|&j| pot.b_facets[j] == tau) {
        image.extend(c_gradient(pot, &pot.b_points[j], &[tau]));
    }
    let pts: Vec<RationalVector> = image.iter().map(|&i| alpha.apply(&pot.points[i])).collect();
    let star: Vec<usize> = (0..pot.points.len())
        .filter(|&i| pair.allowed(pot.facets[i], tau))
        .collect();
    let d = pair.dim() - 1;
    let (hull_volume, inside) = if d > 0 && affine_rank(&pts) == d {
        let hull = Polytope::from_points(&pts)?;
        let inside = star
            .iter()
            .filter(|&&i| hull.contains(&alpha.apply(&pot.points[i])))
            .count();
        (hull.normalized_volume(), inside)
    } else {
        let aff = AffineHull::new(&pts);
        let inside = star
            .iter()
            .filter(|&&i| aff.contains(&alpha.apply(&pot.points[i])))
            .count();
        (Rat::zero(), inside)
    };
    let score = if inside == 0 {
        Rat::zero()
    } else {
        Rat::new((image.len() as i64).into(), (inside as i64).into())
    };
    Ok(ConvexityReport {
        facet: tau,
        image_size: image.len(),
        hull_volume,
        score,
    })
}

/// Whether `v` is the only vertex with `<v, x> > 0` for every vertex `v`.
pub fn smst_hypothesis_holds(pair: &DualPair) -> bool {
    let vs = &pair.primal.vertices;
    vs.iter()
        .all(|v| vs.iter().filter(|w| v.dot(w).is_positive()).count() == 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HypothesisPolicy {
    /// Refuse unless the half-space hypothesis holds.
    Require,
    /// Run the randomized test regardless.
    Skip,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexityTrial {
    pub trials: usize,
    pub failures: usize,
    pub hypothesis_holds: bool,
    pub seed: u64,
}

fn random_combination(rng: &mut ChaCha8Rng, pts: &[RationalVector]) -> RationalVector {
    let w: Vec<i64> = pts.iter().map(|_| rng.gen_range(0..=1000)).collect();
    let total: i64 = w.iter().sum::<i64>().max(1);
    let mut x = RationalVector::zero(pts[0].dim());
    for (wi, p) in w.iter().zip(pts) {
        x = x.add(&p.scale(&Rat::new((*wi).into(), total.into())));
    }
    if w.iter().all(|&x| x == 0) {
        pts[0].clone()
    } else {
        x
    }
}

/// Randomized midpoint test for convexity of the projection of `SmSt(v)`
/// along `v`: the midpoint of two projected points must have a point of
/// `SmSt(v)` in its fiber, found exactly facet by facet.
pub fn smst_projection_convexity_test(
    pair: &DualPair,
    v: &LatticeVector,
    trials: usize,
    seed: u64,
    policy: HypothesisPolicy,
) -> Result<ConvexityTrial> {
    let holds = smst_hypothesis_holds(pair);
    if !holds && policy == HypothesisPolicy::Require {
        return Err(Error::HypothesisNotSatisfied(
            "some vertex pairs positively with another vertex".into(),
        ));
    }
    let pieces = small_star(&pair.primal, v)?;
    if pieces.is_empty() {
        return Err(Error::internal("small star is empty"));
    }
    let vr = v.to_rational();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for _ in 0..trials {
        let p = &pieces[rng.gen_range(0..pieces.len())];
        let q = &pieces[rng.gen_range(0..pieces.len())];
        let x = random_combination(&mut rng, &p.vertices);
        let y = random_combination(&mut rng, &q.vertices);
        let z = x.add(&y).scale(&Rat::new(1.into(), 2.into()));
        let found = pieces.iter().any(|piece| {
            let rate = vr.dot_lattice(&piece.facet_normal);
            if rate.is_zero() {
                return false;
            }
            let s = (Rat::from_integer(1.into()) - z.dot_lattice(&piece.facet_normal)) / rate;
            piece.contains(&z.add(&vr.scale(&s)))
        });
        failures += usize::from(!found);
    }
    Ok(ConvexityTrial {
        trials,
        failures,
        hypothesis_holds: holds,
        seed,
    })
}
