//! Simple undirected graphs and the spectral-combinatorial dictionary.
//!
//! For a vertex subset `X` with indicator `xi`, `sum_v |N_X(v)|^2 = ||A xi||^2`
//! and `e(X, Y) = xi_X^t A xi_Y`, so binary witnesses for the adjacency
//! matrix (or its centered version `A - mean(A)`) become subsets with large
//! neighbourhood energy or large edge discrepancy.

use std::collections::BTreeSet;
use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{centered_height_bound, top_two_singular, ComplexMatrix, SolverOptions, RANK_REL_TOL};
use crate::witness::{delta_witness, rho_witness, BinaryVector, DeltaWitness, RhoWitness};

/// Relative slack for forward (upper) bounds.
pub const FORWARD_SLACK: f64 = 1e-8;
/// Relative slack for witness floors.
pub const FLOOR_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a simple graph; duplicate edges are merged, loops rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("graph needs at least one vertex".into()));
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::LoopRejected { line: 0, vertex: u });
            }
            if u >= n || v >= n {
                return Err(Error::OutOfRange(format!("edge ({u}, {v}) in a graph on {n} vertices")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        let mut neighbors = vec![Vec::new(); n];
        for &(u, v) in &set {
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        neighbors.iter_mut().for_each(|l| l.sort_unstable());
        Ok(Self { n, edges: set, neighbors })
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Result<Self> {
        Self::new(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))))
    }

    pub fn star(leaves: usize) -> Result<Self> {
        Self::new(leaves + 1, (1..=leaves).map(|v| (0, v)))
    }

    pub fn path(n: usize) -> Result<Self> {
        Self::new(n, (1..n).map(|v| (v - 1, v)))
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_total(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.neighbors.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `d = 2|E| / n`.
    pub fn avg_degree(&self) -> f64 {
        2.0 * self.edges.len() as f64 / self.n as f64
    }
}

/// Parses an edge list: an optional first line holding the vertex count,
/// then one `u v` pair per line. `#` starts a comment; duplicates are
/// ignored. Without a header the vertex count is `1 + max id`.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut declared: Option<usize> = None;
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut seen_data = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();
        let num = |t: &str| {
            t.parse::<usize>().map_err(|_| Error::Parse { line, message: format!("'{t}' is not a vertex id") })
        };
        match tokens.as_slice() {
            [count] if !seen_data => {
                let n = num(count)?;
                if n == 0 {
                    return Err(Error::Parse { line, message: "vertex count must be positive".into() });
                }
                declared = Some(n);
            }
            [u, v] => {
                let (u, v) = (num(u)?, num(v)?);
                if u == v {
                    return Err(Error::LoopRejected { line, vertex: u });
                }
                if let Some(n) = declared {
                    if u >= n || v >= n {
                        return Err(Error::Parse {
                            line,
                            message: format!("vertex id {} out of range for {n} vertices", u.max(v)),
                        });
                    }
                }
                edges.push((line, u, v));
            }
            _ => {
                return Err(Error::Parse { line, message: format!("expected 'u v', got '{body}'") });
            }
        }
        seen_data = true;
    }
    let n = match declared {
        Some(n) => n,
        None => match edges.iter().map(|&(_, u, v)| u.max(v)).max() {
            Some(top) => top + 1,
            None => return Err(Error::Parse { line: 0, message: "no vertex count and no edges".into() }),
        },
    };
    Graph::new(n, edges.into_iter().map(|(_, u, v)| (u, v)))
}

/// Symmetric 0/1 adjacency matrix.
pub fn adjacency(g: &Graph) -> ComplexMatrix {
    let n = g.vertex_count();
    let mut data = vec![Complex64::new(0.0, 0.0); n * n];
    for (u, v) in g.edges() {
        data[u * n + v] = Complex64::new(1.0, 0.0);
        data[v * n + u] = Complex64::new(1.0, 0.0);
    }
    ComplexMatrix::new(n, n, data).expect("square 0/1 matrix")
}

/// `A - mean(A)`: every entry of the mean is `2|E| / n^2 = d / n`.
pub fn centered_adjacency(g: &Graph) -> ComplexMatrix {
    let n = g.vertex_count();
    let mean = (2 * g.edge_total()) as f64 / (n * n) as f64;
    let a = adjacency(g);
    ComplexMatrix::from_fn(n, n, |i, j| a.get(i, j) - mean).expect("finite entries")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSpectralProfile {
    pub n: usize,
    pub edges: usize,
    /// `||A||`, equal to the spectral radius.
    pub rho: f64,
    /// `sigma_2(A)`.
    pub sigma: f64,
    pub max_degree: usize,
    pub avg_degree: f64,
}

impl GraphSpectralProfile {
    pub fn compute(g: &Graph, opts: &SolverOptions) -> Result<Self> {
        let (rho, sigma) = if g.edge_total() == 0 {
            (0.0, 0.0)
        } else {
            let (s1, s2) = top_two_singular(&adjacency(g), opts)?;
            (s1.value, s2.value)
        };
        Ok(Self {
            n: g.vertex_count(),
            edges: g.edge_total(),
            rho,
            sigma,
            max_degree: g.max_degree(),
            avg_degree: g.avg_degree(),
        })
    }

    /// `rho <= Delta`, `sigma <= rho` and, with at least one edge, `sigma >= 1`.
    pub fn check(&self, eps: f64) -> Result<()> {
        let delta = self.max_degree as f64;
        if self.rho > delta * (1.0 + eps) {
            return Err(Error::InvariantViolation(format!("rho {} exceeds max degree {delta}", self.rho)));
        }
        if self.sigma > self.rho * (1.0 + eps) {
            return Err(Error::InvariantViolation(format!("sigma {} exceeds rho {}", self.sigma, self.rho)));
        }
        if self.edges > 0 && self.sigma < 1.0 - eps {
            return Err(Error::InvariantViolation(format!("sigma {} below 1 for a nonempty graph", self.sigma)));
        }
        Ok(())
    }
}

fn check_subset(g: &Graph, x: &BinaryVector) -> Result<()> {
    if x.dim() != g.vertex_count() {
        return Err(Error::DimensionMismatch { expected: g.vertex_count(), got: x.dim() });
    }
    Ok(())
}

/// `N_X(v)` sizes for every vertex.
fn neighbor_counts(g: &Graph, x: &BinaryVector) -> Vec<u64> {
    (0..g.vertex_count()).map(|v| g.neighbors(v).iter().filter(|&&u| x.contains(u)).count() as u64).collect()
}

/// `sum_v |N_X(v)|^2`, counted exactly.
pub fn neighborhood_energy(g: &Graph, x: &BinaryVector) -> Result<u64> {
    check_subset(g, x)?;
    if x.is_empty() {
        return Err(Error::EmptySubset);
    }
    Ok(neighbor_counts(g, x).iter().map(|c| c * c).sum())
}

/// `e(X, Y)`: ordered pairs `(x, y)` in `X x Y` with `xy` an edge, so an
/// edge inside `X ∩ Y` counts twice.
pub fn edge_count(g: &Graph, x: &BinaryVector, y: &BinaryVector) -> Result<u64> {
    check_subset(g, x)?;
    check_subset(g, y)?;
    Ok(g.edges()
        .map(|(u, v)| (x.contains(u) && y.contains(v)) as u64 + (x.contains(v) && y.contains(u)) as u64)
        .sum())
}

/// Checks `sum_v |N_X(v)|^2 <= rho^2 |X|` and
/// `e(X, Y) <= rho sqrt(|X| |Y|)` for nonempty `X`, `Y`.
pub fn forward_bounds(g: &Graph, rho: f64, x: &BinaryVector, y: &BinaryVector) -> Result<()> {
    let energy = neighborhood_energy(g, x)? as f64;
    let kx = x.popcount() as f64;
    if energy > rho * rho * kx * (1.0 + FORWARD_SLACK) {
        return Err(Error::InvariantViolation(format!("energy {energy} exceeds rho^2 |X| = {}", rho * rho * kx)));
    }
    if y.is_empty() {
        return Err(Error::EmptySubset);
    }
    let e = edge_count(g, x, y)? as f64;
    let bound = rho * (kx * y.popcount() as f64).sqrt();
    if e > bound * (1.0 + FORWARD_SLACK) {
        return Err(Error::InvariantViolation(format!("e(X,Y) = {e} exceeds rho sqrt(|X||Y|) = {bound}")));
    }
    Ok(())
}

/// `rho^2 / (128 (ln(Delta / rho) + 2))`.
pub fn energy_floor(rho: f64, max_degree: f64) -> f64 {
    rho * rho / (128.0 * ((max_degree / rho).ln() + 2.0))
}

/// `sigma^2 / (128 (ln(2 Delta / sigma) + 2))`, per vertex of `X`.
pub fn centered_energy_floor(sigma: f64, max_degree: f64) -> f64 {
    sigma * sigma / (128.0 * ((2.0 * max_degree / sigma).ln() + 2.0))
}

/// `sigma / (32 sqrt2 (ln(2 Delta / sigma) + 4))`, per `sqrt(|X| |Y|)`.
pub fn discrepancy_floor(sigma: f64, max_degree: f64) -> f64 {
    sigma / (32.0 * SQRT_2 * ((2.0 * max_degree / sigma).ln() + 4.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubsetWitness {
    pub x: BinaryVector,
    pub energy: u64,
    /// `energy / |X|`.
    pub energy_per_vertex: f64,
    /// Per-vertex floor from [`energy_floor`].
    pub floor: f64,
    pub witness: DeltaWitness,
}

/// Subset `X` with `sum_v |N_X(v)|^2 >= rho^2 |X| / (128 (ln(Delta/rho) + 2))`.
pub fn delta_subset_witness(g: &Graph, opts: &SolverOptions) -> Result<SubsetWitness> {
    if g.edge_total() == 0 {
        return Err(Error::EmptyGraph);
    }
    let witness = delta_witness(&adjacency(g), opts)?;
    let x = witness.xi.clone();
    let energy = neighborhood_energy(g, &x)?;
    let per = energy as f64 / x.popcount() as f64;
    let floor = energy_floor(witness.profile.spectral, g.max_degree() as f64);
    if per < floor * (1.0 - FLOOR_SLACK) {
        return Err(Error::InvariantViolation(format!("energy per vertex {per} below floor {floor}")));
    }
    Ok(SubsetWitness { x, energy, energy_per_vertex: per, floor, witness })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixingReport {
    pub x: BinaryVector,
    pub y: BinaryVector,
    pub edges_xy: u64,
    /// `|e(X, Y) - d |X| |Y| / n|`.
    pub discrepancy: f64,
    /// `discrepancy_floor(sigma, Delta) sqrt(|X| |Y|)`.
    pub floor: f64,
    /// `sigma sqrt(|X| |Y|)`, the forward mixing value for reference.
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CenteredReport {
    pub profile: GraphSpectralProfile,
    /// `K = 2 sqrt(||A||_1 ||A||_inf) / sigma`.
    pub k_bound: f64,
    pub x: BinaryVector,
    /// `sum_v (|N_X(v)| - d |X| / n)^2`.
    pub lhs: f64,
    /// `centered_energy_floor(sigma, Delta) |X|`.
    pub floor: f64,
    pub mixing: MixingReport,
    /// `sigma / (8 sqrt2 sqrt(ln K + 2))`.
    pub matrix_floor_delta: f64,
    /// `sigma / (32 sqrt2 (ln K + 4))`.
    pub matrix_floor_rho: f64,
    pub delta: DeltaWitness,
    pub rho: RhoWitness,
}

/// Witnesses on `A - mean(A)` for the converse mixing bounds: a subset with
/// large centered neighbourhood energy and a pair with large edge
/// discrepancy, both checked against their floors.
pub fn centered_witnesses(g: &Graph, opts: &SolverOptions) -> Result<CenteredReport> {
    let profile = GraphSpectralProfile::compute(g, opts)?;
    let sigma = profile.sigma;
    if g.edge_total() == 0 || sigma <= RANK_REL_TOL * profile.rho {
        return Err(Error::RankDeficient { sigma1: profile.rho, sigma2: sigma });
    }
    let a = adjacency(g);
    let k_bound = centered_height_bound(&a, profile.rho, sigma)?;
    let b = centered_adjacency(g);
    let n = g.vertex_count() as f64;
    let d = g.avg_degree();
    let delta_max = g.max_degree() as f64;

    let delta = delta_witness(&b, opts)?;
    let x = delta.xi.clone();
    let shift = d * x.popcount() as f64 / n;
    let lhs: f64 = neighbor_counts(g, &x).iter().map(|&c| (c as f64 - shift).powi(2)).sum();
    let floor = centered_energy_floor(sigma, delta_max) * x.popcount() as f64;
    if lhs < floor * (1.0 - FLOOR_SLACK) {
        return Err(Error::InvariantViolation(format!("centered energy {lhs} below floor {floor}")));
    }

    let rho = rho_witness(&b, opts)?;
    let (mx, my) = (rho.xi.clone(), rho.eta.clone());
    let edges_xy = edge_count(g, &mx, &my)?;
    let size = (mx.popcount() as f64 * my.popcount() as f64).sqrt();
    let discrepancy = (edges_xy as f64 - d * (mx.popcount() * my.popcount()) as f64 / n).abs();
    let mixing_floor = discrepancy_floor(sigma, delta_max) * size;
    if discrepancy < mixing_floor * (1.0 - FLOOR_SLACK) {
        return Err(Error::InvariantViolation(format!("discrepancy {discrepancy} below floor {mixing_floor}")));
    }
    let mixing = MixingReport { x: mx, y: my, edges_xy, discrepancy, floor: mixing_floor, upper: sigma * size };

    Ok(CenteredReport {
        k_bound,
        x,
        lhs,
        floor,
        mixing,
        matrix_floor_delta: sigma / (8.0 * SQRT_2 * (k_bound.ln() + 2.0).sqrt()),
        matrix_floor_rho: sigma / (32.0 * SQRT_2 * (k_bound.ln() + 4.0)),
        delta,
        rho,
        profile,
    })
}
