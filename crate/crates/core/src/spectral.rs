//! Graph Laplacians, the spectral gap, the `lambda_1 > 1/2` criterion on the
//! link graph, the three-part decomposition identity and closed-form
//! spectral-gap bounds for random graph models.

use serde::{Deserialize, Serialize};

use crate::eigen::{eig_symmetric, SquareMatrix};
use crate::error::{invalid, Error, Result};
use crate::graph::Multigraph;
use crate::linkgraph::{build_link_graph, split_link_parts};
use crate::models::Presentation;

/// Per-dimension zero-eigenvalue tolerance.
pub const ZERO_TOL_PER_DIM: f64 = 1e-8;

/// `lambda_1` must exceed `1/2` by more than this for the criterion to hold.
pub const CRITERION_MARGIN: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LaplacianKind {
    /// `I - D^-1 A`
    Walk,
    /// `I - D^-1/2 A D^-1/2`
    Normalized,
}

fn first_zero_degree(deg: &[usize]) -> Option<usize> {
    deg.iter().position(|&d| d == 0)
}

pub fn laplacian(g: &Multigraph, kind: LaplacianKind) -> Result<SquareMatrix> {
    let deg = g.degrees();
    if let Some(vertex) = first_zero_degree(&deg) {
        return Err(Error::ZeroDegree { vertex });
    }
    let n = g.vertex_count();
    let a = g.adjacency();
    let mut l = SquareMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            let aij = a[i * n + j];
            if aij == 0.0 {
                continue;
            }
            let scaled = match kind {
                LaplacianKind::Walk => aij / deg[i] as f64,
                LaplacianKind::Normalized => aij / ((deg[i] * deg[j]) as f64).sqrt(),
            };
            l.set(i, j, l.get(i, j) - scaled);
        }
    }
    Ok(l)
}

/// Normalized-Laplacian spectrum, ascending. Shared by both Laplacians.
pub fn laplacian_spectrum(g: &Multigraph) -> Result<Vec<f64>> {
    eig_symmetric(&laplacian(g, LaplacianKind::Normalized)?)
}

pub fn zero_tolerance(dim: usize) -> f64 {
    ZERO_TOL_PER_DIM * dim.max(1) as f64
}

/// Spectral gap read off a sorted spectrum: the second eigenvalue for a
/// connected graph, otherwise the smallest eigenvalue above the zero
/// tolerance (diagnostic only).
fn gap_from_spectrum(eigenvalues: &[f64], connected: bool) -> Option<f64> {
    if connected {
        eigenvalues.get(1).copied()
    } else {
        let tol = zero_tolerance(eigenvalues.len());
        eigenvalues.iter().copied().find(|&x| x > tol)
    }
}

/// `(lambda_1, connected)`.
pub fn lambda1(g: &Multigraph) -> Result<(f64, bool)> {
    let ev = laplacian_spectrum(g)?;
    let connected = g.is_connected();
    let value = gap_from_spectrum(&ev, connected).unwrap_or(0.0);
    Ok((value, connected))
}

/// Flat record of a spectral computation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub eigenvalues: Vec<f64>,
    pub lambda1: Option<f64>,
    pub connected: bool,
    pub min_degree: f64,
    pub max_degree: f64,
    pub mean_degree: f64,
    pub criterion: bool,
    /// Why the spectrum could not be computed, if it could not.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl SpectralReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

fn degree_stats(g: &Multigraph) -> (f64, f64, f64) {
    let deg = g.degrees();
    if deg.is_empty() {
        return (0.0, 0.0, 0.0);
    }
    let min = *deg.iter().min().unwrap() as f64;
    let max = *deg.iter().max().unwrap() as f64;
    let mean = deg.iter().sum::<usize>() as f64 / deg.len() as f64;
    (min, max, mean)
}

/// Spectral report for an arbitrary graph. A zero-degree vertex is reported
/// in `note` rather than raised.
pub fn graph_report(g: &Multigraph) -> SpectralReport {
    let (min_degree, max_degree, mean_degree) = degree_stats(g);
    let connected = g.is_connected();
    match laplacian_spectrum(g) {
        Ok(eigenvalues) => {
            let lambda1 = gap_from_spectrum(&eigenvalues, connected);
            let criterion = connected && lambda1.is_some_and(|x| x > 0.5 + CRITERION_MARGIN);
            SpectralReport {
                eigenvalues,
                lambda1,
                connected,
                min_degree,
                max_degree,
                mean_degree,
                criterion,
                note: None,
            }
        }
        Err(e) => SpectralReport {
            eigenvalues: Vec::new(),
            lambda1: None,
            connected,
            min_degree,
            max_degree,
            mean_degree,
            criterion: false,
            note: Some(e.to_string()),
        },
    }
}

/// Whether the link graph is connected with `lambda_1 > 1/2`. A `true`
/// verdict is a sufficient condition for property (T); `false` decides
/// nothing.
pub fn spectral_criterion(p: &Presentation) -> Result<(bool, SpectralReport)> {
    let g = build_link_graph(p)?;
    let report = graph_report(&g);
    Ok((report.criterion, report))
}

/// Max-norm of `Delta - sum_i D_i D^-1 Delta_i` on the link graph, with the
/// rows of `Delta_i` at vertices isolated in `L_i` set to zero. Rows of
/// vertices isolated in the whole link graph are zero on both sides.
pub fn decomposition_identity_residual(p: &Presentation) -> Result<f64> {
    let whole = build_link_graph(p)?;
    let n = whole.vertex_count();
    let delta = walk_laplacian_zero_rows(&whole);
    let total_deg = whole.degrees();
    let mut sum = SquareMatrix::zeros(n);
    for part in split_link_parts(p)? {
        let part_delta = walk_laplacian_zero_rows(&part);
        let deg = part.degrees();
        for i in 0..n {
            if deg[i] == 0 {
                continue;
            }
            let weight = deg[i] as f64 / total_deg[i] as f64;
            for j in 0..n {
                sum.set(i, j, sum.get(i, j) + weight * part_delta.get(i, j));
            }
        }
    }
    Ok(delta.max_abs_diff(&sum))
}

/// `I - D^-1 A` with zero rows at isolated vertices.
fn walk_laplacian_zero_rows(g: &Multigraph) -> SquareMatrix {
    let n = g.vertex_count();
    let deg = g.degrees();
    let a = g.adjacency();
    let mut l = SquareMatrix::zeros(n);
    for i in 0..n {
        if deg[i] == 0 {
            continue;
        }
        for j in 0..n {
            let id = if i == j { 1.0 } else { 0.0 };
            l.set(i, j, id - a[i * n + j] / deg[i] as f64);
        }
    }
    l
}

/// Closed-form lower bounds on `lambda_1` for random graph models.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundKind {
    /// Configuration model of degree `2v`; `c` is an unspecified constant.
    Friedman { v: f64, c: f64 },
    /// Bipartite `v`-regular model.
    FriedmanBipartite { v: f64, eps: f64 },
    /// `G(n, p)` with slack function value `g`; the `(1 + o(1))` factor is
    /// taken as 1.
    Chung { n: f64, p: f64, g: f64 },
}

/// Evaluate a bound. Logarithms are natural.
pub fn bound(kind: BoundKind) -> Result<f64> {
    match kind {
        BoundKind::Friedman { v, c } => {
            if v < 1.0 {
                return Err(invalid("v", "must be >= 1"));
            }
            if c < 0.0 {
                return Err(invalid("c", "must be >= 0"));
            }
            Ok(1.0 - ((2.0 * v - 1.0).sqrt() / v + v.ln() / v + c / v))
        }
        BoundKind::FriedmanBipartite { v, eps } => {
            if v < 1.0 {
                return Err(invalid("v", "must be >= 1"));
            }
            if eps < 0.0 {
                return Err(invalid("eps", "must be >= 0"));
            }
            Ok(1.0 - ((2.0 * v).sqrt() * (v - 1.0).powf(0.25) / v + eps / v))
        }
        BoundKind::Chung { n, p, g } => {
            if n < 2.0 {
                return Err(invalid("n", "must be >= 2"));
            }
            if !(p > 0.0 && p < 1.0) {
                return Err(invalid("p", "must lie in (0,1)"));
            }
            if g < 0.0 {
                return Err(invalid("g", "must be >= 0"));
            }
            let np = n * p;
            Ok(1.0 - 4.0 / np.sqrt() - g * n.ln().powi(2) / np)
        }
    }
}
