//! Explicit `2N x 2N` matrices of the walk and a full eigendecomposition of `U'`.
//!
//! The matrices are assembled from Kronecker factors (permutation shifts, coin blocks and the
//! oracle projector), independently of the in-place sweeps in [`crate::walk`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coin::{CoinPair, Mat2};
use crate::error::{Error, Result};
use crate::grid::{GridSpec, MarkedConfig, Vertex};
use crate::walk::{Axis, WalkerState};

/// Largest side for which dense matrices are built.
pub const DENSE_MAX_SIDE: usize = 16;

/// Eigenphases closer to zero than this are treated as the unperturbed flat eigenvalue.
pub const ZERO_PHASE_TOL: f64 = 1e-8;

/// Phases closer than this are grouped into one eigenspace.
pub const CLUSTER_TOL: f64 = 1e-8;

pub type CMatrix = DMatrix<Complex64>;

fn check_budget(grid: GridSpec) -> Result<()> {
    if grid.side() > DENSE_MAX_SIDE {
        return Err(Error::Budget(format!(
            "dense eigendecomposition limited to n <= {DENSE_MAX_SIDE}, got n = {}",
            grid.side()
        )));
    }
    Ok(())
}

fn shift_matrix(grid: GridSpec, axis: Axis) -> CMatrix {
    let n = grid.side();
    let dim = grid.dim();
    let mut m = CMatrix::zeros(dim, dim);
    for v in 0..2 {
        for y in 0..n {
            for x in 0..n {
                let step = if v == 0 { n - 1 } else { 1 };
                let (tx, ty) = match axis {
                    Axis::X => ((x + step) % n, y),
                    Axis::Y => (x, (y + step) % n),
                };
                m[(grid.index(v, tx, ty), grid.index(v, x, y))] = Complex64::new(1.0, 0.0);
            }
        }
    }
    m
}

fn coin_matrix(grid: GridSpec, c: &Mat2) -> CMatrix {
    let dim = grid.dim();
    let nn = grid.vertices();
    let mut m = CMatrix::zeros(dim, dim);
    for p in 0..nn {
        for a in 0..2 {
            for b in 0..2 {
                m[(a * nn + p, b * nn + p)] = c[a][b];
            }
        }
    }
    m
}

/// `U = S_y (Cy x I) S_x (Cx x I)`.
pub fn walk_matrix(grid: GridSpec, coins: &CoinPair) -> CMatrix {
    shift_matrix(grid, Axis::Y) * coin_matrix(grid, &coins.cy) * shift_matrix(grid, Axis::X) * coin_matrix(grid, &coins.cx)
}

/// `R = I - 2 sum_m |d,m><d,m|`.
pub fn oracle_matrix(grid: GridSpec, marked: &MarkedConfig) -> CMatrix {
    let dim = grid.dim();
    let mut r = CMatrix::identity(dim, dim);
    for m in marked.vertices() {
        let i0 = grid.index(0, m.x, m.y);
        let i1 = grid.index(1, m.x, m.y);
        for a in [i0, i1] {
            for b in [i0, i1] {
                r[(a, b)] -= Complex64::new(1.0, 0.0);
            }
        }
    }
    r
}

pub fn search_matrix(grid: GridSpec, marked: &MarkedConfig, coins: &CoinPair) -> CMatrix {
    walk_matrix(grid, coins) * oracle_matrix(grid, marked)
}

/// Eigenphases in `(-pi, pi]` and the matching orthonormal eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct DenseSpectrum {
    pub grid: GridSpec,
    pub phases: Vec<f64>,
    pub vectors: CMatrix,
}

impl DenseSpectrum {
    /// Schur decomposition of the normal matrix `U'`: the triangular factor is diagonal and the
    /// unitary factor holds the eigenvectors.
    pub fn of_search_operator(grid: GridSpec, marked: &MarkedConfig, coins: &CoinPair) -> Result<Self> {
        check_budget(grid)?;
        let u = search_matrix(grid, marked, coins);
        let schur = nalgebra::Schur::try_new(u, f64::EPSILON, 0)
            .ok_or_else(|| Error::Singularity("Schur iteration did not converge".into()))?;
        let (q, t) = schur.unpack();
        let phases = (0..grid.dim()).map(|i| t[(i, i)].arg()).collect();
        Ok(Self { grid, phases, vectors: q })
    }

    /// `(lambda_+, lambda_-)`: smallest positive and largest negative phase beyond the flat
    /// tolerance.
    pub fn extreme_phases(&self) -> (f64, f64) {
        let plus = self.phases.iter().copied().filter(|&p| p > ZERO_PHASE_TOL).fold(f64::INFINITY, f64::min);
        let minus = self.phases.iter().copied().filter(|&p| p < -ZERO_PHASE_TOL).fold(f64::NEG_INFINITY, f64::max);
        (plus, minus)
    }

    /// Column indices whose phase lies within [`CLUSTER_TOL`] of `phase`.
    pub fn cluster(&self, phase: f64) -> Vec<usize> {
        self.phases
            .iter()
            .enumerate()
            .filter(|(_, &p)| {
                let d = (p - phase).rem_euclid(std::f64::consts::TAU);
                d.min(std::f64::consts::TAU - d) <= CLUSTER_TOL
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// `|<theta|psi>|^2` for every eigenvector.
    pub fn weights(&self, psi: &WalkerState) -> Vec<f64> {
        let v = DVector::from_column_slice(psi.amplitudes());
        (0..self.vectors.ncols()).map(|j| self.vectors.column(j).dotc(&v).norm_sqr()).collect()
    }

    /// Squared norm of the projection of `psi` onto the eigenspace at `phase`.
    pub fn projected_weight(&self, phase: f64, psi: &WalkerState) -> f64 {
        let v = DVector::from_column_slice(psi.amplitudes());
        self.cluster(phase).into_iter().map(|j| self.vectors.column(j).dotc(&v).norm_sqr()).sum()
    }

    /// Largest `|(U' - e^{i theta}) v|` over all eigenpairs.
    pub fn residual(&self, marked: &MarkedConfig, coins: &CoinPair) -> f64 {
        let u = search_matrix(self.grid, marked, coins);
        let uv = &u * &self.vectors;
        (0..self.vectors.ncols())
            .map(|j| {
                let e = Complex64::from_polar(1.0, self.phases[j]);
                (uv.column(j) - self.vectors.column(j) * e).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Smallest positive and largest negative eigenphase of `U'`.
///
/// With no marked vertex the walk keeps its flat eigenvalue `1`, and both phases are `0`.
pub fn numeric_extreme_eigenphases(grid: GridSpec, marked: &MarkedConfig, coins: &CoinPair) -> Result<(f64, f64)> {
    check_budget(grid)?;
    if marked.is_empty() {
        return Ok((0.0, 0.0));
    }
    Ok(DenseSpectrum::of_search_operator(grid, marked, coins)?.extreme_phases())
}

/// Eigenvector overlaps at the extreme phases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapReport {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    /// `|<d,m|lambda_+>|^2` per marked vertex (projector weight on the `lambda_+` eigenspace).
    pub marked_overlap_sq: Vec<f64>,
    /// `|<lambda_+|psi(0)>|^2`.
    pub initial_overlap_plus: f64,
    /// `|<lambda_-|psi(0)>|^2`.
    pub initial_overlap_minus: f64,
    /// Weight of `psi(0)` left on eigenvalue `1`.
    pub flat_weight: f64,
    /// `1 - (plus + minus + flat)`, the mass carried by the remaining spectrum.
    pub residual: f64,
    /// Total weight over the whole spectrum (should be `1`).
    pub completeness: f64,
}

pub fn overlap_coefficients(grid: GridSpec, marked: &MarkedConfig, coins: &CoinPair) -> Result<OverlapReport> {
    let spectrum = DenseSpectrum::of_search_operator(grid, marked, coins)?;
    let (lambda_plus, lambda_minus) = spectrum.extreme_phases();
    let psi0 = WalkerState::uniform(grid);
    let marked_overlap_sq = marked
        .vertices()
        .iter()
        .map(|&m: &Vertex| spectrum.projected_weight(lambda_plus, &WalkerState::diagonal_at(grid, m)))
        .collect();
    let initial_overlap_plus = spectrum.projected_weight(lambda_plus, &psi0);
    let initial_overlap_minus = spectrum.projected_weight(lambda_minus, &psi0);
    let weights = spectrum.weights(&psi0);
    let flat_weight: f64 = spectrum
        .phases
        .iter()
        .zip(&weights)
        .filter(|(p, _)| p.abs() <= ZERO_PHASE_TOL)
        .map(|(_, w)| w)
        .sum();
    let completeness = weights.iter().sum();
    Ok(OverlapReport {
        lambda_plus,
        lambda_minus,
        marked_overlap_sq,
        initial_overlap_plus,
        initial_overlap_minus,
        flat_weight,
        residual: 1.0 - (initial_overlap_plus + initial_overlap_minus + flat_weight),
        completeness,
    })
}
