//! Finite-`n` lattice sums over the non-flat Fourier modes and the `b` coefficients.
//!
//! All sums skip `(k, l) in {(0,0), (n/2, n/2)}` and accumulate in a fixed `k`-major order with
//! compensated summation.

use serde::{Deserialize, Serialize};

use super::modes::is_zero_phase;
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::sum::CompensatedSum;

/// Trig tables indexed by `j mod n`.
struct Tables {
    cos: Vec<f64>,
    sin: Vec<f64>,
    half_sin_sq: Vec<f64>,
}

impl Tables {
    fn new(grid: GridSpec) -> Self {
        let n = grid.side();
        let cos = (0..n).map(|j| grid.theta(j).cos()).collect();
        let sin = (0..n).map(|j| grid.theta(j).sin()).collect();
        let half_sin_sq = (0..n)
            .map(|j| {
                let s = (std::f64::consts::PI * j as f64 / n as f64).sin();
                s * s
            })
            .collect();
        Self { cos, sin, half_sin_sq }
    }

    /// `1 - cos t_k cos t_l`, written as `sin^2((t_k - t_l)/2) + sin^2((t_k + t_l)/2)`.
    #[inline]
    fn denom(&self, n: usize, k: usize, l: usize) -> f64 {
        self.half_sin_sq[(k + n - l) % n] + self.half_sin_sq[(k + l) % n]
    }
}

fn lattice_sum(grid: GridSpec, mut term: impl FnMut(&Tables, usize, usize) -> f64) -> f64 {
    let n = grid.side();
    let t = Tables::new(grid);
    let mut acc = CompensatedSum::new();
    for k in 0..n {
        for l in 0..n {
            if is_zero_phase(grid, k, l) {
                continue;
            }
            acc.add(term(&t, k, l));
        }
    }
    acc.total()
}

/// `sum 1 / (1 - cos t_k cos t_l)`; grows like `N ln N / pi`.
pub fn sum_c(grid: GridSpec) -> f64 {
    let n = grid.side();
    lattice_sum(grid, |t, k, l| 1.0 / t.denom(n, k, l))
}

/// `I(x, y) = -sum cos(2 pi (kx + ly)/n) sin t_k sin t_l / (1 - cos t_k cos t_l)`.
///
/// This is the coupling that enters `N Lambda_01 ~ 4/lambda - I - lambda M`.
pub fn sum_i(grid: GridSpec, x: usize, y: usize) -> f64 {
    let n = grid.side();
    -lattice_sum(grid, |t, k, l| t.cos[(k * x + l * y) % n] * t.sin[k] * t.sin[l] / t.denom(n, k, l))
}

/// `M(x, y) = sum cos(2 pi (kx + ly)/n) / (1 - cos t_k cos t_l)`.
pub fn sum_m(grid: GridSpec, x: usize, y: usize) -> f64 {
    let n = grid.side();
    lattice_sum(grid, |t, k, l| t.cos[(k * x + l * y) % n] / t.denom(n, k, l))
}

/// `sum_{phi != 0} sin(phi)/(1 - cos phi) |<d|v>|^2`, which cancels by `k -> n - k`.
pub fn sum_b(grid: GridSpec) -> f64 {
    use super::modes::{coin_overlap_sq, phase, Sign};
    let n = grid.side();
    let mut acc = CompensatedSum::new();
    for k in 0..n {
        for l in 0..n {
            if is_zero_phase(grid, k, l) {
                continue;
            }
            for a in Sign::BOTH {
                let phi = phase(grid, a, k, l);
                acc.add(phi.sin() / (1.0 - phi.cos()) * coin_overlap_sq(grid, a, k, l));
            }
        }
    }
    acc.total()
}

/// `b^lambda` for a mode of phase `phi`, with the small-`lambda` expansion alongside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BCoefficient {
    pub exact: f64,
    pub asymptotic: f64,
    /// `true` when the expansion used is the `2/lambda` pole branch (`phi = 0`).
    pub pole_branch: bool,
}

/// `b = sin(lambda - phi) / (1 - cos(lambda - phi))`, evaluated as `cot((lambda - phi)/2)`.
pub fn b_coefficient(lambda: f64, phi: f64) -> Result<BCoefficient> {
    use std::f64::consts::{PI, TAU};
    let d = (lambda - phi).rem_euclid(TAU);
    let d = if d > PI { d - TAU } else { d };
    if d.abs() < 4.0 * f64::EPSILON {
        return Err(Error::Singularity(format!("b coefficient pole at lambda = phi = {phi}")));
    }
    let half = 0.5 * d;
    let exact = half.cos() / half.sin();
    let pole_branch = phi == 0.0;
    let asymptotic = if pole_branch { 2.0 / lambda } else { -(lambda + phi.sin()) / (1.0 - phi.cos()) };
    Ok(BCoefficient { exact, asymptotic, pole_branch })
}
