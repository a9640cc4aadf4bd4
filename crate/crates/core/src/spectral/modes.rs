//! Closed-form eigenpairs of the unperturbed walk.
//!
//! A plane wave `e^{2 pi i (kx + ly)/n}` is mapped by `U` onto itself times the momentum coin
//! `diag(w^l, w^-l) Cy diag(w^k, w^-k) Cx`, which for the standard coins is
//! `[[w^l cos t_k, -w^l sin t_k], [w^-l sin t_k, w^-l cos t_k]]` with eigenvalues
//! `exp(+-i arccos(cos t_k cos t_l))`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coin::Mat2;
use crate::grid::GridSpec;
use crate::walk::WalkerState;

/// Branch of the eigenphase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    #[inline]
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierMode {
    pub sign: Sign,
    pub k: usize,
    pub l: usize,
    pub phase: f64,
    pub coin_vector: [Complex64; 2],
}

impl FourierMode {
    /// Full `2N`-amplitude eigenvector `|v> (x) (1/n) sum_{x,y} e^{2 pi i (kx+ly)/n} |x,y>`.
    pub fn embody(&self, grid: GridSpec) -> WalkerState {
        let n = grid.side();
        let norm = 1.0 / n as f64;
        let mut amps = vec![Complex64::new(0.0, 0.0); grid.dim()];
        for y in 0..n {
            for x in 0..n {
                let j = (self.k * x + self.l * y) % n;
                let wave = Complex64::from_polar(norm, grid.theta(j));
                amps[grid.index(0, x, y)] = self.coin_vector[0] * wave;
                amps[grid.index(1, x, y)] = self.coin_vector[1] * wave;
            }
        }
        WalkerState::from_amplitudes(grid, amps).expect("dimension matches grid")
    }
}

/// `(k, l)` with `cos t_k cos t_l = 1`: the four flat modes live here.
#[inline]
pub fn is_zero_phase(grid: GridSpec, k: usize, l: usize) -> bool {
    let h = grid.side() / 2;
    (k == 0 && l == 0) || (k == h && l == h)
}

/// `phi_{a,k,l} = a arccos(cos t_k cos t_l)`.
pub fn phase(grid: GridSpec, sign: Sign, k: usize, l: usize) -> f64 {
    if is_zero_phase(grid, k, l) {
        return 0.0;
    }
    let c = (grid.theta(k).cos() * grid.theta(l).cos()).clamp(-1.0, 1.0);
    sign.value() * c.acos()
}

/// Momentum-space coin for the standard coin pair.
pub fn momentum_coin(grid: GridSpec, k: usize, l: usize) -> Mat2 {
    let (sk, ck) = grid.theta(k).sin_cos();
    let wl = Complex64::from_polar(1.0, grid.theta(l));
    let wl_inv = wl.conj();
    [[wl * ck, -wl * sk], [wl_inv * sk, wl_inv * ck]]
}

fn on_axis(grid: GridSpec, j: usize) -> bool {
    j == 0 || 2 * j == grid.side()
}

pub fn fourier_mode(grid: GridSpec, sign: Sign, k: usize, l: usize) -> FourierMode {
    assert!(k < grid.side() && l < grid.side(), "mode index out of range");
    let phi = phase(grid, sign, k, l);
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let coin_vector = if on_axis(grid, k) {
        // diagonal momentum coin
        if on_axis(grid, l) {
            // degenerate: the coin is +-identity
            match sign {
                Sign::Plus => [one, zero],
                Sign::Minus => [zero, one],
            }
        } else {
            let c = momentum_coin(grid, k, l);
            let target = Complex64::from_polar(1.0, phi);
            if (c[0][0] - target).norm() <= (c[1][1] - target).norm() {
                [one, zero]
            } else {
                [zero, one]
            }
        }
    } else {
        let (sk, ck) = grid.theta(k).sin_cos();
        let v = [Complex64::new(-sk, 0.0), Complex64::from_polar(1.0, phi - grid.theta(l)) - ck];
        let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        [v[0] / norm, v[1] / norm]
    };
    FourierMode { sign, k, l, phase: phi, coin_vector }
}

/// Closed form of `|<d|v_{a,k,l}>|^2 = 1/2 - a sin t_k sin t_l / (2 sin phi_+)`.
///
/// Modes on the axes `k, l in {0, n/2}` have a diagonal momentum coin and overlap `1/2`.
pub fn coin_overlap_sq(grid: GridSpec, sign: Sign, k: usize, l: usize) -> f64 {
    if on_axis(grid, k) || on_axis(grid, l) {
        return 0.5;
    }
    let s = grid.theta(k).sin() * grid.theta(l).sin();
    let sin_phi = phase(grid, Sign::Plus, k, l).sin();
    0.5 - sign.value() * 0.5 * s / sin_phi
}

/// Every `(sign, k, l)` triple in a fixed order.
pub fn all_modes(grid: GridSpec) -> impl Iterator<Item = FourierMode> {
    let n = grid.side();
    (0..n).flat_map(move |k| (0..n).flat_map(move |l| Sign::BOTH.into_iter().map(move |a| fourier_mode(grid, a, k, l))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn g(n: usize) -> GridSpec {
        GridSpec::new(n).unwrap()
    }

    #[test]
    fn special_phases() {
        let grid = g(8);
        assert_eq!(fourier_mode(grid, Sign::Plus, 0, 0).phase, 0.0);
        assert_eq!(fourier_mode(grid, Sign::Plus, 4, 4).phase, 0.0);
        assert!((fourier_mode(grid, Sign::Plus, 2, 0).phase - FRAC_PI_2).abs() < 1e-15);
        assert!((fourier_mode(grid, Sign::Minus, 4, 0).phase + PI).abs() < 1e-15);
    }

    #[test]
    fn exactly_four_zero_phase_modes() {
        for n in [4, 8, 16] {
            assert_eq!(all_modes(g(n)).filter(|m| m.phase == 0.0).count(), 4);
        }
    }

    #[test]
    fn coin_vectors_are_eigenvectors() {
        let grid = g(8);
        for m in all_modes(grid) {
            let c = momentum_coin(grid, m.k, m.l);
            let v = m.coin_vector;
            let cv = [c[0][0] * v[0] + c[0][1] * v[1], c[1][0] * v[0] + c[1][1] * v[1]];
            let e = Complex64::from_polar(1.0, m.phase);
            let err = ((cv[0] - e * v[0]).norm_sqr() + (cv[1] - e * v[1]).norm_sqr()).sqrt();
            assert!(err < 1e-13, "mode {:?}: {err}", (m.sign, m.k, m.l));
            assert!((v[0].norm_sqr() + v[1].norm_sqr() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn overlap_completeness() {
        let grid = g(16);
        for k in 0..16 {
            for l in 0..16 {
                let s: f64 = Sign::BOTH.iter().map(|&a| coin_overlap_sq(grid, a, k, l)).sum();
                assert!((s - 1.0).abs() < 1e-14);
            }
        }
        assert_eq!(coin_overlap_sq(grid, Sign::Plus, 0, 0), 0.5);
    }

    #[test]
    fn overlap_formula_matches_coin_vector() {
        for n in [4, 8, 16] {
            let grid = g(n);
            for m in all_modes(grid) {
                let direct = (m.coin_vector[0] + m.coin_vector[1]).norm_sqr() / 2.0;
                let formula = coin_overlap_sq(grid, m.sign, m.k, m.l);
                assert!((direct - formula).abs() < 1e-13, "n={n} {:?}", (m.sign, m.k, m.l));
            }
        }
    }
}
