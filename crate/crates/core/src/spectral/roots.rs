//! The 2x2 characteristic matrix `Lambda^lambda` for two marked vertices and the closed-form
//! roots of `det Lambda = 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::lattice::{b_coefficient, sum_c, sum_i, sum_m};
use super::modes::{coin_overlap_sq, phase, Sign};
use crate::error::{Error, Result};
use crate::grid::{GridSpec, MarkedConfig};
use crate::sum::CompensatedSum;

/// Symmetric pair of roots `(plus, minus)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootPair {
    pub plus: f64,
    pub minus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseIRoots {
    /// `+-2 sqrt(pi / (N ln N))`.
    pub asymptotic: RootPair,
    /// Root of `4/lambda - lambda C = 0` with the finite-`n` sum `C`.
    pub refined: RootPair,
    pub c_sum: f64,
}

pub fn lambda_case_i(grid: GridSpec) -> CaseIRoots {
    let big_n = grid.vertices() as f64;
    let a = 2.0 * (std::f64::consts::PI / (big_n * big_n.ln())).sqrt();
    let c_sum = sum_c(grid);
    let r = 2.0 / c_sum.sqrt();
    CaseIRoots {
        asymptotic: RootPair { plus: a, minus: -a },
        refined: RootPair { plus: r, minus: -r },
        c_sum,
    }
}

/// Roots of `det Lambda = 0` for an even offset.
///
/// The symmetric factor `Lambda_00 + Lambda_01` gives `lambda^2 (D + M) + I lambda - 8 = 0`; the
/// antisymmetric factor `Lambda_00 - Lambda_01` gives `lambda = I / (D - M)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseIIBranch {
    pub symmetric: RootPair,
    pub antisymmetric: Option<f64>,
}

impl CaseIIBranch {
    /// Smallest root above the flat-mode tolerance among all three roots.
    pub fn smallest_positive(&self) -> f64 {
        self.antisymmetric
            .filter(|&r| r > FLAT_ROOT_TOL)
            .map_or(self.symmetric.plus, |r| r.min(self.symmetric.plus))
    }

    /// Largest root below minus the flat-mode tolerance.
    pub fn largest_negative(&self) -> f64 {
        self.antisymmetric
            .filter(|&r| r < -FLAT_ROOT_TOL)
            .map_or(self.symmetric.minus, |r| r.max(self.symmetric.minus))
    }
}

/// Roots this close to zero belong to the flat eigenspace (`I` vanishes by symmetry).
pub const FLAT_ROOT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseIIRoots {
    /// Diagonal sum replaced by `N ln N / pi`.
    pub asymptotic: CaseIIBranch,
    /// Diagonal sum evaluated exactly at finite `n`.
    pub refined: CaseIIBranch,
    pub i_sum: f64,
    pub m_sum: f64,
    pub c_sum: f64,
}

pub fn lambda_case_ii(grid: GridSpec, x: usize, y: usize) -> Result<CaseIIRoots> {
    let n = grid.side();
    if (x % n, y % n) == (0, 0) {
        return Err(Error::InvalidConfiguration("offset (0,0) does not describe two vertices".into()));
    }
    if (x + y) % 2 != 0 {
        return Err(Error::InvalidConfiguration(format!("offset ({x},{y}) has odd parity")));
    }
    let i_sum = sum_i(grid, x % n, y % n);
    let m_sum = sum_m(grid, x % n, y % n);
    let c_sum = sum_c(grid);
    let branch = |d: f64| -> Result<CaseIIBranch> {
        let symmetric = quadratic_roots(i_sum, d + m_sum)?;
        let anti_denom = d - m_sum;
        let antisymmetric = (anti_denom != 0.0).then(|| i_sum / anti_denom);
        Ok(CaseIIBranch { symmetric, antisymmetric })
    };
    Ok(CaseIIRoots {
        asymptotic: branch(grid.n_log_n_over_pi())?,
        refined: branch(c_sum)?,
        i_sum,
        m_sum,
        c_sum,
    })
}

fn quadratic_roots(i_sum: f64, denom: f64) -> Result<RootPair> {
    if !(denom > 0.0) || !denom.is_finite() {
        return Err(Error::Singularity(format!("degenerate denominator {denom}")));
    }
    let disc = (i_sum * i_sum + 32.0 * denom).sqrt();
    // the root with a cancelling numerator comes from the product -8/denom
    let (plus, minus) = if i_sum >= 0.0 {
        let minus = (-i_sum - disc) / (2.0 * denom);
        (-8.0 / (denom * minus), minus)
    } else {
        let plus = (-i_sum + disc) / (2.0 * denom);
        (plus, -8.0 / (denom * plus))
    };
    Ok(RootPair { plus, minus })
}

/// `Lambda^lambda_{j,j'} = sum_{a,k,l} b^lambda_{a,k,l} <d,m_j|psi_{a,k,l}><psi_{a,k,l}|d,m_j'>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaMatrix {
    pub lambda: f64,
    pub entries: [[Complex64; 2]; 2],
}

impl LambdaMatrix {
    pub fn det(&self) -> Complex64 {
        let e = &self.entries;
        e[0][0] * e[1][1] - e[0][1] * e[1][0]
    }
}

/// Assembles `Lambda^lambda` from exact `b` coefficients and the closed-form coin overlaps.
pub fn lambda_matrix(grid: GridSpec, marked: &MarkedConfig, lambda: f64) -> Result<LambdaMatrix> {
    let [m0, m1] = marked.vertices() else {
        return Err(Error::InvalidConfiguration(format!("expected 2 marked vertices, got {}", marked.len())));
    };
    let n = grid.side();
    let (dx, dy) = grid.offset(*m1, *m0);
    let inv_n = 1.0 / grid.vertices() as f64;
    let mut diag = CompensatedSum::new();
    let (mut off_re, mut off_im) = (CompensatedSum::new(), CompensatedSum::new());
    for k in 0..n {
        for l in 0..n {
            let (s, c) = grid.theta((k * dx + l * dy) % n).sin_cos();
            for a in Sign::BOTH {
                let b = b_coefficient(lambda, phase(grid, a, k, l))?.exact;
                let w = b * coin_overlap_sq(grid, a, k, l) * inv_n;
                diag.add(w);
                off_re.add(w * c);
                off_im.add(w * s);
            }
        }
    }
    let d = Complex64::new(diag.total(), 0.0);
    let off = Complex64::new(off_re.total(), off_im.total());
    Ok(LambdaMatrix { lambda, entries: [[d, off], [off.conj(), d]] })
}
