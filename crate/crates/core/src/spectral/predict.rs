//! Two-mode prediction of the success curve `p(t) ~ p_succ sin^2(lambda t + c)`.

use serde::{Deserialize, Serialize};

use super::roots::{lambda_case_i, lambda_case_ii, RootPair};
use crate::error::{Error, Result};
use crate::grid::{GridSpec, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    /// `x + y` odd: the two vertices sit on different sublattices.
    CaseI,
    /// `x + y` even.
    CaseII,
}

impl CaseTag {
    pub fn of_offset(x: usize, y: usize) -> Self {
        if (x + y) % 2 == 1 {
            CaseTag::CaseI
        } else {
            CaseTag::CaseII
        }
    }
}

/// `I^2 <= RELIABILITY_RATIO * (N ln N / pi + M)` is read as `I^2 << N ln N / pi + M`.
pub const RELIABILITY_RATIO: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralPrediction {
    pub n: usize,
    pub offset: (usize, usize),
    pub case_tag: CaseTag,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    /// Same roots with the diagonal lattice sum evaluated at finite `n`.
    pub lambda_refined: RootPair,
    /// Root of the antisymmetric factor of `det Lambda` (finite-`n` sums; case II only).
    /// Its eigenvector is orthogonal to the initial state, so it does not drive the search.
    pub antisymmetric_root: Option<f64>,
    /// Smallest positive root of `det Lambda = 0` with finite-`n` sums: the predicted position
    /// of the eigenphase closest to zero from above.
    pub smallest_positive_root: f64,
    #[serde(rename = "I_sum")]
    pub i_sum: f64,
    #[serde(rename = "M_sum")]
    pub m_sum: f64,
    #[serde(rename = "C_sum")]
    pub c_sum: f64,
    /// `N ln N / pi`.
    pub c_asymptotic: f64,
    /// `|beta_{+,j}|^2`.
    pub beta_sq: f64,
    pub t_opt: usize,
    pub p_succ: f64,
    /// Phase offset of the sinusoid, fixed by `p(0) = M/N`.
    pub phase0: f64,
    pub reliable: bool,
    /// Gap between simulation and prediction, filled in by callers that simulate.
    pub residual_note: Option<f64>,
}

impl SpectralPrediction {
    /// Two-mode curve `p_succ sin^2(lambda_+ t + phase0)`.
    pub fn curve(&self, t: usize) -> f64 {
        let s = (self.lambda_plus * t as f64 + self.phase0).sin();
        self.p_succ * s * s
    }
}

fn phase0(p0: f64, p_succ: f64) -> f64 {
    (p0 / p_succ).min(1.0).sqrt().asin()
}

/// Analytic prediction for the pair `{m0, m1}`.
pub fn predicted_success(grid: GridSpec, m0: Vertex, m1: Vertex) -> Result<SpectralPrediction> {
    if !grid.contains(m0) || !grid.contains(m1) {
        let bad = if grid.contains(m0) { m1 } else { m0 };
        return Err(Error::VertexOutOfRange { x: bad.x, y: bad.y, n: grid.side() });
    }
    if m0 == m1 {
        return Err(Error::InvalidConfiguration("the two marked vertices coincide".into()));
    }
    let (x, y) = grid.offset(m0, m1);
    let big_n = grid.vertices() as f64;
    let ln_n = big_n.ln();
    let c_asymptotic = grid.n_log_n_over_pi();
    let p0 = 2.0 / big_n;
    match CaseTag::of_offset(x, y) {
        CaseTag::CaseI => {
            let roots = lambda_case_i(grid);
            let beta_sq = std::f64::consts::PI / (16.0 * ln_n);
            let p_succ = 2.0 * 4.0 * beta_sq;
            Ok(SpectralPrediction {
                n: grid.side(),
                offset: (x, y),
                case_tag: CaseTag::CaseI,
                lambda_plus: roots.asymptotic.plus,
                lambda_minus: roots.asymptotic.minus,
                lambda_refined: roots.refined,
                antisymmetric_root: None,
                smallest_positive_root: roots.refined.plus,
                i_sum: 0.0,
                m_sum: 0.0,
                c_sum: roots.c_sum,
                c_asymptotic,
                beta_sq,
                t_opt: grid.t_opt().max(1),
                p_succ,
                phase0: phase0(p0, p_succ),
                reliable: true,
                residual_note: None,
            })
        }
        CaseTag::CaseII => {
            let roots = lambda_case_ii(grid, x, y)?;
            let beta_sq = big_n / (32.0 * (c_asymptotic + roots.m_sum));
            let p_succ = (2.0 * 4.0 * beta_sq).min(1.0);
            let ph = phase0(p0, p_succ);
            let lambda = roots.asymptotic.symmetric.plus;
            let t_opt = (((std::f64::consts::FRAC_PI_2 - ph) / lambda).ceil() as usize).max(1);
            let reliable = roots.i_sum * roots.i_sum <= RELIABILITY_RATIO * (c_asymptotic + roots.m_sum);
            Ok(SpectralPrediction {
                n: grid.side(),
                offset: (x, y),
                case_tag: CaseTag::CaseII,
                lambda_plus: lambda,
                lambda_minus: roots.asymptotic.symmetric.minus,
                lambda_refined: roots.refined.symmetric,
                antisymmetric_root: roots.refined.antisymmetric,
                smallest_positive_root: roots.refined.smallest_positive(),
                i_sum: roots.i_sum,
                m_sum: roots.m_sum,
                c_sum: roots.c_sum,
                c_asymptotic,
                beta_sq,
                t_opt,
                p_succ,
                phase0: ph,
                reliable,
                residual_note: None,
            })
        }
    }
}
