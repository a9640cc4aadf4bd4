//! Monte-Carlo experiments over random marked configurations.

mod classical;
mod rng;
pub mod sweep;

use std::io::Write;

use serde::{Deserialize, Serialize};

pub use classical::{classical_success, ClassicalBaseline};
pub use rng::{random_config, substream, Stream};

use crate::coin::CoinPair;
use crate::error::{Error, Result};
use crate::grid::{GridSpec, MarkedConfig};
use crate::par;
use crate::sum::CompensatedSum;
use crate::walk::evolve_success;

/// Exact success probability after `t_opt` steps of `U'` from the uniform state.
pub fn run_trial(grid: GridSpec, config: &MarkedConfig, coins: &CoinPair) -> f64 {
    evolve_success(grid, config, coins, grid.t_opt())
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunOptions {
    /// Worker count; `None` uses the ambient pool.
    pub threads: Option<usize>,
    /// Cap on simulated work, counted in vertex-steps (`trials * t_opt * N` per point).
    pub work_budget: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub n: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub tau: f64,
    pub t_opt: usize,
    pub p_quantum: f64,
    pub p_quantum_stderr: f64,
    pub p_classical: f64,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialStats {
    pub mean: f64,
    pub stderr: f64,
}

fn stats(samples: &[f64]) -> TrialStats {
    let k = samples.len() as f64;
    let mean = samples.iter().copied().collect::<CompensatedSum>().total() / k;
    if samples.len() < 2 {
        return TrialStats { mean, stderr: 0.0 };
    }
    let ss = samples.iter().map(|p| (p - mean) * (p - mean)).collect::<CompensatedSum>().total();
    TrialStats { mean, stderr: (ss / (k - 1.0) / k).sqrt() }
}

/// Mean and standard error of `run_trial` over `trials` random configurations of size `m`.
///
/// Trial `i` draws its configuration from `substream(seed, job, i)`; results are reduced in trial
/// order, so the outcome does not depend on scheduling.
pub fn mean_success(grid: GridSpec, m: usize, trials: usize, seed: u64, job: u64) -> Result<TrialStats> {
    if trials == 0 {
        return Err(Error::InvalidConfiguration("at least one trial is required".into()));
    }
    let coins = CoinPair::standard();
    let samples: Vec<Result<f64>> = par::map_indexed(trials, |i| {
        let config = random_config(grid, m, &mut substream(seed, job, i as u64))?;
        Ok(run_trial(grid, &config, &coins))
    });
    let samples = samples.into_iter().collect::<Result<Vec<f64>>>()?;
    Ok(stats(&samples))
}

/// Marked-count axis of a tau curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Population {
    /// Fractions `tau`; each becomes `M = round(tau N)`, at least 1.
    Taus(Vec<f64>),
    /// Explicit marked counts.
    Counts(Vec<usize>),
    /// Log-spaced fractions from `1/N` to `1` with this many points.
    LogSpaced(usize),
}

pub const DEFAULT_TAU_POINTS: usize = 9;

impl Population {
    /// Marked counts for one grid, in the listed order.
    pub fn counts(&self, grid: GridSpec) -> Result<Vec<usize>> {
        let big_n = grid.vertices();
        match self {
            Population::Taus(taus) => taus
                .iter()
                .map(|&tau| {
                    if tau > 0.0 && tau <= 1.0 {
                        Ok(((tau * big_n as f64).round() as usize).clamp(1, big_n))
                    } else {
                        Err(Error::InvalidConfiguration(format!("tau = {tau} is outside (0, 1]")))
                    }
                })
                .collect(),
            Population::Counts(ms) => ms
                .iter()
                .map(|&m| {
                    if (1..=big_n).contains(&m) {
                        Ok(m)
                    } else {
                        Err(Error::InvalidConfiguration(format!("M = {m} is outside [1, {big_n}]")))
                    }
                })
                .collect(),
            Population::LogSpaced(points) => {
                let points = (*points).max(2);
                let mut ms: Vec<usize> = (0..points)
                    .map(|i| {
                        let e = i as f64 / (points - 1) as f64;
                        ((big_n as f64).powf(e).round() as usize).clamp(1, big_n)
                    })
                    .collect();
                ms.dedup();
                Ok(ms)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauCurve {
    pub records: Vec<ExperimentRecord>,
    /// Set when the work budget stopped the sweep early.
    pub truncated: Option<String>,
}

/// Average success probability against `tau = M/N` for every size.
///
/// Point `j` of the flattened `(size, M)` list uses job id `j`.
pub fn tau_curve(
    sizes: &[usize],
    population: &Population,
    trials: usize,
    seed: u64,
    opts: RunOptions,
) -> Result<TauCurve> {
    if trials == 0 {
        return Err(Error::InvalidConfiguration("at least one trial is required".into()));
    }
    let mut jobs = Vec::new();
    for &n in sizes {
        let grid = GridSpec::new(n)?;
        for m in population.counts(grid)? {
            jobs.push((grid, m));
        }
    }
    par::with_threads(opts.threads, || {
        let mut records = Vec::with_capacity(jobs.len());
        let mut work = 0u64;
        for (job, &(grid, m)) in jobs.iter().enumerate() {
            let cost = (trials * grid.t_opt() * grid.vertices()) as u64;
            if let Some(budget) = opts.work_budget {
                if work + cost > budget {
                    let reason = format!(
                        "work budget of {budget} vertex-steps reached after {} of {} points",
                        records.len(),
                        jobs.len()
                    );
                    return Ok(TauCurve { records, truncated: Some(reason) });
                }
            }
            work += cost;
            records.push(point(grid, m, trials, seed, job as u64)?);
        }
        Ok(TauCurve { records, truncated: None })
    })?
}

fn point(grid: GridSpec, m: usize, trials: usize, seed: u64, job: u64) -> Result<ExperimentRecord> {
    let big_n = grid.vertices();
    let t_opt = grid.t_opt();
    let q = mean_success(grid, m, trials, seed, job)?;
    let cl = classical_success(big_n as u64, m as u64, t_opt as u64)?;
    Ok(ExperimentRecord {
        n: grid.side(),
        big_n,
        m,
        tau: m as f64 / big_n as f64,
        t_opt,
        p_quantum: q.mean,
        p_quantum_stderr: q.stderr,
        p_classical: cl.exact,
        trials,
        seed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMethod {
    Binary,
    Linear,
}

impl std::fmt::Display for SearchMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SearchMethod::Binary => "binary",
            SearchMethod::Linear => "linear",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    #[serde(rename = "M")]
    pub m: usize,
    pub p_quantum: f64,
    pub p_classical: f64,
}

impl Evaluation {
    /// The classical baseline wins. Differences below `CROSSING_TOL` count as ties.
    pub fn crossed(&self) -> bool {
        self.p_quantum < self.p_classical - CROSSING_TOL
    }
}

/// At `M = N` both probabilities equal one up to rounding; ties are not crossings.
pub const CROSSING_TOL: f64 = 1e-12;

/// Interior points probed to confirm the sign change before trusting the binary search.
const MONOTONE_PROBES: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalM {
    pub n: usize,
    #[serde(rename = "N")]
    pub big_n: usize,
    /// `None` when the quantum mean never drops below the baseline on `[1, N]`.
    #[serde(rename = "M_c")]
    pub m_c: Option<usize>,
    pub trials: usize,
    pub seed: u64,
    pub method: SearchMethod,
    /// Every evaluated point, sorted by `M`.
    pub evaluations: Vec<Evaluation>,
}

/// Smallest `M` whose mean quantum success falls below the classical baseline.
///
/// The quantum mean at `M` always uses job id `M`, so a point evaluates identically no matter
/// which search path reaches it.
pub fn critical_m(grid: GridSpec, trials: usize, seed: u64, opts: RunOptions) -> Result<CriticalM> {
    if trials == 0 {
        return Err(Error::InvalidConfiguration("at least one trial is required".into()));
    }
    par::with_threads(opts.threads, || critical_m_inner(grid, trials, seed))?
}

fn critical_m_inner(grid: GridSpec, trials: usize, seed: u64) -> Result<CriticalM> {
    let big_n = grid.vertices();
    let t_opt = grid.t_opt() as u64;
    let mut seen = std::collections::BTreeMap::<usize, Evaluation>::new();
    let mut eval = |m: usize| -> Result<bool> {
        if let Some(e) = seen.get(&m) {
            return Ok(e.crossed());
        }
        let q = mean_success(grid, m, trials, seed, m as u64)?;
        let cl = classical_success(big_n as u64, m as u64, t_opt)?;
        let e = Evaluation { m, p_quantum: q.mean, p_classical: cl.exact };
        let crossed = e.crossed();
        seen.insert(m, e);
        Ok(crossed)
    };

    let mut method = SearchMethod::Binary;
    let m_c = if eval(1)? {
        Some(1)
    } else {
        // doubling bracket: f(lo) holds the quantum lead, f(hi) is the first crossing seen
        let (mut lo, mut hi) = (1usize, 2usize.min(big_n));
        let mut found = false;
        loop {
            if eval(hi)? {
                found = true;
                break;
            }
            if hi == big_n {
                break;
            }
            lo = hi;
            hi = (2 * hi).min(big_n);
        }
        if !found {
            None
        } else {
            let (bracket_lo, bracket_hi) = (lo, hi);
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if eval(mid)? {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let span = hi - bracket_lo;
            let mut monotone = true;
            for i in 1..=MONOTONE_PROBES {
                let m = bracket_lo + span * i / (MONOTONE_PROBES + 1);
                if m > bracket_lo && m < hi && eval(m)? {
                    monotone = false;
                    break;
                }
            }
            if monotone {
                Some(hi)
            } else {
                method = SearchMethod::Linear;
                let mut first = bracket_hi;
                for m in bracket_lo + 1..=bracket_hi {
                    if eval(m)? {
                        first = m;
                        break;
                    }
                }
                Some(first)
            }
        }
    };
    Ok(CriticalM {
        n: grid.side(),
        big_n,
        m_c,
        trials,
        seed,
        method,
        evaluations: seen.into_values().collect(),
    })
}

pub const TAU_CURVE_HEADER: &str = "n,N,M,tau,t_opt,p_quantum,p_quantum_stderr,p_classical,trials,seed";
pub const CRITICAL_M_HEADER: &str = "n,N,M_c,trials,seed,method";

/// Writes the records; a truncated curve ends with a `# truncated: ...` line.
pub fn write_tau_curve_csv<W: Write>(curve: &TauCurve, mut out: W) -> Result<()> {
    writeln!(out, "{TAU_CURVE_HEADER}")?;
    for r in &curve.records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.n, r.big_n, r.m, r.tau, r.t_opt, r.p_quantum, r.p_quantum_stderr, r.p_classical, r.trials, r.seed
        )?;
    }
    if let Some(reason) = &curve.truncated {
        writeln!(out, "# truncated: {reason}")?;
    }
    Ok(())
}

/// A missing crossing is written as `none` in the `M_c` column.
pub fn write_critical_m_csv<W: Write>(results: &[CriticalM], mut out: W) -> Result<()> {
    writeln!(out, "{CRITICAL_M_HEADER}")?;
    for r in results {
        let m_c = r.m_c.map_or_else(|| "none".to_string(), |m| m.to_string());
        writeln!(out, "{},{},{},{},{},{}", r.n, r.big_n, m_c, r.trials, r.seed, r.method)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Vertex;
    use crate::walk::probability_trace;

    #[test]
    fn trial_matches_trace_entry() {
        let g = GridSpec::new(16).unwrap();
        let c = MarkedConfig::new(g, [Vertex::new(0, 0)]).unwrap();
        let trace = probability_trace(g, &c, &CoinPair::standard(), g.t_opt()).unwrap();
        assert_eq!(run_trial(g, &c, &CoinPair::standard()), trace[g.t_opt()]);
    }

    #[test]
    fn all_marked_trial_is_bounded() {
        let g = GridSpec::new(4).unwrap();
        let c = MarkedConfig::new(g, (0..16).map(|i| Vertex::new(i % 4, i / 4))).unwrap();
        let p = run_trial(g, &c, &CoinPair::standard());
        assert!(p <= 1.0 + 1e-12 && (p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn population_counts() {
        let g = GridSpec::new(16).unwrap();
        assert_eq!(Population::Taus(vec![1e-9, 0.5, 1.0]).counts(g).unwrap(), vec![1, 128, 256]);
        assert!(Population::Taus(vec![0.0]).counts(g).is_err());
        assert!(Population::Counts(vec![257]).counts(g).is_err());
        let ms = Population::LogSpaced(9).counts(g).unwrap();
        assert_eq!((ms[0], *ms.last().unwrap()), (1, 256));
        assert!(ms.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn tau_curve_full_tau_row() {
        let curve = tau_curve(&[8], &Population::Taus(vec![1.0]), 3, 5, RunOptions::default()).unwrap();
        let r = &curve.records[0];
        assert_eq!((r.m, r.p_classical), (64, 1.0));
        assert!((r.p_quantum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn budget_truncates_with_marker() {
        let opts = RunOptions { threads: None, work_budget: Some(1) };
        let curve = tau_curve(&[8], &Population::Counts(vec![1, 2]), 2, 0, opts).unwrap();
        assert!(curve.records.is_empty());
        let mut buf = Vec::new();
        write_tau_curve_csv(&curve, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().lines().last().unwrap().starts_with("# truncated"));
    }

    #[test]
    fn stats_of_constant_samples() {
        let s = stats(&[0.25; 10]);
        assert_eq!((s.mean, s.stderr), (0.25, 0.0));
        assert_eq!(stats(&[0.5]).stderr, 0.0);
    }
}
