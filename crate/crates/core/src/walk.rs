//! State-vector evolution of the split-step walk `U = S_y (Cy x I) S_x (Cx x I)` and of the
//! search operator `U' = U R`.

use num_complex::Complex64;

use crate::coin::{CoinPair, Mat2};
use crate::error::{Error, Result};
use crate::grid::{GridSpec, MarkedConfig, Vertex};

/// Largest `t_max` accepted by [`probability_trace`].
pub const DEFAULT_STEP_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Dense amplitudes `alpha_{v,x,y}` in coin-major, row-major (`x` fastest) order.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkerState {
    grid: GridSpec,
    amps: Vec<Complex64>,
}

impl WalkerState {
    /// Equal superposition over all `2N` basis states.
    pub fn uniform(grid: GridSpec) -> Self {
        let a = 1.0 / (grid.dim() as f64).sqrt();
        Self { grid, amps: vec![Complex64::new(a, 0.0); grid.dim()] }
    }

    pub fn basis(grid: GridSpec, v: usize, x: usize, y: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); grid.dim()];
        amps[grid.index(v, x, y)] = Complex64::new(1.0, 0.0);
        Self { grid, amps }
    }

    /// `|d, m>` with `|d> = (|0> + |1>)/sqrt2`.
    pub fn diagonal_at(grid: GridSpec, m: Vertex) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![Complex64::new(0.0, 0.0); grid.dim()];
        amps[grid.index(0, m.x, m.y)] = Complex64::new(s, 0.0);
        amps[grid.index(1, m.x, m.y)] = Complex64::new(s, 0.0);
        Self { grid, amps }
    }

    pub fn from_amplitudes(grid: GridSpec, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != grid.dim() {
            return Err(Error::InvalidConfiguration(format!(
                "expected {} amplitudes for n={}, got {}",
                grid.dim(),
                grid.side(),
                amps.len()
            )));
        }
        Ok(Self { grid, amps })
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn amplitude(&self, v: usize, x: usize, y: usize) -> Complex64 {
        self.amps[self.grid.index(v, x, y)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Squared weight carried by vertices with `x + y` odd.
    pub fn odd_sublattice_weight(&self) -> f64 {
        let n = self.grid.side();
        let nn = self.grid.vertices();
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let p = i % nn;
                (p % n + p / n) % 2 == 1
            })
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// `<d, m | psi>`.
    pub fn diagonal_overlap(&self, m: Vertex) -> Complex64 {
        let g = self.grid;
        (self.amps[g.index(0, m.x, m.y)] + self.amps[g.index(1, m.x, m.y)]) * std::f64::consts::FRAC_1_SQRT_2
    }

    /// Coin-dependent cyclic shift: `|v>|i> -> |v>|i - (-1)^v mod n>` along `axis`.
    pub fn apply_shift(&mut self, axis: Axis) {
        let n = self.grid.side();
        let nn = self.grid.vertices();
        let (lower, upper) = self.amps.split_at_mut(nn);
        match axis {
            Axis::X => {
                // v = 0 moves towards x - 1, v = 1 towards x + 1
                for row in lower.chunks_exact_mut(n) {
                    row.rotate_left(1);
                }
                for row in upper.chunks_exact_mut(n) {
                    row.rotate_right(1);
                }
            }
            Axis::Y => {
                lower.rotate_left(n);
                upper.rotate_right(n);
            }
        }
    }

    /// Applies `c` on the coin register at every vertex.
    pub fn apply_coin(&mut self, c: &Mat2) {
        let nn = self.grid.vertices();
        let (lower, upper) = self.amps.split_at_mut(nn);
        for (a0, a1) in lower.iter_mut().zip(upper.iter_mut()) {
            let (u, v) = (*a0, *a1);
            *a0 = c[0][0] * u + c[0][1] * v;
            *a1 = c[1][0] * u + c[1][1] * v;
        }
    }

    /// One step of the unperturbed walk `U`.
    pub fn apply_walk_step(&mut self, coins: &CoinPair) {
        self.apply_coin(&coins.cx);
        self.apply_shift(Axis::X);
        self.apply_coin(&coins.cy);
        self.apply_shift(Axis::Y);
    }

    /// Oracle `R = I - 2 sum_m |d,m><d,m|`.
    ///
    /// On each marked vertex this maps `(a0, a1) -> (-a1, -a0)`.
    pub fn apply_oracle(&mut self, marked: &MarkedConfig) {
        let g = self.grid;
        for m in marked.vertices() {
            let i0 = g.index(0, m.x, m.y);
            let i1 = g.index(1, m.x, m.y);
            let (a0, a1) = (self.amps[i0], self.amps[i1]);
            self.amps[i0] = -a1;
            self.amps[i1] = -a0;
        }
    }

    /// One step of `U' = U R`.
    pub fn apply_search_step(&mut self, marked: &MarkedConfig, coins: &CoinPair) {
        self.apply_oracle(marked);
        self.apply_walk_step(coins);
    }

    /// `sum_m |<d, m | psi>|^2`.
    pub fn success_probability(&self, marked: &MarkedConfig) -> f64 {
        marked.vertices().iter().map(|&m| self.diagonal_overlap(m).norm_sqr()).sum()
    }

    /// Max-abs distance to another state on the same grid.
    pub fn max_abs_diff(&self, other: &WalkerState) -> f64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// `[p(0), ..., p(t_max)]` under `U'` starting from the uniform state.
pub fn probability_trace(grid: GridSpec, marked: &MarkedConfig, coins: &CoinPair, t_max: usize) -> Result<Vec<f64>> {
    probability_trace_with_budget(grid, marked, coins, t_max, DEFAULT_STEP_BUDGET)
}

pub fn probability_trace_with_budget(
    grid: GridSpec,
    marked: &MarkedConfig,
    coins: &CoinPair,
    t_max: usize,
    budget: usize,
) -> Result<Vec<f64>> {
    if t_max > budget {
        return Err(Error::Budget(format!("t_max = {t_max} exceeds the step budget of {budget}")));
    }
    let mut state = WalkerState::uniform(grid);
    let mut trace = Vec::with_capacity(t_max + 1);
    trace.push(state.success_probability(marked));
    for _ in 0..t_max {
        state.apply_search_step(marked, coins);
        trace.push(state.success_probability(marked));
    }
    Ok(trace)
}

/// Success probability after exactly `steps` applications of `U'`.
pub fn evolve_success(grid: GridSpec, marked: &MarkedConfig, coins: &CoinPair, steps: usize) -> f64 {
    let mut state = WalkerState::uniform(grid);
    for _ in 0..steps {
        state.apply_search_step(marked, coins);
    }
    state.success_probability(marked)
}

/// Index and value of the first global maximum.
///
/// Panics on an empty trace.
pub fn scan_hitting_time(trace: &[f64]) -> (usize, f64) {
    assert!(!trace.is_empty(), "scan_hitting_time needs a non-empty trace");
    trace
        .iter()
        .copied()
        .enumerate()
        .fold((0, trace[0]), |best, (t, p)| if p > best.1 { (t, p) } else { best })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> GridSpec {
        GridSpec::new(n).unwrap()
    }

    #[test]
    fn uniform_amplitudes() {
        let s = WalkerState::uniform(grid(4));
        assert_eq!(s.amplitudes().len(), 32);
        for a in s.amplitudes() {
            assert!((a.re - 0.176_776_695_296_636_9).abs() < 1e-15 && a.im == 0.0);
        }
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn uniform_is_fixed_by_walk() {
        let mut s = WalkerState::uniform(grid(4));
        let before = s.clone();
        s.apply_walk_step(&CoinPair::standard());
        assert!(s.max_abs_diff(&before) < 1e-12);
    }

    #[test]
    fn shift_x_moves_coin_zero_left() {
        let g = grid(8);
        let mut s = WalkerState::basis(g, 0, 2, 5);
        s.apply_shift(Axis::X);
        assert_eq!(s, WalkerState::basis(g, 0, 1, 5));
    }

    #[test]
    fn shift_x_wraps_coin_one() {
        let g = grid(8);
        let mut s = WalkerState::basis(g, 1, 7, 0);
        s.apply_shift(Axis::X);
        assert_eq!(s, WalkerState::basis(g, 1, 0, 0));
    }

    #[test]
    fn shift_y_both_directions() {
        let g = grid(8);
        let mut s = WalkerState::basis(g, 0, 3, 0);
        s.apply_shift(Axis::Y);
        assert_eq!(s, WalkerState::basis(g, 0, 3, 7));
        let mut s = WalkerState::basis(g, 1, 3, 7);
        s.apply_shift(Axis::Y);
        assert_eq!(s, WalkerState::basis(g, 1, 3, 0));
    }

    #[test]
    fn shift_fixes_uniform() {
        let mut s = WalkerState::uniform(grid(8));
        let before = s.clone();
        s.apply_shift(Axis::Y);
        assert!(s.max_abs_diff(&before) <= 1e-15);
    }

    #[test]
    fn oracle_reflects_diagonal_state() {
        let g = grid(8);
        let m = Vertex::new(2, 3);
        let marked = MarkedConfig::new(g, [m]).unwrap();
        let mut s = WalkerState::diagonal_at(g, m);
        s.apply_oracle(&marked);
        let mut expected = WalkerState::diagonal_at(g, m);
        expected.amplitudes_mut().iter_mut().for_each(|a| *a = -*a);
        assert!(s.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn oracle_leaves_antidiagonal_and_unmarked() {
        let g = grid(8);
        let m = Vertex::new(2, 3);
        let marked = MarkedConfig::new(g, [m]).unwrap();
        let s2 = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![Complex64::new(0.0, 0.0); g.dim()];
        amps[g.index(0, 2, 3)] = Complex64::new(s2, 0.0);
        amps[g.index(1, 2, 3)] = Complex64::new(-s2, 0.0);
        let mut s = WalkerState::from_amplitudes(g, amps).unwrap();
        let before = s.clone();
        s.apply_oracle(&marked);
        assert!(s.max_abs_diff(&before) < 1e-15);

        let mut b = WalkerState::basis(g, 1, 5, 5);
        b.apply_oracle(&marked);
        assert_eq!(b, WalkerState::basis(g, 1, 5, 5));
    }

    #[test]
    fn empty_oracle_is_walk() {
        let g = grid(8);
        let mut a = WalkerState::basis(g, 0, 1, 2);
        let mut b = a.clone();
        a.apply_search_step(&MarkedConfig::empty(), &CoinPair::standard());
        b.apply_walk_step(&CoinPair::standard());
        assert_eq!(a, b);
    }

    #[test]
    fn success_probability_cases() {
        let g = grid(8);
        let m = Vertex::new(1, 1);
        let one = MarkedConfig::new(g, [m]).unwrap();
        let three = MarkedConfig::new(g, [m, Vertex::new(0, 0), Vertex::new(4, 7)]).unwrap();
        let u = WalkerState::uniform(g);
        assert!((u.success_probability(&three) - 3.0 / 64.0).abs() < 1e-14);
        assert!((WalkerState::diagonal_at(g, m).success_probability(&one) - 1.0).abs() < 1e-15);
        assert!((WalkerState::basis(g, 0, 1, 1).success_probability(&one) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn trace_budget_and_start() {
        let g = grid(8);
        let marked = MarkedConfig::new(g, [Vertex::new(0, 0), Vertex::new(2, 2)]).unwrap();
        let c = CoinPair::standard();
        assert_eq!(probability_trace(g, &marked, &c, 0).unwrap(), vec![2.0 / 64.0]);
        assert!(matches!(probability_trace_with_budget(g, &marked, &c, 11, 10), Err(Error::Budget(_))));
    }

    #[test]
    fn hitting_time_tie_break() {
        assert_eq!(scan_hitting_time(&[0.1, 0.5, 0.5]), (1, 0.5));
        assert_eq!(scan_hitting_time(&[0.25]), (0, 0.25));
    }
}
