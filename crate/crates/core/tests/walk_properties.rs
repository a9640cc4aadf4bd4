use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qwsearch::spectral::dense::search_matrix;
use qwsearch::spectral::modes::all_modes;
use qwsearch::walk::evolve_success;
use qwsearch::{probability_trace, scan_hitting_time, CoinPair, GridSpec, MarkedConfig, Vertex, WalkerState};

fn grid(n: usize) -> GridSpec {
    GridSpec::new(n).unwrap()
}

fn marked(g: GridSpec, vs: &[(usize, usize)]) -> MarkedConfig {
    MarkedConfig::new(g, vs.iter().map(|&v| Vertex::from(v))).unwrap()
}

fn random_state(g: GridSpec, rng: &mut impl Rng) -> WalkerState {
    let mut amps: Vec<Complex64> =
        (0..g.dim()).map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    WalkerState::from_amplitudes(g, amps).unwrap()
}

fn even_state(g: GridSpec, rng: &mut impl Rng) -> WalkerState {
    let n = g.side();
    let mut s = random_state(g, rng);
    for (i, a) in s.amplitudes_mut().iter_mut().enumerate() {
        let p = i % g.vertices();
        if (p % n + p / n) % 2 == 1 {
            *a = Complex64::new(0.0, 0.0);
        }
    }
    let norm = s.norm_sqr().sqrt();
    s.amplitudes_mut().iter_mut().for_each(|a| *a /= norm);
    s
}

fn dense_apply(m: &qwsearch::spectral::dense::CMatrix, s: &WalkerState) -> Vec<Complex64> {
    let v = nalgebra::DVector::from_column_slice(s.amplitudes());
    (m * v).iter().copied().collect()
}

#[test]
fn walk_step_matches_dense_product_once() {
    let g = grid(4);
    let m = marked(g, &[(0, 0)]);
    let u = search_matrix(g, &m, &CoinPair::standard());
    let mut s = WalkerState::uniform(g);
    let expected = dense_apply(&u, &s);
    s.apply_search_step(&m, &CoinPair::standard());
    let err = s.amplitudes().iter().zip(&expected).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(err <= 1e-12, "{err}");
}

#[test]
fn dense_matrix_powers_agree_for_100_steps() {
    let g = grid(4);
    let coins = CoinPair::standard();
    for config in [vec![(0, 0)], vec![(1, 2), (3, 3)], vec![(0, 0), (2, 2), (1, 0)]] {
        let m = marked(g, &config);
        let u = search_matrix(g, &m, &coins);
        let mut s = WalkerState::uniform(g);
        let mut d = nalgebra::DVector::from_column_slice(s.amplitudes());
        for t in 1..=100 {
            s.apply_search_step(&m, &coins);
            d = &u * d;
            let err = s.amplitudes().iter().zip(d.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err <= 1e-10, "config {config:?} t={t}: {err}");
        }
    }
}

#[test]
fn fourier_modes_are_eigenvectors_of_the_walk() {
    let coins = CoinPair::standard();
    for n in [4, 8, 16] {
        let g = grid(n);
        for mode in all_modes(g) {
            let psi = mode.embody(g);
            let mut out = psi.clone();
            out.apply_walk_step(&coins);
            let e = Complex64::from_polar(1.0, mode.phase);
            let err = out
                .amplitudes()
                .iter()
                .zip(psi.amplitudes())
                .map(|(a, b)| (a - e * b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(err <= 1e-10, "n={n} mode {:?}: {err}", (mode.sign, mode.k, mode.l));
        }
    }
}

#[test]
fn fourier_modes_are_orthonormal() {
    for n in [4, 8, 16] {
        let g = grid(n);
        let modes: Vec<Vec<Complex64>> = all_modes(g).map(|m| m.embody(g).into_amplitudes()).collect();
        assert_eq!(modes.len(), g.dim());
        let mut worst = 0.0f64;
        for (i, a) in modes.iter().enumerate() {
            for (j, b) in modes.iter().enumerate().skip(i) {
                let ip: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((ip - target).norm());
            }
        }
        assert!(worst <= 1e-10, "n={n}: {worst}");
    }
}

#[test]
fn norm_is_preserved_over_ten_thousand_steps() {
    let coins = CoinPair::standard();
    for n in [4, 8, 32] {
        let g = grid(n);
        for config in [vec![(0, 0)], vec![(0, 0), (1, 2)], vec![(0, 0), (2, 2), (3, 1)]] {
            let m = marked(g, &config);
            let mut s = WalkerState::uniform(g);
            for t in 1..=10_000 {
                s.apply_search_step(&m, &coins);
                let drift = (s.norm_sqr() - 1.0).abs();
                assert!(drift <= 1e-12, "n={n} {config:?} t={t}: {drift}");
            }
        }
    }
}

#[test]
fn single_vertex_amplifies_above_uniform() {
    let g = grid(16);
    let m = marked(g, &[(0, 0)]);
    let trace = probability_trace(g, &m, &CoinPair::standard(), 2 * g.t_opt()).unwrap();
    let (_, peak) = scan_hitting_time(&trace);
    assert!(peak > 10.0 / g.vertices() as f64, "{peak}");
}

#[test]
fn opposite_parity_traces_add() {
    let g = grid(16);
    let coins = CoinPair::standard();
    let t_max = 2 * g.t_opt();
    let both = probability_trace(g, &marked(g, &[(0, 0), (3, 4)]), &coins, t_max).unwrap();
    let a = probability_trace(g, &marked(g, &[(0, 0)]), &coins, t_max).unwrap();
    let b = probability_trace(g, &marked(g, &[(3, 4)]), &coins, t_max).unwrap();
    let worst = (0..=t_max).map(|t| (both[t] - a[t] - b[t]).abs()).fold(0.0, f64::max);
    assert!(worst <= 1e-10, "{worst}");
}

#[test]
fn single_vertex_peak_near_hitting_time_at_n32() {
    let g = grid(32);
    assert_eq!(g.t_opt(), 37);
    let trace = probability_trace(g, &marked(g, &[(0, 0)]), &CoinPair::standard(), 2 * g.t_opt()).unwrap();
    let (t_peak, _) = scan_hitting_time(&trace);
    assert!((t_peak as f64 - 37.0).abs() <= 0.2 * 37.0, "t_peak = {t_peak}");
}

#[test]
fn empty_oracle_leaves_uniform_fixed() {
    let g = grid(8);
    let mut s = WalkerState::uniform(g);
    let before = s.clone();
    for _ in 0..50 {
        s.apply_walk_step(&CoinPair::standard());
    }
    assert!(s.max_abs_diff(&before) < 1e-12);
}

#[test]
fn random_states_keep_norm_and_parity() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let coins = CoinPair::standard();
    for n in [4, 8, 16] {
        let g = grid(n);
        let m = marked(g, &[(0, 0), (2, 2)]);
        let mut s = even_state(g, &mut rng);
        for _ in 0..300 {
            s.apply_search_step(&m, &coins);
        }
        assert!((s.norm_sqr() - 1.0).abs() <= 1e-12);
        assert!(s.odd_sublattice_weight() <= 1e-30);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn search_step_is_unitary(seed in any::<u64>(), half in 2usize..=6, mx in 0usize..12, my in 0usize..12) {
        let g = grid(2 * half);
        let n = g.side();
        let m = marked(g, &[(mx % n, my % n)]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = random_state(g, &mut rng);
        for _ in 0..50 {
            s.apply_search_step(&m, &CoinPair::standard());
        }
        prop_assert!((s.norm_sqr() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn even_sublattice_never_leaks(seed in any::<u64>(), half in 2usize..=6) {
        let g = grid(2 * half);
        let m = marked(g, &[(0, 0), (1, 1)]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = even_state(g, &mut rng);
        for _ in 0..100 {
            s.apply_search_step(&m, &CoinPair::standard());
        }
        prop_assert!(s.odd_sublattice_weight() <= 1e-30);
    }

    #[test]
    fn success_is_translation_invariant(dx in 0usize..8, dy in 0usize..8, x1 in 0usize..8, y1 in 0usize..8) {
        let g = grid(8);
        prop_assume!((x1, y1) != (0, 0));
        let base = marked(g, &[(0, 0), (x1, y1)]);
        let moved = marked(g, &[(dx, dy), ((x1 + dx) % 8, (y1 + dy) % 8)]);
        let coins = CoinPair::standard();
        for t in [1, 7, 20] {
            let a = evolve_success(g, &base, &coins, t);
            let b = evolve_success(g, &moved, &coins, t);
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }
}
