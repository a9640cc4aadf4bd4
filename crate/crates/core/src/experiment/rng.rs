use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{GridSpec, MarkedConfig, Vertex};

pub type Stream = ChaCha8Rng;

/// Independent generator for `(seed, job, trial)`.
///
/// The stream word packs `job` in the high half and `trial` in the low half, so streams never
/// overlap for `job, trial < 2^32`.
pub fn substream(seed: u64, job: u64, trial: u64) -> Stream {
    debug_assert!(job < 1 << 32 && trial < 1 << 32);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((job << 32) | (trial & 0xffff_ffff));
    rng
}

/// Uniform sample of `m` distinct vertices (partial Fisher-Yates over the `N` vertex indices).
pub fn random_config<R: Rng + ?Sized>(grid: GridSpec, m: usize, rng: &mut R) -> Result<MarkedConfig> {
    let big_n = grid.vertices();
    if m == 0 || m > big_n {
        return Err(Error::InvalidConfiguration(format!("cannot mark {m} of {big_n} vertices")));
    }
    let mut idx: Vec<usize> = (0..big_n).collect();
    for i in 0..m {
        let j = rng.random_range(i..big_n);
        idx.swap(i, j);
    }
    let n = grid.side();
    MarkedConfig::new(grid, idx[..m].iter().map(|&i| Vertex::new(i % n, i / n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_config_marks_everything() {
        let g = GridSpec::new(4).unwrap();
        let c = random_config(g, 16, &mut substream(1, 0, 0)).unwrap();
        assert_eq!(c.len(), 16);
    }

    #[test]
    fn same_key_same_config() {
        let g = GridSpec::new(16).unwrap();
        let a = random_config(g, 5, &mut substream(9, 3, 17)).unwrap();
        let b = random_config(g, 5, &mut substream(9, 3, 17)).unwrap();
        let c = random_config(g, 5, &mut substream(9, 3, 18)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn out_of_range_counts() {
        let g = GridSpec::new(4).unwrap();
        assert!(random_config(g, 0, &mut substream(0, 0, 0)).is_err());
        assert!(random_config(g, 17, &mut substream(0, 0, 0)).is_err());
    }
}
