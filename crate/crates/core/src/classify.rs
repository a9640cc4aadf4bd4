//! Sufficient-condition classifier for two marked vertices.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridSpec, Vertex};
use crate::par;
use crate::spectral::CaseTag;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    OptimalCaseI,
    OptimalCaseII,
    /// The sufficient condition fails; optimality is neither certified nor ruled out.
    Suspect,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairClass {
    /// Relative offset, reduced to the lexicographically smaller of `m1 - m0` and `m0 - m1`.
    pub offset: (usize, usize),
    pub case_tag: CaseTag,
    pub condition_holds: bool,
    pub verdict: Verdict,
    pub note: Option<String>,
}

/// `min(k, n - k)`: distance to the origin along one torus axis.
#[inline]
pub fn axis_distance(n: usize, k: usize) -> usize {
    let k = k % n;
    k.min(n - k)
}

/// `min(x, n-x) * min(y, n-y) >= n`.
pub fn condition_holds(grid: GridSpec, x: usize, y: usize) -> bool {
    let n = grid.side();
    axis_distance(n, x) * axis_distance(n, y) >= n
}

fn canonical_offset(grid: GridSpec, x: usize, y: usize) -> (usize, usize) {
    let n = grid.side();
    let neg = ((n - x % n) % n, (n - y % n) % n);
    (x % n, y % n).min(neg)
}

pub fn classify_offset(grid: GridSpec, x: usize, y: usize) -> Result<PairClass> {
    let n = grid.side();
    if x % n == 0 && y % n == 0 {
        return Err(Error::InvalidConfiguration("the two marked vertices coincide".into()));
    }
    let offset = canonical_offset(grid, x, y);
    let case_tag = CaseTag::of_offset(offset.0, offset.1);
    if case_tag == CaseTag::CaseI {
        return Ok(PairClass { offset, case_tag, condition_holds: true, verdict: Verdict::OptimalCaseI, note: None });
    }
    let holds = condition_holds(grid, offset.0, offset.1);
    let note = (!holds && (offset.0 == 0 || offset.1 == 0)).then(|| {
        "offset lies on a lattice axis: the coupling sum vanishes by symmetry, but the sufficient condition fails"
            .to_string()
    });
    Ok(PairClass {
        offset,
        case_tag,
        condition_holds: holds,
        verdict: if holds { Verdict::OptimalCaseII } else { Verdict::Suspect },
        note,
    })
}

pub fn classify_pair(grid: GridSpec, m0: Vertex, m1: Vertex) -> Result<PairClass> {
    for v in [m0, m1] {
        if !grid.contains(v) {
            return Err(Error::VertexOutOfRange { x: v.x, y: v.y, n: grid.side() });
        }
    }
    let (x, y) = grid.offset(m0, m1);
    classify_offset(grid, x, y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuspectOffset {
    pub x: usize,
    pub y: usize,
    pub min_x: usize,
    pub min_y: usize,
    pub product: usize,
}

impl SuspectOffset {
    fn new(n: usize, x: usize, y: usize) -> Self {
        let (min_x, min_y) = (axis_distance(n, x), axis_distance(n, y));
        Self { x, y, min_x, min_y, product: min_x * min_y }
    }
}

/// Suspect offsets in row `x`, in increasing `y`. Only `O(n / min(x, n-x))` candidates are visited.
fn suspect_row(n: usize, x: usize) -> Vec<SuspectOffset> {
    let mx = axis_distance(n, x);
    let ys: Vec<usize> = if mx == 0 {
        (0..n).collect()
    } else {
        let reach = (n - 1) / mx;
        if 2 * reach + 1 >= n {
            (0..n).collect()
        } else {
            (0..=reach).chain(n - reach..n).collect()
        }
    };
    ys.into_iter()
        .filter(|&y| (x + y) % 2 == 0 && (x, y) != (0, 0))
        .map(|y| SuspectOffset::new(n, x, y))
        .collect()
}

/// All even-parity offsets `(x, y) != (0, 0)` failing the sufficient condition, sorted by `(x, y)`.
pub fn enumerate_suspects(grid: GridSpec) -> Vec<SuspectOffset> {
    let n = grid.side();
    par::map_indexed(n, |x| suspect_row(n, x)).into_iter().flatten().collect()
}

/// Reference enumeration visiting every offset.
pub fn enumerate_suspects_exhaustive(grid: GridSpec) -> Vec<SuspectOffset> {
    let n = grid.side();
    (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .filter(|&(x, y)| (x + y) % 2 == 0 && (x, y) != (0, 0) && !condition_holds(grid, x, y))
        .map(|(x, y)| SuspectOffset::new(n, x, y))
        .collect()
}

/// Fraction of offsets that are suspect: `count / N`.
pub fn suspect_fraction(grid: GridSpec) -> f64 {
    enumerate_suspects(grid).len() as f64 / grid.vertices() as f64
}

/// `count / (n ln n)`.
pub fn suspect_constant(grid: GridSpec, count: usize) -> f64 {
    let n = grid.side() as f64;
    count as f64 / (n * n.ln())
}

pub fn write_suspects_csv<W: Write>(grid: GridSpec, suspects: &[SuspectOffset], mut out: W) -> Result<()> {
    writeln!(out, "n,x,y,min_x,min_y,product")?;
    for s in suspects {
        writeln!(out, "{},{},{},{},{},{}", grid.side(), s.x, s.y, s.min_x, s.min_y, s.product)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize) -> GridSpec {
        GridSpec::new(n).unwrap()
    }

    fn v(x: usize, y: usize) -> Vertex {
        Vertex::new(x, y)
    }

    #[test]
    fn documented_examples() {
        let grid = g(32);
        let c = classify_pair(grid, v(0, 0), v(3, 4)).unwrap();
        assert_eq!((c.case_tag, c.verdict, c.condition_holds), (CaseTag::CaseI, Verdict::OptimalCaseI, true));
        let c = classify_pair(grid, v(0, 0), v(8, 8)).unwrap();
        assert_eq!((c.case_tag, c.verdict), (CaseTag::CaseII, Verdict::OptimalCaseII));
        assert_eq!(classify_pair(grid, v(0, 0), v(1, 1)).unwrap().verdict, Verdict::Suspect);
    }

    #[test]
    fn axis_offsets_carry_note() {
        let c = classify_pair(g(32), v(0, 0), v(0, 2)).unwrap();
        assert_eq!(c.verdict, Verdict::Suspect);
        assert!(c.note.is_some());
        assert!(classify_pair(g(32), v(0, 0), v(1, 1)).unwrap().note.is_none());
    }

    #[test]
    fn swap_and_translation_invariance() {
        let grid = g(16);
        for (a, b) in [(v(0, 0), v(1, 1)), (v(3, 5), v(9, 1)), (v(15, 15), v(0, 2))] {
            let c = classify_pair(grid, a, b).unwrap();
            assert_eq!(c, classify_pair(grid, b, a).unwrap());
            let shift = |p: Vertex| v((p.x + 7) % 16, (p.y + 11) % 16);
            assert_eq!(c, classify_pair(grid, shift(a), shift(b)).unwrap());
        }
    }

    #[test]
    fn coincident_vertices_rejected() {
        assert!(classify_pair(g(8), v(2, 2), v(2, 2)).is_err());
        assert!(classify_pair(g(8), v(2, 2), v(8, 2)).is_err());
    }

    #[test]
    fn fast_enumeration_matches_exhaustive() {
        for n in [4, 6, 8, 16, 18] {
            assert_eq!(enumerate_suspects(g(n)), enumerate_suspects_exhaustive(g(n)), "n={n}");
        }
    }

    #[test]
    fn suspects_fail_condition_and_are_even() {
        let grid = g(32);
        for s in enumerate_suspects(grid) {
            assert!(s.product < 32);
            assert_eq!((s.x + s.y) % 2, 0);
        }
    }

    #[test]
    fn csv_header() {
        let grid = g(4);
        let mut buf = Vec::new();
        write_suspects_csv(grid, &enumerate_suspects(grid), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("n,x,y,min_x,min_y,product\n4,0,2,0,2,0\n"));
    }
}
