//! Walker-state snapshots in JSON or a little-endian binary layout.
//!
//! Binary layout: the 4-byte magic `QWS\0`, `layout_version: u32`, `n: u64`, then `2N` pairs of
//! `f64` `(re, im)` in state order.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::walk::WalkerState;

/// Coin-major, then row-major with `x` fastest.
pub const LAYOUT_VERSION: u32 = 1;
const MAGIC: [u8; 4] = *b"QWS\0";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub n: usize,
    pub layout_version: u32,
    pub amplitudes: Vec<(f64, f64)>,
}

impl Snapshot {
    pub fn of(state: &WalkerState) -> Self {
        Self {
            n: state.grid().side(),
            layout_version: LAYOUT_VERSION,
            amplitudes: state.amplitudes().iter().map(|a| (a.re, a.im)).collect(),
        }
    }

    pub fn into_state(self) -> Result<WalkerState> {
        if self.layout_version != LAYOUT_VERSION {
            return Err(Error::InvalidConfiguration(format!(
                "snapshot layout version {} is not supported (expected {LAYOUT_VERSION})",
                self.layout_version
            )));
        }
        let grid = GridSpec::new(self.n)?;
        let amps = self.amplitudes.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
        WalkerState::from_amplitudes(grid, amps)
    }
}

pub fn write_json<W: Write>(state: &WalkerState, out: W) -> Result<()> {
    serde_json::to_writer(out, &Snapshot::of(state)).map_err(|e| Error::Io(e.to_string()))
}

pub fn read_json<R: Read>(input: R) -> Result<WalkerState> {
    let snap: Snapshot = serde_json::from_reader(input).map_err(|e| Error::Config {
        location: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    snap.into_state()
}

pub fn write_binary<W: Write>(state: &WalkerState, mut out: W) -> Result<()> {
    out.write_all(&MAGIC)?;
    out.write_all(&LAYOUT_VERSION.to_le_bytes())?;
    out.write_all(&(state.grid().side() as u64).to_le_bytes())?;
    for a in state.amplitudes() {
        out.write_all(&a.re.to_le_bytes())?;
        out.write_all(&a.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_binary<R: Read>(mut input: R) -> Result<WalkerState> {
    let mut head = [0u8; 16];
    input.read_exact(&mut head)?;
    if head[..4] != MAGIC {
        return Err(Error::InvalidConfiguration("not a walker snapshot".into()));
    }
    let version = u32::from_le_bytes(head[4..8].try_into().unwrap());
    let n = u64::from_le_bytes(head[8..16].try_into().unwrap()) as usize;
    let grid = GridSpec::new(n)?;
    let mut amplitudes = Vec::with_capacity(grid.dim());
    let mut buf = [0u8; 16];
    for _ in 0..grid.dim() {
        input.read_exact(&mut buf)?;
        let re = f64::from_le_bytes(buf[..8].try_into().unwrap());
        let im = f64::from_le_bytes(buf[8..].try_into().unwrap());
        amplitudes.push((re, im));
    }
    Snapshot { n, layout_version: version, amplitudes }.into_state()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::CoinPair;
    use crate::grid::{MarkedConfig, Vertex};

    fn evolved() -> WalkerState {
        let g = GridSpec::new(8).unwrap();
        let m = MarkedConfig::new(g, [Vertex::new(1, 2)]).unwrap();
        let mut s = WalkerState::uniform(g);
        for _ in 0..5 {
            s.apply_search_step(&m, &CoinPair::standard());
        }
        s
    }

    #[test]
    fn json_round_trip_is_exact() {
        let s = evolved();
        let mut buf = Vec::new();
        write_json(&s, &mut buf).unwrap();
        assert_eq!(read_json(buf.as_slice()).unwrap(), s);
    }

    #[test]
    fn binary_round_trip_is_exact() {
        let s = evolved();
        let mut buf = Vec::new();
        write_binary(&s, &mut buf).unwrap();
        assert_eq!(buf.len(), 16 + 16 * 128);
        assert_eq!(read_binary(buf.as_slice()).unwrap(), s);
    }

    #[test]
    fn rejects_foreign_layouts() {
        let s = evolved();
        let mut snap = Snapshot::of(&s);
        snap.layout_version = 2;
        assert!(snap.into_state().is_err());
        assert!(read_binary(&b"nope0000000000000000"[..]).is_err());
    }
}
