pub mod classify;
pub mod coin;
pub mod error;
pub mod experiment;
pub mod grid;
pub mod par;
pub mod snapshot;
pub mod spectral;
pub mod sum;
pub mod walk;

pub use coin::CoinPair;
pub use error::{Error, Result};
pub use grid::{GridSpec, MarkedConfig, Vertex};
pub use walk::{probability_trace, scan_hitting_time, Axis, WalkerState};
