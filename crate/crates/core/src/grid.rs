use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Side length of the periodic `n x n` lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct GridSpec {
    n: usize,
}

impl GridSpec {
    pub fn new(n: usize) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidGrid(n));
        }
        Ok(Self { n })
    }

    #[inline]
    pub fn side(&self) -> usize {
        self.n
    }

    /// Vertex count `N = n^2`.
    #[inline]
    pub fn vertices(&self) -> usize {
        self.n * self.n
    }

    /// Length of the state vector (two coin states per vertex).
    #[inline]
    pub fn dim(&self) -> usize {
        2 * self.vertices()
    }

    /// Flat index of `(v, x, y)`: coin-major, then row-major with `x` fastest.
    #[inline]
    pub fn index(&self, v: usize, x: usize, y: usize) -> usize {
        v * self.vertices() + y * self.n + x
    }

    pub fn contains(&self, vertex: Vertex) -> bool {
        vertex.x < self.n && vertex.y < self.n
    }

    /// `theta_k = 2 pi k / n`.
    #[inline]
    pub fn theta(&self, k: usize) -> f64 {
        2.0 * std::f64::consts::PI * k as f64 / self.n as f64
    }

    /// `N ln N / pi`, the leading-order size of the lattice Green sum.
    pub fn n_log_n_over_pi(&self) -> f64 {
        let big_n = self.vertices() as f64;
        big_n * big_n.ln() / std::f64::consts::PI
    }

    /// Hitting time `floor(sqrt(pi N ln N) / 4)`.
    pub fn t_opt(&self) -> usize {
        let big_n = self.vertices() as f64;
        ((std::f64::consts::PI * big_n * big_n.ln()).sqrt() / 4.0).floor() as usize
    }

    /// Offset `b - a` reduced modulo `n`.
    pub fn offset(&self, a: Vertex, b: Vertex) -> (usize, usize) {
        let n = self.n;
        ((b.x + n - a.x % n) % n, (b.y + n - a.y % n) % n)
    }
}

impl TryFrom<usize> for GridSpec {
    type Error = Error;
    fn try_from(n: usize) -> Result<Self> {
        GridSpec::new(n)
    }
}

impl From<GridSpec> for usize {
    fn from(g: GridSpec) -> usize {
        g.n
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub x: usize,
    pub y: usize,
}

impl Vertex {
    pub const fn new(x: usize, y: usize) -> Self {
        Self { x, y }
    }

    pub fn is_even(&self) -> bool {
        (self.x + self.y) % 2 == 0
    }
}

impl From<(usize, usize)> for Vertex {
    fn from((x, y): (usize, usize)) -> Self {
        Self { x, y }
    }
}

impl std::fmt::Display for Vertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{}", self.x, self.y)
    }
}

impl std::str::FromStr for Vertex {
    type Err = Error;

    /// Parses the `x,y` syntax used on the command line.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfiguration(format!("cannot parse vertex '{s}', expected x,y"));
        let (x, y) = s.split_once(',').ok_or_else(bad)?;
        let x = x.trim().parse().map_err(|_| bad())?;
        let y = y.trim().parse().map_err(|_| bad())?;
        Ok(Vertex { x, y })
    }
}

/// Set of marked vertices, kept sorted lexicographically by `(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MarkedConfig {
    vertices: Vec<Vertex>,
}

impl MarkedConfig {
    /// Builds a non-empty configuration, rejecting duplicates and out-of-range vertices.
    pub fn new(grid: GridSpec, vertices: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut vertices: Vec<Vertex> = vertices.into_iter().collect();
        if vertices.is_empty() {
            return Err(Error::InvalidConfiguration("at least one marked vertex is required".into()));
        }
        for v in &vertices {
            if !grid.contains(*v) {
                return Err(Error::VertexOutOfRange { x: v.x, y: v.y, n: grid.side() });
            }
        }
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex { x: w[0].x, y: w[0].y });
        }
        Ok(Self { vertices })
    }

    /// The unperturbed walk (oracle acts as the identity).
    pub fn empty() -> Self {
        Self { vertices: Vec::new() }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}
