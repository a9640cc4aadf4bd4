//! Compensated (Kahan-Babuska-Klein) accumulation for lattice sums.

#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    cs: f64,
    ccs: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        let c = if self.sum.abs() >= x.abs() { (self.sum - t) + x } else { (x - t) + self.sum };
        self.sum = t;
        let t = self.cs + c;
        let cc = if self.cs.abs() >= c.abs() { (self.cs - t) + c } else { (c - t) + self.cs };
        self.cs = t;
        self.ccs += cc;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.cs + self.ccs
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        s.extend(iter);
        s
    }
}
