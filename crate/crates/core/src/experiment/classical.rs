//! Success probability of the classical strategy that queries `t` distinct random vertices.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalBaseline {
    /// `1 - C(N - M, t) / C(N, t)`.
    pub exact: f64,
    /// `1 - (1 - M/N)^t`.
    pub approx: f64,
}

/// `1 - prod (a - i)/(N - i)` over the shorter of the two equivalent products, exactly, then
/// rounded once to the nearest `f64`.
fn exact_hit_probability(big_n: u64, m: u64, t: u64) -> f64 {
    let (short, other) = if t <= m { (t, m) } else { (m, t) };
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..short {
        num *= big_n - other - i;
        den *= big_n - i;
    }
    Ratio::new_raw(&den - num, den).to_f64().unwrap_or(1.0)
}

pub fn classical_success(big_n: u64, m: u64, t: u64) -> Result<ClassicalBaseline> {
    if m > big_n {
        return Err(Error::InvalidConfiguration(format!("M = {m} exceeds N = {big_n}")));
    }
    if t > big_n {
        return Err(Error::InvalidConfiguration(format!("t = {t} exceeds N = {big_n}")));
    }
    let tau = m as f64 / big_n as f64;
    let approx = -(t as f64 * (-tau).ln_1p()).exp_m1();
    let exact = if m == 0 || t == 0 {
        0.0
    } else if t > big_n - m {
        1.0
    } else {
        exact_hit_probability(big_n, m, t)
    };
    Ok(ClassicalBaseline { exact, approx })
}
