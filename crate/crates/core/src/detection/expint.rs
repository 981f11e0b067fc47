//! Exponential integral for negative arguments.

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_LIMIT: f64 = 6.0;
const TERM_CUTOFF: f64 = 1e-16;

/// `Ei(x) = ∫_{-∞}^{x} e^t / t dt` for `x < 0`.
pub fn exp_int_ei(x: f64) -> Result<f64> {
    if !(x < 0.0) {
        return Err(Error::OutOfDomain(format!("Ei is only provided for x < 0, got {x}")));
    }
    let t = -x;
    if t <= SERIES_LIMIT {
        Ok(-e1_series(t))
    } else {
        Ok(-(-t).exp() * e1_continued_fraction(t))
    }
}

/// `e^x E1(x)` for `x > 0`; stays finite where `e^x` alone would overflow.
pub(crate) fn e1_scaled(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x <= SERIES_LIMIT {
        x.exp() * e1_series(x)
    } else {
        e1_continued_fraction(x)
    }
}

// E1(x) = -γ - ln x - Σ_{k≥1} (-x)^k / (k k!)
fn e1_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut power = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        power *= -x / kf;
        let term = power / kf;
        sum += term;
        if term.abs() < TERM_CUTOFF * sum.abs() {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

// e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- ...))), evaluated with modified Lentz.
fn e1_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let a = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < TERM_CUTOFF {
            break;
        }
    }
    h
}
