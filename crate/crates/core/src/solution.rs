//! Decision variables and the per-solver outcome record.

use num_complex::Complex64;

use crate::error::{invalid_arg, Result};
use crate::linalg::{unit_phase, CVector};

/// Unit-modulus IRS phase vector `v`, with `v^H = [e^{jθ_1}, …, e^{jθ_N}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector {
    v: CVector,
}

impl PhaseVector {
    pub fn new(v: CVector) -> Result<Self> {
        if let Some(i) = v.iter().position(|z| (z.norm() - 1.0).abs() > 1e-10) {
            return Err(invalid_arg(format!("entry {i} of the phase vector is not unit modulus")));
        }
        Ok(Self { v })
    }

    /// Builds `v` from the reflection angles `θ_i`.
    pub fn from_angles(theta: &[f64]) -> Self {
        Self {
            v: CVector::from_iterator(theta.len(), theta.iter().map(|t| unit_phase(-t))),
        }
    }

    pub fn ones(n: usize) -> Self {
        Self {
            v: CVector::from_element(n, Complex64::new(1.0, 0.0)),
        }
    }

    pub fn angles(&self) -> Vec<f64> {
        self.v.iter().map(|z| -z.arg()).collect()
    }

    pub fn as_vector(&self) -> &CVector {
        &self.v
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    /// Re-normalizes entries that drifted off the unit circle.
    pub(crate) fn from_raw(v: CVector) -> Self {
        Self {
            v: v.map(crate::linalg::phase_of),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Beamformer {
    pub w: CVector,
}

impl Beamformer {
    pub fn power(&self) -> f64 {
        self.w.norm_squared()
    }

    pub fn zeros(m: usize) -> Self {
        Self { w: CVector::zeros(m) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// Rate change fell below the tolerance.
    Converged,
    /// Hit the iteration cap.
    MaxIterations,
    /// Closed-form or single-pass solver.
    Direct,
    /// The covert budget could not be met at any power; rate is zero.
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    /// `log2(1 + SNR)` in bits/s/Hz.
    pub rate: f64,
    pub power: f64,
    pub phases: PhaseVector,
    pub beamformer: Beamformer,
    /// Received signal power at Willie for the reported channels.
    pub willie_power: f64,
    pub rate_trajectory: Vec<f64>,
    pub iterations: usize,
    pub status: SolveStatus,
    /// Optimized surrogate rate, when the solver maximizes a conservative bound.
    pub bound_rate: Option<f64>,
}

impl SolveReport {
    pub fn is_feasible(&self) -> bool {
        self.status != SolveStatus::BudgetExhausted
    }
}

pub(crate) fn rate_from_snr(snr: f64) -> f64 {
    (snr.max(0.0)).ln_1p() / std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles_round_trip() {
        let theta = [0.1, -1.2, 3.0];
        let pv = PhaseVector::from_angles(&theta);
        for (a, b) in pv.angles().iter().zip(theta) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_non_unit_entries() {
        let v = CVector::from_element(2, Complex64::new(0.5, 0.0));
        assert!(PhaseVector::new(v).is_err());
    }

    #[test]
    fn rate_of_unit_snr_is_one_bit() {
        assert!((rate_from_snr(1.0) - 1.0).abs() < 1e-15);
        assert_eq!(rate_from_snr(0.0), 0.0);
    }
}
