//! Willie's radiometer under bounded noise uncertainty.
//!
//! The true noise power is log-uniform on `[σ̃²/ρ, ρσ̃²]`; Willie picks the threshold
//! that minimizes his detection error probability (DEP) and Alice keeps the DEP at
//! or above `1 - κ`.

mod expint;

pub use expint::exp_int_ei;

use crate::channel::LinkVariances;
use crate::config::{SystemConfig, ZMeanModel};
use expint::e1_scaled;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionParams {
    pub noise_w: f64,
    pub rho: f64,
    pub kappa: f64,
}

/// Largest received signal power at Willie that keeps the transmission covert.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovertBudget {
    pub eta: f64,
}

pub fn optimal_threshold(z: f64, p: f64, params: &DetectionParams) -> f64 {
    let s = params.noise_w;
    (z * p + s / params.rho).min(params.rho * s)
}

/// Minimum DEP for a known composite gain `z`.
pub fn min_dep_given_z(z: f64, p: f64, params: &DetectionParams) -> f64 {
    let zp = z * p;
    if params.rho <= 1.0 {
        return if zp > 0.0 { 0.0 } else { 1.0 };
    }
    let s = params.noise_w;
    let rho = params.rho;
    if zp > s * (rho - 1.0 / rho) {
        return 0.0;
    }
    let xi = 1.0 - (rho * zp / s).ln_1p() / (2.0 * rho.ln());
    xi.clamp(0.0, 1.0)
}

/// DEP averaged over an exponentially distributed `z` with the given mean.
pub fn average_min_dep(p: f64, mean_z: f64, params: &DetectionParams) -> f64 {
    if params.rho <= 1.0 {
        return if p * mean_z > 0.0 { 0.0 } else { 1.0 };
    }
    let snr = mean_z * p / params.noise_w;
    if !(snr > 0.0) {
        return 1.0;
    }
    let rho = params.rho;
    // With a = 1/(ρ γ̄) the closed form is
    //   1 - e^a (E1(a) - E1(ρ² a)) / (2 ln ρ),
    // written with scaled E1 so that e^a never overflows.
    let a = 1.0 / (rho * snr);
    let b = rho * rho * a;
    let diff = e1_scaled(a) - (a - b).exp() * e1_scaled(b);
    (1.0 - diff / (2.0 * rho.ln())).clamp(0.0, 1.0)
}

pub fn covert_budget(params: &DetectionParams) -> CovertBudget {
    let rho = params.rho;
    let s = params.noise_w;
    let eta = (s * (rho - 1.0 / rho)).min((rho.powf(2.0 * params.kappa) - 1.0) * s / rho);
    CovertBudget { eta: eta.max(0.0) }
}

/// Largest power `P <= p_max` whose average DEP stays at or above `1 - κ`.
pub fn max_power_for_covertness(mean_z: f64, params: &DetectionParams, p_max: f64) -> f64 {
    if params.rho <= 1.0 {
        return 0.0;
    }
    let target = 1.0 - params.kappa;
    if average_min_dep(p_max, mean_z, params) >= target {
        return p_max;
    }
    let mut lo: f64 = 1e-18;
    let mut hi: f64 = p_max.min(1e6);
    if average_min_dep(lo, mean_z, params) < target {
        return 0.0;
    }
    // Log-scale bisection; `lo` always satisfies the constraint.
    for _ in 0..120 {
        let mid = (lo * hi).sqrt();
        if average_min_dep(mid, mean_z, params) >= target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    lo
}

/// Mean of Willie's composite channel gain when the IRS phases are unknown to Alice.
pub fn z_mean_irs(config: &SystemConfig, variances: &LinkVariances) -> f64 {
    z_mean(config.n, variances, config.z_mean_model)
}

pub fn z_mean(n: usize, variances: &LinkVariances, model: ZMeanModel) -> f64 {
    if n == 0 {
        return variances.aw;
    }
    let cascade = n as f64 * variances.as_ * variances.sw;
    match model {
        ZMeanModel::Derived => variances.aw + cascade,
        ZMeanModel::MainText => variances.sw + cascade,
    }
}
