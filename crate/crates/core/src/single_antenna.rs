//! Single-antenna transmitter: partial-CSI alignment, the direct-link baseline, and
//! alternating power / phase optimization with instantaneous CSI.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channel::{received_power, ChannelRealization};
use crate::config::SystemConfig;
use crate::detection::{covert_budget, max_power_for_covertness, z_mean_irs};
use crate::error::{invalid_config, Result};
use crate::linalg::{lambda_min, phase_of, CVector};
use crate::polish::{coordinate_ascent, Cascade};
use crate::sdp::{build_lifted_t, gaussian_randomize, solve_sdp, SdpProblem};
use crate::solution::{rate_from_snr, Beamformer, PhaseVector, SolveReport, SolveStatus};

fn require_single(ch: &ChannelRealization) -> Result<()> {
    ch.check_shapes()?;
    if ch.antennas() != 1 {
        return Err(invalid_config(format!(
            "single-antenna solver called with M = {}",
            ch.antennas()
        )));
    }
    Ok(())
}

/// Phases that add every reflected path in phase with the direct path through `w`.
pub(crate) fn bob_aligned_phases(ch: &ChannelRealization, w: &CVector) -> CVector {
    let alpha = ch.h_ab.dotc(w);
    let target = phase_of(alpha);
    let hw = &ch.h_as * w;
    CVector::from_fn(ch.elements(), |i, _| {
        let term = ch.g_sb[i].conj() * hw[i];
        // conj(v_i) * term must point along `target`.
        (target * phase_of(term).conj()).conj()
    })
}

/// Report for a fixed phase vector and beamformer on `ch`.
pub(crate) fn report_for(
    ch: &ChannelRealization,
    config: &SystemConfig,
    v: &CVector,
    w: &CVector,
    trajectory: Vec<f64>,
    iterations: usize,
    status: SolveStatus,
) -> Result<SolveReport> {
    let bob = ch.bob(v)?;
    let willie = ch.willie(v)?;
    let rate = rate_from_snr(received_power(&bob, w) / config.noise_b);
    Ok(SolveReport {
        rate,
        power: w.norm_squared(),
        phases: PhaseVector::from_raw(v.clone()),
        beamformer: Beamformer { w: w.clone() },
        willie_power: received_power(&willie, w),
        rate_trajectory: if trajectory.is_empty() { vec![rate] } else { trajectory },
        iterations,
        status,
        bound_rate: None,
    })
}

fn scalar_beam(power: f64) -> CVector {
    CVector::from_element(1, Complex64::new(power.max(0.0).sqrt(), 0.0))
}

/// Willie's statistics only: covert power from the average DEP, phases aligned for Bob.
pub fn partial_csi_solve(ch: &ChannelRealization, config: &SystemConfig) -> Result<SolveReport> {
    require_single(ch)?;
    let mean_z = z_mean_irs(config, &ch.variances);
    let power = max_power_for_covertness(mean_z, &config.detection_params(), config.p_max);
    let v = bob_aligned_phases(ch, &scalar_beam(1.0));
    report_for(ch, config, &v, &scalar_beam(power), vec![], 0, SolveStatus::Direct)
}

/// No IRS: covert power from the average DEP of the direct Willie link.
pub fn direct_solve(ch: &ChannelRealization, config: &SystemConfig) -> Result<SolveReport> {
    require_single(ch)?;
    let power = max_power_for_covertness(ch.variances.aw, &config.detection_params(), config.p_max);
    let rate = rate_from_snr(power * ch.h_ab[0].norm_sqr() / config.noise_b);
    Ok(SolveReport {
        rate,
        power,
        phases: PhaseVector::ones(0),
        beamformer: Beamformer { w: scalar_beam(power) },
        willie_power: power * ch.h_aw[0].norm_sqr(),
        rate_trajectory: vec![rate],
        iterations: 0,
        status: SolveStatus::Direct,
        bound_rate: None,
    })
}

/// No IRS, Willie's channel known: power capped by the covert budget.
pub fn direct_instantaneous_solve(ch: &ChannelRealization, config: &SystemConfig) -> Result<SolveReport> {
    require_single(ch)?;
    let eta = covert_budget(&config.detection_params()).eta;
    let gw = ch.h_aw[0].norm_sqr();
    let power = if gw > 0.0 { config.p_max.min(eta / gw) } else { config.p_max };
    let rate = rate_from_snr(power * ch.h_ab[0].norm_sqr() / config.noise_b);
    Ok(SolveReport {
        rate,
        power,
        phases: PhaseVector::ones(0),
        beamformer: Beamformer { w: scalar_beam(power) },
        willie_power: power * gw,
        rate_trajectory: vec![rate],
        iterations: 0,
        status: SolveStatus::Direct,
        bound_rate: None,
    })
}

/// Largest power meeting `P |h_aw + v^H diag(g_sw^H) h_as|² <= eta`.
pub fn instantaneous_power(v: &PhaseVector, ch: &ChannelRealization, eta: f64, p_max: f64) -> Result<f64> {
    let gw = ch.willie(v.as_vector())?[0].norm_sqr();
    Ok(power_for_gain(gw, eta, p_max))
}

fn power_for_gain(gw: f64, eta: f64, p_max: f64) -> f64 {
    if gw > 0.0 {
        p_max.min(eta / gw)
    } else {
        p_max
    }
}

fn joint_snr(b: &[Complex64], w: &[Complex64], eta: f64, p_max: f64) -> f64 {
    power_for_gain(w[0].norm_sqr(), eta, p_max) * b[0].norm_sqr()
}

/// Alternating optimization of transmit power and IRS phases with full CSI.
pub fn instantaneous_solve(ch: &ChannelRealization, config: &SystemConfig) -> Result<SolveReport> {
    require_single(ch)?;
    let eta = covert_budget(&config.detection_params()).eta;
    let n = ch.elements();
    let noise = config.noise_b;
    let snr_of = |v: &CVector| -> Result<f64> {
        let b = ch.bob(v)?;
        let w = ch.willie(v)?;
        Ok(joint_snr(b.as_slice(), w.as_slice(), eta, config.p_max) / noise)
    };

    let mut v = bob_aligned_phases(ch, &scalar_beam(1.0));
    let mut snr = snr_of(&v)?;
    let mut trajectory = vec![rate_from_snr(snr)];
    let mut status = SolveStatus::MaxIterations;
    let mut iterations = 0;

    if n > 0 && eta > 0.0 {
        let h_as = ch.h_as.column(0).into_owned();
        let t_b = build_lifted_t(ch.h_ab[0], &ch.g_sb, &h_as)?;
        let t_w = build_lifted_t(ch.h_aw[0], &ch.g_sw, &h_as)?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        for iter in 1..=config.max_iters {
            iterations = iter;
            // (a) power for the current phases.
            let power = instantaneous_power(&PhaseVector::from_raw(v.clone()), ch, eta, config.p_max)?;
            // (b) phases for that power.
            let bound = eta / power - t_w.offset;
            let mut candidate = v.clone();
            let sol = solve_sdp(&SdpProblem {
                objective: t_b.matrix.clone(),
                ineq_constraints: vec![(t_w.matrix.clone(), bound)],
                unit_diagonal: true,
            })?;
            if sol.is_usable() {
                let pick = gaussian_randomize(
                    &sol.x,
                    config.l,
                    |cand| (power * t_w.gain(cand) <= eta * (1.0 + 1e-9), t_b.gain(cand)),
                    &mut rng,
                );
                // An infeasible pick keeps its phases; the next power step restores feasibility.
                candidate = pick.v;
            }
            let mut cascade = Cascade::new(ch, &candidate);
            coordinate_ascent(ch, &mut cascade, |b, w| joint_snr(b, w, eta, config.p_max));
            let polished = cascade.v.map(phase_of);
            let new_snr = snr_of(&polished)?;
            if new_snr > snr {
                v = polished;
                snr = new_snr;
            }
            let rate = rate_from_snr(snr);
            let gain = rate - trajectory.last().copied().unwrap_or(0.0);
            trajectory.push(rate);
            if gain < config.gamma_tol {
                status = SolveStatus::Converged;
                break;
            }
        }
    } else {
        status = SolveStatus::Direct;
    }

    let power = instantaneous_power(&PhaseVector::from_raw(v.clone()), ch, eta, config.p_max)?;
    report_for(ch, config, &v, &scalar_beam(power), trajectory, iterations, status)
}

/// Analytical upper bound on Bob's SNR with the IRS, and the direct-link SNR.
///
/// The IRS bound is `+∞` when its denominator is not positive.
pub fn snr_bounds(ch: &ChannelRealization, eta: f64, config: &SystemConfig) -> Result<(f64, f64)> {
    require_single(ch)?;
    let n = ch.elements();
    let h_as = ch.h_as.column(0).into_owned();
    let t_w = build_lifted_t(ch.h_aw[0], &ch.g_sw, &h_as)?;
    let lmin = lambda_min(&t_w.matrix);
    let mut amp = ch.h_ab[0].norm();
    for i in 0..n {
        amp += ch.h_as[(i, 0)].norm() * ch.g_sb[i].norm();
    }
    let gw = ch.h_aw[0].norm_sqr();
    let denom = lmin * (n as f64 + 1.0) + gw;
    let upper = if denom > 0.0 {
        eta * amp * amp / (config.noise_b * denom)
    } else {
        f64::INFINITY
    };
    let direct = eta * ch.h_ab[0].norm_sqr() / (config.noise_b * gw);
    Ok((upper, direct))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{sample_channels, LinkVariances};
    use crate::config::Geometry;
    use crate::detection::average_min_dep;
    use crate::linalg::{complex_gaussian_matrix, complex_gaussian_vector, CMatrix};

    fn unit_channels(rng: &mut ChaCha8Rng, n: usize) -> ChannelRealization {
        ChannelRealization {
            h_ab: complex_gaussian_vector(rng, 1, 1.0),
            h_aw: complex_gaussian_vector(rng, 1, 1.0),
            h_as: complex_gaussian_matrix(rng, n, 1, 1.0),
            g_sb: complex_gaussian_vector(rng, n, 1.0),
            g_sw: complex_gaussian_vector(rng, n, 1.0),
            variances: LinkVariances {
                ab: 1.0,
                aw: 1.0,
                as_: 1.0,
                sb: 1.0,
                sw: 1.0,
            },
        }
    }

    fn unit_config(n: usize) -> SystemConfig {
        SystemConfig {
            m: 1,
            n,
            p_max: 1.0,
            noise_w: 1.0,
            noise_b: 1.0,
            rho: 2.0,
            kappa: 0.1,
            l: 200,
            ..SystemConfig::default()
        }
    }

    #[test]
    fn aligned_phases_meet_triangle_equality() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let ch = unit_channels(&mut rng, 7);
        let v = bob_aligned_phases(&ch, &scalar_beam(1.0));
        let got = ch.bob(&v).unwrap()[0].norm_sqr();
        let mut amp = ch.h_ab[0].norm();
        for i in 0..7 {
            amp += ch.h_as[(i, 0)].norm() * ch.g_sb[i].norm();
        }
        assert!((got / (amp * amp) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn real_positive_channels_need_no_shift() {
        let one = |n| CVector::from_element(n, Complex64::new(0.7, 0.0));
        let ch = ChannelRealization {
            h_ab: one(1),
            h_aw: one(1),
            h_as: CMatrix::from_element(3, 1, Complex64::new(0.2, 0.0)),
            g_sb: one(3),
            g_sw: one(3),
            variances: unit_channels(&mut ChaCha8Rng::seed_from_u64(0), 0).variances,
        };
        let v = bob_aligned_phases(&ch, &scalar_beam(1.0));
        for th in PhaseVector::from_raw(v).angles() {
            assert!(th.abs() < 1e-14);
        }
    }

    #[test]
    fn partial_without_irs_equals_direct() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let ch = unit_channels(&mut rng, 0);
        let cfg = unit_config(0);
        let a = partial_csi_solve(&ch, &cfg).unwrap();
        let b = direct_solve(&ch, &cfg).unwrap();
        assert!((a.rate - b.rate).abs() < 1e-14);
        assert!((a.power - b.power).abs() < 1e-14);
    }

    #[test]
    fn partial_power_is_covert_and_below_direct() {
        let geo = Geometry::default();
        let cfg = SystemConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let ch = sample_channels(&cfg, &geo, &mut rng).unwrap();
        let irs = partial_csi_solve(&ch, &cfg).unwrap();
        let dir = direct_solve(&ch, &cfg).unwrap();
        assert!(dir.power >= irs.power);
        let xi = average_min_dep(irs.power, z_mean_irs(&cfg, &ch.variances), &cfg.detection_params());
        assert!(xi >= 1.0 - cfg.kappa - 1e-6);
    }

    #[test]
    fn instantaneous_power_inverse_square() {
        let mut rng = ChaCha8Rng::seed_from_u64(54);
        let ch = unit_channels(&mut rng, 3);
        let v = PhaseVector::ones(3);
        let gw = ch.willie(v.as_vector()).unwrap()[0].norm_sqr();
        let p = instantaneous_power(&v, &ch, 1e-3 * gw, 1.0).unwrap();
        assert!((p - 1e-3).abs() < 1e-15);
        let mut doubled = ch.clone();
        doubled.h_aw *= Complex64::new(2.0, 0.0);
        doubled.g_sw *= Complex64::new(2.0, 0.0);
        let p2 = instantaneous_power(&v, &doubled, 1e-3 * gw, 1.0).unwrap();
        assert!((p2 / p - 0.25).abs() < 1e-12);
        assert_eq!(instantaneous_power(&v, &ch, gw, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn instantaneous_without_irs_is_direct_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let ch = unit_channels(&mut rng, 0);
        let cfg = unit_config(0);
        let eta = covert_budget(&cfg.detection_params()).eta;
        let rep = instantaneous_solve(&ch, &cfg).unwrap();
        let p = (eta / ch.h_aw[0].norm_sqr()).min(cfg.p_max);
        let want = (1.0 + p * ch.h_ab[0].norm_sqr()).log2();
        assert!((rep.rate - want).abs() < 1e-12);
    }

    #[test]
    fn instantaneous_is_monotone_feasible_and_below_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(56);
        let cfg = unit_config(4);
        let eta = covert_budget(&cfg.detection_params()).eta;
        for _ in 0..5 {
            let ch = unit_channels(&mut rng, 4);
            let rep = instantaneous_solve(&ch, &cfg).unwrap();
            for w in rep.rate_trajectory.windows(2) {
                assert!(w[1] >= w[0] - 1e-9);
            }
            assert!(rep.willie_power <= eta * (1.0 + 1e-6));
            assert!(rep.power <= cfg.p_max * (1.0 + 1e-12));
            let (upper, _) = snr_bounds(&ch, eta, &cfg).unwrap();
            assert!(rep.rate <= (1.0 + upper).log2() + 1e-6);
        }
    }

    #[test]
    fn tiny_instance_near_grid_optimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(57);
        let cfg = unit_config(2);
        let eta = covert_budget(&cfg.detection_params()).eta;
        for _ in 0..3 {
            let ch = unit_channels(&mut rng, 2);
            let rep = instantaneous_solve(&ch, &cfg).unwrap();
            let mut best: f64 = 0.0;
            for a in 0..64 {
                for b in 0..64 {
                    let th = [a as f64 * std::f64::consts::TAU / 64.0, b as f64 * std::f64::consts::TAU / 64.0];
                    let v = PhaseVector::from_angles(&th);
                    let gb = ch.bob(v.as_vector()).unwrap()[0].norm_sqr();
                    let p = instantaneous_power(&v, &ch, eta, cfg.p_max).unwrap();
                    best = best.max((1.0 + p * gb).log2());
                }
            }
            assert!(rep.rate >= 0.99 * best, "{} vs {}", rep.rate, best);
        }
    }

    #[test]
    fn bounds_collapse_without_irs() {
        let mut rng = ChaCha8Rng::seed_from_u64(58);
        let ch = unit_channels(&mut rng, 0);
        let (u, d) = snr_bounds(&ch, 0.3, &unit_config(0)).unwrap();
        assert!((u - d).abs() < 1e-12 * d);
    }

    #[test]
    fn lambda_min_is_lower_envelope_of_random_probes() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        let ch = unit_channels(&mut rng, 3);
        let t = build_lifted_t(ch.h_aw[0], &ch.g_sw, &ch.h_as.column(0).into_owned()).unwrap();
        let lmin = lambda_min(&t.matrix);
        let mut lowest = f64::INFINITY;
        for _ in 0..100_000 {
            let x = complex_gaussian_vector(&mut rng, 4, 1.0);
            let x = &x / Complex64::new(x.norm(), 0.0);
            let q = (x.adjoint() * &t.matrix * &x)[0].re;
            assert!(q >= lmin - 1e-12);
            lowest = lowest.min(q);
        }
        assert!(lowest - lmin < 0.05 * lmin.abs().max(1e-3));
    }

    #[test]
    fn multi_antenna_input_is_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(60);
        let mut ch = unit_channels(&mut rng, 2);
        ch.h_ab = complex_gaussian_vector(&mut rng, 2, 1.0);
        ch.h_aw = complex_gaussian_vector(&mut rng, 2, 1.0);
        ch.h_as = complex_gaussian_matrix(&mut rng, 2, 2, 1.0);
        assert!(partial_csi_solve(&ch, &unit_config(2)).is_err());
    }
}
