//! Multi-antenna transmitter: MRT with partial CSI, the alternating optimal
//! algorithm, and the zero-forcing and min-Willie suboptimal schemes.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::beam::{constrained_beamformer, constrained_gain};
use crate::channel::{ChannelRealization, EffectiveChannel};
use crate::config::SystemConfig;
use crate::detection::{covert_budget, max_power_for_covertness, z_mean_irs};
use crate::error::{invalid_arg, invalid_config, Result};
use crate::linalg::{phase_of, unit_phase, CMatrix, CVector};
use crate::polish::{coordinate_ascent, Cascade};
use crate::sdp::{build_lifted_r, gaussian_randomize, solve_sdp, SdpProblem};
use crate::single_antenna::{bob_aligned_phases, report_for};
use crate::solution::{rate_from_snr, Beamformer, PhaseVector, SolveReport, SolveStatus};

/// `sqrt(power) · b^H / ‖b‖`.
pub fn mrt_beamformer(effective_bob: &EffectiveChannel, power: f64) -> Result<Beamformer> {
    let norm = effective_bob.norm();
    if !(norm > 0.0) {
        return Err(invalid_arg("MRT needs a non-zero channel"));
    }
    let scale = Complex64::new(power.max(0.0).sqrt() / norm, 0.0);
    Ok(Beamformer {
        w: effective_bob.adjoint() * scale,
    })
}

/// Best beamformer for fixed phases: maximizes Bob's gain under `‖w‖² <= P_max`
/// and Willie's received power `<= eta`.
pub fn optimal_beamformer_given_v(
    v: &PhaseVector,
    ch: &ChannelRealization,
    eta: f64,
    p_max: f64,
) -> Result<Beamformer> {
    let b = ch.bob(v.as_vector())?;
    let a = ch.willie(v.as_vector())?;
    Ok(Beamformer {
        w: safe_beamformer(b.as_slice(), a.as_slice(), p_max, eta),
    })
}

/// Closed-form beamformer with a final guard against rounding past either cap.
fn safe_beamformer(b: &[Complex64], a: &[Complex64], p_max: f64, eta: f64) -> CVector {
    let mut w = constrained_beamformer(b, a, p_max, eta);
    let power = w.norm_squared();
    if power > p_max {
        w *= Complex64::new((p_max / power).sqrt(), 0.0);
    }
    let leak: f64 = a.iter().zip(w.iter()).map(|(x, y)| x * y).sum::<Complex64>().norm_sqr();
    if leak > eta {
        w *= Complex64::new((eta / leak).sqrt(), 0.0);
    }
    w
}

fn check_multi(ch: &ChannelRealization) -> Result<()> {
    ch.check_shapes()
}

/// Initial phases: aligned for Bob under MRT computed at `v = 1`.
fn initial_phases(ch: &ChannelRealization) -> Result<CVector> {
    let ones = PhaseVector::ones(ch.elements());
    let b = ch.bob(ones.as_vector())?;
    let w = match mrt_beamformer(&b, 1.0) {
        Ok(bf) => bf.w,
        Err(_) => CVector::from_element(ch.antennas(), Complex64::new(1.0, 0.0)),
    };
    Ok(bob_aligned_phases(ch, &w))
}

/// Sum over antennas of the lifted forms, i.e. the lift of `‖h^H + v^H diag(g^H) H_as‖²`.
fn lifted_norm(h: &CVector, g: &CVector, h_as: &CMatrix) -> Result<CMatrix> {
    let m = h.len();
    let n = g.len();
    let mut total = CMatrix::zeros(n + 1, n + 1);
    for j in 0..m {
        let mut e = CVector::zeros(m);
        e[j] = Complex64::new(1.0, 0.0);
        total += build_lifted_r(h, g, h_as, &e)?.matrix;
    }
    Ok(total)
}

/// Willie's statistics only: covert power from the average DEP, phases from an
/// SDP maximizing Bob's channel norm, then MRT.
pub fn multi_partial_csi_solve(ch: &ChannelRealization, config: &SystemConfig) -> Result<SolveReport> {
    check_multi(ch)?;
    let mean_z = z_mean_irs(config, &ch.variances);
    let power = max_power_for_covertness(mean_z, &config.detection_params(), config.p_max);
    let mut v = initial_phases(ch)?;
    if ch.elements() > 0 {
        let obj = lifted_norm(&ch.h_ab, &ch.g_sb, &ch.h_as)?;
        let sol = solve_sdp(&SdpProblem {
            objective: obj,
            ineq_constraints: vec![],
            unit_diagonal: true,
        })?;
        let norm_of = |cand: &CVector| ch.bob(cand).map(|r| r.norm_squared()).unwrap_or(0.0);
        if sol.is_usable() {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let pick = gaussian_randomize(&sol.x, config.l, |c| (true, norm_of(c)), &mut rng);
            if norm_of(&pick.v) > norm_of(&v) {
                v = pick.v;
            }
        }
        let mut cascade = Cascade::new(ch, &v);
        coordinate_ascent(ch, &mut cascade, |b, _| b.iter().map(|z| z.norm_sqr()).sum());
        let polished = cascade.v.map(phase_of);
        if norm_of(&polished) > norm_of(&v) {
            v = polished;
        }
    }
    let b = ch.bob(&v)?;
    let w = match mrt_beamformer(&b, power) {
        Ok(bf) => bf.w,
        Err(_) => CVector::zeros(ch.antennas()),
    };
    report_for(ch, config, &v, &w, vec![], 0, SolveStatus::Direct)
}

/// Random starting points tried once the alternation stalls.
const RESTARTS: usize = 4;

fn joint_gain(b: &[Complex64], a: &[Complex64], eta: f64, p_max: f64) -> f64 {
    constrained_gain(b, a, p_max, eta)
}

/// Alternates the closed-form beamformer with a phase SDP; beamformer first.
pub fn alternating_optimal_solve(ch: &ChannelRealization, config: &SystemConfig) -> Result<SolveReport> {
    check_multi(ch)?;
    let eta = covert_budget(&config.detection_params()).eta;
    let p_max = config.p_max;
    let gain_of = |v: &CVector| -> Result<f64> {
        let b = ch.bob(v)?;
        let a = ch.willie(v)?;
        Ok(joint_gain(b.as_slice(), a.as_slice(), eta, p_max))
    };

    let mut v = initial_phases(ch)?;
    let mut gain = gain_of(&v)?;
    let mut trajectory = vec![rate_from_snr(gain / config.noise_b)];
    let mut iterations = 0;
    let mut status = SolveStatus::Direct;

    if ch.elements() > 0 && eta > 0.0 {
        status = SolveStatus::MaxIterations;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        for iter in 1..=config.max_iters {
            iterations = iter;
            // (a) beamformer for the current phases.
            let w = optimal_beamformer_given_v(&PhaseVector::from_raw(v.clone()), ch, eta, p_max)?.w;
            // (b) phases for that beamformer.
            let r_b = build_lifted_r(&ch.h_ab, &ch.g_sb, &ch.h_as, &w)?;
            let r_w = build_lifted_r(&ch.h_aw, &ch.g_sw, &ch.h_as, &w)?;
            let mut candidate = v.clone();
            if r_b.matrix.norm() > 0.0 {
                let sol = solve_sdp(&SdpProblem {
                    objective: r_b.matrix.clone(),
                    ineq_constraints: vec![(r_w.matrix.clone(), eta - r_w.offset)],
                    unit_diagonal: true,
                })?;
                if sol.is_usable() {
                    let pick = gaussian_randomize(
                        &sol.x,
                        config.l,
                        |c| (r_w.gain(c) <= eta * (1.0 + 1e-9), r_b.gain(c)),
                        &mut rng,
                    );
                    if pick.feasible {
                        candidate = pick.v;
                    }
                }
            }
            let mut cascade = Cascade::new(ch, &candidate);
            coordinate_ascent(ch, &mut cascade, |b, a| joint_gain(b, a, eta, p_max));
            let polished = cascade.v.map(phase_of);
            let new_gain = gain_of(&polished)?;
            if new_gain > gain {
                v = polished;
                gain = new_gain;
            }
            let mut step = rate_from_snr(gain / config.noise_b) - trajectory.last().copied().unwrap_or(0.0);
            if step < config.gamma_tol {
                // Stalled: the alternation can settle in a local optimum, so probe
                // a few other basins before accepting it.
                for _ in 0..RESTARTS {
                    let start = CVector::from_fn(ch.elements(), |_, _| unit_phase(rng.random_range(0.0..TAU)));
                    let mut cascade = Cascade::new(ch, &start);
                    coordinate_ascent(ch, &mut cascade, |b, a| joint_gain(b, a, eta, p_max));
                    let probe = cascade.v.map(phase_of);
                    let probe_gain = gain_of(&probe)?;
                    if probe_gain > gain {
                        v = probe;
                        gain = probe_gain;
                    }
                }
                step = rate_from_snr(gain / config.noise_b) - trajectory.last().copied().unwrap_or(0.0);
            }
            trajectory.push(rate_from_snr(gain / config.noise_b));
            if step < config.gamma_tol {
                status = SolveStatus::Converged;
                break;
            }
        }
    }
    let w = optimal_beamformer_given_v(&PhaseVector::from_raw(v.clone()), ch, eta, p_max)?.w;
    report_for(ch, config, &v, &w, trajectory, iterations, status)
}

/// Bob's effective channel projected onto the null space of Willie's, at full power.
fn zf_beamformer(b: &EffectiveChannel, a: &EffectiveChannel, p_max: f64) -> CVector {
    let bb = b.adjoint();
    let aa = a.adjoint();
    let na2 = aa.norm_squared();
    let proj = if na2 > 0.0 {
        let coef = aa.dotc(&bb) / na2;
        &bb - &aa * coef
    } else {
        bb
    };
    let norm = proj.norm();
    if norm <= 1e-14 * b.norm() || norm == 0.0 {
        return CVector::zeros(b.len());
    }
    proj * Complex64::new(p_max.sqrt() / norm, 0.0)
}

/// Zero-forcing: full power, Willie nulled, phases aligned for Bob.
pub fn zf_solve(ch: &ChannelRealization, config: &SystemConfig) -> Result<SolveReport> {
    check_multi(ch)?;
    if ch.antennas() < 2 {
        return Err(invalid_config("zero-forcing needs at least two transmit antennas"));
    }
    let p_max = config.p_max;
    let ones = PhaseVector::ones(ch.elements());
    let mut w_prev = mrt_beamformer(&ch.bob(ones.as_vector())?, p_max)
        .map(|b| b.w)
        .unwrap_or_else(|_| CVector::from_element(ch.antennas(), Complex64::new(1.0, 0.0)));

    let mut best: Option<(f64, CVector, CVector)> = None;
    let mut trajectory = Vec::new();
    let mut iterations = 0;
    let mut status = SolveStatus::MaxIterations;
    for iter in 1..=config.max_iters {
        iterations = iter;
        // (a) phases aligned for Bob under the current beamformer.
        let v = bob_aligned_phases(ch, &w_prev);
        // (b) zero-forcing beamformer for those phases.
        let b = ch.bob(&v)?;
        let a = ch.willie(&v)?;
        let w = zf_beamformer(&b, &a, p_max);
        let g = crate::channel::received_power(&b, &w);
        if best.as_ref().is_none_or(|x| g > x.0) {
            best = Some((g, v, w.clone()));
        }
        let rate = rate_from_snr(best.as_ref().unwrap().0 / config.noise_b);
        let prev = trajectory.last().copied();
        trajectory.push(rate);
        if ch.elements() == 0 {
            status = SolveStatus::Direct;
            break;
        }
        if prev.is_some_and(|p| rate - p < config.gamma_tol) {
            status = SolveStatus::Converged;
            break;
        }
        if w.norm_squared() > 0.0 {
            w_prev = w;
        }
    }
    let (_, v, w) = best.expect("at least one iteration runs");
    report_for(ch, config, &v, &w, trajectory, iterations, status)
}

/// Phases that put every reflected path in anti-phase with Willie's direct path.
fn willie_opposing_phases(ch: &ChannelRealization, w: &CVector) -> CVector {
    let beta = ch.h_aw.dotc(w);
    let target = -phase_of(beta);
    let hw = &ch.h_as * w;
    CVector::from_fn(ch.elements(), |i, _| {
        let term = ch.g_sw[i].conj() * hw[i];
        (target * phase_of(term).conj()).conj()
    })
}

/// Minimizes Willie's gain bound with the phases, optimal beamformer otherwise.
pub fn min_willie_solve(ch: &ChannelRealization, config: &SystemConfig) -> Result<SolveReport> {
    check_multi(ch)?;
    let eta = covert_budget(&config.detection_params()).eta;
    let p_max = config.p_max;
    let mut v = initial_phases(ch)?;
    let mut best: Option<(f64, CVector, CVector)> = None;
    let mut trajectory = Vec::new();
    let mut iterations = 0;
    let mut status = SolveStatus::MaxIterations;
    for iter in 1..=config.max_iters {
        iterations = iter;
        // (a) beamformer first.
        let w = optimal_beamformer_given_v(&PhaseVector::from_raw(v.clone()), ch, eta, p_max)?.w;
        let g = crate::channel::received_power(&ch.bob(&v)?, &w);
        if best.as_ref().is_none_or(|x| g > x.0) {
            best = Some((g, v.clone(), w.clone()));
        }
        let rate = rate_from_snr(best.as_ref().unwrap().0 / config.noise_b);
        let prev = trajectory.last().copied();
        trajectory.push(rate);
        if ch.elements() == 0 {
            status = SolveStatus::Direct;
            break;
        }
        if prev.is_some_and(|p| rate - p < config.gamma_tol) {
            status = SolveStatus::Converged;
            break;
        }
        // (b) phases opposing Willie's direct path.
        if w.norm_squared() > 0.0 {
            v = willie_opposing_phases(ch, &w);
        }
    }
    let (_, v, w) = best.expect("at least one iteration runs");
    report_for(ch, config, &v, &w, trajectory, iterations, status)
}

/// Uniformly random phases with the optimal beamformer.
pub fn random_phase_baseline(ch: &ChannelRealization, config: &SystemConfig) -> Result<SolveReport> {
    check_multi(ch)?;
    let eta = covert_budget(&config.detection_params()).eta;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5eed_0f_7a5e);
    let v = CVector::from_fn(ch.elements(), |_, _| unit_phase(rng.random_range(0.0..TAU)));
    let w = optimal_beamformer_given_v(&PhaseVector::from_raw(v.clone()), ch, eta, config.p_max)?.w;
    report_for(ch, config, &v, &w, vec![], 0, SolveStatus::Direct)
}

/// No IRS at all: optimal beamformer on the direct links only.
pub fn direct_beamforming_solve(ch: &ChannelRealization, config: &SystemConfig) -> Result<SolveReport> {
    check_multi(ch)?;
    let direct = ChannelRealization {
        h_as: CMatrix::zeros(0, ch.antennas()),
        g_sb: CVector::zeros(0),
        g_sw: CVector::zeros(0),
        ..ch.clone()
    };
    let eta = covert_budget(&config.detection_params()).eta;
    let v = CVector::zeros(0);
    let w = optimal_beamformer_given_v(&PhaseVector::from_raw(v.clone()), &direct, eta, config.p_max)?.w;
    report_for(&direct, config, &v, &w, vec![], 0, SolveStatus::Direct)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{received_power, LinkVariances};
    use crate::linalg::{complex_gaussian_matrix, complex_gaussian_vector};
    use crate::single_antenna::{instantaneous_solve, partial_csi_solve};

    fn channels(rng: &mut ChaCha8Rng, m: usize, n: usize) -> ChannelRealization {
        ChannelRealization {
            h_ab: complex_gaussian_vector(rng, m, 1.0),
            h_aw: complex_gaussian_vector(rng, m, 1.0),
            h_as: complex_gaussian_matrix(rng, n, m, 1.0),
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

    fn config(m: usize, n: usize) -> SystemConfig {
        SystemConfig {
            m,
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
    fn mrt_scalar_is_pure_phase() {
        let h = EffectiveChannel::from_element(1, Complex64::new(0.0, 2.0));
        let w = mrt_beamformer(&h, 4.0).unwrap().w;
        assert!((w[0] - Complex64::new(0.0, -2.0)).norm() < 1e-15);
        assert!(mrt_beamformer(&EffectiveChannel::zeros(3), 1.0).is_err());
    }

    #[test]
    fn mrt_beats_random_beams() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let h = complex_gaussian_vector(&mut rng, 4, 1.0).transpose();
        let w = mrt_beamformer(&h, 2.0).unwrap().w;
        let best = received_power(&h, &w);
        assert!((best - 2.0 * h.norm_squared()).abs() < 1e-12);
        for _ in 0..1000 {
            let x = complex_gaussian_vector(&mut rng, 4, 1.0);
            let x = &x * Complex64::new((2.0 / x.norm_squared()).sqrt(), 0.0);
            assert!(received_power(&h, &x) <= best * (1.0 + 1e-12));
        }
    }

    #[test]
    fn orthogonal_channels_give_leak_free_mrt() {
        let b = EffectiveChannel::from_row_slice(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let a = EffectiveChannel::from_row_slice(&[Complex64::new(0.0, 0.0), Complex64::new(3.0, 0.0)]);
        let w = safe_beamformer(b.as_slice(), a.as_slice(), 1.0, 1e-6);
        assert!((received_power(&b, &w) - 1.0).abs() < 1e-15);
        assert!(received_power(&a, &w) < 1e-30);
        // A very loose budget also gives MRT.
        let w2 = safe_beamformer(a.as_slice(), b.as_slice(), 1.0, 1e9);
        assert!((received_power(&a, &w2) - 9.0).abs() < 1e-12);
    }

    #[test]
    fn no_irs_partial_is_pure_mrt() {
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        let ch = channels(&mut rng, 3, 0);
        let cfg = config(3, 0);
        let rep = multi_partial_csi_solve(&ch, &cfg).unwrap();
        let p = max_power_for_covertness(ch.variances.aw, &cfg.detection_params(), cfg.p_max);
        assert!((rep.rate - (1.0 + p * ch.h_ab.norm_squared()).log2()).abs() < 1e-12);
    }

    #[test]
    fn single_antenna_cases_agree_across_modules() {
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        let cfg = config(1, 4);
        for _ in 0..3 {
            let ch = channels(&mut rng, 1, 4);
            let a = multi_partial_csi_solve(&ch, &cfg).unwrap();
            let b = partial_csi_solve(&ch, &cfg).unwrap();
            assert!(a.rate >= 0.99 * b.rate && a.rate <= b.rate * (1.0 + 1e-9));
            let c = alternating_optimal_solve(&ch, &cfg).unwrap();
            let d = instantaneous_solve(&ch, &cfg).unwrap();
            assert!((c.rate - d.rate).abs() <= 0.01 * d.rate, "{} vs {}", c.rate, d.rate);
        }
    }

    #[test]
    fn zf_rejects_single_antenna_and_nulls_willie() {
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        assert!(zf_solve(&channels(&mut rng, 1, 2), &config(1, 2)).is_err());
        let ch = channels(&mut rng, 3, 4);
        let rep = zf_solve(&ch, &config(3, 4)).unwrap();
        let a = ch.willie(rep.phases.as_vector()).unwrap();
        assert!(received_power(&a, &rep.beamformer.w).sqrt() <= 1e-9 * a.norm() * rep.beamformer.w.norm());
        assert!((rep.power - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zf_with_parallel_channels_has_zero_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(65);
        let mut ch = channels(&mut rng, 2, 0);
        ch.h_aw = &ch.h_ab * Complex64::new(0.5, 0.3);
        let rep = zf_solve(&ch, &config(2, 0)).unwrap();
        assert!(rep.rate < 1e-12);
    }

    #[test]
    fn min_willie_phases_oppose_direct_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(66);
        let ch = channels(&mut rng, 2, 5);
        let w = complex_gaussian_vector(&mut rng, 2, 1.0);
        let v = willie_opposing_phases(&ch, &w);
        let beta = ch.h_aw.dotc(&w);
        let hw = &ch.h_as * &w;
        for i in 0..5 {
            let term = v[i].conj() * ch.g_sw[i].conj() * hw[i];
            let cos = (term * beta.conj()).re / (term.norm() * beta.norm());
            assert!((cos + 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn no_irs_baselines_coincide() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        let ch = channels(&mut rng, 3, 0);
        let cfg = config(3, 0);
        let a = min_willie_solve(&ch, &cfg).unwrap();
        let b = random_phase_baseline(&ch, &cfg).unwrap();
        let eta = covert_budget(&cfg.detection_params()).eta;
        let w = optimal_beamformer_given_v(&PhaseVector::ones(0), &ch, eta, 1.0).unwrap();
        assert!((a.rate - b.rate).abs() < 1e-14);
        assert!((a.beamformer.w.clone() - w.w).norm() < 1e-14);
    }

    #[test]
    fn solvers_respect_caps_and_monotonicity() {
        let mut rng = ChaCha8Rng::seed_from_u64(68);
        let cfg = config(3, 4);
        let eta = covert_budget(&cfg.detection_params()).eta;
        for _ in 0..4 {
            let ch = channels(&mut rng, 3, 4);
            for rep in [
                alternating_optimal_solve(&ch, &cfg).unwrap(),
                min_willie_solve(&ch, &cfg).unwrap(),
                random_phase_baseline(&ch, &cfg).unwrap(),
            ] {
                assert!(rep.willie_power <= eta * (1.0 + 1e-6));
                assert!(rep.power <= cfg.p_max * (1.0 + 1e-10));
                for w in rep.rate_trajectory.windows(2) {
                    assert!(w[1] >= w[0] - 1e-9);
                }
            }
        }
    }
}
