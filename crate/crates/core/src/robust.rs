//! Robust covert design when some channels are only known up to a norm-bounded error.
//!
//! Every Willie constraint is replaced by a worst case over the error ball, so the
//! returned design stays covert for any true channel consistent with the estimate.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::beam::{constrained_beamformer, constrained_gain};
use crate::channel::{received_power, ChannelRealization, CsiErrorBounds};
use crate::config::SystemConfig;
use crate::detection::covert_budget;
use crate::error::{invalid_arg, Result};
use crate::linalg::{hermitian_eigen, phase_of, spectral_norm, unit_phase, CMatrix, CVector};
use crate::polish::{coordinate_ascent, Cascade};
use crate::sdp::{build_lifted_r, gaussian_randomize, solve_sdp, SdpProblem};
use crate::single_antenna::report_for;
use crate::solution::{rate_from_snr, Beamformer, PhaseVector, SolveReport, SolveStatus};

/// Which links carry estimation error, with their error radii.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RobustCase {
    /// Alice-Willie direct link uncertain.
    AliceWillie { zeta_aw: f64 },
    /// IRS-Willie link uncertain.
    IrsWillie { zeta_sw: f64 },
    /// Alice-IRS link uncertain; this also blurs Bob's cascaded channel.
    AliceIrs { zeta_as: f64 },
    /// Both of Willie's links uncertain.
    Both { zeta_aw: f64, zeta_sw: f64 },
}

impl RobustCase {
    /// Error bounds with the inactive links zeroed.
    pub fn bounds(&self) -> CsiErrorBounds {
        let mut b = CsiErrorBounds::default();
        match *self {
            Self::AliceWillie { zeta_aw } => b.zeta_aw = zeta_aw,
            Self::IrsWillie { zeta_sw } => b.zeta_sw = zeta_sw,
            Self::AliceIrs { zeta_as } => b.zeta_as = zeta_as,
            Self::Both { zeta_aw, zeta_sw } => {
                b.zeta_aw = zeta_aw;
                b.zeta_sw = zeta_sw;
            }
        }
        b
    }

    pub fn validate(&self) -> Result<()> {
        self.bounds().validate()
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::AliceWillie { .. } => "alice-willie",
            Self::IrsWillie { .. } => "irs-willie",
            Self::AliceIrs { .. } => "alice-irs",
            Self::Both { .. } => "both",
        }
    }
}

/// Norms of the estimated channel that the error bounds are scaled by.
#[derive(Debug, Clone, Copy)]
struct Norms {
    h_as: f64,
    g_sw: f64,
    g_sb: f64,
}

impl Norms {
    fn of(ch: &ChannelRealization) -> Self {
        let h_as = if ch.h_as.is_empty() { 0.0 } else { spectral_norm(&ch.h_as) };
        Self {
            h_as,
            g_sw: ch.g_sw.norm(),
            g_sb: ch.g_sb.norm(),
        }
    }
}

/// `c` such that `|e w| <= c ‖w‖` for every admissible error `e` on Willie's row.
fn willie_error_gain(case: &RobustCase, n: &Norms) -> f64 {
    match *case {
        RobustCase::AliceWillie { zeta_aw } => zeta_aw,
        RobustCase::IrsWillie { zeta_sw } => zeta_sw * n.h_as,
        RobustCase::AliceIrs { zeta_as } => zeta_as * n.g_sw,
        RobustCase::Both { zeta_aw, zeta_sw } => zeta_aw + zeta_sw * n.h_as,
    }
}

/// Diagonal loading added to Willie's nominal matrix.
fn willie_inflation(case: &RobustCase, n: &Norms, eff_w_norm: f64) -> f64 {
    let c = willie_error_gain(case, n);
    c * c + 2.0 * c * eff_w_norm
}

/// `c` such that `|e w| <= c ‖w‖` for every admissible error on Bob's row.
fn bob_error_gain(case: &RobustCase, n: &Norms) -> f64 {
    match *case {
        RobustCase::AliceIrs { zeta_as } => zeta_as * n.g_sb,
        _ => 0.0,
    }
}

/// Diagonal term of Bob's lower-bound matrix; only the Alice-IRS error reaches Bob.
fn bob_loading(case: &RobustCase, n: &Norms, eff_b_norm: f64) -> f64 {
    let c = bob_error_gain(case, n);
    c * c - 2.0 * c * eff_b_norm
}

/// Lower bound on Bob's true gain from the nominal gain and `‖w‖²`.
///
/// The loaded quadratic form only bounds the gain while `|b w| >= c ‖w‖`;
/// beyond that the error can cancel the signal entirely.
fn bob_bound(gain: f64, power: f64, c: f64, load: f64) -> f64 {
    if c == 0.0 {
        return gain;
    }
    if gain.sqrt() < c * power.sqrt() {
        return 0.0;
    }
    (gain + load * power).max(0.0)
}

fn outer(row: &[Complex64]) -> CMatrix {
    let m = row.len();
    CMatrix::from_fn(m, m, |i, j| row[i].conj() * row[j])
}

/// Conservative Willie matrix: `w^H U w` bounds Willie's received power for every
/// error in the case's ball.
pub fn robust_willie_matrix(case: &RobustCase, v: &PhaseVector, channels_est: &ChannelRealization) -> Result<CMatrix> {
    case.validate()?;
    let a = channels_est.willie(v.as_vector())?;
    let delta = willie_inflation(case, &Norms::of(channels_est), a.norm());
    let mut u = outer(a.as_slice());
    for i in 0..u.nrows() {
        u[(i, i)] += Complex64::new(delta, 0.0);
    }
    Ok(u)
}

/// Bob's lower-bound matrix; equals the nominal one except in the Alice-IRS case.
fn robust_bob_matrix(case: &RobustCase, b: &[Complex64], n: &Norms) -> CMatrix {
    let norm = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let load = bob_loading(case, n, norm);
    let mut u = outer(b);
    for i in 0..u.nrows() {
        u[(i, i)] += Complex64::new(load, 0.0);
    }
    u
}

/// Right-hand side for the phase SDP constraint on `Tr(R_aw V)` given `w`, or `None`
/// once the error alone can exceed the covert budget.
pub fn robust_budget_shrink(
    case: &RobustCase,
    w: &Beamformer,
    channels_est: &ChannelRealization,
    eta: f64,
) -> Result<Option<f64>> {
    case.validate()?;
    let ch = channels_est;
    if w.w.len() != ch.antennas() {
        return Err(invalid_arg("beamformer length differs from the antenna count"));
    }
    let beta = ch.h_aw.dotc(&w.w).norm();
    let wn = w.w.norm();
    let hw = (&ch.h_as * &w.w).norm();
    let gn = ch.g_sw.norm();
    let budget = match *case {
        RobustCase::AliceWillie { zeta_aw } => {
            let root = eta.sqrt() - zeta_aw * wn;
            if root <= 0.0 {
                return Ok(None);
            }
            root * root - beta * beta
        }
        _ => {
            let eps = match *case {
                RobustCase::IrsWillie { zeta_sw } => zeta_sw * hw,
                RobustCase::AliceIrs { zeta_as } => zeta_as * gn * wn,
                RobustCase::Both { zeta_aw, zeta_sw } => zeta_aw * wn + zeta_sw * hw,
                RobustCase::AliceWillie { .. } => unreachable!(),
            };
            // |eff_w w| <= |β| + ‖g_sw‖ ‖H_as w‖ for any phases.
            let lambda = beta * beta + eps * eps + 2.0 * eps * (beta + gn * hw);
            eta - lambda
        }
    };
    Ok((budget > 0.0).then_some(budget))
}

const POWER_GRID: usize = 16;
const POWER_GOLDEN: usize = 30;

/// Best robust value over transmit power for fixed rows: the inflated Willie
/// constraint leaves budget `eta - delta p` for the nominal part at power `p`.
fn power_search(
    b: &[Complex64],
    a: &[Complex64],
    delta: f64,
    (c, load): (f64, f64),
    p_max: f64,
    eta: f64,
) -> (f64, f64) {
    let p_hi = if delta > 0.0 { p_max.min(eta / delta) } else { p_max };
    if !(p_hi > 0.0) {
        return (0.0, 0.0);
    }
    let f = |p: f64| bob_bound(constrained_gain(b, a, p, eta - delta * p), p, c, load);
    let mut best = (0.0, 0.0);
    let step = p_hi / POWER_GRID as f64;
    let mut at = 0;
    for k in 1..=POWER_GRID {
        let val = f(step * k as f64);
        if val > best.0 {
            best = (val, step * k as f64);
            at = k;
        }
    }
    if at == 0 {
        return best;
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (step * (at as f64 - 1.0), (step * (at as f64 + 1.0)).min(p_hi));
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..POWER_GOLDEN {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    for (x, fx) in [(x1, f1), (x2, f2)] {
        if fx > best.0 {
            best = (fx, x);
        }
    }
    best
}

/// Shared pieces of one robust problem instance.
struct Instance<'a> {
    case: RobustCase,
    ch: &'a ChannelRealization,
    norms: Norms,
    eta: f64,
    p_max: f64,
}

impl Instance<'_> {
    /// Robust objective for fixed effective rows: Bob's (lower-bound) gain at the best power.
    fn value(&self, b: &[Complex64], a: &[Complex64]) -> f64 {
        let an = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let bn = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let delta = willie_inflation(&self.case, &self.norms, an);
        power_search(b, a, delta, self.bob_terms(bn), self.p_max, self.eta).0
    }

    fn bob_terms(&self, eff_b_norm: f64) -> (f64, f64) {
        (
            bob_error_gain(&self.case, &self.norms),
            bob_loading(&self.case, &self.norms, eff_b_norm),
        )
    }

    fn objective_of(&self, b: &[Complex64], w: &CVector) -> f64 {
        let gain = b.iter().zip(w.iter()).map(|(x, y)| x * y).sum::<Complex64>().norm_sqr();
        let bn = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let (c, load) = self.bob_terms(bn);
        bob_bound(gain, w.norm_squared(), c, load)
    }

    fn willie_bound(&self, u_w: &CMatrix, w: &CVector) -> f64 {
        (w.dotc(&(u_w * w))).re
    }

    /// Beamformer for fixed phases: SDP with Gaussian randomization, compared
    /// against the power-search closed form. Returns `(value, w)`.
    fn beam_step<R: Rng>(&self, v: &CVector, l: usize, rng: &mut R) -> Result<(f64, CVector)> {
        let m = self.ch.antennas();
        let b = self.ch.bob(v)?;
        let a = self.ch.willie(v)?;
        let u_w = robust_willie_matrix(&self.case, &PhaseVector::from_raw(v.clone()), self.ch)?;
        let u_b = robust_bob_matrix(&self.case, b.as_slice(), &self.norms);

        let mut best = (0.0, CVector::zeros(m));
        let consider = |w: CVector, best: &mut (f64, CVector)| {
            let pw = w.norm_squared();
            let lw = self.willie_bound(&u_w, &w);
            if pw <= 0.0 {
                return;
            }
            let mut t = self.p_max / pw;
            if lw > 0.0 {
                t = t.min(self.eta / lw);
            }
            let w = w * Complex64::new(t.sqrt(), 0.0);
            let val = self.objective_of(b.as_slice(), &w);
            if val > best.0 {
                *best = (val, w);
            }
        };

        // Normalized units W' = W / P_max keep the SDP data well scaled.
        let sol = solve_sdp(&SdpProblem {
            objective: u_b.clone(),
            ineq_constraints: vec![
                (CMatrix::identity(m, m), 1.0),
                (u_w.clone(), self.eta / self.p_max),
            ],
            unit_diagonal: false,
        });
        if let Ok(sol) = sol {
            if sol.is_usable() {
                let (vals, vecs) = hermitian_eigen(&sol.x);
                let top = vals[m - 1].max(0.0);
                consider(vecs.column(m - 1).into_owned(), &mut best);
                if vals.len() > 1 && vals[m - 2] > 1e-8 * top {
                    let roots: Vec<f64> = vals.iter().map(|x| x.max(0.0).sqrt()).collect();
                    for _ in 0..l {
                        let e = CVector::from_fn(m, |k, _| {
                            let re: f64 = rng.sample(StandardNormal);
                            let im: f64 = rng.sample(StandardNormal);
                            Complex64::new(re, im) * (roots[k] * std::f64::consts::FRAC_1_SQRT_2)
                        });
                        consider(&vecs * e, &mut best);
                    }
                }
            }
        }

        let delta = willie_inflation(&self.case, &self.norms, a.norm());
        let terms = self.bob_terms(b.norm());
        let (val, p) = power_search(b.as_slice(), a.as_slice(), delta, terms, self.p_max, self.eta);
        if val > best.0 {
            let w = constrained_beamformer(b.as_slice(), a.as_slice(), p, self.eta - delta * p);
            // Guard against rounding past the robust constraint.
            let lw = self.willie_bound(&u_w, &w);
            let w = if lw > self.eta { w * Complex64::new((self.eta / lw).sqrt(), 0.0) } else { w };
            let val = self.objective_of(b.as_slice(), &w);
            if val > best.0 {
                best = (val, w);
            }
        }
        Ok(best)
    }

    /// Phase SDP against the shrunk budget, randomized then polished.
    fn phase_step<R: Rng>(&self, v: &CVector, w: &CVector, l: usize, rng: &mut R) -> Result<CVector> {
        let mut ws = w.clone();
        let mut budget = None;
        for _ in 0..=40 {
            if ws.norm_squared() == 0.0 {
                break;
            }
            budget = robust_budget_shrink(&self.case, &Beamformer { w: ws.clone() }, self.ch, self.eta)?;
            if budget.is_some() {
                break;
            }
            ws *= Complex64::new(0.5, 0.0);
        }
        let mut candidate = v.clone();
        if let Some(budget) = budget {
            let r_b = build_lifted_r(&self.ch.h_ab, &self.ch.g_sb, &self.ch.h_as, &ws)?;
            let r_w = build_lifted_r(&self.ch.h_aw, &self.ch.g_sw, &self.ch.h_as, &ws)?;
            if r_b.matrix.norm() > 0.0 {
                let sol = solve_sdp(&SdpProblem {
                    objective: r_b.matrix.clone(),
                    ineq_constraints: vec![(r_w.matrix.clone(), budget)],
                    unit_diagonal: true,
                })?;
                if sol.is_usable() {
                    let pick = gaussian_randomize(
                        &sol.x,
                        l,
                        |c| (r_w.gain(c) - r_w.offset <= budget * (1.0 + 1e-9), r_b.gain(c)),
                        rng,
                    );
                    if pick.feasible {
                        candidate = pick.v;
                    }
                }
            }
        }
        let mut cascade = Cascade::new(self.ch, &candidate);
        coordinate_ascent(self.ch, &mut cascade, |b, a| self.value(b, a));
        Ok(cascade.v.map(phase_of))
    }
}

/// Alternating robust design on the estimated channels.
pub fn robust_solve(
    case: &RobustCase,
    channels_est: &ChannelRealization,
    config: &SystemConfig,
) -> Result<SolveReport> {
    case.validate()?;
    channels_est.check_shapes()?;
    let inst = Instance {
        case: *case,
        ch: channels_est,
        norms: Norms::of(channels_est),
        eta: covert_budget(&config.detection_params()).eta,
        p_max: config.p_max,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut v = CVector::from_fn(channels_est.elements(), |_, _| {
        unit_phase(rng.random_range(0.0..std::f64::consts::TAU))
    });

    let (mut value, mut w) = inst.beam_step(&v, config.l, &mut rng)?;
    let mut trajectory = vec![rate_from_snr(value / config.noise_b)];
    let mut iterations = 0;
    let mut status = SolveStatus::Direct;
    if channels_est.elements() > 0 {
        status = SolveStatus::MaxIterations;
        for iter in 1..=config.max_iters {
            iterations = iter;
            let cand_v = inst.phase_step(&v, &w, config.l, &mut rng)?;
            let (cand_val, cand_w) = inst.beam_step(&cand_v, config.l, &mut rng)?;
            if cand_val > value {
                value = cand_val;
                v = cand_v;
                w = cand_w;
            }
            let rate = rate_from_snr(value / config.noise_b);
            let step = rate - trajectory.last().copied().unwrap_or(0.0);
            trajectory.push(rate);
            if step.abs() <= config.gamma_tol {
                status = SolveStatus::Converged;
                break;
            }
        }
    }
    if !(value > 0.0) {
        w = CVector::zeros(channels_est.antennas());
        status = SolveStatus::BudgetExhausted;
    }
    let mut report = report_for(channels_est, config, &v, &w, trajectory, iterations, status)?;
    report.bound_rate = Some(rate_from_snr(value.max(0.0) / config.noise_b));
    if status == SolveStatus::BudgetExhausted {
        report.rate = 0.0;
    }
    Ok(report)
}

/// Largest Willie power over `samples` true channels drawn from the error ball
/// around the estimate.
pub fn worst_sampled_willie_power<R: Rng + ?Sized>(
    report: &SolveReport,
    case: &RobustCase,
    channels_est: &ChannelRealization,
    samples: usize,
    rng: &mut R,
) -> Result<f64> {
    let bounds = case.bounds();
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let truth = crate::channel::perturb_csi(channels_est, &bounds, rng);
        let a = truth.willie(report.phases.as_vector())?;
        worst = worst.max(received_power(&a, &report.beamformer.w));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{perturb_csi, LinkVariances};
    use crate::linalg::{complex_gaussian_matrix, complex_gaussian_vector, lambda_min};
    use crate::multi_antenna::alternating_optimal_solve;

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
            l: 100,
            ..SystemConfig::default()
        }
    }

    fn cases(z: f64) -> [RobustCase; 4] {
        [
            RobustCase::AliceWillie { zeta_aw: z },
            RobustCase::IrsWillie { zeta_sw: z },
            RobustCase::AliceIrs { zeta_as: z },
            RobustCase::Both { zeta_aw: z, zeta_sw: z },
        ]
    }

    #[test]
    fn zero_bounds_give_nominal_matrix_and_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let ch = channels(&mut rng, 3, 4);
        let v = PhaseVector::from_angles(&[0.3, 1.0, -2.0, 0.5]);
        let a = ch.willie(v.as_vector()).unwrap();
        let w = complex_gaussian_vector(&mut rng, 3, 0.1);
        let beta2 = ch.h_aw.dotc(&w).norm_sqr();
        for case in cases(0.0) {
            let u = robust_willie_matrix(&case, &v, &ch).unwrap();
            assert!((u - outer(a.as_slice())).norm() == 0.0);
            let b = robust_budget_shrink(&case, &Beamformer { w: w.clone() }, &ch, 5.0).unwrap();
            assert!((b.unwrap() - (5.0 - beta2)).abs() < 1e-12);
        }
    }

    #[test]
    fn inflated_matrix_dominates_nominal_and_bounds_sampled_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(72);
        let ch = channels(&mut rng, 3, 5);
        let v = PhaseVector::from_angles(&[0.1, 0.7, 2.0, -1.0, 3.0]);
        for case in cases(0.3) {
            let u = robust_willie_matrix(&case, &v, &ch).unwrap();
            let nominal = outer(ch.willie(v.as_vector()).unwrap().as_slice());
            assert!(lambda_min(&(&u - nominal)) >= -1e-12);
            for _ in 0..200 {
                let w = complex_gaussian_vector(&mut rng, 3, 1.0);
                let bound = w.dotc(&(&u * &w)).re;
                let truth = perturb_csi(&ch, &case.bounds(), &mut rng);
                let p = received_power(&truth.willie(v.as_vector()).unwrap(), &w);
                assert!(p <= bound * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn large_direct_error_exhausts_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        let ch = channels(&mut rng, 2, 3);
        let w = Beamformer {
            w: CVector::from_element(2, Complex64::new(1.0, 0.0)),
        };
        let case = RobustCase::AliceWillie { zeta_aw: 1.0 };
        // ζ‖w‖ = √2 exceeds √η = 1.
        assert!(robust_budget_shrink(&case, &w, &ch, 1.0).unwrap().is_none());
        assert!(robust_budget_shrink(&RobustCase::AliceWillie { zeta_aw: -1.0 }, &w, &ch, 1.0).is_err());
    }

    #[test]
    fn power_search_matches_dense_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(74);
        for _ in 0..20 {
            let b: Vec<Complex64> = complex_gaussian_vector(&mut rng, 3, 1.0).iter().copied().collect();
            let a: Vec<Complex64> = complex_gaussian_vector(&mut rng, 3, 1.0).iter().copied().collect();
            let (delta, eta) = (0.2, 0.1);
            let got = power_search(&b, &a, delta, (0.0, 0.0), 1.0, eta).0;
            let scan = (1..=4000)
                .map(|k| {
                    let p = 0.5 * k as f64 / 4000.0;
                    constrained_gain(&b, &a, p, eta - delta * p)
                })
                .fold(0.0, f64::max);
            assert!(got >= scan * (1.0 - 1e-6), "{got} < {scan}");
        }
    }

    #[test]
    fn zero_error_matches_perfect_csi() {
        let mut rng = ChaCha8Rng::seed_from_u64(75);
        let cfg = config(3, 4);
        for _ in 0..3 {
            let ch = channels(&mut rng, 3, 4);
            let perfect = alternating_optimal_solve(&ch, &cfg).unwrap();
            for case in cases(0.0) {
                let rep = robust_solve(&case, &ch, &cfg).unwrap();
                assert!((rep.rate - perfect.rate).abs() <= 0.01 * perfect.rate, "{} vs {}", rep.rate, perfect.rate);
            }
        }
    }

    #[test]
    fn robust_solutions_are_sound_and_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(76);
        let cfg = config(3, 4);
        let eta = covert_budget(&cfg.detection_params()).eta;
        let ch = channels(&mut rng, 3, 4);
        for case in cases(0.05) {
            let rep = robust_solve(&case, &ch, &cfg).unwrap();
            let worst = worst_sampled_willie_power(&rep, &case, &ch, 2000, &mut rng).unwrap();
            assert!(worst <= eta * (1.0 + 1e-6), "{}: {worst} > {eta}", case.name());
            assert!(rep.power <= cfg.p_max * (1.0 + 1e-10));
            for s in rep.rate_trajectory.windows(2) {
                assert!(s[1] >= s[0] - 1e-12);
            }
            assert!(rep.bound_rate.is_some());
        }
    }

    #[test]
    fn huge_bob_error_reports_exhaustion() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let ch = channels(&mut rng, 2, 3);
        let rep = robust_solve(&RobustCase::AliceIrs { zeta_as: 100.0 }, &ch, &config(2, 3)).unwrap();
        assert_eq!(rep.status, SolveStatus::BudgetExhausted);
        assert_eq!(rep.rate, 0.0);
    }
}
