//! Monte Carlo sweeps: one swept parameter, several solvers on shared channel draws.

mod output;
mod presets;

pub use output::{emit_results, parse_results, plot_script};
pub use presets::{figure_preset, PRESETS};

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{perturb_csi, received_power, sample_channels, sample_channels_split, ChannelRealization};
use crate::config::{Scenario, SystemConfig};
use crate::detection::covert_budget;
use crate::error::{invalid_config, Error, Result};
use crate::multi_antenna as multi;
use crate::robust::{robust_solve, RobustCase};
use crate::single_antenna as single;
use crate::solution::SolveReport;

/// Relative slack allowed on the covert and power constraints when judging feasibility.
pub const WILLIE_SLACK: f64 = 1e-6;
pub const POWER_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SolverId {
    Direct,
    DirectInst,
    SinglePartial,
    SingleInst,
    MultiPartial,
    MultiOptimal,
    MultiZf,
    MultiMinWillie,
    MultiRandom,
    MultiDirect,
    RobustAw,
    RobustSw,
    RobustAs,
    RobustBoth,
}

impl SolverId {
    pub const ALL: [SolverId; 14] = [
        Self::Direct,
        Self::DirectInst,
        Self::SinglePartial,
        Self::SingleInst,
        Self::MultiPartial,
        Self::MultiOptimal,
        Self::MultiZf,
        Self::MultiMinWillie,
        Self::MultiRandom,
        Self::MultiDirect,
        Self::RobustAw,
        Self::RobustSw,
        Self::RobustAs,
        Self::RobustBoth,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Direct => "direct",
            Self::DirectInst => "direct-inst",
            Self::SinglePartial => "single-partial",
            Self::SingleInst => "single-inst",
            Self::MultiPartial => "multi-partial",
            Self::MultiOptimal => "multi-optimal",
            Self::MultiZf => "multi-zf",
            Self::MultiMinWillie => "multi-minwillie",
            Self::MultiRandom => "multi-random",
            Self::MultiDirect => "multi-direct",
            Self::RobustAw => "robust-aw",
            Self::RobustSw => "robust-sw",
            Self::RobustAs => "robust-as",
            Self::RobustBoth => "robust-both",
        }
    }

    /// Solvers whose covert constraint holds only on average over Willie's channel.
    pub fn is_partial_csi(&self) -> bool {
        matches!(self, Self::Direct | Self::SinglePartial | Self::MultiPartial)
    }

    pub fn robust_case(&self, scenario: &Scenario) -> Option<RobustCase> {
        let b = &scenario.bounds;
        match self {
            Self::RobustAw => Some(RobustCase::AliceWillie { zeta_aw: b.zeta_aw }),
            Self::RobustSw => Some(RobustCase::IrsWillie { zeta_sw: b.zeta_sw }),
            Self::RobustAs => Some(RobustCase::AliceIrs { zeta_as: b.zeta_as }),
            Self::RobustBoth => Some(RobustCase::Both {
                zeta_aw: b.zeta_aw,
                zeta_sw: b.zeta_sw,
            }),
            _ => None,
        }
    }

    /// Runs a perfect-CSI solver on `ch`.
    pub fn solve(&self, ch: &ChannelRealization, config: &SystemConfig) -> Result<SolveReport> {
        match self {
            Self::Direct => single::direct_solve(ch, config),
            Self::DirectInst => single::direct_instantaneous_solve(ch, config),
            Self::SinglePartial => single::partial_csi_solve(ch, config),
            Self::SingleInst => single::instantaneous_solve(ch, config),
            Self::MultiPartial => multi::multi_partial_csi_solve(ch, config),
            Self::MultiOptimal => multi::alternating_optimal_solve(ch, config),
            Self::MultiZf => multi::zf_solve(ch, config),
            Self::MultiMinWillie => multi::min_willie_solve(ch, config),
            Self::MultiRandom => multi::random_phase_baseline(ch, config),
            Self::MultiDirect => multi::direct_beamforming_solve(ch, config),
            _ => Err(invalid_config(format!("{self} needs error bounds"))),
        }
    }
}

impl fmt::Display for SolverId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SolverId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| invalid_config(format!("unknown solver `{s}`")))
    }
}

/// The quantity a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    DAbH,
    DAwH,
    DAsH,
    /// IRS and Willie move together, so Willie stays at height `h_w` above the IRS.
    DAsAwH,
    N,
    HB,
    /// Multiplies every CSI error bound.
    ZetaScale,
}

impl SweepParam {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::DAbH => "d_ab_h",
            Self::DAwH => "d_aw_h",
            Self::DAsH => "d_as_h",
            Self::DAsAwH => "d_as_aw_h",
            Self::N => "N",
            Self::HB => "h_b",
            Self::ZetaScale => "zeta_scale",
        }
    }

    /// Scenario with the parameter set to `value`.
    pub fn apply(&self, base: &Scenario, value: f64) -> Result<Scenario> {
        let mut sc = base.clone();
        let g = &mut sc.geometry;
        match self {
            Self::DAbH => g.d_ab_h = value,
            Self::DAwH => g.d_aw_h = value,
            Self::DAsH => g.d_as_h = value,
            Self::DAsAwH => {
                g.d_as_h = value;
                g.d_aw_h = value;
            }
            Self::N => {
                if !(value >= 0.0 && value.fract() == 0.0) {
                    return Err(invalid_config(format!("N must be a non-negative integer, got {value}")));
                }
                sc.config.n = value as usize;
            }
            Self::HB => g.h_b = value,
            Self::ZetaScale => {
                if !(value >= 0.0) {
                    return Err(invalid_config(format!("zeta scale must be non-negative, got {value}")));
                }
                sc.bounds = sc.bounds.scaled(value);
            }
        }
        sc.validate()?;
        Ok(sc)
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepParam {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "d_ab_h" => Self::DAbH,
            "d_aw_h" => Self::DAwH,
            "d_as_h" => Self::DAsH,
            "d_as_aw_h" => Self::DAsAwH,
            "N" | "n" => Self::N,
            "h_b" => Self::HB,
            "zeta_scale" | "zeta" => Self::ZetaScale,
            _ => return Err(invalid_config(format!("unknown sweep parameter `{s}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub values: Vec<f64>,
    pub trials: usize,
    pub solvers: Vec<SolverId>,
    pub preset: Option<String>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(invalid_config("sweep needs at least one value"));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(invalid_config("sweep values must be finite"));
        }
        if self.trials == 0 {
            return Err(invalid_config("trials must be at least 1"));
        }
        if self.solvers.is_empty() {
            return Err(invalid_config("sweep needs at least one solver"));
        }
        Ok(())
    }
}

/// Parses `start:stop:step` (inclusive) or a comma-separated list.
pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| invalid_config(format!("`{s}` is not a number")))
    };
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(invalid_config(format!("range `{text}` must be start:stop:step")));
        }
        let (start, stop, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(step > 0.0) || stop < start {
            return Err(invalid_config(format!("range `{text}` is empty or has a non-positive step")));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        return Ok((0..count).map(|k| start + step * k as f64).collect());
    }
    let values = text.split(',').map(num).collect::<Result<Vec<_>>>()?;
    if values.is_empty() {
        return Err(invalid_config("empty value list"));
    }
    Ok(values)
}

/// Aggregated result for one (value, solver) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub param: f64,
    pub solver: String,
    pub mean_rate: f64,
    pub stderr: f64,
    pub mean_willie_power: f64,
    pub feasible_frac: f64,
    pub trials: usize,
}

/// Outcome of one solver on one trial.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub value_index: usize,
    pub trial: usize,
    pub solver: SolverId,
    /// Rate on the channels the solver was given; 0 when the solver did not apply.
    pub rate: f64,
    /// Received power at Willie over the true channels.
    pub willie_power: f64,
    pub feasible: bool,
    pub report: Option<SolveReport>,
    /// Channels the design was computed on (the estimate for robust solvers).
    pub design_channels: Option<ChannelRealization>,
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of the stream for `(seed, value index, trial index, purpose)`.
pub fn trial_seed(seed: u64, value_index: usize, trial: usize, purpose: u64) -> u64 {
    splitmix(splitmix(splitmix(splitmix(seed) ^ value_index as u64) ^ trial as u64) ^ purpose)
}

const STREAM_CHANNELS: u64 = 1;
const STREAM_DIRECT: u64 = 2;
const STREAM_SOLVER: u64 = 3;
const STREAM_ERROR: u64 = 4;

/// Channels of one trial. Sweeps over N hold the direct links fixed across values.
pub fn trial_channels(
    param: SweepParam,
    scenario: &Scenario,
    value_index: usize,
    trial: usize,
) -> Result<ChannelRealization> {
    let seed = scenario.config.seed;
    let mut irs = ChaCha8Rng::seed_from_u64(trial_seed(seed, value_index, trial, STREAM_CHANNELS));
    if param == SweepParam::N {
        let mut direct = ChaCha8Rng::seed_from_u64(trial_seed(seed, usize::MAX, trial, STREAM_DIRECT));
        sample_channels_split(&scenario.config, &scenario.geometry, &mut direct, &mut irs)
    } else {
        sample_channels(&scenario.config, &scenario.geometry, &mut irs)
    }
}

/// Called with every (trial, solver, channels) triple a sweep evaluates.
pub type Observer<'a> = dyn Fn(usize, usize, SolverId, &ChannelRealization) + Sync + 'a;

fn run_one(
    solver: SolverId,
    scenario: &Scenario,
    truth: &ChannelRealization,
    value_index: usize,
    trial: usize,
    eta: f64,
    observer: Option<&Observer<'_>>,
) -> Result<TrialRecord> {
    let seed = scenario.config.seed;
    let mut config = scenario.config.clone();
    config.seed = trial_seed(seed, value_index, trial, STREAM_SOLVER);
    if let Some(obs) = observer {
        obs(value_index, trial, solver, truth);
    }

    let (outcome, design) = match solver.robust_case(scenario) {
        Some(case) => {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(
                seed,
                value_index,
                trial,
                STREAM_ERROR ^ ((solver as u64) << 8),
            ));
            let est = perturb_csi(truth, &case.bounds(), &mut rng);
            (robust_solve(&case, &est, &config), est)
        }
        None => (solver.solve(truth, &config), truth.clone()),
    };

    let report = match outcome {
        Ok(r) => r,
        Err(Error::InvalidConfiguration(_)) => {
            return Ok(TrialRecord {
                value_index,
                trial,
                solver,
                rate: 0.0,
                willie_power: 0.0,
                feasible: false,
                report: None,
                design_channels: None,
            })
        }
        Err(e) => return Err(e),
    };
    let willie_power = if report.phases.len() == truth.elements() {
        received_power(&truth.willie(report.phases.as_vector())?, &report.beamformer.w)
    } else {
        // Solvers that ignore the IRS report an empty phase vector.
        received_power(&truth.h_aw.adjoint(), &report.beamformer.w)
    };
    let power_ok = report.power <= config.p_max * (1.0 + POWER_SLACK);
    let feasible = report.is_feasible()
        && power_ok
        && (solver.is_partial_csi() || willie_power <= eta * (1.0 + WILLIE_SLACK));
    Ok(TrialRecord {
        value_index,
        trial,
        solver,
        rate: report.rate,
        willie_power,
        feasible,
        report: Some(report),
        design_channels: Some(design),
    })
}

/// Every trial of a sweep, in (value, trial, solver) order.
pub fn run_trials(spec: &SweepSpec, base: &Scenario, observer: Option<&Observer<'_>>) -> Result<Vec<TrialRecord>> {
    spec.validate()?;
    base.validate()?;
    let scenarios = spec
        .values
        .iter()
        .map(|&v| spec.param.apply(base, v))
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, usize)> = (0..scenarios.len())
        .flat_map(|vi| (0..spec.trials).map(move |t| (vi, t)))
        .collect();
    let per_job = jobs
        .par_iter()
        .map(|&(vi, t)| -> Result<Vec<TrialRecord>> {
            let sc = &scenarios[vi];
            let truth = trial_channels(spec.param, sc, vi, t)?;
            let eta = covert_budget(&sc.config.detection_params()).eta;
            spec.solvers
                .iter()
                .map(|&s| run_one(s, sc, &truth, vi, t, eta, observer))
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_job.into_iter().flatten().collect())
}

/// Averages trial records into one row per (value, solver), sorted.
pub fn aggregate(spec: &SweepSpec, records: &[TrialRecord]) -> Vec<ResultRow> {
    let mut rows = Vec::new();
    for (vi, &value) in spec.values.iter().enumerate() {
        for &solver in &spec.solvers {
            let recs: Vec<&TrialRecord> = records
                .iter()
                .filter(|r| r.value_index == vi && r.solver == solver)
                .collect();
            let n = recs.len();
            if n == 0 {
                continue;
            }
            let mean = recs.iter().map(|r| r.rate).sum::<f64>() / n as f64;
            let stderr = if n > 1 {
                let var = recs.iter().map(|r| (r.rate - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
                (var / n as f64).sqrt()
            } else {
                0.0
            };
            rows.push(ResultRow {
                param: value,
                solver: solver.as_str().to_string(),
                mean_rate: mean,
                stderr,
                mean_willie_power: recs.iter().map(|r| r.willie_power).sum::<f64>() / n as f64,
                feasible_frac: recs.iter().filter(|r| r.feasible).count() as f64 / n as f64,
                trials: n,
            });
        }
    }
    sort_rows(&mut rows);
    rows
}

pub(crate) fn sort_rows(rows: &mut [ResultRow]) {
    rows.sort_by(|a, b| a.param.total_cmp(&b.param).then_with(|| a.solver.cmp(&b.solver)));
}

/// Runs a sweep and aggregates it.
pub fn run_sweep(spec: &SweepSpec, base: &Scenario) -> Result<Vec<ResultRow>> {
    let records = run_trials(spec, base, None)?;
    Ok(aggregate(spec, &records))
}

/// Scenario for one value of a sweep, exposed for callers that replay trials.
pub fn scenario_at(spec: &SweepSpec, base: &Scenario, value_index: usize) -> Result<Scenario> {
    let value = *spec
        .values
        .get(value_index)
        .ok_or_else(|| invalid_config("value index out of range"))?;
    spec.param.apply(base, value)
}
