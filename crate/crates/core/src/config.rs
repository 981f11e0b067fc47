//! System parameters, geometry and the flat `key = value` scenario format.

use crate::channel::CsiErrorBounds;
use crate::error::{invalid_config, Error, Result};

/// Which expression is used for the mean of Willie's composite gain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZMeanModel {
    /// `σ²_aw + N σ²_as σ²_sw`, the derived distribution.
    Derived,
    /// `σ²_sw + N σ²_as σ²_sw`, the expression used when plotting the partial-CSI curves.
    MainText,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub m: usize,
    pub n: usize,
    pub p_max: f64,
    pub noise_w: f64,
    pub noise_b: f64,
    pub rho: f64,
    pub kappa: f64,
    pub gamma_tol: f64,
    /// Gaussian-randomization candidate count.
    pub l: usize,
    pub max_iters: usize,
    pub seed: u64,
    pub z_mean_model: ZMeanModel,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            m: 1,
            n: 10,
            p_max: dbm_to_watts(10.0),
            noise_w: dbm_to_watts(-90.0),
            noise_b: dbm_to_watts(-90.0),
            rho: db_to_linear(3.0),
            kappa: 0.01,
            gamma_tol: 1e-4,
            l: 1000,
            max_iters: 100,
            seed: 7,
            z_mean_model: ZMeanModel::Derived,
        }
    }
}

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(invalid_config("M must be at least 1"));
        }
        let positive = [
            ("P_max", self.p_max),
            ("noise_w", self.noise_w),
            ("noise_b", self.noise_b),
            ("gamma_tol", self.gamma_tol),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(invalid_config(format!("{name} must be positive, got {value}")));
            }
        }
        if !(self.rho >= 1.0 && self.rho.is_finite()) {
            return Err(invalid_config(format!("rho must be >= 1, got {}", self.rho)));
        }
        if !(self.kappa > 0.0 && self.kappa < 1.0) {
            return Err(invalid_config(format!("kappa must lie in (0, 1), got {}", self.kappa)));
        }
        if self.l < 1 {
            return Err(invalid_config("L must be at least 1"));
        }
        if self.max_iters < 1 {
            return Err(invalid_config("max_iters must be at least 1"));
        }
        Ok(())
    }

    pub fn detection_params(&self) -> crate::detection::DetectionParams {
        crate::detection::DetectionParams {
            noise_w: self.noise_w,
            rho: self.rho,
            kappa: self.kappa,
        }
    }
}

/// Side of Alice on which Bob sits, measured along the Alice–IRS axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BobSide {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Geometry {
    pub d_as_h: f64,
    pub d_aw_h: f64,
    pub h_w: f64,
    pub d_ab_h: f64,
    pub h_b: f64,
    pub bob_side: BobSide,
    pub mu_as: f64,
    pub mu_ab: f64,
    pub mu_aw: f64,
    pub mu_sb: f64,
    pub mu_sw: f64,
    /// Reference path loss in dB at `d0`.
    pub pl0_db: f64,
    pub d0: f64,
}

impl Default for Geometry {
    fn default() -> Self {
        Self {
            d_as_h: 40.0,
            d_aw_h: 40.0,
            h_w: 5.0,
            d_ab_h: 40.0,
            h_b: 3.0,
            bob_side: BobSide::Right,
            mu_as: 2.0,
            mu_ab: 2.5,
            mu_aw: 2.5,
            mu_sb: 2.0,
            mu_sw: 2.5,
            pl0_db: -30.0,
            d0: 1.0,
        }
    }
}

impl Geometry {
    pub fn validate(&self) -> Result<()> {
        let distances = [
            ("d_as_h", self.d_as_h),
            ("d_aw_h", self.d_aw_h),
            ("d_ab_h", self.d_ab_h),
            ("d0", self.d0),
        ];
        for (name, value) in distances {
            if !(value > 0.0 && value.is_finite()) {
                return Err(invalid_config(format!("{name} must be positive, got {value}")));
            }
        }
        for (name, value) in [("h_w", self.h_w), ("h_b", self.h_b)] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(invalid_config(format!("{name} must be non-negative, got {value}")));
            }
        }
        let exponents = [
            ("mu_as", self.mu_as),
            ("mu_ab", self.mu_ab),
            ("mu_aw", self.mu_aw),
            ("mu_sb", self.mu_sb),
            ("mu_sw", self.mu_sw),
        ];
        for (name, value) in exponents {
            if !(value > 0.0 && value.is_finite()) {
                return Err(invalid_config(format!("{name} must be positive, got {value}")));
            }
        }
        if !self.pl0_db.is_finite() {
            return Err(invalid_config("PL0 must be finite"));
        }
        // Every link needs a strictly positive length.
        let lengths = crate::channel::link_distances(self);
        if lengths.iter().any(|d| !(*d > 0.0)) {
            return Err(invalid_config("geometry produces a zero-length link"));
        }
        Ok(())
    }
}

/// Everything a scenario file can set.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Scenario {
    pub config: SystemConfig,
    pub geometry: Geometry,
    pub bounds: CsiErrorBounds,
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

impl Scenario {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut sc = Scenario::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::ConfigParse {
                line: idx + 1,
                msg: format!("expected key = value, got `{line}`"),
            })?;
            sc.set(key.trim(), value.trim())
                .map_err(|msg| Error::ConfigParse { line: idx + 1, msg })?;
        }
        sc.validate()?;
        Ok(sc)
    }

    pub fn validate(&self) -> Result<()> {
        self.config.validate()?;
        self.geometry.validate()?;
        self.bounds.validate()
    }

    /// Sets one field by its scenario-file key.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        let num = || -> std::result::Result<f64, String> {
            value
                .parse::<f64>()
                .map_err(|_| format!("`{key}`: `{value}` is not a number"))
        };
        let count = || -> std::result::Result<usize, String> {
            value
                .parse::<usize>()
                .map_err(|_| format!("`{key}`: `{value}` is not a non-negative integer"))
        };
        let c = &mut self.config;
        let g = &mut self.geometry;
        match key {
            "M" | "m" => c.m = count()?,
            "N" | "n" => c.n = count()?,
            "P_max" | "p_max" => c.p_max = num()?,
            "P_max_dbm" | "p_max_dbm" => c.p_max = dbm_to_watts(num()?),
            "noise_w" => c.noise_w = num()?,
            "noise_w_dbm" => c.noise_w = dbm_to_watts(num()?),
            "noise_b" => c.noise_b = num()?,
            "noise_b_dbm" => c.noise_b = dbm_to_watts(num()?),
            "rho" => c.rho = num()?,
            "rho_db" => c.rho = db_to_linear(num()?),
            "kappa" => c.kappa = num()?,
            "gamma_tol" => c.gamma_tol = num()?,
            "L" | "l" => c.l = count()?,
            "max_iters" => c.max_iters = count()?,
            "seed" => {
                c.seed = value
                    .parse::<u64>()
                    .map_err(|_| format!("`seed`: `{value}` is not an unsigned integer"))?
            }
            "z_mean_model" => {
                c.z_mean_model = match value {
                    "derived" => ZMeanModel::Derived,
                    "main_text" => ZMeanModel::MainText,
                    _ => return Err(format!("`z_mean_model` must be derived or main_text, got `{value}`")),
                }
            }
            "d_as_h" => g.d_as_h = num()?,
            "d_aw_h" => g.d_aw_h = num()?,
            "h_w" => g.h_w = num()?,
            "d_ab_h" => g.d_ab_h = num()?,
            "h_b" => g.h_b = num()?,
            "bob_side" => {
                g.bob_side = match value {
                    "left" => BobSide::Left,
                    "right" => BobSide::Right,
                    _ => return Err(format!("`bob_side` must be left or right, got `{value}`")),
                }
            }
            "mu_as" => g.mu_as = num()?,
            "mu_ab" => g.mu_ab = num()?,
            "mu_aw" => g.mu_aw = num()?,
            "mu_sb" => g.mu_sb = num()?,
            "mu_sw" => g.mu_sw = num()?,
            "PL0" | "pl0" | "pl0_db" => g.pl0_db = num()?,
            "d0" => g.d0 = num()?,
            "zeta_aw" => self.bounds.zeta_aw = num()?,
            "zeta_sw" => self.bounds.zeta_sw = num()?,
            "zeta_as" => self.bounds.zeta_as = num()?,
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }
}
