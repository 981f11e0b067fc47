//! Rayleigh channel synthesis over the Alice / IRS / Bob / Willie geometry.

mod geometry;

pub use geometry::{link_distances, link_variances, path_loss_gain, LinkVariances};

use nalgebra::RowDVector;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::config::{Geometry, SystemConfig};
use crate::error::{invalid_arg, invalid_config, Result};
use crate::linalg::{complex_gaussian_matrix, complex_gaussian_vector, CMatrix, CVector};

/// Row vector seen by a receiver: `h^H + v^H diag(g^H) H_as`.
pub type EffectiveChannel = RowDVector<Complex64>;

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub h_ab: CVector,
    pub h_aw: CVector,
    /// IRS incident channel, `N x M`.
    pub h_as: CMatrix,
    pub g_sb: CVector,
    pub g_sw: CVector,
    pub variances: LinkVariances,
}

impl ChannelRealization {
    pub fn antennas(&self) -> usize {
        self.h_ab.len()
    }

    pub fn elements(&self) -> usize {
        self.g_sb.len()
    }

    pub fn check_shapes(&self) -> Result<()> {
        let m = self.h_ab.len();
        let n = self.g_sb.len();
        if m == 0 || self.h_aw.len() != m || (n > 0 && self.h_as.ncols() != m) {
            return Err(invalid_arg("direct channels and H_as disagree on M"));
        }
        if self.h_as.nrows() != n || self.g_sw.len() != n {
            return Err(invalid_arg("IRS blocks disagree on N"));
        }
        Ok(())
    }

    pub fn bob(&self, v: &CVector) -> Result<EffectiveChannel> {
        effective_channel(&self.h_ab, v, &self.g_sb, &self.h_as)
    }

    pub fn willie(&self, v: &CVector) -> Result<EffectiveChannel> {
        effective_channel(&self.h_aw, v, &self.g_sw, &self.h_as)
    }
}

/// Norm bounds on the channel estimation errors.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CsiErrorBounds {
    pub zeta_aw: f64,
    pub zeta_sw: f64,
    pub zeta_as: f64,
}

impl CsiErrorBounds {
    pub fn validate(&self) -> Result<()> {
        for (name, z) in [
            ("zeta_aw", self.zeta_aw),
            ("zeta_sw", self.zeta_sw),
            ("zeta_as", self.zeta_as),
        ] {
            if !(z >= 0.0 && z.is_finite()) {
                return Err(invalid_config(format!("{name} must be non-negative, got {z}")));
            }
        }
        Ok(())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            zeta_aw: self.zeta_aw * factor,
            zeta_sw: self.zeta_sw * factor,
            zeta_as: self.zeta_as * factor,
        }
    }
}

/// Draws every block i.i.d. `CN(0, σ²)` with the link's path-loss variance.
pub fn sample_channels<R: Rng + ?Sized>(
    config: &SystemConfig,
    geo: &Geometry,
    rng: &mut R,
) -> Result<ChannelRealization> {
    let variances = link_variances(geo)?;
    let (h_ab, h_aw) = sample_direct(config.m, &variances, rng);
    let (h_as, g_sb, g_sw) = sample_irs(config.m, config.n, &variances, rng);
    Ok(ChannelRealization {
        h_ab,
        h_aw,
        h_as,
        g_sb,
        g_sw,
        variances,
    })
}

/// Draws the direct links and the IRS blocks from separate streams, so the direct
/// part can be held fixed while the IRS size changes.
pub fn sample_channels_split<R1: Rng + ?Sized, R2: Rng + ?Sized>(
    config: &SystemConfig,
    geo: &Geometry,
    direct_rng: &mut R1,
    irs_rng: &mut R2,
) -> Result<ChannelRealization> {
    let variances = link_variances(geo)?;
    let (h_ab, h_aw) = sample_direct(config.m, &variances, direct_rng);
    let (h_as, g_sb, g_sw) = sample_irs(config.m, config.n, &variances, irs_rng);
    Ok(ChannelRealization {
        h_ab,
        h_aw,
        h_as,
        g_sb,
        g_sw,
        variances,
    })
}

fn sample_direct<R: Rng + ?Sized>(m: usize, var: &LinkVariances, rng: &mut R) -> (CVector, CVector) {
    let h_ab = complex_gaussian_vector(rng, m, var.ab);
    let h_aw = complex_gaussian_vector(rng, m, var.aw);
    (h_ab, h_aw)
}

fn sample_irs<R: Rng + ?Sized>(
    m: usize,
    n: usize,
    var: &LinkVariances,
    rng: &mut R,
) -> (CMatrix, CVector, CVector) {
    let h_as = complex_gaussian_matrix(rng, n, m, var.as_);
    let g_sb = complex_gaussian_vector(rng, n, var.sb);
    let g_sw = complex_gaussian_vector(rng, n, var.sw);
    (h_as, g_sb, g_sw)
}

/// Uniform draw from the closed ball of radius `radius` in `C^len` (Frobenius norm).
fn ball_sample<R: Rng + ?Sized>(rng: &mut R, len: usize, radius: f64) -> Vec<Complex64> {
    let mut dir: Vec<Complex64> = (0..len)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect();
    let norm = dir.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let u: f64 = rng.random();
    let r = radius * u.powf(1.0 / (2 * len) as f64);
    let scale = if norm > 0.0 { r / norm } else { 0.0 };
    for z in &mut dir {
        *z *= scale;
    }
    dir
}

/// Adds an error drawn uniformly from each link's norm ball; zero bounds leave links untouched.
pub fn perturb_csi<R: Rng + ?Sized>(
    true_channels: &ChannelRealization,
    bounds: &CsiErrorBounds,
    rng: &mut R,
) -> ChannelRealization {
    let mut est = true_channels.clone();
    if bounds.zeta_aw > 0.0 && !est.h_aw.is_empty() {
        let d = ball_sample(rng, est.h_aw.len(), bounds.zeta_aw);
        for (x, dx) in est.h_aw.iter_mut().zip(d) {
            *x += dx;
        }
    }
    if bounds.zeta_sw > 0.0 && !est.g_sw.is_empty() {
        let d = ball_sample(rng, est.g_sw.len(), bounds.zeta_sw);
        for (x, dx) in est.g_sw.iter_mut().zip(d) {
            *x += dx;
        }
    }
    if bounds.zeta_as > 0.0 && !est.h_as.is_empty() {
        let (rows, cols) = est.h_as.shape();
        let d = ball_sample(rng, rows * cols, bounds.zeta_as);
        for i in 0..rows {
            for j in 0..cols {
                est.h_as[(i, j)] += d[i * cols + j];
            }
        }
    }
    est
}

/// `h^H + v^H diag(g^H) H_as` as a row vector.
pub fn effective_channel(
    h_direct: &CVector,
    v: &CVector,
    g: &CVector,
    h_as: &CMatrix,
) -> Result<EffectiveChannel> {
    let m = h_direct.len();
    let n = v.len();
    if g.len() != n {
        return Err(invalid_arg(format!("phase vector has {n} entries but g has {}", g.len())));
    }
    if n > 0 && (h_as.nrows() != n || h_as.ncols() != m) {
        return Err(invalid_arg(format!(
            "H_as is {}x{}, expected {n}x{m}",
            h_as.nrows(),
            h_as.ncols()
        )));
    }
    let mut row = h_direct.adjoint();
    for i in 0..n {
        let c = (v[i] * g[i]).conj();
        for j in 0..m {
            row[j] += c * h_as[(i, j)];
        }
    }
    Ok(row)
}

/// `|row · w|²`.
pub fn received_power(row: &EffectiveChannel, w: &CVector) -> f64 {
    (row * w)[0].norm_sqr()
}
