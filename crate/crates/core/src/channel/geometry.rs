use crate::config::{BobSide, Geometry};
use crate::error::{invalid_arg, Result};

/// Log-distance path loss as a linear power gain.
pub fn path_loss_gain(d: f64, mu: f64, geo: &Geometry) -> Result<f64> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(invalid_arg(format!("distance must be positive, got {d}")));
    }
    let db = geo.pl0_db - 10.0 * mu * (d / geo.d0).log10();
    Ok(10f64.powf(db / 10.0))
}

/// Per-link variances (linear power gains).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkVariances {
    pub ab: f64,
    pub aw: f64,
    pub as_: f64,
    pub sb: f64,
    pub sw: f64,
}

/// Euclidean link lengths in the order `[ab, aw, as, sb, sw]`.
///
/// Alice sits at the origin and the IRS on the ground line at `d_as_h`. Willie is
/// offset `h_w` off the line at horizontal distance `d_aw_h`; Bob likewise with `h_b`.
pub fn link_distances(geo: &Geometry) -> [f64; 5] {
    let sb_h = match geo.bob_side {
        BobSide::Right => (geo.d_ab_h - geo.d_as_h).abs(),
        BobSide::Left => geo.d_ab_h + geo.d_as_h,
    };
    [
        geo.d_ab_h.hypot(geo.h_b),
        geo.d_aw_h.hypot(geo.h_w),
        geo.d_as_h,
        sb_h.hypot(geo.h_b),
        (geo.d_aw_h - geo.d_as_h).hypot(geo.h_w),
    ]
}

pub fn link_variances(geo: &Geometry) -> Result<LinkVariances> {
    let [ab, aw, as_, sb, sw] = link_distances(geo);
    Ok(LinkVariances {
        ab: path_loss_gain(ab, geo.mu_ab, geo)?,
        aw: path_loss_gain(aw, geo.mu_aw, geo)?,
        as_: path_loss_gain(as_, geo.mu_as, geo)?,
        sb: path_loss_gain(sb, geo.mu_sb, geo)?,
        sw: path_loss_gain(sw, geo.mu_sw, geo)?,
    })
}
