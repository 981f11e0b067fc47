use crate::channel::CsiErrorBounds;
use crate::config::{db_to_linear, BobSide, Geometry, Scenario, SystemConfig, ZMeanModel};
use crate::error::{invalid_config, Result};

use super::{SolverId, SweepParam, SweepSpec};

pub const PRESETS: [&str; 6] = ["fig3", "fig4", "fig5", "fig6", "fig7", "fig8"];

const DEFAULT_TRIALS: usize = 500;

fn exponents(geo: &mut Geometry, ab: f64, as_: f64, sb: f64, aw: f64, sw: f64) {
    geo.mu_ab = ab;
    geo.mu_as = as_;
    geo.mu_sb = sb;
    geo.mu_aw = aw;
    geo.mu_sw = sw;
}

/// Sweep, system parameters and geometry of a named figure setting.
pub fn figure_preset(name: &str) -> Result<(SweepSpec, Scenario)> {
    let mut config = SystemConfig {
        kappa: 0.01,
        rho: db_to_linear(3.0),
        ..SystemConfig::default()
    };
    let mut geo = Geometry::default();
    let mut bounds = CsiErrorBounds::default();
    let (param, values, solvers) = match name {
        "fig3" => {
            config.n = 10;
            config.m = 1;
            // The partial-CSI curves use σ²_sw + N σ²_as σ²_sw for Willie's mean gain.
            config.z_mean_model = ZMeanModel::MainText;
            geo.h_w = 5.0;
            geo.h_b = 3.0;
            exponents(&mut geo, 2.5, 2.0, 2.0, 2.5, 2.5);
            geo.d_ab_h = 40.0;
            geo.d_as_h = 40.0;
            (
                SweepParam::DAwH,
                vec![20.0, 50.0, 100.0, 200.0, 300.0, 400.0],
                vec![
                    SolverId::Direct,
                    SolverId::SinglePartial,
                    SolverId::DirectInst,
                    SolverId::SingleInst,
                ],
            )
        }
        "fig4" => {
            config.n = 4;
            config.m = 1;
            geo.h_b = 10.0;
            geo.h_w = 3.0;
            exponents(&mut geo, 2.0, 2.0, 4.5, 4.5, 1.5);
            geo.d_as_h = 60.0;
            // d_AW = 60 m slant distance.
            geo.d_aw_h = (60.0f64 * 60.0 - geo.h_w * geo.h_w).sqrt();
            (
                SweepParam::DAbH,
                vec![20.0, 40.0, 60.0, 80.0, 100.0],
                vec![SolverId::DirectInst, SolverId::SingleInst, SolverId::MultiRandom],
            )
        }
        "fig5" => {
            config.n = 10;
            config.m = 5;
            exponents(&mut geo, 2.0, 2.0, 4.0, 4.0, 2.0);
            geo.d_ab_h = 200.0;
            geo.h_b = 200.0;
            geo.h_w = 5.0;
            geo.bob_side = BobSide::Left;
            (
                SweepParam::DAsAwH,
                vec![10.0, 20.0, 40.0, 60.0, 80.0, 100.0],
                vec![SolverId::MultiDirect, SolverId::MultiOptimal],
            )
        }
        "fig6" | "fig7" => {
            config.rho = db_to_linear(5.0);
            config.m = 5;
            config.n = 20;
            geo.h_w = 5.0;
            geo.h_b = 20.0;
            exponents(&mut geo, 3.0, 2.0, 2.0, 4.0, 2.0);
            geo.d_aw_h = 40.0;
            geo.d_as_h = 40.0;
            geo.d_ab_h = 60.0;
            let solvers = vec![
                SolverId::MultiOptimal,
                SolverId::MultiMinWillie,
                SolverId::MultiZf,
                SolverId::MultiRandom,
                SolverId::MultiDirect,
            ];
            if name == "fig6" {
                (SweepParam::DAbH, vec![20.0, 40.0, 60.0, 80.0, 100.0], solvers)
            } else {
                (SweepParam::N, vec![4.0, 8.0, 16.0, 32.0], solvers)
            }
        }
        "fig8" => {
            config.m = 6;
            config.n = 20;
            exponents(&mut geo, 2.0, 3.0, 2.0, 3.0, 3.0);
            // Alice, IRS and Willie on an equilateral triangle of side 40 m.
            geo.d_as_h = 40.0;
            geo.d_aw_h = 20.0;
            geo.h_w = 20.0 * 3f64.sqrt();
            geo.d_ab_h = 60.0;
            geo.bob_side = BobSide::Right;
            geo.h_b = 10.0;
            bounds = CsiErrorBounds {
                zeta_aw: 5e-9,
                zeta_sw: 5e-6,
                zeta_as: 5e-6,
            };
            (
                SweepParam::HB,
                vec![5.0, 10.0, 20.0, 30.0, 40.0],
                vec![
                    SolverId::MultiOptimal,
                    SolverId::RobustAw,
                    SolverId::RobustSw,
                    SolverId::RobustAs,
                    SolverId::RobustBoth,
                ],
            )
        }
        _ => {
            return Err(invalid_config(format!(
                "unknown preset `{name}` (expected one of {})",
                PRESETS.join(", ")
            )))
        }
    };
    let scenario = Scenario {
        config,
        geometry: geo,
        bounds,
    };
    scenario.validate()?;
    Ok((
        SweepSpec {
            param,
            values,
            trials: DEFAULT_TRIALS,
            solvers,
            preset: Some(name.to_string()),
        },
        scenario,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::link_distances;

    #[test]
    fn every_preset_is_valid() {
        for name in PRESETS {
            let (spec, sc) = figure_preset(name).unwrap();
            spec.validate().unwrap();
            for &v in &spec.values {
                spec.param.apply(&sc, v).unwrap();
            }
        }
        assert!(figure_preset("fig9").is_err());
    }

    #[test]
    fn fig8_triangle_and_bounds() {
        let (_, sc) = figure_preset("fig8").unwrap();
        let [_, aw, as_, sb, sw] = link_distances(&sc.geometry);
        for d in [aw, as_, sw] {
            assert!((d - 40.0).abs() < 1e-12);
        }
        assert!((sb - (400.0f64 + 100.0).sqrt()).abs() < 1e-12);
        assert_eq!(sc.bounds.zeta_aw, 5e-9);
        assert_eq!((sc.config.m, sc.config.n), (6, 20));
    }

    #[test]
    fn fig5_and_fig3_captions() {
        let (spec, sc) = figure_preset("fig5").unwrap();
        assert_eq!(sc.geometry.bob_side, BobSide::Left);
        assert_eq!((sc.geometry.d_ab_h, sc.geometry.h_b), (200.0, 200.0));
        assert_eq!((sc.config.m, sc.config.n), (5, 10));
        // Willie stays h_W from the IRS while both move.
        let moved = spec.param.apply(&sc, 70.0).unwrap();
        assert!((link_distances(&moved.geometry)[4] - 5.0).abs() < 1e-12);
        let (_, sc) = figure_preset("fig3").unwrap();
        assert_eq!((sc.config.kappa, sc.config.n), (0.01, 10));
        assert_eq!((sc.geometry.h_w, sc.geometry.h_b), (5.0, 3.0));
    }
}
