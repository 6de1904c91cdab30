//! Experiment configuration.
//!
//! Files are TOML: top-level `seed`, then sections `[system]`, `[sweep]`,
//! `[link]`, `[window.w1]`, `[window.w2]`, `[fig3]` and `[sampling]`.
//! Every key is optional; an empty file gives the indoor reference
//! scenario. Powers and gains are read in dBm/dBi and converted here.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thzmc::analysis::AnalysisOptions;
use thzmc::channel::{LinkBudget, PowerAllocation, TransmissionWindow};
use thzmc::quadrature::QuadOptions;
use thzmc::SystemParams;

use crate::error::{io_err, CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub system: SystemConfig,
    pub sweep: SweepConfig,
    pub link: LinkConfig,
    pub window: WindowsConfig,
    pub fig3: Fig3Config,
    pub sampling: SamplingConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            system: SystemConfig::default(),
            sweep: SweepConfig::default(),
            link: LinkConfig::default(),
            window: WindowsConfig::default(),
            fig3: Fig3Config::default(),
            sampling: SamplingConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemConfig {
    pub ap_height_m: f64,
    pub ue_height_m: f64,
    pub blocker_height_m: f64,
    pub blocker_radius_m: f64,
    /// Blockers per square metre.
    pub blocker_density: f64,
    pub blocker_speed_mps: f64,
    /// Angle hidden behind the user's body.
    pub self_blockage_deg: f64,
    pub min_distance_m: f64,
}

impl Default for SystemConfig {
    fn default() -> Self {
        let p = SystemParams::<f64>::default();
        Self {
            ap_height_m: p.h_a,
            ue_height_m: p.h_u,
            blocker_height_m: p.h_b,
            blocker_radius_m: p.r_b,
            blocker_density: p.lambda_b,
            blocker_speed_mps: p.v_b,
            self_blockage_deg: 360.0 - p.omega.to_degrees(),
            min_distance_m: p.r0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// Explicit AP densities; when absent a log grid is built from the
    /// three keys below.
    pub lambda_a: Option<Vec<f64>>,
    pub lambda_a_min: f64,
    pub lambda_a_max: f64,
    pub lambda_a_points: usize,
    pub degrees: Vec<usize>,
    /// Any of `C-MC`, `R-MC`.
    pub strategies: Vec<String>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            lambda_a: None,
            lambda_a_min: 1e-3,
            lambda_a_max: 2e-2,
            lambda_a_points: 10,
            degrees: vec![1, 2, 3, 4],
            strategies: vec!["C-MC".into(), "R-MC".into()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkConfig {
    pub ap_gain_dbi: f64,
    pub ue_gain_dbi: f64,
    pub noise_dbm_per_hz: f64,
    /// `uniform` or `water-filling`.
    pub allocation: String,
}

impl Default for LinkConfig {
    fn default() -> Self {
        Self {
            ap_gain_dbi: 25.0,
            ue_gain_dbi: 25.0,
            noise_dbm_per_hz: -174.0,
            allocation: "uniform".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WindowsConfig {
    pub w1: WindowConfig,
    pub w2: WindowConfig,
}

impl Default for WindowsConfig {
    fn default() -> Self {
        let w1 = TransmissionWindow::<f64>::w1();
        let w2 = TransmissionWindow::<f64>::w2();
        Self {
            w1: WindowConfig {
                lo_hz: w1.lo,
                hi_hz: w1.hi,
                sub_band_hz: w1.delta_f,
                power_dbm: 20.0,
            },
            w2: WindowConfig {
                lo_hz: w2.lo,
                hi_hz: w2.hi,
                sub_band_hz: w2.delta_f,
                power_dbm: 30.0,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    pub lo_hz: f64,
    pub hi_hz: f64,
    pub sub_band_hz: f64,
    pub power_dbm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig3Config {
    pub windows: Vec<String>,
    /// Distances whose path-loss curves are written out.
    pub distances_m: Vec<f64>,
    pub curve_max_m: f64,
    pub curve_step_m: f64,
}

impl Default for Fig3Config {
    fn default() -> Self {
        Self {
            windows: vec!["W1".into()],
            distances_m: vec![1.0, 5.0, 10.0],
            curve_max_m: 30.0,
            curve_step_m: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingConfig {
    /// Snapshot drops per sweep point.
    pub trials: usize,
    /// Monte Carlo samples for analytic values above two APs.
    pub samples: usize,
    pub tail: f64,
    pub rel_tol: f64,
    /// Random topologies per point for the moving-blocker simulation.
    pub temporal_topologies: usize,
    pub temporal_duration_s: f64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self {
            trials: 100_000,
            samples: 1_000_000,
            tail: 1e-9,
            rel_tol: 1e-9,
            temporal_topologies: 32,
            temporal_duration_s: 1_000.0,
        }
    }
}

/// Multi-connectivity flavours a sweep can include.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultiKind {
    Closest,
    Reactive,
}

impl MultiKind {
    pub fn with_degree(self, n: usize) -> thzmc::StrategyKind {
        match self {
            MultiKind::Closest => thzmc::StrategyKind::ClosestMc(n),
            MultiKind::Reactive => thzmc::StrategyKind::ReactiveMc(n),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::ConfigParse { source, .. } => CliError::ConfigParse {
                path: path.to_path_buf(),
                source,
            },
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|source| CliError::ConfigParse {
            path: "<inline>".into(),
            source,
        })?;
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(CliError::InvalidConfig(msg));
        self.system_params()?;
        let grid = self.lambda_grid();
        if grid.is_empty() || grid.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
            return bad(format!("AP density grid must be non-empty and positive, got {grid:?}"));
        }
        if self.sweep.degrees.is_empty() || self.sweep.degrees.contains(&0) {
            return bad("degrees must be a non-empty list of positive integers".into());
        }
        self.strategies()?;
        self.allocation()?;
        for name in &self.fig3.windows {
            self.window_setup(name)?;
        }
        if self.fig3.distances_m.is_empty() || !(self.fig3.curve_step_m > 0.0) {
            return bad("fig3 needs distances and a positive curve step".into());
        }
        let s = &self.sampling;
        if s.trials == 0 || s.samples == 0 || s.temporal_topologies < 2 || !(s.temporal_duration_s > 0.0) {
            return bad("sampling counts must be positive (at least two topologies)".into());
        }
        Ok(())
    }

    pub fn system_params(&self) -> Result<SystemParams> {
        let s = &self.system;
        let p = SystemParams {
            h_a: s.ap_height_m,
            h_u: s.ue_height_m,
            h_b: s.blocker_height_m,
            r_b: s.blocker_radius_m,
            lambda_b: s.blocker_density,
            lambda_a: self.lambda_grid().first().copied().unwrap_or(1e-2),
            v_b: s.blocker_speed_mps,
            omega: (360.0 - s.self_blockage_deg).to_radians(),
            r0: s.min_distance_m,
        };
        p.validate()?;
        Ok(p)
    }

    /// AP densities of the sweep, ascending as given.
    pub fn lambda_grid(&self) -> Vec<f64> {
        if let Some(explicit) = &self.sweep.lambda_a {
            return explicit.clone();
        }
        log_grid(
            self.sweep.lambda_a_min,
            self.sweep.lambda_a_max,
            self.sweep.lambda_a_points,
        )
    }

    pub fn strategies(&self) -> Result<Vec<MultiKind>> {
        self.sweep
            .strategies
            .iter()
            .map(|s| match s.to_ascii_uppercase().as_str() {
                "C-MC" | "CMC" => Ok(MultiKind::Closest),
                "R-MC" | "RMC" => Ok(MultiKind::Reactive),
                other => Err(CliError::InvalidConfig(format!("unknown strategy `{other}`"))),
            })
            .collect()
    }

    pub fn allocation(&self) -> Result<PowerAllocation> {
        match self.link.allocation.as_str() {
            "uniform" => Ok(PowerAllocation::Uniform),
            "water-filling" | "waterfilling" => Ok(PowerAllocation::WaterFilling),
            other => Err(CliError::InvalidConfig(format!("unknown power allocation `{other}`"))),
        }
    }

    /// Window and link budget for `W1` or `W2`.
    pub fn window_setup(&self, name: &str) -> Result<(TransmissionWindow, LinkBudget)> {
        let w = match name.to_ascii_uppercase().as_str() {
            "W1" => &self.window.w1,
            "W2" => &self.window.w2,
            other => return Err(CliError::InvalidConfig(format!("unknown window `{other}`"))),
        };
        let window = TransmissionWindow::new(w.lo_hz, w.hi_hz, w.sub_band_hz)?;
        let l = &self.link;
        let budget = LinkBudget::from_db(w.power_dbm, l.ap_gain_dbi, l.ue_gain_dbi, l.noise_dbm_per_hz)?;
        Ok((window, budget))
    }

    pub fn analysis_options(&self) -> AnalysisOptions {
        AnalysisOptions {
            quad: QuadOptions::with_rel_tol(self.sampling.rel_tol),
            tail: self.sampling.tail,
            samples: self.sampling.samples,
            seed: self.seed,
        }
    }
}

/// `points` values from `lo` to `hi` evenly spaced in log scale.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let ratio = (hi / lo).ln();
            (0..points)
                .map(|i| {
                    if i == points - 1 {
                        hi
                    } else {
                        lo * (ratio * i as f64 / (points - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_reference_scenario() {
        let cfg = ExperimentConfig::parse("").unwrap();
        let p = cfg.system_params().unwrap();
        let d = SystemParams::<f64>::default();
        assert_eq!(p.h_a, d.h_a);
        assert_eq!(p.r_b, d.r_b);
        assert!((p.omega - d.omega).abs() < 1e-15);
        let grid = cfg.lambda_grid();
        assert_eq!(grid.len(), 10);
        assert_eq!(grid[0], 1e-3);
        assert_eq!(grid[9], 2e-2);
        assert!(grid.windows(2).all(|w| w[1] > w[0]));
        let ratio = grid[1] / grid[0];
        assert!((grid[5] / grid[4] - ratio).abs() < 1e-12);
    }

    #[test]
    fn decibel_inputs_become_linear() {
        let cfg = ExperimentConfig::parse(
            "[link]\nap_gain_dbi = 20\nue_gain_dbi = 10\nnoise_dbm_per_hz = -170\n[window.w2]\nlo_hz = 3.34e12\nhi_hz = 3.49e12\nsub_band_hz = 1e9\npower_dbm = 0\n",
        )
        .unwrap();
        let (_, b) = cfg.window_setup("W2").unwrap();
        assert!((b.p_t_total - 1e-3).abs() < 1e-15);
        assert!((b.g_ap - 100.0).abs() < 1e-12);
        assert!((b.g_ue - 10.0).abs() < 1e-12);
        assert!((b.n0_density - 1e-20).abs() < 1e-32);
    }

    #[test]
    fn explicit_grid_and_sections() {
        let cfg = ExperimentConfig::parse(
            "seed = 9\n[sweep]\nlambda_a = [0.002, 0.004]\ndegrees = [2]\nstrategies = [\"R-MC\"]\n[system]\nblocker_density = 0.1\nself_blockage_deg = 90\n",
        )
        .unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.lambda_grid(), vec![0.002, 0.004]);
        assert_eq!(cfg.strategies().unwrap(), vec![MultiKind::Reactive]);
        let p = cfg.system_params().unwrap();
        assert_eq!(p.lambda_b, 0.1);
        assert!((p.omega - 1.5 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ExperimentConfig::parse("[system]\nap_height_m = 1.0\n").is_err());
        assert!(ExperimentConfig::parse("[sweep]\nstrategies = [\"X\"]\n").is_err());
        assert!(ExperimentConfig::parse("[sweep]\nlambda_a = []\n").is_err());
        assert!(ExperimentConfig::parse("unknown = 1\n").is_err());
        assert!(ExperimentConfig::parse("[link]\nallocation = \"greedy\"\n").is_err());
    }
}
