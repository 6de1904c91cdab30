//! Sweeps behind each figure.
//!
//! Sweep points run in parallel; rows are assembled in grid order and
//! every random stream is keyed by the master seed and the point's
//! coordinates, so output does not depend on the worker count.

use std::sync::Arc;

use rayon::prelude::*;
use thzmc::analysis::{capacity_curve, conn_prob_mc, conn_prob_sc, ergodic_capacity, AnalysisOptions, CapacityProfile};
use thzmc::channel::{usable_bandwidth, AbsorptionTable, CapacityCurve, ChannelModel, LinkGeometry};
use thzmc::simulator::{
    apply_strategy, simulate_links, snapshot_capacity, snapshot_connection_probability, temporal_throughput,
    SnapshotConfig, TemporalConfig, Topology,
};
use thzmc::{MetricResult, StrategyKind, SystemParams};

use crate::config::{ExperimentConfig, MultiKind};
use crate::error::Result;
use crate::output::ResultRow;
use crate::seeds::derive_seed;

pub const SNAPSHOT: &str = "snapshot_simulation";
pub const TEMPORAL: &str = "temporal_simulation";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
}

impl Figure {
    pub const ALL: [Figure; 5] = [Figure::Fig3, Figure::Fig4, Figure::Fig5, Figure::Fig6, Figure::Fig7];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
            Figure::Fig6 => "fig6",
            Figure::Fig7 => "fig7",
        }
    }

    fn tag(self) -> u64 {
        match self {
            Figure::Fig3 => 3,
            Figure::Fig4 => 4,
            Figure::Fig5 => 5,
            Figure::Fig6 => 6,
            Figure::Fig7 => 7,
        }
    }
}

/// Capacities and gains of every strategy over random topologies at one
/// AP density, simulated with moving blockers.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalSweep {
    /// Single connectivity, per topology.
    pub sc: Vec<f64>,
    /// `(kind, per-topology throughput)`.
    pub multi: Vec<(StrategyKind, Vec<f64>)>,
}

pub struct Runner {
    cfg: ExperimentConfig,
    table: AbsorptionTable,
    base: SystemParams,
    grid: Vec<f64>,
}

impl Runner {
    pub fn new(cfg: ExperimentConfig, table: AbsorptionTable) -> Result<Self> {
        let base = cfg.system_params()?;
        let grid = cfg.lambda_grid();
        Ok(Self { cfg, table, base, grid })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.cfg
    }

    pub fn lambda_grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn params_at(&self, lambda_a: f64) -> SystemParams {
        self.base.with_lambda_a(lambda_a)
    }

    fn seed(&self) -> u64 {
        self.cfg.seed
    }

    fn opts(&self, path: &[u64]) -> AnalysisOptions {
        self.cfg.analysis_options().with_seed(derive_seed(self.seed(), path))
    }

    pub fn channel(&self, window: &str) -> Result<ChannelModel> {
        let (w, budget) = self.cfg.window_setup(window)?;
        let spectrum = self.table.window(&w)?;
        Ok(ChannelModel::new(spectrum, w, budget, self.base.height_diff())?.with_allocation(self.cfg.allocation()?))
    }

    /// Capacity curve covering every distance the sweep visits.
    pub fn curve(&self, window: &str) -> Result<CapacityCurve> {
        let lowest = self.grid.iter().copied().fold(f64::INFINITY, f64::min);
        let max_n = self.max_degree();
        Ok(capacity_curve(
            self.channel(window)?,
            &self.params_at(lowest),
            max_n,
            &self.cfg.analysis_options(),
        )?)
    }

    fn max_degree(&self) -> usize {
        self.cfg.sweep.degrees.iter().copied().max().unwrap_or(1)
    }

    fn multi_degrees(&self) -> Vec<usize> {
        self.cfg.sweep.degrees.iter().copied().filter(|&n| n >= 2).collect()
    }

    pub fn run(&self, fig: Figure) -> Result<Vec<ResultRow>> {
        match fig {
            Figure::Fig3 => self.fig3(),
            Figure::Fig4 => self.fig4(),
            Figure::Fig5 => self.fig5(),
            Figure::Fig6 => self.gains(Figure::Fig6, "W1"),
            Figure::Fig7 => self.gains(Figure::Fig7, "W2"),
        }
    }

    /// Path loss across the window and usable band edges versus path length.
    pub fn fig3(&self) -> Result<Vec<ResultRow>> {
        let name = Figure::Fig3.name();
        let f3 = &self.cfg.fig3;
        let mut distances: Vec<f64> = f3.distances_m.clone();
        let steps = (f3.curve_max_m / f3.curve_step_m).floor() as usize;
        distances.extend((1..=steps).map(|i| i as f64 * f3.curve_step_m));
        distances.sort_by(f64::total_cmp);
        distances.dedup();
        let mut rows = Vec::new();
        for window_name in &f3.windows {
            let w = window_name.to_ascii_uppercase();
            let model = self.channel(&w)?;
            let row =
                |metric: &str, value: f64| ResultRow::new(name, metric, value, "closed_form", self.seed()).window(&w);
            for &d in &f3.distances_m {
                let losses =
                    thzmc::channel::sub_band_losses(&LinkGeometry::new(d, 0.0)?, &model.spectrum, &model.window)?;
                for (k, loss) in losses.iter().enumerate() {
                    rows.push(
                        row("path_loss_db", 10.0 * loss.log10())
                            .distance(d)
                            .frequency(model.window.center(k)),
                    );
                }
            }
            for &d in &distances {
                let band = usable_bandwidth(&LinkGeometry::new(d, 0.0)?, &model.spectrum, &model.window)?;
                rows.push(row("band_lo_hz", band.lo).distance(d));
                rows.push(row("band_hi_hz", band.hi).distance(d));
                rows.push(row("usable_bandwidth_hz", band.width()).distance(d));
            }
        }
        Ok(rows)
    }

    /// Connection probability: analysis and snapshot simulation.
    pub fn fig4(&self) -> Result<Vec<ResultRow>> {
        let fig = Figure::Fig4;
        let degrees = self.cfg.sweep.degrees.clone();
        let max_n = self.max_degree();
        let per_point: Vec<Result<Vec<ResultRow>>> = self
            .grid
            .par_iter()
            .enumerate()
            .map(|(i, &lambda_a)| {
                let p = self.params_at(lambda_a);
                let mut rows = Vec::new();
                let row = |m: MetricResult, estimator: &str, n: usize| {
                    ResultRow::new(fig.name(), "connection_probability", m.value, estimator, self.seed())
                        .lambda(lambda_a)
                        .degree(n)
                        .strategy(if n == 1 { "SC" } else { "MC" })
                        .std_error(m.std_error)
                };
                for &n in &degrees {
                    let m = if n == 1 {
                        conn_prob_sc(&p)
                    } else {
                        conn_prob_mc(n, &p, &self.opts(&[fig.tag(), i as u64, n as u64]))
                    };
                    rows.push(row(m, m.estimator.as_str(), n));
                }
                let cfg = SnapshotConfig::new(
                    self.cfg.sampling.trials,
                    derive_seed(self.seed(), &[fig.tag(), i as u64, 0]),
                );
                let sim = snapshot_connection_probability(max_n, &p, &cfg)?;
                for &n in &degrees {
                    let e = sim[n - 1];
                    rows.push(row(
                        MetricResult {
                            value: e.value,
                            estimator: thzmc::Estimator::MonteCarlo,
                            std_error: e.std_error,
                        },
                        SNAPSHOT,
                        n,
                    ));
                }
                Ok(rows)
            })
            .collect();
        flatten(per_point)
    }

    /// Ergodic capacity of closest-LOS connectivity in W1.
    pub fn fig5(&self) -> Result<Vec<ResultRow>> {
        let fig = Figure::Fig5;
        let window = "W1";
        let curve = self.curve(window)?;
        let degrees = self.cfg.sweep.degrees.clone();
        let max_n = self.max_degree();
        let per_point: Vec<Result<Vec<ResultRow>>> = self
            .grid
            .par_iter()
            .enumerate()
            .map(|(i, &lambda_a)| {
                let p = self.params_at(lambda_a);
                let mut rows = Vec::new();
                let row = |kind: StrategyKind, value: f64, se: f64, estimator: &str| {
                    ResultRow::new(fig.name(), "ergodic_capacity_bps", value, estimator, self.seed())
                        .window(window)
                        .lambda(lambda_a)
                        .degree(kind.degree())
                        .strategy(kind.label())
                        .std_error(se)
                };
                for &n in &degrees {
                    let kind = if n == 1 {
                        StrategyKind::Sc
                    } else {
                        StrategyKind::ClosestMc(n)
                    };
                    let m = ergodic_capacity(kind, &p, &curve, &self.opts(&[fig.tag(), i as u64, n as u64]))?;
                    rows.push(row(kind, m.value, m.std_error, m.estimator.as_str()));
                }
                let cfg = SnapshotConfig::new(
                    self.cfg.sampling.trials,
                    derive_seed(self.seed(), &[fig.tag(), i as u64, 0]),
                );
                let sim = snapshot_capacity(max_n, &p, &curve, &cfg)?;
                for &n in &degrees {
                    let kind = if n == 1 {
                        StrategyKind::Sc
                    } else {
                        StrategyKind::ClosestMc(n)
                    };
                    rows.push(row(kind, sim[n - 1].value, sim[n - 1].std_error, SNAPSHOT));
                }
                Ok(rows)
            })
            .collect();
        flatten(per_point)
    }

    /// Capacity gains of both multi-connectivity strategies over single
    /// connectivity in `window`.
    pub fn gains(&self, fig: Figure, window: &str) -> Result<Vec<ResultRow>> {
        let curve = self.curve(window)?;
        let strategies = self.cfg.strategies()?;
        let degrees = self.multi_degrees();
        let per_point: Vec<Result<Vec<ResultRow>>> = self
            .grid
            .par_iter()
            .enumerate()
            .map(|(i, &lambda_a)| {
                let p = self.params_at(lambda_a);
                let base = |metric: &str, kind: StrategyKind, value: f64, se: f64, estimator: &str| {
                    ResultRow::new(fig.name(), metric, value, estimator, self.seed())
                        .window(window)
                        .lambda(lambda_a)
                        .degree(kind.degree())
                        .strategy(kind.label())
                        .std_error(se)
                };
                let mut rows = Vec::new();
                let sc = ergodic_capacity(StrategyKind::Sc, &p, &curve, &self.opts(&[fig.tag(), i as u64, 1]))?;
                rows.push(base(
                    "ergodic_capacity_bps",
                    StrategyKind::Sc,
                    sc.value,
                    0.0,
                    sc.estimator.as_str(),
                ));
                if !(sc.value > 0.0) {
                    return Err(thzmc::Error::ZeroBaseline.into());
                }
                for &n in &degrees {
                    for &s in &strategies {
                        let kind = s.with_degree(n);
                        let tag = if s == MultiKind::Closest { 10 } else { 20 };
                        let m = ergodic_capacity(kind, &p, &curve, &self.opts(&[fig.tag(), i as u64, tag + n as u64]))?;
                        let est = m.estimator.as_str();
                        rows.push(base("ergodic_capacity_bps", kind, m.value, m.std_error, est));
                        rows.push(base(
                            "capacity_gain",
                            kind,
                            m.value / sc.value - 1.0,
                            m.std_error / sc.value,
                            est,
                        ));
                    }
                }
                if !degrees.is_empty() {
                    let sweep = self.temporal_sweep(
                        &p,
                        &curve,
                        &strategies,
                        &degrees,
                        derive_seed(self.seed(), &[fig.tag(), i as u64, 0]),
                    )?;
                    let (sc_mean, sc_se) = mean_se(&sweep.sc);
                    rows.push(base("ergodic_capacity_bps", StrategyKind::Sc, sc_mean, sc_se, TEMPORAL));
                    for (kind, values) in &sweep.multi {
                        let (m, se) = mean_se(values);
                        rows.push(base("ergodic_capacity_bps", *kind, m, se, TEMPORAL));
                        let (r, rse) = ratio_se(values, &sweep.sc);
                        rows.push(base("capacity_gain", *kind, r - 1.0, rse, TEMPORAL));
                    }
                }
                Ok(rows)
            })
            .collect();
        let mut rows = flatten(per_point)?;
        rows.extend(argmax_rows(&rows));
        Ok(rows)
    }

    /// Time-average throughput of every strategy over random topologies
    /// of the `max(degrees)` closest APs; lower degrees use the closest
    /// links of the same traces.
    pub fn temporal_sweep<P: CapacityProfile + ?Sized>(
        &self,
        params: &SystemParams,
        profile: &P,
        strategies: &[MultiKind],
        degrees: &[usize],
        seed: u64,
    ) -> Result<TemporalSweep> {
        let max_n = degrees.iter().copied().max().unwrap_or(1);
        let s = &self.cfg.sampling;
        let kinds: Vec<StrategyKind> = degrees
            .iter()
            .flat_map(|&n| strategies.iter().map(move |m| m.with_degree(n)))
            .collect();
        let per_topology: Vec<Result<Vec<f64>>> = (0..s.temporal_topologies)
            .into_par_iter()
            .map(|k| {
                let topo = Topology::random(max_n, params, derive_seed(seed, &[k as u64, 0]))?;
                let cfg = TemporalConfig::new(s.temporal_duration_s, derive_seed(seed, &[k as u64, 1]));
                let links = Arc::new(simulate_links(&topo, params, &cfg)?);
                std::iter::once(StrategyKind::Sc)
                    .chain(kinds.iter().copied())
                    .map(|kind| Ok(temporal_throughput(&apply_strategy(kind, links.clone())?, profile).value))
                    .collect()
            })
            .collect();
        let per_topology = per_topology.into_iter().collect::<Result<Vec<_>>>()?;
        let column = |j: usize| per_topology.iter().map(|v| v[j]).collect::<Vec<f64>>();
        Ok(TemporalSweep {
            sc: column(0),
            multi: kinds.iter().enumerate().map(|(j, &k)| (k, column(j + 1))).collect(),
        })
    }
}

fn flatten(parts: Vec<Result<Vec<ResultRow>>>) -> Result<Vec<ResultRow>> {
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// Sample mean and its standard error.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::INFINITY);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Ratio of means `sum(a) / sum(b)` with a delta-method standard error.
pub fn ratio_se(a: &[f64], b: &[f64]) -> (f64, f64) {
    let (ma, _) = mean_se(a);
    let (mb, _) = mean_se(b);
    let r = ma / mb;
    let resid: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - r * y).collect();
    let (_, se) = mean_se(&resid);
    (r, se / mb)
}

/// For every analytic gain curve, the AP density of its largest value.
fn argmax_rows(rows: &[ResultRow]) -> Vec<ResultRow> {
    let mut keys: Vec<(String, usize)> = Vec::new();
    for r in rows {
        if r.metric == "capacity_gain" && r.estimator != TEMPORAL {
            let key = (r.strategy.clone(), r.degree.unwrap_or(0));
            if !keys.contains(&key) {
                keys.push(key);
            }
        }
    }
    keys.into_iter()
        .filter_map(|(strategy, degree)| {
            rows.iter()
                .filter(|r| {
                    r.metric == "capacity_gain"
                        && r.estimator != TEMPORAL
                        && r.strategy == strategy
                        && r.degree == Some(degree)
                })
                .max_by(|a, b| a.value.total_cmp(&b.value))
                .map(|best| ResultRow {
                    metric: "gain_argmax".into(),
                    ..best.clone()
                })
        })
        .collect()
}
