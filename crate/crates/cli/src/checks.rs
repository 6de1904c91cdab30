//! Analytic-versus-simulation cross-checks, one report per acceptance
//! criterion. `thzmc validate` and the acceptance tests both run these.

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::{Duration, Instant};

use thzmc::analysis::{
    build_switch_chain, capacity_curve, capacity_gain, closest_shares, conditional_capacity, conn_prob_mc,
    conn_prob_sc, conn_prob_sc_quadrature, reactive_shares, AnalysisOptions,
};
use thzmc::blockage::{los_probability, mean_los_duration, mean_nlos_duration};
use thzmc::channel::{usable_bandwidth, AbsorptionTable, ChannelModel, LinkBudget, LinkGeometry, TransmissionWindow};
use thzmc::distances::{joint_pdf, pdf_closest, truncation_radius};
use thzmc::quadrature::{integrate, QuadOptions};
use thzmc::simulator::{
    apply_strategy, simulate_links, snapshot_connection_probability, temporal_throughput, ApSite, BlockerSharing,
    SimEstimate, SnapshotConfig, TemporalConfig, Topology,
};
use thzmc::{StrategyKind, SystemParams};

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::figures::Runner;
use crate::output::to_csv_bytes;
use crate::seeds::derive_seed;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Criterion {
    pub number: u8,
    pub title: &'static str,
    pub checks: Vec<Check>,
    /// Informational lines that do not affect the verdict.
    pub notes: Vec<String>,
    pub elapsed: Duration,
}

impl Criterion {
    fn new(number: u8, title: &'static str) -> Self {
        Self {
            number,
            title,
            checks: Vec::new(),
            notes: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    fn runtime_limit(&mut self, started: Instant, limit_s: f64) {
        self.elapsed = started.elapsed();
        let t = self.elapsed.as_secs_f64();
        self.check(format!("runtime < {limit_s} s"), t < limit_s, format!("{t:.2} s"));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Named check, if present.
    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn verdict_line(&self) -> String {
        format!(
            "criterion {} {}: {} ({:.1} s)",
            self.number,
            if self.passed() { "PASS" } else { "FAIL" },
            self.title,
            self.elapsed.as_secs_f64()
        )
    }

    pub fn report(&self) -> String {
        let mut out = self.verdict_line();
        out.push('\n');
        for c in &self.checks {
            let _ = writeln!(
                out,
                "    [{}] {}: {}",
                if c.passed { "ok" } else { "FAIL" },
                c.name,
                c.detail
            );
        }
        for n in &self.notes {
            let _ = writeln!(out, "    note: {n}");
        }
        out
    }
}

/// Sample sizes and inputs of the suite.
#[derive(Debug, Clone)]
pub struct Settings {
    pub seed: u64,
    pub snapshot_trials: usize,
    pub samples: usize,
    pub temporal_duration: f64,
    pub table: AbsorptionTable,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            seed: 42,
            snapshot_trials: 100_000,
            samples: 1_000_000,
            temporal_duration: 1e5,
            table: AbsorptionTable::bundled(),
        }
    }
}

impl Settings {
    fn opts(&self, path: &[u64]) -> AnalysisOptions {
        AnalysisOptions::default()
            .with_samples(self.samples)
            .with_seed(derive_seed(self.seed, path))
    }

    fn is_bundled_spectrum(&self) -> bool {
        self.table == AbsorptionTable::bundled()
    }
}

fn unit(seed: u64) -> f64 {
    (seed >> 11) as f64 / (1u64 << 53) as f64
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// `|a - b|` in units of the combined standard error.
fn z_between(sim: &SimEstimate, value: f64, value_se: f64) -> f64 {
    let diff = (sim.value - value).abs();
    if diff == 0.0 {
        return 0.0;
    }
    diff / (sim.std_error.powi(2) + value_se.powi(2)).sqrt()
}

pub fn criterion_1(_s: &Settings) -> Criterion {
    let started = Instant::now();
    let mut c = Criterion::new(1, "closed form against quadrature");
    let opts = AnalysisOptions::default();
    let mut worst: f64 = 0.0;
    let mut at = (0.0, 0.0);
    for i in 0..5 {
        for j in 0..5 {
            let lambda_a = 1e-3 * 20f64.powf(f64::from(i) / 4.0);
            let lambda_b = 0.05 * 10f64.powf(f64::from(j) / 4.0);
            let p = SystemParams::default().with_lambda_a(lambda_a).with_lambda_b(lambda_b);
            let e = rel(conn_prob_sc_quadrature(&p, &opts).value, conn_prob_sc(&p).value);
            if e > worst {
                worst = e;
                at = (lambda_a, lambda_b);
            }
        }
    }
    c.check(
        "25 grid points agree to 1e-6 relative",
        worst <= 1e-6,
        format!("worst {worst:.2e} at lambda_a = {:.3e}, lambda_b = {:.3}", at.0, at.1),
    );
    c.runtime_limit(started, 5.0);
    c
}

pub fn criterion_2(_s: &Settings) -> Criterion {
    let started = Instant::now();
    let mut c = Criterion::new(2, "renewal identity");
    let p = SystemParams::default();
    let mut worst: f64 = 0.0;
    for i in 1..=30 {
        let x = f64::from(i);
        let t_los = mean_los_duration(x, &p).mean().expect("blockers present");
        let t_nlos = mean_nlos_duration(x, &p).expect("blockers present");
        worst = worst.max(rel(los_probability(x, &p) * (t_los + t_nlos), t_los));
    }
    c.check("x = 1..30 m to 1e-12", worst <= 1e-12, format!("worst {worst:.2e}"));
    c.runtime_limit(started, 1.0);
    c
}

pub fn criterion_3(s: &Settings) -> Criterion {
    let started = Instant::now();
    let mut c = Criterion::new(3, "normalization suite");
    let quad = QuadOptions::with_rel_tol(1e-10);
    let mut worst_1: f64 = 0.0;
    let mut worst_2: f64 = 0.0;
    for lambda_a in [1e-3, 5e-3, 1e-2, 2e-2] {
        let p = SystemParams::default().with_lambda_a(lambda_a);
        let hi = truncation_radius(&p, 1e-13);
        let one = integrate(|x| pdf_closest(x, &p), p.r0, hi, &quad).value;
        worst_1 = worst_1.max((one - 1.0).abs());
        let span = 1e13f64.ln() / (p.omega * p.lambda_a / 2.0);
        let two = integrate(
            |x1| {
                integrate(
                    |x2| joint_pdf(&[x1, x2], &p).unwrap_or(0.0),
                    x1,
                    (x1 * x1 + span).sqrt(),
                    &quad,
                )
                .value
            },
            p.r0,
            hi,
            &quad,
        )
        .value;
        worst_2 = worst_2.max((two - 1.0).abs());
    }
    c.check(
        "closest-distance density integrates to 1 +- 1e-6",
        worst_1 <= 1e-6,
        format!("worst {worst_1:.2e}"),
    );
    c.check(
        "two-AP joint density integrates to 1 +- 1e-6",
        worst_2 <= 1e-6,
        format!("worst {worst_2:.2e}"),
    );

    let mut sum_err: f64 = 0.0;
    let mut chain_err: f64 = 0.0;
    let mut negative = false;
    let mut failures = 0;
    for k in 0..1000u64 {
        let seed = derive_seed(s.seed, &[3, k]);
        let n = 1 + (seed % 6) as usize;
        let lambda_b = 0.01 + 0.99 * unit(derive_seed(seed, &[1]));
        let lambda_a = 1e-3 * 20f64.powf(unit(derive_seed(seed, &[2])));
        let p = SystemParams::default().with_lambda_a(lambda_a).with_lambda_b(lambda_b);
        let Ok(topo) = Topology::random(n, &p, seed) else {
            failures += 1;
            continue;
        };
        let xs = topo.distances();
        for g in [closest_shares(&xs, &p), reactive_shares(&xs, &p)] {
            sum_err = sum_err.max((g.iter().sum::<f64>() - 1.0).abs());
            negative |= g.iter().any(|&v| v < 0.0);
        }
        if n >= 2 {
            match build_switch_chain(&xs, &p) {
                Ok(chain) => {
                    for i in 0..n {
                        for j in 0..n {
                            let ud: f64 = (0..n).map(|m| chain.u(i, m) * chain.d(m, j)).sum();
                            let eye = if i == j { 1.0 } else { 0.0 };
                            chain_err = chain_err.max((ud - (chain.d(i, j) - eye)).abs());
                        }
                    }
                }
                Err(_) => failures += 1,
            }
        }
    }
    c.check(
        "weights of 1000 random topologies sum to 1 +- 1e-12",
        sum_err <= 1e-12 && !negative && failures == 0,
        format!("worst {sum_err:.2e}, negative weights: {negative}, failed draws: {failures}"),
    );
    c.check(
        "U D = D - I to 1e-10",
        chain_err <= 1e-10,
        format!("worst {chain_err:.2e}"),
    );
    c.runtime_limit(started, 30.0);
    c
}

pub fn criterion_4(s: &Settings) -> Result<Criterion> {
    let started = Instant::now();
    let mut c = Criterion::new(4, "snapshot simulator against connection probability");
    for (k, lambda_a) in [5e-3, 1e-2].into_iter().enumerate() {
        let p = SystemParams::default().with_lambda_a(lambda_a);
        let sim = snapshot_connection_probability(
            4,
            &p,
            &SnapshotConfig::new(s.snapshot_trials, derive_seed(s.seed, &[4, k as u64])),
        )?;
        for n in 1..=4 {
            let a = conn_prob_mc(n, &p, &s.opts(&[4, k as u64, n as u64]));
            let z = z_between(&sim[n - 1], a.value, a.std_error);
            c.check(
                format!("lambda_a = {lambda_a:.0e}, N = {n} within 3 SE"),
                z <= 3.0,
                format!(
                    "analysis {:.5}, simulation {:.5} +- {:.5}, z = {z:.1}",
                    a.value,
                    sim[n - 1].value,
                    sim[n - 1].std_error
                ),
            );
        }
    }
    let p = SystemParams::default().with_lambda_a(1.5e-2);
    let sim = snapshot_connection_probability(
        4,
        &p,
        &SnapshotConfig::new(s.snapshot_trials, derive_seed(s.seed, &[4, 2])),
    )?;
    for n in 2..=4 {
        let a = conn_prob_mc(n, &p, &s.opts(&[4, 2, n as u64]));
        c.check(
            format!("lambda_a = 1.5e-2, N = {n}: analysis >= simulation"),
            a.value >= sim[n - 1].value,
            format!(
                "analysis {:.5}, simulation {:.5} +- {:.5}",
                a.value,
                sim[n - 1].value,
                sim[n - 1].std_error
            ),
        );
    }
    // same drops with one blocker set per link, the independence the analysis assumes
    for (k, lambda_a) in [5e-3, 1e-2].into_iter().enumerate() {
        let p = SystemParams::default().with_lambda_a(lambda_a);
        let cfg = SnapshotConfig {
            sharing: BlockerSharing::PerLink,
            ..SnapshotConfig::new(s.snapshot_trials, derive_seed(s.seed, &[4, k as u64]))
        };
        let sim = snapshot_connection_probability(4, &p, &cfg)?;
        let zs: Vec<String> = (1..=4)
            .map(|n| {
                let a = conn_prob_mc(n, &p, &s.opts(&[4, k as u64, n as u64]));
                format!("{:.1}", z_between(&sim[n - 1], a.value, a.std_error))
            })
            .collect();
        c.note(format!(
            "independent blockers per link, lambda_a = {lambda_a:.0e}: z for N = 1..4 = [{}]",
            zs.join(", ")
        ));
    }
    c.runtime_limit(started, 300.0);
    Ok(c)
}

/// Three APs at 3, 6 and 9 m, 60 degrees apart.
pub fn reference_topology(p: &SystemParams) -> Result<Topology> {
    let third = std::f64::consts::FRAC_PI_3;
    Ok(Topology::new(
        vec![
            ApSite {
                distance: 3.0,
                azimuth: -third,
            },
            ApSite {
                distance: 6.0,
                azimuth: 0.0,
            },
            ApSite {
                distance: 9.0,
                azimuth: third,
            },
        ],
        p,
    )?)
}

fn w1_model(table: &AbsorptionTable, p: &SystemParams) -> Result<ChannelModel> {
    let w = TransmissionWindow::w1();
    Ok(ChannelModel::new(
        table.window(&w)?,
        w,
        LinkBudget::indoor(20.0),
        p.height_diff(),
    )?)
}

pub fn criterion_5(s: &Settings) -> Result<Criterion> {
    let started = Instant::now();
    let mut c = Criterion::new(5, "temporal simulator against switching weights");
    let p = SystemParams::default();
    let topo = reference_topology(&p)?;
    let xs = topo.distances();
    let curve = capacity_curve(w1_model(&s.table, &p)?, &p, 3, &AnalysisOptions::default())?;
    let weights = [
        (StrategyKind::ClosestMc(3), closest_shares(&xs, &p)),
        (StrategyKind::ReactiveMc(3), reactive_shares(&xs, &p)),
    ];
    for sharing in [BlockerSharing::Shared, BlockerSharing::PerLink] {
        let cfg = TemporalConfig {
            sharing,
            ..TemporalConfig::new(s.temporal_duration, derive_seed(s.seed, &[5]))
        };
        let links = Arc::new(simulate_links(&topo, &p, &cfg)?);
        for (kind, gamma) in &weights {
            let trace = apply_strategy(*kind, links.clone())?;
            let shares = trace.connected_shares();
            let share_z: Vec<f64> = shares.iter().zip(gamma).map(|(e, g)| e.z_score(*g)).collect();
            let ok = share_z.iter().all(|z| *z <= 3.0);
            let detail = format!(
                "simulated [{}], weights [{}], z [{}]",
                join(shares.iter().map(|e| e.value), 4),
                join(gamma.iter().copied(), 4),
                join(share_z.iter().copied(), 1)
            );
            let thr = temporal_throughput(&trace, &curve);
            let target = conditional_capacity(*kind, &xs, &p, &curve);
            let z = thr.z_score(target);
            let thr_detail = format!(
                "simulated {:.4e} +- {:.2e} bit/s, analysis {target:.4e} bit/s, z = {z:.1}",
                thr.value, thr.std_error
            );
            match sharing {
                BlockerSharing::Shared => {
                    c.check(
                        format!("{} connected-time shares within 3 SE", kind.label()),
                        ok,
                        detail,
                    );
                    c.check(format!("{} throughput within 3 SE", kind.label()), z <= 3.0, thr_detail);
                }
                BlockerSharing::PerLink => {
                    c.note(format!(
                        "independent blockers per link, {} shares: {detail}",
                        kind.label()
                    ));
                    c.note(format!(
                        "independent blockers per link, {} throughput: {thr_detail}",
                        kind.label()
                    ));
                }
            }
        }
    }
    c.note(format!("simulated time {:.0} s per run", s.temporal_duration));
    c.runtime_limit(started, 300.0);
    Ok(c)
}

fn join(values: impl Iterator<Item = f64>, digits: usize) -> String {
    values.map(|v| format!("{v:.digits$}")).collect::<Vec<_>>().join(", ")
}

/// Analytic gain curves: `gains[window][strategy][degree - 2][lambda index]`.
type GainTable = Vec<Vec<Vec<Vec<f64>>>>;

pub fn criterion_6(s: &Settings) -> Result<Criterion> {
    let started = Instant::now();
    let mut c = Criterion::new(6, "reproduction of reported numbers and trends");
    let base = SystemParams::default();

    let mut shrinking = true;
    let mut widths_at = Vec::new();
    for w in [TransmissionWindow::w1(), TransmissionWindow::w2()] {
        let spec = s.table.window(&w)?;
        let mut prev = f64::INFINITY;
        let mut first = 0.0;
        for i in 2..=60 {
            let d = f64::from(i) * 0.5;
            let width = usable_bandwidth(&LinkGeometry::new(d, 0.0)?, &spec, &w)?.width();
            shrinking &= width <= prev;
            if i == 2 {
                first = width;
            }
            prev = width;
        }
        shrinking &= prev < first;
        widths_at.push((first, prev));
    }
    c.check(
        "usable bandwidth shrinks with distance in both windows",
        shrinking,
        format!(
            "W1 {:.0} -> {:.0} GHz, W2 {:.0} -> {:.0} GHz over 1-30 m",
            widths_at[0].0 / 1e9,
            widths_at[0].1 / 1e9,
            widths_at[1].0 / 1e9,
            widths_at[1].1 / 1e9
        ),
    );

    let p15 = base.with_lambda_a(1.5e-2);
    let conn = conn_prob_mc(2, &p15, &s.opts(&[6, 0]));
    c.check(
        "connection probability at lambda_a = 1.5e-2, N = 2 is 0.95 +- 0.02",
        (conn.value - 0.95).abs() <= 0.02,
        format!("{:.4}", conn.value),
    );

    let w1 = TransmissionWindow::w1();
    let spec1 = s.table.window(&w1)?;
    let bw = |d: f64| -> Result<f64> { Ok(usable_bandwidth(&LinkGeometry::new(d, 0.0)?, &spec1, &w1)?.width()) };
    let (b1, b10) = (bw(1.0)?, bw(10.0)?);
    let model = w1_model(&s.table, &p15)?;
    let curve15 = capacity_curve(model, &p15, 2, &AnalysisOptions::default())?;
    let gc = capacity_gain(StrategyKind::ClosestMc(2), &p15, &curve15, &s.opts(&[6, 1]))?.value;
    let gr = capacity_gain(StrategyKind::ReactiveMc(2), &p15, &curve15, &s.opts(&[6, 2]))?.value;
    let numbers = format!(
        "W1 band {:.2} GHz at 1 m, {:.2} GHz at 10 m; at lambda_a = 1.5e-2, N = 2: C-MC gain {:.2}%, R-MC gain {:.2}%",
        b1 / 1e9,
        b10 / 1e9,
        100.0 * gc,
        100.0 * gr
    );
    if s.is_bundled_spectrum() {
        c.note(format!(
            "bundled synthetic spectrum, numeric targets reported only: {numbers}"
        ));
    } else {
        c.check(
            "W1 usable band 91.46 GHz at 1 m +- 2 GHz",
            (b1 / 1e9 - 91.46).abs() <= 2.0,
            format!("{:.2} GHz", b1 / 1e9),
        );
        c.check(
            "W1 usable band 58.65 GHz at 10 m +- 2 GHz",
            (b10 / 1e9 - 58.65).abs() <= 2.0,
            format!("{:.2} GHz", b10 / 1e9),
        );
        c.check(
            "C-MC gain 10% +- 3 pp",
            (gc - 0.10).abs() <= 0.03,
            format!("{:.2}%", 100.0 * gc),
        );
        c.check(
            "R-MC gain 2% +- 3 pp",
            (gr - 0.02).abs() <= 0.03,
            format!("{:.2}%", 100.0 * gr),
        );
    }

    let grid = ExperimentConfig::default().lambda_grid();
    let gains = gain_table(s, &grid)?;
    let names = ["W1", "W2"];
    let labels = ["C-MC", "R-MC"];

    let mut violations = Vec::new();
    for (wi, w) in gains.iter().enumerate() {
        for n in 0..3 {
            for (li, _) in grid.iter().enumerate() {
                if w[0][n][li] <= w[1][n][li] {
                    violations.push(format!("{} N={} lambda #{li}", names[wi], n + 2));
                }
            }
        }
    }
    c.check(
        "C-MC gain above R-MC gain everywhere",
        violations.is_empty(),
        summarize(&violations),
    );

    for (si, label) in labels.iter().enumerate() {
        let mut violations = Vec::new();
        for (wi, w) in gains.iter().enumerate() {
            for (li, &l) in grid.iter().enumerate() {
                let seq: Vec<f64> = (0..3).map(|n| w[si][n][li]).collect();
                let ok = if si == 0 {
                    seq.windows(2).all(|v| v[1] > v[0])
                } else {
                    seq.windows(2).all(|v| v[1] < v[0])
                };
                if !ok {
                    violations.push(format!(
                        "{} lambda_a = {l:.2e}: [{}]",
                        names[wi],
                        join(seq.iter().map(|g| 100.0 * g), 2)
                    ));
                }
            }
        }
        let dir = if si == 0 { "increases" } else { "decreases" };
        c.check(
            format!("{label} gain {dir} with N at every density"),
            violations.is_empty(),
            summarize(&violations),
        );
    }

    let mut edge = Vec::new();
    for (wi, w) in gains.iter().enumerate() {
        for (si, label) in labels.iter().enumerate() {
            for n in 0..3 {
                let curve = &w[si][n];
                let best = (0..curve.len())
                    .max_by(|&a, &b| curve[a].total_cmp(&curve[b]))
                    .unwrap_or(0);
                if best == 0 || best + 1 == curve.len() {
                    edge.push(format!(
                        "{} {label} N={} peaks at lambda_a = {:.2e}",
                        names[wi],
                        n + 2,
                        grid[best]
                    ));
                }
            }
        }
    }
    c.check(
        "every gain curve has an interior maximum over the density grid",
        edge.is_empty(),
        summarize(&edge),
    );

    let mut not_below = Vec::new();
    for si in 0..2 {
        for n in 0..3 {
            for li in 0..grid.len() {
                if gains[1][si][n][li] >= gains[0][si][n][li] {
                    not_below.push(format!("{} N={} lambda #{li}", labels[si], n + 2));
                }
            }
        }
    }
    c.check(
        "W2 at 30 dBm gains below W1 at 20 dBm gains",
        not_below.is_empty(),
        summarize(&not_below),
    );
    c.runtime_limit(started, f64::INFINITY);
    Ok(c)
}

fn summarize(items: &[String]) -> String {
    if items.is_empty() {
        return "holds at every point".into();
    }
    let shown: Vec<&str> = items.iter().take(6).map(String::as_str).collect();
    let more = if items.len() > shown.len() {
        format!(" (+{} more)", items.len() - shown.len())
    } else {
        String::new()
    };
    format!("{} violation(s): {}{more}", items.len(), shown.join("; "))
}

fn gain_table(s: &Settings, grid: &[f64]) -> Result<GainTable> {
    let cfg = ExperimentConfig::default();
    let runner = Runner::new(cfg, s.table.clone())?;
    let mut out = Vec::new();
    for (wi, w) in ["W1", "W2"].into_iter().enumerate() {
        let curve = runner.curve(w)?;
        let mut per_strategy = Vec::new();
        for (si, make) in [
            StrategyKind::ClosestMc as fn(usize) -> StrategyKind,
            StrategyKind::ReactiveMc,
        ]
        .into_iter()
        .enumerate()
        {
            let mut per_degree = Vec::new();
            for n in 2..=4 {
                let row: Result<Vec<f64>> = grid
                    .iter()
                    .enumerate()
                    .map(|(li, &l)| {
                        let p = SystemParams::default().with_lambda_a(l);
                        let opts = s.opts(&[6, wi as u64, si as u64, li as u64]);
                        Ok(capacity_gain(make(n), &p, &curve, &opts)?.value)
                    })
                    .collect();
                per_degree.push(row?);
            }
            per_strategy.push(per_degree);
        }
        out.push(per_strategy);
    }
    Ok(out)
}

/// Runs `fig4` twice with seed 42, on one worker and on four.
pub fn criterion_7(s: &Settings) -> Result<Criterion> {
    let started = Instant::now();
    let mut c = Criterion::new(7, "determinism");
    let run = |threads: usize| -> Result<Vec<u8>> {
        let cfg = ExperimentConfig {
            seed: 42,
            ..ExperimentConfig::default()
        };
        let runner = Runner::new(cfg, s.table.clone())?;
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
        pool.install(|| to_csv_bytes(&runner.fig4()?))
    };
    let a = run(1)?;
    let b = run(4)?;
    c.check(
        "fig4 --seed 42 byte-identical on 1 and 4 workers",
        a == b,
        format!("{} and {} bytes", a.len(), b.len()),
    );
    c.runtime_limit(started, 60.0);
    Ok(c)
}

pub fn run_all(s: &Settings, mut on_done: impl FnMut(&Criterion)) -> Result<Vec<Criterion>> {
    let mut out = Vec::new();
    let mut push = |c: Criterion| {
        on_done(&c);
        out.push(c);
    };
    push(criterion_1(s));
    push(criterion_2(s));
    push(criterion_3(s));
    push(criterion_4(s)?);
    push(criterion_5(s)?);
    push(criterion_6(s)?);
    push(criterion_7(s)?);
    Ok(out)
}
