//! Event-driven simulation of blocker motion over a fixed AP topology and
//! of the three connectivity strategies on top of it.
//!
//! Each blocker's path is a chain of straight pieces, so the times it
//! spends inside a link's blockage zone are computed exactly. A link is
//! blocked on the union of those times over all blockers.

use std::fmt::Write as _;
use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use super::geometry::{LinkZone, Point};
use super::mobility::{RdmModel, DEFAULT_MEAN_LEG};
use super::SimEstimate;
use crate::analysis::{CapacityProfile, StrategyKind};
use crate::blockage::SystemParams;
use crate::distances::sample_ordered;
use crate::error::{Error, Result};
use crate::montecarlo::block_rng;

/// Position of one AP as seen from the UE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApSite {
    /// 2D distance, metres.
    pub distance: f64,
    /// Bearing from the UE's facing direction, radians.
    pub azimuth: f64,
}

/// Fixed APs, closest first, all inside the non-self-blocked sector.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    sites: Vec<ApSite>,
}

impl Topology {
    pub fn new(mut sites: Vec<ApSite>, params: &SystemParams) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::InvalidParameter {
                name: "topology",
                reason: "no APs".into(),
            });
        }
        for s in &sites {
            if !(s.distance >= params.r0 && s.distance.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "topology",
                    reason: format!("AP distance {} below r0 = {}", s.distance, params.r0),
                });
            }
            if s.azimuth.abs() > params.omega / 2.0 {
                return Err(Error::InvalidParameter {
                    name: "topology",
                    reason: format!("AP azimuth {} is self-blocked", s.azimuth),
                });
            }
        }
        sites.sort_by(|a, b| a.distance.total_cmp(&b.distance));
        Ok(Self { sites })
    }

    /// APs at `distances`, fanned out evenly across `spread` radians.
    pub fn fan(distances: &[f64], spread: f64, params: &SystemParams) -> Result<Self> {
        let n = distances.len();
        let sites = distances
            .iter()
            .enumerate()
            .map(|(i, &distance)| ApSite {
                distance,
                azimuth: if n == 1 {
                    0.0
                } else {
                    spread * (i as f64 / (n - 1) as f64 - 0.5)
                },
            })
            .collect();
        Self::new(sites, params)
    }

    /// The `n` closest APs of a random drop: distances of the in-sector
    /// PPP beyond `r0` and independent uniform bearings.
    pub fn random(n: usize, params: &SystemParams, seed: u64) -> Result<Self> {
        params.validate()?;
        let mut rng = block_rng(seed, 0);
        let distances = sample_ordered(n, params, &mut rng).into_vec();
        let sites = distances
            .into_iter()
            .map(|distance| ApSite {
                distance,
                azimuth: params.omega * (rng.random::<f64>() - 0.5),
            })
            .collect();
        Self::new(sites, params)
    }

    pub fn sites(&self) -> &[ApSite] {
        &self.sites
    }

    pub fn distances(&self) -> Vec<f64> {
        self.sites.iter().map(|s| s.distance).collect()
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }
}

/// Whether links see one common blocker population.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BlockerSharing {
    /// One population blocks every link; overlapping zones correlate links.
    #[default]
    Shared,
    /// Every link gets its own population, making link states independent.
    PerLink,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemporalConfig {
    /// Simulated time, seconds.
    pub duration: f64,
    pub seed: u64,
    pub mean_leg: f64,
    /// Blocker arena radius; defaults to `max(50 m, 3 x` farthest AP`)`.
    pub arena_radius: Option<f64>,
    /// Number of batches for batch-means standard errors.
    pub batches: usize,
    pub sharing: BlockerSharing,
}

impl TemporalConfig {
    pub fn new(duration: f64, seed: u64) -> Self {
        Self {
            duration,
            seed,
            mean_leg: DEFAULT_MEAN_LEG,
            arena_radius: None,
            batches: 50,
            sharing: BlockerSharing::Shared,
        }
    }
}

/// Whether a link changed to blocked or to LOS.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transition {
    Blocked,
    Unblocked,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkEvent {
    pub time: f64,
    pub ap: usize,
    pub transition: Transition,
}

/// Blocked periods of every link over `[0, duration]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkTrace {
    distances: Vec<f64>,
    /// Per link: disjoint, sorted blocked intervals.
    blocked: Vec<Vec<(f64, f64)>>,
    duration: f64,
    batches: usize,
}

impl LinkTrace {
    /// Builds a trace from blocked intervals, merging overlaps.
    pub fn from_blocked(distances: Vec<f64>, blocked: Vec<Vec<(f64, f64)>>, duration: f64, batches: usize) -> Self {
        let blocked = blocked.into_iter().map(|iv| union(iv, duration)).collect();
        Self {
            distances,
            blocked,
            duration,
            batches,
        }
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn links(&self) -> usize {
        self.distances.len()
    }

    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    pub fn blocked_intervals(&self, ap: usize) -> &[(f64, f64)] {
        &self.blocked[ap]
    }

    /// Complement of the blocked intervals within `[0, duration]`.
    pub fn los_intervals(&self, ap: usize) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.blocked[ap].len() + 1);
        let mut t = 0.0;
        for &(a, b) in &self.blocked[ap] {
            if a > t {
                out.push((t, a));
            }
            t = b;
        }
        if t < self.duration {
            out.push((t, self.duration));
        }
        out
    }

    pub fn initially_blocked(&self, ap: usize) -> bool {
        self.blocked[ap].first().is_some_and(|&(a, _)| a <= 0.0)
    }

    /// All link transitions inside `(0, duration)`, ordered by time and
    /// then by AP index.
    pub fn events(&self) -> Vec<LinkEvent> {
        let mut ev = Vec::new();
        for (ap, iv) in self.blocked.iter().enumerate() {
            for &(a, b) in iv {
                if a > 0.0 {
                    ev.push(LinkEvent {
                        time: a,
                        ap,
                        transition: Transition::Blocked,
                    });
                }
                if b < self.duration {
                    ev.push(LinkEvent {
                        time: b,
                        ap,
                        transition: Transition::Unblocked,
                    });
                }
            }
        }
        ev.sort_by(|x, y| x.time.total_cmp(&y.time).then(x.ap.cmp(&y.ap)));
        ev
    }

    /// Fraction of time link `ap` is LOS.
    pub fn los_fraction(&self, ap: usize) -> SimEstimate {
        let los = self.los_intervals(ap);
        let per_batch = batch_integrals(los.iter().map(|&(a, b)| (a, b, 1.0)), self.duration, self.batches);
        let width = self.duration / self.batches as f64;
        mean_estimate(per_batch.iter().map(|v| v / width))
    }

    /// LOS periods that start and end inside the simulated window.
    pub fn los_durations(&self, ap: usize) -> Vec<f64> {
        self.los_intervals(ap)
            .into_iter()
            .filter(|&(a, b)| a > 0.0 && b < self.duration)
            .map(|(a, b)| b - a)
            .collect()
    }

    /// Mean LOS period length as a ratio of LOS time to LOS periods.
    pub fn mean_los_duration(&self, ap: usize) -> SimEstimate {
        let los = self.los_intervals(ap);
        let time = batch_integrals(los.iter().map(|&(a, b)| (a, b, 1.0)), self.duration, self.batches);
        let mut starts = vec![0.0; self.batches];
        let width = self.duration / self.batches as f64;
        for &(a, _) in &los {
            starts[((a / width) as usize).min(self.batches - 1)] += 1.0;
        }
        ratio_estimate(&time, &starts)
    }
}

fn union(mut iv: Vec<(f64, f64)>, duration: f64) -> Vec<(f64, f64)> {
    iv.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(iv.len());
    for (a, b) in iv {
        let (a, b) = (a.max(0.0), b.min(duration));
        if b <= a {
            continue;
        }
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

/// Default blocker arena for a topology.
pub fn arena_radius(topology: &Topology) -> f64 {
    let far = topology.sites.iter().map(|s| s.distance).fold(0.0, f64::max);
    50f64.max(3.0 * far)
}

/// Simulates the blocker population and returns the blocked periods of
/// every link in `topology`.
///
/// Blocker `k` draws from its own random stream, so the result does not
/// depend on how blockers are spread over threads.
pub fn simulate_links(topology: &Topology, params: &SystemParams, cfg: &TemporalConfig) -> Result<LinkTrace> {
    params.validate()?;
    if !(cfg.duration > 0.0 && cfg.duration.is_finite()) || cfg.batches < 2 {
        return Err(Error::InvalidParameter {
            name: "temporal config",
            reason: "need a positive duration and at least two batches".into(),
        });
    }
    let zones: Vec<LinkZone> = topology
        .sites
        .iter()
        .map(|s| LinkZone::new(s.distance, s.azimuth, params))
        .collect();
    let reach = zones.iter().map(LinkZone::reach).fold(0.0, f64::max);
    let model = RdmModel {
        arena_radius: cfg.arena_radius.unwrap_or_else(|| arena_radius(topology)),
        speed: params.v_b,
        mean_leg: cfg.mean_leg,
    };
    if model.arena_radius <= reach {
        return Err(Error::InvalidParameter {
            name: "arena_radius",
            reason: format!("arena must extend beyond the blockage zones ({reach} m)"),
        });
    }
    let mean = params.lambda_b * std::f64::consts::PI * model.arena_radius.powi(2);
    let mut blocked = vec![Vec::new(); zones.len()];
    match cfg.sharing {
        BlockerSharing::Shared => {
            for (ap, a, b) in blocker_hits(&zones, &model, mean, cfg, 0) {
                blocked[ap].push((a, b));
            }
        }
        BlockerSharing::PerLink => {
            for (ap, zone) in zones.iter().enumerate() {
                let hits = blocker_hits(std::slice::from_ref(zone), &model, mean, cfg, ap as u64);
                blocked[ap].extend(hits.into_iter().map(|(_, a, b)| (a, b)));
            }
        }
    }
    Ok(LinkTrace::from_blocked(
        topology.distances(),
        blocked,
        cfg.duration,
        cfg.batches,
    ))
}

/// Zone visits `(zone, enter, leave)` of one blocker population. Streams
/// are numbered from `population << 40`, one per blocker.
fn blocker_hits(
    zones: &[LinkZone],
    model: &RdmModel,
    mean: f64,
    cfg: &TemporalConfig,
    population: u64,
) -> Vec<(usize, f64, f64)> {
    let base = population << 40;
    let reach = zones.iter().map(LinkZone::reach).fold(0.0, f64::max);
    let count = if mean > 0.0 {
        Poisson::new(mean)
            .expect("positive mean")
            .sample(&mut block_rng(cfg.seed, base)) as u64
    } else {
        0
    };
    let per_blocker: Vec<Vec<(usize, f64, f64)>> = (0..count)
        .into_par_iter()
        .map(|k| {
            let mut rng = block_rng(cfg.seed, base + k + 1);
            let mut state = model.stationary(&mut rng);
            let mut hits = Vec::new();
            model.advance(&mut state, cfg.duration, &mut rng, |t0, p, v, d| {
                if closest_approach(p, v, d) > reach {
                    return;
                }
                for (ap, zone) in zones.iter().enumerate() {
                    if let Some((a, b)) = zone.clip(p, v, d) {
                        hits.push((ap, t0 + a, t0 + b));
                    }
                }
            });
            hits
        })
        .collect();
    per_blocker.into_iter().flatten().collect()
}

/// Distance from the origin to the segment `p + s v`, `s in [0, d]`.
fn closest_approach(p: Point, v: Point, d: f64) -> f64 {
    let vv = v[0] * v[0] + v[1] * v[1];
    let s = if vv > 0.0 {
        (-(p[0] * v[0] + p[1] * v[1]) / vv).clamp(0.0, d)
    } else {
        0.0
    };
    (p[0] + s * v[0]).hypot(p[1] + s * v[1])
}

/// A maximal period with a fixed serving AP (`None` is outage).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
    pub ap: Option<usize>,
}

/// Link trace plus the serving-AP timeline of one strategy.
#[derive(Debug, Clone)]
pub struct SimTrace {
    kind: StrategyKind,
    links: Arc<LinkTrace>,
    timeline: Vec<Segment>,
    /// `(event, serving AP after the event's time step)`.
    log: Vec<(LinkEvent, Option<usize>)>,
}

/// Serving AP chosen by `kind` given the current link states.
fn select(kind: StrategyKind, current: Option<usize>, los: &[bool]) -> Option<usize> {
    let closest_los = || los.iter().position(|&l| l);
    match kind {
        StrategyKind::Sc => los[0].then_some(0),
        StrategyKind::ClosestMc(_) => closest_los(),
        StrategyKind::ReactiveMc(_) => match current {
            Some(c) if los[c] => Some(c),
            _ => closest_los(),
        },
    }
}

/// Replays the link events through the strategy's switching rule. The
/// strategy sees the closest `kind.degree()` links.
pub fn apply_strategy(kind: StrategyKind, links: Arc<LinkTrace>) -> Result<SimTrace> {
    kind.validate()?;
    let n = kind.degree();
    if n > links.links() {
        return Err(Error::InvalidParameter {
            name: "degree",
            reason: format!("{kind} needs {n} APs, topology has {}", links.links()),
        });
    }
    let mut los: Vec<bool> = (0..n).map(|ap| !links.initially_blocked(ap)).collect();
    let mut current = select(kind, None, &los);
    let mut timeline = Vec::new();
    let mut start = 0.0;
    let mut log = Vec::new();
    let events: Vec<LinkEvent> = links.events().into_iter().filter(|e| e.ap < n).collect();
    let mut i = 0;
    while i < events.len() {
        let t = events[i].time;
        let group_start = i;
        while i < events.len() && events[i].time == t {
            los[events[i].ap] = events[i].transition == Transition::Unblocked;
            i += 1;
        }
        let next = select(kind, current, &los);
        if next != current {
            timeline.push(Segment {
                start,
                end: t,
                ap: current,
            });
            start = t;
            current = next;
        }
        log.extend(events[group_start..i].iter().map(|&e| (e, current)));
    }
    timeline.push(Segment {
        start,
        end: links.duration(),
        ap: current,
    });
    Ok(SimTrace {
        kind,
        links,
        timeline,
        log,
    })
}

/// Simulates blockers around `topology` and applies `kind`.
pub fn run_temporal(
    kind: StrategyKind,
    topology: &Topology,
    params: &SystemParams,
    cfg: &TemporalConfig,
) -> Result<SimTrace> {
    let links = Arc::new(simulate_links(topology, params, cfg)?);
    apply_strategy(kind, links)
}

impl SimTrace {
    pub fn kind(&self) -> StrategyKind {
        self.kind
    }

    pub fn links(&self) -> &LinkTrace {
        &self.links
    }

    pub fn timeline(&self) -> &[Segment] {
        &self.timeline
    }

    pub fn duration(&self) -> f64 {
        self.links.duration
    }

    /// Link events with the serving AP after each event.
    pub fn events(&self) -> &[(LinkEvent, Option<usize>)] {
        &self.log
    }

    /// Total time served by `ap` (`None` for outage).
    pub fn time_on(&self, ap: Option<usize>) -> f64 {
        self.timeline
            .iter()
            .filter(|s| s.ap == ap)
            .map(|s| s.end - s.start)
            .sum()
    }

    /// Fraction of time with some AP serving.
    pub fn connected_fraction(&self) -> SimEstimate {
        let b = self.links.batches;
        let width = self.duration() / b as f64;
        let per_batch = batch_integrals(
            self.timeline
                .iter()
                .filter(|s| s.ap.is_some())
                .map(|s| (s.start, s.end, 1.0)),
            self.duration(),
            b,
        );
        mean_estimate(per_batch.iter().map(|v| v / width))
    }

    /// Share of the connected time spent on each AP.
    pub fn connected_shares(&self) -> Vec<SimEstimate> {
        let b = self.links.batches;
        let connected = batch_integrals(
            self.timeline
                .iter()
                .filter(|s| s.ap.is_some())
                .map(|s| (s.start, s.end, 1.0)),
            self.duration(),
            b,
        );
        (0..self.kind.degree())
            .map(|ap| {
                let on = batch_integrals(
                    self.timeline
                        .iter()
                        .filter(|s| s.ap == Some(ap))
                        .map(|s| (s.start, s.end, 1.0)),
                    self.duration(),
                    b,
                );
                ratio_estimate(&on, &connected)
            })
            .collect()
    }

    /// Writes one line per link event:
    /// `time<TAB>ap<TAB>BLOCKED|UNBLOCKED<TAB>serving`, APs numbered from 1.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (e, serving) in &self.log {
            let state = match serving {
                Some(ap) => format!("AP{}", ap + 1),
                None => "OUTAGE".to_string(),
            };
            let tr = match e.transition {
                Transition::Blocked => "BLOCKED",
                Transition::Unblocked => "UNBLOCKED",
            };
            let _ = writeln!(out, "{:.9}\t{}\t{}\t{}", e.time, e.ap + 1, tr, state);
        }
        out
    }
}

/// Time-average throughput of a trace, outage counting as zero.
pub fn temporal_throughput<P: CapacityProfile + ?Sized>(trace: &SimTrace, profile: &P) -> SimEstimate {
    let caps: Vec<f64> = trace.links.distances.iter().map(|&x| profile.capacity(x)).collect();
    let b = trace.links.batches;
    let width = trace.duration() / b as f64;
    let per_batch = batch_integrals(
        trace
            .timeline
            .iter()
            .filter_map(|s| s.ap.map(|ap| (s.start, s.end, caps[ap]))),
        trace.duration(),
        b,
    );
    mean_estimate(per_batch.iter().map(|v| v / width))
}

/// Integral of a piecewise-constant signal over each of `batches` equal
/// windows of `[0, duration]`.
fn batch_integrals<I: Iterator<Item = (f64, f64, f64)>>(pieces: I, duration: f64, batches: usize) -> Vec<f64> {
    let width = duration / batches as f64;
    let mut out = vec![0.0; batches];
    for (a, b, w) in pieces {
        let mut k = ((a / width) as usize).min(batches - 1);
        let mut t = a;
        while t < b && k < batches {
            let edge = if k == batches - 1 {
                duration
            } else {
                (k + 1) as f64 * width
            };
            let stop = b.min(edge);
            out[k] += w * (stop - t);
            t = stop;
            k += 1;
        }
    }
    out
}

fn mean_estimate<I: Iterator<Item = f64>>(values: I) -> SimEstimate {
    let mut m = crate::montecarlo::Moments::default();
    for v in values {
        m.push(v);
    }
    SimEstimate::from(&m)
}

/// `sum(num) / sum(den)` with the delta-method batch-means error.
fn ratio_estimate(num: &[f64], den: &[f64]) -> SimEstimate {
    let b = num.len() as f64;
    let (sn, sd): (f64, f64) = (num.iter().sum(), den.iter().sum());
    if sd <= 0.0 {
        return SimEstimate {
            value: f64::NAN,
            std_error: f64::INFINITY,
            samples: num.len() as u64,
        };
    }
    let r = sn / sd;
    let mean_den = sd / b;
    let ss: f64 = num.iter().zip(den).map(|(n, d)| (n - r * d).powi(2)).sum();
    SimEstimate {
        value: r,
        std_error: (ss / (b * (b - 1.0))).sqrt() / mean_den,
        samples: num.len() as u64,
    }
}
