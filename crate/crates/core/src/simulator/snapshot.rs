//! Snapshot simulator: independent static drops of APs and blockers.
//!
//! Every trial draws the AP PPP inside the non-self-blocked sector and the
//! blocker PPP over the bounding box of the zones of the closest links, then
//! tests each blocker against the exact blockage rectangle of each link. Blockers are shared by
//! all links, so overlapping zones are correlated as in reality.

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::geometry::{norm, polar, LinkZone, Point};
use super::{BlockerSharing, SimEstimate};
use crate::analysis::CapacityProfile;
use crate::blockage::SystemParams;
use crate::distances::{ordered_truncation_radius, truncation_radius};
use crate::error::{Error, Result};
use crate::montecarlo::estimate;

/// Trials with fewer than the requested number of APs may make up at most
/// this fraction of a run.
const MAX_INSUFFICIENT: f64 = 0.01;

/// APs are first drawn inside the radius that misses the `n`-th closest AP
/// with this probability; the rest of the region is drawn only when needed.
const INNER_TAIL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnapshotConfig {
    pub trials: usize,
    pub seed: u64,
    /// Outer radius of the AP region; defaults to [`region_radius`].
    pub region_radius: Option<f64>,
    pub sharing: BlockerSharing,
}

impl SnapshotConfig {
    pub fn new(trials: usize, seed: u64) -> Self {
        Self {
            trials,
            seed,
            region_radius: None,
            sharing: BlockerSharing::Shared,
        }
    }
}

/// Default AP region: `max(50 m, 3 x` the closest-AP truncation radius`)`.
pub fn region_radius(params: &SystemParams) -> f64 {
    50f64.max(3.0 * truncation_radius(params, 1e-9))
}

/// One static drop. The UE sits at the origin facing the `+x` axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    /// APs inside the sector beyond `r0`, closest first.
    pub ap_positions: Vec<Point>,
    /// Blockers inside `blocker_radius`. Blockers farther out cannot touch
    /// any of the considered zones and are not drawn.
    pub blocker_positions: Vec<Point>,
    pub region_radius: f64,
    pub blocker_radius: f64,
}

impl Snapshot {
    /// Draws APs over the whole region and blockers over the smallest disc
    /// that holds the zones of the `n` closest APs.
    pub fn sample<R: Rng + ?Sized>(n: usize, params: &SystemParams, region_radius: f64, rng: &mut R) -> Self {
        let mut aps = Vec::new();
        sample_aps(params, params.r0, region_radius, rng, &mut aps);
        aps.sort_by(|a, b| norm(*a).total_cmp(&norm(*b)));
        let reach = zones_reach(&aps[..n.min(aps.len())], params);
        let mut blockers = Vec::new();
        sample_blockers(params, reach, rng, &mut blockers);
        Self {
            ap_positions: aps,
            blocker_positions: blockers,
            region_radius,
            blocker_radius: reach,
        }
    }

    /// LOS state of the `n` closest links.
    pub fn los(&self, n: usize, params: &SystemParams) -> Vec<bool> {
        self.ap_positions
            .iter()
            .take(n)
            .map(|&ap| {
                let zone = LinkZone::new(norm(ap), ap[1].atan2(ap[0]), params);
                !self.blocker_positions.iter().any(|&b| zone.contains(b))
            })
            .collect()
    }
}

/// Appends the in-sector APs with distance in `[inner, outer)`.
fn sample_aps<R: Rng + ?Sized>(params: &SystemParams, inner: f64, outer: f64, rng: &mut R, out: &mut Vec<Point>) {
    let base = inner * inner;
    let span = outer * outer - base;
    let mean = params.lambda_a * params.omega / 2.0 * span;
    if !(mean > 0.0) {
        return;
    }
    let count = Poisson::new(mean).expect("positive mean").sample(rng) as usize;
    for _ in 0..count {
        let r = (base + rng.random::<f64>() * span).sqrt();
        let phi = params.omega * (rng.random::<f64>() - 0.5);
        out.push(polar(r, phi));
    }
}

fn sample_blockers<R: Rng + ?Sized>(params: &SystemParams, radius: f64, rng: &mut R, out: &mut Vec<Point>) {
    out.clear();
    let mean = params.lambda_b * std::f64::consts::PI * radius * radius;
    if !(mean > 0.0) {
        return;
    }
    let count = Poisson::new(mean).expect("positive mean").sample(rng) as usize;
    for _ in 0..count {
        let r = radius * rng.random::<f64>().sqrt();
        let phi = std::f64::consts::TAU * rng.random::<f64>();
        out.push(polar(r, phi));
    }
}

/// Blockers over the box `[lo, hi]`; no trigonometry per point.
fn sample_blockers_in_box<R: Rng + ?Sized>(
    params: &SystemParams,
    lo: Point,
    hi: Point,
    rng: &mut R,
    out: &mut Vec<Point>,
) {
    out.clear();
    let (w, h) = (hi[0] - lo[0], hi[1] - lo[1]);
    let mean = params.lambda_b * w * h;
    if !(mean > 0.0) {
        return;
    }
    let count = Poisson::new(mean).expect("positive mean").sample(rng) as usize;
    for _ in 0..count {
        out.push([lo[0] + w * rng.random::<f64>(), lo[1] + h * rng.random::<f64>()]);
    }
}

fn zones_reach(aps: &[Point], params: &SystemParams) -> f64 {
    aps.iter()
        .map(|&ap| LinkZone::new(norm(ap), 0.0, params).reach())
        .fold(0.0, f64::max)
}

#[derive(Default)]
struct Scratch {
    aps: Vec<Point>,
    zones: Vec<LinkZone>,
    blockers: Vec<Point>,
    distances: Vec<f64>,
    los: Vec<bool>,
}

/// Runs `trials` drops and averages `eval(distances, los, out)` over them.
/// The last output slot counts drops with too few APs.
fn run<F>(
    max_n: usize,
    params: &SystemParams,
    cfg: &SnapshotConfig,
    outputs: usize,
    eval: F,
) -> Result<Vec<SimEstimate>>
where
    F: Fn(&[f64], &[bool], &mut [f64]) + Sync,
{
    params.validate()?;
    if cfg.trials == 0 || max_n == 0 {
        return Err(Error::InvalidParameter {
            name: "trials",
            reason: "need at least one trial and one AP".into(),
        });
    }
    let radius = cfg.region_radius.unwrap_or_else(|| region_radius(params));
    let inner = ordered_truncation_radius(max_n, params, INNER_TAIL).min(radius);
    let moments = estimate(cfg.seed, cfg.trials, outputs + 1, Scratch::default, |rng, s, out| {
        s.aps.clear();
        sample_aps(params, params.r0, inner, rng, &mut s.aps);
        if s.aps.len() < max_n {
            sample_aps(params, inner, radius, rng, &mut s.aps);
        }
        let keep = max_n.min(s.aps.len());
        if keep > 0 {
            s.aps
                .select_nth_unstable_by(keep - 1, |a, b| norm(*a).total_cmp(&norm(*b)));
        }
        s.aps.truncate(keep);
        s.aps.sort_by(|a, b| norm(*a).total_cmp(&norm(*b)));
        s.zones.clear();
        s.distances.clear();
        for &ap in &s.aps {
            let x = norm(ap);
            s.distances.push(x);
            s.zones.push(LinkZone::new(x, ap[1].atan2(ap[0]), params));
        }
        if cfg.sharing == BlockerSharing::Shared {
            let (mut lo, mut hi) = ([0.0; 2], [0.0; 2]);
            for z in &s.zones {
                let (a, b) = z.bounds();
                for k in 0..2 {
                    lo[k] = f64::min(lo[k], a[k]);
                    hi[k] = f64::max(hi[k], b[k]);
                }
            }
            sample_blockers_in_box(params, lo, hi, rng, &mut s.blockers);
        }
        s.los.clear();
        for zone in &s.zones {
            if cfg.sharing == BlockerSharing::PerLink {
                let (lo, hi) = zone.bounds();
                sample_blockers_in_box(params, lo, hi, rng, &mut s.blockers);
            }
            s.los.push(!s.blockers.iter().any(|&b| zone.contains(b)));
        }
        eval(&s.distances, &s.los, &mut out[..outputs]);
        out[outputs] = if keep < max_n { 1.0 } else { 0.0 };
    });
    let insufficient = (moments[outputs].mean * cfg.trials as f64).round() as usize;
    if insufficient as f64 > MAX_INSUFFICIENT * cfg.trials as f64 {
        return Err(Error::InconclusiveRegion {
            insufficient,
            trials: cfg.trials,
            needed: max_n,
        });
    }
    Ok(moments[..outputs].iter().map(SimEstimate::from).collect())
}

/// Fraction of drops in which at least one of the `n` closest APs is LOS,
/// for every `n` in `1..=max_n` (entry `n - 1`).
pub fn snapshot_connection_probability(
    max_n: usize,
    params: &SystemParams,
    cfg: &SnapshotConfig,
) -> Result<Vec<SimEstimate>> {
    run(max_n, params, cfg, max_n, |_, los, out| {
        let mut connected = false;
        for (n, slot) in out.iter_mut().enumerate() {
            connected |= los.get(n).copied().unwrap_or(false);
            *slot = f64::from(u8::from(connected));
        }
    })
}

/// Mean capacity of closest-LOS connectivity over drops, for every degree
/// in `1..=max_n` (degree one is single connectivity).
pub fn snapshot_capacity<P: CapacityProfile + ?Sized>(
    max_n: usize,
    params: &SystemParams,
    profile: &P,
    cfg: &SnapshotConfig,
) -> Result<Vec<SimEstimate>> {
    run(max_n, params, cfg, max_n, |xs, los, out| {
        let first_los = los.iter().position(|&l| l);
        for (n, slot) in out.iter_mut().enumerate() {
            *slot = match first_los {
                Some(i) if i <= n => profile.capacity(xs[i]),
                _ => 0.0,
            };
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::conn_prob_sc;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn no_blockers_always_connected() {
        let p = SystemParams::default().with_lambda_b(0.0);
        let est = snapshot_connection_probability(3, &p, &SnapshotConfig::new(5_000, 3)).unwrap();
        for e in est {
            assert_eq!(e.value, 1.0);
            assert_eq!(e.std_error, 0.0);
        }
    }

    #[test]
    fn single_ap_matches_closed_form() {
        let p = SystemParams::default().with_lambda_a(5e-3);
        let est = snapshot_connection_probability(1, &p, &SnapshotConfig::new(100_000, 9)).unwrap();
        let exact = conn_prob_sc(&p).value;
        assert!(
            (est[0].value - exact).abs() < 3.0 * est[0].std_error,
            "{:?} vs {exact}",
            est[0]
        );
    }

    #[test]
    fn independent_zones_match_product_form() {
        let p = SystemParams::default().with_lambda_a(1e-2);
        let cfg = SnapshotConfig {
            sharing: BlockerSharing::PerLink,
            ..SnapshotConfig::new(100_000, 21)
        };
        let est = snapshot_connection_probability(2, &p, &cfg).unwrap();
        let exact = crate::analysis::conn_prob_mc(2, &p, &crate::analysis::AnalysisOptions::default()).value;
        assert!(est[1].z_score(exact) < 3.0, "{:?} vs {exact}", est[1]);
    }

    #[test]
    fn tiny_region_is_inconclusive() {
        let p = SystemParams::default();
        let cfg = SnapshotConfig {
            region_radius: Some(3.0),
            ..SnapshotConfig::new(2_000, 1)
        };
        assert!(matches!(
            snapshot_connection_probability(4, &p, &cfg),
            Err(Error::InconclusiveRegion { needed: 4, .. })
        ));
    }

    #[test]
    fn drawn_snapshot_respects_sector_and_region() {
        let p = SystemParams::default().with_lambda_a(2e-2);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = Snapshot::sample(3, &p, 40.0, &mut rng);
        assert!(!s.ap_positions.is_empty());
        for ap in &s.ap_positions {
            let r = norm(*ap);
            assert!(r >= p.r0 && r <= 40.0);
            assert!(ap[1].atan2(ap[0]).abs() <= p.omega / 2.0);
        }
        assert!(s.ap_positions.windows(2).all(|w| norm(w[0]) <= norm(w[1])));
        assert!(s.blocker_positions.iter().all(|b| norm(*b) <= s.blocker_radius));
        assert_eq!(s.los(3, &p).len(), 3);
    }

    #[test]
    fn doubling_trials_shrinks_error() {
        let p = SystemParams::default();
        let mut prev: Option<f64> = None;
        for k in 0..4 {
            let trials = 20_000 << k;
            let e = snapshot_connection_probability(2, &p, &SnapshotConfig::new(trials, 17)).unwrap()[1];
            if let Some(prev) = prev {
                let ratio = prev / e.std_error;
                assert!((ratio - 2f64.sqrt()).abs() < 0.15, "ratio {ratio}");
            }
            prev = Some(e.std_error);
        }
    }
}
