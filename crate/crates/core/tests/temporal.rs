use std::sync::Arc;

use statrs::distribution::{ContinuousCDF, Exp};
use thzmc::analysis::{closest_shares, ConstantCapacity, StrategyKind};
use thzmc::blockage::{blockage_depth, los_probability, temporal_density, SystemParams};
use thzmc::simulator::{
    apply_strategy, simulate_links, temporal_throughput, ApSite, BlockerSharing, LinkTrace, TemporalConfig, Topology,
    Transition,
};

fn three_aps(params: &SystemParams) -> Topology {
    let third = std::f64::consts::FRAC_PI_3;
    Topology::new(
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
        params,
    )
    .unwrap()
}

/// Rate at which blockers enter the zone of a link of length `x`: blocker
/// flux across the zone perimeter for isotropic motion.
fn entry_rate(x: f64, p: &SystemParams) -> f64 {
    let perimeter = 2.0 * blockage_depth(x, p) + 4.0 * p.r_b;
    p.lambda_b * p.v_b * perimeter / std::f64::consts::PI
}

fn ks_p_value(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let d = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max);
    let lambda = (n.sqrt() + 0.12 + 0.11 / n.sqrt()) * d;
    let p: f64 = (1..100)
        .map(|k| {
            let k = f64::from(k);
            2.0 * (-1f64).powf(k - 1.0) * (-2.0 * k * k * lambda * lambda).exp()
        })
        .sum();
    p.clamp(0.0, 1.0)
}

#[test]
fn single_link_los_fraction_matches_probability() {
    let p = SystemParams::default();
    for (x, seed) in [(2.0, 1), (6.0, 2), (12.0, 3)] {
        let topo = Topology::new(
            vec![ApSite {
                distance: x,
                azimuth: 0.0,
            }],
            &p,
        )
        .unwrap();
        let links = simulate_links(&topo, &p, &TemporalConfig::new(5e4, seed)).unwrap();
        let est = links.los_fraction(0);
        let z = est.z_score(los_probability(x, &p));
        assert!(z.abs() < 4.0, "x = {x}: {} +- {} (z = {z})", est.value, est.std_error);
    }
}

#[test]
fn mean_los_period_matches_entry_rate() {
    let p = SystemParams::default().with_lambda_b(0.02);
    let x = 6.0;
    let topo = Topology::new(
        vec![ApSite {
            distance: x,
            azimuth: 0.0,
        }],
        &p,
    )
    .unwrap();
    let links = simulate_links(&topo, &p, &TemporalConfig::new(3e5, 17)).unwrap();
    assert!(links.los_durations(0).len() > 5_000);
    let mean = links.mean_los_duration(0);
    let target = 1.0 / entry_rate(x, &p);
    assert!(mean.z_score(target).abs() < 4.0, "{mean:?} vs {target}");
}

/// Turning blockers that leave a zone often re-enter it within a second or
/// two, so LOS periods carry excess mass near zero and fail a strict
/// exponential fit at any blocker density.
#[test]
#[ignore = "known failure: random-direction re-entries make LOS periods non-exponential"]
fn los_periods_are_exponential_at_low_density() {
    let p = SystemParams::default().with_lambda_b(0.02);
    let x = 6.0;
    let topo = Topology::new(
        vec![ApSite {
            distance: x,
            azimuth: 0.0,
        }],
        &p,
    )
    .unwrap();
    let links = simulate_links(&topo, &p, &TemporalConfig::new(3e5, 17)).unwrap();
    let durations = links.los_durations(0);
    let exp = Exp::new(temporal_density(x, &p)).unwrap();
    let pv = ks_p_value(durations, |t| exp.cdf(t));
    assert!(pv > 0.01, "KS p = {pv}");
}

#[test]
fn closest_strategy_always_serves_first_los_link() {
    let p = SystemParams::default();
    let links = Arc::new(simulate_links(&three_aps(&p), &p, &TemporalConfig::new(2e4, 4)).unwrap());
    let trace = apply_strategy(StrategyKind::ClosestMc(3), links.clone()).unwrap();
    let mut los: Vec<bool> = (0..3).map(|ap| !links.initially_blocked(ap)).collect();
    let log = trace.events();
    assert!(log.len() > 1000);
    for (i, (event, serving)) in log.iter().enumerate() {
        los[event.ap] = event.transition == Transition::Unblocked;
        let same_time_follows = log.get(i + 1).is_some_and(|(e, _)| e.time == event.time);
        if !same_time_follows {
            assert_eq!(*serving, los.iter().position(|&l| l), "at t = {}", event.time);
        }
    }
}

#[test]
fn reactive_strategy_holds_a_los_link() {
    let p = SystemParams::default();
    let links = Arc::new(simulate_links(&three_aps(&p), &p, &TemporalConfig::new(2e4, 5)).unwrap());
    let trace = apply_strategy(StrategyKind::ReactiveMc(3), links.clone()).unwrap();
    let mut los: Vec<bool> = (0..3).map(|ap| !links.initially_blocked(ap)).collect();
    let mut serving = los.iter().position(|&l| l);
    let mut switches = 0;
    for (event, next) in trace.events() {
        los[event.ap] = event.transition == Transition::Unblocked;
        if *next != serving {
            if let Some(c) = serving {
                assert!(!los[c], "left LOS AP {c} at t = {}", event.time);
            }
            switches += 1;
        }
        if let Some(c) = next {
            assert!(los[*c]);
        }
        serving = *next;
    }
    assert!(switches > 100);
    for w in trace.timeline().windows(2) {
        assert_eq!(w[0].end, w[1].start);
    }
}

#[test]
fn closest_strategy_never_loses_to_single_link() {
    let p = SystemParams::default();
    let links = Arc::new(simulate_links(&three_aps(&p), &p, &TemporalConfig::new(2e4, 6)).unwrap());
    let sc = apply_strategy(StrategyKind::Sc, links.clone()).unwrap();
    let cmc = apply_strategy(StrategyKind::ClosestMc(3), links.clone()).unwrap();
    let rmc = apply_strategy(StrategyKind::ReactiveMc(3), links).unwrap();
    // decreasing in distance, so the closest LOS link is the best one
    let curve = FnProfile(|x: f64| 1e9 / x);
    let t_sc = temporal_throughput(&sc, &curve).value;
    let t_cmc = temporal_throughput(&cmc, &curve).value;
    let t_rmc = temporal_throughput(&rmc, &curve).value;
    assert!(t_cmc >= t_sc);
    assert!(t_cmc >= t_rmc);
    // both multi-link strategies are connected exactly when some link is LOS
    let a = cmc.connected_fraction().value;
    let b = rmc.connected_fraction().value;
    assert!((a - b).abs() < 1e-12);
    assert!(a > sc.connected_fraction().value);
    let ones = ConstantCapacity(1.0);
    assert!((temporal_throughput(&cmc, &ones).value - a).abs() < 1e-12);
}

struct FnProfile<F>(F);

impl<F: Fn(f64) -> f64 + Sync> thzmc::analysis::CapacityProfile for FnProfile<F> {
    fn capacity(&self, x: f64) -> f64 {
        (self.0)(x)
    }
}

#[test]
fn independent_links_follow_closest_weights() {
    let p = SystemParams::default();
    let topo = three_aps(&p);
    let cfg = TemporalConfig {
        sharing: BlockerSharing::PerLink,
        ..TemporalConfig::new(5e4, 8)
    };
    let links = Arc::new(simulate_links(&topo, &p, &cfg).unwrap());
    let trace = apply_strategy(StrategyKind::ClosestMc(3), links).unwrap();
    let gamma = closest_shares(&topo.distances(), &p);
    for (share, g) in trace.connected_shares().iter().zip(&gamma) {
        let z = share.z_score(*g);
        assert!(z.abs() < 4.0, "{} vs {g} (z = {z})", share.value);
    }
}

#[test]
fn hand_built_trace_replays_deterministically() {
    let blocked = vec![vec![(1.0, 2.0), (5.0, 6.0)], vec![(1.5, 5.5)]];
    let links = Arc::new(LinkTrace::from_blocked(vec![2.0, 4.0], blocked, 10.0, 5));
    let a = apply_strategy(StrategyKind::ReactiveMc(2), links.clone())
        .unwrap()
        .dump();
    let b = apply_strategy(StrategyKind::ReactiveMc(2), links).unwrap().dump();
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 6);
}
