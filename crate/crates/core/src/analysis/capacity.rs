//! Average ergodic capacity of the connectivity strategies.

use super::expectation::{expect_closest, expect_pair_split, expect_sampled};
use super::weights::{any_los_probability, reactive_shares};
use super::{AnalysisOptions, Estimator, MetricResult, StrategyKind, SHARED_DRAWS};
use crate::blockage::{los_probability, SystemParams};
use crate::channel::{CapacityCurve, ChannelModel};
use crate::distances::ordered_truncation_radius;
use crate::error::{Error, Result};

/// Link capacity as a function of 2D distance.
pub trait CapacityProfile: Sync {
    /// Capacity in bit/s at distance `x`.
    fn capacity(&self, x: f64) -> f64;

    /// Distances where `capacity` jumps, ascending.
    fn breakpoints(&self) -> &[f64] {
        &[]
    }
}

impl CapacityProfile for CapacityCurve {
    fn capacity(&self, x: f64) -> f64 {
        CapacityCurve::capacity(self, x)
    }

    fn breakpoints(&self) -> &[f64] {
        CapacityCurve::breakpoints(self)
    }
}

/// Distance-independent capacity, handy as a test channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantCapacity(pub f64);

impl CapacityProfile for ConstantCapacity {
    fn capacity(&self, _x: f64) -> f64 {
        self.0
    }
}

/// Tabulates `model` over every distance the evaluators in this module
/// visit for degrees up to `max_degree`.
pub fn capacity_curve(
    model: ChannelModel,
    params: &SystemParams,
    max_degree: usize,
    opts: &AnalysisOptions,
) -> Result<CapacityCurve> {
    let c = params.omega * params.lambda_a / 2.0;
    let outer = ordered_truncation_radius(1, params, opts.tail);
    let pair = (outer * outer + (1.0 / opts.tail).ln() / c).sqrt();
    let sampled = ordered_truncation_radius(max_degree.max(SHARED_DRAWS), params, opts.tail);
    CapacityCurve::new(model, params.r0, pair.max(sampled))
}

/// Capacity averaged over blockage for a fixed topology `xs` (closest
/// first): `p_c(xs) sum_i gamma_i C(x_i)`, zero during outage.
///
/// The strategy picks the weights; its degree is taken from `xs.len()`.
pub fn conditional_capacity<P: CapacityProfile + ?Sized>(
    kind: StrategyKind,
    xs: &[f64],
    params: &SystemParams,
    profile: &P,
) -> f64 {
    match kind {
        StrategyKind::Sc => los_probability(xs[0], params) * profile.capacity(xs[0]),
        StrategyKind::ClosestMc(_) => {
            // p_c gamma_i collapses to the first-LOS mass of AP i
            let mut blocked_before = 1.0;
            let mut total = 0.0;
            for &x in xs {
                let p = los_probability(x, params);
                total += p * blocked_before * profile.capacity(x);
                blocked_before *= 1.0 - p;
            }
            total
        }
        StrategyKind::ReactiveMc(_) => {
            let p: Vec<f64> = xs.iter().map(|&x| los_probability(x, params)).collect();
            let gamma = reactive_shares(xs, params);
            let sum: f64 = gamma.iter().zip(xs).map(|(g, &x)| g * profile.capacity(x)).sum();
            any_los_probability(&p) * sum
        }
    }
}

/// Weights `(w_1, w_2)` with conditional capacity `w_1 C(x_1) + w_2 C(x_2)`
/// for two APs.
fn pair_weights(kind: StrategyKind, x1: f64, x2: f64, params: &SystemParams) -> (f64, f64) {
    let p1 = los_probability(x1, params);
    let p2 = los_probability(x2, params);
    match kind {
        StrategyKind::Sc => (p1, 0.0),
        StrategyKind::ClosestMc(_) => (p1, (1.0 - p1) * p2),
        StrategyKind::ReactiveMc(_) => {
            let pc = any_los_probability(&[p1, p2]);
            let gamma = reactive_shares(&[x1, x2], params);
            (pc * gamma[0], pc * gamma[1])
        }
    }
}

pub fn ergodic_capacity_sc<P: CapacityProfile + ?Sized>(
    params: &SystemParams,
    profile: &P,
    opts: &AnalysisOptions,
) -> MetricResult {
    let v = expect_closest(params, opts, profile.breakpoints(), |x| {
        conditional_capacity(StrategyKind::Sc, &[x], params, profile)
    });
    MetricResult::exact(v, Estimator::Quadrature)
}

/// Average capacity of a multi-connectivity strategy.
///
/// Two APs are integrated by nested quadrature. Higher degrees sample the
/// difference to the two-AP integrand and add it to the two-AP value.
pub fn ergodic_capacity_mc<P: CapacityProfile + ?Sized>(
    kind: StrategyKind,
    params: &SystemParams,
    profile: &P,
    opts: &AnalysisOptions,
) -> Result<MetricResult> {
    if kind == StrategyKind::Sc {
        return Err(Error::InvalidParameter {
            name: "strategy",
            reason: "expected a multi-connectivity strategy".into(),
        });
    }
    kind.validate()?;
    let n = kind.degree();
    let pair = expect_pair_split(
        params,
        opts,
        profile.breakpoints(),
        |x1, x2| pair_weights(kind, x1, x2, params),
        |x| profile.capacity(x),
    );
    if n == 2 {
        return Ok(MetricResult::exact(pair, Estimator::Quadrature));
    }
    let m = expect_sampled(n, params, opts, |xs| {
        conditional_capacity(kind, xs, params, profile) - conditional_capacity(kind, &xs[..2], params, profile)
    });
    Ok(MetricResult {
        value: pair + m.mean,
        estimator: Estimator::MonteCarlo,
        std_error: m.std_error(),
    })
}

pub fn ergodic_capacity<P: CapacityProfile + ?Sized>(
    kind: StrategyKind,
    params: &SystemParams,
    profile: &P,
    opts: &AnalysisOptions,
) -> Result<MetricResult> {
    match kind {
        StrategyKind::Sc => Ok(ergodic_capacity_sc(params, profile, opts)),
        _ => ergodic_capacity_mc(kind, params, profile, opts),
    }
}

/// Relative capacity gain of `kind` over single connectivity.
pub fn capacity_gain<P: CapacityProfile + ?Sized>(
    kind: StrategyKind,
    params: &SystemParams,
    profile: &P,
    opts: &AnalysisOptions,
) -> Result<MetricResult> {
    let sc = ergodic_capacity_sc(params, profile, opts).value;
    if !(sc > 0.0) {
        return Err(Error::ZeroBaseline);
    }
    let mc = ergodic_capacity(kind, params, profile, opts)?;
    Ok(MetricResult {
        value: (mc.value - sc) / sc,
        estimator: mc.estimator,
        std_error: mc.std_error / sc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{synthetic, LinkBudget, TransmissionWindow};

    fn params() -> SystemParams {
        SystemParams::default()
    }

    fn curve(p: &SystemParams, p_t_dbm: f64) -> CapacityCurve {
        let model = ChannelModel::new(
            synthetic::bundled_w1(),
            TransmissionWindow::w1(),
            LinkBudget::indoor(p_t_dbm),
            p.height_diff(),
        )
        .unwrap();
        capacity_curve(model, p, 4, &AnalysisOptions::default()).unwrap()
    }

    #[test]
    fn pair_weights_reproduce_conditional_capacity() {
        let p = params();
        let c = curve(&p, 20.0);
        for (x1, x2) in [(1.2, 1.3), (3.0, 6.0), (4.0, 25.0)] {
            for kind in [StrategyKind::ClosestMc(2), StrategyKind::ReactiveMc(2)] {
                let (w1, w2) = pair_weights(kind, x1, x2, &p);
                let direct = conditional_capacity(kind, &[x1, x2], &p, &c);
                let split = w1 * c.capacity(x1) + w2 * c.capacity(x2);
                assert!(((direct - split) / direct).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn split_pair_quadrature_against_sampling() {
        let p = params().with_lambda_a(5e-3);
        let c = curve(&p, 20.0);
        let opts = AnalysisOptions::default().with_samples(400_000);
        for kind in [StrategyKind::ClosestMc(2), StrategyKind::ReactiveMc(2)] {
            let q = ergodic_capacity_mc(kind, &p, &c, &opts).unwrap().value;
            let m = expect_sampled(2, &p, &opts, |xs| conditional_capacity(kind, xs, &p, &c));
            assert!((q - m.mean).abs() < 4.0 * m.std_error(), "{kind}: {q} vs {}", m.mean);
        }
    }

    #[test]
    fn constant_channel_without_blockers() {
        let p = params().with_lambda_b(0.0);
        let opts = AnalysisOptions::default();
        let v = ergodic_capacity_sc(&p, &ConstantCapacity(3.5e9), &opts).value;
        assert!((v - 3.5e9).abs() < 1e-6 * 3.5e9);
        for kind in [StrategyKind::ClosestMc(2), StrategyKind::ReactiveMc(2)] {
            let v = ergodic_capacity_mc(kind, &p, &ConstantCapacity(3.5e9), &opts)
                .unwrap()
                .value;
            assert!((v - 3.5e9).abs() < 1e-6 * 3.5e9, "{kind}");
        }
    }

    #[test]
    fn constant_channel_gives_connection_probability() {
        let p = params();
        let opts = AnalysisOptions::default().with_samples(50_000);
        let c = ConstantCapacity(1.0);
        let sc = ergodic_capacity_sc(&p, &c, &opts).value;
        assert!((sc - super::super::conn_prob_sc(&p).value).abs() < 1e-8);
        let mc = ergodic_capacity_mc(StrategyKind::ClosestMc(2), &p, &c, &opts)
            .unwrap()
            .value;
        let pc = super::super::conn_prob_mc(2, &p, &opts).value;
        assert!((mc - pc).abs() < 1e-8);
    }

    #[test]
    fn closest_mc_without_blockers_equals_closest_ap() {
        let p = params().with_lambda_b(0.0);
        let curve = curve(&p, 20.0);
        let opts = AnalysisOptions::default().with_samples(20_000);
        let sc = ergodic_capacity_sc(&p, &curve, &opts).value;
        for n in [2, 3] {
            let mc = ergodic_capacity_mc(StrategyKind::ClosestMc(n), &p, &curve, &opts).unwrap();
            assert!(((mc.value - sc) / sc).abs() < 1e-6, "n={n}: {} vs {sc}", mc.value);
        }
    }

    #[test]
    fn tiny_power_gives_tiny_capacity() {
        let p = params();
        let opts = AnalysisOptions::default();
        let hi = ergodic_capacity_sc(&p, &curve(&p, 20.0), &opts).value;
        let lo = ergodic_capacity_sc(&p, &curve(&p, -80.0), &opts).value;
        assert!(lo < 1e-6 * hi);
    }

    #[test]
    fn sc_kind_rejected_by_mc_evaluator() {
        let p = params();
        let opts = AnalysisOptions::default();
        assert!(ergodic_capacity_mc(StrategyKind::Sc, &p, &ConstantCapacity(1.0), &opts).is_err());
        assert!(ergodic_capacity_mc(StrategyKind::ClosestMc(1), &p, &ConstantCapacity(1.0), &opts).is_err());
    }

    #[test]
    fn gain_needs_positive_baseline() {
        let p = params();
        let opts = AnalysisOptions::default();
        assert!(matches!(
            capacity_gain(StrategyKind::ClosestMc(2), &p, &ConstantCapacity(0.0), &opts),
            Err(Error::ZeroBaseline)
        ));
    }

    #[test]
    fn closest_gain_grows_with_degree() {
        let p = params().with_lambda_a(1.5e-2);
        let curve = curve(&p, 20.0);
        let opts = AnalysisOptions::default().with_samples(100_000);
        let g2 = capacity_gain(StrategyKind::ClosestMc(2), &p, &curve, &opts).unwrap();
        let g3 = capacity_gain(StrategyKind::ClosestMc(3), &p, &curve, &opts).unwrap();
        assert!(g2.value > 0.0);
        assert!(g3.value > g2.value);
    }
}
