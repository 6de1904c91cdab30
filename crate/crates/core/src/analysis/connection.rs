//! Probability that at least one associated AP is in LOS.

use super::expectation::{expect_closest, expect_pair, expect_sampled};
use super::weights::any_los_probability;
use super::{AnalysisOptions, Estimator, MetricResult};
use crate::blockage::{los_probability, SystemParams};
use crate::scalar::Scalar;

/// Closed-form single-connectivity connection probability
///
/// ```text
/// zeta e^{-beta r0} [1 - beta sqrt(pi / (2 lambda_a omega)) e^{w^2} erfc(w)],
/// w = (beta + lambda_a r0 omega) / sqrt(2 lambda_a omega)
/// ```
///
/// using the scaled `erfcx` so large `w` does not overflow.
pub fn connection_probability<T: Scalar>(params: &SystemParams<T>) -> T {
    let stats = params.blockage_stats();
    let rate = params.lambda_a * params.omega;
    let w = (stats.beta + rate * params.r0) / (T::two() * rate).sqrt();
    let bracket = T::one() - stats.beta * (T::PI() / (T::two() * rate)).sqrt() * w.erfcx();
    stats.zeta * (-stats.beta * params.r0).exp() * bracket
}

pub fn conn_prob_sc(params: &SystemParams) -> MetricResult {
    MetricResult::exact(connection_probability(params), Estimator::ClosedForm)
}

/// The same quantity by direct quadrature of `E[p_L(x_1)]`.
pub fn conn_prob_sc_quadrature(params: &SystemParams, opts: &AnalysisOptions) -> MetricResult {
    let v = expect_closest(params, opts, &[], |x| los_probability(x, params));
    MetricResult::exact(v, Estimator::Quadrature)
}

fn pair_probability(x1: f64, x2: f64, params: &SystemParams) -> f64 {
    any_los_probability(&[los_probability(x1, params), los_probability(x2, params)])
}

/// Connection probability with `n` associated APs, `E[1 - prod(1 - p_L(x_i))]`.
///
/// Closed form for one AP, nested quadrature for two. Higher degrees add a
/// sampled correction to the two-AP value: `E[h_n - h_2]` has far smaller
/// variance than `E[h_n]` because the closest two links dominate.
pub fn conn_prob_mc(n: usize, params: &SystemParams, opts: &AnalysisOptions) -> MetricResult {
    match n {
        0 => MetricResult::exact(0.0, Estimator::ClosedForm),
        1 => conn_prob_sc(params),
        2 => {
            let v = expect_pair(params, opts, &[], |x1, x2| pair_probability(x1, x2, params));
            MetricResult::exact(v, Estimator::Quadrature)
        }
        _ => {
            let base = conn_prob_mc(2, params, opts).value;
            let m = expect_sampled(n, params, opts, |xs| {
                let blocked_pair = (1.0 - los_probability(xs[0], params)) * (1.0 - los_probability(xs[1], params));
                let blocked_rest = xs[2..]
                    .iter()
                    .fold(1.0, |acc, &x| acc * (1.0 - los_probability(x, params)));
                blocked_pair * (1.0 - blocked_rest)
            });
            MetricResult {
                value: (base + m.mean).clamp(0.0, 1.0),
                estimator: Estimator::MonteCarlo,
                std_error: m.std_error(),
            }
        }
    }
}
