//! Expectations over the ordered AP distances.

use super::{AnalysisOptions, SHARED_DRAWS};
use crate::blockage::SystemParams;
use crate::distances::{fill_ordered, joint_pdf_unchecked, ordered_truncation_radius, pdf_closest, pdf_next};
use crate::montecarlo::{estimate, Moments};
use crate::quadrature::{integrate_split, split_points};

/// `E[f(x_1)]` by adaptive quadrature, split at `breakpoints`.
pub(crate) fn expect_closest<F: Fn(f64) -> f64>(
    params: &SystemParams,
    opts: &AnalysisOptions,
    breakpoints: &[f64],
    f: F,
) -> f64 {
    let hi = ordered_truncation_radius(1, params, opts.tail);
    let pts = split_points(params.r0, hi, breakpoints);
    integrate_split(&mut |x| f(x) * pdf_closest(x, params), &pts, &opts.quad).value
}

/// `E[g(x_1, x_2)]` by nested adaptive quadrature. The inner integral runs
/// over `x_2 > x_1` with its own tail cut.
pub(crate) fn expect_pair<G: Fn(f64, f64) -> f64>(
    params: &SystemParams,
    opts: &AnalysisOptions,
    breakpoints: &[f64],
    g: G,
) -> f64 {
    let c = params.omega * params.lambda_a / 2.0;
    let inner_span = (1.0 / opts.tail).ln() / c;
    let outer_hi = ordered_truncation_radius(1, params, opts.tail);
    let outer = split_points(params.r0, outer_hi, breakpoints);
    let mut inner_opts = opts.quad;
    inner_opts.rel_tol *= 0.1;
    integrate_split(
        &mut |x1| {
            let hi = (x1 * x1 + inner_span).sqrt();
            let pts = split_points(x1, hi, breakpoints);
            let inner = integrate_split(&mut |x2| g(x1, x2) * pdf_next(x2, x1, params), &pts, &inner_opts);
            inner.value * pdf_closest(x1, params)
        },
        &outer,
        &opts.quad,
    )
    .value
}

/// `E[w_1(x_1, x_2) c(x_1) + w_2(x_1, x_2) c(x_2)]` for smooth weights and
/// a `c` that jumps at `breakpoints`.
///
/// Each term is integrated with the jumpy variable outside, so every inner
/// integral is smooth: the first over `x_2 > x_1` given `x_1`, the second
/// over `r0 < x_1 < x_2` against the joint density.
pub(crate) fn expect_pair_split<W, C>(
    params: &SystemParams,
    opts: &AnalysisOptions,
    breakpoints: &[f64],
    weights: W,
    c: C,
) -> f64
where
    W: Fn(f64, f64) -> (f64, f64),
    C: Fn(f64) -> f64,
{
    let half = params.omega * params.lambda_a / 2.0;
    let inner_span = (1.0 / opts.tail).ln() / half;
    let mut inner_opts = opts.quad;
    inner_opts.rel_tol *= 0.1;

    let hi1 = ordered_truncation_radius(1, params, opts.tail);
    let first = integrate_split(
        &mut |x1| {
            let hi = (x1 * x1 + inner_span).sqrt();
            let inner = integrate_split(
                &mut |x2| weights(x1, x2).0 * pdf_next(x2, x1, params),
                &[x1, hi],
                &inner_opts,
            );
            c(x1) * inner.value * pdf_closest(x1, params)
        },
        &split_points(params.r0, hi1, breakpoints),
        &opts.quad,
    )
    .value;

    let hi2 = ordered_truncation_radius(2, params, opts.tail);
    let second = integrate_split(
        &mut |x2| {
            if x2 <= params.r0 {
                return 0.0;
            }
            let inner = integrate_split(
                &mut |x1| weights(x1, x2).1 * joint_pdf_unchecked(&[x1, x2], params),
                &[params.r0, x2],
                &inner_opts,
            );
            c(x2) * inner.value
        },
        &split_points(params.r0, hi2, breakpoints),
        &opts.quad,
    )
    .value;
    first + second
}

/// Sample moments of `h(x_1..x_n)` over exact draws of the ordered
/// distances. At least [`SHARED_DRAWS`] distances are drawn per sample.
pub(crate) fn expect_sampled<H: Fn(&[f64]) -> f64 + Sync>(
    n: usize,
    params: &SystemParams,
    opts: &AnalysisOptions,
    h: H,
) -> Moments {
    let draws = n.max(SHARED_DRAWS);
    let m = estimate(
        opts.seed,
        opts.samples,
        1,
        || Vec::with_capacity(draws),
        |rng, xs, out| {
            fill_ordered(xs, draws, params, rng);
            out[0] = h(&xs[..n]);
        },
    );
    m[0]
}
