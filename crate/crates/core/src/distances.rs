//! Distances from the UE to its N closest APs inside the non-self-blockage
//! sector, conditioned on every AP lying beyond `r0`.
//!
//! APs form a PPP of density `lambda_a`; restricted to a sector of angle
//! `omega`, the area swept out to radius `x` is `(omega / 2) x^2`, so the
//! ordered distances have the joint density
//!
//! ```text
//! f(x_1..x_N) = (omega lambda_a)^N exp(omega lambda_a r0^2 / 2) prod(x_i) exp(-omega lambda_a x_N^2 / 2)
//! ```
//!
//! on `r0 <= x_1 <= ... <= x_N`.

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::blockage::SystemParams;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Sorted distances to the associated APs, closest first.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedDistances<T = f64> {
    xs: Vec<T>,
}

impl<T: Scalar> OrderedDistances<T> {
    /// Validates `r0 <= xs[0] <= xs[1] <= ...`.
    pub fn new(xs: Vec<T>, r0: T) -> Result<Self> {
        let ordered =
            !xs.is_empty() && xs[0] >= r0 && xs.windows(2).all(|w| w[0] <= w[1]) && xs.iter().all(|x| x.is_finite());
        if !ordered {
            return Err(Error::UnorderedDistances(format!("{xs:?} with r0 = {r0}")));
        }
        Ok(Self { xs })
    }

    /// Skips validation; callers guarantee ordering.
    pub(crate) fn from_sorted(xs: Vec<T>) -> Self {
        Self { xs }
    }

    pub fn as_slice(&self) -> &[T] {
        &self.xs
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn into_vec(self) -> Vec<T> {
        self.xs
    }
}

#[inline]
fn half_rate<T: Scalar>(params: &SystemParams<T>) -> T {
    params.omega * params.lambda_a / T::two()
}

/// Density of the closest in-sector AP distance.
pub fn pdf_closest<T: Scalar>(x1: T, params: &SystemParams<T>) -> T {
    if x1 < params.r0 {
        return T::zero();
    }
    let c = half_rate(params);
    params.omega * params.lambda_a * x1 * (c * (params.r0 * params.r0 - x1 * x1)).exp()
}

/// Density of `x_{k+1}` given `x_k`: `omega lambda_a x exp(-(omega lambda_a / 2)(x^2 - x_k^2))`.
pub fn pdf_next<T: Scalar>(x_next: T, x_prev: T, params: &SystemParams<T>) -> T {
    if x_next < x_prev {
        return T::zero();
    }
    let c = half_rate(params);
    params.omega * params.lambda_a * x_next * (-c * (x_next * x_next - x_prev * x_prev)).exp()
}

/// Joint density of the N closest distances.
pub fn joint_pdf<T: Scalar>(xs: &[T], params: &SystemParams<T>) -> Result<T> {
    let ordered = !xs.is_empty() && xs.windows(2).all(|w| w[0] <= w[1]);
    if !ordered {
        return Err(Error::UnorderedDistances(format!("{xs:?}")));
    }
    if xs[0] < params.r0 {
        return Ok(T::zero());
    }
    Ok(joint_pdf_unchecked(xs, params))
}

/// Joint density for inputs already known to be ordered and `>= r0`.
#[inline]
pub(crate) fn joint_pdf_unchecked<T: Scalar>(xs: &[T], params: &SystemParams<T>) -> T {
    let n = xs.len();
    let c = half_rate(params);
    let rate = params.omega * params.lambda_a;
    let prod = xs.iter().fold(T::one(), |acc, &x| acc * rate * x);
    let last = xs[n - 1];
    prod * (c * (params.r0 * params.r0 - last * last)).exp()
}

/// Radius beyond which the closest-AP tail mass drops below `tail`:
/// `r0 + sqrt(2 ln(1/tail) / (omega lambda_a))`.
pub fn truncation_radius<T: Scalar>(params: &SystemParams<T>, tail: T) -> T {
    params.r0 + (T::two() * (-tail.ln()) / (params.omega * params.lambda_a)).sqrt()
}

/// Radius beyond which the `n`-th closest distance has tail mass below
/// `tail`.
///
/// `(omega lambda_a / 2)(x_n^2 - r0^2)` is Gamma(n, 1); its survival
/// function `exp(-s) sum_{k<n} s^k / k!` is solved for `s` by bisection.
pub fn ordered_truncation_radius(n: usize, params: &SystemParams<f64>, tail: f64) -> f64 {
    let survival = |s: f64| {
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..n {
            term *= s / k as f64;
            sum += term;
        }
        (-s).exp() * sum
    };
    let mut hi = -tail.ln();
    while survival(hi) > tail {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if survival(mid) > tail {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (params.r0 * params.r0 + hi / half_rate(params)).sqrt()
}

/// Draws the `n` closest in-sector AP distances beyond `r0`.
///
/// The swept areas `(omega / 2)(x_{i+1}^2 - x_i^2)` between consecutive
/// points of a PPP are independent exponentials of rate `lambda_a`.
pub fn sample_ordered<R: Rng + ?Sized>(n: usize, params: &SystemParams<f64>, rng: &mut R) -> OrderedDistances<f64> {
    let mut xs = Vec::with_capacity(n);
    fill_ordered(&mut xs, n, params, rng);
    OrderedDistances::from_sorted(xs)
}

/// Allocation-free variant of [`sample_ordered`] for hot loops.
pub fn fill_ordered<R: Rng + ?Sized>(out: &mut Vec<f64>, n: usize, params: &SystemParams<f64>, rng: &mut R) {
    out.clear();
    let c = half_rate(params);
    let mut sq = params.r0 * params.r0;
    for _ in 0..n {
        let e: f64 = Exp1.sample(rng);
        sq += e / c;
        out.push(sq.sqrt());
    }
}
