//! Static and temporal blockage statistics of a single AP-UE link.
//!
//! Human blockers are cylinders of radius `r_b` and height `h_b` scattered
//! as a Poisson point process. A link of 2D length `x` is blocked whenever a
//! blocker centre falls inside a `2 r_b` by `d(x)` rectangle that starts at
//! the UE and points toward the AP.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Scenario constants. Lengths in metres, densities per square metre,
/// angles in radians, speeds in metres per second.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams<T = f64> {
    /// AP height.
    pub h_a: T,
    /// UE height.
    pub h_u: T,
    /// Blocker height.
    pub h_b: T,
    /// Blocker radius.
    pub r_b: T,
    /// Blocker density.
    pub lambda_b: T,
    /// AP density.
    pub lambda_a: T,
    /// Blocker speed.
    pub v_b: T,
    /// Non-self-blockage angle, `2*pi - omega_0`.
    pub omega: T,
    /// Minimum UE-AP distance.
    pub r0: T,
}

impl<T: Scalar> Default for SystemParams<T> {
    /// Indoor scenario with half of the horizon blocked by the user's body.
    fn default() -> Self {
        Self {
            h_a: T::lit(3.0),
            h_u: T::lit(1.2),
            h_b: T::lit(1.7),
            r_b: T::lit(0.3),
            lambda_b: T::lit(0.2),
            lambda_a: T::lit(1e-2),
            v_b: T::one(),
            omega: T::PI(),
            r0: T::one(),
        }
    }
}

impl<T: Scalar> SystemParams<T> {
    pub fn with_lambda_a(mut self, lambda_a: T) -> Self {
        self.lambda_a = lambda_a;
        self
    }

    pub fn with_lambda_b(mut self, lambda_b: T) -> Self {
        self.lambda_b = lambda_b;
        self
    }

    /// Checks the physical constraints.
    ///
    /// A zero blocker density is accepted and means "never blocked"; the
    /// blocker height may coincide with the UE height (flat blockage zone).
    pub fn validate(&self) -> Result<()> {
        let invalid = |name: &'static str, reason: &str| {
            Err(Error::InvalidParameter {
                name,
                reason: reason.to_string(),
            })
        };
        let all_finite = [
            self.h_a,
            self.h_u,
            self.h_b,
            self.r_b,
            self.lambda_b,
            self.lambda_a,
            self.v_b,
            self.omega,
            self.r0,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !all_finite {
            return invalid("params", "all values must be finite");
        }
        if !(self.h_a > self.h_b && self.h_b >= self.h_u && self.h_u >= T::zero()) {
            return invalid("h_a/h_b/h_u", "require h_a > h_b >= h_u >= 0");
        }
        if self.r_b <= T::zero() {
            return invalid("r_b", "must be positive");
        }
        if self.lambda_b < T::zero() {
            return invalid("lambda_b", "must be non-negative");
        }
        if self.lambda_a <= T::zero() {
            return invalid("lambda_a", "must be positive");
        }
        if self.v_b <= T::zero() {
            return invalid("v_b", "must be positive");
        }
        if !(self.omega > T::zero() && self.omega <= T::two() * T::PI()) {
            return invalid("omega", "must lie in (0, 2*pi]");
        }
        if self.r0 <= T::zero() {
            return invalid("r0", "must be positive");
        }
        Ok(())
    }

    /// Slope of the blockage depth, `(h_b - h_u) / (h_a - h_u)`.
    #[inline]
    pub fn height_ratio(&self) -> T {
        (self.h_b - self.h_u) / (self.h_a - self.h_u)
    }

    /// Vertical AP-UE separation.
    #[inline]
    pub fn height_diff(&self) -> T {
        self.h_a - self.h_u
    }

    #[inline]
    pub fn blockage_stats(&self) -> BlockageStats<T> {
        BlockageStats::new(self)
    }
}

/// The two constants of the LOS probability `zeta * exp(-beta x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockageStats<T = f64> {
    pub zeta: T,
    pub beta: T,
}

impl<T: Scalar> BlockageStats<T> {
    pub fn new(p: &SystemParams<T>) -> Self {
        let two = T::two();
        Self {
            zeta: (-two * p.lambda_b * p.r_b * p.r_b).exp(),
            beta: two * p.lambda_b * p.r_b * p.height_ratio(),
        }
    }

    #[inline]
    pub fn los_probability(&self, x: T) -> T {
        self.zeta * (-self.beta * x).exp()
    }
}

/// Mean duration of a non-blocked period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LosDuration<T = f64> {
    /// Finite mean, in seconds.
    Mean(T),
    /// No blockers exist; the link stays LOS forever.
    NeverBlocked,
}

impl<T: Scalar> LosDuration<T> {
    pub fn mean(self) -> Option<T> {
        match self {
            LosDuration::Mean(m) => Some(m),
            LosDuration::NeverBlocked => None,
        }
    }
}

/// Depth of the LOS blockage zone, `d(x)`.
#[inline]
pub fn blockage_depth<T: Scalar>(x: T, params: &SystemParams<T>) -> T {
    params.height_ratio() * x + params.r_b
}

/// Probability that a link of 2D length `x` is LOS.
#[inline]
pub fn los_probability<T: Scalar>(x: T, params: &SystemParams<T>) -> T {
    params.blockage_stats().los_probability(x)
}

/// Rate at which blockers cut a link, `mu_B(x) = 2 r_b v_b lambda_b d(x)`.
#[inline]
pub fn temporal_density<T: Scalar>(x: T, params: &SystemParams<T>) -> T {
    T::two() * params.r_b * params.v_b * params.lambda_b * blockage_depth(x, params)
}

/// Mean non-blocked duration `1 / mu_B(x)`.
pub fn mean_los_duration<T: Scalar>(x: T, params: &SystemParams<T>) -> LosDuration<T> {
    let mu = temporal_density(x, params);
    if mu <= T::zero() {
        LosDuration::NeverBlocked
    } else {
        LosDuration::Mean(mu.recip())
    }
}

/// Mean blocked duration, the value forced by the renewal identity
/// `p_L = E[t_LOS] / (E[t_LOS] + E[t_NLOS])`.
pub fn mean_nlos_duration<T: Scalar>(x: T, params: &SystemParams<T>) -> Result<T> {
    if params.lambda_b <= T::zero() {
        return Err(Error::NeverBlocked);
    }
    let stats = params.blockage_stats();
    let decay = (-stats.beta * x).exp();
    // 1 - zeta e^{-beta x} without cancellation for thin blockage zones
    let exponent = T::two() * params.lambda_b * params.r_b * params.r_b + stats.beta * x;
    let num = -(-exponent).exp_m1();
    let den = T::two() * stats.zeta * params.r_b * params.v_b * params.lambda_b * blockage_depth(x, params) * decay;
    Ok(num / den)
}
