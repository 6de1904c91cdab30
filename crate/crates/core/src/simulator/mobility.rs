//! Random directional mobility of blockers inside a disc arena.
//!
//! A blocker walks at constant speed along a uniformly drawn heading for
//! an exponentially distributed time, then draws a new heading. At the
//! arena boundary it reflects specularly. Uniform position with isotropic
//! heading is invariant under both moves, so a population started from a
//! PPP stays a PPP of the same density.

use rand::Rng;
use rand_distr::{Distribution, Exp};

use super::geometry::Point;

/// Mean leg duration, seconds.
pub const DEFAULT_MEAN_LEG: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RdmModel {
    pub arena_radius: f64,
    pub speed: f64,
    pub mean_leg: f64,
}

impl RdmModel {
    pub fn new(arena_radius: f64, speed: f64) -> Self {
        Self {
            arena_radius,
            speed,
            mean_leg: DEFAULT_MEAN_LEG,
        }
    }

    fn leg<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        Exp::new(1.0 / self.mean_leg).expect("positive mean leg").sample(rng)
    }

    /// Blocker drawn from the stationary law: uniform in the arena,
    /// uniform heading, exponential residual leg.
    pub fn stationary<R: Rng + ?Sized>(&self, rng: &mut R) -> BlockerState {
        let r = self.arena_radius * rng.random::<f64>().sqrt();
        let phi = std::f64::consts::TAU * rng.random::<f64>();
        BlockerState {
            position: [r * phi.cos(), r * phi.sin()],
            heading: std::f64::consts::TAU * rng.random::<f64>(),
            time_to_turn: self.leg(rng),
        }
    }

    /// Advances `state` by `dt`, reporting each straight piece of the path
    /// as `(start_offset, start, velocity, duration)`.
    pub fn advance<R, F>(&self, state: &mut BlockerState, dt: f64, rng: &mut R, mut emit: F)
    where
        R: Rng + ?Sized,
        F: FnMut(f64, Point, Point, f64),
    {
        let mut offset = 0.0;
        let mut remaining = dt;
        while remaining > 0.0 {
            let turn = state.time_to_turn <= remaining;
            let step = if turn { state.time_to_turn } else { remaining };
            self.glide(state, offset, step, &mut emit);
            offset += step;
            remaining -= step;
            if turn {
                state.heading = std::f64::consts::TAU * rng.random::<f64>();
                state.time_to_turn = self.leg(rng);
            } else {
                state.time_to_turn -= step;
            }
        }
    }

    /// Straight motion for `duration`, reflecting off the boundary.
    fn glide<F: FnMut(f64, Point, Point, f64)>(
        &self,
        state: &mut BlockerState,
        offset: f64,
        duration: f64,
        emit: &mut F,
    ) {
        let r = self.arena_radius;
        let vv = self.speed * self.speed;
        let mut t = offset;
        let mut left = duration;
        let mut stalls = 0;
        while left > 0.0 {
            let p = state.position;
            let v = [self.speed * state.heading.cos(), self.speed * state.heading.sin()];
            let pv = p[0] * v[0] + p[1] * v[1];
            let slack = (r * r - p[0] * p[0] - p[1] * p[1]).max(0.0);
            let hit = (-pv + (pv * pv + vv * slack).sqrt()) / vv;
            if hit >= left {
                emit(t, p, v, left);
                state.position = [p[0] + v[0] * left, p[1] + v[1] * left];
                return;
            }
            if hit > 0.0 {
                emit(t, p, v, hit);
                stalls = 0;
            } else {
                stalls += 1;
            }
            let q = [p[0] + v[0] * hit, p[1] + v[1] * hit];
            let qn = q[0].hypot(q[1]);
            let n = [q[0] / qn, q[1] / qn];
            let vn = v[0] * n[0] + v[1] * n[1];
            let reflected = if stalls > 1 {
                // grazing contact at rounding level: head straight back in
                [-n[0], -n[1]]
            } else {
                [v[0] - 2.0 * vn * n[0], v[1] - 2.0 * vn * n[1]]
            };
            state.position = [n[0] * r, n[1] * r];
            state.heading = reflected[1].atan2(reflected[0]);
            t += hit;
            left -= hit;
        }
    }
}

/// Kinematic state of one blocker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockerState {
    pub position: Point,
    /// Direction of travel, radians.
    pub heading: f64,
    /// Time left on the current leg, seconds.
    pub time_to_turn: f64,
}

/// Moves a blocker forward by `dt` seconds.
pub fn rdm_step<R: Rng + ?Sized>(state: BlockerState, dt: f64, model: &RdmModel, rng: &mut R) -> BlockerState {
    let mut s = state;
    model.advance(&mut s, dt, rng, |_, _, _, _| {});
    s
}
