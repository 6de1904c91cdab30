//! Plane geometry of the LOS blockage zone.

use crate::blockage::{blockage_depth, SystemParams};

pub type Point = [f64; 2];

#[inline]
pub fn polar(r: f64, angle: f64) -> Point {
    [r * angle.cos(), r * angle.sin()]
}

#[inline]
pub fn norm(p: Point) -> f64 {
    p[0].hypot(p[1])
}

/// Blockage zone of one link: a `2 r_b` wide strip of length `d(x)` that
/// starts at the UE (origin) and points toward the AP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkZone {
    /// Unit vector toward the AP.
    dir: Point,
    depth: f64,
    half_width: f64,
}

impl LinkZone {
    pub fn new(distance: f64, azimuth: f64, params: &SystemParams) -> Self {
        Self {
            dir: [azimuth.cos(), azimuth.sin()],
            depth: blockage_depth(distance, params),
            half_width: params.r_b,
        }
    }

    pub fn depth(&self) -> f64 {
        self.depth
    }

    /// Radius of the smallest origin-centred disc holding the zone.
    pub fn reach(&self) -> f64 {
        self.depth.hypot(self.half_width)
    }

    /// Axis-aligned bounding box `(min, max)` of the zone.
    pub fn bounds(&self) -> (Point, Point) {
        let [c, s] = self.dir;
        let w = self.half_width;
        let corners = [
            [-s * w, c * w],
            [s * w, -c * w],
            [c * self.depth - s * w, s * self.depth + c * w],
            [c * self.depth + s * w, s * self.depth - c * w],
        ];
        let mut lo = corners[0];
        let mut hi = corners[0];
        for p in &corners[1..] {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        (lo, hi)
    }

    #[inline]
    fn frame(&self, p: Point) -> (f64, f64) {
        let along = p[0] * self.dir[0] + p[1] * self.dir[1];
        let across = -p[0] * self.dir[1] + p[1] * self.dir[0];
        (along, across)
    }

    /// Whether a blocker centred at `p` blocks the link.
    #[inline]
    pub fn contains(&self, p: Point) -> bool {
        let (u, v) = self.frame(p);
        (0.0..=self.depth).contains(&u) && v.abs() <= self.half_width
    }

    /// Sub-interval of `[0, duration]` during which `start + s * velocity`
    /// lies inside the zone.
    pub fn clip(&self, start: Point, velocity: Point, duration: f64) -> Option<(f64, f64)> {
        let (u0, v0) = self.frame(start);
        let (du, dv) = self.frame(velocity);
        let mut lo = 0.0f64;
        let mut hi = duration;
        for (p0, dp, a, b) in [(u0, du, 0.0, self.depth), (v0, dv, -self.half_width, self.half_width)] {
            if dp == 0.0 {
                if p0 < a || p0 > b {
                    return None;
                }
            } else {
                let (s1, s2) = ((a - p0) / dp, (b - p0) / dp);
                lo = lo.max(s1.min(s2));
                hi = hi.min(s1.max(s2));
            }
        }
        (lo < hi).then_some((lo, hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zone() -> LinkZone {
        LinkZone::new(9.0, 0.0, &SystemParams::default())
    }

    #[test]
    fn rectangle_membership() {
        let z = zone();
        assert!((z.depth() - 2.8).abs() < 1e-12);
        assert!(z.contains([1.0, 0.0]));
        assert!(z.contains([2.79, 0.29]));
        assert!(!z.contains([2.81, 0.0]));
        assert!(!z.contains([1.0, 0.31]));
        assert!(!z.contains([-0.01, 0.0]));
    }

    #[test]
    fn rotated_zone() {
        let z = LinkZone::new(9.0, std::f64::consts::FRAC_PI_2, &SystemParams::default());
        assert!(z.contains([0.0, 2.0]));
        assert!(!z.contains([2.0, 0.0]));
    }

    #[test]
    fn bounds_hold_the_zone() {
        let z = LinkZone::new(7.0, 2.2, &SystemParams::default());
        let (lo, hi) = z.bounds();
        for i in -20..=20 {
            for j in -20..=20 {
                let p = [f64::from(i) * 0.15, f64::from(j) * 0.15];
                if z.contains(p) {
                    assert!(p[0] >= lo[0] && p[0] <= hi[0] && p[1] >= lo[1] && p[1] <= hi[1]);
                }
            }
        }
        let axis = LinkZone::new(9.0, 0.0, &SystemParams::default()).bounds();
        assert!((axis.0[0]).abs() < 1e-12 && (axis.1[0] - 2.8).abs() < 1e-12);
        assert!((axis.0[1] + 0.3).abs() < 1e-12 && (axis.1[1] - 0.3).abs() < 1e-12);
    }

    #[test]
    fn crossing_times() {
        let z = zone();
        // walks along y = 0.1 from x = -1 at unit speed
        let (a, b) = z.clip([-1.0, 0.1], [1.0, 0.0], 10.0).unwrap();
        assert!((a - 1.0).abs() < 1e-12 && (b - 3.8).abs() < 1e-12);
        // stops halfway
        let (a, b) = z.clip([-1.0, 0.1], [1.0, 0.0], 2.0).unwrap();
        assert!((a - 1.0).abs() < 1e-12 && (b - 2.0).abs() < 1e-12);
        // misses entirely
        assert!(z.clip([-1.0, 0.5], [1.0, 0.0], 10.0).is_none());
        // crosses perpendicular
        let (a, b) = z.clip([1.0, -1.0], [0.0, 1.0], 10.0).unwrap();
        assert!((a - 0.7).abs() < 1e-12 && (b - 1.3).abs() < 1e-12);
    }

    #[test]
    fn clip_agrees_with_membership() {
        let z = LinkZone::new(5.0, 0.7, &SystemParams::default());
        let start = [-0.5, -0.8];
        let vel = [0.6, 0.8];
        let (a, b) = z.clip(start, vel, 5.0).unwrap();
        for i in 0..=500 {
            let s = 5.0 * f64::from(i) / 500.0;
            let p = [start[0] + s * vel[0], start[1] + s * vel[1]];
            let inside = s > a + 1e-9 && s < b - 1e-9;
            let outside = s < a - 1e-9 || s > b + 1e-9;
            if inside {
                assert!(z.contains(p));
            }
            if outside {
                assert!(!z.contains(p));
            }
        }
    }
}
