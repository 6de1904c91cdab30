//! Tabulated link capacity `C(x)`.
//!
//! `C(x)` jumps wherever the usable band gains or loses a sub-band. The
//! curve locates those jumps by bisection and stores, on each interval of
//! constant band, values and exact slopes on a uniform grid for cubic
//! Hermite interpolation. Integrators use [`CapacityCurve::breakpoints`] to
//! split their domains so every piece they see is smooth.

use super::{band_from_losses, ChannelModel};
use crate::error::{Error, Result};

/// Grid spacing inside a smooth piece. Hermite error scales with `h^4`,
/// which keeps interpolation below 1e-10 relative at this spacing.
const NODE_SPACING: f64 = 5e-3;

#[derive(Debug, Clone)]
struct Piece {
    start: f64,
    end: f64,
    first: usize,
    count: usize,
    step: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl Piece {
    fn eval(&self, x: f64) -> f64 {
        let n = self.values.len() - 1;
        let pos = ((x - self.start) / self.step).clamp(0.0, n as f64);
        let i = (pos.floor() as usize).min(n.saturating_sub(1));
        let t = pos - i as f64;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.slopes[i] * self.step, self.slopes[i + 1] * self.step);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * m0 + (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * m1
    }
}

/// Piecewise-smooth tabulation of `C(x)` over `[x_lo, x_hi]`, with exact
/// evaluation as fallback outside that range.
#[derive(Debug, Clone)]
pub struct CapacityCurve {
    model: ChannelModel<f64>,
    pieces: Vec<Piece>,
    breakpoints: Vec<f64>,
}

impl CapacityCurve {
    pub fn new(model: ChannelModel<f64>, x_lo: f64, x_hi: f64) -> Result<Self> {
        if !(x_lo >= 0.0 && x_hi > x_lo && x_hi.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "capacity range",
                reason: format!("need 0 <= x_lo < x_hi < inf, got [{x_lo}, {x_hi}]"),
            });
        }
        let band_at = |x: f64| -> Result<(usize, usize)> { Ok(band_from_losses(&model.losses(x)?)) };

        let mut breakpoints = Vec::new();
        let steps = ((x_hi - x_lo) / NODE_SPACING).ceil() as usize;
        let mut prev_x = x_lo;
        let mut prev_band = band_at(x_lo)?;
        for i in 1..=steps {
            let x = if i == steps {
                x_hi
            } else {
                x_lo + i as f64 * NODE_SPACING
            };
            let band = band_at(x)?;
            // several changes may hide inside one step; peel them off one at a time
            let mut a = prev_x;
            let mut band_a = prev_band;
            while band_a != band {
                let (mut lo, mut hi) = (a, x);
                let mut band_hi = band;
                while hi - lo > 1e-12 * hi.max(1.0) {
                    let mid = 0.5 * (lo + hi);
                    let bm = band_at(mid)?;
                    if bm == band_a {
                        lo = mid;
                    } else {
                        hi = mid;
                        band_hi = bm;
                    }
                }
                breakpoints.push(hi);
                a = hi;
                band_a = band_hi;
            }
            prev_x = x;
            prev_band = band;
        }

        let mut edges = Vec::with_capacity(breakpoints.len() + 2);
        edges.push(x_lo);
        edges.extend(breakpoints.iter().copied());
        edges.push(x_hi);
        let mut pieces = Vec::with_capacity(edges.len() - 1);
        for w in edges.windows(2) {
            let (start, end) = (w[0], w[1]);
            let (first, count) = band_at(0.5 * (start + end))?;
            let intervals = (((end - start) / NODE_SPACING).ceil() as usize).max(1);
            let step = (end - start) / intervals as f64;
            let (values, slopes) = (0..=intervals)
                .map(|i| {
                    let x = if i == intervals { end } else { start + i as f64 * step };
                    model.capacity_and_slope_on_band(x, first, count)
                })
                .unzip();
            pieces.push(Piece {
                start,
                end,
                first,
                count,
                step,
                values,
                slopes,
            });
        }
        Ok(Self {
            model,
            pieces,
            breakpoints,
        })
    }

    pub fn model(&self) -> &ChannelModel<f64> {
        &self.model
    }

    pub fn x_lo(&self) -> f64 {
        self.pieces[0].start
    }

    pub fn x_hi(&self) -> f64 {
        self.pieces[self.pieces.len() - 1].end
    }

    /// Distances at which the usable band changes, ascending.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Usable sub-band range `(first, count)` at `x`.
    pub fn band(&self, x: f64) -> Option<(usize, usize)> {
        self.piece(x).map(|p| (p.first, p.count))
    }

    fn piece(&self, x: f64) -> Option<&Piece> {
        if !(x >= self.x_lo() && x <= self.x_hi()) {
            return None;
        }
        let idx = self.pieces.partition_point(|p| p.end < x);
        self.pieces.get(idx.min(self.pieces.len() - 1))
    }

    /// `C(x)` in bit/s.
    pub fn capacity(&self, x: f64) -> f64 {
        match self.piece(x) {
            Some(p) => p.eval(x),
            None => self
                .model
                .capacity(x)
                .expect("distance is non-negative and channel validated"),
        }
    }
}
