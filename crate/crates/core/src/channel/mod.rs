//! THz propagation: spreading plus molecular absorption loss, the
//! distance-dependent usable band inside a transmission window, and the
//! sub-band sum capacity of a single link.

mod curve;
mod spectrum_file;
pub mod synthetic;

pub use curve::CapacityCurve;
pub use spectrum_file::AbsorptionTable;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Sub-band width used throughout, 1 GHz.
pub const DEFAULT_SUB_BAND_HZ: f64 = 1e9;

/// Ratio defining the usable band: loss within 3 dB of the window minimum.
const USABLE_LOSS_RATIO: f64 = 2.0;

/// One AP-UE link: 2D ground distance and 3D propagation distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry<T = f64> {
    pub x: T,
    pub x_bar: T,
}

impl<T: Scalar> LinkGeometry<T> {
    /// Link with ground distance `x` and vertical AP-UE separation
    /// `height_diff`.
    pub fn new(x: T, height_diff: T) -> Result<Self> {
        if !(x >= T::zero()) || !x.is_finite() {
            return Err(Error::InvalidParameter {
                name: "x",
                reason: format!("2D distance must be finite and >= 0, got {x}"),
            });
        }
        Ok(Self {
            x,
            x_bar: (height_diff * height_diff + x * x).sqrt(),
        })
    }
}

/// A contiguous band split into sub-bands of width `delta_f`, aligned to
/// `lo`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionWindow<T = f64> {
    pub lo: T,
    pub hi: T,
    pub delta_f: T,
}

impl<T: Scalar> TransmissionWindow<T> {
    pub fn new(lo: T, hi: T, delta_f: T) -> Result<Self> {
        if !(lo < hi) || !(delta_f > T::zero()) {
            return Err(Error::InvalidParameter {
                name: "window",
                reason: format!("need lo < hi and delta_f > 0 (lo={lo}, hi={hi}, df={delta_f})"),
            });
        }
        let ratio = (hi - lo) / delta_f;
        if (ratio - ratio.round()).abs() > T::lit(1e-6) * ratio.max(T::one()) {
            return Err(Error::InvalidParameter {
                name: "window",
                reason: format!("width {} is not a multiple of delta_f {delta_f}", hi - lo),
            });
        }
        Ok(Self { lo, hi, delta_f })
    }

    /// 0.99-1.09 THz with 1 GHz sub-bands.
    pub fn w1() -> Self {
        Self::new(T::lit(0.99e12), T::lit(1.09e12), T::lit(DEFAULT_SUB_BAND_HZ)).expect("valid preset")
    }

    /// 3.34-3.49 THz with 1 GHz sub-bands.
    pub fn w2() -> Self {
        Self::new(T::lit(3.34e12), T::lit(3.49e12), T::lit(DEFAULT_SUB_BAND_HZ)).expect("valid preset")
    }

    pub fn num_sub_bands(&self) -> usize {
        ((self.hi - self.lo) / self.delta_f).round().to_usize().unwrap_or(0)
    }

    /// Centre frequency of sub-band `k` (zero based).
    #[inline]
    pub fn center(&self, k: usize) -> T {
        self.lo + (T::from_usize(k).unwrap() + T::lit(0.5)) * self.delta_f
    }
}

/// Transmit power, antenna gains and noise density, all linear SI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget<T = f64> {
    /// Total transmit power, W.
    pub p_t_total: T,
    /// AP antenna gain (linear).
    pub g_ap: T,
    /// UE antenna gain (linear).
    pub g_ue: T,
    /// Noise power spectral density, W/Hz.
    pub n0_density: T,
}

/// `10^(db/10)`.
pub fn db_to_linear<T: Scalar>(db: T) -> T {
    T::lit(10.0).powf(db / T::lit(10.0))
}

/// dBm to watts.
pub fn dbm_to_watts<T: Scalar>(dbm: T) -> T {
    db_to_linear(dbm) * T::lit(1e-3)
}

impl<T: Scalar> LinkBudget<T> {
    pub fn new(p_t_total: T, g_ap: T, g_ue: T, n0_density: T) -> Result<Self> {
        let b = Self {
            p_t_total,
            g_ap,
            g_ue,
            n0_density,
        };
        b.validate()?;
        Ok(b)
    }

    /// Builds a budget from logarithmic units: dBm, dBi, dBi, dBm/Hz.
    pub fn from_db(p_t_dbm: T, g_ap_dbi: T, g_ue_dbi: T, n0_dbm_per_hz: T) -> Result<Self> {
        Self::new(
            dbm_to_watts(p_t_dbm),
            db_to_linear(g_ap_dbi),
            db_to_linear(g_ue_dbi),
            dbm_to_watts(n0_dbm_per_hz),
        )
    }

    /// 25 dBi antennas at both ends, thermal noise floor of -174 dBm/Hz.
    pub fn indoor(p_t_dbm: T) -> Self {
        Self::from_db(p_t_dbm, T::lit(25.0), T::lit(25.0), T::lit(-174.0)).expect("valid preset")
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("p_t_total", self.p_t_total),
            ("g_ap", self.g_ap),
            ("g_ue", self.g_ue),
            ("n0_density", self.n0_density),
        ] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite and > 0, got {v}"),
                });
            }
        }
        Ok(())
    }
}

/// Absorption coefficient samples over one transmission window.
#[derive(Debug, Clone, PartialEq)]
pub struct AbsorptionSpectrum<T = f64> {
    samples: Vec<(T, T)>,
    window_lo: T,
    window_hi: T,
}

impl<T: Scalar> AbsorptionSpectrum<T> {
    /// `samples` are `(frequency Hz, k_abs 1/m)` pairs.
    pub fn new(samples: Vec<(T, T)>, window_lo: T, window_hi: T) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidSpectrum("no samples".into()));
        }
        if !(window_lo < window_hi) {
            return Err(Error::InvalidSpectrum(format!(
                "window_lo {window_lo} must be below window_hi {window_hi}"
            )));
        }
        for w in samples.windows(2) {
            if !(w[0].0 < w[1].0) {
                return Err(Error::InvalidSpectrum(format!(
                    "frequencies not strictly increasing at {} Hz",
                    w[1].0
                )));
            }
        }
        for &(f, k) in &samples {
            if f < window_lo || f > window_hi {
                return Err(Error::InvalidSpectrum(format!(
                    "sample at {f} Hz outside [{window_lo}, {window_hi}]"
                )));
            }
            if !(k >= T::zero()) || !k.is_finite() {
                return Err(Error::InvalidSpectrum(format!(
                    "negative or non-finite k_abs {k} at {f} Hz"
                )));
            }
        }
        Ok(Self {
            samples,
            window_lo,
            window_hi,
        })
    }

    /// Spectrum with the same coefficient everywhere in the window.
    pub fn flat(k_abs: T, window: &TransmissionWindow<T>) -> Result<Self> {
        let n = window.num_sub_bands();
        let samples = (0..=n)
            .map(|i| (window.lo + T::from_usize(i).unwrap() * window.delta_f, k_abs))
            .collect();
        Self::new(samples, window.lo, window.hi)
    }

    pub fn samples(&self) -> &[(T, T)] {
        &self.samples
    }

    pub fn window_lo(&self) -> T {
        self.window_lo
    }

    pub fn window_hi(&self) -> T {
        self.window_hi
    }

    /// Verifies that no gap between consecutive samples (or between the
    /// window edges and the outermost samples) exceeds `delta_f`.
    pub fn check_resolution(&self, delta_f: T) -> Result<()> {
        let tol = delta_f * T::lit(1e-9);
        let first = self.samples[0].0 - self.window_lo;
        let last = self.window_hi - self.samples[self.samples.len() - 1].0;
        if first > delta_f + tol || last > delta_f + tol {
            return Err(Error::InvalidSpectrum(format!(
                "edge gap exceeds sub-band width {delta_f} Hz"
            )));
        }
        if let Some(w) = self.samples.windows(2).find(|w| w[1].0 - w[0].0 > delta_f + tol) {
            return Err(Error::InvalidSpectrum(format!(
                "sample gap {} Hz at {} Hz exceeds sub-band width {delta_f} Hz",
                w[1].0 - w[0].0,
                w[0].0
            )));
        }
        Ok(())
    }

    /// Linearly interpolated absorption coefficient, held constant beyond
    /// the outermost samples.
    pub fn k_abs(&self, f: T) -> Result<T> {
        if f < self.window_lo || f > self.window_hi || f.is_nan() {
            return Err(self.out_of_range(f));
        }
        Ok(self.interpolate(f))
    }

    fn interpolate(&self, f: T) -> T {
        let s = &self.samples;
        let idx = s.partition_point(|&(fs, _)| fs <= f);
        if idx == 0 {
            return s[0].1;
        }
        if idx == s.len() {
            return s[s.len() - 1].1;
        }
        let (f0, k0) = s[idx - 1];
        let (f1, k1) = s[idx];
        k0 + (k1 - k0) * (f - f0) / (f1 - f0)
    }

    fn out_of_range(&self, f: T) -> Error {
        Error::OutOfRange {
            freq_hz: f.to_f64_lossy(),
            lo_hz: self.window_lo.to_f64_lossy(),
            hi_hz: self.window_hi.to_f64_lossy(),
        }
    }

    fn covers(&self, window: &TransmissionWindow<T>) -> Result<()> {
        if window.lo < self.window_lo || window.hi > self.window_hi {
            return Err(Error::InvalidSpectrum(format!(
                "window [{}, {}] not inside spectrum range [{}, {}]",
                window.lo, window.hi, self.window_lo, self.window_hi
            )));
        }
        Ok(())
    }
}

/// Spreading loss `(4 pi f x_bar / c)^2`.
#[inline]
fn spreading_loss<T: Scalar>(f: T, x_bar: T) -> T {
    let a = T::lit(4.0) * T::PI() * f * x_bar / T::lit(SPEED_OF_LIGHT);
    a * a
}

/// Linear path loss of the direct ray at frequency `f`.
pub fn path_loss<T: Scalar>(f: T, geom: &LinkGeometry<T>, spec: &AbsorptionSpectrum<T>) -> Result<T> {
    let k = spec.k_abs(f)?;
    if !(geom.x_bar > T::zero()) {
        return Err(Error::DegenerateGeometry);
    }
    Ok(spreading_loss(f, geom.x_bar) * (k * geom.x_bar).exp())
}

/// Usable band of a link: contiguous run of sub-bands around the
/// minimum-loss sub-band whose loss is within 3 dB of that minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UsableBand<T = f64> {
    pub lo: T,
    pub hi: T,
    /// Index of the first sub-band in the window.
    pub first: usize,
    /// Number of sub-bands.
    pub count: usize,
}

impl<T: Scalar> UsableBand<T> {
    pub fn width(&self) -> T {
        self.hi - self.lo
    }
}

/// Path loss at every sub-band centre of `window`.
pub fn sub_band_losses<T: Scalar>(
    geom: &LinkGeometry<T>,
    spec: &AbsorptionSpectrum<T>,
    window: &TransmissionWindow<T>,
) -> Result<Vec<T>> {
    spec.covers(window)?;
    (0..window.num_sub_bands())
        .map(|k| path_loss(window.center(k), geom, spec))
        .collect()
}

/// Index range `[first, first + count)` of the usable band given the
/// per-sub-band losses.
pub(crate) fn band_from_losses<T: Scalar>(losses: &[T]) -> (usize, usize) {
    let (best, &min) = losses
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite losses"))
        .expect("window has at least one sub-band");
    let limit = T::lit(USABLE_LOSS_RATIO) * min;
    let mut first = best;
    while first > 0 && losses[first - 1] <= limit {
        first -= 1;
    }
    let mut last = best;
    while last + 1 < losses.len() && losses[last + 1] <= limit {
        last += 1;
    }
    (first, last - first + 1)
}

pub fn usable_bandwidth<T: Scalar>(
    geom: &LinkGeometry<T>,
    spec: &AbsorptionSpectrum<T>,
    window: &TransmissionWindow<T>,
) -> Result<UsableBand<T>> {
    let losses = sub_band_losses(geom, spec, window)?;
    let (first, count) = band_from_losses(&losses);
    let df = window.delta_f;
    Ok(UsableBand {
        lo: window.lo + T::from_usize(first).unwrap() * df,
        hi: window.lo + T::from_usize(first + count).unwrap() * df,
        first,
        count,
    })
}

/// Number of sub-bands inside the usable band, `N_B(x)`; at least one.
pub fn sub_band_count<T: Scalar>(
    geom: &LinkGeometry<T>,
    spec: &AbsorptionSpectrum<T>,
    window: &TransmissionWindow<T>,
) -> Result<usize> {
    let band = usable_bandwidth(geom, spec, window)?;
    let n = (band.width() / window.delta_f + T::lit(1e-9)).floor();
    Ok(n.to_usize().unwrap_or(0).max(1))
}

/// Sum capacity over the usable band with the total power split evenly
/// across its sub-bands, bit/s.
pub fn wideband_capacity<T: Scalar>(
    geom: &LinkGeometry<T>,
    spec: &AbsorptionSpectrum<T>,
    window: &TransmissionWindow<T>,
    budget: &LinkBudget<T>,
) -> Result<T> {
    let losses = sub_band_losses(geom, spec, window)?;
    let (first, count) = band_from_losses(&losses);
    Ok(uniform_capacity(&losses[first..first + count], window.delta_f, budget))
}

fn uniform_capacity<T: Scalar>(band_losses: &[T], delta_f: T, budget: &LinkBudget<T>) -> T {
    let per_band = budget.p_t_total / T::from_usize(band_losses.len()).unwrap();
    let scale = per_band * budget.g_ap * budget.g_ue / (delta_f * budget.n0_density);
    band_losses
        .iter()
        .map(|&l| delta_f * (T::one() + scale / l).log2())
        .fold(T::zero(), |acc, c| acc + c)
}

/// Water-filling over the usable band: returns `(capacity, active set)` where
/// the active set lists positions within `band_losses` receiving power.
fn water_filling<T: Scalar>(band_losses: &[T], delta_f: T, budget: &LinkBudget<T>) -> (T, T, Vec<usize>) {
    // noise-to-gain ratio of each sub-band, in watts
    let unit = budget.g_ap * budget.g_ue / (delta_f * budget.n0_density);
    let mut order: Vec<usize> = (0..band_losses.len()).collect();
    order.sort_by(|&a, &b| band_losses[a].partial_cmp(&band_losses[b]).unwrap());
    let floor = |i: usize| band_losses[i] / unit;
    let mut sum_floor = T::zero();
    let mut level = T::zero();
    let mut active = 0;
    for (k, &i) in order.iter().enumerate() {
        let candidate = (budget.p_t_total + sum_floor + floor(i)) / T::from_usize(k + 1).unwrap();
        if candidate > floor(i) {
            sum_floor = sum_floor + floor(i);
            level = candidate;
            active = k + 1;
        } else {
            break;
        }
    }
    let active_set: Vec<usize> = order[..active].to_vec();
    let cap = active_set
        .iter()
        .map(|&i| delta_f * (level / floor(i)).log2())
        .fold(T::zero(), |a, c| a + c);
    (cap, level, active_set)
}

/// How the total transmit power is spread over the usable sub-bands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PowerAllocation {
    #[default]
    Uniform,
    WaterFilling,
}

/// Everything needed to turn a 2D distance into a link capacity.
#[derive(Debug, Clone)]
pub struct ChannelModel<T = f64> {
    pub spectrum: AbsorptionSpectrum<T>,
    pub window: TransmissionWindow<T>,
    pub budget: LinkBudget<T>,
    pub allocation: PowerAllocation,
    /// `h_a - h_u`.
    pub height_diff: T,
}

impl<T: Scalar> ChannelModel<T> {
    pub fn new(
        spectrum: AbsorptionSpectrum<T>,
        window: TransmissionWindow<T>,
        budget: LinkBudget<T>,
        height_diff: T,
    ) -> Result<Self> {
        spectrum.covers(&window)?;
        spectrum.check_resolution(window.delta_f)?;
        budget.validate()?;
        Ok(Self {
            spectrum,
            window,
            budget,
            allocation: PowerAllocation::Uniform,
            height_diff,
        })
    }

    pub fn with_allocation(mut self, allocation: PowerAllocation) -> Self {
        self.allocation = allocation;
        self
    }

    pub fn geometry(&self, x: T) -> Result<LinkGeometry<T>> {
        LinkGeometry::new(x, self.height_diff)
    }

    /// Per-sub-band losses for a 2D distance.
    pub(crate) fn losses(&self, x: T) -> Result<Vec<T>> {
        sub_band_losses(&self.geometry(x)?, &self.spectrum, &self.window)
    }

    pub fn usable_band(&self, x: T) -> Result<UsableBand<T>> {
        usable_bandwidth(&self.geometry(x)?, &self.spectrum, &self.window)
    }

    /// Link capacity at 2D distance `x`, bit/s.
    pub fn capacity(&self, x: T) -> Result<T> {
        let losses = self.losses(x)?;
        let (first, count) = band_from_losses(&losses);
        Ok(self.capacity_on(&losses[first..first + count]))
    }

    pub(crate) fn capacity_on(&self, band_losses: &[T]) -> T {
        match self.allocation {
            PowerAllocation::Uniform => uniform_capacity(band_losses, self.window.delta_f, &self.budget),
            PowerAllocation::WaterFilling => water_filling(band_losses, self.window.delta_f, &self.budget).0,
        }
    }

    /// Capacity and its derivative in `x` with the usable band pinned to
    /// sub-bands `[first, first + count)`.
    pub(crate) fn capacity_and_slope_on_band(&self, x: T, first: usize, count: usize) -> (T, T) {
        let geom = self.geometry(x).expect("valid distance");
        let df = self.window.delta_f;
        let dxbar_dx = if geom.x_bar > T::zero() {
            geom.x / geom.x_bar
        } else {
            T::zero()
        };
        let mut losses = Vec::with_capacity(count);
        // d ln L / dx for each sub-band
        let mut log_slopes = Vec::with_capacity(count);
        for k in first..first + count {
            let f = self.window.center(k);
            let kabs = self.spectrum.interpolate(f);
            losses.push(spreading_loss(f, geom.x_bar) * (kabs * geom.x_bar).exp());
            log_slopes.push((T::two() / geom.x_bar + kabs) * dxbar_dx);
        }
        let ln2 = T::LN_2();
        match self.allocation {
            PowerAllocation::Uniform => {
                let per_band = self.budget.p_t_total / T::from_usize(count).unwrap();
                let scale = per_band * self.budget.g_ap * self.budget.g_ue / (df * self.budget.n0_density);
                let mut c = T::zero();
                let mut dc = T::zero();
                for (l, s) in losses.iter().zip(&log_slopes) {
                    let snr = scale / *l;
                    c = c + df * (T::one() + snr).log2();
                    dc = dc - df / ln2 * snr * *s / (T::one() + snr);
                }
                (c, dc)
            }
            PowerAllocation::WaterFilling => {
                let (c, level, active) = water_filling(&losses, df, &self.budget);
                let unit = self.budget.g_ap * self.budget.g_ue / (df * self.budget.n0_density);
                let k = T::from_usize(active.len()).unwrap();
                // level = (P + sum L_i/unit) / k
                let dlevel = active
                    .iter()
                    .map(|&i| losses[i] / unit * log_slopes[i])
                    .fold(T::zero(), |a, b| a + b)
                    / k;
                let dc = active
                    .iter()
                    .map(|&i| df / ln2 * (dlevel / level - log_slopes[i]))
                    .fold(T::zero(), |a, b| a + b);
                (c, dc)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w1_flat(k: f64) -> (AbsorptionSpectrum, TransmissionWindow) {
        let w = TransmissionWindow::w1();
        (AbsorptionSpectrum::flat(k, &w).unwrap(), w)
    }

    #[test]
    fn free_space_loss_at_one_terahertz_one_metre() {
        let (spec, _) = w1_flat(0.0);
        let geom = LinkGeometry::new(0.0, 1.0).unwrap();
        let got = path_loss(1e12, &geom, &spec).unwrap();
        // (4 pi 1e12 / c)^2 evaluated independently
        let a = 4.0 * std::f64::consts::PI * 1e12 / 299_792_458.0;
        assert!((got - a * a).abs() / (a * a) < 1e-14);
        assert!((got / 1.757e9 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn doubling_distance_quadruples_free_space_loss() {
        let (spec, _) = w1_flat(0.0);
        let g1 = LinkGeometry { x: 0.0, x_bar: 3.0 };
        let g2 = LinkGeometry { x: 0.0, x_bar: 6.0 };
        let l1 = path_loss(1.03e12, &g1, &spec).unwrap();
        let l2 = path_loss(1.03e12, &g2, &spec).unwrap();
        assert!((l2 / l1 - 4.0).abs() < 1e-13);
    }

    #[test]
    fn absorption_factor_multiplies_spreading() {
        let (spec, _) = w1_flat(0.1);
        let (free, _) = w1_flat(0.0);
        let g = LinkGeometry { x: 0.0, x_bar: 10.0 };
        let ratio = path_loss(1.0e12, &g, &spec).unwrap() / path_loss(1.0e12, &g, &free).unwrap();
        assert!((ratio - std::f64::consts::E).abs() < 1e-12);
    }

    #[test]
    fn out_of_window_and_degenerate_errors() {
        let (spec, _) = w1_flat(0.0);
        let g = LinkGeometry::new(2.0, 1.8).unwrap();
        assert!(matches!(path_loss(0.5e12, &g, &spec), Err(Error::OutOfRange { .. })));
        let zero = LinkGeometry::new(0.0, 0.0).unwrap();
        assert!(matches!(path_loss(1e12, &zero, &spec), Err(Error::DegenerateGeometry)));
    }

    #[test]
    fn interpolation_is_linear_between_samples() {
        let spec = AbsorptionSpectrum::<f64>::new(vec![(1.0, 0.0), (3.0, 2.0)], 1.0, 3.0).unwrap();
        assert!((spec.k_abs(1.5).unwrap() - 0.5).abs() < 1e-15);
        assert!((spec.k_abs(3.0).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn spectrum_validation() {
        assert!(AbsorptionSpectrum::new(vec![(2.0, 0.1), (1.5, 0.1)], 1.0, 3.0).is_err());
        assert!(AbsorptionSpectrum::new(vec![(2.0, -0.1)], 1.0, 3.0).is_err());
        assert!(AbsorptionSpectrum::new(vec![(4.0, 0.1)], 1.0, 3.0).is_err());
        let coarse = AbsorptionSpectrum::new(vec![(1.0, 0.1), (3.0, 0.1)], 1.0, 3.0).unwrap();
        assert!(coarse.check_resolution(1.0).is_err());
        assert!(coarse.check_resolution(2.0).is_ok());
    }

    #[test]
    fn window_rejects_non_multiple_width() {
        assert!(TransmissionWindow::new(0.0, 10.5, 1.0).is_err());
        assert!(TransmissionWindow::new(0.0, 10.0, 1.0).is_ok());
        assert_eq!(TransmissionWindow::<f64>::w2().num_sub_bands(), 150);
    }

    #[test]
    fn flat_spectrum_band_limited_by_spreading_only() {
        // f^2 varies by (1.09/0.99)^2 = 1.21 < 2 across W1: whole window usable
        let (spec, w) = w1_flat(0.05);
        for x in [1.0, 10.0, 40.0] {
            let g = LinkGeometry::new(x, 1.8).unwrap();
            let band = usable_bandwidth(&g, &spec, &w).unwrap();
            assert_eq!(band.count, 100);
            assert_eq!(sub_band_count(&g, &spec, &w).unwrap(), 100);
        }
        // a wide window where spreading alone exceeds 3 dB: edge at sqrt(2) * lo
        let wide = TransmissionWindow::new(1e12, 2e12, 1e9).unwrap();
        let spec = AbsorptionSpectrum::flat(0.0, &wide).unwrap();
        let g = LinkGeometry::new(3.0, 1.8).unwrap();
        let band = usable_bandwidth(&g, &spec, &wide).unwrap();
        assert_eq!(band.first, 0);
        // centres (k + 0.5) GHz above 1 THz with ((1000 + k + 0.5) / 1000.5)^2 <= 2
        let expect = (0..1000)
            .filter(|&k| ((1000.5 + k as f64) / 1000.5).powi(2) <= 2.0)
            .count();
        assert_eq!(band.count, expect);
    }

    #[test]
    fn sub_band_count_single_band() {
        // a single-sub-band window: usable width is exactly delta_f
        let w = TransmissionWindow::<f64>::new(1e12, 1.001e12, 1e9).unwrap();
        let spec = AbsorptionSpectrum::flat(0.3, &w).unwrap();
        let g = LinkGeometry::new(5.0, 1.8).unwrap();
        assert_eq!(sub_band_count(&g, &spec, &w).unwrap(), 1);
    }

    #[test]
    fn capacity_with_unit_snr_is_one_bit_per_hertz() {
        let w = TransmissionWindow::<f64>::new(1e12, 1.001e12, 1e9).unwrap();
        let spec = AbsorptionSpectrum::flat(0.0, &w).unwrap();
        let g = LinkGeometry::new(0.0, 2.0).unwrap();
        let loss = path_loss(w.center(0), &g, &spec).unwrap();
        // P G / (L df N0) = 1
        let budget = LinkBudget::new(loss * 1e9 * 4e-21, 1.0, 1.0, 4e-21).unwrap();
        let c = wideband_capacity(&g, &spec, &w, &budget).unwrap();
        assert!((c - 1e9).abs() < 1e-3);
    }

    #[test]
    fn capacity_decreases_with_distance_at_fixed_band() {
        let (spec, w) = w1_flat(0.0);
        let budget = LinkBudget::indoor(20.0);
        let c1 = wideband_capacity(&LinkGeometry { x: 0.0, x_bar: 2.0 }, &spec, &w, &budget).unwrap();
        let c2 = wideband_capacity(&LinkGeometry { x: 0.0, x_bar: 4.0 }, &spec, &w, &budget).unwrap();
        assert!(c2 < c1);
        assert!(c2 > 0.0);
    }

    #[test]
    fn water_filling_never_worse_than_uniform() {
        let spec = synthetic::bundled_w1();
        let w = TransmissionWindow::w1();
        let budget = LinkBudget::indoor(20.0);
        let uni = ChannelModel::new(spec.clone(), w, budget, 1.8).unwrap();
        let wf = uni.clone().with_allocation(PowerAllocation::WaterFilling);
        for x in [1.0, 5.0, 20.0, 60.0] {
            let cu = uni.capacity(x).unwrap();
            let cw = wf.capacity(x).unwrap();
            assert!(cw >= cu * (1.0 - 1e-12), "x={x}: {cw} < {cu}");
        }
    }

    #[test]
    fn analytic_slope_matches_finite_difference() {
        let spec = synthetic::bundled_w1();
        let w = TransmissionWindow::w1();
        for alloc in [PowerAllocation::Uniform, PowerAllocation::WaterFilling] {
            let m = ChannelModel::new(spec.clone(), w, LinkBudget::indoor(20.0), 1.8)
                .unwrap()
                .with_allocation(alloc);
            for x in [1.3, 4.0, 17.0] {
                let band = m.usable_band(x).unwrap();
                let (_, slope) = m.capacity_and_slope_on_band(x, band.first, band.count);
                let h = 1e-5;
                let (cp, _) = m.capacity_and_slope_on_band(x + h, band.first, band.count);
                let (cm, _) = m.capacity_and_slope_on_band(x - h, band.first, band.count);
                let fd = (cp - cm) / (2.0 * h);
                assert!(((slope - fd) / fd).abs() < 1e-5, "{alloc:?} x={x}: {slope} vs {fd}");
            }
        }
    }
}
