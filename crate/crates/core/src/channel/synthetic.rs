//! Synthetic absorption spectra built from Lorentzian lines over a
//! quadratic continuum.
//!
//! The bundled table is generated from [`bundled_windows`]: line wings
//! bounding each window make the usable band shrink with distance. In the
//! 0.99-1.09 THz window the band holds 91 sub-bands at a ground distance of
//! 1 m and 59 at 10 m with the default 1.8 m height offset (path lengths
//! 2.06 m and 10.16 m), and 99 sub-bands at a 1 m path.

use super::{AbsorptionSpectrum, AbsorptionTable, TransmissionWindow};

/// A pressure-broadened absorption line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzLine {
    pub center_hz: f64,
    pub hwhm_hz: f64,
    /// Coefficient at the line centre, 1/m.
    pub peak_per_m: f64,
}

impl LorentzLine {
    #[inline]
    pub fn k_abs(&self, f: f64) -> f64 {
        let g2 = self.hwhm_hz * self.hwhm_hz;
        let d = f - self.center_hz;
        self.peak_per_m * g2 / (d * d + g2)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticWindow {
    pub lo_hz: f64,
    pub hi_hz: f64,
    /// Continuum coefficient at 1 THz; scales with `f^2`.
    pub continuum_per_m: f64,
    pub lines: Vec<LorentzLine>,
}

impl SyntheticWindow {
    pub fn k_abs(&self, f: f64) -> f64 {
        let rel = f / 1e12;
        self.continuum_per_m * rel * rel + self.lines.iter().map(|l| l.k_abs(f)).sum::<f64>()
    }

    /// Samples `[lo, hi]` inclusive at spacing `step_hz`.
    pub fn sample(&self, step_hz: f64) -> Vec<(f64, f64)> {
        let n = ((self.hi_hz - self.lo_hz) / step_hz).round() as usize;
        (0..=n)
            .map(|i| {
                let f = self.lo_hz + i as f64 * step_hz;
                (f, self.k_abs(f))
            })
            .collect()
    }
}

/// Lines around the two windows of the reference indoor scenario.
pub fn bundled_windows() -> [SyntheticWindow; 2] {
    [
        SyntheticWindow {
            lo_hz: 0.99e12,
            hi_hz: 1.09e12,
            continuum_per_m: 0.11,
            lines: vec![
                LorentzLine {
                    center_hz: 0.9879e12,
                    hwhm_hz: 10.72e9,
                    peak_per_m: 0.409,
                },
                LorentzLine {
                    center_hz: 1.0973e12,
                    hwhm_hz: 11.67e9,
                    peak_per_m: 0.910,
                },
            ],
        },
        SyntheticWindow {
            lo_hz: 3.34e12,
            hi_hz: 3.49e12,
            continuum_per_m: 0.0346,
            lines: vec![
                LorentzLine {
                    center_hz: 3.325e12,
                    hwhm_hz: 10e9,
                    peak_per_m: 2.0,
                },
                LorentzLine {
                    center_hz: 3.505e12,
                    hwhm_hz: 10e9,
                    peak_per_m: 2.0,
                },
            ],
        },
    ]
}

/// Sample spacing of the bundled table.
pub const BUNDLED_STEP_HZ: f64 = 0.25e9;

/// Regenerates the bundled table.
pub fn bundled_table() -> AbsorptionTable {
    let samples = bundled_windows()
        .iter()
        .flat_map(|w| w.sample(BUNDLED_STEP_HZ))
        .collect();
    AbsorptionTable::from_samples(samples).expect("generator output is valid")
}

/// Bundled spectrum restricted to 0.99-1.09 THz.
pub fn bundled_w1() -> AbsorptionSpectrum {
    AbsorptionTable::bundled()
        .window(&TransmissionWindow::w1())
        .expect("bundled table covers W1")
}

/// Bundled spectrum restricted to 3.34-3.49 THz.
pub fn bundled_w2() -> AbsorptionSpectrum {
    AbsorptionTable::bundled()
        .window(&TransmissionWindow::w2())
        .expect("bundled table covers W2")
}

/// Spectrum with one Lorentzian line at the window centre and no continuum.
pub fn centered_line(window: &TransmissionWindow, hwhm_hz: f64, peak_per_m: f64) -> AbsorptionSpectrum {
    let w = SyntheticWindow {
        lo_hz: window.lo,
        hi_hz: window.hi,
        continuum_per_m: 0.0,
        lines: vec![LorentzLine {
            center_hz: 0.5 * (window.lo + window.hi),
            hwhm_hz,
            peak_per_m,
        }],
    };
    AbsorptionSpectrum::new(w.sample(window.delta_f / 4.0), window.lo, window.hi).expect("generator output is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_file_matches_generator() {
        let bundled = AbsorptionTable::<f64>::bundled();
        let fresh = bundled_table();
        assert_eq!(bundled.samples().len(), fresh.samples().len());
        for (a, b) in bundled.samples().iter().zip(fresh.samples()) {
            assert!((a.0 - b.0).abs() < 1e-3);
            assert!((a.1 - b.1).abs() <= 1e-11 * b.1);
        }
    }
}
