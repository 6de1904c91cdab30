//! Plain-text absorption tables.
//!
//! Lines starting with `#` are comments; data lines hold
//! `frequency_hz<TAB>k_abs_per_m` with strictly increasing frequency. One
//! file may cover several transmission windows.

use std::fmt::Write as _;
use std::path::Path;

use super::{AbsorptionSpectrum, TransmissionWindow};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

static BUNDLED: &str = include_str!("../../data/synthetic_absorption.tsv");

/// All samples of an absorption file, possibly spanning several windows.
#[derive(Debug, Clone, PartialEq)]
pub struct AbsorptionTable<T = f64> {
    samples: Vec<(T, T)>,
}

impl<T: Scalar> AbsorptionTable<T> {
    pub fn from_samples(samples: Vec<(T, T)>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidSpectrum("no samples".into()));
        }
        for w in samples.windows(2) {
            if !(w[0].0 < w[1].0) {
                return Err(Error::InvalidSpectrum(format!(
                    "frequencies not strictly increasing at {} Hz",
                    w[1].0
                )));
            }
        }
        if let Some(&(f, k)) = samples.iter().find(|(_, k)| !(*k >= T::zero()) || !k.is_finite()) {
            return Err(Error::InvalidSpectrum(format!("bad k_abs {k} at {f} Hz")));
        }
        Ok(Self { samples })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut samples = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: String| Error::SpectrumParse { line: i + 1, reason };
            let mut cols = line.split('\t').map(str::trim).filter(|c| !c.is_empty());
            let (Some(f), Some(k), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(err("expected `frequency_hz<TAB>k_abs_per_m`".to_string()));
            };
            let f: f64 = f.parse().map_err(|e| err(format!("frequency `{f}`: {e}")))?;
            let k: f64 = k.parse().map_err(|e| err(format!("k_abs `{k}`: {e}")))?;
            if let Some(&(prev, _)) = samples.last() {
                if !(T::lit(f) > prev) {
                    return Err(err(format!("frequency {f} not above previous {prev}")));
                }
            }
            samples.push((T::lit(f), T::lit(k)));
        }
        Self::from_samples(samples)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// The synthetic two-window table shipped with the crate.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED).expect("bundled spectrum is well formed")
    }

    pub fn samples(&self) -> &[(T, T)] {
        &self.samples
    }

    /// Serialises in the file format, with an optional comment header.
    pub fn to_text(&self, header: &str) -> String {
        let mut out = String::new();
        for line in header.lines() {
            let _ = writeln!(out, "# {line}");
        }
        for (f, k) in &self.samples {
            let _ = writeln!(out, "{:.6}\t{:.12e}", f.to_f64_lossy(), k.to_f64_lossy());
        }
        out
    }

    /// Restricts the table to `window`, interpolating the coefficient at the
    /// window edges when they fall between samples.
    pub fn window(&self, window: &TransmissionWindow<T>) -> Result<AbsorptionSpectrum<T>> {
        let s = &self.samples;
        let (first_f, last_f) = (s[0].0, s[s.len() - 1].0);
        if window.lo < first_f || window.hi > last_f {
            return Err(Error::InvalidSpectrum(format!(
                "table covers [{first_f}, {last_f}] Hz but window is [{}, {}] Hz",
                window.lo, window.hi
            )));
        }
        let at = |f: T| {
            let idx = s.partition_point(|&(fs, _)| fs < f);
            if s[idx].0 == f {
                s[idx].1
            } else {
                let (f0, k0) = s[idx - 1];
                let (f1, k1) = s[idx];
                k0 + (k1 - k0) * (f - f0) / (f1 - f0)
            }
        };
        let mut picked = vec![(window.lo, at(window.lo))];
        picked.extend(s.iter().copied().filter(|&(f, _)| f > window.lo && f < window.hi));
        picked.push((window.hi, at(window.hi)));
        let spec = AbsorptionSpectrum::new(picked, window.lo, window.hi)?;
        spec.check_resolution(window.delta_f)?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_tabs() {
        let t = AbsorptionTable::<f64>::parse("# header\n\n1e12\t0.1\n1.5e12\t0.2\n").unwrap();
        assert_eq!(t.samples(), &[(1e12, 0.1), (1.5e12, 0.2)]);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!(
            AbsorptionTable::<f64>::parse("1e12 0.1\n"),
            Err(Error::SpectrumParse { line: 1, .. })
        ));
        assert!(matches!(
            AbsorptionTable::<f64>::parse("1e12\t0.1\n1e12\t0.2\n"),
            Err(Error::SpectrumParse { line: 2, .. })
        ));
        assert!(AbsorptionTable::<f64>::parse("1e12\tabc\n").is_err());
        assert!(AbsorptionTable::<f64>::parse("# only comments\n").is_err());
    }

    #[test]
    fn text_round_trip() {
        let t = AbsorptionTable::<f64>::bundled();
        let again = AbsorptionTable::<f64>::parse(&t.to_text("x")).unwrap();
        assert_eq!(t.samples().len(), again.samples().len());
        for (a, b) in t.samples().iter().zip(again.samples()) {
            assert!((a.0 - b.0).abs() < 1e-3);
            assert!((a.1 - b.1).abs() <= 1e-11 * a.1.abs().max(1e-30));
        }
    }

    #[test]
    fn bundled_table_expresses_both_windows() {
        let t = AbsorptionTable::<f64>::bundled();
        for w in [TransmissionWindow::w1(), TransmissionWindow::w2()] {
            let spec = t.window(&w).unwrap();
            assert_eq!(spec.window_lo(), w.lo);
            assert_eq!(spec.window_hi(), w.hi);
        }
    }

    #[test]
    fn window_interpolates_edges() {
        let t = AbsorptionTable::from_samples(vec![(0.0, 0.0), (2e9, 2.0), (4e9, 4.0)]).unwrap();
        let w = TransmissionWindow::new(1e9, 3e9, 1e9).unwrap();
        let spec = t.window(&w).unwrap();
        assert_eq!(spec.samples(), &[(1e9, 1.0), (2e9, 2.0), (3e9, 3.0)]);
        let outside = TransmissionWindow::new(1e9, 5e9, 1e9).unwrap();
        assert!(t.window(&outside).is_err());
    }
}
