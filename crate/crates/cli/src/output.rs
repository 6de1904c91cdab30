//! CSV rows shared by every figure.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{io_err, Result};

pub const HEADER: &str =
    "figure,window,distance_m,frequency_hz,lambda_a,degree,strategy,metric,value,std_error,estimator,seed";

/// One `(coordinate, metric)` value. Unused coordinates stay empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub figure: String,
    pub window: String,
    pub distance_m: Option<f64>,
    pub frequency_hz: Option<f64>,
    pub lambda_a: Option<f64>,
    pub degree: Option<usize>,
    pub strategy: String,
    pub metric: String,
    pub value: f64,
    pub std_error: f64,
    pub estimator: String,
    pub seed: u64,
}

impl ResultRow {
    pub fn new(figure: &str, metric: &str, value: f64, estimator: &str, seed: u64) -> Self {
        Self {
            figure: figure.into(),
            window: String::new(),
            distance_m: None,
            frequency_hz: None,
            lambda_a: None,
            degree: None,
            strategy: String::new(),
            metric: metric.into(),
            value,
            std_error: 0.0,
            estimator: estimator.into(),
            seed,
        }
    }

    pub fn window(mut self, w: &str) -> Self {
        self.window = w.into();
        self
    }

    pub fn distance(mut self, d: f64) -> Self {
        self.distance_m = Some(d);
        self
    }

    pub fn frequency(mut self, f: f64) -> Self {
        self.frequency_hz = Some(f);
        self
    }

    pub fn lambda(mut self, l: f64) -> Self {
        self.lambda_a = Some(l);
        self
    }

    pub fn degree(mut self, n: usize) -> Self {
        self.degree = Some(n);
        self
    }

    pub fn strategy(mut self, s: &str) -> Self {
        self.strategy = s.into();
        self
    }

    pub fn std_error(mut self, se: f64) -> Self {
        self.std_error = se;
        self
    }
}

pub fn to_csv_bytes(rows: &[ResultRow]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(HEADER.split(','))?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner()
        .map_err(|e| e.into_error())
        .map_err(io_err("<csv buffer>"))
}

pub fn write_csv(path: &Path, rows: &[ResultRow]) -> Result<()> {
    let bytes = to_csv_bytes(rows)?;
    std::fs::write(path, bytes).map_err(io_err(path))
}

pub fn read_csv(path: &Path) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_path(path)?;
    let rows = r.deserialize().collect::<std::result::Result<Vec<ResultRow>, _>>()?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_empty_fields() {
        let rows = vec![ResultRow::new("fig4", "connection_probability", 0.5, "closed_form", 42)
            .lambda(1e-3)
            .degree(1)
            .strategy("SC")];
        let text = String::from_utf8(to_csv_bytes(&rows).unwrap()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), HEADER);
        assert_eq!(
            lines.next().unwrap(),
            "fig4,,,,0.001,1,SC,connection_probability,0.5,0.0,closed_form,42"
        );
        let empty = String::from_utf8(to_csv_bytes(&[]).unwrap()).unwrap();
        assert_eq!(empty.trim_end(), HEADER);
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let rows = vec![
            ResultRow::new("fig3", "path_loss_db", 93.25, "closed_form", 1)
                .window("W1")
                .distance(5.0)
                .frequency(1.0005e12),
            ResultRow::new("fig6", "capacity_gain", -0.012, "monte_carlo_integration", 1).std_error(1e-5),
        ];
        write_csv(&path, &rows).unwrap();
        assert_eq!(read_csv(&path).unwrap(), rows);
    }
}
