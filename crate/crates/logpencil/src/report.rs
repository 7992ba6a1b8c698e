//! Report emission: JSON documents with run metadata, deterministic for
//! identical inputs (typed structs only, ordered maps, fixed field
//! order), plus the CSV table for scans.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

/// Run metadata carried by every report.
#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub rtol: f64,
    /// Every tolerance the results below were judged against.
    pub tolerances: BTreeMap<String, f64>,
}

impl Meta {
    pub fn new(command: &str, seed: u64, rtol: f64) -> Meta {
        Meta {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            rtol,
            tolerances: BTreeMap::new(),
        }
    }

    pub fn with_tol(mut self, name: &str, value: f64) -> Meta {
        self.tolerances.insert(name.to_string(), value);
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report<T: Serialize> {
    pub meta: Meta,
    pub results: T,
}

impl<T: Serialize> Report<T> {
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.render().as_bytes())
    }
}

/// Complex number as `{re, im}`; rationals elsewhere are strings.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CxJson {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for CxJson {
    fn from(z: Complex64) -> Self {
        CxJson { re: z.re, im: z.im }
    }
}

pub fn matrix_json(m: &nalgebra::DMatrix<Complex64>) -> Vec<Vec<CxJson>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| CxJson::from(m[(i, j)])).collect())
        .collect()
}

pub fn vec_json(v: &[Complex64]) -> Vec<CxJson> {
    v.iter().map(|&z| CxJson::from(z)).collect()
}

/// CSV for scan results: one column pair per parameter, then the value.
pub fn scan_csv(param_names: &[String], samples: &[crate::loci::ScanSample]) -> String {
    let mut out = String::new();
    for name in param_names {
        out.push_str(&format!("{name}_re,{name}_im,"));
    }
    out.push_str("value\n");
    for s in samples {
        for (re, im) in &s.s {
            out.push_str(&format!("{re},{im},"));
        }
        match s.value {
            Some(v) => out.push_str(&format!("{v}\n")),
            None => out.push_str("skip\n"),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_rendering() {
        let meta = Meta::new("demo", 42, 1e-12).with_tol("sig", 1e-6);
        let rep = Report {
            meta,
            results: vec![1.0f64, 0.5],
        };
        assert_eq!(rep.render(), rep.render());
        assert!(rep.render().contains("\"seed\": 42"));
        assert!(rep.render().ends_with('\n'));
    }

    #[test]
    fn csv_layout() {
        let samples = vec![
            crate::loci::ScanSample {
                s: vec![(0.5, 0.0)],
                value: Some(1),
            },
            crate::loci::ScanSample {
                s: vec![(1.0, 0.0)],
                value: None,
            },
        ];
        let csv = scan_csv(&["s".to_string()], &samples);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("s_re,s_im,value"));
        assert_eq!(lines.next(), Some("0.5,0,1"));
        assert_eq!(lines.next(), Some("1,0,skip"));
    }
}
