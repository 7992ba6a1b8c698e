//! Parameter-space scanning for jumping loci and fitting of
//! integer-normal hyperplanes to the detected jump points.
//!
//! A scan walks a segment in parameter space on an inclusive grid (so
//! rational loci like integer points are actually sampled), computes a
//! conjugation-invariant integer per sample — the dimension of the common
//! fixed space of the monodromy generators, or of their commutant — and
//! reports every sample exceeding the segment's minimum as a jump. The
//! minimum plays the role of the generic value on the segment; the tool
//! makes no claim about the global generic dimension.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::monodromy::{commutant_dim, fixed_space_dim, monodromy_rep, LineSlice, MonodromyError};
use crate::pencil::PencilNumeric;

#[derive(Debug, Clone, Error)]
pub enum LociError {
    #[error("need at least 8 samples, got {0}")]
    TooFewSamples(usize),
    #[error("segment endpoints have arities {0} and {1}, pencil has {2} parameters")]
    BadEndpoints(usize, usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanQuantity {
    FixedDim,
    CommutantDim,
}

impl std::fmt::Display for ScanQuantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScanQuantity::FixedDim => write!(f, "fixed_dim"),
            ScanQuantity::CommutantDim => write!(f, "commutant_dim"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanSample {
    pub s: Vec<(f64, f64)>,
    /// `None` when transport failed at this sample (recorded, skipped).
    pub value: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct ScanResult {
    pub quantity: ScanQuantity,
    pub samples: Vec<ScanSample>,
    /// Minimum observed value: the segment's stand-in for the generic one.
    pub baseline: usize,
    /// Parameter points whose value exceeds the baseline.
    pub jumps: Vec<Vec<Complex64>>,
    /// Segment length divided by the sample count.
    pub resolution: f64,
    pub skipped: usize,
}

/// Scan options; `rank_threshold` feeds the numerical rank decisions.
#[derive(Debug, Clone, Copy)]
pub struct ScanOpts {
    pub rtol: f64,
    pub rank_threshold: f64,
}

impl Default for ScanOpts {
    fn default() -> Self {
        ScanOpts {
            rtol: 1e-12,
            rank_threshold: 1e-7,
        }
    }
}

/// Values of the chosen quantity on an inclusive linear grid from
/// `s_from` to `s_to`. All samples share one slice, so the integers are
/// comparable across the segment.
pub fn scan_segment(
    pn: &PencilNumeric,
    slice: &LineSlice,
    s_from: &[Complex64],
    s_to: &[Complex64],
    samples: usize,
    quantity: ScanQuantity,
    opts: ScanOpts,
) -> Result<ScanResult, LociError> {
    if samples < 8 {
        return Err(LociError::TooFewSamples(samples));
    }
    let n = pn.n_params();
    if s_from.len() != n || s_to.len() != n {
        return Err(LociError::BadEndpoints(s_from.len(), s_to.len(), n));
    }
    let points: Vec<Vec<Complex64>> = (0..samples)
        .map(|k| {
            let t = k as f64 / (samples - 1) as f64;
            s_from
                .iter()
                .zip(s_to)
                .map(|(a, b)| a + (b - a) * t)
                .collect()
        })
        .collect();
    let values: Vec<Option<usize>> = points
        .par_iter()
        .map(|s| quantity_at(pn, slice, s, quantity, opts))
        .collect();
    let baseline = values.iter().flatten().copied().min().unwrap_or(0);
    let mut jumps = Vec::new();
    let mut out_samples = Vec::new();
    let mut skipped = 0;
    for (s, v) in points.iter().zip(&values) {
        if v.is_none() {
            skipped += 1;
        }
        if let Some(val) = v {
            if *val > baseline {
                jumps.push(s.clone());
            }
        }
        out_samples.push(ScanSample {
            s: s.iter().map(|z| (z.re, z.im)).collect(),
            value: *v,
        });
    }
    let seg_len: f64 = s_from
        .iter()
        .zip(s_to)
        .map(|(a, b)| (b - a).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(ScanResult {
        quantity,
        samples: out_samples,
        baseline,
        jumps,
        resolution: seg_len / samples as f64,
        skipped,
    })
}

fn quantity_at(
    pn: &PencilNumeric,
    slice: &LineSlice,
    s: &[Complex64],
    quantity: ScanQuantity,
    opts: ScanOpts,
) -> Option<usize> {
    let rep: Result<_, MonodromyError> = monodromy_rep(pn, s, slice, opts.rtol);
    match rep {
        Ok(rep) => Some(match quantity {
            ScanQuantity::FixedDim => fixed_space_dim(&rep, opts.rank_threshold),
            ScanQuantity::CommutantDim => commutant_dim(&rep, opts.rank_threshold),
        }),
        Err(_) => None,
    }
}

/// Second-pass refinement: rescans a window around each detected jump at
/// ten times the resolution and returns the refined jump points (values
/// exceeding the original baseline).
pub fn refine_jumps(
    pn: &PencilNumeric,
    slice: &LineSlice,
    s_from: &[Complex64],
    s_to: &[Complex64],
    samples: usize,
    result: &ScanResult,
    opts: ScanOpts,
) -> Vec<Vec<Complex64>> {
    let step: Vec<Complex64> = s_from
        .iter()
        .zip(s_to)
        .map(|(a, b)| (b - a) / (samples - 1) as f64)
        .collect();
    let mut refined = Vec::new();
    for jump in &result.jumps {
        for k in 0..=20usize {
            let t = k as f64 / 10.0 - 1.0; // [-1, 1] around the jump
            let s: Vec<Complex64> = jump
                .iter()
                .zip(&step)
                .map(|(c, d)| c + d * t)
                .collect();
            if let Some(v) = quantity_at(pn, slice, &s, result.quantity, opts) {
                if v > result.baseline {
                    refined.push(s);
                }
            }
        }
    }
    refined
}

/// A fitted integer-normal hyperplane `a . s = c (mod Z)`.
#[derive(Debug, Clone, Serialize)]
pub struct HyperplaneFit {
    pub normal: Vec<i64>,
    pub offset: (f64, f64),
    pub residual: f64,
    pub support: usize,
}

/// Searches primitive integer normals with entries bounded by `a_max`;
/// for each normal the values `a . s` over the jump points are clustered,
/// translates differing by integers merged, and clusters of support at
/// least 3 reported, sorted by support then residual.
pub fn fit_hyperplanes(points: &[Vec<Complex64>], a_max: i64, tol: f64) -> Vec<HyperplaneFit> {
    assert!((1..=5).contains(&a_max), "a_max must be in 1..=5");
    if points.len() < 3 {
        return Vec::new();
    }
    let n = points[0].len();
    let mut fits = Vec::new();
    for normal in primitive_normals(n, a_max) {
        let values: Vec<Complex64> = points
            .iter()
            .map(|p| {
                p.iter()
                    .zip(&normal)
                    .map(|(s, &a)| s * a as f64)
                    .sum::<Complex64>()
            })
            .collect();
        // Union-find over points: same class when values differ by an
        // integer up to tol.
        let m = values.len();
        let mut parent: Vec<usize> = (0..m).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let r = find(parent, parent[i]);
                parent[i] = r;
            }
            parent[i]
        }
        for i in 0..m {
            for j in i + 1..m {
                let d = values[i] - values[j];
                let k = d.re.round();
                if (d.re - k).abs() <= tol && d.im.abs() <= tol {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri] = rj;
                    }
                }
            }
        }
        let mut clusters: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..m {
            let r = find(&mut parent, i);
            clusters.entry(r).or_default().push(i);
        }
        for members in clusters.values() {
            if members.len() < 3 {
                continue;
            }
            // Fold every member into the first member's integer sheet.
            let v0 = values[members[0]];
            let folded: Vec<Complex64> = members
                .iter()
                .map(|&i| {
                    let d = values[i] - v0;
                    values[i] - Complex64::new(d.re.round(), 0.0)
                })
                .collect();
            let mean = folded.iter().sum::<Complex64>() / folded.len() as f64;
            let residual = folded
                .iter()
                .map(|v| (v - mean).norm())
                .fold(0.0f64, f64::max);
            // canonical representative offset: real part in [0, 1)
            let offset = mean - Complex64::new(mean.re.floor(), 0.0);
            fits.push(HyperplaneFit {
                normal: normal.clone(),
                offset: (offset.re, offset.im),
                residual,
                support: members.len(),
            });
        }
    }
    fits.sort_by(|a, b| {
        b.support
            .cmp(&a.support)
            .then(a.residual.partial_cmp(&b.residual).unwrap())
            .then(a.normal.cmp(&b.normal))
    });
    fits
}

/// Primitive integer vectors with entries in `[-a_max, a_max]`, first
/// nonzero entry positive, in lexicographic order.
pub fn primitive_normals(n: usize, a_max: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    enumerate_normals(&mut cur, 0, a_max, &mut out);
    out.retain(|v| {
        let g = v.iter().fold(0i64, |acc, &x| gcd(acc, x.abs()));
        g == 1 && v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
    });
    out
}

fn enumerate_normals(cur: &mut Vec<i64>, i: usize, a_max: i64, out: &mut Vec<Vec<i64>>) {
    if i == cur.len() {
        if cur.iter().any(|&x| x != 0) {
            out.push(cur.clone());
        }
        return;
    }
    for v in -a_max..=a_max {
        cur[i] = v;
        enumerate_normals(cur, i + 1, a_max, out);
    }
    cur[i] = 0;
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn primitive_enumeration() {
        let ns = primitive_normals(1, 3);
        assert_eq!(ns, vec![vec![1]]);
        let ns = primitive_normals(2, 1);
        // (0,1), (1,-1), (1,0), (1,1)
        assert_eq!(ns.len(), 4);
        assert!(ns.contains(&vec![1, 1]));
        assert!(!ns.contains(&vec![-1, 1]));
    }

    #[test]
    fn fit_integer_points_on_line() {
        // one-parameter points at integers: normal (1), offsets congruent 0
        let pts: Vec<Vec<Complex64>> =
            [-2.0, -1.0, 1.0, 2.0].iter().map(|&x| vec![c(x)]).collect();
        let fits = fit_hyperplanes(&pts, 3, 1e-6);
        assert!(!fits.is_empty());
        assert_eq!(fits[0].normal, vec![1]);
        assert_eq!(fits[0].support, 4);
        assert!(fits[0].offset.0.abs() < 1e-9 || (fits[0].offset.0 - 1.0).abs() < 1e-9);
        assert!(fits[0].residual < 1e-9);
    }

    #[test]
    fn fit_diagonal_locus() {
        // points with s1+s2 in {1, 2}: best fit normal (1,1)
        let pts: Vec<Vec<Complex64>> = vec![
            vec![c(0.3), c(0.7)],
            vec![c(0.8), c(0.2)],
            vec![c(1.5), c(0.5)],
            vec![c(0.9), c(1.1)],
        ];
        let fits = fit_hyperplanes(&pts, 3, 1e-6);
        assert_eq!(fits[0].normal, vec![1, 1]);
        assert_eq!(fits[0].support, 4);
    }

    #[test]
    fn generic_points_fit_nothing() {
        let pts: Vec<Vec<Complex64>> = vec![
            vec![c(0.31234), c(0.77519)],
            vec![c(0.12345), c(0.54321)],
            vec![c(0.91827), c(0.36455)],
        ];
        let fits = fit_hyperplanes(&pts, 3, 1e-3);
        assert!(fits.is_empty(), "unexpected fits: {fits:?}");
    }

    #[test]
    fn fitted_normals_are_primitive() {
        let pts: Vec<Vec<Complex64>> =
            [0.0, 1.0, 2.0, 3.0].iter().map(|&x| vec![c(x)]).collect();
        for f in fit_hyperplanes(&pts, 3, 1e-6) {
            let g = f.normal.iter().fold(0i64, |acc, &x| {
                let mut a = acc.abs();
                let mut b = x.abs();
                while b != 0 {
                    let t = a % b;
                    a = b;
                    b = t;
                }
                a
            });
            assert_eq!(g, 1);
        }
    }
}
