//! Floating-point linear algebra helpers shared by the monodromy and
//! locus layers: eigenvalues via complex Schur, singular-value ranks with
//! a floored scale, characteristic polynomials, and eigenvalue-multiset
//! comparison.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;

/// Eigenvalues of a complex matrix through the Schur decomposition,
/// sorted by (re, im) so results are reproducible.
pub fn eigenvalues(m: &CMat) -> Vec<Complex64> {
    assert_eq!(m.nrows(), m.ncols());
    let schur = m.clone().schur();
    let mut evs: Vec<Complex64> = match schur.eigenvalues() {
        Some(v) => v.iter().cloned().collect(),
        // For a complex matrix the Schur form is triangular, so this arm
        // is not expected; fall back to the diagonal of the T factor.
        None => {
            let (_, t) = m.clone().schur().unpack();
            (0..m.nrows()).map(|i| t[(i, i)]).collect()
        }
    };
    evs.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    evs
}

/// Numerical rank: singular values below `threshold * max(sigma_max, 1)`
/// count as zero. The floor keeps near-zero matrices (for example
/// `M - I` at a point where the monodromy is trivial) from reporting full
/// rank off their own rounding noise.
pub fn rank_with_threshold(m: &CMat, threshold: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let svd = m.clone().svd(false, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let scale = smax.max(1.0);
    svd.singular_values
        .iter()
        .filter(|&&s| s > threshold * scale)
        .count()
}

/// Monic characteristic polynomial coefficients `c_0..c_{n-1}` (so that
/// `det(tI - M) = t^n + c_{n-1} t^{n-1} + ... + c_0`), by the
/// Faddeev–LeVerrier recursion. Deterministic and similarity-invariant up
/// to rounding, which is what signatures need.
pub fn char_poly(m: &CMat) -> Vec<Complex64> {
    let n = m.nrows();
    assert_eq!(n, m.ncols());
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
    let mut aux = CMat::identity(n, n);
    for k in 1..=n {
        aux = m * aux;
        let c = -aux.diagonal().sum() / (k as f64);
        for i in 0..n {
            aux[(i, i)] += c;
        }
        coeffs[n - k] = c;
    }
    coeffs
}

/// Groups eigenvalues into clusters of radius `tol`; returns
/// (representative, multiplicity) sorted by descending multiplicity then
/// by (re, im).
pub fn cluster(points: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    for p in sorted {
        match clusters.iter_mut().find(|(c, _)| (c - p).norm() <= tol) {
            Some((_, n)) => *n += 1,
            None => clusters.push((p, 1)),
        }
    }
    clusters.sort_by(|a, b| {
        b.1.cmp(&a.1).then(
            a.0.re
                .partial_cmp(&b.0.re)
                .unwrap()
                .then(a.0.im.partial_cmp(&b.0.im).unwrap()),
        )
    });
    clusters
}

/// Greedy multiset matching: true when each element of `a` can be paired
/// with a distinct element of `b` within `tol`.
pub fn multisets_close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    for x in a {
        let mut best: Option<(usize, f64)> = None;
        for (j, y) in b.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = (x - y).norm();
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        match best {
            Some((j, d)) if d <= tol => used[j] = true,
            _ => return false,
        }
    }
    true
}

/// Kronecker product, used to assemble commutant (Sylvester) systems.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = (a.nrows(), a.ncols());
    let (br, bc) = (b.nrows(), b.ncols());
    let mut out = CMat::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Max absolute entry.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `|| a - b ||_max`.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    max_abs(&(a - b))
}
