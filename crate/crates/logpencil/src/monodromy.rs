//! Monodromy representations of a pencil restricted to a generic line
//! slice of the arrangement complement.
//!
//! A slice `x(t) = basepoint + t * direction` meets each hyperplane `H` in
//! one puncture `t_H = -a_H(basepoint) / a_H(direction)`, computed in the
//! pencil's own coefficient ring before any rounding. Pulling the
//! connection back to the slice gives the Fuchsian system with the same
//! residues at the punctures, which [`crate::integrate`] transports along
//! meridian loops.
//!
//! Conventions (fixed, not canonical): loops run counterclockwise in the
//! t-plane; generators are ordered by increasing argument of their
//! puncture as seen from the basepoint `t = 0`; the monodromy matrix is
//! `M = F(end)` for the fundamental solution with `F(start) = I`, so
//! transporting loop `g1` then `g2` composes as `M(g2) * M(g1)`. Results
//! are slice monodromy: generators of the image of the slice's
//! fundamental group, which for the built-in fiber-type arrangements
//! generates the full monodromy group.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};
use thiserror::Error;

use crate::algebra::{rat, Rat};
use crate::coeff::{Coeff, CxK};
use crate::integrate::{transport_path, FuchsianRhs, PathSeg, TransportError};
use crate::numeric::{self, CMat};
use crate::pencil::{LogPencil, PencilNumeric};

#[derive(Debug, Clone, Error)]
pub enum MonodromyError {
    #[error("could not draw a non-degenerate slice after {0} attempts")]
    ExhaustedRedraws(usize),
    #[error("slice is degenerate: {0}")]
    DegenerateSlice(String),
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error("puncture index {got} out of range ({count} punctures)")]
    BadPuncture { got: usize, count: usize },
    #[error("generator {index} is numerically singular (|det| = {det:e})")]
    SingularGenerator { index: usize, det: f64 },
    #[error("representations have different generator counts: {0} vs {1}")]
    GeneratorMismatch(usize, usize),
}

/// A puncture of the slice: the slice parameter where a hyperplane is hit.
#[derive(Debug, Clone)]
pub struct Puncture {
    pub t: Complex64,
    pub label: String,
    /// Index of the hyperplane in the pencil's arrangement.
    pub hyperplane: usize,
}

/// A generic affine line in the base, with its punctures sorted by angle.
#[derive(Debug, Clone)]
pub struct LineSlice {
    pub basepoint: Vec<Complex64>,
    pub direction: Vec<Complex64>,
    pub punctures: Vec<Puncture>,
}

/// Margin rules from the meridian construction.
const MIN_PUNCTURE_ABS: f64 = 1e-3;

impl LineSlice {
    /// The base point of the slice as a point of the base, `x(t)`.
    pub fn point_at(&self, t: Complex64) -> Vec<Complex64> {
        self.basepoint
            .iter()
            .zip(&self.direction)
            .map(|(b, d)| b + d * t)
            .collect()
    }

    pub fn meridian_count(&self) -> usize {
        self.punctures.len()
    }
}

/// Draws a random rational complex slice for the pencil, redrawing on
/// degeneracy (direction parallel to a hyperplane, coincident punctures,
/// punctures too close to the basepoint, or two punctures on one ray from
/// the basepoint, which would foul the radial meridian legs).
pub fn make_slice<K: Coeff>(p: &LogPencil<K>, seed: u64) -> Result<LineSlice, MonodromyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let attempts = 100;
    for _ in 0..attempts {
        let draw = |rng: &mut ChaCha8Rng| -> CxK<K> {
            let re = rat(rng.gen_range(-12i64..=12), rng.gen_range(1i64..=4));
            let im = rat(rng.gen_range(-12i64..=12), rng.gen_range(1i64..=4));
            CxK::from_rats(&re, &im)
        };
        let basepoint: Vec<CxK<K>> = (0..p.base_dim()).map(|_| draw(&mut rng)).collect();
        let direction: Vec<CxK<K>> = (0..p.base_dim()).map(|_| draw(&mut rng)).collect();
        match try_slice(p, &basepoint, &direction) {
            Ok(s) => return Ok(s),
            Err(_) => continue,
        }
    }
    Err(MonodromyError::ExhaustedRedraws(attempts))
}

/// Builds the slice through a caller-chosen rational basepoint and
/// direction (real and imaginary parts as rationals); errors instead of
/// redrawing when the data is degenerate.
pub fn slice_through<K: Coeff>(
    p: &LogPencil<K>,
    basepoint: &[(Rat, Rat)],
    direction: &[(Rat, Rat)],
) -> Result<LineSlice, MonodromyError> {
    let b: Vec<CxK<K>> = basepoint
        .iter()
        .map(|(re, im)| CxK::from_rats(re, im))
        .collect();
    let d: Vec<CxK<K>> = direction
        .iter()
        .map(|(re, im)| CxK::from_rats(re, im))
        .collect();
    try_slice(p, &b, &d)
}

fn try_slice<K: Coeff>(
    p: &LogPencil<K>,
    basepoint: &[CxK<K>],
    direction: &[CxK<K>],
) -> Result<LineSlice, MonodromyError> {
    let deg = |msg: &str| MonodromyError::DegenerateSlice(msg.to_string());
    let mut punctures: Vec<(CxK<K>, String, usize)> = Vec::new();
    for (i, h) in p.arrangement().hyperplanes().iter().enumerate() {
        // a_H(b + t d) = a_H(b) + t <n_H, d>; the offset only enters a_H(b).
        let at_base = h.form_at_cx(basepoint);
        let mut along = CxK::<K>::zero();
        for (a, di) in h.normal.iter().zip(direction) {
            along = along.add(&di.scale(a));
        }
        if along.is_zero() || along.approx_zero(1e-25) {
            return Err(deg(&format!("direction parallel to {}", h.label)));
        }
        let t = at_base
            .div(&along)
            .ok_or_else(|| deg("zero direction pairing"))?;
        let t = CxK::new(t.re.ring_neg(), t.im.ring_neg());
        punctures.push((t, h.label.clone(), i));
    }
    // Degeneracy checks in the coefficient ring.
    for (i, (ti, li, _)) in punctures.iter().enumerate() {
        let abs2 = ti.re.ring_mul(&ti.re).ring_add(&ti.im.ring_mul(&ti.im));
        let min2 = MIN_PUNCTURE_ABS * MIN_PUNCTURE_ABS;
        if abs2.to_f64() < min2 {
            return Err(deg(&format!("puncture {li} within {MIN_PUNCTURE_ABS} of basepoint")));
        }
        for (tj, lj, _) in punctures.iter().skip(i + 1) {
            let diff = ti.sub(tj);
            if diff.is_zero() || diff.approx_zero(1e-25) {
                return Err(deg(&format!("punctures {li} and {lj} coincide")));
            }
            // Same ray from 0 means a radial meridian leg would cross the
            // nearer puncture on the way to the farther one.
            if K::EXACT {
                let prod = ti.mul(&CxK::new(tj.re.clone(), tj.im.ring_neg()));
                if prod.im.is_zero() && prod.re.to_f64() > 0.0 {
                    return Err(deg(&format!("punctures {li} and {lj} share a ray")));
                }
            } else {
                let a = ti.to_c64();
                let b = tj.to_c64();
                if (a.arg() - b.arg()).abs() < 1e-9 {
                    return Err(deg(&format!("punctures {li} and {lj} share a ray")));
                }
            }
        }
    }
    let mut numeric: Vec<Puncture> = punctures
        .into_iter()
        .map(|(t, label, hyperplane)| Puncture {
            t: t.to_c64(),
            label,
            hyperplane,
        })
        .collect();
    // Generator order: increasing argument as seen from the basepoint,
    // ties broken by modulus then arrangement index.
    numeric.sort_by(|a, b| {
        a.t.arg()
            .partial_cmp(&b.t.arg())
            .unwrap()
            .then(a.t.norm().partial_cmp(&b.t.norm()).unwrap())
            .then(a.hyperplane.cmp(&b.hyperplane))
    });
    Ok(LineSlice {
        basepoint: basepoint.iter().map(CxK::to_c64).collect(),
        direction: direction.iter().map(CxK::to_c64).collect(),
        punctures: numeric,
    })
}

/// A closed loop in the t-plane based at `t = 0`.
#[derive(Debug, Clone)]
pub struct Loop {
    pub segs: Vec<PathSeg>,
}

impl Loop {
    pub fn reversed(&self) -> Loop {
        Loop {
            segs: self.segs.iter().rev().map(PathSeg::reversed).collect(),
        }
    }

    /// A degenerate zero-area loop (transport must return the identity).
    pub fn trivial() -> Loop {
        let o = Complex64::new(0.0, 0.0);
        Loop {
            segs: vec![PathSeg::Line { from: o, to: o }],
        }
    }
}

/// The standard meridian around puncture `k`: a radial leg from the
/// basepoint to distance `rho_k` of the puncture, a full counterclockwise
/// circle, and the leg back. `rho_k` is half the least distance to the
/// other punctures and the basepoint, capped at a tenth of `|t_k|`.
pub fn meridian(slice: &LineSlice, k: usize) -> Result<Loop, MonodromyError> {
    let n = slice.punctures.len();
    if k >= n {
        return Err(MonodromyError::BadPuncture { got: k, count: n });
    }
    let tk = slice.punctures[k].t;
    let mut min_d = tk.norm(); // distance to the basepoint t=0
    for (j, p) in slice.punctures.iter().enumerate() {
        if j != k {
            min_d = min_d.min((p.t - tk).norm());
        }
    }
    let rho = (0.5 * min_d).min(0.1 * tk.norm());
    let approach = tk * (1.0 - rho / tk.norm());
    let theta0 = (approach - tk).arg();
    let origin = Complex64::new(0.0, 0.0);
    Ok(Loop {
        segs: vec![
            PathSeg::Line {
                from: origin,
                to: approach,
            },
            PathSeg::Arc {
                center: tk,
                radius: rho,
                theta0,
                dtheta: 2.0 * std::f64::consts::PI,
            },
            PathSeg::Line {
                from: approach,
                to: origin,
            },
        ],
    })
}

/// A large counterclockwise circle enclosing every puncture, entered along
/// a ray that stays clear of all of them.
pub fn loop_around_infinity(slice: &LineSlice) -> Loop {
    let radius = 2.0 * slice
        .punctures
        .iter()
        .map(|p| p.t.norm())
        .fold(0.0f64, f64::max)
        + 1.0;
    // Pick the entry angle farthest from every puncture direction.
    let mut best = (0.0f64, -1.0f64);
    let samples = 360;
    for i in 0..samples {
        let phi = 2.0 * std::f64::consts::PI * (i as f64) / (samples as f64);
        let gap = slice
            .punctures
            .iter()
            .map(|p| {
                let mut d = (p.t.arg() - phi).abs();
                d = d.min(2.0 * std::f64::consts::PI - d);
                d
            })
            .fold(f64::INFINITY, f64::min);
        if gap > best.1 {
            best = (phi, gap);
        }
    }
    let phi = best.0;
    let entry = Complex64::from_polar(radius, phi);
    let origin = Complex64::new(0.0, 0.0);
    Loop {
        segs: vec![
            PathSeg::Line {
                from: origin,
                to: entry,
            },
            PathSeg::Arc {
                center: origin,
                radius,
                theta0: phi,
                dtheta: 2.0 * std::f64::consts::PI,
            },
            PathSeg::Line {
                from: entry,
                to: origin,
            },
        ],
    }
}

/// Parallel transport of the fundamental solution along a loop;
/// `F(0) = I`, returns `F(end)`.
pub fn transport(
    pn: &PencilNumeric,
    s: &[Complex64],
    slice: &LineSlice,
    lp: &Loop,
    rtol: f64,
) -> Result<CMat, MonodromyError> {
    let residues: Vec<CMat> = slice
        .punctures
        .iter()
        .map(|p| pn.residues[p.hyperplane].eval(s))
        .collect();
    let punctures: Vec<Complex64> = slice.punctures.iter().map(|p| p.t).collect();
    let rhs = FuchsianRhs {
        residues: &residues,
        punctures: &punctures,
        dim: pn.fiber_dim,
    };
    Ok(transport_path(
        &rhs,
        &lp.segs,
        rtol,
        CMat::identity(pn.fiber_dim, pn.fiber_dim),
    )?)
}

/// Monodromy representation on the slice: one generator per meridian, in
/// slice order, with the loop-reversal identity defect recorded as the
/// achieved tolerance.
#[derive(Debug, Clone)]
pub struct MonodromyRep {
    pub generators: Vec<CMat>,
    pub labels: Vec<String>,
    pub s: Vec<Complex64>,
    pub achieved_tol: f64,
}

pub fn monodromy_rep(
    pn: &PencilNumeric,
    s: &[Complex64],
    slice: &LineSlice,
    rtol: f64,
) -> Result<MonodromyRep, MonodromyError> {
    let mut generators = Vec::with_capacity(slice.punctures.len());
    let mut labels = Vec::with_capacity(slice.punctures.len());
    let mut achieved: f64 = 0.0;
    let n = pn.fiber_dim;
    for k in 0..slice.punctures.len() {
        let lp = meridian(slice, k)?;
        let m = transport(pn, s, slice, &lp, rtol)?;
        let m_rev = transport(pn, s, slice, &lp.reversed(), rtol)?;
        let defect = numeric::max_abs_diff(&(&m_rev * &m), &CMat::identity(n, n));
        achieved = achieved.max(defect);
        let det = m.clone().lu().determinant();
        if det.norm() <= 1e-10 {
            return Err(MonodromyError::SingularGenerator {
                index: k,
                det: det.norm(),
            });
        }
        labels.push(slice.punctures[k].label.clone());
        generators.push(m);
    }
    Ok(MonodromyRep {
        generators,
        labels,
        s: s.to_vec(),
        achieved_tol: achieved,
    })
}

/// Conjugation-invariant fingerprint: characteristic-polynomial
/// coefficients of every word in the positive generators of length at
/// most `word_len`, in lexicographic order by (length, letters).
#[derive(Debug, Clone)]
pub struct InvariantSignature {
    pub word_len: usize,
    pub words: Vec<Vec<usize>>,
    pub coeffs: Vec<Vec<Complex64>>,
}

pub fn signature(rep: &MonodromyRep, word_len: usize) -> InvariantSignature {
    assert!(
        (1..=3).contains(&word_len),
        "supported word lengths are 1..=3"
    );
    let m = rep.generators.len();
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..word_len {
        let mut next = Vec::new();
        for w in &frontier {
            for g in 0..m {
                let mut w2 = w.clone();
                w2.push(g);
                next.push(w2);
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let coeffs = words
        .iter()
        .map(|w| {
            let n = rep.generators.first().map_or(0, CMat::nrows);
            let mut prod = CMat::identity(n, n);
            // Word letters act left to right; matrices compose accordingly.
            for &g in w {
                prod = &rep.generators[g] * prod;
            }
            numeric::char_poly(&prod)
        })
        .collect();
    InvariantSignature {
        word_len,
        words,
        coeffs,
    }
}

/// Distance of two signatures: the maximum difference of matching
/// coefficients, each normalized by `1 + max(|a|, |b|)`. For generators
/// of moderate norm this is the plain max-abs difference; the
/// normalization keeps the metric meaningful when non-normal generators
/// push word coefficients to magnitudes where absolute f64 comparison
/// saturates.
pub fn signature_distance(
    a: &InvariantSignature,
    b: &InvariantSignature,
) -> Result<f64, MonodromyError> {
    if a.words.len() != b.words.len() {
        return Err(MonodromyError::GeneratorMismatch(
            a.words.len(),
            b.words.len(),
        ));
    }
    let mut d: f64 = 0.0;
    for (ca, cb) in a.coeffs.iter().zip(&b.coeffs) {
        for (x, y) in ca.iter().zip(cb) {
            let scale = 1.0 + x.norm().max(y.norm());
            d = d.max((x - y).norm() / scale);
        }
    }
    Ok(d)
}

/// Dimension of the common fixed space of the generators: `N` minus the
/// numerical rank of the stacked `M_k - I`.
pub fn fixed_space_dim(rep: &MonodromyRep, threshold: f64) -> usize {
    let n = rep.generators.first().map_or(0, CMat::nrows);
    if rep.generators.is_empty() {
        return n;
    }
    let mut stack = CMat::zeros(n * rep.generators.len(), n);
    for (k, m) in rep.generators.iter().enumerate() {
        let block = m - CMat::identity(n, n);
        stack.view_mut((k * n, 0), (n, n)).copy_from(&block);
    }
    n - numeric::rank_with_threshold(&stack, threshold)
}

/// Dimension of the commutant: matrices commuting with every generator,
/// via the stacked Sylvester systems `I ⊗ M_k - M_k^T ⊗ I`.
pub fn commutant_dim(rep: &MonodromyRep, threshold: f64) -> usize {
    let n = rep.generators.first().map_or(0, CMat::nrows);
    if rep.generators.is_empty() {
        return n * n;
    }
    let id = CMat::identity(n, n);
    let mut stack = CMat::zeros(n * n * rep.generators.len(), n * n);
    for (k, m) in rep.generators.iter().enumerate() {
        let block = numeric::kron(&id, m) - numeric::kron(&m.transpose(), &id);
        stack
            .view_mut((k * n * n, 0), (n * n, n * n))
            .copy_from(&block);
    }
    n * n - numeric::rank_with_threshold(&stack, threshold)
}

/// Conjugates every generator by `g` (used by invariance tests).
pub fn conjugate_rep(rep: &MonodromyRep, g: &CMat) -> MonodromyRep {
    let gi = g
        .clone()
        .try_inverse()
        .expect("conjugating matrix must be invertible");
    MonodromyRep {
        generators: rep.generators.iter().map(|m| g * m * &gi).collect(),
        labels: rep.labels.clone(),
        s: rep.s.clone(),
        achieved_tol: rep.achieved_tol,
    }
}

/// A random complex matrix with entries in the unit square, kept away
/// from singularity; deterministic in the seed.
pub fn random_conjugator(n: usize, seed: u64) -> CMat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let m = CMat::from_fn(n, n, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        if m.clone().lu().determinant().norm() > 0.1 {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat_int, Mat, ParamLinear};
    use crate::arrangement::{Arrangement, Hyperplane};

    fn model_pencil() -> LogPencil<Rat> {
        let h = Hyperplane::new(vec![rat_int(1)], rat_int(0), "x=0").unwrap();
        let arr = Arrangement::new(1, vec![h]).unwrap();
        let constant = Mat::from_rows(vec![
            vec![rat_int(0), rat_int(1)],
            vec![rat_int(0), rat_int(0)],
        ]);
        let lin = Mat::from_rows(vec![
            vec![rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(0)],
        ]);
        let residue = ParamLinear::new(constant, vec![lin]).unwrap();
        LogPencil::new(arr, 2, vec!["s".into()], vec!["x".into()], vec![residue]).unwrap()
    }

    /// Slice through basepoint x=1 with direction -1: puncture at t = 1.
    fn unit_slice(p: &LogPencil<Rat>) -> LineSlice {
        slice_through(
            p,
            &[(rat_int(1), rat_int(0))],
            &[(rat_int(-1), rat_int(0))],
        )
        .unwrap()
    }

    #[test]
    fn slice_punctures_exact() {
        let p = model_pencil();
        let s = unit_slice(&p);
        assert_eq!(s.punctures.len(), 1);
        assert!((s.punctures[0].t - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        // meridian radius: single puncture at 1 -> cap rule gives 0.1
        let lp = meridian(&s, 0).unwrap();
        match &lp.segs[1] {
            PathSeg::Arc { radius, .. } => assert!((radius - 0.1).abs() < 1e-15),
            _ => panic!("second leg should be the circle"),
        }
        match &lp.segs[0] {
            PathSeg::Line { to, .. } => {
                assert!((to - Complex64::new(0.9, 0.0)).norm() < 1e-15)
            }
            _ => panic!("first leg should be radial"),
        }
    }

    #[test]
    fn closed_form_monodromy_of_model_family() {
        // M = [[q, (q-1)/s],[0,1]], q = e^{2 pi i s}, basepoint x = 1.
        let p = model_pencil();
        let slice = unit_slice(&p);
        let pn = p.numeric();
        let s = Complex64::new(0.3, 0.0);
        let rep = monodromy_rep(&pn, &[s], &slice, 1e-12).unwrap();
        let q = (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * s).exp();
        let expect = CMat::from_row_slice(
            2,
            2,
            &[
                q,
                (q - Complex64::new(1.0, 0.0)) / s,
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            ],
        );
        let err = numeric::max_abs_diff(&rep.generators[0], &expect);
        assert!(err < 1e-10, "closed-form defect {err}");
        assert!(rep.achieved_tol < 1e-9);
    }

    #[test]
    fn trivial_loop_is_identity() {
        let p = model_pencil();
        let slice = unit_slice(&p);
        let pn = p.numeric();
        let m = transport(
            &pn,
            &[Complex64::new(0.7, 0.2)],
            &slice,
            &Loop::trivial(),
            1e-12,
        )
        .unwrap();
        assert!(numeric::max_abs_diff(&m, &CMat::identity(2, 2)) < 1e-14);
    }

    #[test]
    fn zero_parameter_of_pure_pencil_gives_identity() {
        // Strip the constant part so B(0) = 0.
        let h = Hyperplane::new(vec![rat_int(1)], rat_int(0), "x=0").unwrap();
        let arr = Arrangement::new(1, vec![h]).unwrap();
        let lin = Mat::from_rows(vec![
            vec![rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(0)],
        ]);
        let residue = ParamLinear::new(Mat::zeros(2, 2), vec![lin]).unwrap();
        let p = LogPencil::new(arr, 2, vec!["s".into()], vec!["x".into()], vec![residue]).unwrap();
        let slice = unit_slice(&p);
        let rep = monodromy_rep(&p.numeric(), &[Complex64::new(0.0, 0.0)], &slice, 1e-12).unwrap();
        assert!(
            numeric::max_abs_diff(&rep.generators[0], &CMat::identity(2, 2)) < 1e-12
        );
    }

    #[test]
    fn signature_conjugation_invariance_and_fixed_space() {
        let p = model_pencil();
        let slice = unit_slice(&p);
        let pn = p.numeric();
        let rep = monodromy_rep(&pn, &[Complex64::new(0.25, 0.0)], &slice, 1e-12).unwrap();
        // eigenvalues {e^{pi i/2}, 1} = {i, 1}
        let evs = numeric::eigenvalues(&rep.generators[0]);
        assert!(numeric::multisets_close(
            &evs,
            &[Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)],
            1e-9
        ));
        let sig = signature(&rep, 1);
        let conj = conjugate_rep(&rep, &random_conjugator(2, 7));
        let sig2 = signature(&conj, 1);
        let d = signature_distance(&sig, &sig2).unwrap();
        assert!(d < 1e-8, "conjugation defect {d}");
        // fixed space: dim 1 at s = 1/4, dim 2 at s = 2 (monodromy = I)
        assert_eq!(fixed_space_dim(&rep, 1e-7), 1);
        assert_eq!(fixed_space_dim(&conj, 1e-7), 1);
        let rep2 = monodromy_rep(&pn, &[Complex64::new(2.0, 0.0)], &slice, 1e-12).unwrap();
        assert_eq!(fixed_space_dim(&rep2, 1e-7), 2);
        // commutant: generic 2 (distinct eigenvalues), at s=2 full 4
        assert_eq!(commutant_dim(&rep, 1e-7), 2);
        assert_eq!(commutant_dim(&rep2, 1e-7), 4);
    }

    #[test]
    fn identity_rep_signature_words() {
        let p = model_pencil();
        let slice = unit_slice(&p);
        let rep = monodromy_rep(&p.numeric(), &[Complex64::new(1.0, 0.0)], &slice, 1e-12).unwrap();
        // s = 1: monodromy is exactly I; char poly of every word is (t-1)^2
        let sig = signature(&rep, 3);
        assert_eq!(sig.words.len(), 3);
        for c in &sig.coeffs {
            assert!((c[1] + Complex64::new(2.0, 0.0)).norm() < 1e-9);
            assert!((c[0] - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn det_product_law_over_all_meridians() {
        let p = model_pencil();
        let slice = unit_slice(&p);
        let pn = p.numeric();
        let s = [Complex64::new(0.37, 0.05)];
        let rep = monodromy_rep(&pn, &s, &slice, 1e-12).unwrap();
        let det_prod: Complex64 = rep
            .generators
            .iter()
            .map(|m| m.clone().lu().determinant())
            .product();
        let big = loop_around_infinity(&slice);
        let m_inf = transport(&pn, &s, &slice, &big, 1e-12).unwrap();
        let det_inf = m_inf.lu().determinant();
        assert!((det_prod - det_inf).norm() < 1e-8);
        // and both match exp(2 pi i tr C(s))
        let tr = pn.residues[0].trace(&s);
        let expect = (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * tr).exp();
        assert!((det_prod - expect).norm() < 1e-8);
    }
}
