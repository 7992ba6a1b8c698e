//! Shift-operator identities and shift-invariance of monodromy.
//!
//! `verify_shift_exact` checks the intertwining identity
//! `dA = B(s + e_j) A - A B(s)` coordinatewise as an identity of rational
//! functions in `(s, x)` — an exact yes/no with a witness entry on
//! failure. The monodromy-level tests compare conjugation-invariant
//! signatures of representations at `s` and `s + v` on one fixed slice;
//! matching signatures are a necessary condition for isomorphism, and the
//! reports say exactly that.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{rat_int, AlgebraError, MultiPoly, Rat, RatFun, RatFunMatrix, Vars};
use crate::monodromy::{
    monodromy_rep, signature, signature_distance, LineSlice, MonodromyError, MonodromyRep,
};
use crate::numeric;
use crate::pencil::{LogPencil, PencilNumeric};

#[derive(Debug, Clone, Error)]
pub enum PeriodicityError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Monodromy(#[from] MonodromyError),
    #[error("shift index {got} out of range 1..={count}")]
    BadShiftIndex { got: usize, count: usize },
    #[error("operator symbols {got} do not match the pencil's (params then coords: {want})")]
    OperatorSymbols { got: String, want: String },
    #[error("operator is {got}x{got} but the fiber is {want}")]
    OperatorDim { got: usize, want: usize },
}

/// Outcome of the exact intertwining check.
#[derive(Debug, Clone)]
pub struct ShiftCheck {
    pub ok: bool,
    /// On failure: coordinate name, entry, and the nonzero defect.
    pub witness: Option<ShiftWitness>,
}

#[derive(Debug, Clone)]
pub struct ShiftWitness {
    pub coord: String,
    pub row: usize,
    pub col: usize,
    pub defect: String,
}

/// Connection components as matrices of rational functions, the symbolic
/// counterpart of [`PencilNumeric::components`]. Symbol order is
/// parameters then coordinates.
pub fn symbolic_components(p: &LogPencil<Rat>) -> Result<Vec<RatFunMatrix>, PeriodicityError> {
    let names: Vec<String> = p
        .param_names()
        .iter()
        .cloned()
        .chain(p.coord_names().iter().cloned())
        .collect();
    let vars = Vars::new(names);
    let nparams = p.param_count();
    let fiber = p.fiber_dim();
    let mut comps = vec![RatFunMatrix::zero(&vars, fiber); p.base_dim()];
    for (h, res) in p.arrangement().hyperplanes().iter().zip(p.residues()) {
        // a_H(x) as a polynomial in the coordinate symbols.
        let mut form = MultiPoly::constant(&vars, -h.offset.clone());
        for (i, a) in h.normal.iter().enumerate() {
            if num_traits::Zero::is_zero(a) {
                continue;
            }
            form = form.add(&MultiPoly::var_index(&vars, nparams + i).scale(a));
        }
        let form = RatFun::from_poly(form);
        for i in 0..p.base_dim() {
            let a = &h.normal[i];
            if num_traits::Zero::is_zero(a) {
                continue;
            }
            for r in 0..fiber {
                for c in 0..fiber {
                    // residue entry as an affine polynomial in s
                    let mut entry =
                        MultiPoly::constant(&vars, res.constant().at(r, c).clone());
                    for j in 0..nparams {
                        let coeff = res.linear(j).at(r, c);
                        if num_traits::Zero::is_zero(coeff) {
                            continue;
                        }
                        entry = entry.add(&MultiPoly::var_index(&vars, j).scale(coeff));
                    }
                    if entry.is_zero() {
                        continue;
                    }
                    let term = RatFun::from_poly(entry.scale(a))
                        .div(&form)
                        .expect("hyperplane form is nonzero");
                    *comps[i].at_mut(r, c) = comps[i].at(r, c).add(&term);
                }
            }
        }
    }
    Ok(comps)
}

/// Exact verification of `∇(s + e_j) ∘ A = A ∘ ∇(s)` in its first-order
/// form `∂A/∂x_i = B^(i)(s + e_j) A - A B^(i)(s)` for every coordinate.
/// `j` is 1-based. Equality of rational functions is decided by
/// cross-multiplication; `true` means every defect entry is the zero
/// rational function.
pub fn verify_shift_exact(
    p: &LogPencil<Rat>,
    a: &RatFunMatrix,
    j: usize,
) -> Result<ShiftCheck, PeriodicityError> {
    if !(1..=p.param_count()).contains(&j) {
        return Err(PeriodicityError::BadShiftIndex {
            got: j,
            count: p.param_count(),
        });
    }
    if a.dim() != p.fiber_dim() {
        return Err(PeriodicityError::OperatorDim {
            got: a.dim(),
            want: p.fiber_dim(),
        });
    }
    let comps = symbolic_components(p)?;
    let vars = comps
        .first()
        .map(|c| c.vars().clone())
        .unwrap_or_else(|| a.vars().clone());
    if a.vars() != &vars {
        return Err(PeriodicityError::OperatorSymbols {
            got: a.vars().to_string(),
            want: vars.to_string(),
        });
    }
    let shift_name = &p.param_names()[j - 1];
    let one = rat_int(1);
    for (i, b_i) in comps.iter().enumerate() {
        let b_shifted = b_i.shift_var(shift_name, &one)?;
        let coord_index = p.param_count() + i;
        let da = a.partial_index(coord_index);
        let defect = da.sub(&b_shifted.mul(a)).add(&a.mul(b_i));
        if let Some((row, col, value)) = defect.first_nonzero() {
            return Ok(ShiftCheck {
                ok: false,
                witness: Some(ShiftWitness {
                    coord: p.coord_names()[i].clone(),
                    row,
                    col,
                    defect: value.to_string(),
                }),
            });
        }
    }
    Ok(ShiftCheck {
        ok: true,
        witness: None,
    })
}

/// Report of one signature comparison between `s` and `s + v`.
#[derive(Debug, Clone, Serialize)]
pub struct PeriodicityReport {
    pub pencil_id: String,
    pub s: Vec<(f64, f64)>,
    pub shift: Vec<i64>,
    pub word_len: usize,
    pub signature_distance: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Hyperplane labels whose residue is resonant at `s` or `s + v`;
    /// a nonempty list voids the pass/fail verdict.
    pub resonant: Vec<String>,
}

/// Options shared by the signature-comparison tests.
#[derive(Debug, Clone, Copy)]
pub struct CompareOpts {
    pub word_len: usize,
    pub tol: f64,
    pub rtol: f64,
}

impl Default for CompareOpts {
    fn default() -> Self {
        CompareOpts {
            word_len: 2,
            tol: 1e-6,
            rtol: 1e-12,
        }
    }
}

/// Integer-gap resonance of a residue at complex parameters, detected on
/// its eigenvalues with a fixed `1e-8` guard.
pub fn residue_resonant_at(pn: &PencilNumeric, h: usize, s: &[Complex64]) -> bool {
    let m = pn.residues[h].eval(s);
    let evs = numeric::eigenvalues(&m);
    for (i, a) in evs.iter().enumerate() {
        for b in evs.iter().skip(i + 1) {
            let d = a - b;
            let k = d.re.round();
            if k != 0.0 && (d.re - k).abs() < 1e-8 && d.im.abs() < 1e-8 {
                return true;
            }
        }
    }
    false
}

/// Labels of hyperplanes with resonant residues at `s`.
pub fn resonant_labels(pn: &PencilNumeric, s: &[Complex64]) -> Vec<String> {
    (0..pn.hyperplanes.len())
        .filter(|&h| residue_resonant_at(pn, h, s))
        .map(|h| pn.hyperplanes[h].label.clone())
        .collect()
}

/// Compares invariant signatures of the monodromy at `s` and `s + v` on
/// the same slice with the same integrator tolerance. Matching signatures
/// are a necessary condition for the representations to be isomorphic.
pub fn test_periodic_monodromy(
    pn: &PencilNumeric,
    pencil_id: &str,
    s: &[Complex64],
    v: &[i64],
    slice: &LineSlice,
    opts: CompareOpts,
) -> Result<PeriodicityReport, PeriodicityError> {
    assert_eq!(v.len(), s.len(), "shift vector arity");
    let s2: Vec<Complex64> = s
        .iter()
        .zip(v)
        .map(|(si, &vi)| si + Complex64::new(vi as f64, 0.0))
        .collect();
    let rep1 = monodromy_rep(pn, s, slice, opts.rtol)?;
    let rep2 = monodromy_rep(pn, &s2, slice, opts.rtol)?;
    let d = signature_distance(
        &signature(&rep1, opts.word_len),
        &signature(&rep2, opts.word_len),
    )?;
    let mut resonant = resonant_labels(pn, s);
    for l in resonant_labels(pn, &s2) {
        let tagged = format!("{l} (shifted)");
        if !resonant.contains(&l) {
            resonant.push(tagged);
        }
    }
    Ok(PeriodicityReport {
        pencil_id: pencil_id.to_string(),
        s: s.iter().map(|z| (z.re, z.im)).collect(),
        shift: v.to_vec(),
        word_len: opts.word_len,
        signature_distance: d,
        tolerance: opts.tol,
        pass: d <= opts.tol && resonant.is_empty(),
        resonant,
    })
}

/// One row of the q-dependence table.
#[derive(Debug, Clone, Serialize)]
pub struct QDependenceRow {
    pub shift: Vec<i64>,
    pub signature_distance: f64,
    pub pass: bool,
    pub resonant: bool,
}

/// Signature invariance over random integer shifts, and the sublattice of
/// `Z^n` generated by the shifts that matched.
#[derive(Debug, Clone, Serialize)]
pub struct QDependenceReport {
    pub rows: Vec<QDependenceRow>,
    pub tolerance: f64,
    /// Basis rows of the lattice generated by the passing shifts.
    pub matched_sublattice: Vec<Vec<i64>>,
}

pub fn test_q_dependence(
    pn: &PencilNumeric,
    s: &[Complex64],
    trials: usize,
    slice: &LineSlice,
    opts: CompareOpts,
    seed: u64,
) -> Result<QDependenceReport, PeriodicityError> {
    assert!(trials >= 1);
    let n = s.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base_rep = monodromy_rep(pn, s, slice, opts.rtol)?;
    let base_sig = signature(&base_rep, opts.word_len);
    let mut rows = Vec::new();
    let mut passing: Vec<Vec<i64>> = Vec::new();
    for _ in 0..trials {
        let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-3i64..=3)).collect();
        let s2: Vec<Complex64> = s
            .iter()
            .zip(&v)
            .map(|(si, &vi)| si + Complex64::new(vi as f64, 0.0))
            .collect();
        let rep2 = monodromy_rep(pn, &s2, slice, opts.rtol)?;
        let d = signature_distance(&base_sig, &signature(&rep2, opts.word_len))?;
        let resonant =
            !resonant_labels(pn, s).is_empty() || !resonant_labels(pn, &s2).is_empty();
        let pass = d <= opts.tol && !resonant;
        if pass && v.iter().any(|&x| x != 0) {
            passing.push(v.clone());
        }
        rows.push(QDependenceRow {
            shift: v,
            signature_distance: d,
            pass,
            resonant,
        });
    }
    Ok(QDependenceReport {
        rows,
        tolerance: opts.tol,
        matched_sublattice: lattice_basis(passing),
    })
}

/// Hermite-style row basis of the integer lattice generated by `rows`.
pub fn lattice_basis(mut rows: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    rows.retain(|r| r.iter().any(|&x| x != 0));
    if rows.is_empty() {
        return Vec::new();
    }
    let n = rows[0].len();
    let mut basis: Vec<Vec<i64>> = Vec::new();
    let mut work = rows;
    for col in 0..n {
        loop {
            // find row with minimal nonzero |entry| in this column
            let mut min_idx = None;
            for (i, r) in work.iter().enumerate() {
                if r[col] != 0
                    && min_idx.map_or(true, |m: usize| r[col].abs() < work[m][col].abs())
                {
                    min_idx = Some(i);
                }
            }
            let Some(pi) = min_idx else { break };
            let pivot = work.remove(pi);
            let mut any_left = false;
            for r in work.iter_mut() {
                if r[col] != 0 {
                    let q = r[col].div_euclid(pivot[col]);
                    for k in 0..n {
                        r[k] -= q * pivot[k];
                    }
                    if r[col] != 0 {
                        any_left = true;
                    }
                }
            }
            work.push(pivot);
            if !any_left {
                // column reduced: move the pivot to the basis
                let pi = work
                    .iter()
                    .position(|r| r[col] != 0)
                    .expect("pivot survived");
                basis.push(work.remove(pi));
                break;
            }
        }
        work.retain(|r| r.iter().any(|&x| x != 0));
    }
    // canonical sign: first nonzero entry positive
    for b in &mut basis {
        if let Some(first) = b.iter().find(|&&x| x != 0) {
            if *first < 0 {
                for x in b.iter_mut() {
                    *x = -*x;
                }
            }
        }
    }
    basis
}

/// Per-generator outcome of the Hecke eigenvalue check.
#[derive(Debug, Clone, Serialize)]
pub struct HeckeGenerator {
    pub label: String,
    pub distinct_eigenvalues: usize,
    pub eigenvalue_set_ok: bool,
    /// `|| (T - l1)(T - l2) ||` for the two eigenvalue clusters.
    pub minimal_poly_defect: f64,
    pub ratio_ok: bool,
}

/// Full-twist consequence of the Hecke relation for Dunkl meridians:
/// every generator must have eigenvalue set `{1, e^{-4 pi i c}}` (the
/// meridian is the square of the braid half-twist), with minimal
/// polynomial of degree at most two.
#[derive(Debug, Clone, Serialize)]
pub struct HeckeReport {
    pub q_re: f64,
    pub q_im: f64,
    pub tolerance: f64,
    pub generators: Vec<HeckeGenerator>,
    pub pass: bool,
}

pub fn hecke_relation_check(rep: &MonodromyRep, c: Complex64, tol: f64) -> HeckeReport {
    let two_pi = 2.0 * std::f64::consts::PI;
    let q = (Complex64::new(0.0, two_pi) * c).exp();
    let full_twist = (Complex64::new(0.0, -2.0 * two_pi) * c).exp(); // e^{-4 pi i c}
    let one = Complex64::new(1.0, 0.0);
    let mut gens = Vec::new();
    let mut pass = true;
    for (m, label) in rep.generators.iter().zip(&rep.labels) {
        let evs = numeric::eigenvalues(m);
        let clusters = numeric::cluster(&evs, tol.max(1e-9));
        let distinct = clusters.len();
        let set_ok = if (full_twist - one).norm() <= tol {
            distinct == 1 && (clusters[0].0 - one).norm() <= tol
        } else {
            distinct == 2
                && numeric::multisets_close(
                    &clusters.iter().map(|c| c.0).collect::<Vec<_>>(),
                    &[one, full_twist],
                    tol,
                )
        };
        // minimal polynomial of degree <= 2: (T - l1)(T - l2) = 0
        let n = m.nrows();
        let id = numeric::CMat::identity(n, n);
        let l1 = clusters[0].0;
        let l2 = clusters.get(1).map(|c| c.0).unwrap_or(l1);
        let defect = numeric::max_abs(&((m - &id * l1) * (m - &id * l2)));
        let minpoly_ok = defect <= tol * 100.0;
        // eigenvalue ratio of the two clusters, against q^{+-2}
        let ratio_ok = if distinct == 2 {
            let r = clusters[1].0 / clusters[0].0;
            let q2 = full_twist;
            (r - q2).norm() <= tol || (r - 1.0 / q2).norm() <= tol
        } else {
            (full_twist - one).norm() <= tol
        };
        pass &= set_ok && minpoly_ok && ratio_ok;
        gens.push(HeckeGenerator {
            label: label.clone(),
            distinct_eigenvalues: distinct,
            eigenvalue_set_ok: set_ok,
            minimal_poly_defect: defect,
            ratio_ok,
        });
    }
    HeckeReport {
        q_re: q.re,
        q_im: q.im,
        tolerance: tol,
        generators: gens,
        pass,
    }
}

/// Braiding eigenvalue-ratio check for the two-point tensor family: the
/// single meridian must have exactly two distinct eigenvalues (with
/// multiplicities 3 and 1) whose ratio is `e^{4 pi i hbar}`.
#[derive(Debug, Clone, Serialize)]
pub struct BraidingReport {
    pub distinct_eigenvalues: usize,
    pub multiplicities: Vec<usize>,
    pub ratio_re: f64,
    pub ratio_im: f64,
    pub expected_re: f64,
    pub expected_im: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn braiding_ratio_check(rep: &MonodromyRep, hbar: Complex64, tol: f64) -> BraidingReport {
    let four_pi = 4.0 * std::f64::consts::PI;
    let expected = (Complex64::new(0.0, four_pi) * hbar).exp();
    let one = Complex64::new(1.0, 0.0);
    let m = &rep.generators[0];
    let evs = numeric::eigenvalues(m);
    let clusters = numeric::cluster(&evs, tol.max(1e-9));
    let mults: Vec<usize> = clusters.iter().map(|c| c.1).collect();
    let (ratio, pass) = if (expected - one).norm() <= tol {
        // degenerate case: single eigenvalue
        (
            one,
            clusters.len() == 1 && (clusters[0].0 - one).norm() <= tol,
        )
    } else if clusters.len() == 2 {
        // multiplicity 3 cluster carries the highest-weight exponent
        let big = clusters.iter().find(|c| c.1 == 3);
        let small = clusters.iter().find(|c| c.1 == 1);
        match (big, small) {
            (Some(b), Some(s)) => {
                let r = b.0 / s.0;
                ((r), (r - expected).norm() <= tol)
            }
            _ => (clusters[0].0 / clusters[1].0, false),
        }
    } else {
        (one, false)
    };
    BraidingReport {
        distinct_eigenvalues: clusters.len(),
        multiplicities: mults,
        ratio_re: ratio.re,
        ratio_im: ratio.im,
        expected_re: expected.re,
        expected_im: expected.im,
        tolerance: tol,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{
        build_exshift, build_exshift_shift, build_verma_kz, build_verma_kz_shift,
    };
    use crate::monodromy::slice_through;

    #[test]
    fn exshift_operator_verifies() {
        let p = build_exshift();
        let a = build_exshift_shift();
        let check = verify_shift_exact(&p, &a, 1).unwrap();
        assert!(check.ok, "witness: {:?}", check.witness);
    }

    #[test]
    fn exshift_broken_operator_fails_with_witness() {
        let p = build_exshift();
        let mut a = build_exshift_shift();
        // entry (1,1) = x + 1 breaks the identity
        let vars = a.vars().clone();
        let x = RatFun::var(&vars, "x").unwrap();
        *a.at_mut(0, 0) = x.add(&RatFun::one(&vars));
        let check = verify_shift_exact(&p, &a, 1).unwrap();
        assert!(!check.ok);
        let w = check.witness.unwrap();
        assert_eq!(w.coord, "x");
    }

    #[test]
    fn verma_operators_verify_exactly() {
        for r in [2usize, 3] {
            let p = build_verma_kz(r).unwrap();
            for k in 1..=r {
                let a = build_verma_kz_shift(r, k).unwrap();
                let check = verify_shift_exact(&p, &a, k).unwrap();
                assert!(check.ok, "r={r} k={k}: {:?}", check.witness);
            }
        }
    }

    #[test]
    fn model_family_periodicity_via_signatures() {
        let p = build_exshift();
        let pn = p.numeric();
        let slice = slice_through(
            &p,
            &[(rat_int(1), rat_int(0))],
            &[(rat_int(-1), rat_int(0))],
        )
        .unwrap();
        let s = [Complex64::new(0.3, 0.0)];
        let rep = test_periodic_monodromy(
            &pn,
            "exshift",
            &s,
            &[1],
            &slice,
            CompareOpts::default(),
        )
        .unwrap();
        assert!(rep.pass, "distance {}", rep.signature_distance);
        // v = 0: distance at the integrator noise floor
        let rep0 =
            test_periodic_monodromy(&pn, "exshift", &s, &[0], &slice, CompareOpts::default())
                .unwrap();
        assert!(rep0.signature_distance <= 1e-9);
    }

    #[test]
    fn lattice_basis_examples() {
        assert_eq!(lattice_basis(vec![vec![2], vec![4]]), vec![vec![2]]);
        assert_eq!(lattice_basis(vec![vec![2], vec![3]]), vec![vec![1]]);
        let b = lattice_basis(vec![vec![1, 1, 0], vec![0, 2, 0]]);
        assert_eq!(b.len(), 2);
        assert!(lattice_basis(vec![vec![0, 0]]).is_empty());
    }
}
