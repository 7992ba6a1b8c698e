//! Logarithmic pencils `B(s) = sum_H C_H(s) d(a_H)/a_H` on complements of
//! affine hyperplane arrangements, and their flatness checks.
//!
//! Flatness is verified two independent ways:
//!
//! 1. [`LogPencil::check_flatness_residue`] — for every codimension-2 flat
//!    `L` and every hyperplane `H` containing `L`, the commutator
//!    `[C_H(s), sum_{H' ⊇ L} C_{H'}(s)]` must vanish identically in `s`
//!    (checked coefficientwise on the s-monomials of degree ≤ 2). Exact
//!    arrangements only.
//! 2. [`LogPencil::check_flatness_points`] — the curvature two-form
//!    `B ∧ B` is evaluated at random rational points `(s, x)` off the
//!    arrangement; all components must vanish (exactly for rational
//!    pencils, below `1e-20` for double-double pencils).
//!
//! The two checks share no code path and serve as each other's oracle.

use num_complex::Complex64;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};
use thiserror::Error;

use crate::algebra::{random_rat, AlgebraError, Mat, ParamLinear, Rat};
use crate::arrangement::{Arrangement, ArrangementError, Hyperplane};
use crate::coeff::Coeff;
use crate::dd::Dd;

#[derive(Debug, Clone, Error)]
pub enum PencilError {
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("residue for `{label}` is {got}x{got}, fiber is {want}")]
    ResidueDim { label: String, got: usize, want: usize },
    #[error("residue for `{label}` has {got} parameters, pencil has {want}")]
    ResidueParams { label: String, got: usize, want: usize },
    #[error("need one residue per hyperplane: {hyperplanes} hyperplanes, {residues} residues")]
    ResidueCount { hyperplanes: usize, residues: usize },
    #[error("point lies on the arrangement (|a_H(x)| = 0 for `{0}`)")]
    OnArrangement(String),
}

/// Failure witness of the residue criterion.
#[derive(Debug, Clone)]
pub struct FlatnessFailure {
    /// Member labels of the codimension-2 flat.
    pub flat: String,
    /// The hyperplane whose residue fails to commute.
    pub hyperplane: String,
    /// Entry of the commutator and offending s-monomial.
    pub row: usize,
    pub col: usize,
    pub monomial: String,
    pub value: String,
}

/// Outcome of the residue flatness criterion.
#[derive(Debug, Clone)]
pub struct FlatnessReport {
    pub pass: bool,
    pub flats_checked: usize,
    pub failures: Vec<FlatnessFailure>,
}

/// A logarithmic pencil: one parameter-affine residue per hyperplane.
#[derive(Debug, Clone)]
pub struct LogPencil<K> {
    arrangement: Arrangement<K>,
    fiber_dim: usize,
    param_names: Vec<String>,
    coord_names: Vec<String>,
    residues: Vec<ParamLinear<K>>,
}

impl<K: Coeff> LogPencil<K> {
    pub fn new(
        arrangement: Arrangement<K>,
        fiber_dim: usize,
        param_names: Vec<String>,
        coord_names: Vec<String>,
        residues: Vec<ParamLinear<K>>,
    ) -> Result<Self, PencilError> {
        if residues.len() != arrangement.len() {
            return Err(PencilError::ResidueCount {
                hyperplanes: arrangement.len(),
                residues: residues.len(),
            });
        }
        assert_eq!(
            coord_names.len(),
            arrangement.base_dim(),
            "one coordinate name per base dimension"
        );
        for (h, c) in arrangement.hyperplanes().iter().zip(&residues) {
            if c.dim() != fiber_dim {
                return Err(PencilError::ResidueDim {
                    label: h.label.clone(),
                    got: c.dim(),
                    want: fiber_dim,
                });
            }
            if c.nparams() != param_names.len() {
                return Err(PencilError::ResidueParams {
                    label: h.label.clone(),
                    got: c.nparams(),
                    want: param_names.len(),
                });
            }
        }
        Ok(LogPencil {
            arrangement,
            fiber_dim,
            param_names,
            coord_names,
            residues,
        })
    }

    pub fn arrangement(&self) -> &Arrangement<K> {
        &self.arrangement
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber_dim
    }

    pub fn base_dim(&self) -> usize {
        self.arrangement.base_dim()
    }

    pub fn param_count(&self) -> usize {
        self.param_names.len()
    }

    pub fn param_names(&self) -> &[String] {
        &self.param_names
    }

    pub fn coord_names(&self) -> &[String] {
        &self.coord_names
    }

    pub fn residues(&self) -> &[ParamLinear<K>] {
        &self.residues
    }

    /// Accessor by hyperplane label.
    pub fn residue_of(&self, label: &str) -> Result<&ParamLinear<K>, PencilError> {
        let i = self.arrangement.index_of(label)?;
        Ok(&self.residues[i])
    }

    /// Coordinate components `B^(i)(s, x)` in the coefficient ring.
    /// Errors when `x` lies on the arrangement.
    pub fn components(&self, s: &[K], x: &[K]) -> Result<Vec<Mat<K>>, PencilError> {
        let r = self.base_dim();
        let n = self.fiber_dim;
        let mut comps = vec![Mat::<K>::zeros(n, n); r];
        for (h, res) in self.arrangement.hyperplanes().iter().zip(&self.residues) {
            let denom = h.form_at(x);
            if denom.is_zero() {
                return Err(PencilError::OnArrangement(h.label.clone()));
            }
            let c = res.eval(s)?;
            for i in 0..r {
                if h.normal[i].is_zero() {
                    continue;
                }
                let w = h.normal[i].ring_div(&denom).expect("nonzero denominator");
                comps[i] = comps[i].add(&c.scale(&w));
            }
        }
        Ok(comps)
    }

    /// Curvature oracle: evaluates every `B ∧ B` component exactly at
    /// `trials` random rational points `(s, x)` off the arrangement.
    /// Rational pencils test for exact zero; double-double pencils use the
    /// `1e-20` threshold. Points that land on the arrangement are
    /// resampled internally.
    pub fn check_flatness_points(&self, trials: usize, seed: u64) -> bool {
        self.flatness_points_detail(trials, seed).is_none()
    }

    /// Like [`Self::check_flatness_points`] but returns the first failing
    /// coordinate pair, for diagnostics.
    pub fn flatness_points_detail(&self, trials: usize, seed: u64) -> Option<(usize, usize)> {
        assert!(trials >= 1, "need at least one trial");
        let tol = 1e-20;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = self.base_dim();
        let n_params = self.param_count();
        for _ in 0..trials {
            // Draw x off the arrangement; the arrangement is a measure-zero
            // locus so this terminates almost surely (cap at 1000 draws).
            let mut x: Vec<K>;
            let mut guard = 0;
            loop {
                x = (0..r)
                    .map(|_| K::from_rat(&random_rat(&mut rng, 10_000, 10_000, false)))
                    .collect();
                let on = self
                    .arrangement
                    .hyperplanes()
                    .iter()
                    .any(|h| h.form_at(&x).approx_zero(1e-30));
                if !on {
                    break;
                }
                guard += 1;
                assert!(guard < 1000, "could not sample a point off the arrangement");
            }
            let s: Vec<K> = (0..n_params)
                .map(|_| K::from_rat(&random_rat(&mut rng, 10_000, 10_000, false)))
                .collect();
            let comps = self
                .components(&s, &x)
                .expect("sampled point is off the arrangement");
            for i in 0..r {
                for k in i + 1..r {
                    let curv = comps[i].commutator(&comps[k]);
                    if !curv.approx_zero(tol) {
                        return Some((i, k));
                    }
                }
            }
        }
        None
    }
}

impl LogPencil<Rat> {
    /// Residue integrability criterion over the codimension-2 flats,
    /// checked coefficientwise in the s-monomials of degree ≤ 2. A failure
    /// names the flat, the hyperplane, the entry and the monomial.
    pub fn check_flatness_residue(&self) -> FlatnessReport {
        let flats = self.arrangement.codim2_flats();
        let mut failures = Vec::new();
        let nparams = self.param_count();
        for flat in &flats {
            // Sum of residues over the flat, split by s-degree.
            let dim = self.fiber_dim;
            let mut total_const = Mat::<Rat>::zeros(dim, dim);
            let mut total_lin = vec![Mat::<Rat>::zeros(dim, dim); nparams];
            for &m in &flat.members {
                total_const = total_const.add(self.residues[m].constant());
                for j in 0..nparams {
                    total_lin[j] = total_lin[j].add(self.residues[m].linear(j));
                }
            }
            for &m in &flat.members {
                let c0 = self.residues[m].constant();
                let cj: Vec<&Mat<Rat>> = (0..nparams).map(|j| self.residues[m].linear(j)).collect();
                // [C(s), D(s)] coefficients: 1, s_j, s_j s_k
                let mut coeffs: Vec<(String, Mat<Rat>)> = Vec::new();
                coeffs.push(("1".to_string(), c0.commutator(&total_const)));
                for j in 0..nparams {
                    let m1 = c0
                        .commutator(&total_lin[j])
                        .add(&cj[j].commutator(&total_const));
                    coeffs.push((self.param_names[j].clone(), m1));
                }
                for j in 0..nparams {
                    for k in j..nparams {
                        let mjk = if j == k {
                            cj[j].commutator(&total_lin[j])
                        } else {
                            cj[j]
                                .commutator(&total_lin[k])
                                .add(&cj[k].commutator(&total_lin[j]))
                        };
                        let name = if j == k {
                            format!("{}^2", self.param_names[j])
                        } else {
                            format!("{}*{}", self.param_names[j], self.param_names[k])
                        };
                        coeffs.push((name, mjk));
                    }
                }
                for (mono, mat) in coeffs {
                    if let Some((row, col, v)) = mat.first_nonzero() {
                        failures.push(FlatnessFailure {
                            flat: self.arrangement.describe_flat(flat),
                            hyperplane: self.arrangement.hyperplane(m).label.clone(),
                            row,
                            col,
                            monomial: mono,
                            value: crate::algebra::rat_to_string(v),
                        });
                    }
                }
            }
        }
        FlatnessReport {
            pass: failures.is_empty(),
            flats_checked: flats.len(),
            failures,
        }
    }

    /// Numeric view used by the monodromy layer.
    pub fn numeric(&self) -> PencilNumeric {
        PencilNumeric::from_pencil(self)
    }
}

impl LogPencil<Dd> {
    pub fn numeric(&self) -> PencilNumeric {
        PencilNumeric::from_pencil(self)
    }
}

/// Complex floating-point view of a pencil: everything parallel transport
/// and the scanners need, with the coefficient ring already rounded away.
#[derive(Debug, Clone)]
pub struct PencilNumeric {
    pub base_dim: usize,
    pub fiber_dim: usize,
    pub param_names: Vec<String>,
    pub coord_names: Vec<String>,
    pub hyperplanes: Vec<HyperplaneNumeric>,
    pub residues: Vec<ParamLinearNumeric>,
}

#[derive(Debug, Clone)]
pub struct HyperplaneNumeric {
    pub normal: Vec<Complex64>,
    pub offset: Complex64,
    pub label: String,
}

#[derive(Debug, Clone)]
pub struct ParamLinearNumeric {
    pub constant: nalgebra::DMatrix<Complex64>,
    pub linear: Vec<nalgebra::DMatrix<Complex64>>,
}

impl ParamLinearNumeric {
    pub fn eval(&self, s: &[Complex64]) -> nalgebra::DMatrix<Complex64> {
        let mut out = self.constant.clone();
        for (sj, mj) in s.iter().zip(&self.linear) {
            out += mj * *sj;
        }
        out
    }

    pub fn trace(&self, s: &[Complex64]) -> Complex64 {
        let mut t = self.constant.diagonal().sum();
        for (sj, mj) in s.iter().zip(&self.linear) {
            t += *sj * mj.diagonal().sum();
        }
        t
    }
}

impl PencilNumeric {
    pub fn from_pencil<K: Coeff>(p: &LogPencil<K>) -> Self {
        let hyperplanes = p
            .arrangement()
            .hyperplanes()
            .iter()
            .map(|h: &Hyperplane<K>| HyperplaneNumeric {
                normal: h
                    .normal
                    .iter()
                    .map(|a| Complex64::new(a.to_f64(), 0.0))
                    .collect(),
                offset: Complex64::new(h.offset.to_f64(), 0.0),
                label: h.label.clone(),
            })
            .collect();
        let residues = p
            .residues()
            .iter()
            .map(|r| ParamLinearNumeric {
                constant: r.constant().to_c64(),
                linear: (0..r.nparams()).map(|j| r.linear(j).to_c64()).collect(),
            })
            .collect();
        PencilNumeric {
            base_dim: p.base_dim(),
            fiber_dim: p.fiber_dim(),
            param_names: p.param_names().to_vec(),
            coord_names: p.coord_names().to_vec(),
            hyperplanes,
            residues,
        }
    }

    pub fn n_params(&self) -> usize {
        self.param_names.len()
    }

    pub fn form_at(&self, h: usize, x: &[Complex64]) -> Complex64 {
        let hp = &self.hyperplanes[h];
        let mut acc = -hp.offset;
        for (a, xi) in hp.normal.iter().zip(x) {
            acc += a * xi;
        }
        acc
    }

    /// Coordinate components `B^(i)(s, x)`; errors when `x` is within
    /// `1e-12` of the arrangement.
    pub fn components(
        &self,
        s: &[Complex64],
        x: &[Complex64],
    ) -> Result<Vec<nalgebra::DMatrix<Complex64>>, PencilError> {
        let n = self.fiber_dim;
        let mut comps =
            vec![nalgebra::DMatrix::<Complex64>::zeros(n, n); self.base_dim];
        for (hi, hp) in self.hyperplanes.iter().enumerate() {
            let denom = self.form_at(hi, x);
            if denom.norm() < 1e-12 {
                return Err(PencilError::OnArrangement(hp.label.clone()));
            }
            let c = self.residues[hi].eval(s);
            for i in 0..self.base_dim {
                let a = hp.normal[i];
                if a.norm() == 0.0 {
                    continue;
                }
                comps[i] += &c * (a / denom);
            }
        }
        Ok(comps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_int};

    /// The one-hyperplane, two-dimensional model pencil with residue
    /// [[s,1],[0,0]] used across the test suite.
    pub fn model_pencil() -> LogPencil<Rat> {
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

    #[test]
    fn one_dimensional_base_is_trivially_flat() {
        let p = model_pencil();
        let rep = p.check_flatness_residue();
        assert!(rep.pass);
        assert_eq!(rep.flats_checked, 0);
        assert!(p.check_flatness_points(5, 42));
    }

    #[test]
    fn components_match_residue_over_form() {
        let p = model_pencil();
        // B(s,x) = C(s)/x; at s=2, x=1 the single component is [[2,1],[0,0]]
        let comps = p.components(&[rat_int(2)], &[rat_int(1)]).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].at(0, 0), &rat_int(2));
        assert_eq!(comps[0].at(0, 1), &rat_int(1));
        // on the arrangement: error
        assert!(p.components(&[rat_int(2)], &[rat_int(0)]).is_err());
    }

    #[test]
    fn components_linear_in_s() {
        let p = model_pencil();
        let a = [rat(3, 5)];
        let b = [rat(-1, 7)];
        let ab = [&a[0] + &b[0]];
        let x = [rat(9, 4)];
        let lhs = p.components(&ab, &x).unwrap()[0]
            .add(&p.components(&[rat_int(0)], &x).unwrap()[0]);
        let rhs = p.components(&a, &x).unwrap()[0].add(&p.components(&b, &x).unwrap()[0]);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn residue_accessor() {
        let p = model_pencil();
        let c = p.residue_of("x=0").unwrap();
        assert_eq!(c.eval(&[rat_int(5)]).unwrap().at(0, 0), &rat_int(5));
        assert!(p.residue_of("nope").is_err());
    }
}
