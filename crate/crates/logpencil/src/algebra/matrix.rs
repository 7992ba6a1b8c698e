//! Dense square matrices over a coefficient ring and parameter-affine
//! matrix pencils `M0 + sum_j s_j M_j`.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::One;

use super::{AlgebraError, Rat};
use crate::coeff::Coeff;

/// Dense matrix over `K`, row-major.
#[derive(Clone, PartialEq, Debug)]
pub struct Mat<K> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

impl<K: Coeff> Mat<K> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![K::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = K::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> K) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &K {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut K {
        &mut self.data[r * self.cols + c]
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.ring_add(b))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.ring_sub(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.ring_neg()).collect(),
        }
    }

    pub fn scale(&self, k: &K) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.ring_mul(k)).collect(),
        }
    }

    pub fn matmul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matmul shape");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let t = a.ring_mul(o.at(k, j));
                    let cur = out.at(i, j).ring_add(&t);
                    *out.at_mut(i, j) = cur;
                }
            }
        }
        out
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.matmul(o).sub(&o.matmul(self))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn trace(&self) -> K {
        assert_eq!(self.rows, self.cols);
        let mut t = K::zero();
        for i in 0..self.rows {
            t = t.ring_add(self.at(i, i));
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    pub fn approx_zero(&self, tol: f64) -> bool {
        self.data.iter().all(|a| a.approx_zero(tol))
    }

    pub fn first_nonzero(&self) -> Option<(usize, usize, &K)> {
        for r in 0..self.rows {
            for c in 0..self.cols {
                if !self.at(r, c).is_zero() {
                    return Some((r, c, self.at(r, c)));
                }
            }
        }
        None
    }

    pub fn max_abs_f64(&self) -> f64 {
        self.data
            .iter()
            .map(|a| a.to_f64().abs())
            .fold(0.0, f64::max)
    }

    pub fn to_c64(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| {
            Complex64::new(self.at(i, j).to_f64(), 0.0)
        })
    }

    pub fn map<L: Coeff>(&self, f: impl Fn(&K) -> L) -> Mat<L> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl Mat<Rat> {
    /// Row-reduced echelon form in place; returns the rank.
    pub fn rref(&mut self) -> usize {
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            let Some(p) = (pivot_row..self.rows).find(|&r| !num_traits::Zero::is_zero(self.at(r, col)))
            else {
                continue;
            };
            if p != pivot_row {
                for c in 0..self.cols {
                    self.data
                        .swap(p * self.cols + c, pivot_row * self.cols + c);
                }
            }
            let inv = Rat::one() / self.at(pivot_row, col).clone();
            for c in col..self.cols {
                let v = self.at(pivot_row, c) * &inv;
                *self.at_mut(pivot_row, c) = v;
            }
            for r in 0..self.rows {
                if r == pivot_row || num_traits::Zero::is_zero(self.at(r, col)) {
                    continue;
                }
                let factor = self.at(r, col).clone();
                for c in col..self.cols {
                    let v = self.at(r, c) - &factor * self.at(pivot_row, c);
                    *self.at_mut(r, c) = v;
                }
            }
            pivot_row += 1;
        }
        pivot_row
    }

    /// Whether `row` lies in the row span of an RREF matrix.
    pub fn rref_contains(&self, row: &[Rat]) -> bool {
        assert_eq!(row.len(), self.cols);
        let mut v: Vec<Rat> = row.to_vec();
        for r in 0..self.rows {
            let Some(lead) = (0..self.cols).find(|&c| !num_traits::Zero::is_zero(self.at(r, c))) else {
                continue;
            };
            if !num_traits::Zero::is_zero(&v[lead]) {
                let factor = v[lead].clone();
                for c in 0..self.cols {
                    v[c] = &v[c] - &factor * self.at(r, c);
                }
            }
        }
        v.iter().all(|x| num_traits::Zero::is_zero(x))
    }

    /// Characteristic polynomial coefficients `c_0..c_n` (monic, `c_n = 1`)
    /// of a square matrix, by the Faddeev–LeVerrier recursion.
    pub fn char_poly(&self) -> Vec<Rat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut coeffs = vec![<Rat as num_traits::Zero>::zero(); n + 1];
        coeffs[n] = Rat::one();
        let mut m = Mat::<Rat>::identity(n);
        for k in 1..=n {
            m = self.matmul(&m);
            let c = -m.trace() / Rat::from_integer(k.into());
            for i in 0..n {
                let v = m.at(i, i) + &c;
                *m.at_mut(i, i) = v;
            }
            coeffs[n - k] = c;
        }
        coeffs
    }
}

impl<K: Coeff> fmt::Display for Mat<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[ ")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}

/// Square matrix depending affinely on parameters:
/// `M(s) = constant + sum_j s_j * linear[j]`.
#[derive(Clone, PartialEq, Debug)]
pub struct ParamLinear<K> {
    dim: usize,
    constant: Mat<K>,
    linear: Vec<Mat<K>>,
}

impl<K: Coeff> ParamLinear<K> {
    pub fn new(constant: Mat<K>, linear: Vec<Mat<K>>) -> Result<Self, AlgebraError> {
        let dim = constant.nrows();
        if constant.ncols() != dim {
            return Err(AlgebraError::DimensionMismatch(
                "constant part must be square".into(),
            ));
        }
        for m in &linear {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(AlgebraError::DimensionMismatch(
                    "all parameter coefficients must match the constant part".into(),
                ));
            }
        }
        Ok(ParamLinear {
            dim,
            constant,
            linear,
        })
    }

    pub fn zero(dim: usize, nparams: usize) -> Self {
        ParamLinear {
            dim,
            constant: Mat::zeros(dim, dim),
            linear: vec![Mat::zeros(dim, dim); nparams],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nparams(&self) -> usize {
        self.linear.len()
    }

    pub fn constant(&self) -> &Mat<K> {
        &self.constant
    }

    pub fn linear(&self, j: usize) -> &Mat<K> {
        &self.linear[j]
    }

    pub fn constant_mut(&mut self) -> &mut Mat<K> {
        &mut self.constant
    }

    pub fn linear_mut(&mut self, j: usize) -> &mut Mat<K> {
        &mut self.linear[j]
    }

    /// `M(s)` for `s` in the coefficient ring (exact when `K` is exact).
    pub fn eval(&self, s: &[K]) -> Result<Mat<K>, AlgebraError> {
        if s.len() != self.linear.len() {
            return Err(AlgebraError::DimensionMismatch(format!(
                "expected {} parameters, got {}",
                self.linear.len(),
                s.len()
            )));
        }
        let mut out = self.constant.clone();
        for (sj, mj) in s.iter().zip(&self.linear) {
            if sj.is_zero() {
                continue;
            }
            out = out.add(&mj.scale(sj));
        }
        Ok(out)
    }

    /// `M(s)` at complex parameter values.
    pub fn eval_c64(&self, s: &[Complex64]) -> Result<DMatrix<Complex64>, AlgebraError> {
        if s.len() != self.linear.len() {
            return Err(AlgebraError::DimensionMismatch(format!(
                "expected {} parameters, got {}",
                self.linear.len(),
                s.len()
            )));
        }
        let mut out = self.constant.to_c64();
        for (sj, mj) in s.iter().zip(&self.linear) {
            out += mj.to_c64() * *sj;
        }
        Ok(out)
    }

    /// Trace of `M(s)` at complex parameters (exact parts, one rounding).
    pub fn trace_c64(&self, s: &[Complex64]) -> Complex64 {
        let mut t = Complex64::new(self.constant.trace().to_f64(), 0.0);
        for (sj, mj) in s.iter().zip(&self.linear) {
            t += *sj * mj.trace().to_f64();
        }
        t
    }

    /// Substitutes `s_j -> s_j + amount`, folding the shift into the
    /// constant part.
    pub fn shift_param(&self, j: usize, amount: &Rat) -> Self {
        let mut out = self.clone();
        out.constant = out
            .constant
            .add(&self.linear[j].scale(&K::from_rat(amount)));
        out
    }
}

impl ParamLinear<Rat> {
    /// Exact characteristic polynomial of `M(s)` at rational `s`.
    pub fn char_poly_at(&self, s: &[Rat]) -> Result<Vec<Rat>, AlgebraError> {
        Ok(self.eval(s)?.char_poly())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_int};

    fn exshift_residue() -> ParamLinear<Rat> {
        // [[s, 1], [0, 0]] = [[0,1],[0,0]] + s*[[1,0],[0,0]]
        let constant = Mat::from_rows(vec![
            vec![rat_int(0), rat_int(1)],
            vec![rat_int(0), rat_int(0)],
        ]);
        let lin = Mat::from_rows(vec![
            vec![rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(0)],
        ]);
        ParamLinear::new(constant, vec![lin]).unwrap()
    }

    #[test]
    fn eval_at_zero_gives_constant() {
        let m = exshift_residue();
        let at0 = m.eval(&[rat_int(0)]).unwrap();
        assert_eq!(&at0, m.constant());
        let at5 = m.eval(&[rat_int(5)]).unwrap();
        assert_eq!(at5.at(0, 0), &rat_int(5));
        assert_eq!(at5.at(0, 1), &rat_int(1));
    }

    #[test]
    fn eval_is_affine() {
        let m = exshift_residue();
        let a = [rat(3, 7)];
        let b = [rat(-2, 5)];
        let ab = [&a[0] + &b[0]];
        let lhs = m.eval(&ab).unwrap().add(&m.eval(&[rat_int(0)]).unwrap());
        let rhs = m.eval(&a).unwrap().add(&m.eval(&b).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn char_poly_exshift() {
        // at s=3: t^2 - 3t
        let m = exshift_residue();
        let cp = m.char_poly_at(&[rat_int(3)]).unwrap();
        assert_eq!(cp, vec![rat_int(0), rat_int(-3), rat_int(1)]);
        // zero matrix: t^n
        let z = ParamLinear::<Rat>::zero(3, 1);
        let cp = z.char_poly_at(&[rat_int(7)]).unwrap();
        assert_eq!(cp, vec![rat_int(0), rat_int(0), rat_int(0), rat_int(1)]);
    }

    #[test]
    fn dimension_mismatch_detected() {
        let m = exshift_residue();
        assert!(m.eval(&[rat_int(1), rat_int(2)]).is_err());
    }

    #[test]
    fn rref_and_span() {
        let mut m = Mat::from_rows(vec![
            vec![rat_int(1), rat_int(1), rat_int(0)],
            vec![rat_int(2), rat_int(2), rat_int(0)],
            vec![rat_int(0), rat_int(1), rat_int(1)],
        ]);
        let rank = m.rref();
        assert_eq!(rank, 2);
        assert!(m.rref_contains(&[rat_int(1), rat_int(2), rat_int(1)]));
        assert!(!m.rref_contains(&[rat_int(0), rat_int(0), rat_int(1)]));
    }

    #[test]
    fn shift_param_folds_into_constant() {
        let m = exshift_residue();
        let shifted = m.shift_param(0, &rat_int(1));
        // [[s+1, 1],[0,0]] at s=0 is [[1,1],[0,0]]
        let at0 = shifted.eval(&[rat_int(0)]).unwrap();
        assert_eq!(at0.at(0, 0), &rat_int(1));
    }
}
