//! Rational functions in the parameter and coordinate symbols, and square
//! matrices of them (the shape of shift operators).
//!
//! Representations are reduced by rational content and by the common
//! monomial factor of numerator and denominator; full polynomial gcd is
//! deliberately not computed. Equality is decided by cross-multiplication,
//! which is exact regardless of representation.

use std::fmt;

use num_traits::{One, Signed};

use super::poly::{MultiPoly, Vars};
use super::{AlgebraError, Rat};
use crate::coeff::Coeff;

/// Scalar rational function `num/den`, `den != 0`.
#[derive(Clone, Debug)]
pub struct RatFun {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFun {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let mut f = RatFun { num, den };
        f.normalize();
        Ok(f)
    }

    pub fn zero(vars: &Vars) -> Self {
        RatFun {
            num: MultiPoly::zero(vars),
            den: MultiPoly::one(vars),
        }
    }

    pub fn one(vars: &Vars) -> Self {
        RatFun {
            num: MultiPoly::one(vars),
            den: MultiPoly::one(vars),
        }
    }

    pub fn constant(vars: &Vars, c: Rat) -> Self {
        RatFun {
            num: MultiPoly::constant(vars, c),
            den: MultiPoly::one(vars),
        }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let den = MultiPoly::one(p.vars());
        RatFun { num: p, den }
    }

    pub fn var(vars: &Vars, name: &str) -> Result<Self, AlgebraError> {
        Ok(Self::from_poly(MultiPoly::var(vars, name)?))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// Joint content and monomial reduction; fixes the sign of the leading
    /// denominator coefficient so rendering is stable.
    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = MultiPoly::one(self.num.vars());
            return;
        }
        // common monomial factor
        let mn = self.num.monomial_content();
        let md = self.den.monomial_content();
        let common: Vec<u32> = mn.iter().zip(&md).map(|(a, b)| *a.min(b)).collect();
        if common.iter().any(|&x| x > 0) {
            self.num = self.num.shift_down(&common);
            self.den = self.den.shift_down(&common);
        }
        // joint rational content
        let cn = self.num.content();
        let cd = self.den.content();
        let g = if cn < cd { cn } else { cd };
        let mut scale = Rat::one() / g;
        if self.den.leading_coeff().is_negative() {
            scale = -scale;
        }
        if !scale.is_one() {
            self.num = self.num.scale(&scale);
            self.den = self.den.scale(&scale);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            let mut f = RatFun {
                num: self.num.add(&o.num),
                den: self.den.clone(),
            };
            f.normalize();
            return f;
        }
        let mut f = RatFun {
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        };
        f.normalize();
        f
    }

    pub fn neg(&self) -> Self {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut f = RatFun {
            num: self.num.mul(&o.num),
            den: self.den.mul(&o.den),
        };
        f.normalize();
        f
    }

    pub fn div(&self, o: &Self) -> Result<Self, AlgebraError> {
        if o.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let mut f = RatFun {
            num: self.num.mul(&o.den),
            den: self.den.mul(&o.num),
        };
        f.normalize();
        Ok(f)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut f = RatFun {
            num: self.num.scale(c),
            den: self.den.clone(),
        };
        f.normalize();
        f
    }

    /// Exact partial derivative by the quotient rule.
    pub fn partial(&self, name: &str) -> Result<Self, AlgebraError> {
        let i = self.vars().index_of(name)?;
        Ok(self.partial_index(i))
    }

    pub fn partial_index(&self, i: usize) -> Self {
        let dn = self.num.partial_index(i);
        let dd = self.den.partial_index(i);
        let mut f = RatFun {
            num: dn.mul(&self.den).sub(&self.num.mul(&dd)),
            den: self.den.mul(&self.den),
        };
        f.normalize();
        f
    }

    /// Substitutes `v -> v + amount` for the named variable.
    pub fn shift_var(&self, name: &str, amount: &Rat) -> Result<Self, AlgebraError> {
        let i = self.vars().index_of(name)?;
        let mut f = RatFun {
            num: self.num.shift_var(i, amount),
            den: self.den.shift_var(i, amount),
        };
        f.normalize();
        Ok(f)
    }

    /// Evaluates at a point; `None` when the denominator vanishes there.
    pub fn eval<K: Coeff>(&self, point: &[K]) -> Option<K> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        self.num.eval(point).ring_div(&d)
    }
}

/// Equality by cross-multiplication, never by representation.
impl PartialEq for RatFun {
    fn eq(&self, o: &Self) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.constant_term().is_one() {
            write!(f, "{}", self.num)
        } else if self.num.num_terms() <= 1 {
            write!(f, "{}/({})", self.num, self.den)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Binary operation selector mirroring the CLI surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RfOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Field arithmetic entry point used by the CLI and tests.
pub fn rf_arith(a: &RatFun, b: &RatFun, op: RfOp) -> Result<RatFun, AlgebraError> {
    match op {
        RfOp::Add => Ok(a.add(b)),
        RfOp::Sub => Ok(a.sub(b)),
        RfOp::Mul => Ok(a.mul(b)),
        RfOp::Div => a.div(b),
    }
}

/// Square matrix of rational functions over a shared symbol set.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFunMatrix {
    vars: Vars,
    dim: usize,
    entries: Vec<RatFun>,
}

impl RatFunMatrix {
    pub fn zero(vars: &Vars, dim: usize) -> Self {
        RatFunMatrix {
            vars: vars.clone(),
            dim,
            entries: vec![RatFun::zero(vars); dim * dim],
        }
    }

    pub fn identity(vars: &Vars, dim: usize) -> Self {
        let mut m = Self::zero(vars, dim);
        for i in 0..dim {
            *m.at_mut(i, i) = RatFun::one(vars);
        }
        m
    }

    pub fn from_entries(vars: &Vars, dim: usize, entries: Vec<RatFun>) -> Result<Self, AlgebraError> {
        if entries.len() != dim * dim {
            return Err(AlgebraError::DimensionMismatch(format!(
                "expected {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        for e in &entries {
            if e.vars() != vars {
                return Err(AlgebraError::SymbolMismatch(
                    vars.to_string(),
                    e.vars().to_string(),
                ));
            }
        }
        Ok(RatFunMatrix {
            vars: vars.clone(),
            dim,
            entries,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn at(&self, r: usize, c: usize) -> &RatFun {
        &self.entries[r * self.dim + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut RatFun {
        &mut self.entries[r * self.dim + c]
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.dim, o.dim);
        let entries = self
            .entries
            .iter()
            .zip(&o.entries)
            .map(|(a, b)| a.add(b))
            .collect();
        RatFunMatrix {
            vars: self.vars.clone(),
            dim: self.dim,
            entries,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.dim, o.dim);
        let entries = self
            .entries
            .iter()
            .zip(&o.entries)
            .map(|(a, b)| a.sub(b))
            .collect();
        RatFunMatrix {
            vars: self.vars.clone(),
            dim: self.dim,
            entries,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.dim, o.dim);
        let n = self.dim;
        let mut out = Self::zero(&self.vars, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = RatFun::zero(&self.vars);
                for k in 0..n {
                    acc = acc.add(&self.at(i, k).mul(o.at(k, j)));
                }
                *out.at_mut(i, j) = acc;
            }
        }
        out
    }

    pub fn partial_index(&self, i: usize) -> Self {
        RatFunMatrix {
            vars: self.vars.clone(),
            dim: self.dim,
            entries: self.entries.iter().map(|e| e.partial_index(i)).collect(),
        }
    }

    pub fn shift_var(&self, name: &str, amount: &Rat) -> Result<Self, AlgebraError> {
        let entries: Result<Vec<_>, _> = self
            .entries
            .iter()
            .map(|e| e.shift_var(name, amount))
            .collect();
        Ok(RatFunMatrix {
            vars: self.vars.clone(),
            dim: self.dim,
            entries: entries?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// First nonzero entry, if any (row, column, value).
    pub fn first_nonzero(&self) -> Option<(usize, usize, &RatFun)> {
        for r in 0..self.dim {
            for c in 0..self.dim {
                if !self.at(r, c).is_zero() {
                    return Some((r, c, self.at(r, c)));
                }
            }
        }
        None
    }

    /// Determinant by cofactor expansion; fine at shift-operator sizes.
    pub fn det(&self) -> RatFun {
        match self.dim {
            0 => RatFun::one(&self.vars),
            1 => self.at(0, 0).clone(),
            _ => {
                let mut acc = RatFun::zero(&self.vars);
                for c in 0..self.dim {
                    if self.at(0, c).is_zero() {
                        continue;
                    }
                    let minor = self.minor(0, c);
                    let term = self.at(0, c).mul(&minor.det());
                    acc = if c % 2 == 0 {
                        acc.add(&term)
                    } else {
                        acc.sub(&term)
                    };
                }
                acc
            }
        }
    }

    fn minor(&self, row: usize, col: usize) -> Self {
        let n = self.dim;
        let mut out = Self::zero(&self.vars, n - 1);
        let mut rr = 0;
        for i in 0..n {
            if i == row {
                continue;
            }
            let mut cc = 0;
            for j in 0..n {
                if j == col {
                    continue;
                }
                *out.at_mut(rr, cc) = self.at(i, j).clone();
                cc += 1;
            }
            rr += 1;
        }
        out
    }

    /// Evaluates every entry; `None` if any denominator vanishes.
    pub fn eval<K: Coeff>(&self, point: &[K]) -> Option<Vec<K>> {
        self.entries.iter().map(|e| e.eval(point)).collect()
    }
}

impl fmt::Display for RatFunMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.dim {
            write!(f, "[ ")?;
            for c in 0..self.dim {
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_int};

    fn vars() -> Vars {
        Vars::new(vec!["s1", "x1", "x2"])
    }

    fn v(name: &str) -> RatFun {
        RatFun::var(&vars(), name).unwrap()
    }

    #[test]
    fn partial_fraction_identity() {
        // x1/(x1-x2) + x2/(x2-x1) = 1
        let x1 = v("x1");
        let x2 = v("x2");
        let d = x1.sub(&x2);
        let lhs = x1.div(&d).unwrap().add(&x2.div(&d.neg()).unwrap());
        assert_eq!(lhs, RatFun::one(&vars()));
        assert!(lhs.is_one());
    }

    #[test]
    fn inverse_pair() {
        // (s1/(s1+1)) * ((s1+1)/s1) = 1
        let s = v("s1");
        let sp1 = s.add(&RatFun::one(&vars()));
        let prod = s
            .div(&sp1)
            .unwrap()
            .mul(&sp1.div(&s).unwrap());
        assert!(prod.is_one());
    }

    #[test]
    fn difference_of_simple_poles() {
        // 1/(x1-1) - 1/x1 = 1/(x1^2-x1)
        let x = v("x1");
        let one = RatFun::one(&vars());
        let lhs = one
            .div(&x.sub(&one))
            .unwrap()
            .sub(&one.div(&x).unwrap());
        let rhs = one.div(&x.mul(&x).sub(&x)).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.to_string(), "1/(x1^2 - x1)");
    }

    #[test]
    fn quotient_rule() {
        // d/dx1 (1/(x1-c)) with c = 2: -(1/(x1-2)^2)
        let x = v("x1");
        let c = RatFun::constant(&vars(), rat_int(2));
        let f = RatFun::one(&vars()).div(&x.sub(&c)).unwrap();
        let df = f.partial("x1").unwrap();
        let expect = RatFun::one(&vars())
            .div(&x.sub(&c).mul(&x.sub(&c)))
            .unwrap()
            .neg();
        assert_eq!(df, expect);
        // d/ds1 ((s1+1)/(x1-x2)) = 1/(x1-x2)
        let s = v("s1");
        let g = s
            .add(&RatFun::one(&vars()))
            .div(&v("x1").sub(&v("x2")))
            .unwrap();
        let dg = g.partial("s1").unwrap();
        let expect = RatFun::one(&vars())
            .div(&v("x1").sub(&v("x2")))
            .unwrap();
        assert_eq!(dg, expect);
        assert!(g.partial("nope").is_err());
    }

    #[test]
    fn division_by_zero_detected() {
        let x = v("x1");
        assert_eq!(
            x.div(&RatFun::zero(&vars())),
            Err(AlgebraError::DivisionByZero)
        );
    }

    #[test]
    fn eval_with_pole() {
        let x = v("x1");
        let f = RatFun::one(&vars()).div(&x).unwrap();
        assert_eq!(f.eval(&[rat_int(0), rat(1, 2), rat_int(0)]), Some(rat_int(2)));
        assert_eq!(f.eval::<Rat>(&[rat_int(0), rat_int(0), rat_int(0)]), None);
    }

    #[test]
    fn matrix_det_and_mul() {
        let vs = vars();
        let x = RatFun::var(&vs, "x1").unwrap();
        let s = RatFun::var(&vs, "s1").unwrap();
        let one = RatFun::one(&vs);
        // [[x, 1],[s, 1]]: det = x - s
        let m = RatFunMatrix::from_entries(
            &vs,
            2,
            vec![x.clone(), one.clone(), s.clone(), one.clone()],
        )
        .unwrap();
        assert_eq!(m.det(), x.sub(&s));
        let m2 = m.mul(&RatFunMatrix::identity(&vs, 2));
        assert_eq!(m2, m);
    }
}
