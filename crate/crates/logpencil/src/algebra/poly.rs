//! Sparse multivariate polynomials over `Rat`.
//!
//! Terms are keyed by exponent vectors in a `BTreeMap`, so iteration order
//! (and hence rendering and serialization) is deterministic.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{content, AlgebraError, Rat};
use crate::coeff::Coeff;

/// Ordered list of symbol names shared by all polynomials of one pencil.
/// Cloning is cheap; equality compares the names themselves.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Vars(Arc<Vec<String>>);

impl Vars {
    pub fn new<S: Into<String>>(names: Vec<S>) -> Self {
        Vars(Arc::new(names.into_iter().map(Into::into).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Result<usize, AlgebraError> {
        self.0
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| AlgebraError::UnknownSymbol(name.to_string()))
    }
}

impl fmt::Display for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.join(", "))
    }
}

/// Multivariate polynomial with `Rat` coefficients. No zero coefficient is
/// ever stored, and every exponent vector has length `vars.len()`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly {
    vars: Vars,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl MultiPoly {
    pub fn zero(vars: &Vars) -> Self {
        MultiPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Vars, c: Rat) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Rat::one())
    }

    /// The monomial `name^1` with coefficient 1.
    pub fn var(vars: &Vars, name: &str) -> Result<Self, AlgebraError> {
        let i = vars.index_of(name)?;
        Ok(Self::var_index(vars, i))
    }

    pub fn var_index(vars: &Vars, i: usize) -> Self {
        let mut e = vec![0u32; vars.len()];
        e[i] = 1;
        let mut p = Self::zero(vars);
        p.terms.insert(e, Rat::one());
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// The coefficient of the constant monomial.
    pub fn constant_term(&self) -> Rat {
        self.terms
            .get(&vec![0u32; self.vars.len()])
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn add_term(&mut self, expt: Vec<u32>, c: Rat) {
        debug_assert_eq!(expt.len(), self.vars.len());
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(expt) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_vars(&self, other: &Self) {
        assert!(
            self.vars == other.vars,
            "polynomials over different symbol sets: {} vs {}",
            self.vars,
            other.vars
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_vars(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_vars(other);
        let mut out = Self::zero(&self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one(&self.vars);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Exact partial derivative with respect to variable index `i`.
    pub fn partial_index(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c * Rat::from_integer(e[i].into()));
        }
        out
    }

    pub fn partial(&self, name: &str) -> Result<Self, AlgebraError> {
        Ok(self.partial_index(self.vars.index_of(name)?))
    }

    /// Substitutes `v_i -> v_i + amount` (binomial expansion, exact).
    pub fn shift_var(&self, i: usize, amount: &Rat) -> Self {
        if amount.is_zero() {
            return self.clone();
        }
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            let n = e[i];
            // (v + a)^n = sum_k C(n,k) a^(n-k) v^k
            let mut binom = Rat::one();
            let mut a_pow = {
                let mut t = Rat::one();
                for _ in 0..n {
                    t *= amount;
                }
                t
            };
            for k in 0..=n {
                let mut e2 = e.clone();
                e2[i] = k;
                out.add_term(e2, c * &binom * &a_pow);
                if k < n {
                    // C(n,k+1) = C(n,k)*(n-k)/(k+1), drop one power of a.
                    binom = binom * Rat::from_integer((n - k).into())
                        / Rat::from_integer((k + 1).into());
                    a_pow = &a_pow / amount;
                }
            }
        }
        out
    }

    /// Evaluates at a point in any coefficient ring `K`.
    pub fn eval<K: Coeff>(&self, point: &[K]) -> K {
        assert_eq!(point.len(), self.vars.len(), "evaluation point arity");
        let mut acc = K::zero();
        for (e, c) in &self.terms {
            let mut t = K::from_rat(c);
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = t.ring_mul(&point[i]);
                }
            }
            acc = acc.ring_add(&t);
        }
        acc
    }

    /// Positive rational `g` with `self/g` integral and primitive; 1 for 0.
    pub fn content(&self) -> Rat {
        if self.is_zero() {
            return Rat::one();
        }
        let coeffs: Vec<&Rat> = self.terms.values().collect();
        content(&coeffs)
    }

    /// Entrywise minimum exponent vector over all terms (monomial content).
    pub fn monomial_content(&self) -> Vec<u32> {
        let mut out = vec![u32::MAX; self.vars.len()];
        for e in self.terms.keys() {
            for (o, &x) in out.iter_mut().zip(e) {
                *o = (*o).min(x);
            }
        }
        if self.is_zero() {
            out.fill(0);
        }
        out
    }

    /// Divides out the given monomial (must divide every term).
    pub fn shift_down(&self, m: &[u32]) -> Self {
        if m.iter().all(|&x| x == 0) {
            return self.clone();
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let e2: Vec<u32> = e.iter().zip(m).map(|(a, b)| a - b).collect();
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// Coefficient of the lexicographically largest exponent vector.
    pub fn leading_coeff(&self) -> Rat {
        self.terms
            .iter()
            .next_back()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // Largest monomial first reads more naturally.
        for (e, c) in self.terms.iter().rev() {
            let mut mono = String::new();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !mono.is_empty() {
                    mono.push('*');
                }
                mono.push_str(self.vars.name(i));
                if k > 1 {
                    mono.push_str(&format!("^{k}"));
                }
            }
            let (sign, mag) = if c < &Rat::zero() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            if mono.is_empty() {
                write!(f, "{}", super::rat_to_string(&mag))?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{}", super::rat_to_string(&mag), mono)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_int};

    fn xy() -> Vars {
        Vars::new(vec!["x", "y"])
    }

    #[test]
    fn arithmetic_and_display() {
        let v = xy();
        let x = MultiPoly::var(&v, "x").unwrap();
        let y = MultiPoly::var(&v, "y").unwrap();
        let p = x.mul(&x).sub(&y.scale(&rat(1, 3)));
        assert_eq!(p.to_string(), "x^2 - 1/3*y");
        assert_eq!(p.total_degree(), 2);
        let q = p.sub(&p);
        assert!(q.is_zero());
    }

    #[test]
    fn partial_derivatives_commute() {
        let v = xy();
        let x = MultiPoly::var(&v, "x").unwrap();
        let y = MultiPoly::var(&v, "y").unwrap();
        let p = x.pow(3).mul(&y.pow(2)).add(&x.mul(&y));
        let dxy = p.partial("x").unwrap().partial("y").unwrap();
        let dyx = p.partial("y").unwrap().partial("x").unwrap();
        assert_eq!(dxy, dyx);
        assert_eq!(p.partial("x").unwrap().to_string(), "3*x^2*y^2 + y");
        assert!(p.partial("z").is_err());
    }

    #[test]
    fn shift_var_binomial() {
        let v = xy();
        let x = MultiPoly::var(&v, "x").unwrap();
        // (x+1)^2 = x^2 + 2x + 1
        let p = x.pow(2).shift_var(0, &rat_int(1));
        let expect = x
            .pow(2)
            .add(&x.scale(&rat_int(2)))
            .add(&MultiPoly::one(&v));
        assert_eq!(p, expect);
        // shift then shift back is identity
        let q = p.shift_var(0, &rat_int(-1));
        assert_eq!(q, x.pow(2));
    }

    #[test]
    fn eval_exact() {
        let v = xy();
        let x = MultiPoly::var(&v, "x").unwrap();
        let y = MultiPoly::var(&v, "y").unwrap();
        let p = x.pow(2).add(&y.scale(&rat_int(3)));
        let val: Rat = p.eval(&[rat(1, 2), rat(1, 3)]);
        assert_eq!(val, rat(5, 4));
    }
}
