//! Coefficient rings the pencil machinery is generic over.
//!
//! Two implementations are provided: exact rationals (`Rat`) for every
//! family with a rational realization, and double-double floats (`Dd`) for
//! dihedral reflection groups whose rotation angles have irrational
//! cosines. Exact rings decide zero exactly; approximate rings compare
//! against a caller-supplied threshold.

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::algebra::{rat_to_f64, Rat};
use crate::dd::Dd;

/// Scalar ring for hyperplane normals and residue entries. `zero`, `one`
/// and `is_zero` come from the `num_traits` hierarchy so rational code
/// keeps its usual idioms.
pub trait Coeff:
    Clone
    + PartialEq
    + std::fmt::Debug
    + std::fmt::Display
    + num_traits::Zero
    + num_traits::One
    + Send
    + Sync
    + 'static
{
    /// Whether zero tests are exact (rationals) or thresholded (floats).
    const EXACT: bool;

    fn from_rat(r: &Rat) -> Self;
    fn ring_add(&self, o: &Self) -> Self;
    fn ring_sub(&self, o: &Self) -> Self;
    fn ring_mul(&self, o: &Self) -> Self;
    /// `None` when dividing by (exact) zero.
    fn ring_div(&self, o: &Self) -> Option<Self>;
    fn ring_neg(&self) -> Self;
    /// Zero test at tolerance `tol`; exact rings ignore `tol`.
    fn approx_zero(&self, tol: f64) -> bool;
    fn to_f64(&self) -> f64;

    /// Rescales a hyperplane row to a canonical form where the ring
    /// supports one (primitive integer normal with positive leading entry
    /// over the rationals); no-op otherwise.
    fn normalize_hyperplane(_normal: &mut [Self], _offset: &mut Self) {}
}

impl Coeff for Rat {
    const EXACT: bool = true;

    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn ring_add(&self, o: &Self) -> Self {
        self + o
    }
    fn ring_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn ring_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn ring_div(&self, o: &Self) -> Option<Self> {
        if Zero::is_zero(o) {
            None
        } else {
            Some(self / o)
        }
    }
    fn ring_neg(&self) -> Self {
        -self
    }
    fn approx_zero(&self, _tol: f64) -> bool {
        Zero::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        rat_to_f64(self)
    }

    fn normalize_hyperplane(normal: &mut [Self], offset: &mut Self) {
        let refs: Vec<&Rat> = normal.iter().collect();
        let mut g = crate::algebra::content(&refs);
        if let Some(first) = normal.iter().find(|a| !Zero::is_zero(*a)) {
            if first.is_negative() {
                g = -g;
            }
        }
        for a in normal.iter_mut() {
            *a = &*a / &g;
        }
        *offset = &*offset / &g;
    }
}

impl Coeff for Dd {
    const EXACT: bool = false;

    fn from_rat(r: &Rat) -> Self {
        Dd::from_rat_parts(r)
    }
    fn ring_add(&self, o: &Self) -> Self {
        *self + *o
    }
    fn ring_sub(&self, o: &Self) -> Self {
        *self - *o
    }
    fn ring_mul(&self, o: &Self) -> Self {
        *self * *o
    }
    fn ring_div(&self, o: &Self) -> Option<Self> {
        if o.hi() == 0.0 && o.lo() == 0.0 {
            None
        } else {
            Some(*self / *o)
        }
    }
    fn ring_neg(&self) -> Self {
        -*self
    }
    fn approx_zero(&self, tol: f64) -> bool {
        self.abs().hi() <= tol
    }
    fn to_f64(&self) -> f64 {
        self.hi() + self.lo()
    }
}

/// Complex numbers over a `Coeff` ring; used where slices and punctures
/// must be computed in the pencil's own arithmetic before any rounding.
#[derive(Clone, PartialEq, Debug)]
pub struct CxK<K: Coeff> {
    pub re: K,
    pub im: K,
}

impl<K: Coeff> CxK<K> {
    pub fn new(re: K, im: K) -> Self {
        CxK { re, im }
    }

    pub fn zero() -> Self {
        CxK::new(K::zero(), K::zero())
    }

    pub fn from_rats(re: &Rat, im: &Rat) -> Self {
        CxK::new(K::from_rat(re), K::from_rat(im))
    }

    pub fn add(&self, o: &Self) -> Self {
        CxK::new(self.re.ring_add(&o.re), self.im.ring_add(&o.im))
    }

    pub fn sub(&self, o: &Self) -> Self {
        CxK::new(self.re.ring_sub(&o.re), self.im.ring_sub(&o.im))
    }

    pub fn mul(&self, o: &Self) -> Self {
        CxK::new(
            self.re.ring_mul(&o.re).ring_sub(&self.im.ring_mul(&o.im)),
            self.re.ring_mul(&o.im).ring_add(&self.im.ring_mul(&o.re)),
        )
    }

    pub fn scale(&self, k: &K) -> Self {
        CxK::new(self.re.ring_mul(k), self.im.ring_mul(k))
    }

    /// Division via the conjugate; `None` when `o` is (exactly) zero.
    pub fn div(&self, o: &Self) -> Option<Self> {
        let n = o.re.ring_mul(&o.re).ring_add(&o.im.ring_mul(&o.im));
        if n.is_zero() {
            return None;
        }
        let num = self.mul(&CxK::new(o.re.clone(), o.im.ring_neg()));
        Some(CxK::new(num.re.ring_div(&n)?, num.im.ring_div(&n)?))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn approx_zero(&self, tol: f64) -> bool {
        self.re.approx_zero(tol) && self.im.approx_zero(tol)
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

/// Exact complex rationals, the arithmetic used by slice construction for
/// rational pencils.
pub type CxRat = CxK<Rat>;

impl CxRat {
    /// True when `self/other` is real and positive (same open ray from 0).
    /// Both must be nonzero.
    pub fn same_ray(&self, other: &Self) -> bool {
        // self * conj(other) real positive
        let prod = self.mul(&CxK::new(other.re.clone(), -other.im.clone()));
        Zero::is_zero(&prod.im) && prod.re > Rat::from_integer(0.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn complex_rational_division_exact() {
        let a = CxRat::from_rats(&rat(1, 2), &rat(3, 1));
        let b = CxRat::from_rats(&rat(-2, 1), &rat(1, 4));
        let q = a.div(&b).unwrap();
        let back = q.mul(&b);
        assert_eq!(back, a);
        assert!(a.div(&CxRat::zero()).is_none());
    }

    #[test]
    fn ray_detection() {
        let a = CxRat::from_rats(&rat(1, 1), &rat(2, 1));
        let b = CxRat::from_rats(&rat(2, 1), &rat(4, 1));
        let c = CxRat::from_rats(&rat(-1, 1), &rat(-2, 1));
        assert!(a.same_ray(&b));
        assert!(!a.same_ray(&c));
    }
}
