//! Double-double arithmetic: unevaluated sums `hi + lo` of two `f64`s,
//! giving roughly 31 significant decimal digits.
//!
//! Used for dihedral reflection groups I2(m) with m outside {2,3,4,6},
//! whose reflection matrices involve cos(pi k/m); there the flatness point
//! oracle runs in this type against a 1e-20 threshold instead of exact
//! rational arithmetic. Algorithms are the classical error-free transforms
//! (Dekker/Knuth two-sum, FMA two-product).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::ToPrimitive;

use crate::algebra::Rat;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const fn new(hi: f64, lo: f64) -> Self {
        Dd { hi, lo }
    }

    /// pi to double-double precision.
    pub const PI: Dd = Dd::new(std::f64::consts::PI, 1.2246467991473532e-16);

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn abs(&self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -*self
        } else {
            *self
        }
    }

    /// Exact conversion of a rational whose parts fit in f64 products:
    /// numerator and denominator are split into high/low f64 halves.
    pub fn from_rat_parts(r: &Rat) -> Dd {
        let n = r.numer();
        let d = r.denom();
        // For the magnitudes used in this crate (|parts| < 2^52) the f64
        // conversions below are exact and the division is one rounding.
        let nf = n.to_f64().unwrap_or(f64::MAX);
        let df = d.to_f64().unwrap_or(f64::MAX);
        Dd::from(nf) / Dd::from(df)
    }

    /// cos(pi * k / m) computed by argument reduction and Taylor series.
    pub fn cos_pi_frac(k: i64, m: i64) -> Dd {
        Dd::sincos_pi_frac(k, m).1
    }

    /// sin(pi * k / m).
    pub fn sin_pi_frac(k: i64, m: i64) -> Dd {
        Dd::sincos_pi_frac(k, m).0
    }

    /// (sin, cos) of pi*k/m, reduced to the first octant before the series.
    pub fn sincos_pi_frac(k: i64, m: i64) -> (Dd, Dd) {
        assert!(m > 0);
        // reduce k/m mod 2 into [0, 2)
        let mut kk = k.rem_euclid(2 * m);
        // quadrant reduction on multiples of pi/2: k/m in [0,1/2) per step
        let mut sin_sign = 1.0;
        let mut swap = false;
        // kk/m in [0,2): subtract 1 (angle pi) flips both signs
        let mut cos_sign = 1.0;
        if kk >= m {
            kk -= m;
            sin_sign = -sin_sign;
            cos_sign = -cos_sign;
        }
        // now kk/m in [0,1); fold (1/2,1) onto (0,1/2): cos flips, sin keeps
        if 2 * kk > m {
            kk = m - kk;
            cos_sign = -cos_sign;
        }
        // fold (1/4,1/2] onto [0,1/4): swap sin and cos
        if 4 * kk > m {
            // angle' = pi/2 - angle
            swap = true;
            kk = {
                // pi*kk/m = pi/2 - pi*kk'/m  =>  kk'/m = 1/2 - kk/m
                // represent as (m - 2kk) / (2m)
                m - 2 * kk
            };
            // denominator doubles below
        }
        let (num, den) = if swap { (kk, 2 * m) } else { (kk, m) };
        let x = Dd::PI * Dd::from(num as f64) / Dd::from(den as f64);
        let (s, c) = x.sin_cos_taylor();
        let (s, c) = if swap { (c, s) } else { (s, c) };
        (
            Dd::from(sin_sign) * s,
            Dd::from(cos_sign) * c,
        )
    }

    /// Taylor series for |x| <= pi/4.
    fn sin_cos_taylor(self) -> (Dd, Dd) {
        let x2 = self * self;
        // sin
        let mut term = self;
        let mut sin = self;
        let mut n = 1.0f64;
        for _ in 0..25 {
            term = term * x2 / Dd::from(-((n + 1.0) * (n + 2.0)));
            sin = sin + term;
            n += 2.0;
            if term.abs().hi < 1e-35 {
                break;
            }
        }
        // cos
        let mut term = Dd::from(1.0);
        let mut cos = Dd::from(1.0);
        let mut n = 0.0f64;
        for _ in 0..25 {
            term = term * x2 / Dd::from(-((n + 1.0) * (n + 2.0)));
            cos = cos + term;
            n += 2.0;
            if term.abs().hi < 1e-35 {
                break;
            }
        }
        (sin, cos)
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }
}

impl num_traits::Zero for Dd {
    fn zero() -> Self {
        Dd::from(0.0)
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0 && self.lo == 0.0
    }
}

impl num_traits::One for Dd {
    fn one() -> Self {
        Dd::from(1.0)
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        // one Newton refinement on the f64 quotient
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::from(q1);
        let q2 = r.hi / o.hi;
        let r2 = r - o * Dd::from(q2);
        let q3 = r2.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd::new(hi, lo) + Dd::from(q3)
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.17e}{:+.3e}", self.hi, self.lo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn error_free_addition() {
        let tiny = 2f64.powi(-60);
        let x = Dd::from(1.0) + Dd::from(tiny);
        let y = x - Dd::from(1.0);
        assert_eq!(y.hi, tiny);
        assert_eq!(y.lo, 0.0);
    }

    #[test]
    fn division_precision() {
        let a = Dd::from(1.0) / Dd::from(3.0);
        let back = a * Dd::from(3.0) - Dd::from(1.0);
        assert!(back.abs().hi < 1e-31, "residual {}", back.abs().hi);
    }

    #[test]
    fn rational_conversion() {
        let r = rat(22, 7);
        let d = Dd::from_rat_parts(&r);
        let resid = d * Dd::from(7.0) - Dd::from(22.0);
        assert!(resid.abs().hi < 1e-30);
    }

    #[test]
    fn trigonometry_identities() {
        for m in [5i64, 7, 9, 12] {
            for k in 0..2 * m {
                let (s, c) = Dd::sincos_pi_frac(k, m);
                let one = s * s + c * c - Dd::from(1.0);
                assert!(one.abs().hi < 1e-30, "m={m} k={k} defect {}", one.abs().hi);
                let angle = std::f64::consts::PI * (k as f64) / (m as f64);
                assert!((c.hi - angle.cos()).abs() < 1e-14, "cos m={m} k={k}");
                assert!((s.hi - angle.sin()).abs() < 1e-14, "sin m={m} k={k}");
            }
        }
        // exact landmark: cos(pi/3) = 1/2
        let c = Dd::cos_pi_frac(1, 3);
        assert!((c - Dd::from(0.5)).abs().hi < 1e-31);
    }
}
