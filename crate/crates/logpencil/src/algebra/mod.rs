//! Exact arithmetic foundation: arbitrary-precision rationals, multivariate
//! polynomials and rational functions in the parameter and coordinate
//! symbols, and parameter-affine matrices.
//!
//! Everything in this module is immutable after construction and free of
//! floating point; equality of rational functions is decided by
//! cross-multiplication, so no multivariate gcd engine is required.

pub mod matrix;
pub mod poly;
pub mod ratfun;
pub mod univar;

pub use matrix::{Mat, ParamLinear};
pub use poly::{MultiPoly, Vars};
pub use ratfun::{RatFun, RatFunMatrix};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

/// Arbitrary-precision rational scalar. Always stored reduced with a
/// positive denominator (maintained by `num-rational`).
pub type Rat = BigRational;

/// Errors raised by the exact-arithmetic layer.
#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("division by zero rational function")]
    DivisionByZero,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("symbol sets differ: `{0}` vs `{1}`")]
    SymbolMismatch(String, String),
    #[error("malformed rational literal `{0}`")]
    BadRational(String),
}

/// Shorthand for `n/d` as a `Rat`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for an integer as a `Rat`.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"p"` or `"p/q"` with optional sign and surrounding whitespace.
pub fn parse_rat(s: &str) -> Result<Rat, AlgebraError> {
    let t = s.trim();
    let bad = || AlgebraError::BadRational(s.to_string());
    match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
        None => {
            let p: BigInt = t.parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(p))
        }
    }
}

/// Renders a `Rat` in the same `"p"` / `"p/q"` form accepted by [`parse_rat`].
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Lossy conversion to `f64` (good to a ulp for the magnitudes used here).
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of clamped parts for huge operands.
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

/// A uniformly random rational with |numerator| ≤ `max_num` and
/// 1 ≤ denominator ≤ `max_den`, excluding 0 when `nonzero` is set.
pub fn random_rat<R: Rng>(rng: &mut R, max_num: i64, max_den: i64, nonzero: bool) -> Rat {
    loop {
        let n = rng.gen_range(-max_num..=max_num);
        let d = rng.gen_range(1..=max_den);
        let r = rat(n, d);
        if !nonzero || !r.is_zero() {
            return r;
        }
    }
}

/// Content of a nonempty list of rationals: the positive rational `g`
/// such that dividing every element by `g` yields coprime integers.
pub fn content(values: &[&Rat]) -> Rat {
    use num_integer::Integer;
    let mut num_gcd = BigInt::zero();
    let mut den_lcm = BigInt::one();
    for v in values {
        num_gcd = num_gcd.gcd(v.numer());
        den_lcm = den_lcm.lcm(v.denom());
    }
    if num_gcd.is_zero() {
        return Rat::one();
    }
    Rat::new(num_gcd.abs(), den_lcm)
}
