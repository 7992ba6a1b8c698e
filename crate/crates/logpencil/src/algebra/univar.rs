//! Univariate polynomials over `Rat`: just enough for exact resonance
//! detection on characteristic polynomials of residues.
//!
//! A residue is resonant when two of its eigenvalues differ by a nonzero
//! integer. Over the rationals this is decidable without computing the
//! eigenvalues: `p(t)` and `p(t+k)` share a root for some nonzero integer
//! `k` bounded by twice the Cauchy root bound.

use num_traits::{One, Signed, Zero};

use super::Rat;

/// Coefficients ascending: `c[0] + c[1] t + ...`. Zero polynomial is `[]`.
pub type UniPoly = Vec<Rat>;

pub fn trim(mut p: UniPoly) -> UniPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn degree(p: &UniPoly) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

/// Remainder of `a` modulo `b` (`b` nonzero), over the rational field.
pub fn rem(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let b = trim(b.clone());
    assert!(!b.is_empty(), "remainder by zero polynomial");
    let mut r = trim(a.clone());
    let db = b.len() - 1;
    let lead = b.last().unwrap().clone();
    while r.len() > db {
        let dr = r.len() - 1;
        let factor = r.last().unwrap() / &lead;
        for i in 0..=db {
            let idx = dr - db + i;
            let v = &r[idx] - &factor * &b[i];
            r[idx] = v;
        }
        r = trim(r);
        if r.is_empty() {
            break;
        }
    }
    r
}

/// Monic gcd by the Euclidean algorithm.
pub fn gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let mut a = trim(a.clone());
    let mut b = trim(b.clone());
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(lead) = a.last().cloned() {
        for c in &mut a {
            *c = &*c / &lead;
        }
    }
    a
}

/// `p(t + k)` by repeated synthetic shifts (exact).
pub fn shift(p: &UniPoly, k: &Rat) -> UniPoly {
    // Horner-style Taylor shift.
    let p = trim(p.clone());
    if p.is_empty() {
        return p;
    }
    let n = p.len();
    let mut out = p;
    for i in 0..n - 1 {
        for j in (i..n - 1).rev() {
            let add = {
                let hi = out[j + 1].clone();
                &hi * k
            };
            let v = &out[j] + &add;
            out[j] = v;
        }
    }
    trim(out)
}

/// Cauchy bound: every root of the monic polynomial has modulus below it.
pub fn cauchy_bound(p: &UniPoly) -> Rat {
    let p = trim(p.clone());
    if p.len() <= 1 {
        return Rat::one();
    }
    let lead = p.last().unwrap();
    let mut max = Rat::zero();
    for c in &p[..p.len() - 1] {
        let v = (c / lead).abs();
        if v > max {
            max = v;
        }
    }
    Rat::one() + max
}

/// True when two roots of `p` differ by a nonzero integer (exact test).
pub fn integer_gap_resonant(p: &UniPoly) -> bool {
    let p = trim(p.clone());
    if degree(&p).unwrap_or(0) < 1 {
        return false;
    }
    let bound = cauchy_bound(&p);
    // |root_i - root_j| <= 2*bound; only integer shifts up to that matter.
    let two_bound = &bound + &bound;
    let kmax = two_bound.to_integer() + 1i32;
    let mut k = num_bigint::BigInt::from(1);
    while k <= kmax {
        let shifted = shift(&p, &Rat::from_integer(k.clone()));
        let g = gcd(&p, &shifted);
        if degree(&g).unwrap_or(0) >= 1 {
            return true;
        }
        k += 1;
    }
    false
}
