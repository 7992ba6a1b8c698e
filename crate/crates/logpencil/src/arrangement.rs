//! Affine hyperplane arrangements over a coefficient ring.
//!
//! A hyperplane is the zero set of `a_H(x) = <normal, x> - offset`. For
//! exact (rational) arrangements the normal is stored as a primitive
//! integer vector with a positive leading entry, and the codimension-2
//! intersection lattice is computed exactly; that lattice drives the
//! residue flatness criterion.

use thiserror::Error;

use crate::algebra::{rat_to_string, Mat, Rat};
use crate::coeff::{Coeff, CxK};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ArrangementError {
    #[error("hyperplane `{0}` has zero normal vector")]
    ZeroNormal(String),
    #[error("hyperplane normal length {got} does not match base dimension {want}")]
    BadNormalLength { got: usize, want: usize },
    #[error("duplicate hyperplane: `{0}` and `{1}` define the same locus")]
    Duplicate(String, String),
    #[error("unknown hyperplane label `{0}`")]
    UnknownLabel(String),
    #[error("base dimension must be at least 1")]
    ZeroDimensional,
}

/// One affine hyperplane `<normal, x> = offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane<K> {
    pub normal: Vec<K>,
    pub offset: K,
    pub label: String,
}

impl<K: Coeff> Hyperplane<K> {
    /// Builds the hyperplane `<normal, x> = offset`; rational data is
    /// rescaled to a primitive integer normal with positive leading entry
    /// (the connection form `d(a_H)/a_H` is scale-invariant, so this only
    /// canonicalizes the representation).
    pub fn new(mut normal: Vec<K>, mut offset: K, label: impl Into<String>) -> Result<Self, ArrangementError> {
        let label = label.into();
        if normal.iter().all(|a| a.is_zero()) {
            return Err(ArrangementError::ZeroNormal(label));
        }
        K::normalize_hyperplane(&mut normal, &mut offset);
        Ok(Hyperplane {
            normal,
            offset,
            label,
        })
    }

    /// `a_H(x)` evaluated in the coefficient ring.
    pub fn form_at(&self, x: &[K]) -> K {
        let mut acc = self.offset.ring_neg();
        for (a, xi) in self.normal.iter().zip(x) {
            acc = acc.ring_add(&a.ring_mul(xi));
        }
        acc
    }

    /// `a_H` at a complex point built over the coefficient ring.
    pub fn form_at_cx(&self, x: &[CxK<K>]) -> CxK<K> {
        let mut acc = CxK::new(self.offset.ring_neg(), K::zero());
        for (a, xi) in self.normal.iter().zip(x) {
            acc = acc.add(&xi.scale(a));
        }
        acc
    }

    /// `a_H` at a complex floating point.
    pub fn form_at_c64(&self, x: &[num_complex::Complex64]) -> num_complex::Complex64 {
        let mut acc = -num_complex::Complex64::new(self.offset.to_f64(), 0.0);
        for (a, xi) in self.normal.iter().zip(x) {
            acc += xi * a.to_f64();
        }
        acc
    }

}

impl Hyperplane<Rat> {
    /// The row `[normal | offset]`, the exact signature of the locus.
    fn augmented_row(&self) -> Vec<Rat> {
        let mut row = self.normal.clone();
        row.push(self.offset.clone());
        row
    }
}

/// An ordered, duplicate-free list of hyperplanes in a fixed base.
#[derive(Debug, Clone, PartialEq)]
pub struct Arrangement<K> {
    base_dim: usize,
    hyperplanes: Vec<Hyperplane<K>>,
}

impl<K: Coeff> Arrangement<K> {
    pub fn new(base_dim: usize, hyperplanes: Vec<Hyperplane<K>>) -> Result<Self, ArrangementError> {
        if base_dim == 0 {
            return Err(ArrangementError::ZeroDimensional);
        }
        for h in &hyperplanes {
            if h.normal.len() != base_dim {
                return Err(ArrangementError::BadNormalLength {
                    got: h.normal.len(),
                    want: base_dim,
                });
            }
        }
        // Duplicate detection: proportional (normal, offset) pairs define
        // the same hyperplane and are rejected, never merged silently.
        for i in 0..hyperplanes.len() {
            for j in i + 1..hyperplanes.len() {
                if Self::proportional(&hyperplanes[i], &hyperplanes[j]) {
                    return Err(ArrangementError::Duplicate(
                        hyperplanes[i].label.clone(),
                        hyperplanes[j].label.clone(),
                    ));
                }
            }
        }
        Ok(Arrangement {
            base_dim,
            hyperplanes,
        })
    }

    fn proportional(a: &Hyperplane<K>, b: &Hyperplane<K>) -> bool {
        // [normal|offset] rows proportional <=> all 2x2 minors vanish.
        let ra: Vec<K> = a
            .normal
            .iter()
            .cloned()
            .chain(std::iter::once(a.offset.clone()))
            .collect();
        let rb: Vec<K> = b
            .normal
            .iter()
            .cloned()
            .chain(std::iter::once(b.offset.clone()))
            .collect();
        let tol = 1e-12;
        for i in 0..ra.len() {
            for j in i + 1..ra.len() {
                let minor = ra[i].ring_mul(&rb[j]).ring_sub(&ra[j].ring_mul(&rb[i]));
                if !minor.approx_zero(tol) {
                    return false;
                }
            }
        }
        true
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn hyperplanes(&self) -> &[Hyperplane<K>] {
        &self.hyperplanes
    }

    pub fn hyperplane(&self, i: usize) -> &Hyperplane<K> {
        &self.hyperplanes[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, ArrangementError> {
        self.hyperplanes
            .iter()
            .position(|h| h.label == label)
            .ok_or_else(|| ArrangementError::UnknownLabel(label.to_string()))
    }

    /// Minimum |a_H(x)| over all hyperplanes at a complex point.
    pub fn min_abs_form_c64(&self, x: &[num_complex::Complex64]) -> f64 {
        self.hyperplanes
            .iter()
            .map(|h| h.form_at_c64(x).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

/// A codimension-2 flat together with the hyperplanes containing it.
#[derive(Debug, Clone)]
pub struct Codim2Flat {
    /// Indices into the arrangement, ascending.
    pub members: Vec<usize>,
}

impl Arrangement<Rat> {
    /// Enumerates the codimension-2 flats as an exact intersection
    /// computation: pairwise intersections deduplicated by the row-reduced
    /// form of their defining system. Parallel hyperplanes meet nowhere
    /// and produce no flat.
    pub fn codim2_flats(&self) -> Vec<Codim2Flat> {
        let r = self.base_dim;
        let mut flats = Vec::new();
        let mut seen_keys = std::collections::BTreeSet::new();
        for i in 0..self.hyperplanes.len() {
            for j in i + 1..self.hyperplanes.len() {
                let hi = &self.hyperplanes[i];
                let hj = &self.hyperplanes[j];
                // Parallel normals with distinct offsets meet nowhere.
                let mut coeff = Mat::from_rows(vec![hi.normal.clone(), hj.normal.clone()]);
                if coeff.rref() < 2 {
                    continue;
                }
                let mut m = Mat::from_rows(vec![hi.augmented_row(), hj.augmented_row()]);
                m.rref();
                let mut key = String::new();
                for rr in 0..2 {
                    for cc in 0..=r {
                        key.push_str(&rat_to_string(m.at(rr, cc)));
                        key.push(',');
                    }
                    key.push(';');
                }
                if !seen_keys.insert(key) {
                    continue;
                }
                // A hyperplane contains the flat iff its augmented row lies
                // in the row span of the flat's reduced system.
                let members: Vec<usize> = (0..self.hyperplanes.len())
                    .filter(|&k| m.rref_contains(&self.hyperplanes[k].augmented_row()))
                    .collect();
                flats.push(Codim2Flat { members });
            }
        }
        flats
    }

    /// Human-readable description of a flat by its member labels.
    pub fn describe_flat(&self, flat: &Codim2Flat) -> String {
        flat.members
            .iter()
            .map(|&i| self.hyperplanes[i].label.clone())
            .collect::<Vec<_>>()
            .join(" & ")
    }
}
