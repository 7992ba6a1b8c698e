//! Logarithmic pencils of flat connections on hyperplane-arrangement
//! complements: exact flatness and shift-operator verification, numerical
//! monodromy representations, periodicity tests, and jumping-locus scans.
//!
//! The crate is organized in layers:
//!
//! - [`algebra`]: arbitrary-precision rationals, multivariate polynomials
//!   and rational functions, parameter-affine matrices;
//! - [`arrangement`] / [`pencil`]: hyperplane arrangements and logarithmic
//!   pencils `B(s) = sum_H C_H(s) d(a_H)/a_H`, with two independent
//!   flatness checks (an exact residue-commutator criterion over
//!   codimension-2 flats, and an exact point oracle for the curvature);
//! - [`families`]: built-in pencils (`exshift`, `verma_kz`, `tensor_kz`,
//!   `dunkl`) and their shift operators;
//! - [`monodromy`]: parallel transport along meridian loops in a generic
//!   line slice, monodromy representations and conjugation-invariant
//!   signatures;
//! - [`periodicity`]: exact shift-operator identities, shift-invariance of
//!   monodromy signatures, Hecke and braiding eigenvalue checks;
//! - [`loci`]: parameter-space scans for jumping loci and integer-normal
//!   hyperplane fitting;
//! - [`specfile`] / [`report`] / [`runner`]: the JSON pencil-spec format,
//!   report emission, and the command implementations behind the CLI.
//!
//! Start with the runnable programs in `examples/` for a tour of each
//! capability.

pub mod algebra;
pub mod arrangement;
pub mod coeff;
pub mod dd;
pub mod exprparse;
pub mod families;
pub mod integrate;
pub mod loci;
pub mod monodromy;
pub mod numeric;
pub mod pencil;
pub mod periodicity;
pub mod report;
pub mod runner;
pub mod specfile;

pub use algebra::{Rat, RatFun, RatFunMatrix};
pub use arrangement::{Arrangement, Hyperplane};
pub use coeff::Coeff;
pub use families::{AnyPencil, FamilySpec};
pub use monodromy::{LineSlice, Loop, MonodromyRep};
pub use pencil::{FlatnessReport, LogPencil, PencilNumeric};
