//! Characteristic ranks of Stiefel-Whitney profiles over finite graded
//! F2-cohomology rings.
//!
//! The crate is organized as a pipeline:
//!
//! - [`f2`] — bit-packed linear algebra over the two-element field;
//! - [`algebra`] — graded-commutative F2-algebras, elements, ring maps;
//! - [`dsl`] — the textual presentation language and its realization into
//!   algebras, Stiefel-Whitney profiles and ring maps;
//! - [`engine`] — characteristic rank, cup-length, cup-length bounds,
//!   Whitney sums and constrained profile enumeration;
//! - [`catalog`] — generators for the classical spaces shipped with the
//!   tool, their named bundles and expected values.

pub mod algebra;
pub mod catalog;
pub mod dsl;
pub mod engine;
pub mod f2;

pub use algebra::{Algebra, AlgebraError, ConstraintFlag, Element, GradedAlgebra, RingMap, SpaceMeta, Sq1Map};
pub use engine::{Constraint, SWProfile};
pub use f2::{BitVector, F2Error, RowSpace};
