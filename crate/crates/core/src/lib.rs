//! Exact-arithmetic toolkit for complete flags over small finite fields.
//!
//! The crate builds up from finite-field towers GF(p) ⊆ GF(q) ⊆ GF(q^k) and
//! row-reduced linear algebra to the combinatorics of partitions, standard
//! Young tableaux and Robinson-Schensted words, unipotent normal forms (Weyr
//! blocks), and brute-force rational-point enumeration of Deligne-Lusztig
//! varieties X_w, Springer fibres B_u, and their intersections.  A `harness`
//! module packages the component-level identities relating these varieties
//! into machine-checkable reports.
//!
//! Everything is exact: no floating point, no sampling error in counts.

pub mod combinatorics;
pub mod flag_geometry;
pub mod gf;
pub mod harness;
pub mod linalg;
pub mod normal_forms;
pub mod padic;

pub use combinatorics::{Partition, Perm, Tableau};
pub use flag_geometry::{Flag, VarietyKind, VarietySpec};
pub use gf::{make_field, Field, FieldSpec, Scalar};
pub use harness::Report;
pub use linalg::{Mat, Subspace};
pub use normal_forms::Unipotent;
pub use padic::TruncatedSeriesMat;
