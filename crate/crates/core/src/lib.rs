//! Exact computations for hyperbolic reflection groups and arithmetic
//! lattices.
//!
//! * [`exactnum`]: real multiquadratic fields `Q(√d₁, …, √d_r)`.
//! * [`coxgram`]: Coxeter diagrams, Gram matrices, Vinberg's criterion.
//! * [`lorentz`]: quadratic spaces, admissibility and type I involutions.
//! * [`coxgroup`]: the geometric representation, element orders, centralizers.
//! * [`quat`]: quaternion algebras and Hilbert symbols.
//! * [`skewherm`]: skew-Hermitian forms and type II involutions.
//! * [`catalog`]: bundled example diagrams.
//! * [`report`]: end-to-end analyses shared by the command-line tool.

pub mod catalog;
pub mod coxgram;
pub mod coxgroup;
pub mod exactnum;
pub mod linalg;
pub mod lorentz;
pub mod quat;
pub mod report;
pub mod skewherm;

pub use coxgram::{CoxeterDiagram, GramMatrix, Label, VinbergReport, Verdict};
pub use coxgroup::{GeometricRep, OrderResult, Word};
pub use exactnum::{Embedding, FieldElement, MQField};
pub use linalg::{Matrix, SignatureTriple};
pub use lorentz::{Isometry, QuadraticSpace, Subspace};
pub use quat::{Quaternion, QuaternionAlgebra};
pub use skewherm::{DVector, SkewHermitianForm};
