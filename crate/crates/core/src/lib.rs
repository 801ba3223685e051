//! confray: an exact-arithmetic engine for conformal symmetry on Minkowski
//! space and the space-time observables it induces on light-ray states.
//!
//! The engine is organised in layers:
//!
//! - [`scalar`] / [`minkowski`]: exact rational scalars, four-vectors, and
//!   index gymnastics for the fixed (+, −, −, −) signature;
//! - [`poly`] / [`vecfield`]: sparse polynomials in the four coordinates and
//!   polynomial vector fields, with Lie commutators, conformal factors, and
//!   the 15-generator conformal basis;
//! - [`ray`]: classical dispersionless light rays, conserved generator
//!   values, and infinitesimal conformal transport;
//! - [`event`]: multi-ray states, the mass invariant, the extracted
//!   space-time position, and the accelerated-frame quantum correction;
//! - [`phase`]: Poisson brackets on (X, P) phase space, canonical
//!   conjugation, and the shift laws for momenta and positions;
//! - [`parser`] / [`suites`]: the expression front end and the named
//!   verification suites behind the `confray` binary.
//!
//! Everything is immutable and pure; all values are safe to share across
//! threads.

// Loops over μ, ν, ρ index fixed-size tensor slots; written in index
// notation deliberately.
#![allow(clippy::needless_range_loop)]

pub mod event;
pub mod minkowski;
pub mod parser;
pub mod phase;
pub mod poly;
pub mod ray;
pub mod scalar;
pub mod suites;
pub mod vecfield;

pub use minkowski::{minkowski_dot, FourVector, IndexPosition};
pub use poly::Polynomial;
pub use scalar::Scalar;
pub use vecfield::{
    conformal_factor, decompose_in_basis, lie_commutator, metric_variation, standard_generator,
    GeneratorKind, VectorField,
};
