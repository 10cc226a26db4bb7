//! Exact computational algebra for the symmetry structure of Dehn fillings
//! on two-cusped hyperbolic 3-manifolds.
//!
//! Everything here is exact: rationals are arbitrary precision, quadratic
//! irrationalities are carried symbolically as elements of an imaginary
//! quadratic field, and no floating point appears anywhere.
//!
//! The crate is organized around the pipeline
//!
//! * [`exactnum`]: arithmetic in Q and Q(sqrt(D)),
//! * [`linalg`]: exact 2x2 and 4x4 matrix algebra and polynomial helpers,
//! * [`blocktype`]: the block-structural Type I/II/III trichotomy,
//! * [`spectral`]: primary matrices, eigendata and root-of-unity tests,
//! * [`catalog`]: the parametric normal forms per minimal polynomial,
//! * [`groups`]: finite closures and their presentations,
//! * [`fillings`]: slope actions and symmetry-set enumeration,
//! * [`funceq`]: the homogeneous functional-equation solver,
//!
//! with [`corpus`] holding the built-in worked matrices and [`report`]
//! the deterministic JSON report layer used by the CLI.

pub mod blocktype;
pub mod catalog;
pub mod corpus;
pub mod exactnum;
pub mod fillings;
pub mod funceq;
pub mod groups;
pub mod linalg;
pub mod report;
pub mod spectral;
