//! Exact computation of cohomology dimensions of twisted symmetric powers of
//! cotangent bundles of smooth complete intersections in projective space.
//!
//! Everything is computed over prime fields with exact integer answers:
//! graded pieces of bihomogeneous polynomial rings are assembled into sparse
//! matrices, the relevant differential complexes are built from quotient
//! pieces, and cohomology dimensions fall out of exact rank computations.
//! Closed-form oracles (weight dominance normalization on the flag variety,
//! plane-curve line bundles) provide independent cross-checks.
//!
//! Module layout:
//! - [`linalg`]: sparse exact linear algebra over prime fields, plus a
//!   fraction-free integer rank for certification.
//! - [`polyspace`]: bihomogeneous polynomial pieces `S_{m,n}`, monomial
//!   ranking, arithmetic, and the input grammar.
//! - [`bott`]: closed-form cohomology via the shifted Weyl normalization
//!   and the Weyl dimension formula.
//! - [`quotient`]: graded pieces of quotients by bihomogeneous ideals.
//! - [`operators`]: the differential/multiplication operators and their
//!   matrices between pieces.
//! - [`complexes`]: the cohomology-computing complexes and their rank
//!   bookkeeping.
//! - [`cohomology`]: user-facing queries: `h^i`, positive-twist recipes,
//!   ampleness checks, witnesses, sweeps.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bott;
pub mod cohomology;
pub mod complexes;
pub mod linalg;
pub mod operators;
pub mod polyspace;
pub mod quotient;
