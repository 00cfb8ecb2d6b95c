//! Exact computer algebra for the Picard groups of stacks of n-pointed
//! smooth cyclic covers of the line.
//!
//! Modules:
//! - [`poly`]: sparse multivariate polynomials over exact rationals;
//! - [`fraction`]: rational functions with factored p-denominators;
//! - [`binary`]: binary forms, Sylvester resultants, discriminants, GL2;
//! - [`elimination`]: the coefficient-elimination recursion and its inverse
//!   pair of maps;
//! - [`lattice`]: Smith normal form, congruence sublattices, and abelian
//!   groups in invariant-factor form;
//! - [`picard`]: the assembled Picard groups with basis descriptions;
//! - [`report`]: seeded verification suites shared by the CLI and tests.
//!
//! Every computation is exact; no floating-point type appears anywhere.

pub mod binary;
pub mod elimination;
pub mod fraction;
pub mod lattice;
pub mod picard;
pub mod poly;
pub mod rat;
pub mod report;

// Downstream crates work with the same exact-arithmetic types.
pub use num_bigint;
pub use num_rational;
pub use num_traits;
