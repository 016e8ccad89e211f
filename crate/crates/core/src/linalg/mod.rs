//! Exact integer and rational linear algebra.
//!
//! Everything here is arbitrary precision and pure. The other modules use
//! these routines for Weyl-group matrices, level lattices, cocycle systems and
//! cohomology groups.

mod abelian;
mod matrix;
mod normal_form;
mod rational;
mod solve;

pub(crate) use matrix::bigint_json;
pub use abelian::{cokernel, congruence_kernel, AbelianInvariants, Subquotient};
pub use matrix::{dot, to_big, IntMatrix};
pub use normal_form::{hnf, pivot_columns, rank, row_lattice_basis, snf, snf_diagonal};
pub use rational::{format_rational, parse_rational, rat_dot, RatMatrix, RatVector};
pub use solve::{coordinates_in_hnf_basis, kernel_basis, solve_z, IntegerSolution};
