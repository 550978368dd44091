//! Exact numeric substrate: rationals, dense matrices, integer lattices,
//! univariate root counting and sparse multivariate polynomials.

pub mod lattice;
pub mod matrix;
pub mod multipoly;
pub mod rational;
pub mod sturm;

pub use lattice::{
    hermite_normal_form, hnf_basis, integer_kernel, integer_kernel_rational, invariant_factors,
    is_saturated_basis, saturate, smith_normal_form, SmithForm,
};
pub use matrix::{IntMatrix, Matrix, RatMatrix};
pub use multipoly::MultiPoly;
pub use rational::{parse_rational, ParseRationalError, Rational};
pub use sturm::{count_real_roots, root_at, sturm_count, Bound, SturmError, UniPoly};
