//! Exact combinatorics of toric contact manifolds of arbitrary codimension.
//!
//! Everything is computed over exact rationals and integers: labelled
//! polytopes and their face lattices, Levi pairs cut out of a torus algebra,
//! affine grassmannian presentations with Delzant and orbifold tests,
//! Pfaffian degeneracy pencils, and the two construction pipelines that tie
//! polytopes to contact reduction data.

pub mod exactnum;
pub mod fm;
pub mod polytope;
pub mod levi;
pub mod grassmann;
pub mod pencil;
pub mod construct;
pub mod generate;
