//! Exact barycenter decompositions on the skeleta of convex polytopes.
//!
//! Given a polytope `P`, a point `p ∈ P` and integers `n`, `k` with
//! `k·n ≥ dim P`, [`solver::decompose`] finds points `p₁, …, pₙ` on the
//! `k`-skeleton of `P` whose barycenter is `p`, using rational arithmetic
//! throughout. Supporting modules build face lattices ([`polytope`]), decide
//! linear feasibility with certificates ([`lp`]), measure distances to
//! skeleta ([`testmap`]) and run parameter sweeps ([`experiment`]).

pub mod error;
pub mod exact_math;
pub mod experiment;
pub mod lp;
pub mod polytope;
pub mod solver;
pub mod testmap;

pub use error::{Error, Result};
pub use exact_math::{Matrix, Scalar, Vector};
pub use polytope::{Face, FaceId, Polytope};
