//! Exact rational scalars, vectors, matrices and linear-algebra kernels.

mod linalg;
mod scalar;
mod vector;

pub use linalg::{
    affine_hull, independent_rows, rank, solve_linear, AffineSubspace, LinearSolution,
};
pub use scalar::Scalar;
pub use vector::{Matrix, Vector};
