//! Distances to skeleta and the distance-equalizing test map.
//!
//! `Ψ(x₁, …, xₙ) = (dist(x₁, F), …, dist(xₙ, F))` with `F` the `k`-skeleton,
//! and `Φ` its orthogonal projection onto `Wₙ = {y : Σ yᵢ = 0}`, i.e.
//! `Φ = Ψ − mean(Ψ)`. `Φ` vanishes exactly when all distances agree.
//!
//! The nearest point of a union of faces lies in the relative interior of
//! some face `G` and equals the orthogonal projection onto `aff(G)`. So we
//! project onto the hull of every candidate face in rational arithmetic,
//! sort by squared distance, and return the first projection that lies in
//! the polytope. Only the final square root is taken in floating point.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_math::{solve_linear, Matrix, Scalar, Vector};
use crate::polytope::{Face, Polytope};

/// Exact orthogonal projection of `x` onto the affine hull of `face`, with
/// the squared distance.
fn project(face: &Face, x: &Vector) -> (Vector, Scalar) {
    let hull = face.hull().expect("nonempty face");
    let delta = x.sub(hull.base_point());
    let basis = hull.direction_basis();
    let proj = if basis.is_empty() {
        hull.base_point().clone()
    } else {
        let gram = basis
            .iter()
            .map(|a| basis.iter().map(|b| a.dot(b)).collect())
            .collect();
        let gram = Matrix::from_rows(gram, basis.len()).expect("square");
        let rhs = Vector::new(basis.iter().map(|b| b.dot(&delta)).collect());
        let coords = solve_linear(&gram, &rhs)
            .expect("square system")
            .expect("Gram matrix of independent vectors is invertible")
            .particular;
        hull.point_at(coords.coords())
    };
    let diff = x.sub(&proj);
    let sq = diff.dot(&diff);
    (proj, sq)
}

fn nearest_distance<'p>(
    polytope: &'p Polytope,
    candidates: impl Iterator<Item = &'p Face>,
    x: &Vector,
) -> Result<f64> {
    x.check_dim(polytope.ambient_dim())?;
    let mut projections: Vec<(Scalar, Vector)> = candidates
        .filter(|f| !f.is_empty())
        .map(|f| {
            let (p, sq) = project(f, x);
            (sq, p)
        })
        .collect();
    projections.sort_by(|a, b| a.0.cmp(&b.0));
    for (sq, proj) in projections {
        // a face is its polytope cut with its affine hull
        if polytope.contains(&proj)? {
            return Ok(sq.to_f64().sqrt());
        }
    }
    Err(Error::EmptyInput("no candidate faces"))
}

/// Euclidean distance from `x` to the face `face` of `polytope`.
pub fn dist_to_face(polytope: &Polytope, face: &Face, x: &Vector) -> Result<f64> {
    if !polytope.owns(face) {
        return Err(Error::ForeignFace);
    }
    let subfaces = polytope
        .lattice()
        .faces()
        .iter()
        .filter(|g| g.is_subface_of(face));
    nearest_distance(polytope, subfaces, x)
}

/// Euclidean distance from `x` to the union of faces of dimension `≤ k`.
pub fn dist_to_skeleton(polytope: &Polytope, x: &Vector, k: usize) -> Result<f64> {
    nearest_distance(polytope, polytope.faces_of_dim_at_most(k).into_iter(), x)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestMapEvaluation {
    pub psi: Vec<f64>,
    pub phi: Vec<f64>,
    pub phi_max_abs: f64,
}

impl TestMapEvaluation {
    /// `Φ = Ψ − mean(Ψ)`. The mean sums the values in sorted order so that
    /// permuting the inputs permutes the output bit for bit.
    pub fn from_psi(psi: Vec<f64>) -> Self {
        let mut sorted = psi.clone();
        sorted.sort_by(f64::total_cmp);
        let mean = if sorted.is_empty() {
            0.0
        } else {
            sorted.iter().sum::<f64>() / sorted.len() as f64
        };
        let phi: Vec<f64> = psi.iter().map(|p| p - mean).collect();
        let phi_max_abs = phi.iter().fold(0.0f64, |m, p| m.max(p.abs()));
        TestMapEvaluation {
            psi,
            phi,
            phi_max_abs,
        }
    }

    pub fn psi_max(&self) -> f64 {
        self.psi.iter().copied().fold(0.0, f64::max)
    }
}

/// Evaluates `Ψ` and `Φ` at a tuple of points with `F` the `k`-skeleton.
pub fn evaluate_phi(points: &[Vector], polytope: &Polytope, k: usize) -> Result<TestMapEvaluation> {
    if points.is_empty() {
        return Err(Error::EmptyInput("evaluate_phi needs at least one point"));
    }
    let psi = points
        .iter()
        .map(|x| dist_to_skeleton(polytope, x, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(TestMapEvaluation::from_psi(psi))
}
