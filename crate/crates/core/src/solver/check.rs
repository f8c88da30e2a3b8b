use super::{DecompositionRequest, DecompositionWitness};
use crate::exact_math::{Scalar, Vector};

/// Exact verification of a witness against its request:
///
/// * every carrier is a face of the polytope with `0 ≤ dim ≤ kᵢ`,
/// * every point is the stated convex combination of its carrier's vertices,
/// * the weighted sum of the points is the target.
pub fn check_witness(req: &DecompositionRequest<'_>, w: &DecompositionWitness) -> bool {
    let polytope = req.polytope();
    let n = req.n();
    let d = polytope.ambient_dim();
    if w.points.len() != n || w.carriers.len() != n || w.coefficients.len() != n {
        return false;
    }
    for (i, part) in req.parts().iter().enumerate() {
        let Some(face) = polytope.lattice().find(&w.carriers[i]) else {
            return false;
        };
        if face.dim() < 0 || face.dim() as usize > part.skeleton_dim {
            return false;
        }
        let coeffs = &w.coefficients[i];
        if coeffs.len() != face.vertex_ids().len()
            || coeffs.iter().any(Scalar::is_negative)
            || coeffs.iter().sum::<Scalar>() != Scalar::one()
        {
            return false;
        }
        let rebuilt = Vector::combination(
            d,
            coeffs
                .iter()
                .zip(face.vertex_ids().iter().map(|&v| polytope.vertex(v))),
        );
        if w.points[i].dim() != d || rebuilt != w.points[i] {
            return false;
        }
    }
    let barycenter = Vector::combination(d, req.parts().iter().map(|p| &p.weight).zip(&w.points));
    &barycenter == req.target()
}
