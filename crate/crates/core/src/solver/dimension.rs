//! Dimension of `{(x₁, …, xₙ) : xᵢ ∈ σᵢ, Σ wᵢ xᵢ = 0}`.
//!
//! With equal weights this is a face `(σ₁ × ⋯ × σₙ) ∩ Wₙ^{⊕d}` of
//! `C = Pⁿ ∩ Wₙ^{⊕d}`, where `Wₙ^{⊕d}` is the space of `d × n` matrices whose
//! columns sum to zero. If the set meets the relative interior of the face
//! product its dimension is that of the affine system on the product of the
//! affine hulls; otherwise it lives in a smaller face product and we recurse
//! there.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_math::{solve_linear, Matrix, Scalar, Vector};
use crate::lp::{max_slack, StandardLP};
use crate::polytope::{Face, FaceId, Polytope};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionAnalysis {
    pub dim: usize,
    /// The set meets the relative interior of the given face product.
    pub relint_certified: bool,
    /// Optimal minimum vertex coefficient found by the slack LP.
    pub slack: Scalar,
    /// The face product whose relative interior the set actually meets.
    pub attained: Vec<FaceId>,
}

/// Coefficient system: rows `0..n` make each part's vertex coefficients sum
/// to one, rows `n..n+d` impose `Σ wᵢ xᵢ = 0`.
fn coefficient_system(polytope: &Polytope, faces: &[&Face], weights: &[Scalar]) -> StandardLP {
    let n = faces.len();
    let d = polytope.ambient_dim();
    let cols: usize = faces.iter().map(|f| f.vertex_ids().len()).sum();
    let mut a = Matrix::zeros(n + d, cols);
    let mut col = 0;
    for (i, face) in faces.iter().enumerate() {
        for &v in face.vertex_ids() {
            a.set(i, col, Scalar::one());
            for (c, x) in polytope.vertex(v).iter().enumerate() {
                a.set(n + c, col, &weights[i] * x);
            }
            col += 1;
        }
    }
    let b = std::iter::repeat_n(Scalar::one(), n)
        .chain(std::iter::repeat_n(Scalar::zero(), d))
        .collect();
    StandardLP::new(a, Vector::new(b)).expect("rows match rhs")
}

/// `Σ dim σᵢ − rank` of `Σ wᵢ (bᵢ + Bᵢ cᵢ) = 0` over the affine hulls.
fn affine_solution_dim(faces: &[&Face], weights: &[Scalar], d: usize) -> Option<usize> {
    let mut columns: Vec<Vector> = Vec::new();
    let mut rhs = Vector::zeros(d);
    for (face, w) in faces.iter().zip(weights) {
        let hull = face.hull().expect("nonempty face");
        rhs = rhs.sub(&hull.base_point().scale(w));
        columns.extend(hull.direction_basis().iter().map(|b| b.scale(w)));
    }
    let rows = (0..d)
        .map(|c| columns.iter().map(|col| col[c].clone()).collect())
        .collect();
    let a = Matrix::from_rows(rows, columns.len()).expect("uniform rows");
    solve_linear(&a, &rhs)
        .expect("shapes agree")
        .map(|s| s.dim())
}

/// Full analysis; `None` when the set is empty.
pub fn intersection_analysis(
    polytope: &Polytope,
    faces: &[&Face],
    weights: &[Scalar],
) -> Result<Option<IntersectionAnalysis>> {
    if faces.len() != weights.len() || faces.is_empty() {
        return Err(Error::InvalidRequest(
            "need one positive weight per face".into(),
        ));
    }
    if weights.iter().any(|w| !w.is_positive()) {
        return Err(Error::InvalidRequest("weights must be positive".into()));
    }
    if faces.iter().any(|f| !polytope.owns(f)) {
        return Err(Error::ForeignFace);
    }
    if faces.iter().any(|f| f.is_empty()) {
        return Ok(None);
    }
    let system = coefficient_system(polytope, faces, weights);
    let all: BTreeSet<usize> = (0..system.num_vars()).collect();
    let Some(slack) = max_slack(&system, &all)?.slack else {
        return Ok(None);
    };
    let d = polytope.ambient_dim();
    if slack.is_positive() {
        let dim = affine_solution_dim(faces, weights, d)
            .expect("a feasible point satisfies the affine system");
        return Ok(Some(IntersectionAnalysis {
            dim,
            relint_certified: true,
            slack,
            attained: faces.iter().map(|f| f.id()).collect(),
        }));
    }

    // Keep the vertices whose coefficient can be positive; per part they
    // span the carrier face of a relative-interior point of the set.
    let mut shrunk: Vec<&Face> = Vec::with_capacity(faces.len());
    let mut col = 0;
    for face in faces {
        let mut keep = FixedBitSet::with_capacity(polytope.vertices().len());
        for &v in face.vertex_ids() {
            let single = BTreeSet::from([col]);
            if max_slack(&system, &single)?
                .slack
                .is_some_and(|s| s.is_positive())
            {
                keep.insert(v);
            }
            col += 1;
        }
        let sub = polytope
            .lattice()
            .find_set(&keep)
            .expect("positive support of a relative-interior point is a face");
        shrunk.push(sub);
    }
    debug_assert!(shrunk
        .iter()
        .zip(faces)
        .any(|(s, f)| s.vertex_ids().len() < f.vertex_ids().len()));
    let mut inner =
        intersection_analysis(polytope, &shrunk, weights)?.expect("the restricted set is nonempty");
    debug_assert!(inner.relint_certified);
    inner.relint_certified = false;
    inner.slack = slack;
    Ok(Some(inner))
}

/// Dimension of `{(xᵢ) : xᵢ ∈ σᵢ, Σ wᵢ xᵢ = 0}`, or `None` when empty.
pub fn intersection_dimension(
    polytope: &Polytope,
    faces: &[&Face],
    weights: &[Scalar],
) -> Result<Option<usize>> {
    Ok(intersection_analysis(polytope, faces, weights)?.map(|a| a.dim))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    /// `n(k+1) − d`.
    pub bound: i64,
    pub tuples_checked: usize,
    pub nonempty: usize,
    pub certified: usize,
    pub violations: usize,
    pub min_certified_dim: Option<usize>,
}

/// For every multiset of `n` faces of dimension `≥ k+1`, checks that a
/// relative-interior-certified intersection with `Wₙ^{⊕d}` has dimension at
/// least `n(k+1) − d`. Requires `k·n ≥ d` and the origin in the interior.
pub fn verify_dimension_inequality(
    polytope: &Polytope,
    n: usize,
    k: usize,
) -> Result<DimensionReport> {
    let d = polytope.dim();
    if n == 0 || k * n < d {
        return Err(Error::InvalidRequest(format!(
            "need n ≥ 1 and k·n ≥ d, got n={n}, k={k}, d={d}"
        )));
    }
    let origin = Vector::zeros(polytope.ambient_dim());
    let interior = polytope
        .carrier_face(&origin)
        .is_ok_and(|f| f.id() == polytope.full_face().id());
    if !interior {
        return Err(Error::InvalidRequest(
            "origin must lie in the relative interior; translate first".into(),
        ));
    }
    let big: Vec<&Face> = polytope
        .lattice()
        .faces()
        .iter()
        .filter(|f| f.dim() > k as isize)
        .collect();
    let weights = vec![Scalar::new(1, n as i64); n];
    let bound = (n * (k + 1)) as i64 - d as i64;
    let mut report = DimensionReport {
        n,
        k,
        d,
        bound,
        tuples_checked: 0,
        nonempty: 0,
        certified: 0,
        violations: 0,
        min_certified_dim: None,
    };
    let mut idx = vec![0usize; n];
    if big.is_empty() {
        return Ok(report);
    }
    loop {
        let tuple: Vec<&Face> = idx.iter().map(|&i| big[i]).collect();
        report.tuples_checked += 1;
        if let Some(a) = intersection_analysis(polytope, &tuple, &weights)? {
            report.nonempty += 1;
            if a.relint_certified {
                report.certified += 1;
                report.min_certified_dim =
                    Some(report.min_certified_dim.map_or(a.dim, |m| m.min(a.dim)));
                if (a.dim as i64) < bound {
                    report.violations += 1;
                }
            }
        }
        // next nondecreasing index sequence
        let Some(pos) = (0..n).rev().find(|&p| idx[p] + 1 < big.len()) else {
            break;
        };
        let next = idx[pos] + 1;
        for slot in &mut idx[pos..] {
            *slot = next;
        }
    }
    Ok(report)
}
