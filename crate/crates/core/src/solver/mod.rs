//! Barycenter decompositions on polytope skeleta.
//!
//! [`decompose`] looks for points `p₁, …, pₙ` with `pᵢ` on a face of
//! dimension at most `kᵢ` and `Σ λᵢ pᵢ = p`. The search first restricts to
//! the carrier face of `p`, then walks tuples of candidate faces in a fixed
//! order and asks an exact LP whether the tuple admits the barycenter
//! constraint. When `k·n` is at least the carrier's dimension a solution is
//! guaranteed to exist, so exhausting the search in that regime is a bug.

mod check;
mod dimension;
mod direct;
mod enumerate;
mod factored;

use serde::{Deserialize, Serialize};

pub use check::check_witness;
pub use dimension::{
    intersection_analysis, intersection_dimension, verify_dimension_inequality, DimensionReport,
    IntersectionAnalysis,
};
pub use direct::enumeration_size;

use crate::error::{Error, Result};
use crate::exact_math::{Scalar, Vector};
use crate::polytope::Polytope;

/// One summand: a point on the `skeleton_dim`-skeleton, weighted by `weight`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Part {
    pub skeleton_dim: usize,
    pub weight: Scalar,
}

impl Part {
    pub fn new(skeleton_dim: usize, weight: Scalar) -> Self {
        Part {
            skeleton_dim,
            weight,
        }
    }
}

/// Parses `"k:λ,k:λ,…"`, e.g. `"0:1/4,1:3/4"`.
pub fn parse_parts(s: &str) -> Result<Vec<Part>> {
    s.split(',')
        .map(|item| {
            let (k, w) = item
                .trim()
                .split_once(':')
                .ok_or_else(|| Error::InvalidRequest(format!("part {item:?} is not k:weight")))?;
            let k = k
                .trim()
                .parse()
                .map_err(|_| Error::InvalidRequest(format!("bad skeleton dimension {k:?}")))?;
            Ok(Part::new(k, w.trim().parse()?))
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct DecompositionRequest<'a> {
    polytope: &'a Polytope,
    target: Vector,
    parts: Vec<Part>,
}

impl<'a> DecompositionRequest<'a> {
    pub fn new(polytope: &'a Polytope, target: Vector, parts: Vec<Part>) -> Result<Self> {
        target.check_dim(polytope.ambient_dim())?;
        if parts.is_empty() {
            return Err(Error::InvalidRequest(
                "at least one part is required".into(),
            ));
        }
        if let Some(p) = parts.iter().find(|p| !p.weight.is_positive()) {
            return Err(Error::InvalidRequest(format!(
                "weight {} is not positive",
                p.weight
            )));
        }
        let total: Scalar = parts.iter().map(|p| &p.weight).sum();
        if total != Scalar::one() {
            return Err(Error::InvalidRequest(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(DecompositionRequest {
            polytope,
            target,
            parts,
        })
    }

    /// `n` points on the `k`-skeleton with equal weights `1/n`.
    pub fn homogeneous(polytope: &'a Polytope, target: Vector, n: usize, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidRequest("n must be positive".into()));
        }
        let w = Scalar::new(1, n as i64);
        Self::new(polytope, target, vec![Part::new(k, w); n])
    }

    pub fn polytope(&self) -> &'a Polytope {
        self.polytope
    }

    pub fn target(&self) -> &Vector {
        &self.target
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.len()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] == w[1])
    }

    /// `Σ kᵢ`, which equals `k·n` in the homogeneous case.
    pub fn total_skeleton_dim(&self) -> usize {
        self.parts.iter().map(|p| p.skeleton_dim).sum()
    }
}

/// Exact solution: `Σ λᵢ points[i] = target`, and `points[i]` is the convex
/// combination `coefficients[i]` of the vertices listed in `carriers[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionWitness {
    pub points: Vec<Vector>,
    pub carriers: Vec<Vec<usize>>,
    pub coefficients: Vec<Vec<Scalar>>,
    pub tuples_examined: usize,
    pub deterministic: bool,
}

impl DecompositionWitness {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("witness serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Every candidate tuple was examined and refuted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfeasibilityReport {
    pub tuples_examined: usize,
    /// Every refuted tuple carried a verified Farkas certificate.
    pub all_certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "status")]
pub enum Outcome {
    Witness(DecompositionWitness),
    Infeasible(InfeasibilityReport),
}

impl Outcome {
    pub fn witness(&self) -> Option<&DecompositionWitness> {
        match self {
            Outcome::Witness(w) => Some(w),
            Outcome::Infeasible(_) => None,
        }
    }

    pub fn tuples_examined(&self) -> usize {
        match self {
            Outcome::Witness(w) => w.tuples_examined,
            Outcome::Infeasible(r) => r.tuples_examined,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    #[default]
    Direct,
    /// Split `n = a·b` with `a` the largest prime factor and recurse.
    Factored,
}

impl std::str::FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Strategy::Direct),
            "factored" => Ok(Strategy::Factored),
            other => Err(Error::InvalidRequest(format!("unknown strategy {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Split each enumeration level across worker threads. Any valid witness
    /// may be returned and it is labelled nondeterministic.
    pub parallel: bool,
    /// Enumerate unordered multisets of faces when all parts are identical.
    pub symmetry_pruning: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            parallel: false,
            symmetry_pruning: true,
        }
    }
}

/// Decomposes with default (sequential, deterministic) options.
pub fn decompose(req: &DecompositionRequest<'_>, strategy: Strategy) -> Result<Outcome> {
    decompose_with(req, strategy, SearchOptions::default())
}

pub fn decompose_with(
    req: &DecompositionRequest<'_>,
    strategy: Strategy,
    options: SearchOptions,
) -> Result<Outcome> {
    match strategy {
        Strategy::Direct => direct::decompose_direct(req, options),
        Strategy::Factored => factored::decompose_factored(req, options),
    }
}

/// Heterogeneous skeleton dimensions and weights; same search as the
/// direct strategy, with no existence guarantee.
pub fn decompose_general(req: &DecompositionRequest<'_>) -> Result<Outcome> {
    direct::decompose_direct(req, SearchOptions::default())
}
