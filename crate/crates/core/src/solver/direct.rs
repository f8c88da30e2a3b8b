use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rayon::prelude::*;

use super::enumerate::{Candidate, TupleSpace};
use super::{
    DecompositionRequest, DecompositionWitness, InfeasibilityReport, Outcome, SearchOptions,
};
use crate::error::Result;
use crate::exact_math::{Matrix, Scalar, Vector};
use crate::lp::{self, StandardLP};
use crate::polytope::{FaceId, Polytope};

struct Solution {
    points: Vec<Vector>,
    carriers: Vec<Vec<usize>>,
    coefficients: Vec<Vec<Scalar>>,
}

enum Verdict {
    Feasible(Solution),
    Refuted { certified: bool },
}

/// Per-face coordinate bounds, indexed by face id.
struct Bounds {
    lo: Vec<Vec<Scalar>>,
    hi: Vec<Vec<Scalar>>,
}

struct Search<'r> {
    polytope: &'r Polytope,
    target: &'r Vector,
    weights: Vec<Scalar>,
    space: TupleSpace,
    bounds: Bounds,
}

fn tuple_space(req: &DecompositionRequest<'_>, options: SearchOptions) -> Result<TupleSpace> {
    let polytope = req.polytope();
    let carrier = polytope.carrier_face(req.target())?;
    let lists = req
        .parts()
        .iter()
        .map(|part| {
            polytope
                .faces_of_dim_at_most(part.skeleton_dim)
                .into_iter()
                .filter(|f| f.is_subface_of(carrier))
                .map(|f| Candidate {
                    id: f.id(),
                    dim: f.dim() as usize,
                })
                .collect()
        })
        .collect();
    let symmetric = options.symmetry_pruning && req.is_homogeneous();
    Ok(TupleSpace::new(lists, symmetric))
}

/// Worst-case number of tuples the direct strategy would examine.
pub fn enumeration_size(req: &DecompositionRequest<'_>, options: SearchOptions) -> Result<u128> {
    Ok(tuple_space(req, options)?.size())
}

impl<'r> Search<'r> {
    fn new(req: &'r DecompositionRequest<'r>, options: SearchOptions) -> Result<Self> {
        let polytope = req.polytope();
        let space = tuple_space(req, options)?;
        let d = polytope.ambient_dim();
        let (mut lo, mut hi) = (Vec::new(), Vec::new());
        for face in polytope.lattice().faces() {
            let (mut l, mut h) = (Vec::with_capacity(d), Vec::with_capacity(d));
            if !face.is_empty() {
                for c in 0..d {
                    let coords = face.vertex_ids().iter().map(|&v| &polytope.vertex(v)[c]);
                    l.push(coords.clone().min().expect("nonempty face").clone());
                    h.push(coords.max().expect("nonempty face").clone());
                }
            }
            lo.push(l);
            hi.push(h);
        }
        Ok(Search {
            polytope,
            target: req.target(),
            weights: req.parts().iter().map(|p| p.weight.clone()).collect(),
            space,
            bounds: Bounds { lo, hi },
        })
    }

    fn n(&self) -> usize {
        self.weights.len()
    }

    /// Rows `0..n` say each part's coefficients sum to one; rows `n..n+d`
    /// are the weighted barycenter equation. Columns run over `(part, vertex
    /// of that part's face)`.
    fn system(&self, faces: &[FaceId]) -> StandardLP {
        let n = self.n();
        let d = self.polytope.ambient_dim();
        let cols: usize = faces
            .iter()
            .map(|&f| self.polytope.face(f).vertex_ids().len())
            .sum();
        let mut a = Matrix::zeros(n + d, cols);
        let mut col = 0;
        for (i, &f) in faces.iter().enumerate() {
            for &v in self.polytope.face(f).vertex_ids() {
                a.set(i, col, Scalar::one());
                for (c, x) in self.polytope.vertex(v).iter().enumerate() {
                    a.set(n + c, col, &self.weights[i] * x);
                }
                col += 1;
            }
        }
        let b = std::iter::repeat_n(Scalar::one(), n)
            .chain(self.target.iter().cloned())
            .collect();
        StandardLP::new(a, Vector::new(b)).expect("rows match rhs")
    }

    /// Checks `yᵀA ≤ 0`, `yᵀb > 0` for the tuple's system without building it.
    fn farkas_holds(&self, faces: &[FaceId], y: &[Scalar]) -> bool {
        let n = self.n();
        let rhs = y[..n].iter().sum::<Scalar>()
            + y[n..]
                .iter()
                .zip(self.target.iter())
                .map(|(a, b)| a * b)
                .sum::<Scalar>();
        if !rhs.is_positive() {
            return false;
        }
        faces.iter().enumerate().all(|(i, &f)| {
            self.polytope.face(f).vertex_ids().iter().all(|&v| {
                let dot: Scalar = y[n..]
                    .iter()
                    .zip(self.polytope.vertex(v).iter())
                    .map(|(a, b)| a * b)
                    .sum();
                !(&y[i] + &(&self.weights[i] * &dot)).is_positive()
            })
        })
    }

    /// Componentwise `Σ λᵢ min σᵢ ≤ p ≤ Σ λᵢ max σᵢ`. A violated coordinate
    /// yields a Farkas vector directly.
    fn interval_refutation(&self, faces: &[FaceId]) -> Option<Vec<Scalar>> {
        let n = self.n();
        let d = self.polytope.ambient_dim();
        for c in 0..d {
            let lo: Scalar = faces
                .iter()
                .zip(&self.weights)
                .map(|(f, w)| w * &self.bounds.lo[f.0][c])
                .sum();
            let sign = if lo > self.target[c] {
                Scalar::one()
            } else {
                let hi: Scalar = faces
                    .iter()
                    .zip(&self.weights)
                    .map(|(f, w)| w * &self.bounds.hi[f.0][c])
                    .sum();
                if hi < self.target[c] {
                    -Scalar::one()
                } else {
                    continue;
                }
            };
            let bound = if sign.is_positive() {
                &self.bounds.lo
            } else {
                &self.bounds.hi
            };
            let mut y: Vec<Scalar> = faces
                .iter()
                .zip(&self.weights)
                .map(|(f, w)| &(w * &bound[f.0][c]) * &sign)
                .collect();
            y.extend((0..d).map(|j| if j == c { -&sign } else { Scalar::zero() }));
            debug_assert_eq!(y.len(), n + d);
            return Some(y);
        }
        None
    }

    fn examine(&self, faces: &[FaceId]) -> Verdict {
        if let Some(y) = self.interval_refutation(faces) {
            return Verdict::Refuted {
                certified: self.farkas_holds(faces, &y),
            };
        }
        let system = self.system(faces);
        let result = lp::feasible(&system);
        let Some(mu) = result.point else {
            let certified = result
                .certificate
                .as_ref()
                .is_some_and(|y| self.farkas_holds(faces, y.coords()));
            return Verdict::Refuted { certified };
        };
        let d = self.polytope.ambient_dim();
        let mut offset = 0;
        let mut solution = Solution {
            points: Vec::with_capacity(faces.len()),
            carriers: Vec::with_capacity(faces.len()),
            coefficients: Vec::with_capacity(faces.len()),
        };
        for &f in faces {
            let ids = self.polytope.face(f).vertex_ids();
            let coeffs = mu.coords()[offset..offset + ids.len()].to_vec();
            offset += ids.len();
            let point = Vector::combination(
                d,
                coeffs
                    .iter()
                    .zip(ids.iter().map(|&v| self.polytope.vertex(v))),
            );
            solution.points.push(point);
            solution.carriers.push(ids.to_vec());
            solution.coefficients.push(coeffs);
        }
        Verdict::Feasible(solution)
    }

    fn run_sequential(&self) -> Outcome {
        let mut examined = 0usize;
        let mut all_certified = true;
        for level in self.space.levels() {
            let found = self.space.visit_level(level, &mut |faces| {
                examined += 1;
                match self.examine(faces) {
                    Verdict::Feasible(s) => ControlFlow::Break(s),
                    Verdict::Refuted { certified } => {
                        all_certified &= certified;
                        ControlFlow::Continue(())
                    }
                }
            });
            if let ControlFlow::Break(s) = found {
                return witness(s, examined, true);
            }
        }
        Outcome::Infeasible(InfeasibilityReport {
            tuples_examined: examined,
            all_certified,
        })
    }

    fn run_parallel(&self) -> Outcome {
        let examined = AtomicUsize::new(0);
        let all_certified = AtomicBool::new(true);
        for level in self.space.levels() {
            let tuples = self.space.collect_level(level);
            let found = tuples.par_iter().find_map_any(|faces| {
                examined.fetch_add(1, Ordering::Relaxed);
                match self.examine(faces) {
                    Verdict::Feasible(s) => Some(s),
                    Verdict::Refuted { certified } => {
                        if !certified {
                            all_certified.store(false, Ordering::Relaxed);
                        }
                        None
                    }
                }
            });
            if let Some(s) = found {
                return witness(s, examined.into_inner(), false);
            }
        }
        Outcome::Infeasible(InfeasibilityReport {
            tuples_examined: examined.into_inner(),
            all_certified: all_certified.into_inner(),
        })
    }
}

fn witness(s: Solution, tuples_examined: usize, deterministic: bool) -> Outcome {
    Outcome::Witness(DecompositionWitness {
        points: s.points,
        carriers: s.carriers,
        coefficients: s.coefficients,
        tuples_examined,
        deterministic,
    })
}

pub(crate) fn decompose_direct(
    req: &DecompositionRequest<'_>,
    options: SearchOptions,
) -> Result<Outcome> {
    let search = Search::new(req, options)?;
    Ok(if options.parallel {
        search.run_parallel()
    } else {
        search.run_sequential()
    })
}
