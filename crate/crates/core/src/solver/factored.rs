//! Prime-factor iteration: for `n = a·b` with `a` prime, first write `p` as
//! the barycenter of `a` points on the `min(k·b, d)`-skeleton, then split each
//! of those into `b` points on the `k`-skeleton inside its own carrier face.

use super::direct::decompose_direct;
use super::{DecompositionRequest, DecompositionWitness, Outcome, SearchOptions};
use crate::error::{Error, Result};
use crate::exact_math::Vector;
use crate::polytope::Polytope;

fn largest_prime_factor(mut n: usize) -> usize {
    let mut largest = 1;
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p) {
            largest = p;
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        n
    } else {
        largest
    }
}

fn is_composite(n: usize) -> bool {
    n >= 4 && largest_prime_factor(n) != n
}

pub(crate) fn decompose_factored(
    req: &DecompositionRequest<'_>,
    options: SearchOptions,
) -> Result<Outcome> {
    if !req.is_homogeneous() {
        return Err(Error::InvalidRequest(
            "factored strategy needs homogeneous parts".into(),
        ));
    }
    let n = req.n();
    if !is_composite(n) {
        return Err(Error::InvalidRequest(format!(
            "factored strategy needs composite n, got {n}"
        )));
    }
    let polytope = req.polytope();
    let k = req.parts()[0].skeleton_dim;
    let carrier_dim = polytope.carrier_face(req.target())?.dim() as usize;
    if k * n < carrier_dim {
        return Err(Error::InvalidRequest(format!(
            "factored strategy needs k·n ≥ {carrier_dim}, got {}",
            k * n
        )));
    }
    factor_stage(polytope, req.target(), n, k, options)
}

fn factor_stage(
    polytope: &Polytope,
    target: &Vector,
    n: usize,
    k: usize,
    options: SearchOptions,
) -> Result<Outcome> {
    let sub = |target: &Vector, n: usize, k: usize| -> Result<Outcome> {
        if is_composite(n) {
            factor_stage(polytope, target, n, k, options)
        } else {
            let req = DecompositionRequest::homogeneous(polytope, target.clone(), n, k)?;
            decompose_direct(&req, options)
        }
    };

    let outer = largest_prime_factor(n);
    let inner = n / outer;
    let outer_k = (k * inner).min(polytope.dim());
    let stage = match sub(target, outer, outer_k)? {
        Outcome::Witness(w) => w,
        infeasible => return Ok(infeasible),
    };

    let mut flat = DecompositionWitness {
        points: Vec::with_capacity(n),
        carriers: Vec::with_capacity(n),
        coefficients: Vec::with_capacity(n),
        tuples_examined: stage.tuples_examined,
        deterministic: stage.deterministic,
    };
    for q in &stage.points {
        match sub(q, inner, k)? {
            Outcome::Witness(w) => {
                flat.tuples_examined += w.tuples_examined;
                flat.deterministic &= w.deterministic;
                flat.points.extend(w.points);
                flat.carriers.extend(w.carriers);
                flat.coefficients.extend(w.coefficients);
            }
            Outcome::Infeasible(mut r) => {
                r.tuples_examined += flat.tuples_examined;
                return Ok(Outcome::Infeasible(r));
            }
        }
    }
    Ok(Outcome::Witness(flat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::testing::*;
    use crate::solver::{check_witness, decompose, enumeration_size, Strategy};

    #[test]
    fn prime_factors() {
        assert_eq!(largest_prime_factor(12), 3);
        assert_eq!(largest_prime_factor(4), 2);
        assert_eq!(largest_prime_factor(7), 7);
        assert!(is_composite(6) && is_composite(4) && is_composite(9));
        assert!(!is_composite(5) && !is_composite(1) && !is_composite(2));
    }

    #[test]
    fn square_center_with_four_edge_points() {
        let sq = Polytope::build(&square()).unwrap();
        let req = DecompositionRequest::homogeneous(&sq, v(&[0, 0]), 4, 1).unwrap();
        let f = decompose(&req, Strategy::Factored).unwrap();
        assert!(check_witness(&req, f.witness().unwrap()));
        let d = decompose(&req, Strategy::Direct).unwrap();
        assert!(check_witness(&req, d.witness().unwrap()));
    }

    #[test]
    fn cube_center_with_six_points_beats_worst_case() {
        let cube = Polytope::build(&cube_points(3)).unwrap();
        let req = DecompositionRequest::homogeneous(&cube, v(&[0, 0, 0]), 6, 1).unwrap();
        let out = decompose(&req, Strategy::Factored).unwrap();
        let w = out.witness().unwrap();
        assert!(check_witness(&req, w));
        let worst = enumeration_size(&req, SearchOptions::default()).unwrap();
        assert_eq!(worst, 177_100); // C(20 + 5, 6)
        assert!((w.tuples_examined as u128) < worst);
    }

    #[test]
    fn rejects_prime_or_heterogeneous() {
        let sq = Polytope::build(&square()).unwrap();
        let req = DecompositionRequest::homogeneous(&sq, v(&[0, 0]), 3, 1).unwrap();
        assert!(decompose(&req, Strategy::Factored).is_err());
        let mixed = DecompositionRequest::new(
            &sq,
            v(&[0, 0]),
            vec![
                crate::solver::Part::new(0, crate::Scalar::new(1, 4)),
                crate::solver::Part::new(1, crate::Scalar::new(1, 4)),
                crate::solver::Part::new(1, crate::Scalar::new(1, 4)),
                crate::solver::Part::new(1, crate::Scalar::new(1, 4)),
            ],
        )
        .unwrap();
        assert!(decompose(&mixed, Strategy::Factored).is_err());
    }
}
