#![allow(dead_code)]

use itertools::Itertools;
use rand::Rng;
use skelbary::exact_math::solve_linear;
use skelbary::experiment::{rng_for, ExperimentRng};
use skelbary::lp::StandardLP;
use skelbary::{Matrix, Polytope, Scalar, Vector};

pub fn v(xs: &[i64]) -> Vector {
    Vector::from_i64s(xs)
}

pub fn rng(seed: u64) -> ExperimentRng {
    rng_for(seed)
}

pub fn rational(rng: &mut ExperimentRng, lo: i64, hi: i64, den: i64) -> Scalar {
    Scalar::new(rng.random_range(lo * den..=hi * den), den)
}

pub fn random_point(rng: &mut ExperimentRng, dim: usize, lo: i64, hi: i64, den: i64) -> Vector {
    Vector::new((0..dim).map(|_| rational(rng, lo, hi, den)).collect())
}

/// Builds and checks the Euler relation, so every lattice built by the
/// integration tests is covered.
pub fn built(points: &[Vector]) -> Polytope {
    let p = Polytope::build(points).expect("valid point set");
    assert!(
        p.euler_relation_holds(),
        "Euler relation on {:?}",
        p.f_vector()
    );
    p
}

/// Strictly positive convex weights with denominator-free draws.
pub fn positive_weights(rng: &mut ExperimentRng, len: usize) -> Vec<Scalar> {
    let raw: Vec<i64> = (0..len).map(|_| rng.random_range(1..=100)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|w| Scalar::new(w, total)).collect()
}

pub fn combination(p: &Polytope, ids: &[usize], weights: &[Scalar]) -> Vector {
    Vector::combination(
        p.ambient_dim(),
        weights.iter().zip(ids.iter().map(|&i| p.vertex(i))),
    )
}

/// Decides `{A x = b, x ≥ 0} ≠ ∅` by trying every set of linearly
/// independent columns: a nonempty polyhedron in standard form has a basic
/// feasible solution.
pub fn basis_enumeration_feasible(lp: &StandardLP) -> bool {
    let a = lp.matrix();
    let (m, n) = (a.nrows(), a.ncols());
    if lp.rhs().is_zero() {
        return true;
    }
    for size in 1..=m.min(n) {
        for cols in (0..n).combinations(size) {
            let rows = (0..m)
                .map(|r| cols.iter().map(|&c| a.get(r, c).clone()).collect())
                .collect();
            let sub = Matrix::from_rows(rows, size).unwrap();
            let Some(sol) = solve_linear(&sub, lp.rhs()).unwrap() else {
                continue;
            };
            if sol.dim() == 0 && sol.particular.iter().all(|x| !x.is_negative()) {
                return true;
            }
        }
    }
    false
}

/// Small random system with integer entries in `[-3, 3]`.
pub fn random_lp(rng: &mut ExperimentRng) -> StandardLP {
    let m = rng.random_range(1..=3);
    let n = rng.random_range(1..=5);
    let rows = (0..m)
        .map(|_| {
            (0..n)
                .map(|_| Scalar::from(rng.random_range(-3i64..=3)))
                .collect()
        })
        .collect();
    let b = Vector::new(
        (0..m)
            .map(|_| Scalar::from(rng.random_range(-3i64..=3)))
            .collect(),
    );
    StandardLP::new(Matrix::from_rows(rows, n).unwrap(), b).unwrap()
}

pub fn binomial(n: usize, k: usize) -> u128 {
    (0..k as u128).fold(1, |acc, i| acc * (n as u128 - i) / (i + 1))
}

/// Distinct points on the moment curve `(t, t², t³, …)`, so every one is a
/// vertex of their hull.
pub fn moment_curve(rng: &mut ExperimentRng, count: usize, dim: usize) -> Vec<Vector> {
    let mut ts: Vec<Scalar> = Vec::new();
    while ts.len() < count {
        let t = rational(rng, -2, 2, 7);
        if !ts.contains(&t) {
            ts.push(t);
        }
    }
    ts.iter()
        .map(|t| {
            let mut x = Vec::with_capacity(dim);
            let mut power = t.clone();
            for _ in 0..dim {
                x.push(power.clone());
                power = &power * t;
            }
            Vector::new(x)
        })
        .collect()
}
