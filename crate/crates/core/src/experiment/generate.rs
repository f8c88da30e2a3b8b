use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_math::{Scalar, Vector};
use crate::polytope::Polytope;

/// Seeded generator used for every random draw (xoshiro256++, seeded
/// through SplitMix64 by `seed_from_u64`).
pub type ExperimentRng = Xoshiro256PlusPlus;

pub fn rng_for(seed: u64) -> ExperimentRng {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    Simplex,
    Cube,
    CrossPolytope,
    RandomHull,
}

impl Generator {
    pub const ALL: [Generator; 4] = [
        Generator::Simplex,
        Generator::Cube,
        Generator::CrossPolytope,
        Generator::RandomHull,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Generator::Simplex => "simplex",
            Generator::Cube => "cube",
            Generator::CrossPolytope => "cross_polytope",
            Generator::RandomHull => "random_hull",
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Generator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Generator::ALL
            .into_iter()
            .find(|g| g.as_str() == s)
            .ok_or_else(|| Error::InvalidExperiment(format!("unknown generator {s:?}")))
    }
}

fn simplex_points(dim: usize) -> Vec<Vector> {
    std::iter::once(Vector::zeros(dim))
        .chain((0..dim).map(|i| Vector::unit(dim, i)))
        .collect()
}

fn cube_points(dim: usize) -> Vec<Vector> {
    (0..1usize << dim)
        .map(|mask| {
            Vector::new(
                (0..dim)
                    .map(|i| Scalar::from(if mask >> i & 1 == 1 { 1 } else { -1 }))
                    .collect(),
            )
        })
        .collect()
}

fn cross_points(dim: usize) -> Vec<Vector> {
    (0..dim)
        .flat_map(|i| {
            let e = Vector::unit(dim, i);
            let minus = e.scale(&-Scalar::one());
            [e, minus]
        })
        .collect()
}

/// Coordinates `m/1000` with `m` uniform in `[-1000, 1000]`.
pub fn random_coordinate(rng: &mut ExperimentRng) -> Scalar {
    Scalar::new(rng.random_range(-1000i64..=1000), 1000)
}

/// Number of points drawn for a random hull in dimension `dim`.
pub fn random_hull_size(dim: usize) -> usize {
    dim + 4
}

/// Polytope of intrinsic dimension `dim`. Only `RandomHull` consumes the
/// seed; degenerate draws are redrawn from the same stream.
pub fn generate(generator: Generator, dim: usize, seed: u64) -> Result<Polytope> {
    if dim == 0 {
        return Err(Error::InvalidExperiment(
            "dimension must be at least 1".into(),
        ));
    }
    let name = format!("{generator}-{dim}");
    match generator {
        Generator::Simplex => Polytope::build_named(&name, &simplex_points(dim)),
        Generator::Cube => Polytope::build_named(&name, &cube_points(dim)),
        Generator::CrossPolytope => Polytope::build_named(&name, &cross_points(dim)),
        Generator::RandomHull => {
            let mut rng = rng_for(seed);
            loop {
                let pts: Vec<Vector> = (0..random_hull_size(dim))
                    .map(|_| Vector::new((0..dim).map(|_| random_coordinate(&mut rng)).collect()))
                    .collect();
                let p = Polytope::build_named(&format!("{name}-seed{seed}"), &pts)?;
                if p.dim() == dim {
                    return Ok(p);
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetKind {
    /// Average of the vertices.
    Barycenter,
    /// Strictly positive random combination of all vertices.
    Interior,
    /// Strictly positive random combination of one random facet's vertices.
    Boundary,
}

impl TargetKind {
    pub const ALL: [TargetKind; 3] = [
        TargetKind::Barycenter,
        TargetKind::Interior,
        TargetKind::Boundary,
    ];
}

impl FromStr for TargetKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "barycenter" => Ok(TargetKind::Barycenter),
            "interior" => Ok(TargetKind::Interior),
            "boundary" => Ok(TargetKind::Boundary),
            other => Err(Error::InvalidExperiment(format!(
                "unknown target kind {other:?}"
            ))),
        }
    }
}

fn positive_combination(polytope: &Polytope, ids: &[usize], rng: &mut ExperimentRng) -> Vector {
    let raw: Vec<i64> = ids.iter().map(|_| rng.random_range(1i64..=1000)).collect();
    let total: i64 = raw.iter().sum();
    let weights: Vec<Scalar> = raw.iter().map(|&w| Scalar::new(w, total)).collect();
    Vector::combination(
        polytope.ambient_dim(),
        weights.iter().zip(ids.iter().map(|&i| polytope.vertex(i))),
    )
}

pub fn pick_target(polytope: &Polytope, kind: TargetKind, rng: &mut ExperimentRng) -> Vector {
    match kind {
        TargetKind::Barycenter => polytope.vertex_centroid(),
        TargetKind::Interior => {
            let all: Vec<usize> = (0..polytope.vertices().len()).collect();
            positive_combination(polytope, &all, rng)
        }
        TargetKind::Boundary => {
            if polytope.facets().is_empty() {
                return polytope.vertex(0).clone();
            }
            let facet = &polytope.facets()[rng.random_range(0..polytope.facets().len())];
            positive_combination(polytope, &facet.vertex_ids, rng)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::testing::assert_lattice_invariants;

    #[test]
    fn standard_families() {
        let s = generate(Generator::Simplex, 2, 0).unwrap();
        assert_eq!(s.vertices().len(), 3);
        assert_eq!(s.f_vector(), vec![3, 3]);
        assert_eq!(
            generate(Generator::CrossPolytope, 3, 0).unwrap().f_vector(),
            vec![6, 12, 8]
        );
        assert_eq!(
            generate(Generator::Cube, 3, 0).unwrap().f_vector(),
            vec![8, 12, 6]
        );
        assert_eq!(
            generate(Generator::Simplex, 4, 0).unwrap().f_vector(),
            vec![5, 10, 10, 5]
        );
        for g in Generator::ALL {
            for d in 1..=4 {
                let p = generate(g, d, 3).unwrap();
                assert_eq!(p.dim(), d);
                assert_lattice_invariants(&p);
            }
        }
        assert!(generate(Generator::Cube, 0, 0).is_err());
    }

    #[test]
    fn random_hull_is_seeded() {
        let a = generate(Generator::RandomHull, 3, 42).unwrap();
        let b = generate(Generator::RandomHull, 3, 42).unwrap();
        assert_eq!(a.vertices(), b.vertices());
        assert_eq!(a.dim(), 3);
        assert_lattice_invariants(&a);
        let c = generate(Generator::RandomHull, 3, 43).unwrap();
        assert_ne!(a.vertices(), c.vertices());
    }

    #[test]
    fn targets_land_where_promised() {
        let p = generate(Generator::RandomHull, 3, 7).unwrap();
        let mut rng = rng_for(1);
        let full = p.full_face().id();
        assert_eq!(
            p.carrier_face(&pick_target(&p, TargetKind::Barycenter, &mut rng))
                .unwrap()
                .id(),
            full
        );
        assert_eq!(
            p.carrier_face(&pick_target(&p, TargetKind::Interior, &mut rng))
                .unwrap()
                .id(),
            full
        );
        let b = pick_target(&p, TargetKind::Boundary, &mut rng);
        assert_eq!(p.carrier_face(&b).unwrap().dim(), 2);
    }
}
