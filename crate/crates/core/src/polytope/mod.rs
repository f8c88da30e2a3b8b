//! Polytopes given by vertex lists: facets, face lattice, membership and
//! carrier faces.
//!
//! Facets are found by brute force over affinely independent subsets of the
//! input points, computed in intrinsic coordinates of the affine hull so
//! that lower-dimensional polytopes (a point, a segment in the plane, a face
//! of a larger polytope) are handled the same way as full-dimensional ones.

mod lattice;

use std::collections::{BTreeSet, HashSet};
use std::path::Path;

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use lattice::{Face, FaceId, FaceLattice};

use crate::error::{Error, Result};
use crate::exact_math::{affine_hull, solve_linear, AffineSubspace, Matrix, Scalar, Vector};
use crate::lp::{self, StandardLP};

/// Facet inequality `normal · x ≤ offset`, valid on the affine hull.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vector,
    pub offset: Scalar,
    pub vertex_ids: Vec<usize>,
}

impl Facet {
    pub fn slack(&self, x: &Vector) -> Scalar {
        &self.offset - &self.normal.dot(x)
    }
}

/// On-disk polytope description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeFile {
    #[serde(default)]
    pub name: String,
    pub vertices: Vec<Vector>,
}

#[derive(Clone, Debug)]
pub struct Polytope {
    name: String,
    vertices: Vec<Vector>,
    facets: Vec<Facet>,
    dim: usize,
    hull: AffineSubspace,
    lattice: FaceLattice,
}

/// Scales to the primitive integer vector on the same ray.
fn primitive(normal: Vec<Scalar>, offset: Scalar) -> (Vector, Scalar) {
    let all = || normal.iter().chain(std::iter::once(&offset));
    let lcm = all().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let gcd = all().fold(BigInt::zero(), |acc, x| acc.gcd(x.numer()));
    if gcd.is_zero() {
        return (Vector::new(normal), offset);
    }
    let factor = Scalar::from_rational(num_rational::BigRational::new(lcm, gcd.abs()));
    (
        Vector::new(normal.iter().map(|x| x * &factor).collect()),
        &offset * &factor,
    )
}

/// Supporting hyperplanes of a full-dimensional point set in `R^m`, as
/// `(a, β, tight)` with `a·c ≤ β` valid on all points and `tight` the points
/// attaining equality.
fn intrinsic_facets(coords: &[Vec<Scalar>], m: usize) -> Vec<(Vec<Scalar>, Scalar, FixedBitSet)> {
    let np = coords.len();
    let mut found: Vec<(Vec<Scalar>, Scalar, FixedBitSet)> = Vec::new();
    for subset in (0..np).combinations(m) {
        // A hyperplane through m independent points already lying in a known
        // facet is that facet.
        if found
            .iter()
            .any(|(_, _, tight)| subset.iter().all(|&i| tight.contains(i)))
        {
            continue;
        }
        let rows: Vec<Vec<Scalar>> = subset
            .iter()
            .map(|&i| {
                coords[i]
                    .iter()
                    .cloned()
                    .chain(std::iter::once(-Scalar::one()))
                    .collect()
            })
            .collect();
        let a = Matrix::from_rows(rows, m + 1).expect("uniform rows");
        let sol = solve_linear(&a, &Vector::zeros(m))
            .expect("shapes agree")
            .expect("homogeneous systems are consistent");
        if sol.dim() != 1 {
            continue;
        }
        let h = sol.nullspace_basis[0].coords();
        let (normal, beta) = (&h[..m], &h[m]);
        let values: Vec<Scalar> = coords
            .iter()
            .map(|c| normal.iter().zip(c).map(|(x, y)| x * y).sum::<Scalar>() - beta)
            .collect();
        let sign = if values.iter().all(|v| !v.is_positive()) {
            Scalar::one()
        } else if values.iter().all(|v| !v.is_negative()) {
            -Scalar::one()
        } else {
            continue;
        };
        let mut tight = FixedBitSet::with_capacity(np);
        for (i, v) in values.iter().enumerate() {
            if v.is_zero() {
                tight.insert(i);
            }
        }
        found.push((
            normal.iter().map(|x| x * &sign).collect(),
            beta * &sign,
            tight,
        ));
    }
    found
}

impl Polytope {
    /// Convex hull of `points`. Non-vertices and duplicates are dropped; the
    /// surviving vertices keep their input order.
    pub fn build(points: &[Vector]) -> Result<Self> {
        Self::build_named("", points)
    }

    pub fn build_named(name: &str, points: &[Vector]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput("polytope needs at least one point"));
        }
        let ambient = points[0].dim();
        for p in points {
            p.check_dim(ambient)?;
        }
        let mut seen = HashSet::new();
        let points: Vec<Vector> = points
            .iter()
            .filter(|p| seen.insert((*p).clone()))
            .cloned()
            .collect();
        let np = points.len();

        let input_hull = affine_hull(&points)?;
        let m = input_hull.dim();
        let coords: Vec<Vec<Scalar>> = points
            .iter()
            .map(|p| {
                input_hull
                    .coordinates(p)
                    .expect("point lies in its own hull")
            })
            .collect();

        let raw = if m == 0 {
            Vec::new()
        } else {
            intrinsic_facets(&coords, m)
        };

        // A point is a vertex iff the facets through it meet in that point alone.
        let is_vertex: Vec<bool> = (0..np)
            .map(|i| {
                if m == 0 {
                    return true;
                }
                let mut meet = FixedBitSet::with_capacity(np);
                meet.insert_range(..);
                for (_, _, tight) in raw.iter().filter(|(_, _, t)| t.contains(i)) {
                    meet.intersect_with(tight);
                }
                meet.count_ones(..) == 1
            })
            .collect();
        let mut new_index = vec![usize::MAX; np];
        let mut vertices = Vec::new();
        for i in (0..np).filter(|&i| is_vertex[i]) {
            new_index[i] = vertices.len();
            vertices.push(points[i].clone());
        }
        let nv = vertices.len();

        // Ambient normal N with N·b_j = a_j on the hull directions.
        let basis = input_hull.direction_basis();
        let basis_matrix =
            Matrix::from_rows(basis.iter().map(|b| b.coords().to_vec()).collect(), ambient)?;
        let mut facets = Vec::with_capacity(raw.len());
        let mut incidence = Vec::with_capacity(raw.len());
        for (a, beta, tight) in raw {
            let n = solve_linear(&basis_matrix, &Vector::new(a))?
                .expect("independent directions give a consistent system")
                .particular;
            let offset = beta + n.dot(input_hull.base_point());
            let (normal, offset) = primitive(n.into_coords(), offset);
            let mut bits = FixedBitSet::with_capacity(nv);
            for i in tight.ones().filter(|&i| is_vertex[i]) {
                bits.insert(new_index[i]);
            }
            facets.push(Facet {
                normal,
                offset,
                vertex_ids: bits.ones().collect(),
            });
            incidence.push(bits);
        }

        let hull = affine_hull(&vertices)?;
        let lattice = FaceLattice::from_incidence(&vertices, incidence);
        let polytope = Polytope {
            name: name.to_string(),
            vertices,
            facets,
            dim: m,
            hull,
            lattice,
        };
        debug_assert!(polytope.euler_relation_holds(), "Euler relation fails");
        Ok(polytope)
    }

    pub fn from_file_data(file: &PolytopeFile) -> Result<Self> {
        Self::build_named(&file.name, &file.vertices)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        Self::from_file_data(&serde_json::from_str(json)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_file_data(&self) -> PolytopeFile {
        PolytopeFile {
            name: self.name.clone(),
            vertices: self.vertices.clone(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Vector {
        &self.vertices[i]
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Intrinsic dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.hull.ambient_dim()
    }

    pub fn hull(&self) -> &AffineSubspace {
        &self.hull
    }

    pub fn lattice(&self) -> &FaceLattice {
        &self.lattice
    }

    pub fn face(&self, id: FaceId) -> &Face {
        self.lattice.face(id)
    }

    /// The polytope itself as a lattice element.
    pub fn full_face(&self) -> &Face {
        self.lattice
            .faces()
            .last()
            .expect("lattice holds the full face")
    }

    /// `(f_0, …, f_{d-1})`.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..self.dim as isize)
            .map(|j| self.lattice.faces_of_dim(j).count())
            .collect()
    }

    /// `Σ (−1)^i f_i = 1 − (−1)^d` over `i < d`.
    pub fn euler_relation_holds(&self) -> bool {
        let alternating: i64 = self
            .f_vector()
            .iter()
            .enumerate()
            .map(|(i, &f)| if i % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum();
        alternating == if self.dim.is_multiple_of(2) { 0 } else { 2 }
    }

    /// Faces of dimension `0..=k` in lattice order.
    pub fn faces_of_dim_at_most(&self, k: usize) -> Vec<&Face> {
        self.lattice
            .faces()
            .iter()
            .filter(|f| f.dim() >= 0 && f.dim() as usize <= k)
            .collect()
    }

    /// Is `face` an element of this polytope's lattice (same vertex set and
    /// same geometry)?
    pub fn owns(&self, face: &Face) -> bool {
        self.lattice
            .find(face.vertex_ids())
            .is_some_and(|f| f.id() == face.id() && f.hull() == face.hull())
    }

    pub fn contains(&self, x: &Vector) -> Result<bool> {
        x.check_dim(self.ambient_dim())?;
        Ok(self.hull.contains(x) && self.facets.iter().all(|f| !f.slack(x).is_negative()))
    }

    /// The inclusion-minimal face containing `p`: the meet of all facets tight
    /// at `p`.
    pub fn carrier_face(&self, p: &Vector) -> Result<&Face> {
        if !self.contains(p)? {
            return Err(Error::NotInPolytope);
        }
        let mut meet = FixedBitSet::with_capacity(self.vertices.len());
        meet.insert_range(..);
        for (facet, bits) in self.facets.iter().zip(self.lattice.incidence()) {
            if facet.slack(p).is_zero() {
                meet.intersect_with(bits);
            }
        }
        Ok(self
            .lattice
            .find_set(&meet)
            .expect("intersections of facets are lattice elements"))
    }

    /// Convex coefficients over `face`'s vertices reproducing `x`, if `x`
    /// lies in the face.
    pub fn face_membership(&self, face: &Face, x: &Vector) -> Result<Option<Vec<Scalar>>> {
        x.check_dim(self.ambient_dim())?;
        if face.is_empty() {
            return Ok(None);
        }
        let ids = face.vertex_ids();
        let d = self.ambient_dim();
        let mut rows: Vec<Vec<Scalar>> = (0..d)
            .map(|c| ids.iter().map(|&v| self.vertices[v][c].clone()).collect())
            .collect();
        rows.push(vec![Scalar::one(); ids.len()]);
        let mut rhs = x.coords().to_vec();
        rhs.push(Scalar::one());
        let lp = StandardLP::new(Matrix::from_rows(rows, ids.len())?, Vector::new(rhs))?;
        Ok(lp::feasible(&lp).point.map(Vector::into_coords))
    }

    /// Rebuilds the polytope with every vertex shifted by `shift`.
    pub fn translated(&self, shift: &Vector) -> Result<Polytope> {
        shift.check_dim(self.ambient_dim())?;
        let moved: Vec<Vector> = self.vertices.iter().map(|v| v.add(shift)).collect();
        Polytope::build_named(&self.name, &moved)
    }

    /// Average of the vertices; lies in the relative interior.
    pub fn vertex_centroid(&self) -> Vector {
        let w = Scalar::new(1, self.vertices.len() as i64);
        Vector::combination(self.ambient_dim(), self.vertices.iter().map(|v| (&w, v)))
    }

    /// Order-independent description: sorted vertex coordinates and, per
    /// facet, the sorted coordinates of its vertices.
    pub fn canonical_form(&self) -> (Vec<Vector>, BTreeSet<Vec<Vector>>) {
        let mut verts = self.vertices.clone();
        verts.sort();
        let facets = self
            .facets
            .iter()
            .map(|f| {
                let mut vs: Vec<Vector> = f
                    .vertex_ids
                    .iter()
                    .map(|&i| self.vertices[i].clone())
                    .collect();
                vs.sort();
                vs
            })
            .collect();
        (verts, facets)
    }
}
