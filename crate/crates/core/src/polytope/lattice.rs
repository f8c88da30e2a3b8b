use std::collections::{HashMap, HashSet};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::exact_math::{affine_hull, AffineSubspace, Vector};

/// Index of a face inside its polytope's lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FaceId(pub usize);

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A face of a polytope, identified by the vertices lying on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    id: FaceId,
    vertex_ids: Vec<usize>,
    members: FixedBitSet,
    dim: isize,
    hull: Option<AffineSubspace>,
}

impl Face {
    pub fn id(&self) -> FaceId {
        self.id
    }

    pub fn vertex_ids(&self) -> &[usize] {
        &self.vertex_ids
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    /// Intrinsic dimension; `-1` for the empty face.
    pub fn dim(&self) -> isize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_ids.is_empty()
    }

    /// Affine hull of the face; `None` only for the empty face.
    pub fn hull(&self) -> Option<&AffineSubspace> {
        self.hull.as_ref()
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.members.contains(v)
    }

    pub fn is_subface_of(&self, other: &Face) -> bool {
        self.members.is_subset(&other.members)
    }
}

/// All faces of a polytope, from the empty face up to the polytope itself,
/// ordered by dimension and then lexicographically by vertex ids.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    faces: Vec<Face>,
    /// Facet-vertex incidence, one bitset per facet.
    incidence: Vec<FixedBitSet>,
    by_vertices: HashMap<Vec<usize>, FaceId>,
}

impl FaceLattice {
    /// Closure of the facet vertex sets under intersection, plus the full
    /// vertex set and the empty set.
    pub(crate) fn from_incidence(vertices: &[Vector], incidence: Vec<FixedBitSet>) -> Self {
        let nv = vertices.len();
        let mut full = FixedBitSet::with_capacity(nv);
        full.insert_range(..);

        let mut sets: HashSet<FixedBitSet> = HashSet::new();
        sets.insert(full);
        sets.insert(FixedBitSet::with_capacity(nv));
        for facet in &incidence {
            let snapshot: Vec<FixedBitSet> = sets.iter().cloned().collect();
            for s in snapshot {
                let mut meet = s;
                meet.intersect_with(facet);
                sets.insert(meet);
            }
        }

        let mut faces: Vec<Face> = sets
            .into_iter()
            .map(|members| {
                let vertex_ids: Vec<usize> = members.ones().collect();
                let hull = (!vertex_ids.is_empty()).then(|| {
                    let pts: Vec<Vector> =
                        vertex_ids.iter().map(|&v| vertices[v].clone()).collect();
                    affine_hull(&pts).expect("face vertices share the ambient dimension")
                });
                let dim = hull.as_ref().map_or(-1, |h| h.dim() as isize);
                Face {
                    id: FaceId(0),
                    vertex_ids,
                    members,
                    dim,
                    hull,
                }
            })
            .collect();
        faces.sort_by(|a, b| (a.dim, &a.vertex_ids).cmp(&(b.dim, &b.vertex_ids)));
        for (i, f) in faces.iter_mut().enumerate() {
            f.id = FaceId(i);
        }
        let by_vertices = faces.iter().map(|f| (f.vertex_ids.clone(), f.id)).collect();
        FaceLattice {
            faces,
            incidence,
            by_vertices,
        }
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, id: FaceId) -> &Face {
        &self.faces[id.0]
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn incidence(&self) -> &[FixedBitSet] {
        &self.incidence
    }

    pub fn find(&self, vertex_ids: &[usize]) -> Option<&Face> {
        self.by_vertices.get(vertex_ids).map(|&id| self.face(id))
    }

    pub fn find_set(&self, members: &FixedBitSet) -> Option<&Face> {
        self.find(&members.ones().collect::<Vec<_>>())
    }

    pub fn faces_of_dim(&self, dim: isize) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(move |f| f.dim == dim)
    }

    /// Number of facets containing every vertex of `face`.
    pub fn facets_containing(&self, face: &Face) -> usize {
        self.incidence
            .iter()
            .filter(|facet| face.members.is_subset(facet))
            .count()
    }
}
