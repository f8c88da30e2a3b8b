mod common;

use std::collections::BTreeSet;

use common::*;
use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use skelbary::lp::{feasible, StandardLP};
use skelbary::{Matrix, Polytope, Scalar, Vector};

fn cross(a: &Vector, b: &Vector) -> Vector {
    Vector::new(vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ])
}

/// Facets of a full-dimensional 3-polytope as vertex-coordinate sets, by
/// testing the plane through every triple of input points.
fn brute_force_facets(points: &[Vector], vertices: &[Vector]) -> BTreeSet<Vec<Vector>> {
    let mut out = BTreeSet::new();
    for (i, j, k) in (0..points.len()).tuple_combinations() {
        let normal = cross(&points[j].sub(&points[i]), &points[k].sub(&points[i]));
        if normal.is_zero() {
            continue;
        }
        let sides: Vec<Scalar> = points
            .iter()
            .map(|p| normal.dot(&p.sub(&points[i])))
            .collect();
        let supporting =
            sides.iter().all(|s| !s.is_negative()) || sides.iter().all(|s| !s.is_positive());
        if !supporting {
            continue;
        }
        let mut tight: Vec<Vector> = points
            .iter()
            .zip(&sides)
            .filter(|(p, s)| s.is_zero() && vertices.contains(p))
            .map(|(p, _)| p.clone())
            .collect();
        tight.sort();
        out.insert(tight);
    }
    out
}

#[test]
fn facets_match_triple_enumeration() {
    for seed in 0..5 {
        let mut r = rng(seed);
        let sets = [
            moment_curve(&mut r, 10, 3),
            (0..10)
                .map(|_| random_point(&mut r, 3, -1, 1, 1000))
                .collect(),
        ];
        for points in sets {
            let p = built(&points);
            assert_eq!(p.dim(), 3);
            let (_, facets) = p.canonical_form();
            assert_eq!(
                facets,
                brute_force_facets(&points, p.vertices()),
                "seed {seed}"
            );
        }
    }
}

#[test]
fn moment_curve_points_are_all_vertices() {
    let mut r = rng(11);
    let p = built(&moment_curve(&mut r, 10, 3));
    assert_eq!(p.vertices().len(), 10);
    // cyclic polytope C(10, 3): 2·10 − 4 facets
    assert_eq!(p.f_vector(), vec![10, 24, 16]);
}

fn lp_membership(p: &Polytope, x: &Vector) -> bool {
    let d = p.ambient_dim();
    let nv = p.vertices().len();
    let mut rows: Vec<Vec<Scalar>> = (0..d)
        .map(|c| p.vertices().iter().map(|v| v[c].clone()).collect())
        .collect();
    rows.push(vec![Scalar::one(); nv]);
    let mut rhs = x.coords().to_vec();
    rhs.push(Scalar::one());
    let lp = StandardLP::new(Matrix::from_rows(rows, nv).unwrap(), Vector::new(rhs)).unwrap();
    let res = feasible(&lp);
    assert!(res.verify(&lp));
    res.is_feasible()
}

#[test]
fn containment_agrees_with_lp_membership() {
    let mut r = rng(5);
    let points: Vec<Vector> = (0..9)
        .map(|_| random_point(&mut r, 3, -1, 1, 1000))
        .collect();
    let p = built(&points);
    let lo: Vec<Scalar> = (0..3)
        .map(|c| p.vertices().iter().map(|v| v[c].clone()).min().unwrap())
        .collect();
    let hi: Vec<Scalar> = (0..3)
        .map(|c| p.vertices().iter().map(|v| v[c].clone()).max().unwrap())
        .collect();
    let mut inside = 0;
    for _ in 0..1000 {
        let x = Vector::new(
            (0..3)
                .map(|c| {
                    let t = Scalar::new(r.random_range(0..=1000), 1000);
                    &lo[c] + &(&t * &(&hi[c] - &lo[c]))
                })
                .collect(),
        );
        let c = p.contains(&x).unwrap();
        assert_eq!(c, lp_membership(&p, &x), "{x}");
        inside += c as usize;
    }
    assert!(inside > 0 && inside < 1000);
    for vtx in p.vertices() {
        assert!(p.contains(vtx).unwrap() && lp_membership(&p, vtx));
    }
}

#[test]
fn face_membership_reproduces_sampled_points() {
    let mut r = rng(8);
    let p = built(
        &(0..10)
            .map(|_| random_point(&mut r, 3, -1, 1, 1000))
            .collect::<Vec<_>>(),
    );
    let faces: Vec<_> = p
        .lattice()
        .faces()
        .iter()
        .filter(|f| !f.is_empty())
        .collect();
    for _ in 0..200 {
        let face = faces[r.random_range(0..faces.len())];
        let w = positive_weights(&mut r, face.vertex_ids().len());
        let x = combination(&p, face.vertex_ids(), &w);
        let coeffs = p
            .face_membership(face, &x)
            .unwrap()
            .expect("sampled from the face");
        assert!(coeffs.iter().all(|c| !c.is_negative()));
        assert_eq!(coeffs.iter().sum::<Scalar>(), Scalar::one());
        assert_eq!(combination(&p, face.vertex_ids(), &coeffs), x);
        // the sampled point is in the relative interior of `face`
        assert_eq!(p.carrier_face(&x).unwrap().id(), face.id());
    }
    // a proper face does not hold the centroid
    let c = p.vertex_centroid();
    for face in faces.iter().filter(|f| f.dim() < 3) {
        assert!(p.face_membership(face, &c).unwrap().is_none());
    }
}

#[test]
fn carrier_is_meet_of_faces_containing_the_point() {
    let mut r = rng(21);
    for (k, p) in [
        built(&moment_curve(&mut r, 8, 3)),
        built(
            &(0..8)
                .map(|_| random_point(&mut r, 3, -1, 1, 100))
                .collect::<Vec<_>>(),
        ),
    ]
    .into_iter()
    .enumerate()
    {
        let faces: Vec<_> = p
            .lattice()
            .faces()
            .iter()
            .filter(|f| !f.is_empty())
            .collect();
        for _ in 0..60 {
            // sparse weights land on assorted faces
            let face = faces[r.random_range(0..faces.len())];
            let mut w: Vec<Scalar> = face
                .vertex_ids()
                .iter()
                .map(|_| Scalar::from(r.random_range(0i64..=3)))
                .collect();
            if w.iter().all(Scalar::is_zero) {
                w[0] = Scalar::one();
            }
            let total: Scalar = w.iter().sum();
            let w: Vec<Scalar> = w.iter().map(|x| x / &total).collect();
            let x = combination(&p, face.vertex_ids(), &w);
            let mut meet: BTreeSet<usize> = (0..p.vertices().len()).collect();
            for f in &faces {
                if p.face_membership(f, &x).unwrap().is_some() {
                    let ids: BTreeSet<usize> = f.vertex_ids().iter().copied().collect();
                    meet = meet.intersection(&ids).copied().collect();
                }
            }
            let carrier = p.carrier_face(&x).unwrap();
            assert_eq!(
                carrier
                    .vertex_ids()
                    .iter()
                    .copied()
                    .collect::<BTreeSet<_>>(),
                meet,
                "polytope {k}"
            );
        }
    }
}

#[test]
fn hull_does_not_depend_on_input_order() {
    let mut r = rng(3);
    let mut points: Vec<Vector> = (0..12)
        .map(|_| random_point(&mut r, 3, -1, 1, 50))
        .collect();
    points.push(Vector::zeros(3)); // likely interior
    let reference = built(&points).canonical_form();
    for _ in 0..10 {
        points.shuffle(&mut r);
        assert_eq!(built(&points).canonical_form(), reference);
    }
}

#[test]
fn lower_dimensional_polytopes_in_space() {
    // a square tilted into R^3 and a segment in R^4
    let sq = built(&[v(&[0, 0, 0]), v(&[1, 1, 0]), v(&[0, 0, 1]), v(&[1, 1, 1])]);
    assert_eq!((sq.dim(), sq.f_vector()), (2, vec![4, 4]));
    assert!(sq
        .contains(&Vector::new(vec![
            Scalar::new(1, 2),
            Scalar::new(1, 2),
            Scalar::new(1, 3)
        ]))
        .unwrap());
    assert!(!sq.contains(&v(&[1, 0, 0])).unwrap());
    let seg = built(&[v(&[1, 2, 3, 4]), v(&[0, 0, 0, 0]), v(&[2, 4, 6, 8])]);
    assert_eq!((seg.dim(), seg.vertices().len()), (1, 2));
}
