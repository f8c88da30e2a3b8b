//! Exact rank, linear solve and affine hulls.
//!
//! Every kernel clears denominators row by row and runs fraction-free
//! (Bareiss) elimination over big integers; rationals only reappear during
//! back-substitution.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{Matrix, Scalar, Vector};
use crate::error::{Error, Result};

/// Integer row echelon form produced by fraction-free elimination.
struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivot_cols: Vec<usize>,
    /// `row_origin[r]` is the input row that ended up at position `r`.
    row_origin: Vec<usize>,
}

fn integer_row(row: &[Scalar]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

fn bareiss(mut m: Vec<Vec<BigInt>>, cols: usize) -> Echelon {
    let nrows = m.len();
    let mut row_origin: Vec<usize> = (0..nrows).collect();
    let mut pivot_cols = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        row_origin.swap(r, p);
        let (head, tail) = m.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in (c + 1)..cols {
                let num = &pivot_row[c] * &row[j] - &lead * &pivot_row[j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                row[j] = q;
            }
        }
        prev = m[r][c].clone();
        pivot_cols.push(c);
        r += 1;
    }
    Echelon {
        rows: m,
        pivot_cols,
        row_origin,
    }
}

fn echelon_of(rows: &[&[Scalar]], cols: usize) -> Echelon {
    bareiss(rows.iter().map(|r| integer_row(r)).collect(), cols)
}

fn common_dim(rows: &[Vector]) -> Result<usize> {
    let dim = rows.first().map_or(0, Vector::dim);
    for r in rows {
        r.check_dim(dim)?;
    }
    Ok(dim)
}

/// Exact rank of a list of row vectors.
pub fn rank(rows: &[Vector]) -> Result<usize> {
    let dim = common_dim(rows)?;
    let refs: Vec<&[Scalar]> = rows.iter().map(Vector::coords).collect();
    Ok(echelon_of(&refs, dim).pivot_cols.len())
}

/// Indices of a maximal linearly independent subset of `rows`, ascending.
pub fn independent_rows(rows: &[Vector]) -> Result<Vec<usize>> {
    let dim = common_dim(rows)?;
    let refs: Vec<&[Scalar]> = rows.iter().map(Vector::coords).collect();
    let ech = echelon_of(&refs, dim);
    let mut picked = ech.row_origin[..ech.pivot_cols.len()].to_vec();
    picked.sort_unstable();
    Ok(picked)
}

/// Solution set of `A x = b`: `particular + span(nullspace_basis)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSolution {
    pub particular: Vector,
    pub nullspace_basis: Vec<Vector>,
}

impl LinearSolution {
    pub fn dim(&self) -> usize {
        self.nullspace_basis.len()
    }
}

/// Back-substitution on the first `rank` echelon rows. `rhs[r]` is the
/// right-hand side of row `r`; free variables take the values in `free`.
fn back_substitute(
    ech: &Echelon,
    ncols: usize,
    rhs: &[Scalar],
    free: &[(usize, Scalar)],
) -> Vec<Scalar> {
    let mut x = vec![Scalar::zero(); ncols];
    for (j, v) in free {
        x[*j] = v.clone();
    }
    for (r, &pc) in ech.pivot_cols.iter().enumerate().rev() {
        let row = &ech.rows[r];
        let mut acc = rhs[r].clone();
        for j in (pc + 1)..ncols {
            if !row[j].is_zero() && !x[j].is_zero() {
                acc -= &(Scalar::from_integer(row[j].clone()) * &x[j]);
            }
        }
        x[pc] = acc / Scalar::from_integer(row[pc].clone());
    }
    x
}

/// Solves `A x = b` exactly. Returns `None` when the system is inconsistent.
pub fn solve_linear(a: &Matrix, b: &Vector) -> Result<Option<LinearSolution>> {
    b.check_dim(a.nrows())?;
    let n = a.ncols();
    let augmented: Vec<Vec<Scalar>> = a
        .rows()
        .iter()
        .zip(b.iter())
        .map(|(row, bi)| {
            row.iter()
                .cloned()
                .chain(std::iter::once(bi.clone()))
                .collect()
        })
        .collect();
    let refs: Vec<&[Scalar]> = augmented.iter().map(Vec::as_slice).collect();
    let ech = echelon_of(&refs, n + 1);
    if ech.pivot_cols.last() == Some(&n) {
        return Ok(None);
    }
    let rank = ech.pivot_cols.len();
    let rhs: Vec<Scalar> = (0..rank)
        .map(|r| Scalar::from_integer(ech.rows[r][n].clone()))
        .collect();
    let particular = back_substitute(&ech, n, &rhs, &[]);

    let zeros = vec![Scalar::zero(); rank];
    let nullspace_basis = (0..n)
        .filter(|j| !ech.pivot_cols.contains(j))
        .map(|f| Vector::new(back_substitute(&ech, n, &zeros, &[(f, Scalar::one())])))
        .collect();
    Ok(Some(LinearSolution {
        particular: Vector::new(particular),
        nullspace_basis,
    }))
}

/// Affine subspace `base_point + span(direction_basis)` with independent
/// directions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineSubspace {
    base_point: Vector,
    direction_basis: Vec<Vector>,
}

impl AffineSubspace {
    pub fn base_point(&self) -> &Vector {
        &self.base_point
    }

    pub fn direction_basis(&self) -> &[Vector] {
        &self.direction_basis
    }

    pub fn dim(&self) -> usize {
        self.direction_basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.base_point.dim()
    }

    /// Coordinates `c` with `x = base + Σ c_i basis_i`, if `x` lies in the
    /// subspace.
    pub fn coordinates(&self, x: &Vector) -> Option<Vec<Scalar>> {
        if x.dim() != self.ambient_dim() {
            return None;
        }
        let delta = x.sub(&self.base_point);
        if self.direction_basis.is_empty() {
            return delta.is_zero().then(Vec::new);
        }
        let rows = (0..self.ambient_dim())
            .map(|i| self.direction_basis.iter().map(|v| v[i].clone()).collect())
            .collect();
        let a = Matrix::from_rows(rows, self.dim()).ok()?;
        solve_linear(&a, &delta)
            .ok()
            .flatten()
            .map(|s| s.particular.into_coords())
    }

    pub fn contains(&self, x: &Vector) -> bool {
        self.coordinates(x).is_some()
    }

    pub fn point_at(&self, coords: &[Scalar]) -> Vector {
        let terms = coords.iter().zip(&self.direction_basis);
        self.base_point
            .add(&Vector::combination(self.ambient_dim(), terms))
    }
}

/// Affine hull of a nonempty point set. The base point is the first input;
/// directions are a subset of the differences to it.
pub fn affine_hull(points: &[Vector]) -> Result<AffineSubspace> {
    let base = points.first().ok_or(Error::EmptyInput("affine_hull"))?;
    common_dim(points)?;
    let diffs: Vec<Vector> = points[1..].iter().map(|p| p.sub(base)).collect();
    let picked = independent_rows(&diffs)?;
    Ok(AffineSubspace {
        base_point: base.clone(),
        direction_basis: picked.into_iter().map(|i| diffs[i].clone()).collect(),
    })
}
