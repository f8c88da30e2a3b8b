//! Exact feasibility for `A x = b, x ≥ 0`.
//!
//! A dense rational tableau runs the two-phase simplex method with Bland's
//! smallest-index rule, so no perturbation is needed for termination. Both
//! outcomes carry evidence: a feasible point, or a Farkas vector `y` with
//! `yᵀA ≤ 0` and `yᵀb > 0`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_math::{Matrix, Scalar, Vector};

/// Equality-form system `A x = b` over nonnegative variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardLP {
    a: Matrix,
    b: Vector,
}

impl StandardLP {
    pub fn new(a: Matrix, b: Vector) -> Result<Self> {
        b.check_dim(a.nrows())?;
        Ok(StandardLP { a, b })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn rhs(&self) -> &Vector {
        &self.b
    }

    pub fn num_vars(&self) -> usize {
        self.a.ncols()
    }

    pub fn num_constraints(&self) -> usize {
        self.a.nrows()
    }

    /// `A x = b` and `x ≥ 0`, exactly.
    pub fn is_solution(&self, x: &Vector) -> bool {
        x.dim() == self.num_vars()
            && x.iter().all(|v| !v.is_negative())
            && self.a.mul_vec(x) == self.b
    }

    /// `yᵀA ≤ 0` componentwise and `yᵀb > 0`, exactly.
    pub fn is_farkas_certificate(&self, y: &Vector) -> bool {
        y.dim() == self.num_constraints()
            && self.a.left_mul_vec(y).iter().all(|v| !v.is_positive())
            && y.dot(&self.b).is_positive()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Feasible,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LPResult {
    pub status: LpStatus,
    pub point: Option<Vector>,
    pub certificate: Option<Vector>,
    /// Simplex pivots performed across all phases.
    pub pivots: usize,
}

impl LPResult {
    pub fn is_feasible(&self) -> bool {
        self.status == LpStatus::Feasible
    }

    /// Checks the evidence attached to whichever branch was returned.
    pub fn verify(&self, lp: &StandardLP) -> bool {
        match self.status {
            LpStatus::Feasible => self.point.as_ref().is_some_and(|x| lp.is_solution(x)),
            LpStatus::Infeasible => self
                .certificate
                .as_ref()
                .is_some_and(|y| lp.is_farkas_certificate(y)),
        }
    }
}

enum Outcome {
    Optimal,
    Unbounded,
}

/// Dense tableau holding `B⁻¹A | B⁻¹b` for the current basis.
struct Tableau {
    rows: Vec<Vec<Scalar>>,
    rhs: Vec<Scalar>,
    basis: Vec<usize>,
    ncols: usize,
    pivots: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, e: usize) {
        let inv = self.rows[r][e].recip();
        for v in self.rows[r].iter_mut() {
            *v *= &inv;
        }
        self.rhs[r] *= &inv;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][e].is_zero() {
                continue;
            }
            let f = self.rows[i][e].clone();
            for (v, p) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &(&f * p);
                }
            }
            self.rhs[i] -= &(&f * &pivot_rhs);
        }
        self.basis[r] = e;
        self.pivots += 1;
    }

    /// `Σ_i c[basis[i]] · rows[i][j]`, i.e. the simplex multiplier applied to
    /// column `j`.
    fn priced(&self, cost: &[Scalar], j: usize) -> Scalar {
        self.basis
            .iter()
            .zip(&self.rows)
            .filter(|(&bi, row)| !cost[bi].is_zero() && !row[j].is_zero())
            .map(|(&bi, row)| &cost[bi] * &row[j])
            .sum()
    }

    fn objective(&self, cost: &[Scalar]) -> Scalar {
        self.basis
            .iter()
            .zip(&self.rhs)
            .map(|(&bi, r)| &cost[bi] * r)
            .sum()
    }

    /// Minimizes `costᵀx` over columns accepted by `allowed`, Bland's rule.
    fn minimize(&mut self, cost: &[Scalar], allowed: impl Fn(usize) -> bool) -> Outcome {
        loop {
            let entering = (0..self.ncols).find(|&j| {
                allowed(j)
                    && !self.basis.contains(&j)
                    && (&cost[j] - &self.priced(cost, j)).is_negative()
            });
            let Some(e) = entering else {
                return Outcome::Optimal;
            };
            let mut leave: Option<(usize, Scalar)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][e];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leave {
                    None => true,
                    Some((li, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, e),
                None => return Outcome::Unbounded,
            }
        }
    }

    fn primal_point(&self, n: usize) -> Vector {
        let mut x = vec![Scalar::zero(); n];
        for (&bi, r) in self.basis.iter().zip(&self.rhs) {
            if bi < n {
                x[bi] = r.clone();
            }
        }
        Vector::new(x)
    }

    /// Pivots basic artificials (at level zero) out of the basis; rows with no
    /// structural nonzero are redundant and dropped.
    fn expel_artificials(&mut self, n: usize) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= n {
                debug_assert!(self.rhs[i].is_zero());
                match (0..n).find(|&j| !self.rows[i][j].is_zero()) {
                    Some(j) => self.pivot(i, j),
                    None => {
                        self.rows.remove(i);
                        self.rhs.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }
}

/// Result of Phase I: the tableau plus, when infeasible, the certificate.
struct PhaseOne {
    tableau: Tableau,
    certificate: Option<Vector>,
}

fn phase_one(lp: &StandardLP) -> PhaseOne {
    let m = lp.num_constraints();
    let n = lp.num_vars();
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut signs = Vec::with_capacity(m);
    for (i, (row, bi)) in lp.a.rows().iter().zip(lp.b.iter()).enumerate() {
        let flip = bi.is_negative();
        let mut r: Vec<Scalar> = row
            .iter()
            .map(|v| if flip { -v } else { v.clone() })
            .collect();
        r.extend((0..m).map(|k| {
            if k == i {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        }));
        rows.push(r);
        rhs.push(if flip { -bi } else { bi.clone() });
        signs.push(flip);
    }
    let mut tableau = Tableau {
        rows,
        rhs,
        basis: (n..n + m).collect(),
        ncols: n + m,
        pivots: 0,
    };
    let cost: Vec<Scalar> = (0..n + m)
        .map(|j| if j < n { Scalar::zero() } else { Scalar::one() })
        .collect();
    // Phase I is bounded below by zero.
    let _ = tableau.minimize(&cost, |_| true);
    let certificate = tableau.objective(&cost).is_positive().then(|| {
        // Dual multipliers of the normalized system, mapped back through the
        // row sign flips.
        Vector::new(
            (0..m)
                .map(|k| {
                    let y = tableau.priced(&cost, n + k);
                    if signs[k] {
                        -y
                    } else {
                        y
                    }
                })
                .collect(),
        )
    });
    PhaseOne {
        tableau,
        certificate,
    }
}

/// Decides feasibility of `A x = b, x ≥ 0` exactly.
pub fn feasible(lp: &StandardLP) -> LPResult {
    let PhaseOne {
        tableau,
        certificate,
    } = phase_one(lp);
    let result = match certificate {
        Some(y) => LPResult {
            status: LpStatus::Infeasible,
            point: None,
            certificate: Some(y),
            pivots: tableau.pivots,
        },
        None => LPResult {
            status: LpStatus::Feasible,
            point: Some(tableau.primal_point(lp.num_vars())),
            certificate: None,
            pivots: tableau.pivots,
        },
    };
    debug_assert!(result.verify(lp));
    result
}

/// Feasibility plus the largest `t` such that some solution has `x_j ≥ t`
/// for every designated column `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlackResult {
    pub result: LPResult,
    /// `None` exactly when the system is infeasible.
    pub slack: Option<Scalar>,
}

/// Maximizes `min_{j ∈ slack_columns} x_j` over `A x = b, x ≥ 0`.
///
/// With `x_j = t + s_j` for designated `j` the problem becomes an LP in
/// `(x, s, t) ≥ 0` maximizing `t`. A positive optimum certifies a solution
/// strictly positive on every designated column.
pub fn max_slack(lp: &StandardLP, slack_columns: &BTreeSet<usize>) -> Result<SlackResult> {
    let n = lp.num_vars();
    if slack_columns.is_empty() {
        return Err(Error::InvalidRequest(
            "max_slack needs at least one column".into(),
        ));
    }
    if let Some(&j) = slack_columns.iter().find(|&&j| j >= n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: j + 1,
        });
    }
    let m = lp.num_constraints();
    let t_col = n;
    let rows: Vec<Vec<Scalar>> =
        lp.a.rows()
            .iter()
            .map(|row| {
                let t_coef: Scalar = slack_columns.iter().map(|&j| &row[j]).sum();
                row.iter().cloned().chain(std::iter::once(t_coef)).collect()
            })
            .collect();
    let shifted = StandardLP::new(Matrix::from_rows(rows, n + 1)?, lp.b.clone())?;

    let PhaseOne {
        mut tableau,
        certificate,
    } = phase_one(&shifted);
    if let Some(y) = certificate {
        // yᵀ(A | A·1_S) ≤ 0 restricts to yᵀA ≤ 0.
        let result = LPResult {
            status: LpStatus::Infeasible,
            point: None,
            certificate: Some(y),
            pivots: tableau.pivots,
        };
        debug_assert!(result.verify(lp));
        return Ok(SlackResult {
            result,
            slack: None,
        });
    }

    tableau.expel_artificials(n + 1);
    let cost: Vec<Scalar> = (0..n + 1 + m)
        .map(|j| {
            if j == t_col {
                -Scalar::one()
            } else {
                Scalar::zero()
            }
        })
        .collect();
    if let Outcome::Unbounded = tableau.minimize(&cost, |j| j <= t_col) {
        return Err(Error::Unbounded);
    }
    let y = tableau.primal_point(n + 1);
    let t = y[t_col].clone();
    let x = Vector::new(
        (0..n)
            .map(|j| {
                if slack_columns.contains(&j) {
                    &y[j] + &t
                } else {
                    y[j].clone()
                }
            })
            .collect(),
    );
    let result = LPResult {
        status: LpStatus::Feasible,
        point: Some(x),
        certificate: None,
        pivots: tableau.pivots,
    };
    debug_assert!(result.verify(lp));
    Ok(SlackResult {
        result,
        slack: Some(t),
    })
}
