//! Exact two-phase primal simplex over `BigRational` with Bland's rule.
//!
//! All decision variables are free. Internally each variable is split into a
//! nonnegative pair, every row gets a slack (for inequalities) and an
//! artificial, and the dense tableau is pivoted exactly. Bland's rule makes
//! the pivot sequence deterministic and cycle-free.

use num::{One, Signed, Zero};

use super::{RationalVector, Q};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

/// `⟨covector, x⟩ (≤ | ≥ | =) rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub covector: RationalVector,
    pub relation: Relation,
    pub rhs: Q,
}

impl Constraint {
    pub fn new(covector: RationalVector, relation: Relation, rhs: Q) -> Self {
        Constraint {
            covector,
            relation,
            rhs,
        }
    }

    pub fn is_satisfied(&self, x: &RationalVector) -> bool {
        let lhs = self.covector.dot(x);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Q,
    pub argopt: RationalVector,
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    obj: Vec<Q>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Q {
        &self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Q::one() / &self.rows[r][c];
        for x in self.rows[r].iter_mut() {
            *x *= &inv;
        }
        let prow = self.rows[r].clone();
        let eliminate = |row: &mut Vec<Q>| {
            if row[c].is_zero() {
                return;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.basis[r] = c;
    }

    /// Install reduced costs for `cost` given the current basis.
    fn price(&mut self, cost: &[Q]) {
        let mut obj: Vec<Q> = cost.to_vec();
        obj.push(Q::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            for (o, t) in obj.iter_mut().zip(&self.rows[i]) {
                *o -= &cost[b] * t;
            }
        }
        self.obj = obj;
    }

    /// Bland-rule iterations. `Err(col)` reports an unbounded entering column.
    fn run(&mut self, allowed: &dyn Fn(usize) -> bool) -> std::result::Result<(), usize> {
        loop {
            let Some(c) = (0..self.width).find(|&j| allowed(j) && self.obj[j].is_negative()) else {
                return Ok(());
            };
            let mut best: Option<(usize, Q)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return Err(c),
            }
        }
    }
}

/// Optimize `⟨objective, x⟩` over free `x` subject to `constraints`.
///
/// Infeasibility returns a Farkas multiplier `y` (one entry per constraint)
/// with `Σ yᵢ aᵢ = 0`, `yᵢ ≤ 0` on `≤` rows, `yᵢ ≥ 0` on `≥` rows and
/// `Σ yᵢ bᵢ > 0`. Unboundedness returns an improving recession direction.
pub fn lp_solve(
    objective: &RationalVector,
    constraints: &[Constraint],
    sense: Sense,
) -> Result<LpSolution> {
    let n = objective.dim();
    if let Some(c) = constraints.iter().find(|c| c.covector.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: c.covector.dim(),
        });
    }
    let m = constraints.len();
    let slack_cols: Vec<Option<usize>> = {
        let mut next = 2 * n;
        constraints
            .iter()
            .map(|c| match c.relation {
                Relation::Eq => None,
                _ => {
                    next += 1;
                    Some(next - 1)
                }
            })
            .collect()
    };
    let art0 = 2 * n + slack_cols.iter().flatten().count();
    let width = art0 + m;
    let mut signs = Vec::with_capacity(m);
    let mut rows = Vec::with_capacity(m);
    for (i, c) in constraints.iter().enumerate() {
        let mut row = vec![Q::zero(); width + 1];
        for j in 0..n {
            row[j] = c.covector[j].clone();
            row[n + j] = -c.covector[j].clone();
        }
        if let Some(s) = slack_cols[i] {
            row[s] = match c.relation {
                Relation::Le => Q::one(),
                _ => -Q::one(),
            };
        }
        row[width] = c.rhs.clone();
        let sign = if c.rhs.is_negative() {
            -Q::one()
        } else {
            Q::one()
        };
        if sign.is_negative() {
            for x in row.iter_mut() {
                *x = -&*x;
            }
        }
        row[art0 + i] = Q::one();
        signs.push(sign);
        rows.push(row);
    }
    let mut tab = Tableau {
        rows,
        obj: Vec::new(),
        basis: (art0..width).collect(),
        width,
    };

    // phase I: minimize the sum of artificials
    let mut cost1 = vec![Q::zero(); width];
    for c in cost1.iter_mut().skip(art0) {
        *c = Q::one();
    }
    tab.price(&cost1);
    tab.run(&|_| true)
        .expect("phase I objective is bounded below by zero");
    let infeasibility = -tab.obj[width].clone();
    if infeasibility.is_positive() {
        let farkas = (0..m)
            .map(|i| (Q::one() - &tab.obj[art0 + i]) * &signs[i])
            .collect();
        return Err(Error::Infeasible {
            farkas: RationalVector(farkas),
        });
    }
    for r in 0..m {
        if tab.basis[r] < art0 {
            continue;
        }
        if let Some(c) = (0..art0).find(|&j| !tab.rows[r][j].is_zero()) {
            tab.pivot(r, c);
        }
    }

    // phase II
    let flip = match sense {
        Sense::Min => Q::one(),
        Sense::Max => -Q::one(),
    };
    let mut cost2 = vec![Q::zero(); width];
    for j in 0..n {
        cost2[j] = &objective[j] * &flip;
        cost2[n + j] = -&cost2[j];
    }
    tab.price(&cost2);
    if let Err(c) = tab.run(&|j| j < art0) {
        let mut dir = vec![Q::zero(); width];
        dir[c] = Q::one();
        for (i, &b) in tab.basis.iter().enumerate() {
            dir[b] = -tab.rows[i][c].clone();
        }
        let ray = (0..n).map(|j| &dir[j] - &dir[n + j]).collect();
        return Err(Error::UnboundedLp {
            ray: RationalVector(ray),
        });
    }
    let mut x = vec![Q::zero(); width];
    for (i, &b) in tab.basis.iter().enumerate() {
        x[b] = tab.rhs(i).clone();
    }
    let argopt = RationalVector((0..n).map(|j| &x[j] - &x[n + j]).collect());
    Ok(LpSolution {
        value: objective.dot(&argopt),
        argopt,
    })
}
