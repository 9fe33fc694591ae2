//! Small dense exact linear algebra (rank, solve, nullspace, determinants).

use num::{One, Signed, Zero};

use super::{RationalVector, Q};

/// Row-reduce `m` in place to reduced row echelon form; returns pivot columns.
pub fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Q::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[RationalVector]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.iter().map(|r| r.0.clone()).collect();
    rref(&mut m).len()
}

/// Rank of the affine hull of `points`.
pub fn affine_dim(points: &[RationalVector]) -> usize {
    match points.split_first() {
        None => 0,
        Some((p0, rest)) => rank(&rest.iter().map(|p| p - p0).collect::<Vec<_>>()),
    }
}

/// Solve `A x = b` for square or overdetermined `A`. Returns `None` when the
/// system is inconsistent or the solution is not unique.
pub fn solve(a: &[RationalVector], b: &[Q]) -> Option<RationalVector> {
    let n = a.first()?.dim();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.0.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&n) || pivots.len() < n {
        return None;
    }
    Some(RationalVector((0..n).map(|i| m[i][n].clone()).collect()))
}

/// A basis of `{x : ⟨row, x⟩ = 0 for every row}` in ambient dimension `n`.
pub fn nullspace(rows: &[RationalVector], n: usize) -> Vec<RationalVector> {
    let mut m: Vec<Vec<Q>> = rows.iter().map(|r| r.0.clone()).collect();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); n];
            v[f] = Q::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            RationalVector(v)
        })
        .collect()
}

/// Determinant of a square matrix given by rows.
pub fn det(rows: &[RationalVector]) -> Q {
    let n = rows.len();
    let mut m: Vec<Vec<Q>> = rows.iter().map(|r| r.0.clone()).collect();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        let inv = Q::one() / &m[c][c];
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for j in c..n {
                let t = &f * &m[c][j];
                m[i][j] -= t;
            }
        }
    }
    d
}

/// Normal covector of the hyperplane through the origin spanned by `n - 1`
/// linearly independent vectors, as a primitive integer vector.
pub fn hyperplane_normal(span: &[RationalVector], n: usize) -> Option<RationalVector> {
    let ns = nullspace(span, n);
    (ns.len() == 1).then(|| ns[0].primitive())
}

/// All `r`-element subsets of `0..k` in lexicographic order.
pub fn combinations(k: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if r > k {
        return out;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..r).rev().find(|&i| idx[i] != i + k - r) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub fn sign(x: &Q) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}
