//! Lattice points of rational cones.

use std::collections::HashSet;

use num::{Integer, Signed, ToPrimitive};

use super::{Cone, RationalVector, Q};
use crate::error::{Error, Result};

/// Default cap on the number of enumerated lattice points.
pub const DEFAULT_BUDGET: usize = 10_000_000;

/// Integer data for fast membership tests: inner facet normals of the cone
/// and the covector `ξ` scaled by the common denominator `den`.
#[derive(Clone, Debug)]
pub struct IntegerSlice {
    pub normals: Vec<Vec<i64>>,
    pub weight: Vec<i64>,
    pub den: i64,
}

impl IntegerSlice {
    pub fn new(c: &Cone, xi: &RationalVector) -> Result<Self> {
        if let Some(r) = c.rays().iter().find(|r| !xi.dot(r).is_positive()) {
            return Err(Error::UnboundedSlice(r.clone()));
        }
        let normals = c
            .halfspaces()
            .iter()
            .map(|h| h.to_i64().ok_or_else(|| overflow("facet normal")))
            .collect::<Result<Vec<_>>>()?;
        let den = xi
            .coords()
            .iter()
            .fold(num::BigInt::from(1), |acc, a| acc.lcm(a.denom()));
        let weight = xi
            .scale(&Q::from_integer(den.clone()))
            .to_i64()
            .ok_or_else(|| overflow("Reeb covector"))?;
        Ok(IntegerSlice {
            normals,
            weight,
            den: den.to_i64().ok_or_else(|| overflow("denominator"))?,
        })
    }

    pub fn in_cone(&self, p: &[i64]) -> bool {
        self.normals.iter().all(|h| dot(h, p) >= 0)
    }

    /// `den · ⟨ξ, p⟩`.
    pub fn scaled_weight(&self, p: &[i64]) -> i64 {
        dot(&self.weight, p)
    }
}

fn overflow(what: &str) -> Error {
    Error::InvalidArgument(format!("{what} does not fit in 64-bit integers"))
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Lattice points `α ∈ c ∩ ℤⁿ` with `⟨α, ξ⟩ < bound` (or `≤ bound` when
/// `inclusive`), in lexicographic order. Errors once more than `cap` points
/// are found.
pub fn enumerate_below(
    c: &Cone,
    xi: &RationalVector,
    bound: &Q,
    inclusive: bool,
    cap: usize,
) -> Result<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    for_each_below(c, xi, bound, inclusive, cap, |p| out.push(p.to_vec()))?;
    Ok(out)
}

/// Streaming form of [`enumerate_below`]: calls `visit` on each point in
/// lexicographic order and returns the number of points.
pub fn for_each_below(
    c: &Cone,
    xi: &RationalVector,
    bound: &Q,
    inclusive: bool,
    cap: usize,
    mut visit: impl FnMut(&[i64]),
) -> Result<usize> {
    let slice = IntegerSlice::new(c, xi)?;
    let n = c.rank();
    let mut lo = vec![0i64; n];
    let mut hi = vec![0i64; n];
    for r in c.rays() {
        let t = bound / xi.dot(r);
        for k in 0..n {
            let x = &r[k] * &t;
            lo[k] = lo[k].min(
                x.floor()
                    .to_integer()
                    .to_i64()
                    .ok_or_else(|| overflow("bound"))?,
            );
            hi[k] = hi[k].max(
                x.ceil()
                    .to_integer()
                    .to_i64()
                    .ok_or_else(|| overflow("bound"))?,
            );
        }
    }
    let scaled_bound = bound * Q::from_integer(slice.den.into());
    // strict: w < B  ⟺ w ≤ ⌈B⌉ - 1 ; inclusive: w ≤ ⌊B⌋
    let limit = if inclusive {
        scaled_bound.floor().to_integer()
    } else {
        scaled_bound.ceil().to_integer() - 1
    }
    .to_i64()
    .ok_or_else(|| overflow("bound"))?;
    let mut count = 0;
    let mut cur = lo.clone();
    'outer: loop {
        if slice.in_cone(&cur) && slice.scaled_weight(&cur) <= limit {
            if count == cap {
                return Err(Error::BudgetExceeded { cap });
            }
            count += 1;
            visit(&cur);
        }
        let mut k = n;
        loop {
            if k == 0 {
                break 'outer;
            }
            k -= 1;
            if cur[k] < hi[k] {
                cur[k] += 1;
                for j in k + 1..n {
                    cur[j] = lo[j];
                }
                break;
            }
        }
    }
    Ok(count)
}

/// All lattice points `α ∈ c` with `⟨α, ξ⟩ < m`, lexicographically ordered.
pub fn lattice_points_below(
    c: &Cone,
    xi: &RationalVector,
    m: u64,
    cap: usize,
) -> Result<Vec<RationalVector>> {
    if m == 0 {
        return Err(Error::InvalidArgument("level m must be at least 1".into()));
    }
    Ok(
        enumerate_below(c, xi, &Q::from_integer(m.into()), false, cap)?
            .into_iter()
            .map(|p| RationalVector::from_ints(&p))
            .collect(),
    )
}

/// Minimal generators of the semigroup `c ∩ ℤⁿ`.
pub fn hilbert_basis(c: &Cone) -> Result<Vec<Vec<i64>>> {
    let w = c
        .halfspaces()
        .iter()
        .fold(RationalVector::zeros(c.rank()), |acc, h| &acc + h);
    // every lattice point of a simplicial subcone's half-open parallelepiped
    // has weight below the sum of that subcone's ray weights
    let bound: Q = c.rays().iter().map(|r| w.dot(r)).sum();
    let pts = enumerate_below(c, &w, &bound, true, DEFAULT_BUDGET)?;
    let slice = IntegerSlice::new(c, &w)?;
    let mut cands: Vec<(i64, Vec<i64>)> = pts
        .into_iter()
        .filter(|p| p.iter().any(|&x| x != 0))
        .map(|p| (slice.scaled_weight(&p), p))
        .collect();
    cands.sort();
    let set: HashSet<Vec<i64>> = cands.iter().map(|(_, p)| p.clone()).collect();
    let mut basis = Vec::new();
    for (wh, h) in &cands {
        let reducible = cands.iter().take_while(|(wa, _)| wa < wh).any(|(_, a)| {
            let rest: Vec<i64> = h.iter().zip(a).map(|(x, y)| x - y).collect();
            set.contains(&rest)
        });
        if !reducible {
            basis.push(h.clone());
        }
    }
    basis.sort();
    Ok(basis)
}

/// Whether the integer span of `gens` is all of `ℤⁿ` (echelon form by
/// Euclidean row operations; all pivots must be units).
pub fn lattice_generated(gens: &[Vec<i64>], n: usize) -> bool {
    let mut rows: Vec<Vec<i128>> = gens
        .iter()
        .map(|g| g.iter().map(|&x| x as i128).collect())
        .collect();
    let mut r = 0;
    for c in 0..n {
        loop {
            let nz: Vec<usize> = (r..rows.len()).filter(|&i| rows[i][c] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz
                .iter()
                .min_by_key(|&&i| rows[i][c].abs())
                .expect("nonempty");
            for &i in &nz {
                if i != p {
                    let q = rows[i][c] / rows[p][c];
                    let prow = rows[p].clone();
                    for (x, y) in rows[i].iter_mut().zip(&prow) {
                        *x -= q * y;
                    }
                }
            }
        }
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            return false;
        };
        if rows[p][c].abs() != 1 {
            return false;
        }
        rows.swap(r, p);
        r += 1;
    }
    true
}
