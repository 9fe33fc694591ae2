use std::collections::BTreeSet;

use num::{Signed, Zero};

use super::linalg::{combinations, hyperplane_normal, rank};
use super::RationalVector;
use crate::error::{Error, Result};

/// A pointed, full-dimensional rational polyhedral cone.
///
/// `rays` are the primitive integer generators of the extreme rays and
/// `halfspaces` the primitive integer inner facet normals, so that
/// `x ∈ cone ⟺ ⟨h, x⟩ ≥ 0` for every `h`. Both lists are sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    rank: usize,
    rays: Vec<RationalVector>,
    halfspaces: Vec<RationalVector>,
}

impl Cone {
    /// Cone generated by `generators`. Redundant generators are dropped.
    pub fn from_rays(generators: &[RationalVector]) -> Result<Cone> {
        let n = generators.first().ok_or(Error::EmptyInput)?.dim();
        if n == 0 {
            return Err(Error::InvalidArgument("rank must be at least 1".into()));
        }
        if let Some(bad) = generators.iter().find(|g| g.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bad.dim(),
            });
        }
        let gens: Vec<RationalVector> = generators
            .iter()
            .filter(|g| !g.is_zero())
            .map(RationalVector::primitive)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if rank(&gens) < n {
            return Err(Error::NotFullDimensional);
        }
        let halfspaces = facets(&gens, n);
        if rank(&halfspaces) < n {
            return Err(Error::NotPointed);
        }
        let rays = gens
            .into_iter()
            .filter(|r| {
                let tight: Vec<RationalVector> = halfspaces
                    .iter()
                    .filter(|h| h.dot(r).is_zero())
                    .cloned()
                    .collect();
                rank(&tight) == n - 1
            })
            .collect();
        Ok(Cone {
            rank: n,
            rays,
            halfspaces,
        })
    }

    /// Cone `{x : ⟨h, x⟩ ≥ 0}` cut out by `covectors`.
    pub fn from_halfspaces(covectors: &[RationalVector]) -> Result<Cone> {
        Ok(Cone::from_rays(covectors)?.dual())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[RationalVector] {
        &self.rays
    }

    pub fn halfspaces(&self) -> &[RationalVector] {
        &self.halfspaces
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.rank
    }

    /// The dual cone `{α : ⟨α, v⟩ ≥ 0 for all v}`.
    pub fn dual(&self) -> Cone {
        Cone {
            rank: self.rank,
            rays: self.halfspaces.clone(),
            halfspaces: self.rays.clone(),
        }
    }

    pub fn contains(&self, x: &RationalVector) -> bool {
        self.halfspaces.iter().all(|h| !h.dot(x).is_negative())
    }

    pub fn contains_interior(&self, x: &RationalVector) -> bool {
        self.halfspaces.iter().all(|h| h.dot(x).is_positive())
    }

    /// Whether `covector` is strictly positive on every nonzero point.
    pub fn is_positive_on(&self, covector: &RationalVector) -> bool {
        self.rays.iter().all(|r| covector.dot(r).is_positive())
    }
}

/// Inner facet normals of the cone generated by `gens` (assumed full-rank).
fn facets(gens: &[RationalVector], n: usize) -> Vec<RationalVector> {
    let mut out = BTreeSet::new();
    for combo in combinations(gens.len(), n - 1) {
        let span: Vec<RationalVector> = combo.iter().map(|&i| gens[i].clone()).collect();
        if rank(&span) != n - 1 {
            continue;
        }
        let Some(h) = hyperplane_normal(&span, n) else {
            continue;
        };
        let vals: Vec<_> = gens.iter().map(|g| h.dot(g)).collect();
        if vals.iter().all(|v| !v.is_negative()) {
            out.insert(h);
        } else if vals.iter().all(|v| !v.is_positive()) {
            out.insert(-&h);
        }
    }
    out.into_iter().collect()
}

/// The dual cone `σ∨`. An involution on pointed full-dimensional cones.
pub fn dual_cone(c: &Cone) -> Cone {
    c.dual()
}
