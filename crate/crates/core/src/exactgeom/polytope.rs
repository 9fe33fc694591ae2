use std::collections::{BTreeMap, BTreeSet};

use num::{BigInt, One, Signed, Zero};

use super::linalg::{affine_dim, combinations, det, nullspace, rank, solve};
use super::{Cone, RationalVector, Q};
use crate::error::{Error, Result};

/// The closed halfspace `⟨normal, x⟩ ≤ offset`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Halfspace {
    pub normal: RationalVector,
    pub offset: Q,
}

impl Halfspace {
    pub fn new(normal: RationalVector, offset: Q) -> Self {
        Halfspace { normal, offset }
    }

    /// `⟨normal, x⟩ ≥ offset`, stored in `≤` form.
    pub fn at_least(normal: &RationalVector, offset: &Q) -> Self {
        Halfspace {
            normal: -normal,
            offset: -offset,
        }
    }

    pub fn slack(&self, x: &RationalVector) -> Q {
        &self.offset - self.normal.dot(x)
    }
}

/// A pointed rational polyhedron in V- and H-representation.
///
/// Vertices are kept in lexicographic order; triangulations pull from the
/// lexicographically smallest vertex of each face, so every derived quantity
/// is independent of input order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<RationalVector>,
    rays: Vec<RationalVector>,
    halfspaces: Vec<Halfspace>,
}

impl Polytope {
    /// Polyhedron `⋂ halfspaces` in ambient dimension `dim`, vertices found by
    /// exhaustive basis enumeration. An empty intersection gives an empty
    /// polytope (no vertices).
    pub fn from_halfspaces(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Polytope> {
        if let Some(h) = halfspaces.iter().find(|h| h.normal.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: h.normal.dim(),
            });
        }
        let normals: Vec<RationalVector> = halfspaces.iter().map(|h| h.normal.clone()).collect();
        let mut vertices = BTreeSet::new();
        for combo in combinations(halfspaces.len(), dim) {
            let a: Vec<RationalVector> = combo.iter().map(|&i| normals[i].clone()).collect();
            let b: Vec<Q> = combo
                .iter()
                .map(|&i| halfspaces[i].offset.clone())
                .collect();
            let Some(x) = solve(&a, &b) else { continue };
            if halfspaces.iter().all(|h| !h.slack(&x).is_negative()) {
                vertices.insert(x);
            }
        }
        let mut rays = BTreeSet::new();
        if !vertices.is_empty() && dim > 0 {
            for combo in combinations(halfspaces.len(), dim - 1) {
                let a: Vec<RationalVector> = combo.iter().map(|&i| normals[i].clone()).collect();
                if rank(&a) != dim - 1 {
                    continue;
                }
                let d = nullspace(&a, dim).remove(0).primitive();
                for cand in [d.clone(), -&d] {
                    if normals.iter().all(|nrm| !nrm.dot(&cand).is_positive()) {
                        rays.insert(cand);
                    }
                }
            }
        }
        Ok(Polytope {
            dim,
            vertices: vertices.into_iter().collect(),
            rays: rays.into_iter().collect(),
            halfspaces,
        })
    }

    /// Convex hull of `points`. Full-dimensional hulls get their facet
    /// description; lower-dimensional ones only carry their affine hull
    /// equations (enough for zero-volume queries).
    pub fn from_vertices(points: &[RationalVector]) -> Result<Polytope> {
        let dim = points.first().ok_or(Error::EmptyInput)?.dim();
        let pts: Vec<RationalVector> = points
            .iter()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let d = affine_dim(&pts);
        let mut halfspaces = BTreeSet::new();
        if d == dim {
            for combo in combinations(pts.len(), dim) {
                let base = &pts[combo[0]];
                let diffs: Vec<RationalVector> =
                    combo[1..].iter().map(|&i| &pts[i] - base).collect();
                if rank(&diffs) != dim - 1 {
                    continue;
                }
                let nrm = nullspace(&diffs, dim).remove(0).primitive();
                let off = nrm.dot(base);
                let vals: Vec<Q> = pts.iter().map(|p| nrm.dot(p) - &off).collect();
                if vals.iter().all(|v| !v.is_positive()) {
                    halfspaces.insert(Halfspace::new(nrm, off));
                } else if vals.iter().all(|v| !v.is_negative()) {
                    halfspaces.insert(Halfspace::new(-&nrm, -off));
                }
            }
        } else {
            let base = &pts[0];
            let diffs: Vec<RationalVector> = pts[1..].iter().map(|p| p - base).collect();
            for nrm in nullspace(&diffs, dim) {
                let off = nrm.dot(base);
                halfspaces.insert(Halfspace::new(-&nrm, -off.clone()));
                halfspaces.insert(Halfspace::new(nrm, off));
            }
        }
        let extreme = if d == dim {
            pts.into_iter()
                .filter(|p| {
                    let tight: Vec<RationalVector> = halfspaces
                        .iter()
                        .filter(|h| h.slack(p).is_zero())
                        .map(|h| h.normal.clone())
                        .collect();
                    rank(&tight) == dim
                })
                .collect()
        } else {
            pts
        };
        Ok(Polytope {
            dim,
            vertices: extreme,
            rays: Vec::new(),
            halfspaces: halfspaces.into_iter().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[RationalVector] {
        &self.vertices
    }

    pub fn recession_rays(&self) -> &[RationalVector] {
        &self.rays
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, x: &RationalVector) -> bool {
        self.halfspaces.iter().all(|h| !h.slack(x).is_negative())
    }

    /// Dimension of the affine hull, `None` for the empty polytope.
    pub fn affine_dim(&self) -> Option<usize> {
        (!self.vertices.is_empty()).then(|| affine_dim(&self.vertices))
    }

    /// A triangulation into full-dimensional simplices, each given by
    /// `dim + 1` vertex indices. Empty for lower-dimensional polytopes.
    pub fn triangulation(&self) -> Result<Vec<Vec<usize>>> {
        if !self.is_bounded() {
            return Err(Error::Unbounded);
        }
        if self.affine_dim() != Some(self.dim) {
            return Ok(Vec::new());
        }
        let tight: Vec<BTreeSet<usize>> = self
            .halfspaces
            .iter()
            .map(|h| {
                (0..self.vertices.len())
                    .filter(|&i| h.slack(&self.vertices[i]).is_zero())
                    .collect()
            })
            .collect();
        let all: BTreeSet<usize> = (0..self.vertices.len()).collect();
        let mut memo = BTreeMap::new();
        Ok(pull(&self.vertices, &all, self.dim, &tight, &mut memo))
    }

    /// `(volume, Σ vol(simplex)·centroid(simplex))` over the triangulation.
    pub(crate) fn first_moment(&self) -> Result<(Q, RationalVector)> {
        let mut vol = Q::zero();
        let mut first = RationalVector::zeros(self.dim);
        let fact = factorial(self.dim);
        let k = Q::from_integer(BigInt::from(self.dim as u64 + 1));
        for simplex in self.triangulation()? {
            let v0 = &self.vertices[simplex[0]];
            let edges: Vec<RationalVector> = simplex[1..]
                .iter()
                .map(|&i| &self.vertices[i] - v0)
                .collect();
            let sv = det(&edges).abs() / &fact;
            let mut sum = RationalVector::zeros(self.dim);
            for &i in &simplex {
                sum = &sum + &self.vertices[i];
            }
            first = &first + &sum.scale(&(&sv / &k));
            vol += sv;
        }
        Ok((vol, first))
    }
}

pub(crate) fn factorial(n: usize) -> Q {
    (1..=n as u64).fold(Q::one(), |acc, k| acc * Q::from_integer(BigInt::from(k)))
}

type Memo = BTreeMap<Vec<usize>, Vec<Vec<usize>>>;

/// Pulling triangulation of the face with vertex set `face` and dimension `d`.
fn pull(
    verts: &[RationalVector],
    face: &BTreeSet<usize>,
    d: usize,
    tight: &[BTreeSet<usize>],
    memo: &mut Memo,
) -> Vec<Vec<usize>> {
    let key: Vec<usize> = face.iter().copied().collect();
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let apex = key[0];
    let out = if d == 0 {
        vec![vec![apex]]
    } else {
        let mut subfaces = BTreeSet::new();
        for t in tight {
            let sub: BTreeSet<usize> = face.intersection(t).copied().collect();
            if sub.len() < d || sub.contains(&apex) {
                continue;
            }
            let pts: Vec<RationalVector> = sub.iter().map(|&i| verts[i].clone()).collect();
            if affine_dim(&pts) == d - 1 {
                subfaces.insert(sub.into_iter().collect::<Vec<_>>());
            }
        }
        let mut out = Vec::new();
        for sub in subfaces {
            let sub: BTreeSet<usize> = sub.into_iter().collect();
            for mut s in pull(verts, &sub, d - 1, tight, memo) {
                s.insert(0, apex);
                out.push(s);
            }
        }
        out
    };
    memo.insert(key, out.clone());
    out
}

/// Exact Euclidean volume of a bounded polytope (zero if not full-dimensional).
pub fn volume(p: &Polytope) -> Result<Q> {
    Ok(p.first_moment()?.0)
}

/// Exact volume-weighted centroid.
pub fn barycenter(p: &Polytope) -> Result<RationalVector> {
    let (vol, first) = p.first_moment()?;
    if vol.is_zero() {
        return Err(Error::ZeroVolume);
    }
    Ok(first.scale(&(Q::one() / vol)))
}

fn check_slice(c: &Cone, xi: &RationalVector, level: &Q) -> Result<()> {
    if xi.dim() != c.rank() {
        return Err(Error::DimensionMismatch {
            expected: c.rank(),
            got: xi.dim(),
        });
    }
    if let Some(r) = c.rays().iter().find(|r| !xi.dot(r).is_positive()) {
        return Err(Error::UnboundedSlice(r.clone()));
    }
    if level.is_negative() {
        return Err(Error::InvalidArgument(format!(
            "negative slice level {level}"
        )));
    }
    Ok(())
}

fn cone_halfspaces(c: &Cone) -> Vec<Halfspace> {
    c.halfspaces()
        .iter()
        .map(|h| Halfspace::at_least(h, &Q::zero()))
        .collect()
}

/// `{α ∈ c : ⟨α, ξ⟩ ≤ level}`.
pub fn slice_polytope(c: &Cone, xi: &RationalVector, level: &Q) -> Result<Polytope> {
    check_slice(c, xi, level)?;
    let n = c.rank();
    let mut vertices: BTreeSet<RationalVector> = c
        .rays()
        .iter()
        .map(|r| r.scale(&(level / xi.dot(r))))
        .collect();
    vertices.insert(RationalVector::zeros(n));
    let mut halfspaces = cone_halfspaces(c);
    halfspaces.push(Halfspace::new(xi.clone(), level.clone()));
    Ok(Polytope {
        dim: n,
        vertices: vertices.into_iter().collect(),
        rays: Vec::new(),
        halfspaces,
    })
}

/// `{α ∈ c : ⟨α, ξ⟩ = level}`, of dimension `rank - 1`.
pub fn level_polytope(c: &Cone, xi: &RationalVector, level: &Q) -> Result<Polytope> {
    check_slice(c, xi, level)?;
    let vertices: BTreeSet<RationalVector> = c
        .rays()
        .iter()
        .map(|r| r.scale(&(level / xi.dot(r))))
        .collect();
    let mut halfspaces = cone_halfspaces(c);
    halfspaces.push(Halfspace::new(xi.clone(), level.clone()));
    halfspaces.push(Halfspace::at_least(xi, level));
    Ok(Polytope {
        dim: c.rank(),
        vertices: vertices.into_iter().collect(),
        rays: Vec::new(),
        halfspaces,
    })
}
