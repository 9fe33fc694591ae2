use std::collections::BTreeSet;

use num::{Signed, Zero};

use super::lp::{lp_solve, Constraint, Relation, Sense};
use super::polytope::{Halfspace, Polytope};
use super::{int, Cone, RationalVector, Q};
use crate::error::{Error, Result};

/// A positively homogeneous concave function `g(α) = min_j ⟨ζ_j, α⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLConcave {
    covectors: Vec<RationalVector>,
}

impl PLConcave {
    pub fn new(covectors: Vec<RationalVector>) -> Result<Self> {
        let n = covectors.first().ok_or(Error::EmptyInput)?.dim();
        if let Some(z) = covectors.iter().find(|z| z.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: z.dim(),
            });
        }
        let covectors = covectors
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        Ok(PLConcave { covectors })
    }

    pub fn linear(zeta: RationalVector) -> Self {
        PLConcave {
            covectors: vec![zeta],
        }
    }

    pub fn dim(&self) -> usize {
        self.covectors[0].dim()
    }

    pub fn covectors(&self) -> &[RationalVector] {
        &self.covectors
    }

    pub fn is_linear(&self) -> bool {
        self.covectors.len() == 1
    }

    pub fn eval(&self, alpha: &RationalVector) -> Q {
        self.covectors
            .iter()
            .map(|z| z.dot(alpha))
            .min()
            .expect("nonempty covector list")
    }

    /// Index of a covector attaining the minimum at `alpha`.
    pub fn active(&self, alpha: &RationalVector) -> usize {
        let vals: Vec<Q> = self.covectors.iter().map(|z| z.dot(alpha)).collect();
        let min = vals.iter().min().expect("nonempty").clone();
        vals.iter()
            .position(|v| *v == min)
            .expect("min is attained")
    }

    pub fn scale(&self, a: &Q) -> Self {
        PLConcave::new(self.covectors.iter().map(|z| z.scale(a)).collect())
            .expect("scaling keeps the list nonempty")
    }

    pub fn shift(&self, xi: &RationalVector) -> Self {
        PLConcave::new(self.covectors.iter().map(|z| z + xi).collect())
            .expect("shifting keeps the list nonempty")
    }

    /// Drop covectors that are nowhere strictly below the others on `cone`.
    /// Two functions agree on `cone` iff their reductions are equal.
    pub fn reduce(&self, cone: &Cone) -> Result<Self> {
        let gauge = cone
            .halfspaces()
            .iter()
            .fold(RationalVector::zeros(cone.rank()), |acc, h| &acc + h);
        let mut kept = self.covectors.clone();
        let mut j = 0;
        while j < kept.len() && kept.len() > 1 {
            if is_active(&kept, j, cone, &gauge)? {
                j += 1;
            } else {
                kept.remove(j);
            }
        }
        Ok(PLConcave { covectors: kept })
    }
}

/// Whether covector `j` is the strict minimum somewhere in the interior of `cone`.
fn is_active(zs: &[RationalVector], j: usize, cone: &Cone, gauge: &RationalVector) -> Result<bool> {
    let n = cone.rank();
    // variables (α, t): maximize t subject to ⟨ζ_k - ζ_j, α⟩ ≥ t, α ∈ cone, ⟨gauge, α⟩ = 1
    let lift = |v: &RationalVector, t: Q| {
        let mut c = v.0.clone();
        c.push(t);
        RationalVector(c)
    };
    let mut cons = Vec::new();
    for (k, z) in zs.iter().enumerate() {
        if k != j {
            cons.push(Constraint::new(
                lift(&(z - &zs[j]), int(-1)),
                Relation::Ge,
                Q::zero(),
            ));
        }
    }
    for h in cone.halfspaces() {
        cons.push(Constraint::new(lift(h, Q::zero()), Relation::Ge, Q::zero()));
    }
    cons.push(Constraint::new(
        lift(gauge, Q::zero()),
        Relation::Eq,
        int(1),
    ));
    let obj = lift(&RationalVector::zeros(n), int(1));
    let sol = lp_solve(&obj, &cons, Sense::Max)?;
    Ok(sol.value.is_positive())
}

/// Exact `∫_p g` over a bounded polytope, summing `∫ ⟨ζ_j, ·⟩` over the chambers
/// where `ζ_j` attains the minimum.
pub fn integrate_pl(p: &Polytope, g: &PLConcave) -> Result<Q> {
    if !p.is_bounded() {
        return Err(Error::Unbounded);
    }
    if p.is_empty() || p.affine_dim() != Some(p.dim()) {
        return Ok(Q::zero());
    }
    let zs = g.covectors();
    if zs.len() == 1 {
        let (_, first) = p.first_moment()?;
        return Ok(zs[0].dot(&first));
    }
    let mut total = Q::zero();
    for (j, zj) in zs.iter().enumerate() {
        let mut hs = p.halfspaces().to_vec();
        for (k, zk) in zs.iter().enumerate() {
            if k != j {
                hs.push(Halfspace::new(zj - zk, Q::zero()));
            }
        }
        let chamber = Polytope::from_halfspaces(p.dim(), hs)?;
        if chamber.is_empty() {
            continue;
        }
        let (_, first) = chamber.first_moment()?;
        total += zj.dot(&first);
    }
    Ok(total)
}
