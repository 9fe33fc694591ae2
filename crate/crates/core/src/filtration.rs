//! T-invariant linearly bounded monomial filtrations.
//!
//! A filtration is stored through its concave transform `g = min_j ⟨ζ_j, ·⟩`
//! on the weight cone `σ∨`; `F^λ` is spanned by the monomials `x^α` with
//! `g(α) ≥ λ`. The covector list is always kept reduced on `σ∨`, so two
//! filtrations on the same singularity are equal iff their lists are.

use std::collections::HashMap;
use std::sync::Arc;

use num::{BigInt, Integer, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactgeom::lattice::{dot, enumerate_below, hilbert_basis};
use crate::exactgeom::{
    int, lp_solve, Constraint, Halfspace, PLConcave, Polytope, RationalVector, Relation, Sense, Q,
};
use crate::singularity::ConeSingularity;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialFiltration {
    ambient: Arc<ConeSingularity>,
    transform: PLConcave,
    primary: bool,
}

/// `{α ∈ σ∨ : g(α) ≥ 1}`, with recession cone `σ∨`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolyhedron {
    pub polytope: Polytope,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Saturation {
    pub filtration: MonomialFiltration,
    pub already_saturated: bool,
}

impl NewtonPolyhedron {
    pub fn vertices(&self) -> &[RationalVector] {
        self.polytope.vertices()
    }

    /// `max{λ ≥ 0 : α ∈ λ·N}` computed from the V-representation alone.
    pub fn gauge(&self, alpha: &RationalVector) -> Result<Q> {
        let verts = self.polytope.vertices();
        let rays = self.polytope.recession_rays();
        let k = verts.len() + rays.len();
        let n = alpha.dim();
        // α = Σ μ_v v + Σ ν_r r with μ, ν ≥ 0; maximize Σ μ_v
        let gens: Vec<&RationalVector> = verts.iter().chain(rays).collect();
        let mut cons = Vec::new();
        for i in 0..n {
            let row = RationalVector(gens.iter().map(|g| g[i].clone()).collect());
            cons.push(Constraint::new(row, Relation::Eq, alpha[i].clone()));
        }
        for j in 0..k {
            cons.push(Constraint::new(
                RationalVector::unit(k, j),
                Relation::Ge,
                Q::zero(),
            ));
        }
        let obj = RationalVector(
            (0..k)
                .map(|j| if j < verts.len() { int(1) } else { Q::zero() })
                .collect(),
        );
        match lp_solve(&obj, &cons, Sense::Max) {
            Ok(sol) => Ok(sol.value),
            Err(Error::Infeasible { .. }) => Err(Error::OutsideWeightCone(alpha.clone())),
            Err(e) => Err(e),
        }
    }
}

/// Integer form of a transform for lattice hot loops: `g(α) = min_j ⟨z_j, α⟩ / den`.
#[derive(Clone, Debug)]
pub struct IntegerTransform {
    pub covectors: Vec<Vec<i64>>,
    pub den: i64,
}

impl IntegerTransform {
    pub fn new(g: &PLConcave) -> Result<Self> {
        let den = g
            .covectors()
            .iter()
            .flat_map(|z| z.coords())
            .fold(BigInt::from(1), |acc, a| acc.lcm(a.denom()));
        let scale = Q::from_integer(den.clone());
        let covectors = g
            .covectors()
            .iter()
            .map(|z| z.scale(&scale).to_i64().ok_or_else(overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntegerTransform {
            covectors,
            den: den.to_i64().ok_or_else(overflow)?,
        })
    }

    /// `den · g(α)`.
    pub fn scaled(&self, alpha: &[i64]) -> i64 {
        self.covectors
            .iter()
            .map(|z| dot(z, alpha))
            .min()
            .expect("nonempty transform")
    }

    /// `⌊g(α)⌋`, the order under the ℕ-rounded filtration.
    pub fn floor(&self, alpha: &[i64]) -> i64 {
        Integer::div_floor(&self.scaled(alpha), &self.den)
    }
}

fn overflow() -> Error {
    Error::InvalidArgument("transform does not fit in 64-bit integers".into())
}

impl MonomialFiltration {
    /// The filtration with transform `min_j ⟨ζ_j, ·⟩`, reduced on `σ∨`.
    pub fn new(s: &ConeSingularity, covectors: Vec<RationalVector>) -> Result<Self> {
        Self::build(Arc::new(s.clone()), covectors, true)
    }

    /// Like [`new`](Self::new) but only requiring `g ≥ 0` on `σ∨` and
    /// `g ≢ 0`, which admits divisorial filtrations such as `F_D` for a
    /// boundary divisor `D`. Only the closed-form invariants accept these.
    pub fn nonnegative(s: &ConeSingularity, covectors: Vec<RationalVector>) -> Result<Self> {
        Self::build(Arc::new(s.clone()), covectors, false)
    }

    fn build(
        ambient: Arc<ConeSingularity>,
        covectors: Vec<RationalVector>,
        require_primary: bool,
    ) -> Result<Self> {
        let g = PLConcave::new(covectors)?;
        if g.dim() != ambient.rank() {
            return Err(Error::DimensionMismatch {
                expected: ambient.rank(),
                got: g.dim(),
            });
        }
        // g > 0 on σ∨ \ {0} iff it is positive on every extreme ray
        let rays = ambient.weight_cone().rays();
        let values: Vec<Q> = rays.iter().map(|r| g.eval(r)).collect();
        if let Some(i) = values.iter().position(|x| x.is_negative()) {
            return Err(Error::NotPrimary(rays[i].clone()));
        }
        let primary = values.iter().all(|x| x.is_positive());
        if !primary && (require_primary || values.iter().all(|x| x.is_zero())) {
            let i = values
                .iter()
                .position(|x| x.is_zero())
                .expect("some ray vanishes");
            return Err(Error::NotPrimary(rays[i].clone()));
        }
        let transform = g.reduce(ambient.weight_cone())?;
        Ok(MonomialFiltration {
            ambient,
            transform,
            primary,
        })
    }

    /// Derived filtrations must stay primary when their inputs are.
    fn derive(&self, covectors: Vec<RationalVector>) -> Result<Self> {
        Self::build(self.ambient.clone(), covectors, self.primary)
    }

    /// Whether every `F^λ`, `λ > 0`, is `𝔪_x`-primary.
    pub fn is_primary(&self) -> bool {
        self.primary
    }

    fn require_primary(&self) -> Result<()> {
        if self.primary {
            return Ok(());
        }
        let r = self
            .ambient
            .weight_cone()
            .rays()
            .iter()
            .find(|r| self.transform.eval(r).is_zero())
            .expect("non-primary transform vanishes on a ray");
        Err(Error::NotPrimary(r.clone()))
    }

    /// `F_{wt_ξ}`, allowed for `ξ` in the closed Reeb cone when still primary.
    pub fn toric(s: &ConeSingularity, xi: &RationalVector) -> Result<Self> {
        Self::new(s, vec![xi.clone()])
    }

    pub fn ambient(&self) -> &ConeSingularity {
        &self.ambient
    }

    pub fn transform(&self) -> &PLConcave {
        &self.transform
    }

    pub fn covectors(&self) -> &[RationalVector] {
        self.transform.covectors()
    }

    pub fn is_toric(&self) -> bool {
        self.transform.is_linear()
    }

    pub fn same_ambient(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ambient, &other.ambient) || self.ambient == other.ambient
    }

    /// `aF`, with `(aF)^λ = F^{λ/a}`.
    pub fn rescale(&self, a: &Q) -> Result<Self> {
        if !a.is_positive() {
            return Err(Error::NonpositiveScale(a.clone()));
        }
        self.derive(self.transform.scale(a).covectors().to_vec())
    }

    /// `F_ξ`, shifting every covector by `ξ`.
    pub fn twist(&self, xi: &RationalVector) -> Result<Self> {
        if xi.dim() != self.ambient.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient.rank(),
                got: xi.dim(),
            });
        }
        self.derive(self.transform.shift(xi).covectors().to_vec())
    }

    /// The geodesic point `Σ wᵢ Fᵢ`, whose order is `Σ wᵢ ord_{Fᵢ}`.
    pub fn geodesic(filtrations: &[MonomialFiltration], weights: &[Q]) -> Result<Self> {
        let first = filtrations.first().ok_or(Error::EmptyInput)?;
        if filtrations.len() != weights.len() {
            return Err(Error::InvalidArgument(format!(
                "{} filtrations but {} weights",
                filtrations.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| w.is_negative()) || weights.iter().all(|w| w.is_zero()) {
            return Err(Error::InvalidArgument(
                "geodesic weights must be nonnegative and not all zero".into(),
            ));
        }
        if filtrations.iter().any(|f| !f.same_ambient(first)) {
            return Err(Error::AmbientMismatch);
        }
        let cone = first.ambient.weight_cone();
        let mut acc = PLConcave::linear(RationalVector::zeros(first.ambient.rank()));
        for (f, w) in filtrations.iter().zip(weights) {
            if w.is_zero() {
                continue;
            }
            // Σᵢ min_j ℓ_ij = min over selections of Σᵢ ℓ_{i j(i)}
            let mut sums = Vec::new();
            for a in acc.covectors() {
                for z in f.covectors() {
                    sums.push(a + &z.scale(w));
                }
            }
            acc = PLConcave::new(sums)?.reduce(cone)?;
        }
        let primary = filtrations.iter().all(|f| f.primary);
        Self::build(first.ambient.clone(), acc.covectors().to_vec(), primary)
    }

    /// `F ∩ G`, with `ord = min(ord_F, ord_G)`.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        if !self.same_ambient(other) {
            return Err(Error::AmbientMismatch);
        }
        let mut zs = self.covectors().to_vec();
        zs.extend_from_slice(other.covectors());
        Self::build(self.ambient.clone(), zs, self.primary && other.primary)
    }

    pub fn newton_polyhedron(&self) -> Result<NewtonPolyhedron> {
        let n = self.ambient.rank();
        let mut hs: Vec<Halfspace> = self
            .ambient
            .weight_cone()
            .halfspaces()
            .iter()
            .map(|h| Halfspace::at_least(h, &Q::zero()))
            .collect();
        hs.extend(
            self.covectors()
                .iter()
                .map(|z| Halfspace::at_least(z, &int(1))),
        );
        Ok(NewtonPolyhedron {
            polytope: Polytope::from_halfspaces(n, hs)?,
        })
    }

    /// `wt_ξ(F) = min over the Newton vertices of ⟨ξ, ·⟩`.
    pub fn value_under(&self, xi: &RationalVector) -> Result<Q> {
        if !self.ambient.reeb_contains(xi) {
            return Err(Error::NotReeb(xi.clone()));
        }
        let newton = self.newton_polyhedron()?;
        Ok(newton
            .vertices()
            .iter()
            .map(|v| xi.dot(v))
            .min()
            .expect("Newton polyhedron has vertices"))
    }

    /// The gauge filtration of the Newton polyhedron, rebuilt from its
    /// vertices and rays by polarity.
    pub fn saturate(&self) -> Result<Saturation> {
        let newton = self.newton_polyhedron()?;
        let n = self.ambient.rank();
        let mut hs: Vec<Halfspace> = newton
            .vertices()
            .iter()
            .map(|v| Halfspace::at_least(v, &int(1)))
            .collect();
        hs.extend(
            newton
                .polytope
                .recession_rays()
                .iter()
                .map(|r| Halfspace::at_least(r, &Q::zero())),
        );
        let polar = Polytope::from_halfspaces(n, hs)?;
        let filtration = self.derive(polar.vertices().to_vec())?;
        let already_saturated = filtration == *self;
        Ok(Saturation {
            filtration,
            already_saturated,
        })
    }

    fn check_weight(&self, alpha: &RationalVector) -> Result<()> {
        if alpha.dim() != self.ambient.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient.rank(),
                got: alpha.dim(),
            });
        }
        if !self.ambient.weight_cone().contains(alpha) {
            return Err(Error::OutsideWeightCone(alpha.clone()));
        }
        Ok(())
    }

    /// `ord_F(x^α) = g(α)`.
    pub fn ord_of(&self, alpha: &RationalVector) -> Result<Q> {
        self.check_weight(alpha)?;
        Ok(self.transform.eval(alpha))
    }

    /// `g_F ≤ g_G` on `σ∨`, i.e. `F ⊆ G`.
    pub fn is_contained_in(&self, other: &Self) -> Result<bool> {
        if !self.same_ambient(other) {
            return Err(Error::AmbientMismatch);
        }
        let cone = self.ambient.weight_cone();
        let gauge = cone
            .halfspaces()
            .iter()
            .fold(RationalVector::zeros(cone.rank()), |a, h| &a + h);
        let n = cone.rank();
        let lift = |v: &RationalVector, t: i64| {
            let mut c = v.0.clone();
            c.push(int(t));
            RationalVector(c)
        };
        for zg in other.covectors() {
            // max t s.t. t ≤ ⟨ζ_j − ζ_G, α⟩ on the gauge slice of σ∨
            let mut cons: Vec<Constraint> = self
                .covectors()
                .iter()
                .map(|z| Constraint::new(lift(&(z - zg), -1), Relation::Ge, Q::zero()))
                .collect();
            cons.extend(
                cone.halfspaces()
                    .iter()
                    .map(|h| Constraint::new(lift(h, 0), Relation::Ge, Q::zero())),
            );
            cons.push(Constraint::new(lift(&gauge, 0), Relation::Eq, int(1)));
            let obj = lift(&RationalVector::zeros(n), 1);
            if lp_solve(&obj, &cons, Sense::Max)?.value.is_positive() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A fixed Reeb covector for internal lattice orderings: the sum of the rays of `σ`.
    fn reference_reeb(&self) -> RationalVector {
        let s = self.ambient.sigma();
        s.rays()
            .iter()
            .fold(RationalVector::zeros(s.rank()), |a, r| &a + r)
    }

    fn integer_weight_point(&self, alpha: &RationalVector) -> Result<Vec<i64>> {
        self.check_weight(alpha)?;
        alpha
            .to_i64()
            .ok_or_else(|| Error::InvalidArgument(format!("{alpha} is not a lattice point")))
    }

    /// `ord_{F_m}(x^α)` for the approximating filtration `F_m`: the best
    /// split of `α` into nonzero lattice blocks `β`, each worth
    /// `min(⌊g(β)⌋, m)`.
    pub fn approx_ord(&self, m: u64, alpha: &RationalVector, cap: usize) -> Result<Q> {
        if m == 0 {
            return Err(Error::InvalidArgument(
                "approximation level must be at least 1".into(),
            ));
        }
        self.require_primary()?;
        let a = self.integer_weight_point(alpha)?;
        let reference = self.reference_reeb();
        let cone = self.ambient.weight_cone();
        let pts: Vec<Vec<i64>> =
            enumerate_below(cone, &reference, &reference.dot(alpha), true, cap)?
                .into_iter()
                .filter(|b| {
                    let rest: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
                    cone.contains(&RationalVector::from_ints(&rest))
                })
                .collect();
        let h = block_values(self, m, &reference, pts)?;
        Ok(int(h.get(&a).map(|(best, _)| *best).unwrap_or(0)))
    }

    /// The approximating filtration `F_m` as a monomial filtration, with
    /// transform `g_m(α) = max{Σ c_β min(⌊g(β)⌋, m) : Σ c_β β = α, c ≥ 0}`.
    ///
    /// Blocks `β` of weight beyond `(m + c)/λ_min` (with `c` the largest value
    /// of a covector on the Hilbert basis) always split into a Hilbert basis
    /// element and a block already worth `m`, so the window is finite.
    pub fn approximant(&self, m: u64, cap: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument(
                "approximation level must be at least 1".into(),
            ));
        }
        self.require_primary()?;
        let reference = self.reference_reeb();
        let cone = self.ambient.weight_cone();
        let lambda_min = cone
            .rays()
            .iter()
            .map(|r| self.transform.eval(r) / reference.dot(r))
            .min()
            .expect("weight cone has rays");
        let c = hilbert_basis(cone)?
            .iter()
            .flat_map(|h| {
                let h = RationalVector::from_ints(h);
                self.covectors()
                    .iter()
                    .map(move |z| z.dot(&h))
                    .collect::<Vec<_>>()
            })
            .max()
            .expect("nonempty Hilbert basis");
        let bound = (int(m as i64) + c) / lambda_min;
        let pts = enumerate_below(cone, &reference, &bound, true, cap)?;
        let table = block_values(self, m, &reference, pts)?;
        let n = self.ambient.rank();
        let mut hs: Vec<Halfspace> = self
            .ambient
            .sigma()
            .halfspaces()
            .iter()
            .map(|h| Halfspace::at_least(h, &Q::zero()))
            .collect();
        let mut kept: Vec<(&Vec<i64>, i64)> = table
            .iter()
            .filter(|(_, (_, essential))| *essential)
            .map(|(b, (v, _))| (b, *v))
            .collect();
        kept.sort();
        hs.extend(
            kept.into_iter()
                .map(|(b, v)| Halfspace::at_least(&RationalVector::from_ints(b), &int(v))),
        );
        let q = Polytope::from_halfspaces(n, hs)?;
        self.derive(q.vertices().to_vec())
    }
}

/// DP over a down-closed lattice window ordered by `reference`:
/// `h(β) = max(μ(β), max_γ μ(γ) + h(β − γ))` with `μ = min(⌊g⌋, m)`.
/// Each entry also records whether `β` is essential, i.e. `μ(β)` strictly
/// beats every proper split.
fn block_values(
    f: &MonomialFiltration,
    m: u64,
    reference: &RationalVector,
    mut pts: Vec<Vec<i64>>,
) -> Result<HashMap<Vec<i64>, (i64, bool)>> {
    let it = IntegerTransform::new(f.transform())?;
    let w = IntegerTransform::new(&PLConcave::linear(reference.clone()))?;
    pts.sort_by_key(|p| (w.scaled(p), p.clone()));
    let m = m as i64;
    let mu = |b: &[i64]| it.floor(b).min(m);
    let mut table: HashMap<Vec<i64>, (i64, bool)> = HashMap::with_capacity(pts.len());
    let nonzero: Vec<&Vec<i64>> = pts.iter().filter(|p| p.iter().any(|&x| x != 0)).collect();
    table.insert(vec![0; reference.dim()], (0, false));
    for (i, b) in nonzero.iter().enumerate() {
        let mut split = i64::MIN;
        for g in &nonzero[..i] {
            let rest: Vec<i64> = b.iter().zip(g.iter()).map(|(x, y)| x - y).collect();
            if let Some((hr, _)) = table.get(&rest) {
                if rest.iter().any(|&x| x != 0) {
                    split = split.max(mu(g) + hr);
                }
            }
        }
        let own = mu(b);
        table.insert((*b).clone(), (own.max(split), own > split));
    }
    Ok(table)
}
