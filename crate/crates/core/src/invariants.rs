//! Closed-form invariants of a polarized toric cone singularity `(X, Δ, ξ₀)`
//! and monomial filtrations on it.
//!
//! The Okounkov body is `O = {α ∈ σ∨ : ⟨α, ξ₀⟩ ≤ 1}` and the moment slice is
//! `P = {α ∈ σ∨ : ⟨α, ξ₀⟩ = 1}`. With `α₀ = (n+1)/n · bary(O)` (the cone
//! measure centroid of `P`), every toric filtration has `S(ξ₀; wt_η) = ⟨α₀, η⟩`.

use std::collections::BTreeMap;

use num::{BigInt, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactgeom::{
    barycenter, from_f64, int, integrate_pl, level_polytope, linalg, lp_solve, serde_opt_q,
    serde_q, slice_polytope, to_decimal, to_f64, volume, Constraint, Halfspace, Polytope,
    RationalVector, Relation, Sense, Q,
};
use crate::filtration::MonomialFiltration;
use crate::optimize::{fractional_lp, kelley_minimize, Feasible};
use crate::singularity::ConeSingularity;

/// Default duality-gap tolerance of the cutting-plane solver.
pub fn default_tolerance() -> Q {
    Q::new(BigInt::one(), BigInt::from(1_000_000_000u64))
}

/// Iteration cap of the cutting-plane solver.
pub const KELLEY_MAX_ITER: usize = 500;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OkounkovBody {
    pub body: Polytope,
    pub moment: Polytope,
    pub vol: Q,
    pub bary: RationalVector,
    pub alpha0: RationalVector,
}

fn check_reeb(s: &ConeSingularity, xi: &RationalVector) -> Result<()> {
    if xi.dim() != s.rank() {
        return Err(Error::DimensionMismatch {
            expected: s.rank(),
            got: xi.dim(),
        });
    }
    if !s.reeb_contains(xi) {
        return Err(Error::NotReeb(xi.clone()));
    }
    Ok(())
}

fn rank_q(n: usize) -> Q {
    int(n as i64)
}

fn factorial(n: usize) -> Q {
    (1..=n as i64).fold(Q::one(), |a, k| a * int(k))
}

pub fn okounkov_body(s: &ConeSingularity, xi0: &RationalVector) -> Result<OkounkovBody> {
    check_reeb(s, xi0)?;
    let n = s.rank();
    let body = slice_polytope(s.weight_cone(), xi0, &int(1))?;
    let moment = level_polytope(s.weight_cone(), xi0, &int(1))?;
    let vol = volume(&body)?;
    let bary = barycenter(&body)?;
    let alpha0 = bary.scale(&(rank_q(n + 1) / rank_q(n)));
    Ok(OkounkovBody {
        body,
        moment,
        vol,
        bary,
        alpha0,
    })
}

/// `vol(ξ) = n!·vol(O(ξ))`, the multiplicity of `wt_ξ`.
pub fn vol(s: &ConeSingularity, xi: &RationalVector) -> Result<Q> {
    check_reeb(s, xi)?;
    let body = slice_polytope(s.weight_cone(), xi, &int(1))?;
    Ok(factorial(s.rank()) * volume(&body)?)
}

pub fn nvol(s: &ConeSingularity, xi: &RationalVector) -> Result<Q> {
    let a = s.log_discrepancy(xi);
    Ok(num::pow(a, s.rank()) * vol(s, xi)?)
}

/// `∇vol(ξ) = −(n+1)!·vol(O(ξ))·bary(O(ξ))`.
pub fn vol_gradient(s: &ConeSingularity, xi: &RationalVector) -> Result<RationalVector> {
    check_reeb(s, xi)?;
    let body = slice_polytope(s.weight_cone(), xi, &int(1))?;
    let v = volume(&body)?;
    let b = barycenter(&body)?;
    Ok(b.scale(&(-(factorial(s.rank() + 1) * v))))
}

/// A simplicial subdivision of `σ∨` by its own rays, as pairs
/// `(rays, |det|)`; then `vol(ξ) = Σ |det| / Π ⟨r, ξ⟩`.
pub fn fan_simplices(s: &ConeSingularity) -> Result<Vec<(Vec<RationalVector>, Q)>> {
    let n = s.rank();
    let reference = s
        .rays()
        .iter()
        .fold(RationalVector::zeros(n), |a, r| &a + r);
    let body = slice_polytope(s.weight_cone(), &reference, &int(1))?;
    let verts = body.vertices();
    let mut out = Vec::new();
    for simplex in body.triangulation()? {
        // every vertex but the apex lies on the level set, so each simplex contains 0
        let rays: Vec<RationalVector> = simplex
            .iter()
            .map(|&i| &verts[i])
            .filter(|v| !v.is_zero())
            .map(|v| v.primitive())
            .collect();
        debug_assert_eq!(rays.len(), n);
        let d = linalg::det(&rays).abs();
        out.push((rays, d));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lct {
    pub value: Q,
    /// A toric valuation `wt_ξ*` computing the threshold.
    pub minimizer: RationalVector,
}

/// `lct(X, Δ; F) = min{A(ξ) : ξ ∈ σ, wt_ξ(F) ≥ 1}`, one LP over the
/// vertices of the Newton polyhedron.
pub fn lct_monomial(s: &ConeSingularity, f: &MonomialFiltration) -> Result<Lct> {
    if f.ambient() != s {
        return Err(Error::AmbientMismatch);
    }
    let newton = f.newton_polyhedron()?;
    let mut cons: Vec<Constraint> = s
        .sigma()
        .halfspaces()
        .iter()
        .map(|h| Constraint::new(h.clone(), Relation::Ge, Q::zero()))
        .collect();
    cons.extend(
        newton
            .vertices()
            .iter()
            .map(|p| Constraint::new(p.clone(), Relation::Ge, int(1))),
    );
    let sol = lp_solve(s.log_discrepancy_covector(), &cons, Sense::Min)?;
    Ok(Lct {
        value: sol.value,
        minimizer: sol.argopt,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaMax {
    pub value: Q,
    /// A vertex of `P` maximizing `g`.
    pub argmax: RationalVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaT {
    pub value: Q,
    pub minimizer_ray: RationalVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub semistable: bool,
    /// `u − A(ξ₀)·α₀`; zero iff `Fut` vanishes on all of `N`.
    pub certificate: RationalVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedJ {
    pub upper: Q,
    pub lower: Q,
    /// A twist in the closed Reeb cone attaining `upper`.
    pub twist: RationalVector,
    pub iterations: usize,
}

/// A singularity together with its polarization `ξ₀`, caching the Okounkov body.
#[derive(Clone, Debug)]
pub struct Polarization {
    singularity: ConeSingularity,
    xi0: RationalVector,
    a0: Q,
    body: OkounkovBody,
}

impl Polarization {
    pub fn new(s: &ConeSingularity, xi0: &RationalVector) -> Result<Self> {
        let body = okounkov_body(s, xi0)?;
        Ok(Polarization {
            singularity: s.clone(),
            xi0: xi0.clone(),
            a0: s.log_discrepancy(xi0),
            body,
        })
    }

    pub fn singularity(&self) -> &ConeSingularity {
        &self.singularity
    }

    pub fn xi0(&self) -> &RationalVector {
        &self.xi0
    }

    /// `A(ξ₀)`.
    pub fn a0(&self) -> &Q {
        &self.a0
    }

    pub fn body(&self) -> &OkounkovBody {
        &self.body
    }

    pub fn alpha0(&self) -> &RationalVector {
        &self.body.alpha0
    }

    pub fn vol(&self) -> Q {
        factorial(self.singularity.rank()) * &self.body.vol
    }

    pub fn nvol(&self) -> Q {
        num::pow(self.a0.clone(), self.singularity.rank()) * self.vol()
    }

    fn check(&self, f: &MonomialFiltration) -> Result<()> {
        if *f.ambient() != self.singularity {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    /// `S(ξ₀; F) = (n+1)/n · ∫_O g / vol(O)`.
    pub fn s_invariant(&self, f: &MonomialFiltration) -> Result<Q> {
        self.check(f)?;
        let n = self.singularity.rank();
        let integral = integrate_pl(&self.body.body, f.transform())?;
        Ok(rank_q(n + 1) / rank_q(n) * integral / &self.body.vol)
    }

    fn max_on_moment(&self, covectors: &[RationalVector]) -> Result<LambdaMax> {
        let n = self.singularity.rank();
        let lift = |v: &RationalVector, t: i64| {
            let mut c = v.0.clone();
            c.push(int(t));
            RationalVector(c)
        };
        // max t subject to t ≤ ⟨ζ_j, α⟩, α ∈ σ∨, ⟨α, ξ₀⟩ = 1
        let mut cons: Vec<Constraint> = covectors
            .iter()
            .map(|z| Constraint::new(lift(z, -1), Relation::Ge, Q::zero()))
            .collect();
        cons.extend(
            self.singularity
                .weight_cone()
                .halfspaces()
                .iter()
                .map(|h| Constraint::new(lift(h, 0), Relation::Ge, Q::zero())),
        );
        cons.push(Constraint::new(lift(&self.xi0, 0), Relation::Eq, int(1)));
        let sol = lp_solve(&RationalVector::unit(n + 1, n), &cons, Sense::Max)?;
        Ok(LambdaMax {
            value: sol.value,
            argmax: RationalVector(sol.argopt.0[..n].to_vec()),
        })
    }

    /// `λ_max(ξ₀; F) = max_P g`, by the epigraph LP.
    pub fn lambda_max(&self, f: &MonomialFiltration) -> Result<LambdaMax> {
        self.check(f)?;
        self.max_on_moment(f.covectors())
    }

    /// `λ_min(ξ₀; F) = min_P g`, attained at a vertex of `P`.
    pub fn lambda_min(&self, f: &MonomialFiltration) -> Result<Q> {
        self.check(f)?;
        Ok(self
            .body
            .moment
            .vertices()
            .iter()
            .map(|p| f.transform().eval(p))
            .min()
            .expect("P has vertices"))
    }

    /// `J(ξ₀; F) = λ_max − S`.
    pub fn j_norm(&self, f: &MonomialFiltration) -> Result<Q> {
        Ok(self.lambda_max(f)?.value - self.s_invariant(f)?)
    }

    pub fn lct(&self, f: &MonomialFiltration) -> Result<Lct> {
        lct_monomial(&self.singularity, f)
    }

    /// `D(F) = lct(F) − A(ξ₀)·S(ξ₀; F)`.
    pub fn ding(&self, f: &MonomialFiltration) -> Result<Q> {
        Ok(self.lct(f)?.value - &self.a0 * self.s_invariant(f)?)
    }

    /// `Fut(ξ₀; η) = A(η) − A(ξ₀)·S(ξ₀; wt_η)` for the product configuration of `η`.
    pub fn futaki_product(&self, eta: &RationalVector) -> Q {
        self.singularity.log_discrepancy(eta) - &self.a0 * self.alpha0().dot(eta)
    }

    /// `Fut(ξ₀; η) = D_{T(η)} vol(ξ₀) / vol(ξ₀)` with
    /// `T(η) = (A(ξ₀)η − A(η)ξ₀)/n` and `D_w vol = −(n+1)!·vol(O)·⟨bary(O), w⟩`.
    pub fn futaki_derivative(&self, eta: &RationalVector) -> Q {
        let n = self.singularity.rank();
        let t = (&eta.scale(&self.a0) - &self.xi0.scale(&self.singularity.log_discrepancy(eta)))
            .scale(&(Q::one() / rank_q(n)));
        let d = -(factorial(n + 1) * &self.body.vol * self.body.bary.dot(&t));
        d / self.vol()
    }

    /// `δ_T = min over rays v of σ of A(v) / (A(ξ₀)·⟨α₀, v⟩)`, via a fractional LP.
    pub fn delta_t(&self) -> Result<DeltaT> {
        let den = self.alpha0().scale(&self.a0);
        let sol = fractional_lp(
            self.singularity.log_discrepancy_covector(),
            &den,
            Feasible::Cone(self.singularity.sigma()),
            Sense::Min,
        )?;
        Ok(DeltaT {
            value: sol.value,
            minimizer_ray: sol.arg.primitive(),
        })
    }

    pub fn semistable_verdict(&self) -> Verdict {
        let certificate =
            self.singularity.log_discrepancy_covector() - &self.alpha0().scale(&self.a0);
        Verdict {
            semistable: certificate.is_zero(),
            certificate,
        }
    }

    /// `C²` for the coercivity bound `J(ξ₀; F_ξ) ≥ C·|ξ̄| − S(ξ₀; F)`, where `C`
    /// is the Euclidean distance from `α₀` to the relative boundary of `P`.
    pub fn coercivity_constant_sq(&self) -> Q {
        let xi0 = &self.xi0;
        let xx = xi0.norm_sq();
        self.singularity
            .rays()
            .iter()
            .map(|v| {
                let proj = v.norm_sq() - num::pow(v.dot(xi0), 2) / &xx;
                num::pow(self.alpha0().dot(v), 2) / proj
            })
            .min()
            .expect("σ has rays")
    }

    /// `ξ ↦ J(ξ₀; F_ξ)` with a subgradient, defined for every `ξ ∈ N_ℝ`.
    pub fn twisted_j(
        &self,
        f: &MonomialFiltration,
        xi: &RationalVector,
    ) -> Result<(Q, RationalVector)> {
        self.check(f)?;
        let shifted: Vec<RationalVector> = f.covectors().iter().map(|z| z + xi).collect();
        let lm = self.max_on_moment(&shifted)?;
        let s = self.s_invariant(f)? + self.alpha0().dot(xi);
        Ok((lm.value - s, &lm.argmax - self.alpha0()))
    }

    /// Translate `ξ` along `ξ₀` into the closed Reeb cone `σ`.
    fn into_closed_reeb(&self, xi: &RationalVector) -> RationalVector {
        let shift = self
            .singularity
            .weight_cone()
            .rays()
            .iter()
            .map(|r| -r.dot(xi) / r.dot(&self.xi0))
            .fold(Q::zero(), |a, b| if b > a { b } else { a });
        xi + &self.xi0.scale(&shift)
    }

    /// `J_T(ξ₀; F) = inf_ξ J(ξ₀; F_ξ)`. `J` is invariant along `ξ₀`, so the
    /// search runs over `ξ₀⊥`, boxed by the coercivity radius.
    pub fn reduced_j(&self, f: &MonomialFiltration, tol: &Q) -> Result<ReducedJ> {
        self.check(f)?;
        let n = self.singularity.rank();
        if f.is_toric() {
            return self.reduced_j_toric(f);
        }
        let j = self.j_norm(f)?;
        let bound = j + self.s_invariant(f)?;
        let c_sq = self.coercivity_constant_sq();
        let target = num::pow(bound.clone(), 2) / &c_sq;
        let mut r = from_f64((to_f64(&target).sqrt() * 1.01 + 1e-6).ceil());
        while &r * &r < target {
            r = r * int(2);
        }
        let mut hs = vec![
            Halfspace::new(self.xi0.clone(), Q::zero()),
            Halfspace::at_least(&self.xi0, &Q::zero()),
        ];
        for i in 0..n {
            hs.push(Halfspace::new(RationalVector::unit(n, i), r.clone()));
            hs.push(Halfspace::at_least(&RationalVector::unit(n, i), &-&r));
        }
        let feasible = Polytope::from_halfspaces(n, hs)?;
        let oracle = |xi: &RationalVector| self.twisted_j(f, xi);
        let res = kelley_minimize(
            &oracle,
            &feasible,
            &RationalVector::zeros(n),
            tol,
            KELLEY_MAX_ITER,
        )?;
        Ok(ReducedJ {
            upper: res.upper,
            lower: res.lower,
            twist: self.into_closed_reeb(&res.arg),
            iterations: res.iterations,
        })
    }

    /// Single LP for `F = F_ζ`: minimize `t − ⟨α₀, ζ + ξ⟩` subject to
    /// `⟨p, ζ + ξ⟩ ≤ t` on the vertices `p` of `P` and `⟨ξ, ξ₀⟩ = 0`.
    fn reduced_j_toric(&self, f: &MonomialFiltration) -> Result<ReducedJ> {
        let n = self.singularity.rank();
        let zeta = &f.covectors()[0];
        let lift = |v: &RationalVector, t: i64| {
            let mut c = v.0.clone();
            c.push(int(t));
            RationalVector(c)
        };
        let mut cons: Vec<Constraint> = self
            .body
            .moment
            .vertices()
            .iter()
            .map(|p| Constraint::new(lift(p, -1), Relation::Le, -p.dot(zeta)))
            .collect();
        cons.push(Constraint::new(lift(&self.xi0, 0), Relation::Eq, Q::zero()));
        let obj = lift(&-self.alpha0(), 1);
        let sol = lp_solve(&obj, &cons, Sense::Min)?;
        let value = sol.value - self.alpha0().dot(zeta);
        let xi = RationalVector(sol.argopt.0[..n].to_vec());
        Ok(ReducedJ {
            upper: value.clone(),
            lower: value,
            twist: self.into_closed_reeb(&xi),
            iterations: 1,
        })
    }

    /// `inf S(ξ₀; F_ξ)` over twists keeping `F_ξ` primary: one LP in `ξ`,
    /// `min ⟨α₀, ξ⟩` subject to `⟨ξ, r⟩ ≥ −g(r)` on the rays `r` of `σ∨`.
    pub fn inf_twist_s(&self, f: &MonomialFiltration) -> Result<Q> {
        self.check(f)?;
        let cons: Vec<Constraint> = self
            .singularity
            .weight_cone()
            .rays()
            .iter()
            .map(|r| Constraint::new(r.clone(), Relation::Ge, -f.transform().eval(r)))
            .collect();
        let sol = lp_solve(self.alpha0(), &cons, Sense::Min)?;
        Ok(self.s_invariant(f)? + sol.value)
    }

    /// The inner supremum of the reduced delta invariant over twists of
    /// `wt_η`; identically 1 once `Fut|_N = 0`.
    pub fn delta_red_objective(&self, eta: &RationalVector) -> Result<Q> {
        check_reeb(&self.singularity, eta)?;
        let verdict = self.semistable_verdict();
        if !verdict.semistable {
            return Err(Error::FutakiNonvanishing(verdict.certificate));
        }
        let den = self.alpha0().scale(&self.a0);
        let sol = fractional_lp(
            self.singularity.log_discrepancy_covector(),
            &den,
            Feasible::Cone(self.singularity.sigma()),
            Sense::Max,
        )?;
        debug_assert!(sol.value.is_one());
        Ok(sol.value)
    }

    /// Every closed-form invariant of `(X, Δ, ξ₀)` and, optionally, of `F`.
    pub fn report(
        &self,
        f: Option<(&str, &MonomialFiltration)>,
        tol: &Q,
    ) -> Result<InvariantReport> {
        let mut rep = InvariantReport::default();
        rep.parameters.insert("xi0".into(), self.xi0.to_string());
        rep.push("A", self.a0.clone(), Method::ClosedForm);
        rep.push("vol", self.vol(), Method::ClosedForm);
        rep.push("nvol", self.nvol(), Method::ClosedForm);
        if let Some((name, f)) = f {
            rep.parameters.insert("filtration".into(), name.to_string());
            rep.push("S", self.s_invariant(f)?, Method::ClosedForm);
            rep.push("lambda_max", self.lambda_max(f)?.value, Method::ClosedForm);
            rep.push("lambda_min", self.lambda_min(f)?, Method::ClosedForm);
            rep.push("lct", self.lct(f)?.value, Method::ClosedForm);
            rep.push("D", self.ding(f)?, Method::ClosedForm);
            rep.push("J", self.j_norm(f)?, Method::ClosedForm);
            let jt = self.reduced_j(f, tol)?;
            let method = if f.is_toric() {
                Method::ClosedForm
            } else {
                Method::Optimizer
            };
            rep.entries
                .push(ReportEntry::new("J_T", jt.upper, method).with_lower(jt.lower));
        }
        Ok(rep)
    }
}

pub fn s_closed(s: &ConeSingularity, xi0: &RationalVector, f: &MonomialFiltration) -> Result<Q> {
    Polarization::new(s, xi0)?.s_invariant(f)
}

pub fn lambda_max_closed(
    s: &ConeSingularity,
    xi0: &RationalVector,
    f: &MonomialFiltration,
) -> Result<Q> {
    Ok(Polarization::new(s, xi0)?.lambda_max(f)?.value)
}

pub fn lambda_min_closed(
    s: &ConeSingularity,
    xi0: &RationalVector,
    f: &MonomialFiltration,
) -> Result<Q> {
    Polarization::new(s, xi0)?.lambda_min(f)
}

pub fn ding(s: &ConeSingularity, xi0: &RationalVector, f: &MonomialFiltration) -> Result<Q> {
    Polarization::new(s, xi0)?.ding(f)
}

pub fn j_norm(s: &ConeSingularity, xi0: &RationalVector, f: &MonomialFiltration) -> Result<Q> {
    Polarization::new(s, xi0)?.j_norm(f)
}

pub fn futaki_product(
    s: &ConeSingularity,
    xi0: &RationalVector,
    eta: &RationalVector,
) -> Result<Q> {
    Ok(Polarization::new(s, xi0)?.futaki_product(eta))
}

pub fn futaki_derivative(
    s: &ConeSingularity,
    xi0: &RationalVector,
    eta: &RationalVector,
) -> Result<Q> {
    Ok(Polarization::new(s, xi0)?.futaki_derivative(eta))
}

pub fn delta_t(s: &ConeSingularity, xi0: &RationalVector) -> Result<DeltaT> {
    Polarization::new(s, xi0)?.delta_t()
}

pub fn semistable_verdict(s: &ConeSingularity, xi0: &RationalVector) -> Result<Verdict> {
    Ok(Polarization::new(s, xi0)?.semistable_verdict())
}

pub fn reduced_j(
    s: &ConeSingularity,
    xi0: &RationalVector,
    f: &MonomialFiltration,
    tol: &Q,
) -> Result<ReducedJ> {
    Polarization::new(s, xi0)?.reduced_j(f, tol)
}

/// `inf S(ξ₀; wt_{η+ξ})` over twists with `η + ξ` in the Reeb cone.
pub fn inf_twist_s(s: &ConeSingularity, xi0: &RationalVector, eta: &RationalVector) -> Result<Q> {
    check_reeb(s, eta)?;
    let f = MonomialFiltration::toric(s, eta)?;
    Polarization::new(s, xi0)?.inf_twist_s(&f)
}

pub fn delta_red_objective(
    s: &ConeSingularity,
    xi0: &RationalVector,
    eta: &RationalVector,
) -> Result<Q> {
    Polarization::new(s, xi0)?.delta_red_objective(eta)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Estimator,
    Optimizer,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub name: String,
    #[serde(with = "serde_q")]
    pub value: Q,
    pub decimal: String,
    pub method: Method,
    /// Certified lower bound when `value` is an optimizer upper bound.
    #[serde(default, with = "serde_opt_q", skip_serializing_if = "Option::is_none")]
    pub lower: Option<Q>,
}

impl ReportEntry {
    pub fn new(name: &str, value: Q, method: Method) -> Self {
        ReportEntry {
            name: name.to_string(),
            decimal: to_decimal(&value, 12),
            value,
            method,
            lower: None,
        }
    }

    pub fn with_lower(mut self, lower: Q) -> Self {
        self.lower = Some(lower);
        self
    }

    pub fn gap(&self) -> Option<Q> {
        self.lower.as_ref().map(|l| &self.value - l)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub parameters: BTreeMap<String, String>,
    pub entries: Vec<ReportEntry>,
}

impl InvariantReport {
    pub fn push(&mut self, name: &str, value: Q, method: Method) {
        self.entries.push(ReportEntry::new(name, value, method));
    }

    pub fn get(&self, name: &str) -> Option<&Q> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .map(|e| &e.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::rat;

    fn v(c: &[i64]) -> RationalVector {
        RationalVector::from_ints(c)
    }

    fn c2() -> ConeSingularity {
        ConeSingularity::affine_space(2)
    }

    fn a1() -> ConeSingularity {
        ConeSingularity::from_rays(&[v(&[1, 0]), v(&[1, 2])], &[int(0), int(0)]).unwrap()
    }

    fn fex() -> MonomialFiltration {
        MonomialFiltration::new(&c2(), vec![v(&[2, 1]), v(&[1, 2])]).unwrap()
    }

    #[test]
    fn okounkov_bodies() {
        let o = okounkov_body(&c2(), &v(&[1, 1])).unwrap();
        assert_eq!(o.vol, rat(1, 2));
        assert_eq!(o.bary, RationalVector::new(vec![rat(1, 3), rat(1, 3)]));
        assert_eq!(o.alpha0, RationalVector::new(vec![rat(1, 2), rat(1, 2)]));
        let o = okounkov_body(&c2(), &v(&[1, 2])).unwrap();
        assert_eq!(o.vol, rat(1, 4));
        assert_eq!(o.alpha0, RationalVector::new(vec![rat(1, 2), rat(1, 4)]));
        let o = okounkov_body(&a1(), &v(&[1, 1])).unwrap();
        assert_eq!(o.vol, int(1));
        assert_eq!(o.bary, RationalVector::new(vec![rat(2, 3), int(0)]));
        assert_eq!(o.alpha0, v(&[1, 0]));
        assert!(matches!(
            okounkov_body(&c2(), &v(&[1, 0])),
            Err(Error::NotReeb(_))
        ));
    }

    #[test]
    fn volumes() {
        assert_eq!(vol(&c2(), &v(&[1, 1])).unwrap(), int(1));
        assert_eq!(vol(&c2(), &v(&[1, 2])).unwrap(), rat(1, 2));
        assert_eq!(vol(&a1(), &v(&[1, 1])).unwrap(), int(2));
        assert_eq!(nvol(&c2(), &v(&[1, 1])).unwrap(), int(4));
        assert_eq!(nvol(&a1(), &v(&[1, 1])).unwrap(), int(2));
        assert_eq!(nvol(&c2(), &v(&[1, 2])).unwrap(), rat(9, 2));
    }

    #[test]
    fn fan_formula_matches_polytope_volume() {
        let sq = ConeSingularity::from_rays(
            &[v(&[1, 0, 1]), v(&[0, 1, 1]), v(&[-1, 0, 1]), v(&[0, -1, 1])],
            &[int(0), int(0), int(0), int(0)],
        )
        .unwrap();
        for (s, xi) in [(c2(), v(&[2, 3])), (a1(), v(&[3, 1])), (sq, v(&[1, 2, 5]))] {
            let fan: Q = fan_simplices(&s)
                .unwrap()
                .iter()
                .map(|(rays, d)| d / rays.iter().map(|r| r.dot(&xi)).fold(Q::one(), |a, b| a * b))
                .sum();
            assert_eq!(fan, vol(&s, &xi).unwrap());
        }
    }

    #[test]
    fn s_lambda_and_j() {
        let p = Polarization::new(&c2(), &v(&[1, 1])).unwrap();
        let triv = MonomialFiltration::toric(&c2(), &v(&[1, 1])).unwrap();
        assert_eq!(p.s_invariant(&triv).unwrap(), int(1));
        assert_eq!(p.s_invariant(&fex()).unwrap(), rat(5, 4));
        let divisor = MonomialFiltration::toric(&c2(), &v(&[1, 0]));
        // g = α₁ vanishes on the dual ray e₂, so the divisorial filtration is not primary
        assert!(divisor.is_err());
        let f12 = MonomialFiltration::toric(&c2(), &v(&[1, 2])).unwrap();
        assert_eq!(p.lambda_max(&f12).unwrap().value, int(2));
        assert_eq!(p.lambda_max(&fex()).unwrap().value, rat(3, 2));
        assert_eq!(p.lambda_max(&triv).unwrap().value, int(1));
        assert_eq!(p.lambda_min(&fex()).unwrap(), int(1));
        assert_eq!(p.lambda_min(&triv).unwrap(), int(1));
        assert_eq!(p.lambda_min(&f12).unwrap(), int(1));
        assert_eq!(p.j_norm(&triv).unwrap(), int(0));
        assert_eq!(p.j_norm(&fex()).unwrap(), rat(1, 4));
        assert_eq!(p.j_norm(&f12).unwrap(), rat(1, 2));
    }

    #[test]
    fn divisor_s_invariant_via_integration() {
        // S(ξ₀; F_D) for D = {x = 0}: the transform α₁ integrated directly
        let p = Polarization::new(&c2(), &v(&[1, 1])).unwrap();
        let g = crate::exactgeom::PLConcave::linear(v(&[1, 0]));
        let integral = integrate_pl(&p.body().body, &g).unwrap();
        assert_eq!(rat(3, 2) * integral / &p.body().vol, rat(1, 2));
    }

    #[test]
    fn log_canonical_thresholds() {
        let m = MonomialFiltration::toric(&c2(), &v(&[1, 1])).unwrap();
        assert_eq!(lct_monomial(&c2(), &m).unwrap().value, int(2));
        let half =
            ConeSingularity::from_rays(&[v(&[1, 0]), v(&[0, 1])], &[rat(1, 2), int(0)]).unwrap();
        let mh = MonomialFiltration::toric(&half, &v(&[1, 1])).unwrap();
        assert_eq!(lct_monomial(&half, &mh).unwrap().value, rat(3, 2));
        let l = lct_monomial(&c2(), &fex()).unwrap();
        assert_eq!(l.value, int(3));
        assert_eq!(fex().value_under(&l.minimizer).unwrap(), int(1));
    }

    #[test]
    fn ding_invariants() {
        let p = Polarization::new(&c2(), &v(&[1, 1])).unwrap();
        for eta in [v(&[1, 1]), v(&[1, 3]), v(&[2, 5])] {
            let f = MonomialFiltration::toric(&c2(), &eta).unwrap();
            assert_eq!(p.ding(&f).unwrap(), int(0));
        }
        assert_eq!(p.ding(&fex()).unwrap(), rat(1, 2));
        // F_{(1,0)} on ξ₀ = (1,2): computed from its closed-form pieces since it is not primary
        let p12 = Polarization::new(&c2(), &v(&[1, 2])).unwrap();
        assert_eq!(p12.futaki_product(&v(&[1, 0])), rat(-1, 2));
    }

    #[test]
    fn futaki_invariants() {
        let p11 = Polarization::new(&c2(), &v(&[1, 1])).unwrap();
        assert_eq!(p11.futaki_product(&v(&[1, 0])), int(0));
        let p12 = Polarization::new(&c2(), &v(&[1, 2])).unwrap();
        assert_eq!(p12.futaki_product(&v(&[1, 0])), rat(-1, 2));
        assert_eq!(p12.futaki_derivative(&v(&[1, 0])), rat(-1, 2));
        assert_eq!(p12.futaki_product(&v(&[1, 2])), int(0));
        assert_eq!(p12.futaki_derivative(&v(&[1, 2])), int(0));
        let grad = vol_gradient(&c2(), &v(&[1, 1])).unwrap();
        assert_eq!(grad.dot(&v(&[1, 0])), int(-1));
    }

    #[test]
    fn delta_and_verdicts() {
        let p11 = Polarization::new(&c2(), &v(&[1, 1])).unwrap();
        assert_eq!(p11.delta_t().unwrap().value, int(1));
        assert!(p11.semistable_verdict().semistable);
        let p12 = Polarization::new(&c2(), &v(&[1, 2])).unwrap();
        let d = p12.delta_t().unwrap();
        assert_eq!(d.value, rat(2, 3));
        assert_eq!(d.minimizer_ray, v(&[1, 0]));
        let verdict = p12.semistable_verdict();
        assert!(!verdict.semistable);
        assert_eq!(
            verdict.certificate,
            RationalVector::new(vec![rat(-1, 2), rat(1, 4)])
        );
        let pa = Polarization::new(&a1(), &v(&[1, 1])).unwrap();
        assert_eq!(pa.delta_t().unwrap().value, int(1));
        assert!(pa.semistable_verdict().semistable);
    }

    #[test]
    fn reduced_j_norms() {
        let p = Polarization::new(&c2(), &v(&[1, 1])).unwrap();
        let tol = default_tolerance();
        let r = p.reduced_j(&fex(), &tol).unwrap();
        assert_eq!(r.upper, rat(1, 4));
        assert_eq!(r.lower, rat(1, 4));
        let f = MonomialFiltration::toric(&c2(), &v(&[1, 3])).unwrap();
        let r = p.reduced_j(&f, &tol).unwrap();
        assert_eq!(r.upper, int(0));
        assert!(c2().sigma().contains(&r.twist));
        // Kelley on a toric filtration agrees with the LP
        let sum = MonomialFiltration::new(&c2(), vec![v(&[1, 3]), v(&[3, 1])]).unwrap();
        assert_eq!(sum.covectors().len(), 2);
        let r = p.reduced_j(&sum, &tol).unwrap();
        let closed = sum.transform().eval(p.alpha0()) - p.s_invariant(&sum).unwrap();
        assert_eq!(r.upper, closed);
    }

    #[test]
    fn twist_infima() {
        let p = Polarization::new(&c2(), &v(&[1, 1])).unwrap();
        assert_eq!(
            inf_twist_s(&c2(), &v(&[1, 1]), &v(&[1, 1])).unwrap(),
            int(0)
        );
        assert_eq!(
            inf_twist_s(&c2(), &v(&[1, 1]), &v(&[2, 1])).unwrap(),
            int(0)
        );
        assert!(p.inf_twist_s(&fex()).unwrap() <= p.s_invariant(&fex()).unwrap());
    }

    #[test]
    fn reduced_delta() {
        assert_eq!(
            delta_red_objective(&c2(), &v(&[1, 1]), &v(&[2, 7])).unwrap(),
            int(1)
        );
        assert_eq!(
            delta_red_objective(&a1(), &v(&[1, 1]), &v(&[1, 1])).unwrap(),
            int(1)
        );
        assert!(matches!(
            delta_red_objective(&c2(), &v(&[1, 2]), &v(&[1, 1])),
            Err(Error::FutakiNonvanishing(_))
        ));
    }

    #[test]
    fn report_round_trip() {
        let p = Polarization::new(&c2(), &v(&[1, 1])).unwrap();
        let rep = p
            .report(Some(("fex", &fex())), &default_tolerance())
            .unwrap();
        assert_eq!(rep.get("D"), Some(&rat(1, 2)));
        assert_eq!(rep.get("J_T"), Some(&rat(1, 4)));
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.contains("\"1/4\""));
        let back: InvariantReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rep);
    }
}
