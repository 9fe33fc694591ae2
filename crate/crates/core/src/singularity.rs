//! Toric klt cone singularities `x ∈ (X, Δ)` with the full torus action.
//!
//! `X = Spec ℂ[σ∨ ∩ M]` for a pointed full-dimensional cone `σ ⊂ N_ℝ`, and
//! `Δ = Σ aᵢ Dᵢ` is supported on the torus-invariant divisors of the rays.
//! The log discrepancy of the toric valuation `wt_ξ` is the linear function
//! `A(ξ) = ⟨u, ξ⟩`, where `⟨u, vᵢ⟩ = 1 − aᵢ` on the primitive ray generators.

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactgeom::{linalg, Cone, RationalVector, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSingularity {
    sigma: Cone,
    coefficients: Vec<Q>,
    u: RationalVector,
    weight_cone: Cone,
}

/// A point of the open Reeb cone, i.e. the interior of `σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReebVector(RationalVector);

impl ReebVector {
    pub fn new(s: &ConeSingularity, xi: RationalVector) -> Result<Self> {
        if xi.dim() != s.rank() {
            return Err(Error::DimensionMismatch {
                expected: s.rank(),
                got: xi.dim(),
            });
        }
        if !s.reeb_contains(&xi) {
            return Err(Error::NotReeb(xi));
        }
        Ok(ReebVector(xi))
    }

    pub fn vector(&self) -> &RationalVector {
        &self.0
    }

    pub fn into_vector(self) -> RationalVector {
        self.0
    }
}

impl ConeSingularity {
    /// Validate `(σ, Δ)` from ray generators and their boundary coefficients.
    ///
    /// Rays are normalized to primitive vectors; each must span an extreme ray
    /// of the cone they generate, with no repeats.
    pub fn from_rays(rays: &[RationalVector], coefficients: &[Q]) -> Result<Self> {
        if rays.len() != coefficients.len() {
            return Err(Error::InvalidArgument(format!(
                "{} rays but {} coefficients",
                rays.len(),
                coefficients.len()
            )));
        }
        if let Some(a) = coefficients.iter().find(|a| a.is_negative()) {
            return Err(Error::InvalidArgument(format!(
                "negative boundary coefficient {a}"
            )));
        }
        if let Some(a) = coefficients.iter().find(|a| **a >= Q::one()) {
            return Err(Error::NotKlt(format!(
                "boundary coefficient {a} is not below 1"
            )));
        }
        let sigma = Cone::from_rays(rays).map_err(|e| match e {
            Error::NotFullDimensional | Error::NotPointed => Error::DegenerateCone(e.to_string()),
            other => other,
        })?;
        let primitive: Vec<RationalVector> = rays.iter().map(RationalVector::primitive).collect();
        if primitive.len() != sigma.rays().len() {
            return Err(Error::DegenerateCone(
                "every ray must be a distinct extreme ray of the cone".into(),
            ));
        }
        let mut ordered = vec![Q::zero(); primitive.len()];
        for (p, a) in primitive.iter().zip(coefficients) {
            let i = sigma
                .rays()
                .iter()
                .position(|r| r == p)
                .ok_or_else(|| Error::DegenerateCone(format!("ray {p} is not extreme")))?;
            ordered[i] = a.clone();
        }
        let rhs: Vec<Q> = ordered.iter().map(|a| Q::one() - a).collect();
        let u = linalg::solve(sigma.rays(), &rhs).ok_or(Error::NotQGorenstein)?;
        let weight_cone = sigma.dual();
        if !sigma.rays().iter().all(|v| u.dot(v).is_positive()) {
            return Err(Error::NotKlt(format!(
                "log discrepancy covector {u} is not interior"
            )));
        }
        Ok(ConeSingularity {
            sigma,
            coefficients: ordered,
            u,
            weight_cone,
        })
    }

    /// Smooth point `ℂⁿ` with empty boundary.
    pub fn affine_space(n: usize) -> Self {
        let rays: Vec<RationalVector> = (0..n).map(|i| RationalVector::unit(n, i)).collect();
        Self::from_rays(&rays, &vec![Q::zero(); n]).expect("orthant is a valid singularity")
    }

    pub fn rank(&self) -> usize {
        self.sigma.rank()
    }

    pub fn sigma(&self) -> &Cone {
        &self.sigma
    }

    /// `σ∨ ⊂ M_ℝ`, the cone of monomial exponents.
    pub fn weight_cone(&self) -> &Cone {
        &self.weight_cone
    }

    pub fn rays(&self) -> &[RationalVector] {
        self.sigma.rays()
    }

    /// Coefficients aligned with [`rays`](Self::rays).
    pub fn coefficients(&self) -> &[Q] {
        &self.coefficients
    }

    pub fn log_discrepancy_covector(&self) -> &RationalVector {
        &self.u
    }

    /// `A(ξ) = ⟨u, ξ⟩`, also meaningful on all of `σ`.
    pub fn log_discrepancy(&self, xi: &RationalVector) -> Q {
        self.u.dot(xi)
    }

    pub fn reeb_contains(&self, xi: &RationalVector) -> bool {
        xi.dim() == self.rank() && self.weight_cone.is_positive_on(xi)
    }

    pub fn reeb(&self, xi: RationalVector) -> Result<ReebVector> {
        ReebVector::new(self, xi)
    }
}
