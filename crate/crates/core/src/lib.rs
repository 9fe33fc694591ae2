//! Exact invariants of toric log Fano cone singularities.
//!
//! A toric cone singularity is described by a pointed rational cone `σ ⊂ N_ℝ`,
//! boundary coefficients on its rays, and a polarizing Reeb vector `ξ₀`.
//! Monomial filtrations are min-of-linear concave functions on the weight
//! cone `σ∨`. Everything that has a polyhedral closed form is computed in
//! exact rational arithmetic:
//!
//! - [`exactgeom`]: cones, polytopes, volumes, barycenters, PL integration,
//!   lattice enumeration and an exact simplex solver.
//! - [`singularity`]: the cone singularity, its log discrepancy covector and
//!   Reeb cone.
//! - [`filtration`]: the monomial filtration calculus (twists, geodesics,
//!   intersections, Newton polyhedra, approximating sequences).
//! - [`invariants`]: volume, normalized volume, S, λ_max, λ_min, lct, Ding,
//!   Futaki, δ_T, the J-norm and its reduced version.
//! - [`estimators`]: finite-level lattice-point estimators and their sweeps.
//! - [`optimize`]: fractional LPs, Kelley cutting planes and the
//!   normalized-volume minimizer.

pub mod error;
pub mod estimators;
pub mod exactgeom;
pub mod filtration;
pub mod invariants;
pub mod optimize;
pub mod singularity;

pub use error::{Error, Result};
pub use exactgeom::{Cone, PLConcave, Polytope, RationalVector, Q};
pub use filtration::MonomialFiltration;
pub use singularity::{ConeSingularity, ReebVector};
