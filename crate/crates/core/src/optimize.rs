//! Optimization engines on top of the exact simplex: linear-fractional
//! programs, Kelley cutting planes, and normalized-volume minimization.

use nalgebra::{DMatrix, DVector};
use num::{BigInt, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactgeom::{
    from_f64, int, linalg, lp_solve, rationalize, to_f64, Cone, Constraint, Polytope,
    RationalVector, Relation, Sense, Q,
};
use crate::invariants::{self, fan_simplices};
use crate::singularity::ConeSingularity;

/// Feasible region of a linear-fractional program.
#[derive(Clone, Copy, Debug)]
pub enum Feasible<'a> {
    Cone(&'a Cone),
    Polytope(&'a Polytope),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalSolution {
    pub value: Q,
    pub arg: RationalVector,
}

/// Optimize `⟨num, x⟩ / ⟨den, x⟩` by the Charnes–Cooper substitution
/// `y = x / ⟨den, x⟩`. Over a cone the optimum is attained on an extreme ray.
pub fn fractional_lp(
    num: &RationalVector,
    den: &RationalVector,
    feasible: Feasible<'_>,
    sense: Sense,
) -> Result<FractionalSolution> {
    let n = num.dim();
    if den.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: den.dim(),
        });
    }
    match feasible {
        Feasible::Cone(c) => {
            if c.rays().iter().any(|r| !den.dot(r).is_positive()) {
                return Err(Error::DenominatorVanishes);
            }
            let mut cons: Vec<Constraint> = c
                .halfspaces()
                .iter()
                .map(|h| Constraint::new(h.clone(), Relation::Ge, Q::zero()))
                .collect();
            cons.push(Constraint::new(den.clone(), Relation::Eq, int(1)));
            let sol = lp_solve(num, &cons, sense)?;
            Ok(FractionalSolution {
                value: sol.value,
                arg: sol.argopt,
            })
        }
        Feasible::Polytope(p) => {
            if !p.is_bounded() {
                return Err(Error::Unbounded);
            }
            if p.is_empty() {
                return Err(Error::EmptyInput);
            }
            if p.vertices().iter().any(|v| !den.dot(v).is_positive()) {
                return Err(Error::DenominatorVanishes);
            }
            // variables (y, t): ⟨a, y⟩ ≤ b·t, ⟨den, y⟩ = 1, t ≥ 0
            let lift = |v: &RationalVector, t: Q| {
                let mut c = v.0.clone();
                c.push(t);
                RationalVector(c)
            };
            let mut cons: Vec<Constraint> = p
                .halfspaces()
                .iter()
                .map(|h| {
                    Constraint::new(lift(&h.normal, -h.offset.clone()), Relation::Le, Q::zero())
                })
                .collect();
            cons.push(Constraint::new(lift(den, Q::zero()), Relation::Eq, int(1)));
            cons.push(Constraint::new(
                RationalVector::unit(n + 1, n),
                Relation::Ge,
                Q::zero(),
            ));
            let sol = lp_solve(&lift(num, Q::zero()), &cons, sense)?;
            let t = sol.argopt[n].clone();
            let y = RationalVector(sol.argopt.0[..n].to_vec());
            Ok(FractionalSolution {
                value: sol.value,
                arg: y.scale(&(Q::one() / t)),
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KelleyResult {
    pub upper: Q,
    pub lower: Q,
    pub arg: RationalVector,
    pub iterations: usize,
}

/// A convex oracle: value and one subgradient at a point.
pub type Oracle<'a> = dyn Fn(&RationalVector) -> Result<(Q, RationalVector)> + 'a;

/// Kelley's cutting-plane method over the polytope `feasible`, starting at
/// `start`. The model LP in `(x, t)` collects the cuts
/// `t ≥ f(x_k) + ⟨s_k, x − x_k⟩`; its optimum is a lower bound and the best
/// oracle value an upper bound. For polyhedral oracles returning finitely
/// many subgradients the loop ends with a zero gap.
pub fn kelley_minimize(
    oracle: &Oracle<'_>,
    feasible: &Polytope,
    start: &RationalVector,
    tol: &Q,
    max_iter: usize,
) -> Result<KelleyResult> {
    let n = feasible.dim();
    let lift = |v: &RationalVector, t: Q| {
        let mut c = v.0.clone();
        c.push(t);
        RationalVector(c)
    };
    let mut cons: Vec<Constraint> = feasible
        .halfspaces()
        .iter()
        .map(|h| Constraint::new(lift(&h.normal, Q::zero()), Relation::Le, h.offset.clone()))
        .collect();
    let obj = RationalVector::unit(n + 1, n);
    let mut x = start.clone();
    let mut best: Option<(Q, RationalVector)> = None;
    let mut lower = None;
    for it in 1..=max_iter {
        let (fx, sub) = oracle(&x)?;
        if best.as_ref().is_none_or(|(b, _)| fx < *b) {
            best = Some((fx.clone(), x.clone()));
        }
        // t − ⟨s, x'⟩ ≥ f(x) − ⟨s, x⟩
        cons.push(Constraint::new(
            lift(&-&sub, int(1)),
            Relation::Ge,
            &fx - sub.dot(&x),
        ));
        let sol = lp_solve(&obj, &cons, Sense::Min)?;
        let lb = sol.argopt[n].clone();
        let (ub, arg) = best.clone().expect("at least one oracle call");
        if &ub - &lb <= *tol {
            return Ok(KelleyResult {
                upper: ub,
                lower: lb,
                arg,
                iterations: it,
            });
        }
        lower = Some(lb);
        x = RationalVector(sol.argopt.0[..n].to_vec());
    }
    let (upper, _) = best.expect("at least one oracle call");
    Err(Error::ToleranceNotReached {
        lower: lower.unwrap_or_else(|| upper.clone()),
        upper,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NvolResult {
    /// Rationalized minimizer, scaled so that `A(ξ*) = 1`.
    pub minimizer: RationalVector,
    pub nvol: Q,
    /// Upper bound on `nvol(ξ*) − inf nvol` from the tangent plane of `vol`
    /// at `ξ*` minimized over the compact slice `{A = 1} ∩ σ`.
    pub certificate_gap: Q,
    /// `α₀(ξ*) − u / A(ξ*)`; zero exactly at the minimizer.
    pub alignment_residual: RationalVector,
    pub iterations: usize,
}

/// `vol(ξ) = Σ_s d_s / Π_{r ∈ s} ⟨r, ξ⟩` over a simplicial subdivision of
/// `σ∨`, in floating point with its gradient and Hessian.
struct FanVolume {
    simplices: Vec<(Vec<Vec<f64>>, f64)>,
}

impl FanVolume {
    fn new(s: &ConeSingularity) -> Result<Self> {
        let simplices = fan_simplices(s)?
            .into_iter()
            .map(|(rays, d)| (rays.iter().map(|r| r.to_f64()).collect(), to_f64(&d)))
            .collect();
        Ok(FanVolume { simplices })
    }

    fn inside(&self, xi: &DVector<f64>) -> bool {
        self.simplices
            .iter()
            .all(|(rays, _)| rays.iter().all(|r| dotf(r, xi) > 0.0))
    }

    fn eval(&self, xi: &DVector<f64>) -> (f64, DVector<f64>, DMatrix<f64>) {
        let n = xi.len();
        let mut f = 0.0;
        let mut g = DVector::zeros(n);
        let mut h = DMatrix::zeros(n, n);
        for (rays, d) in &self.simplices {
            let ls: Vec<f64> = rays.iter().map(|r| dotf(r, xi)).collect();
            let term = d / ls.iter().product::<f64>();
            let mut s1 = DVector::zeros(n);
            let mut s2 = DMatrix::zeros(n, n);
            for (r, l) in rays.iter().zip(&ls) {
                let q = DVector::from_iterator(n, r.iter().map(|x| x / l));
                s2 += &q * q.transpose();
                s1 += q;
            }
            f += term;
            g -= &s1 * term;
            h += (&s1 * s1.transpose() + s2) * term;
        }
        (f, g, h)
    }
}

fn dotf(r: &[f64], xi: &DVector<f64>) -> f64 {
    r.iter().zip(xi.iter()).map(|(a, b)| a * b).sum()
}

/// Minimize `nvol` over the Reeb cone: damped Newton on the slice
/// `{A(ξ) = 1}` in floating point, then rationalization with denominators at
/// most `10^6` and exact re-evaluation of the value and the certificates.
pub fn minimize_nvol(s: &ConeSingularity, tol: &Q) -> Result<NvolResult> {
    let n = s.rank();
    let u = s.log_discrepancy_covector();
    let center = s
        .rays()
        .iter()
        .fold(RationalVector::zeros(n), |a, r| &a + r);
    let center = center.scale(&(Q::one() / u.dot(&center)));
    let kernel = linalg::nullspace(std::slice::from_ref(u), n);
    let k = DMatrix::from_fn(n, n - 1, |i, j| to_f64(&kernel[j][i]));
    let fan = FanVolume::new(s)?;
    let c = DVector::from_vec(center.to_f64());
    let mut t = DVector::<f64>::zeros(n - 1);
    let mut iterations = 0;
    for _ in 0..200 {
        iterations += 1;
        let xi = &c + &k * &t;
        let (f, g, h) = fan.eval(&xi);
        let gt = k.transpose() * &g;
        if gt.norm() <= 1e-15 * f.max(1.0) {
            break;
        }
        let ht = k.transpose() * &h * &k;
        let step = match ht.clone().cholesky() {
            Some(ch) => -ch.solve(&gt),
            None => -gt.clone(),
        };
        let mut a = 1.0;
        let mut moved = false;
        while a > 1e-12 {
            let cand = &t + &step * a;
            let xc = &c + &k * &cand;
            if fan.inside(&xc) && fan.eval(&xc).0 <= f {
                t = cand;
                moved = true;
                break;
            }
            a /= 2.0;
        }
        if !moved {
            break;
        }
    }
    let xi = &c + &k * &t;
    let cap = BigInt::from(1_000_000);
    let raw = RationalVector(
        xi.iter()
            .map(|x| rationalize(&from_f64(*x), &cap))
            .collect(),
    );
    if !s.reeb_contains(&raw) {
        return Err(Error::NotReeb(raw));
    }
    let minimizer = raw.scale(&(Q::one() / s.log_discrepancy(&raw)));
    let value = invariants::nvol(s, &minimizer)?;
    let body = invariants::okounkov_body(s, &minimizer)?;
    let alignment_residual = &body.alpha0 - u;
    let grad = invariants::vol_gradient(s, &minimizer)?;
    let tangent_min = s
        .rays()
        .iter()
        .map(|v| grad.dot(v) / u.dot(v))
        .min()
        .expect("σ has rays");
    let certificate_gap = grad.dot(&minimizer) - tangent_min;
    if certificate_gap > *tol {
        return Err(Error::ToleranceNotReached {
            lower: &value - &certificate_gap,
            upper: value,
        });
    }
    Ok(NvolResult {
        minimizer,
        nvol: value,
        certificate_gap,
        alignment_residual,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::{rat, Halfspace};

    fn v(c: &[i64]) -> RationalVector {
        RationalVector::from_ints(c)
    }

    fn orthant() -> Cone {
        Cone::from_rays(&[v(&[1, 0]), v(&[0, 1])]).unwrap()
    }

    fn square_box(n: usize, r: i64) -> Polytope {
        let mut hs = Vec::new();
        for i in 0..n {
            hs.push(Halfspace::new(RationalVector::unit(n, i), int(r)));
            hs.push(Halfspace::at_least(&RationalVector::unit(n, i), &int(-r)));
        }
        Polytope::from_halfspaces(n, hs).unwrap()
    }

    #[test]
    fn fractional_over_cones() {
        let num = v(&[1, 1]);
        let den = RationalVector::new(vec![rat(3, 2), rat(3, 4)]);
        let sol = fractional_lp(&num, &den, Feasible::Cone(&orthant()), Sense::Min).unwrap();
        assert_eq!(sol.value, rat(2, 3));
        assert_eq!(sol.arg.primitive(), v(&[1, 0]));
        let same = fractional_lp(&num, &num, Feasible::Cone(&orthant()), Sense::Max).unwrap();
        assert_eq!(same.value, int(1));
        let c = Cone::from_rays(&[v(&[1, 1]), v(&[2, 1])]).unwrap();
        let sol = fractional_lp(&v(&[1, 0]), &v(&[0, 1]), Feasible::Cone(&c), Sense::Min).unwrap();
        assert_eq!(sol.value, int(1));
        assert_eq!(sol.arg.primitive(), v(&[1, 1]));
        assert!(matches!(
            fractional_lp(&num, &v(&[1, 0]), Feasible::Cone(&orthant()), Sense::Min),
            Err(Error::DenominatorVanishes)
        ));
    }

    #[test]
    fn fractional_over_polytopes() {
        let p = Polytope::from_vertices(&[v(&[1, 0]), v(&[2, 0]), v(&[1, 1])]).unwrap();
        // min (x₂ + 1)/x₁: vertex values 1, 1/2, 2
        let num = v(&[0, 1]);
        let den = v(&[1, 0]);
        let sol = fractional_lp(&num, &den, Feasible::Polytope(&p), Sense::Max).unwrap();
        assert_eq!(sol.value, int(1));
        assert_eq!(sol.arg, v(&[1, 1]));
    }

    #[test]
    fn kelley_linear_and_abs() {
        let boxed = square_box(2, 3);
        let lin_val = |x: &RationalVector| Ok((x.dot(&v(&[1, 1])), v(&[1, 1])));
        let r = kelley_minimize(&lin_val, &boxed, &v(&[0, 0]), &Q::zero(), 10).unwrap();
        assert_eq!(r.upper, int(-6));
        assert_eq!(r.lower, int(-6));
        let l1 = |x: &RationalVector| {
            let val: Q = x.coords().iter().map(|c| c.abs()).sum();
            let sub = RationalVector(
                x.coords()
                    .iter()
                    .map(|c| if c.is_negative() { int(-1) } else { int(1) })
                    .collect(),
            );
            Ok((val, sub))
        };
        let r = kelley_minimize(&l1, &boxed, &v(&[2, -1]), &Q::zero(), 50).unwrap();
        assert_eq!(r.upper, int(0));
        assert_eq!(r.arg, v(&[0, 0]));
    }

    #[test]
    fn kelley_reports_bracket() {
        let boxed = square_box(1, 1);
        let sq =
            |x: &RationalVector| Ok((&x[0] * &x[0], RationalVector::new(vec![&x[0] * int(2)])));
        let e = kelley_minimize(
            &sq,
            &boxed,
            &RationalVector::new(vec![rat(1, 2)]),
            &Q::zero(),
            3,
        );
        assert!(matches!(e, Err(Error::ToleranceNotReached { .. })));
        let r = kelley_minimize(&sq, &boxed, &v(&[1]), &rat(1, 1000), 200).unwrap();
        assert!(r.upper - r.lower <= rat(1, 1000));
    }

    #[test]
    fn nvol_minima() {
        let tol = rat(1, 1_000_000_000);
        let c2 = ConeSingularity::affine_space(2);
        let r = minimize_nvol(&c2, &tol).unwrap();
        assert_eq!(r.nvol, int(4));
        assert_eq!(r.minimizer, RationalVector::new(vec![rat(1, 2), rat(1, 2)]));
        assert!(r.alignment_residual.is_zero());
        let a1 = ConeSingularity::from_rays(&[v(&[1, 0]), v(&[1, 2])], &[int(0), int(0)]).unwrap();
        let r = minimize_nvol(&a1, &tol).unwrap();
        assert_eq!(r.nvol, int(2));
        assert_eq!(r.minimizer, v(&[1, 1]));
        assert!(r.certificate_gap.is_zero());
        let z3 = ConeSingularity::from_rays(&[v(&[1, 0]), v(&[1, 3])], &[int(0), int(0)]).unwrap();
        let r = minimize_nvol(&z3, &tol).unwrap();
        assert_eq!(r.nvol, rat(4, 3));
        assert_eq!(r.minimizer, RationalVector::new(vec![int(1), rat(3, 2)]));
    }
}
