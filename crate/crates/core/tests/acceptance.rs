//! Acceptance criteria 1 to 6, one pass/fail line each. Runs as a plain
//! binary (`harness = false`) so the timings and verdicts reach stdout.

mod common;

use std::time::{Duration, Instant};

use common::*;
use conestab_core::estimators::{bj_uniform_threshold, ratio_f64, sweep, EstimatorSweep};
use conestab_core::exactgeom::{hilbert_basis, int, rat, to_f64, Cone, DEFAULT_BUDGET};
use conestab_core::invariants::{default_tolerance, inf_twist_s, vol, vol_gradient, Polarization};
use conestab_core::optimize::minimize_nvol;
use conestab_core::{ConeSingularity, MonomialFiltration, RationalVector, Q};
use num::{One, Signed, Zero};
use proptest::strategy::Strategy;

/// Collects failed checks; the first few are printed.
#[derive(Default)]
struct Checks {
    total: usize,
    failures: Vec<String>,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, got: T, want: T) {
        let ok = got == want;
        self.check(ok, || format!("{what}: got {got:?}, want {want:?}"));
    }
}

fn half() -> Q {
    rat(1, 2)
}

fn project(xi: &RationalVector, xi0: &RationalVector) -> RationalVector {
    xi - &xi0.scale(&(xi.dot(xi0) / xi0.norm_sq()))
}

fn geodesic(f: &MonomialFiltration, g: &MonomialFiltration, t: &Q) -> MonomialFiltration {
    MonomialFiltration::geodesic(&[f.clone(), g.clone()], &[Q::one() - t, t.clone()]).unwrap()
}

fn criterion1(c: &mut Checks) {
    for setup in sample(setup(), 100) {
        let p = Polarization::new(&setup.s, &setup.xi0).unwrap();
        let (s, f, g, xi) = (&setup.s, &setup.f, &setup.g, &setup.xi);
        let n = rat(s.rank() as i64, 1);
        let m = &n - Q::one();
        let trivial = MonomialFiltration::toric(s, &setup.xi0).unwrap();
        c.eq("S(ξ₀;ξ₀)", p.s_invariant(&trivial).unwrap(), int(1));

        let fx = f.twist(xi).unwrap();
        c.eq(
            "lct twist",
            p.lct(&fx).unwrap().value,
            p.lct(f).unwrap().value + s.log_discrepancy(xi),
        );
        c.eq(
            "S twist",
            p.s_invariant(&fx).unwrap(),
            p.s_invariant(f).unwrap() + p.alpha0().dot(xi),
        );
        let fa = f.twist(&setup.xi0.scale(&setup.a)).unwrap();
        c.eq(
            "λ_max twist",
            p.lambda_max(&fa).unwrap().value,
            p.lambda_max(f).unwrap().value + &setup.a,
        );
        c.eq(
            "λ_min twist",
            p.lambda_min(&fa).unwrap(),
            p.lambda_min(f).unwrap() + &setup.a,
        );

        let t = rat(1, 3);
        c.eq(
            "S geodesic",
            p.s_invariant(&geodesic(f, g, &t)).unwrap(),
            (Q::one() - &t) * p.s_invariant(f).unwrap() + &t * p.s_invariant(g).unwrap(),
        );

        let j = p.j_norm(f).unwrap();
        c.check(!j.is_negative(), || format!("J < 0: {j}"));
        let flat = trivial.rescale(&p.lambda_max(f).unwrap().value).unwrap();
        c.eq("J = 0 iff rescaled trivial", j.is_zero(), *f == flat);
        c.check(
            p.j_norm(&trivial.rescale(&setup.a).unwrap())
                .unwrap()
                .is_zero(),
            || "J of a rescaled trivial filtration".into(),
        );

        let w = MonomialFiltration::toric(s, xi).unwrap();
        let (lmax, lmin) = (p.lambda_max(&w).unwrap().value, p.lambda_min(&w).unwrap());
        let (sw, jw) = (p.s_invariant(&w).unwrap(), p.j_norm(&w).unwrap());
        let above = &sw - &lmin;
        let range = &lmax - &lmin;
        c.check(&range / &n <= above && above <= &m / &n * &range, || {
            format!("λ-norm equivalence fails for wt_{xi}")
        });
        c.check(&jw / &m <= above && above <= &m * &jw, || {
            format!("J-norm equivalence fails for wt_{xi}")
        });

        let jt = p.reduced_j(&w, &default_tolerance()).unwrap();
        let inf = inf_twist_s(s, &setup.xi0, xi).unwrap();
        c.check(&jt.lower / &m <= inf && inf <= &m * &jt.upper, || {
            format!(
                "S_T/J_T sandwich fails for wt_{xi}: J_T = {}, inf S = {inf}",
                jt.upper
            )
        });

        // saturation rigidity: F ⊆ G with S(F) = S(G) forces F = G
        c.check(f.saturate().unwrap().already_saturated, || {
            "covector filtration not saturated".into()
        });
        let smaller = g.intersect(f).unwrap();
        let (s_small, s_g) = (p.s_invariant(&smaller).unwrap(), p.s_invariant(g).unwrap());
        c.check((s_small == s_g) == (smaller == *g), || {
            "strict inclusion with equal S".into()
        });
        let larger = g.twist(xi).unwrap();
        let same = g.intersect(&larger).unwrap();
        c.eq(
            "trivial inclusion",
            same == *g && p.s_invariant(&same).unwrap() == s_g,
            true,
        );
    }
}

fn criterion2(c: &mut Checks) {
    let c2 = c2();
    let p = Polarization::new(&c2, &v(&[1, 1])).unwrap();
    c.eq("ℂ² vol", p.vol(), int(1));
    c.eq("ℂ² nvol", p.nvol(), int(4));
    c.eq("ℂ² δ_T", p.delta_t().unwrap().value, int(1));
    c.eq("ℂ² semistable", p.semistable_verdict().semistable, true);

    let f = fex();
    c.eq("FEX S", p.s_invariant(&f).unwrap(), rat(5, 4));
    c.eq("FEX λ_max", p.lambda_max(&f).unwrap().value, rat(3, 2));
    c.eq("FEX λ_min", p.lambda_min(&f).unwrap(), int(1));
    c.eq("FEX lct", p.lct(&f).unwrap().value, int(3));
    c.eq("FEX D", p.ding(&f).unwrap(), half());
    c.eq("FEX J", p.j_norm(&f).unwrap(), rat(1, 4));
    let jt = p.reduced_j(&f, &default_tolerance()).unwrap();
    c.eq("FEX J_T", (jt.upper, jt.lower), (rat(1, 4), rat(1, 4)));

    let skew = Polarization::new(&c2, &v(&[1, 2])).unwrap();
    c.eq("ξ₀=(1,2) δ_T", skew.delta_t().unwrap().value, rat(2, 3));
    c.eq("ξ₀=(1,2) Fut", skew.futaki_product(&v(&[1, 0])), -half());
    let divisorial = MonomialFiltration::nonnegative(&c2, vec![v(&[1, 0])]).unwrap();
    c.eq(
        "ξ₀=(1,2) D(F_(1,0))",
        skew.ding(&divisorial).unwrap(),
        -half(),
    );

    let tol = rat(1, 1_000_000_000);
    let a1 = ConeSingularity::from_rays(&[v(&[1, 0]), v(&[1, 2])], &[int(0), int(0)]).unwrap();
    let r = minimize_nvol(&a1, &tol).unwrap();
    c.eq("A₁ nvol", r.nvol, int(2));
    c.eq("A₁ ξ* ∝ (1,1)", r.minimizer.primitive(), v(&[1, 1]));
    c.eq("A₁ alignment", r.alignment_residual.is_zero(), true);
    let z3 = ConeSingularity::from_rays(&[v(&[1, 0]), v(&[1, 3])], &[int(0), int(0)]).unwrap();
    c.eq("ℤ₃ nvol", minimize_nvol(&z3, &tol).unwrap().nvol, rat(4, 3));

    let boundary =
        ConeSingularity::from_rays(&[v(&[1, 0]), v(&[0, 1])], &[half(), int(0)]).unwrap();
    let maximal = MonomialFiltration::new(&boundary, vec![v(&[1, 1])]).unwrap();
    let pb = Polarization::new(&boundary, &v(&[1, 1])).unwrap();
    c.eq(
        "Δ=½{x=0} lct(𝔪)",
        pb.lct(&maximal).unwrap().value,
        rat(3, 2),
    );
}

fn criterion3(c: &mut Checks) {
    let s = c2();
    let xi0 = v(&[1, 1]);
    let p = Polarization::new(&s, &xi0).unwrap();
    let levels: Vec<u64> = (1..=200).collect();
    let mut sweeps: Vec<EstimatorSweep> = Vec::new();
    for f in sample(filtration(&s), 20) {
        let sw = sweep(&s, &xi0, &f, &levels, 1_000_000).unwrap();
        let r = sw.record(200).unwrap();
        let (spp, target) = (ratio_f64(&r.spp_m), to_f64(&sw.target.s));
        c.check((spp - target).abs() <= 0.05 * target, || {
            format!("S''_200 = {spp}, S = {target}")
        });
        let (lam, lam_t) = (ratio_f64(&r.lammax_m), to_f64(&sw.target.lambda_max));
        c.check((lam - lam_t).abs() <= 0.02 * lam_t, || {
            format!("λ^(200)/200 = {lam}, λ_max = {lam_t}")
        });
        let (mult, vol) = (ratio_f64(&r.mult_m), to_f64(&p.vol()));
        c.check((mult - vol).abs() <= 0.02 * vol, || {
            format!("mult_200 = {mult}, n!·vol(O) = {vol}")
        });
        sweeps.push(sw);
    }
    let m0 = bj_uniform_threshold(&sweeps, &rat(1, 10));
    c.check(m0.is_some(), || {
        "no uniform Blum-Jonsson level within m ≤ 200".into()
    });
    if let Some(m0) = m0 {
        println!("  uniform Blum-Jonsson level at ε = 0.1: m0 = {m0}");
    }
}

/// Largest value of `g` on the Hilbert bases of its linearity chambers:
/// from this level on, blocks of value at most `m` already span `g`.
fn generation_level(f: &MonomialFiltration) -> i64 {
    let s = f.ambient();
    let zs = f.covectors();
    let mut level = 0;
    for (j, z) in zs.iter().enumerate() {
        let mut hs: Vec<RationalVector> = s.weight_cone().halfspaces().to_vec();
        hs.extend(
            zs.iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, w)| w - z),
        );
        let chamber = Cone::from_halfspaces(&hs).unwrap();
        for h in hilbert_basis(&chamber).unwrap() {
            let value = z.dot(&RationalVector::from_ints(&h));
            level = level.max(value.to_integer().try_into().unwrap());
        }
    }
    level
}

fn criterion4(c: &mut Checks) {
    let mut battery: Vec<MonomialFiltration> = vec![fex()];
    battery.extend(sample(
        rank2_singularity().prop_flat_map(|s| integral_filtration(&s)),
        9,
    ));
    let tol = rat(1, 1_000_000_000);
    for f in battery {
        let s = f.ambient().clone();
        let xi0 = s
            .rays()
            .iter()
            .fold(RationalVector::zeros(2), |a, r| &a + r);
        let p = Polarization::new(&s, &xi0).unwrap();
        let (s_t, l_t) = (p.s_invariant(&f).unwrap(), p.lambda_max(&f).unwrap().value);
        let j_t = p.reduced_j(&f, &tol).unwrap().upper;
        let gen = generation_level(&f) as u64;
        let (mut prev_s, mut prev_l) = (Q::zero(), Q::zero());
        let mut last = None;
        for m in 1..=gen + 1 {
            let fm = f.approximant(m, DEFAULT_BUDGET).unwrap();
            let (sm, lm) = (
                p.s_invariant(&fm).unwrap(),
                p.lambda_max(&fm).unwrap().value,
            );
            c.check(sm >= prev_s && lm >= prev_l, || {
                format!("F_{m} of {f:?} not monotone")
            });
            c.check(sm <= s_t && lm <= l_t, || {
                format!("F_{m} of {f:?} overshoots")
            });
            if m >= gen {
                c.check(sm == s_t && lm == l_t, || {
                    format!("F_{m} of {f:?} misses its targets (generation level {gen})")
                });
            }
            (prev_s, prev_l) = (sm, lm);
            last = Some(fm);
        }
        let j_m = p.reduced_j(&last.unwrap(), &tol).unwrap().upper;
        let diff = to_f64(&(j_m - &j_t)).abs();
        c.check(diff <= 1e-6, || {
            format!("|J_T(F_m) − J_T(F)| = {diff} at m = {}", gen + 1)
        });
    }
}

/// `∇vol(ξ) ∥ u`, i.e. `ξ` is critical for `nvol`.
fn stationary(s: &ConeSingularity, xi: &RationalVector) -> bool {
    let g = vol_gradient(s, xi).unwrap();
    let u = s.log_discrepancy_covector();
    let (gu, uu) = (g.dot(u), u.norm_sq());
    (&g.scale(&uu) - &u.scale(&gu)).is_zero()
}

fn criterion5(c: &mut Checks) {
    let h = rat(1, 1_000_000);
    for setup in sample(setup(), 20) {
        let (s, xi) = (&setup.s, &setup.xi);
        let grad = vol_gradient(s, xi).unwrap();
        let mut err = 0.0f64;
        for i in 0..s.rank() {
            let e = RationalVector::unit(s.rank(), i).scale(&h);
            let fd = (vol(s, &(xi + &e)).unwrap() - vol(s, &(xi - &e)).unwrap()) / (int(2) * &h);
            err += to_f64(&(fd - &grad[i])).powi(2);
        }
        let rel = err.sqrt() / to_f64(&grad.norm_sq()).sqrt();
        c.check(rel < 1e-7, || {
            format!("gradient relative error {rel:e} at {xi}")
        });
    }
    for setup in sample(setup(), 50) {
        let p = Polarization::new(&setup.s, &setup.xi0).unwrap();
        c.eq(
            "Fut forms",
            p.futaki_derivative(&setup.eta),
            p.futaki_product(&setup.eta),
        );
    }
    let tol = rat(1, 1_000_000_000);
    let cones = [
        c2(),
        ConeSingularity::from_rays(&[v(&[1, 0]), v(&[1, 2])], &[int(0), int(0)]).unwrap(),
        ConeSingularity::from_rays(&[v(&[1, 0]), v(&[1, 3])], &[int(0), int(0)]).unwrap(),
    ];
    let mut points: Vec<(ConeSingularity, RationalVector)> = Vec::new();
    for s in &cones {
        let r = minimize_nvol(s, &tol).unwrap();
        let gap = to_f64(&r.certificate_gap);
        c.check(gap < 1e-9, || format!("certificate gap {gap:e}"));
        points.push((s.clone(), r.minimizer));
    }
    for setup in sample(setup(), 30) {
        points.push((setup.s, setup.xi0));
    }
    for (s, xi) in points {
        let verdict = Polarization::new(&s, &xi)
            .unwrap()
            .semistable_verdict()
            .semistable;
        c.eq("stationary iff semistable", stationary(&s, &xi), verdict);
    }
}

fn criterion6(c: &mut Checks) {
    for setup in sample(setup(), 100) {
        let p = Polarization::new(&setup.s, &setup.xi0).unwrap();
        let f = &setup.f;
        let (x, y) = (
            project(&setup.eta, &setup.xi0),
            project(&setup.xi, &setup.xi0),
        );
        let j = |z: &RationalVector| p.twisted_j(f, z).unwrap().0;
        let mid = (&x + &y).scale(&half());
        c.check(j(&mid) <= (j(&x) + j(&y)) * half(), || {
            format!("J not midpoint convex for {f:?}")
        });

        let s = p.s_invariant(f).unwrap();
        let c_sq = p.coercivity_constant_sq();
        for z in [&x, &y, &mid] {
            let total = j(z) + &s;
            c.check(
                !total.is_negative() && num::pow(total, 2) >= &c_sq * z.norm_sq(),
                || format!("coercivity fails at {z}"),
            );
        }

        let h = setup.g.twist(&setup.xi).unwrap();
        let at = |t: &Q| {
            p.s_invariant(&geodesic(f, &h, t).intersect(&setup.g).unwrap())
                .unwrap()
        };
        c.check(
            at(&half()) >= (at(&Q::zero()) + at(&Q::one())) * half(),
            || format!("S not concave along {f:?} ∩ geodesic"),
        );
    }
}

fn main() {
    type Run = fn(&mut Checks);
    let criteria: [(u32, &str, Run, Duration); 6] = [
        (
            1,
            "exact identity suite",
            criterion1,
            Duration::from_secs(10),
        ),
        (2, "worked cases", criterion2, Duration::from_secs(5)),
        (
            3,
            "estimator convergence",
            criterion3,
            Duration::from_secs(120),
        ),
        (
            4,
            "approximating sequences",
            criterion4,
            Duration::from_secs(120),
        ),
        (
            5,
            "derivative and optimizer guards",
            criterion5,
            Duration::from_secs(30),
        ),
        (
            6,
            "convexity and concavity probes",
            criterion6,
            Duration::from_secs(30),
        ),
    ];
    let mut failed = 0;
    for (k, name, run, limit) in criteria {
        let mut checks = Checks::default();
        let start = Instant::now();
        run(&mut checks);
        let took = start.elapsed();
        let slow = took > limit;
        let ok = checks.failures.is_empty() && !slow;
        println!(
            "criterion {k}: {} {name} ({} checks, {:.2}s of {}s)",
            if ok { "PASS" } else { "FAIL" },
            checks.total,
            took.as_secs_f64(),
            limit.as_secs()
        );
        for f in checks.failures.iter().take(5) {
            println!("  {f}");
        }
        if checks.failures.len() > 5 {
            println!("  ... {} more", checks.failures.len() - 5);
        }
        if slow {
            println!("  over the time limit");
        }
        if !ok {
            failed += 1;
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
