//! Finite-level lattice estimators of `S` and `λ_max`, and the semigroup data
//! behind the Okounkov body.
//!
//! At level `m` the monomials `x^α` with `⟨α, ξ₀⟩ < m` form a basis of
//! `R/F₀^m` compatible with every monomial filtration at once, so no basis
//! search is needed. Orders are taken in the ℕ-rounded filtration
//! (`⌊g⌋` and `⌊⟨·, ξ₀⟩⌋`), which leaves every limit unchanged.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactgeom::lattice::{for_each_below, IntegerSlice};
use crate::exactgeom::{
    hilbert_basis, int, lattice_generated, serde_opt_q, serde_q, to_decimal, RationalVector, Q,
};
use crate::filtration::{IntegerTransform, MonomialFiltration};
use crate::invariants::Polarization;
use crate::singularity::ConeSingularity;

/// Column header of [`EstimatorSweep::to_csv`].
pub const CSV_HEADER: &str = "m,N_m,TS_m,S_m,Sp_m,Spp_m,lammax_m";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub m: u64,
    pub n_m: u64,
    /// `T̃S_m(F₀; F)`.
    #[serde(with = "serde_q")]
    pub ts: Q,
    /// `T̃S_m(F₀; F₀)`.
    #[serde(with = "serde_q")]
    pub ts0: Q,
    /// Undefined while `T̃S_m(F₀; F₀) = 0`.
    #[serde(with = "serde_opt_q", default, skip_serializing_if = "Option::is_none")]
    pub s_m: Option<Q>,
    #[serde(with = "serde_opt_q", default, skip_serializing_if = "Option::is_none")]
    pub sp_m: Option<Q>,
    #[serde(with = "serde_q")]
    pub spp_m: Q,
    /// `λ^{(m)}_max / m`, with `λ^{(m)}_max` the largest `g` on the window.
    #[serde(with = "serde_q")]
    pub lammax_m: Q,
    /// `N_m · n!/mⁿ`, which tends to `vol(ξ₀)`.
    #[serde(with = "serde_q")]
    pub mult_m: Q,
    /// `#{α : ⟨α, ξ₀⟩ ≤ m}`, the size of `Γ_m`.
    pub count_gamma: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepTarget {
    #[serde(with = "serde_q")]
    pub s: Q,
    #[serde(with = "serde_q")]
    pub lambda_max: Q,
    #[serde(with = "serde_q")]
    pub vol: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimatorSweep {
    pub levels: Vec<u64>,
    pub per_level: Vec<LevelRecord>,
    pub target: SweepTarget,
}

impl EstimatorSweep {
    pub fn record(&self, m: u64) -> Option<&LevelRecord> {
        self.per_level.iter().find(|r| r.m == m)
    }

    /// One row per level; counts are exact and ratios are 12-digit decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        let opt = |x: &Option<Q>| x.as_ref().map(|q| to_decimal(q, 12)).unwrap_or_default();
        for r in &self.per_level {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.m,
                r.n_m,
                r.ts,
                opt(&r.s_m),
                opt(&r.sp_m),
                to_decimal(&r.spp_m, 12),
                to_decimal(&r.lammax_m, 12)
            );
        }
        out
    }

    /// Smallest level `m0` of the window with `S''_m ≤ (1+ε)·S` for every
    /// level `m ≥ m0` present.
    pub fn bj_threshold(&self, eps: &Q) -> Option<u64> {
        let bound = (Q::one() + eps) * &self.target.s;
        let mut m0 = None;
        for r in self.per_level.iter().rev() {
            if r.spp_m > bound {
                break;
            }
            m0 = Some(r.m);
        }
        m0
    }
}

/// Per-shell totals; shell `k` holds the points with `k − 1 ≤ ⟨α, ξ₀⟩ < k`.
#[derive(Clone, Default)]
struct Shell {
    count: u64,
    ts: i128,
    ts0: i128,
    max_g: Option<i64>,
    /// Points with `⌈⟨α, ξ₀⟩⌉ = k`, for `Γ` counts.
    ceil_count: u64,
}

fn check_levels(levels: &[u64]) -> Result<u64> {
    if levels.is_empty() {
        return Err(Error::EmptyInput);
    }
    if levels.contains(&0) {
        return Err(Error::InvalidArgument("levels must be at least 1".into()));
    }
    Ok(*levels.iter().max().expect("nonempty"))
}

/// Exact estimator statistics of `F` at each requested level.
pub fn sweep(
    s: &ConeSingularity,
    xi0: &RationalVector,
    f: &MonomialFiltration,
    levels: &[u64],
    cap: usize,
) -> Result<EstimatorSweep> {
    let pol = Polarization::new(s, xi0)?;
    if !f.ambient().eq(s) {
        return Err(Error::AmbientMismatch);
    }
    let top = check_levels(levels)?;
    let target = SweepTarget {
        s: pol.s_invariant(f)?,
        lambda_max: pol.lambda_max(f)?.value,
        vol: pol.vol(),
    };
    let g = IntegerTransform::new(f.transform())?;
    let slice = IntegerSlice::new(s.weight_cone(), xi0)?;
    // shells 1..=top+1 cover the window of level top + 1, needed by S'_top
    let mut shells = vec![Shell::default(); top as usize + 2];
    for_each_below(
        s.weight_cone(),
        xi0,
        &int(top as i64 + 1),
        false,
        cap,
        |p| {
            let w = slice.scaled_weight(p);
            let (fl, rem) = w.div_rem(&slice.den);
            let k = fl as usize + 1;
            let gs = g.scaled(p);
            let sh = &mut shells[k];
            sh.count += 1;
            sh.ts += Integer::div_floor(&gs, &g.den) as i128;
            sh.ts0 += fl as i128;
            sh.max_g = Some(sh.max_g.map_or(gs, |x| x.max(gs)));
            let ceil = if rem == 0 { fl } else { fl + 1 };
            shells[ceil as usize].ceil_count += 1;
        },
    )?;

    let n = s.rank();
    let nq = int(n as i64);
    let fact: BigInt = (1..=n as u64).map(BigInt::from).product();
    let g_den = int(g.den);
    // cumulative totals at level m = shells 1..=m
    let mut cum = Vec::with_capacity(shells.len());
    let (mut count, mut ts, mut ts0, mut gamma) = (0u64, 0i128, 0i128, 0u64);
    let mut max_g: Option<i64> = None;
    for (k, sh) in shells.iter().enumerate() {
        count += sh.count;
        ts += sh.ts;
        ts0 += sh.ts0;
        gamma += sh.ceil_count;
        if let Some(x) = sh.max_g {
            max_g = Some(max_g.map_or(x, |y| y.max(x)));
        }
        cum.push((k as u64, count, ts, ts0, max_g, gamma));
    }

    let mut sorted: Vec<u64> = levels.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let per_level = sorted
        .iter()
        .map(|&m| {
            let (_, n_m, ts, ts0, max_g, gamma) = cum[m as usize];
            let (_, _, ts1, ts01, _, _) = cum[m as usize + 1];
            let mq = int(m as i64);
            let ts_q = Q::from_integer(ts.into());
            let ts0_q = Q::from_integer(ts0.into());
            let ratio = |a: i128, b: i128| (b != 0).then(|| Q::new(a.into(), b.into()));
            LevelRecord {
                m,
                n_m,
                s_m: ratio(ts, ts0),
                sp_m: ratio(ts1 - ts, ts01 - ts0),
                spp_m: (&nq + Q::one()) / &nq * &ts_q / (&mq * int(n_m as i64)),
                lammax_m: int(max_g.expect("the origin lies in every window")) / &g_den / &mq,
                mult_m: int(n_m as i64) * Q::from_integer(fact.clone()) / num::pow(mq.clone(), n),
                count_gamma: gamma,
                ts: ts_q,
                ts0: ts0_q,
            }
        })
        .collect();
    Ok(EstimatorSweep {
        levels: sorted,
        per_level,
        target,
    })
}

/// [`sweep`] for the approximating filtration `F_{m_filtration}`; the target
/// stays the closed form of `F` itself.
pub fn sweep_approx(
    s: &ConeSingularity,
    xi0: &RationalVector,
    f: &MonomialFiltration,
    m_filtration: u64,
    levels: &[u64],
    cap: usize,
) -> Result<EstimatorSweep> {
    let fm = f.approximant(m_filtration, cap)?;
    let mut out = sweep(s, xi0, &fm, levels, cap)?;
    let pol = Polarization::new(s, xi0)?;
    out.target.s = pol.s_invariant(f)?;
    out.target.lambda_max = pol.lambda_max(f)?.value;
    Ok(out)
}

/// `Γ_{m,⌈mt⌉}(F)`: lattice points of `σ∨` with `⟨α, ξ₀⟩ ≤ m` and `g(α) ≥ mt`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemigroupSample {
    pub m: u64,
    #[serde(with = "serde_q")]
    pub t: Q,
    pub points: Vec<Vec<i64>>,
    /// `Γ/m`, the empirical approximation of the Okounkov body slice.
    pub cloud: Vec<RationalVector>,
}

impl SemigroupSample {
    /// Only the origin has weight zero.
    pub fn trivial_at_level_zero(&self, xi0: &RationalVector) -> bool {
        self.points
            .iter()
            .all(|p| p.iter().all(|&x| x == 0) || !xi0.dot(&RationalVector::from_ints(p)).is_zero())
    }
}

pub fn gamma_semigroup(
    s: &ConeSingularity,
    xi0: &RationalVector,
    f: &MonomialFiltration,
    m: u64,
    t: &Q,
    cap: usize,
) -> Result<SemigroupSample> {
    Polarization::new(s, xi0)?;
    if !f.ambient().eq(s) {
        return Err(Error::AmbientMismatch);
    }
    let mq = int(m as i64);
    let level = &mq * t;
    let g = IntegerTransform::new(f.transform())?;
    // g(α) ≥ mt  ⟺  den·g(α) ≥ ⌈den·mt⌉
    let need = (&level * int(g.den)).ceil().to_integer();
    let mut points = Vec::new();
    for_each_below(s.weight_cone(), xi0, &mq, true, cap, |p| {
        if BigInt::from(g.scaled(p)) >= need {
            points.push(p.to_vec());
        }
    })?;
    let cloud = if m == 0 {
        Vec::new()
    } else {
        let inv = Q::one() / &mq;
        points
            .iter()
            .map(|p| RationalVector::from_ints(p).scale(&inv))
            .collect()
    };
    Ok(SemigroupSample {
        m,
        t: t.clone(),
        points,
        cloud,
    })
}

/// Checks `Γ_{m₁,m₁t₁} + Γ_{m₂,m₂t₂} ⊆ Γ_{m₁+m₂, m₁t₁+m₂t₂}` on up to
/// `max_pairs` pairs, in enumeration order.
pub fn additive_closure_holds(
    xi0: &RationalVector,
    f: &MonomialFiltration,
    a: &SemigroupSample,
    b: &SemigroupSample,
    max_pairs: usize,
) -> bool {
    let m = int((a.m + b.m) as i64);
    let level = int(a.m as i64) * &a.t + int(b.m as i64) * &b.t;
    a.points
        .iter()
        .flat_map(|p| b.points.iter().map(move |q| (p, q)))
        .take(max_pairs)
        .all(|(p, q)| {
            let sum: Vec<i64> = p.iter().zip(q).map(|(x, y)| x + y).collect();
            let sum = RationalVector::from_ints(&sum);
            xi0.dot(&sum) <= m && f.transform().eval(&sum) >= level
        })
}

/// Whether `S''_m ≤ (1+ε)·S` for every `m` with `m0 ≤ m ≤ max_level`.
pub fn bj_bound_check(
    s: &ConeSingularity,
    xi0: &RationalVector,
    f: &MonomialFiltration,
    eps: &Q,
    m0: u64,
    max_level: u64,
    cap: usize,
) -> Result<bool> {
    if !eps.is_positive() {
        return Err(Error::NonpositiveScale(eps.clone()));
    }
    if m0 == 0 || m0 > max_level {
        return Err(Error::InvalidArgument(format!(
            "empty level window {m0}..={max_level}"
        )));
    }
    let levels: Vec<u64> = (m0..=max_level).collect();
    let sw = sweep(s, xi0, f, &levels, cap)?;
    let bound = (Q::one() + eps) * &sw.target.s;
    Ok(sw.per_level.iter().all(|r| r.spp_m <= bound))
}

/// Largest of the per-filtration thresholds of [`EstimatorSweep::bj_threshold`],
/// i.e. one `m0` serving the whole battery; `None` if some sweep never settles.
pub fn bj_uniform_threshold(sweeps: &[EstimatorSweep], eps: &Q) -> Option<u64> {
    sweeps
        .iter()
        .map(|s| s.bj_threshold(eps))
        .try_fold(0, |acc, m| m.map(|m| acc.max(m)))
}

/// Witness that the exponent valuation is good for `ℓ = ⟨·, ξ₀⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodValuation {
    pub ell: RationalVector,
    /// `ord_𝔪(x^α) ≥ r₀·ℓ(α)` on all of `σ∨ ∩ M`.
    #[serde(with = "serde_q")]
    pub r0: Q,
    pub generators: Vec<Vec<i64>>,
}

/// Leaves are one-dimensional for monomials; the remaining conditions are
/// lattice generation, positivity of `ℓ` on `σ∨ \ {0}`, and a valid `r₀`.
///
/// Any expression of `α` as a sum of `k` Hilbert basis elements `h` has
/// `ℓ(α) ≤ k·max ℓ(h)`, so `r₀ = 1/max_h ℓ(h)` works; it is sharp because
/// `ord_𝔪(x^h) = 1` on the basis.
pub fn good_valuation_check(s: &ConeSingularity, xi0: &RationalVector) -> Result<GoodValuation> {
    if !s.reeb_contains(xi0) {
        return Err(Error::NotReeb(xi0.clone()));
    }
    let generators = hilbert_basis(s.weight_cone())?;
    if !lattice_generated(&generators, s.rank()) {
        return Err(Error::LatticeNotGenerated);
    }
    let top = generators
        .iter()
        .map(|h| xi0.dot(&RationalVector::from_ints(h)))
        .max()
        .expect("nonempty Hilbert basis");
    Ok(GoodValuation {
        ell: xi0.clone(),
        r0: Q::one() / top,
        generators,
    })
}

/// JSON view of the Okounkov body and `Γ_m` clouds for external plotting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OkounkovExport {
    pub vertices: Vec<RationalVector>,
    #[serde(with = "serde_q")]
    pub volume: Q,
    pub barycenter: RationalVector,
    pub clouds: BTreeMap<u64, SemigroupSample>,
}

pub fn okounkov_export(
    s: &ConeSingularity,
    xi0: &RationalVector,
    f: &MonomialFiltration,
    levels: &[u64],
    t: &Q,
    cap: usize,
) -> Result<OkounkovExport> {
    let pol = Polarization::new(s, xi0)?;
    let body = pol.body();
    let clouds = levels
        .iter()
        .map(|&m| Ok((m, gamma_semigroup(s, xi0, f, m, t, cap)?)))
        .collect::<Result<_>>()?;
    Ok(OkounkovExport {
        vertices: body.body.vertices().to_vec(),
        volume: body.vol.clone(),
        barycenter: body.bary.clone(),
        clouds,
    })
}

/// Decimal view of an exact ratio, for quick comparisons in harnesses.
pub fn ratio_f64(x: &Q) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}
