//! Random cone singularities, Reeb vectors and monomial filtrations shared
//! by the property tests and the acceptance harness.

#![allow(dead_code)]

use conestab_core::exactgeom::{int, rat};
use conestab_core::{ConeSingularity, MonomialFiltration, RationalVector, Q};
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

pub fn v(c: &[i64]) -> RationalVector {
    RationalVector::from_ints(c)
}

pub fn c2() -> ConeSingularity {
    ConeSingularity::affine_space(2)
}

pub fn fex() -> MonomialFiltration {
    MonomialFiltration::new(&c2(), vec![v(&[2, 1]), v(&[1, 2])]).unwrap()
}

fn det3(r: &[[i64; 3]; 3]) -> i64 {
    r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
        - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
        + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
}

fn coefficient() -> impl Strategy<Value = Q> {
    (0i64..3).prop_map(|k| rat(k, 4))
}

pub fn rank2_singularity() -> impl Strategy<Value = ConeSingularity> {
    (
        [-3i64..=3, -3i64..=3, -3i64..=3, -3i64..=3],
        coefficient(),
        coefficient(),
    )
        .prop_filter_map("pointed full-dimensional cone", |([a, b, c, d], p, q)| {
            if a * d - b * c <= 0 {
                return None;
            }
            ConeSingularity::from_rays(&[v(&[a, b]), v(&[c, d])], &[p, q]).ok()
        })
}

pub fn square_cone() -> ConeSingularity {
    let rays = [v(&[1, 0, 1]), v(&[0, 1, 1]), v(&[-1, 0, 1]), v(&[0, -1, 1])];
    ConeSingularity::from_rays(&rays, &[int(0), int(0), int(0), int(0)]).unwrap()
}

pub fn rank3_singularity() -> impl Strategy<Value = ConeSingularity> {
    let simplicial = (
        [
            [-2i64..=2, -2i64..=2, 1i64..=2],
            [-2i64..=2, -2i64..=2, 1i64..=2],
            [-2i64..=2, -2i64..=2, 1i64..=2],
        ],
        [coefficient(), coefficient(), coefficient()],
    )
        .prop_filter_map("simplicial cone", |(r, a)| {
            let d = det3(&r);
            if d == 0 || d.abs() > 12 {
                return None;
            }
            let rays: Vec<RationalVector> = r.iter().map(|x| v(x)).collect();
            ConeSingularity::from_rays(&rays, &a).ok()
        });
    prop_oneof![4 => simplicial, 1 => Just(square_cone())]
}

pub fn singularity() -> impl Strategy<Value = ConeSingularity> {
    prop_oneof![rank2_singularity(), rank3_singularity()]
}

/// `Σ c_i v_i` with positive rational `c_i`, a point of the open Reeb cone.
pub fn interior(s: &ConeSingularity) -> impl Strategy<Value = RationalVector> {
    let rays = s.rays().to_vec();
    prop::collection::vec((1i64..=4, 1i64..=3), rays.len()).prop_map(move |cs| {
        rays.iter()
            .zip(cs)
            .fold(RationalVector::zeros(rays[0].dim()), |acc, (r, (p, q))| {
                &acc + &r.scale(&rat(p, q))
            })
    })
}

/// Monomial filtrations with one to three covectors in the open Reeb cone.
pub fn filtration(s: &ConeSingularity) -> impl Strategy<Value = MonomialFiltration> {
    let s2 = s.clone();
    prop::collection::vec(interior(s), 1..=3)
        .prop_map(move |zs| MonomialFiltration::new(&s2, zs).unwrap())
}

/// Integer covectors, so `F` is finitely generated in low degree.
pub fn integral_filtration(s: &ConeSingularity) -> impl Strategy<Value = MonomialFiltration> {
    let rays = s.rays().to_vec();
    let s2 = s.clone();
    prop::collection::vec(prop::collection::vec(1i64..=3, rays.len()), 1..=3).prop_map(move |cs| {
        let zs = cs
            .iter()
            .map(|c| {
                rays.iter()
                    .zip(c)
                    .fold(RationalVector::zeros(rays[0].dim()), |acc, (r, &k)| {
                        &acc + &r.scale(&int(k))
                    })
            })
            .collect();
        MonomialFiltration::new(&s2, zs).unwrap()
    })
}

pub fn lattice_vector(n: usize) -> impl Strategy<Value = RationalVector> {
    prop::collection::vec(-3i64..=3, n).prop_map(|c| v(&c))
}

#[derive(Clone, Debug)]
pub struct Setup {
    pub s: ConeSingularity,
    pub xi0: RationalVector,
    pub f: MonomialFiltration,
    pub g: MonomialFiltration,
    /// A Reeb vector used for twists.
    pub xi: RationalVector,
    /// An arbitrary lattice direction in `N`.
    pub eta: RationalVector,
    pub a: Q,
}

pub fn setup_on(s: impl Strategy<Value = ConeSingularity>) -> impl Strategy<Value = Setup> {
    s.prop_flat_map(|s| {
        let n = s.rank();
        (
            interior(&s),
            filtration(&s),
            filtration(&s),
            interior(&s),
            lattice_vector(n),
            (1i64..=5, 1i64..=3),
            Just(s),
        )
            .prop_map(|(xi0, f, g, xi, eta, (p, q), s)| Setup {
                s,
                xi0,
                f,
                g,
                xi,
                eta,
                a: rat(p, q),
            })
    })
}

pub fn setup() -> impl Strategy<Value = Setup> {
    setup_on(singularity())
}

/// `count` deterministic draws from `strategy`.
pub fn sample<S: Strategy>(strategy: S, count: usize) -> Vec<S::Value> {
    let mut runner = TestRunner::deterministic();
    (0..count)
        .map(|_| {
            strategy
                .new_tree(&mut runner)
                .expect("strategy generates")
                .current()
        })
        .collect()
}
