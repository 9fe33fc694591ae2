//! Exact rational convex geometry.
//!
//! Everything here is computed over `BigRational`; there is no floating point
//! on any path that produces a reported value.

mod cone;
pub mod lattice;
pub mod linalg;
pub mod lp;
mod pl;
mod polytope;

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};
use std::str::FromStr;

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use cone::{dual_cone, Cone};
pub use lattice::{hilbert_basis, lattice_generated, lattice_points_below, DEFAULT_BUDGET};
pub use lp::{lp_solve, Constraint, LpSolution, Relation, Sense};
pub use pl::{integrate_pl, PLConcave};
pub use polytope::{barycenter, level_polytope, slice_polytope, volume, Halfspace, Polytope};

/// Exact rational scalar.
pub type Q = BigRational;

/// Build `p/q` from machine integers.
pub fn rat(p: i64, q: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Q {
    Q::from_integer(BigInt::from(p))
}

/// Parse `"p/q"` or `"p"`; surrounding whitespace is ignored.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let valid = |t: &str| {
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num) || !valid(den) {
        return None;
    }
    let n = BigInt::from_str(num).ok()?;
    let d = BigInt::from_str(den).ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Q::new(n, d))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Decimal rendering of `x` rounded half away from zero to `digits` places.
pub fn to_decimal(x: &Q, digits: usize) -> String {
    let scale = num::pow(BigInt::from(10), digits);
    let scaled = x * Q::from_integer(scale.clone());
    let r = scaled.abs().round().to_integer();
    let (int_part, frac) = r.div_rem(&scale);
    let sign = if x.is_negative() && !r.is_zero() {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    format!(
        "{sign}{int_part}.{:0>width$}",
        frac.to_string(),
        width = digits
    )
}

/// Exact conversion of a finite `f64` (a dyadic rational).
pub fn from_f64(x: f64) -> Q {
    Q::from_float(x).expect("finite float")
}

/// Best rational approximation with denominator at most `max_den`
/// (continued-fraction convergents and semiconvergents).
pub fn rationalize(x: &Q, max_den: &BigInt) -> Q {
    if x.denom() <= max_den {
        return x.clone();
    }
    let (mut p0, mut q0, mut p1, mut q1) =
        (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let mut n = x.numer().clone();
    let mut d = x.denom().clone();
    loop {
        let (a, r) = n.div_mod_floor(&d);
        let q2 = &q0 + &a * &q1;
        if &q2 > max_den {
            let k = (max_den - &q0) / &q1;
            let semi = Q::new(&p0 + &k * &p1, &q0 + &k * &q1);
            let conv = Q::new(p1.clone(), q1.clone());
            return if (&semi - x).abs() < (&conv - x).abs() {
                semi
            } else {
                conv
            };
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        if r.is_zero() {
            return Q::new(p1, q1);
        }
        n = std::mem::replace(&mut d, r);
    }
}

/// A vector of exact rationals, used both for points of `N_ℝ`/`M_ℝ` and for
/// covectors on them.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector(pub Vec<Q>);

impl RationalVector {
    pub fn new(coords: Vec<Q>) -> Self {
        RationalVector(coords)
    }

    pub fn zeros(n: usize) -> Self {
        RationalVector(vec![Q::zero(); n])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RationalVector(coords.iter().map(|&c| int(c)).collect())
    }

    /// Unit vector `e_i` in dimension `n`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Q::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn dot(&self, other: &RationalVector) -> Q {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Q::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, c: &Q) -> Self {
        RationalVector(self.0.iter().map(|a| a * c).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn norm_sq(&self) -> Q {
        self.dot(self)
    }

    /// Integer multiple with coprime entries; the zero vector maps to itself.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|a| (a * Q::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, a| acc.gcd(a));
        RationalVector(ints.into_iter().map(|a| Q::from_integer(a / &g)).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|a| a.is_integer())
    }

    /// Integer coordinates, if every entry is an integer that fits in `i64`.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.0
            .iter()
            .map(|a| {
                if a.is_integer() {
                    a.to_integer().to_i64()
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(to_f64).collect()
    }
}

impl Index<usize> for RationalVector {
    type Output = Q;
    fn index(&self, i: usize) -> &Q {
        &self.0[i]
    }
}

impl Add for &RationalVector {
    type Output = RationalVector;
    fn add(self, rhs: &RationalVector) -> RationalVector {
        RationalVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RationalVector {
    type Output = RationalVector;
    fn sub(self, rhs: &RationalVector) -> RationalVector {
        RationalVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RationalVector {
    type Output = RationalVector;
    fn neg(self) -> RationalVector {
        RationalVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for RationalVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|a| a.to_string()))
    }
}

impl<'de> Deserialize<'de> for RationalVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| {
                parse_rational(s)
                    .ok_or_else(|| serde::de::Error::custom(format!("invalid rational {s:?}")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(RationalVector)
    }
}

/// Serde adapter for a single rational stored as a `"p/q"` string.
pub mod serde_q {
    use super::{parse_rational, Q};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rational(&raw)
            .ok_or_else(|| serde::de::Error::custom(format!("invalid rational {raw:?}")))
    }
}

/// Serde adapter for an optional rational stored as a `"p/q"` string or `null`.
pub mod serde_opt_q {
    use super::{parse_rational, Q};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(q) => s.serialize_some(&q.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|raw| {
                parse_rational(&raw)
                    .ok_or_else(|| serde::de::Error::custom(format!("invalid rational {raw:?}")))
            })
            .transpose()
    }
}
