//! p-adic valuations, fractional parts, the additive character and balls,
//! all computed exactly on rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::{format_rational, p_power, parse_rational, CyclotomicScalar, Rational};

fn strip_p(n: &BigInt, p: &BigInt) -> (i64, BigInt) {
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return (k, n);
        }
        n = q;
        k += 1;
    }
}

/// `ord_p(x)`, with `None` standing for `+∞` at `x = 0`.
pub fn p_order(x: &Rational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    Some(strip_p(x.numer(), &pb).0 - strip_p(x.denom(), &pb).0)
}

/// `ord_p(x)` with `+∞` replaced by `i64::MAX`.
pub(crate) fn ord(x: &Rational, p: u64) -> i64 {
    p_order(x, p).unwrap_or(i64::MAX)
}

/// `|x|_p`.
pub fn p_norm(x: &Rational, p: u64) -> Rational {
    match p_order(x, p) {
        None => Rational::zero(),
        Some(k) => p_power(p, -k),
    }
}

/// `x·p^{-ord x}` for `x ≠ 0`.
pub fn unit_part(x: &Rational, p: u64) -> Rational {
    x * p_power(p, -ord(x, p))
}

/// `x mod p^k` as an integer in `[0, p^k)` for `x ∈ Z_p`.
pub fn residue_mod(x: &Rational, p: u64, k: u32) -> BigInt {
    let m = BigInt::from(p).pow(k);
    let inv = mod_inverse(&x.denom().mod_floor(&m), &m);
    (x.numer() * inv).mod_floor(&m)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    if m.is_one() {
        return BigInt::zero();
    }
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// Residue class mod `p` of the unit part of `x ≠ 0`, in `1..p`.
pub fn unit_residue(x: &Rational, p: u64) -> u64 {
    residue_mod(&unit_part(x, p), p, 1).to_u64().unwrap()
}

/// `{x}_p ∈ [0, 1)`, the polar part of the p-adic expansion.
pub fn frac_part(x: &Rational, p: u64) -> Rational {
    let e = match p_order(x, p) {
        Some(k) if k < 0 => (-k) as u32,
        _ => return Rational::zero(),
    };
    let pe = BigInt::from(p).pow(e);
    let rest = x.denom() / &pe;
    let inv = mod_inverse(&rest.mod_floor(&pe), &pe);
    let k = (x.numer() * inv).mod_floor(&pe);
    Rational::new(k, pe)
}

/// `χ(x) = exp(2πi{x}_p)` as a root of unity.
pub fn char_value(x: &Rational, p: u64) -> CyclotomicScalar {
    let f = frac_part(x, p);
    if f.is_zero() {
        return CyclotomicScalar::one(p);
    }
    let level = strip_p(f.denom(), &BigInt::from(p)).0 as u32;
    CyclotomicScalar::root_of_unity(p, level, f.numer().to_u64().unwrap())
}

/// Point of `Q_p^n` with rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PVector {
    prime: u64,
    coords: Vec<Rational>,
}

impl PVector {
    pub fn new(prime: u64, coords: Vec<Rational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Invalid("vector of dimension 0".into()));
        }
        Ok(PVector { prime, coords })
    }

    pub fn zero(prime: u64, dim: usize) -> Self {
        PVector {
            prime,
            coords: vec![Rational::zero(); dim],
        }
    }

    /// `e_i`.
    pub fn unit(prime: u64, dim: usize, i: usize) -> Self {
        let mut v = Self::zero(prime, dim);
        v.coords[i] = Rational::one();
        v
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// `min_i ord(x_i)`, `None` at the origin.
    pub fn order(&self) -> Option<i64> {
        self.coords.iter().filter_map(|c| p_order(c, self.prime)).min()
    }

    pub fn norm(&self) -> Rational {
        v_norm(self)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime, other.prime));
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(PVector {
            prime: self.prime,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        PVector {
            prime: self.prime,
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PVector {
            prime: self.prime,
            coords: self.coords.iter().map(|a| a * c).collect(),
        }
    }

    pub fn dot(&self, other: &Self) -> Result<Rational> {
        self.check(other)?;
        Ok(self
            .coords
            .iter()
            .zip(&other.coords)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b))
    }
}

impl fmt::Debug for PVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// `‖x‖_p = max_i |x_i|_p`.
pub fn v_norm(v: &PVector) -> Rational {
    v.coords
        .iter()
        .map(|c| p_norm(c, v.prime))
        .max()
        .unwrap_or_else(Rational::zero)
}

/// Canonical representative of `a` modulo `p^{-γ}Z_p`.
pub(crate) fn canonical_coord(a: &Rational, p: u64, gamma: i64) -> Rational {
    let scale = p_power(p, gamma);
    frac_part(&(a * &scale), p) / scale
}

/// `B_γ(a) = {x : ‖x − a‖_p ≤ p^γ}`.
///
/// The center is stored as the canonical representative whose coordinates
/// lie in `[0, p^{-γ})` with only digits below `p^{-γ}`, so equal balls
/// compare equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ball {
    center: PVector,
    gamma: i64,
}

impl Ball {
    pub fn new(center: PVector, gamma: i64) -> Self {
        let p = center.prime;
        let coords = center
            .coords
            .iter()
            .map(|a| canonical_coord(a, p, gamma))
            .collect();
        Ball {
            center: PVector { prime: p, coords },
            gamma,
        }
    }

    /// `B_γ(0)`.
    pub fn centered(prime: u64, dim: usize, gamma: i64) -> Self {
        Ball {
            center: PVector::zero(prime, dim),
            gamma,
        }
    }

    pub fn center(&self) -> &PVector {
        &self.center
    }

    pub fn gamma(&self) -> i64 {
        self.gamma
    }

    pub fn prime(&self) -> u64 {
        self.center.prime
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn volume(&self) -> Rational {
        p_power(self.prime(), self.gamma * self.dim() as i64)
    }

    pub fn contains(&self, x: &PVector) -> bool {
        let p = self.prime();
        x.dim() == self.dim()
            && x.coords
                .iter()
                .zip(&self.center.coords)
                .all(|(a, c)| ord(&(a - c), p) >= -self.gamma)
    }

    pub fn contains_origin(&self) -> bool {
        self.center.is_zero()
    }

    /// The `p^n` balls of exponent `γ − 1` tiling this one.
    pub fn children(&self) -> Vec<Ball> {
        let p = self.prime();
        let n = self.dim();
        let step = p_power(p, -self.gamma);
        let digits: Vec<Rational> = (0..p).map(|d| Rational::from_integer(d.into()) * &step).collect();
        let count = (p as usize).pow(n as u32);
        let mut out = Vec::with_capacity(count);
        for idx in 0..count {
            let mut rest = idx;
            let mut coords = Vec::with_capacity(n);
            for c in &self.center.coords {
                coords.push(c + &digits[rest % p as usize]);
                rest /= p as usize;
            }
            out.push(Ball {
                center: PVector { prime: p, coords },
                gamma: self.gamma - 1,
            });
        }
        out
    }

    /// The ball of exponent `gamma ≥ self.gamma` containing this one.
    pub fn coarsen(&self, gamma: i64) -> Ball {
        debug_assert!(gamma >= self.gamma);
        Ball::new(self.center.clone(), gamma)
    }

    pub fn contains_ball(&self, other: &Ball) -> bool {
        other.gamma <= self.gamma && self.contains(&other.center)
    }

    pub fn intersects(&self, other: &Ball) -> bool {
        self.contains_ball(other) || other.contains_ball(self)
    }

    pub fn to_json(&self) -> BallJson {
        BallJson {
            center: self.center.coords.iter().map(format_rational).collect(),
            gamma: self.gamma,
        }
    }

    pub fn from_json(prime: u64, b: &BallJson) -> Result<Ball> {
        let coords = b
            .center
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Ball::new(PVector::new(prime, coords)?, b.gamma))
    }
}

impl fmt::Debug for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B_{}{:?}", self.gamma, self.center)
    }
}

/// Wire form of a ball: rational-string coordinates and integer `γ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallJson {
    pub center: Vec<String>,
    pub gamma: i64,
}

/// Whether `x` is a p-adic integer.
pub fn is_integral(x: &Rational, p: u64) -> bool {
    ord(x, p) >= 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    #[test]
    fn orders_and_norms() {
        assert_eq!(p_order(&rat(5, 1), 5), Some(1));
        assert_eq!(p_norm(&rat(5, 1), 5), rat(1, 5));
        assert_eq!(p_order(&rat(2, 3), 5), Some(0));
        assert_eq!(p_order(&rat(0, 1), 5), None);
        let v = PVector::new(5, vec![rat(5, 1), rat(1, 5)]).unwrap();
        assert_eq!(v_norm(&v), rat(5, 1));
    }

    #[test]
    fn fractional_parts() {
        assert_eq!(frac_part(&rat(7, 2), 3), rat(0, 1));
        assert_eq!(frac_part(&rat(1, 3), 3), rat(1, 3));
        assert_eq!(frac_part(&rat(4, 9), 3), rat(4, 9));
        // 1/(3·2): 2^{-1} ≡ 2 mod 3
        assert_eq!(frac_part(&rat(1, 6), 3), rat(2, 3));
        assert_eq!(frac_part(&rat(-1, 3), 3), rat(2, 3));
    }

    #[test]
    fn character() {
        assert!(char_value(&rat(3, 2), 3).is_one());
        assert_eq!(char_value(&rat(1, 5), 5), CyclotomicScalar::root_of_unity(5, 1, 1));
        let (x, y) = (rat(7, 25), rat(-3, 10));
        assert_eq!(
            char_value(&(&x + &y), 5),
            &char_value(&x, 5) * &char_value(&y, 5)
        );
    }

    #[test]
    fn balls() {
        let b = Ball::centered(3, 1, -1);
        assert!(b.contains(&PVector::new(3, vec![rat(3, 1)]).unwrap()));
        assert!(!b.contains(&PVector::new(3, vec![rat(1, 3)]).unwrap()));
        assert_eq!(Ball::centered(5, 4, 0).volume(), rat(1, 1));
        assert_eq!(Ball::centered(5, 2, -2).volume(), rat(1, 625));
        let kids = Ball::centered(3, 2, 1).children();
        assert_eq!(kids.len(), 9);
        let total: Rational = kids.iter().map(Ball::volume).sum();
        assert_eq!(total, Ball::centered(3, 2, 1).volume());
        for (i, a) in kids.iter().enumerate() {
            for b in &kids[i + 1..] {
                assert!(!a.intersects(b));
            }
            assert!(Ball::centered(3, 2, 1).contains_ball(a));
        }
    }

    #[test]
    fn canonical_centers() {
        let a = Ball::new(PVector::new(3, vec![rat(7, 3)]).unwrap(), 0);
        let b = Ball::new(PVector::new(3, vec![rat(1, 3)]).unwrap(), 0);
        assert_eq!(a, b);
        let c = Ball::new(PVector::new(3, vec![rat(9, 1)]).unwrap(), -1);
        assert!(c.contains_origin());
    }
}
