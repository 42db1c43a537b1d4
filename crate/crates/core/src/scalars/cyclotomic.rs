use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use super::rational::{display_rational, Rational};
use crate::error::{Error, Result};

/// Element of `Q(ζ_{p^r})` written in the power basis `1, ζ, …, ζ^{φ(p^r)-1}`
/// where `ζ = exp(2πi/p^r)`.
///
/// The level `r` is always minimal, so structural equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicScalar {
    prime: u64,
    level: u32,
    coeffs: Vec<Rational>,
}

pub(crate) fn root_order(p: u64, level: u32) -> usize {
    (p as usize).pow(level)
}

pub(crate) fn basis_len(p: u64, level: u32) -> usize {
    if level == 0 {
        1
    } else {
        (p as usize).pow(level - 1) * (p as usize - 1)
    }
}

/// Folds a length-`p^level` vector of coefficients of `ζ^k` into the power basis.
fn reduce(p: u64, level: u32, mut raw: Vec<Rational>) -> Vec<Rational> {
    let n = root_order(p, level);
    debug_assert_eq!(raw.len(), n);
    let d = basis_len(p, level);
    if level == 0 {
        return raw;
    }
    let block = n / p as usize;
    for e in (d..n).rev() {
        if raw[e].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut raw[e]);
        let c0 = e - d;
        for i in 0..(p as usize - 1) {
            raw[i * block + c0] -= &c;
        }
    }
    raw.truncate(d);
    raw
}

impl CyclotomicScalar {
    fn canonical(prime: u64, mut level: u32, mut coeffs: Vec<Rational>) -> Self {
        let p = prime as usize;
        while level > 0 {
            let fits = coeffs
                .iter()
                .enumerate()
                .all(|(k, c)| c.is_zero() || k % p == 0);
            if !fits {
                break;
            }
            let d = basis_len(prime, level - 1);
            let mut lowered = vec![Rational::zero(); d];
            for (k, c) in coeffs.into_iter().enumerate() {
                if !c.is_zero() {
                    lowered[k / p] = c;
                }
            }
            coeffs = lowered;
            level -= 1;
        }
        CyclotomicScalar {
            prime,
            level,
            coeffs,
        }
    }

    /// Builds `Σ c_k ζ_{p^level}^k` from arbitrary exponents.
    pub fn from_powers<I>(prime: u64, level: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (u64, Rational)>,
    {
        let n = root_order(prime, level);
        let mut raw = vec![Rational::zero(); n];
        for (k, c) in terms {
            raw[(k % n as u64) as usize] += c;
        }
        Self::from_raw(prime, level, raw)
    }

    fn from_raw(prime: u64, level: u32, raw: Vec<Rational>) -> Self {
        let coeffs = reduce(prime, level, raw);
        Self::canonical(prime, level, coeffs)
    }

    pub fn from_rational(prime: u64, q: Rational) -> Self {
        CyclotomicScalar {
            prime,
            level: 0,
            coeffs: vec![q],
        }
    }

    pub fn from_integer(prime: u64, n: i64) -> Self {
        Self::from_rational(prime, Rational::from_integer(n.into()))
    }

    pub fn zero(prime: u64) -> Self {
        Self::from_rational(prime, Rational::zero())
    }

    pub fn one(prime: u64) -> Self {
        Self::from_rational(prime, Rational::one())
    }

    /// `ζ_{p^level}^k`.
    pub fn root_of_unity(prime: u64, level: u32, k: u64) -> Self {
        Self::from_powers(prime, level, [(k, Rational::one())])
    }

    /// The quadratic Gauss sum `Σ_{y mod p} ζ_p^{y²}`.
    pub fn gauss_sum(prime: u64) -> Self {
        Self::from_powers(
            prime,
            1,
            (0..prime).map(|y| ((y * y) % prime, Rational::one())),
        )
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Power-basis coefficients at the current level.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.level == 0 && self.coeffs[0].is_one()
    }

    /// The rational value, when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rational> {
        (self.level == 0).then(|| &self.coeffs[0])
    }

    pub(crate) fn check_prime(&self, other: &Self) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime, other.prime));
        }
        Ok(())
    }

    /// Coefficients of `ζ_{p^level}^k`, `k < p^level`, for `level ≥ self.level`.
    fn raw_at(&self, level: u32) -> Vec<Rational> {
        let n = root_order(self.prime, level);
        let stride = root_order(self.prime, level - self.level.min(level));
        let mut raw = vec![Rational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[k * stride] = c.clone();
            }
        }
        raw
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        if self.level == other.level {
            let coeffs = self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect();
            return Ok(Self::canonical(self.prime, self.level, coeffs));
        }
        let level = self.level.max(other.level);
        let (hi, lo) = if self.level == level {
            (self, other)
        } else {
            (other, self)
        };
        let stride = root_order(self.prime, level - lo.level);
        let mut coeffs = hi.coeffs.clone();
        // lifted basis elements of the lower level stay inside the power basis
        for (k, c) in lo.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs[k * stride] += c;
            }
        }
        Ok(Self::canonical(self.prime, level, coeffs))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        if let Some(q) = self.as_rational() {
            return Ok(other.scale(q));
        }
        if let Some(q) = other.as_rational() {
            return Ok(self.scale(q));
        }
        let level = self.level.max(other.level);
        let n = root_order(self.prime, level);
        let sa = root_order(self.prime, level - self.level);
        let sb = root_order(self.prime, level - other.level);
        let mut raw = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                raw[(i * sa + j * sb) % n] += a * b;
            }
        }
        Ok(Self::from_raw(self.prime, level, raw))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero(self.prime);
        }
        CyclotomicScalar {
            prime: self.prime,
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Multiplication by `ζ_{p^level}^k` without a full product.
    pub fn mul_root_of_unity(&self, k: u64, level: u32) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let top = self.level.max(level);
        let n = root_order(self.prime, top);
        let shift = (k as usize % root_order(self.prime, level)) * root_order(self.prime, top - level);
        let stride = root_order(self.prime, top - self.level);
        let mut raw = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[(i * stride + shift) % n] = c.clone();
            }
        }
        Self::from_raw(self.prime, top, raw)
    }

    /// Complex conjugate: `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        if self.level == 0 {
            return self.clone();
        }
        let n = root_order(self.prime, self.level);
        let mut raw = vec![Rational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[(n - k) % n] = c.clone();
            }
        }
        Self::from_raw(self.prime, self.level, raw)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(self.prime, q.recip()));
        }
        // u·a + v·Φ = 1 in Q[x]
        let modulus = cyclotomic_poly(self.prime, self.level);
        let a = qpoly::trim(self.coeffs.clone());
        let u = qpoly::inverse_mod(&a, &modulus).ok_or(Error::DivisionByZero)?;
        let mut raw = vec![Rational::zero(); root_order(self.prime, self.level)];
        for (k, c) in u.into_iter().enumerate() {
            raw[k] = c;
        }
        Ok(Self::from_raw(self.prime, self.level, raw))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.prime);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Image under the embedding `ζ_{p^r} ↦ exp(2πi/p^r)`.
    pub fn to_complex(&self) -> Complex64 {
        let n = root_order(self.prime, self.level) as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / n;
                Complex64::from_polar(1.0, theta) * c.to_f64().unwrap_or(f64::NAN)
            })
            .sum()
    }

    /// Non-zero `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    /// Terms re-expressed at a (not smaller) level.
    pub fn terms_at_level(&self, level: u32) -> Vec<(usize, Rational)> {
        assert!(level >= self.level);
        self.raw_at(level)
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }
}

/// `Φ_{p^r}(x) = Σ_{i<p} x^{i p^{r-1}}`.
fn cyclotomic_poly(p: u64, level: u32) -> Vec<Rational> {
    let block = root_order(p, level - 1);
    let mut phi = vec![Rational::zero(); block * (p as usize - 1) + 1];
    for i in 0..p as usize {
        phi[i * block] = Rational::one();
    }
    phi
}

mod qpoly {
    use num_traits::{One, Zero};

    use super::Rational;

    pub fn trim(mut a: Vec<Rational>) -> Vec<Rational> {
        while a.last().is_some_and(Zero::is_zero) {
            a.pop();
        }
        a
    }

    fn sub_scaled_shift(a: &mut Vec<Rational>, b: &[Rational], c: &Rational, shift: usize) {
        if a.len() < b.len() + shift {
            a.resize(b.len() + shift, Rational::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            if !bi.is_zero() {
                a[i + shift] -= bi * c;
            }
        }
    }

    fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(out)
    }

    fn divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let mut r = trim(a.to_vec());
        let lead_inv = b.last().unwrap().recip();
        let db = b.len() - 1;
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let mut q = vec![Rational::zero(); r.len() - db];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let c = r.last().unwrap() * &lead_inv;
            sub_scaled_shift(&mut r, b, &c, shift);
            q[shift] = c;
            r.pop();
            r = trim(r);
        }
        (trim(q), r)
    }

    fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut out = a.to_vec();
        sub_scaled_shift(&mut out, b, &Rational::one(), 0);
        trim(out)
    }

    /// `u` with `u·a ≡ 1 (mod m)`, if `a` is invertible.
    pub fn inverse_mod(a: &[Rational], m: &[Rational]) -> Option<Vec<Rational>> {
        let (mut r0, mut r1) = (m.to_vec(), divrem(a, m).1);
        let (mut s0, mut s1): (Vec<Rational>, Vec<Rational>) = (Vec::new(), vec![Rational::one()]);
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1);
            let s = sub(&s0, &mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if r0.len() != 1 {
            return None;
        }
        let c = r0[0].recip();
        Some(s0.into_iter().map(|x| x * &c).collect())
    }
}

impl Add for &CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn add(self, rhs: &CyclotomicScalar) -> CyclotomicScalar {
        self.checked_add(rhs).expect("prime mismatch")
    }
}

impl Add for CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn add(self, rhs: CyclotomicScalar) -> CyclotomicScalar {
        &self + &rhs
    }
}

impl Sub for &CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn sub(self, rhs: &CyclotomicScalar) -> CyclotomicScalar {
        self + &(-rhs)
    }
}

impl Sub for CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn sub(self, rhs: CyclotomicScalar) -> CyclotomicScalar {
        &self - &rhs
    }
}

impl Mul for &CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn mul(self, rhs: &CyclotomicScalar) -> CyclotomicScalar {
        self.checked_mul(rhs).expect("prime mismatch")
    }
}

impl Mul for CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn mul(self, rhs: CyclotomicScalar) -> CyclotomicScalar {
        &self * &rhs
    }
}

impl Neg for &CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn neg(self) -> CyclotomicScalar {
        CyclotomicScalar {
            prime: self.prime,
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CyclotomicScalar {
    type Output = CyclotomicScalar;
    fn neg(self) -> CyclotomicScalar {
        -&self
    }
}

impl fmt::Debug for CyclotomicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CyclotomicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .terms()
            .map(|(k, c)| match k {
                0 => display_rational(c),
                _ => format!(
                    "{}*z{}^{}",
                    display_rational(c),
                    root_order(self.prime, self.level),
                    k
                ),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}
