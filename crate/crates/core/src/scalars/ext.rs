use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::One;

use super::cyclotomic::CyclotomicScalar;
use super::rational::{p_power, Rational};
use crate::error::{Error, Result};

/// Element of `Q(ζ_{p^r})[σ_p, √p]`, written `a00 + a10·σ_p + a01·√p + a11·σ_p·√p`.
///
/// `σ_p = 1` for `p ≡ 1 (mod 4)` and `σ_p = i` for `p ≡ 3 (mod 4)`, and the
/// quadratic Gauss sum `g = Σ ζ_p^{y²}` equals `σ_p·√p`. Values are stored
/// reduced by these relations, i.e. in the field `Q(ζ_{p^r}, σ_p)` with basis
/// `{1, σ_p}` over `Q(ζ_{p^r})`; the `√p` components are always folded in.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtScalar {
    one: CyclotomicScalar,
    sigma: CyclotomicScalar,
}

fn sigma_is_one(p: u64) -> bool {
    p % 4 == 1
}

impl ExtScalar {
    fn canonical(one: CyclotomicScalar, sigma: CyclotomicScalar) -> Self {
        let p = one.prime();
        if sigma_is_one(p) {
            ExtScalar {
                one: &one + &sigma,
                sigma: CyclotomicScalar::zero(p),
            }
        } else {
            ExtScalar { one, sigma }
        }
    }

    /// `a00 + a10·σ_p + a01·√p + a11·σ_p·√p`, reduced.
    pub fn from_components(
        a00: CyclotomicScalar,
        a10: CyclotomicScalar,
        a01: CyclotomicScalar,
        a11: CyclotomicScalar,
    ) -> Result<Self> {
        let p = a00.prime();
        for c in [&a10, &a01, &a11] {
            a00.check_prime(c)?;
        }
        let g = CyclotomicScalar::gauss_sum(p);
        // σ√p = g; √p = g·σ^{-1} = g·σ·σ_p^{-2}
        let one = &a00 + &(&a11 * &g);
        let sigma_inv_sq = if sigma_is_one(p) { 1 } else { -1 };
        let sigma = &a10 + &(&a01 * &g).scale(&Rational::from_integer(sigma_inv_sq.into()));
        Ok(Self::canonical(one, sigma))
    }

    pub fn zero(prime: u64) -> Self {
        CyclotomicScalar::zero(prime).into()
    }

    pub fn one(prime: u64) -> Self {
        CyclotomicScalar::one(prime).into()
    }

    pub fn from_rational(prime: u64, q: Rational) -> Self {
        CyclotomicScalar::from_rational(prime, q).into()
    }

    pub fn from_integer(prime: u64, n: i64) -> Self {
        CyclotomicScalar::from_integer(prime, n).into()
    }

    /// `σ_p`.
    pub fn sigma(prime: u64) -> Self {
        Self::canonical(CyclotomicScalar::zero(prime), CyclotomicScalar::one(prime))
    }

    /// The positive square root `√p`.
    pub fn sqrt_p(prime: u64) -> Self {
        let z = CyclotomicScalar::zero(prime);
        Self::from_components(z.clone(), z.clone(), CyclotomicScalar::one(prime), z)
            .expect("same prime")
    }

    /// `p^{k/2}` for any integer `k`.
    pub fn p_half_power(prime: u64, k: i64) -> Self {
        let whole = Self::from_rational(prime, p_power(prime, k.div_euclid(2)));
        if k.rem_euclid(2) == 0 {
            whole
        } else {
            &whole * &Self::sqrt_p(prime)
        }
    }

    pub fn prime(&self) -> u64 {
        self.one.prime()
    }

    /// `(a00, a10, a01, a11)` of the reduced form; `a01 = a11 = 0`.
    pub fn components(&self) -> [CyclotomicScalar; 4] {
        let z = CyclotomicScalar::zero(self.prime());
        [self.one.clone(), self.sigma.clone(), z.clone(), z]
    }

    pub fn level(&self) -> u32 {
        self.one.level().max(self.sigma.level())
    }

    pub fn is_zero(&self) -> bool {
        self.one.is_zero() && self.sigma.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.one.is_one() && self.sigma.is_zero()
    }

    pub fn as_cyclotomic(&self) -> Option<&CyclotomicScalar> {
        self.sigma.is_zero().then_some(&self.one)
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.as_cyclotomic().and_then(CyclotomicScalar::as_rational)
    }

    pub(crate) fn check_prime(&self, other: &Self) -> Result<()> {
        self.one.check_prime(&other.one)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        Ok(ExtScalar {
            one: self.one.checked_add(&other.one)?,
            sigma: self.sigma.checked_add(&other.sigma)?,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        if other.sigma.is_zero() {
            return Ok(self.scale_cyclotomic(&other.one));
        }
        if self.sigma.is_zero() {
            return Ok(other.scale_cyclotomic(&self.one));
        }
        // σ² = -1 here (σ = 1 never carries a σ component)
        let one = &(&self.one * &other.one) - &(&self.sigma * &other.sigma);
        let sigma = &(&self.one * &other.sigma) + &(&self.sigma * &other.one);
        Ok(ExtScalar { one, sigma })
    }

    pub fn scale_cyclotomic(&self, c: &CyclotomicScalar) -> Self {
        ExtScalar {
            one: &self.one * c,
            sigma: &self.sigma * c,
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        ExtScalar {
            one: self.one.scale(q),
            sigma: self.sigma.scale(q),
        }
    }

    pub fn mul_root_of_unity(&self, k: u64, level: u32) -> Self {
        ExtScalar {
            one: self.one.mul_root_of_unity(k, level),
            sigma: self.sigma.mul_root_of_unity(k, level),
        }
    }

    pub fn conj(&self) -> Self {
        // conj(i) = -i
        ExtScalar {
            one: self.one.conj(),
            sigma: -self.sigma.conj(),
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.sigma.is_zero() {
            return Ok(self.one.inverse()?.into());
        }
        // (a + bi)^{-1} = (a - bi)/(a² + b²); i ∉ Q(ζ_{p^r}) keeps a² + b² ≠ 0
        let norm = &(&self.one * &self.one) + &(&self.sigma * &self.sigma);
        let inv = norm.inverse()?;
        Ok(ExtScalar {
            one: &self.one * &inv,
            sigma: -(&self.sigma * &inv),
        })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.prime());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn to_complex(&self) -> Complex64 {
        let s = if sigma_is_one(self.prime()) {
            Complex64::one()
        } else {
            Complex64::i()
        };
        self.one.to_complex() + s * self.sigma.to_complex()
    }

    /// Reduced components as `(tag, value)` with tags `"1"`, `"s"`.
    pub fn tagged_components(&self) -> Vec<(&'static str, &CyclotomicScalar)> {
        let mut out = vec![("1", &self.one)];
        if !self.sigma.is_zero() {
            out.push(("s", &self.sigma));
        }
        out
    }
}

impl From<CyclotomicScalar> for ExtScalar {
    fn from(c: CyclotomicScalar) -> Self {
        let p = c.prime();
        ExtScalar {
            one: c,
            sigma: CyclotomicScalar::zero(p),
        }
    }
}

impl Add for &ExtScalar {
    type Output = ExtScalar;
    fn add(self, rhs: &ExtScalar) -> ExtScalar {
        self.checked_add(rhs).expect("prime mismatch")
    }
}

impl Add for ExtScalar {
    type Output = ExtScalar;
    fn add(self, rhs: ExtScalar) -> ExtScalar {
        &self + &rhs
    }
}

impl Sub for &ExtScalar {
    type Output = ExtScalar;
    fn sub(self, rhs: &ExtScalar) -> ExtScalar {
        self + &(-rhs)
    }
}

impl Sub for ExtScalar {
    type Output = ExtScalar;
    fn sub(self, rhs: ExtScalar) -> ExtScalar {
        &self - &rhs
    }
}

impl Mul for &ExtScalar {
    type Output = ExtScalar;
    fn mul(self, rhs: &ExtScalar) -> ExtScalar {
        self.checked_mul(rhs).expect("prime mismatch")
    }
}

impl Mul for ExtScalar {
    type Output = ExtScalar;
    fn mul(self, rhs: ExtScalar) -> ExtScalar {
        &self * &rhs
    }
}

impl Neg for &ExtScalar {
    type Output = ExtScalar;
    fn neg(self) -> ExtScalar {
        ExtScalar {
            one: -&self.one,
            sigma: -&self.sigma,
        }
    }
}

impl Neg for ExtScalar {
    type Output = ExtScalar;
    fn neg(self) -> ExtScalar {
        -&self
    }
}

impl fmt::Debug for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sigma.is_zero() {
            write!(f, "{}", self.one)
        } else if self.one.is_zero() {
            write!(f, "({})*s", self.sigma)
        } else {
            write!(f, "{} + ({})*s", self.one, self.sigma)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    #[test]
    fn sigma_squared() {
        assert_eq!(&ExtScalar::sigma(3) * &ExtScalar::sigma(3), ExtScalar::from_integer(3, -1));
        assert_eq!(&ExtScalar::sigma(5) * &ExtScalar::sigma(5), ExtScalar::one(5));
        for p in [3u64, 5, 7, 11, 13] {
            let r = ExtScalar::sqrt_p(p);
            assert_eq!(&r * &r, ExtScalar::from_integer(p, p as i64));
        }
    }

    #[test]
    fn gauss_sum_is_sigma_sqrt_p() {
        for p in [3u64, 5, 7, 11, 13] {
            let g: ExtScalar = CyclotomicScalar::gauss_sum(p).into();
            assert_eq!(g, &ExtScalar::sigma(p) * &ExtScalar::sqrt_p(p));
            let sign = if p % 4 == 1 { 1 } else { -1 };
            assert_eq!(&g * &g, ExtScalar::from_integer(p, sign * p as i64));
        }
    }

    #[test]
    fn gauss_sum_p5_matches_float() {
        // 1 + 2ζ + 2ζ^4 ≈ √5
        let g: ExtScalar = CyclotomicScalar::gauss_sum(5).into();
        let v = g.to_complex();
        assert!((v.re - 5f64.sqrt()).abs() < 1e-12 && v.im.abs() < 1e-12);
        let r = ExtScalar::sqrt_p(7).to_complex();
        assert!((r.re - 7f64.sqrt()).abs() < 1e-12 && r.im.abs() < 1e-12);
        let s = ExtScalar::sigma(7).to_complex();
        assert!((s - Complex64::i()).norm() < 1e-12);
    }

    #[test]
    fn inverse_with_sigma_part() {
        let p = 7;
        let x = &ExtScalar::sigma(p) + &ExtScalar::from_rational(p, rat(3, 2));
        let y = &x * &ExtScalar::sqrt_p(p);
        assert!((&y * &y.inverse().unwrap()).is_one());
    }

    #[test]
    fn half_powers() {
        let p = 3;
        let a = ExtScalar::p_half_power(p, 3);
        assert_eq!(&a * &a, ExtScalar::from_integer(p, 27));
        let b = ExtScalar::p_half_power(p, -1);
        assert!((&b * &ExtScalar::sqrt_p(p)).is_one());
    }
}
