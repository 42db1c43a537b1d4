use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::ext::ExtScalar;
use super::rational::Rational;
use crate::error::{Error, Result};

type Poly = Vec<ExtScalar>;

fn trim(mut a: Poly) -> Poly {
    while a.last().is_some_and(ExtScalar::is_zero) {
        a.pop();
    }
    a
}

fn low_zeros(a: &[ExtScalar]) -> usize {
    a.iter().take_while(|c| c.is_zero()).count()
}

fn shifted(a: &[ExtScalar], k: usize, p: u64) -> Poly {
    let mut out = vec![ExtScalar::zero(p); k];
    out.extend_from_slice(a);
    out
}

fn poly_add(a: &[ExtScalar], b: &[ExtScalar]) -> Poly {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, c) in out.iter_mut().zip(short) {
        *o = &*o + c;
    }
    trim(out)
}

fn poly_mul(a: &[ExtScalar], b: &[ExtScalar], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ExtScalar::zero(p); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    trim(out)
}

fn poly_scale(a: &[ExtScalar], c: &ExtScalar) -> Poly {
    trim(a.iter().map(|x| x * c).collect())
}

/// Quotient and remainder; `b` must be nonzero and trimmed.
fn poly_divrem(a: &[ExtScalar], b: &[ExtScalar], p: u64) -> (Poly, Poly) {
    let mut rem = a.to_vec();
    if rem.len() < b.len() {
        return (Vec::new(), trim(rem));
    }
    let lead_inv = b.last().unwrap().inverse().expect("trimmed divisor");
    let mut quot = vec![ExtScalar::zero(p); rem.len() - b.len() + 1];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + b.len() - 1] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            rem[k + j] = &rem[k + j] - &(&c * y);
        }
        quot[k] = c;
    }
    rem.truncate(b.len() - 1);
    (trim(quot), trim(rem))
}

fn poly_gcd(a: &[ExtScalar], b: &[ExtScalar], p: u64) -> Poly {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    while !y.is_empty() {
        let (_, r) = poly_divrem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn poly_eval(a: &[ExtScalar], t: &ExtScalar, p: u64) -> ExtScalar {
    a.iter()
        .rev()
        .fold(ExtScalar::zero(p), |acc, c| &(&acc * t) + c)
}

fn poly_eval_complex(a: &[ExtScalar], z: Complex64) -> Complex64 {
    a.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_complex())
}

/// Quotient `t^shift · num(t) / den(t)` of polynomials in `t = p^(-s)`.
///
/// Canonical form: `num` and `den` coprime, `num(0) ≠ 0`, `den(0) = 1`;
/// zero is `num = []`, `den = [1]`, `shift = 0`.
#[derive(Clone)]
pub struct RationalFunctionT {
    prime: u64,
    shift: i64,
    num: Poly,
    den: Poly,
}

impl RationalFunctionT {
    fn build(prime: u64, shift: i64, num: Poly, den: Poly) -> Result<Self> {
        let mut num = trim(num);
        let mut den = trim(den);
        if den.is_empty() {
            return Err(Error::DivisionByZero);
        }
        if num.is_empty() {
            return Ok(Self::zero(prime));
        }
        let (kn, kd) = (low_zeros(&num), low_zeros(&den));
        num.drain(..kn);
        den.drain(..kd);
        let shift = shift + kn as i64 - kd as i64;
        if num.len() > 1 && den.len() > 1 {
            let g = poly_gcd(&num, &den, prime);
            if g.len() > 1 {
                num = poly_divrem(&num, &g, prime).0;
                den = poly_divrem(&den, &g, prime).0;
            }
        }
        Ok(Self::normalized(prime, shift, num, den))
    }

    /// `num`, `den` already coprime with nonzero constant terms.
    fn normalized(prime: u64, shift: i64, num: Poly, den: Poly) -> Self {
        let c = den[0].inverse().expect("nonzero constant term");
        if c.is_one() {
            return RationalFunctionT { prime, shift, num, den };
        }
        RationalFunctionT {
            prime,
            shift,
            num: poly_scale(&num, &c),
            den: poly_scale(&den, &c),
        }
    }

    pub fn zero(prime: u64) -> Self {
        RationalFunctionT {
            prime,
            shift: 0,
            num: Vec::new(),
            den: vec![ExtScalar::one(prime)],
        }
    }

    pub fn one(prime: u64) -> Self {
        Self::constant(ExtScalar::one(prime))
    }

    pub fn constant(c: ExtScalar) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_rational(prime: u64, q: Rational) -> Self {
        Self::constant(ExtScalar::from_rational(prime, q))
    }

    /// `c·t^k`.
    pub fn monomial(c: ExtScalar, k: i64) -> Self {
        let p = c.prime();
        if c.is_zero() {
            return Self::zero(p);
        }
        RationalFunctionT {
            prime: p,
            shift: k,
            num: vec![c],
            den: vec![ExtScalar::one(p)],
        }
    }

    /// The variable `t`.
    pub fn t(prime: u64) -> Self {
        Self::monomial(ExtScalar::one(prime), 1)
    }

    /// Laurent polynomial `Σ c·t^k`.
    pub fn from_laurent(prime: u64, terms: &[(i64, ExtScalar)]) -> Self {
        Self::from_parts(prime, terms, &[(0, ExtScalar::one(prime))]).expect("nonzero denominator")
    }

    /// Quotient of two Laurent polynomials given as `(power, coeff)` lists.
    pub fn from_parts(
        prime: u64,
        num: &[(i64, ExtScalar)],
        den: &[(i64, ExtScalar)],
    ) -> Result<Self> {
        let to_poly = |terms: &[(i64, ExtScalar)]| -> Result<(i64, Poly)> {
            let low = terms.iter().map(|(k, _)| *k).min().unwrap_or(0);
            let mut poly = Vec::new();
            for (k, c) in terms {
                if c.prime() != prime {
                    return Err(Error::PrimeMismatch(prime, c.prime()));
                }
                let i = (k - low) as usize;
                if poly.len() <= i {
                    poly.resize(i + 1, ExtScalar::zero(prime));
                }
                poly[i] = &poly[i] + c;
            }
            Ok((low, poly))
        };
        let (ln, n) = to_poly(num)?;
        let (ld, d) = to_poly(den)?;
        Self::build(prime, ln - ld, n, d)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_polynomial_in_t(&self) -> bool {
        self.den.len() == 1 && self.shift >= 0
    }

    pub fn as_constant(&self) -> Option<ExtScalar> {
        if self.is_zero() {
            return Some(ExtScalar::zero(self.prime));
        }
        (self.shift == 0 && self.num.len() == 1 && self.den.len() == 1).then(|| self.num[0].clone())
    }

    /// `(c, k)` when the value is `c·t^k`.
    pub fn as_monomial(&self) -> Option<(ExtScalar, i64)> {
        (self.num.len() == 1 && self.den.len() == 1).then(|| (self.num[0].clone(), self.shift))
    }

    /// Numerator as `(power, coeff)` with the `t`-shift folded in.
    pub fn numerator_terms(&self) -> Vec<(i64, ExtScalar)> {
        let off = self.shift.max(0);
        Self::terms(&self.num, off)
    }

    /// Denominator as `(power, coeff)` with the `t`-shift folded in.
    pub fn denominator_terms(&self) -> Vec<(i64, ExtScalar)> {
        let off = (-self.shift).max(0);
        Self::terms(&self.den, off)
    }

    fn terms(poly: &[ExtScalar], off: i64) -> Vec<(i64, ExtScalar)> {
        poly.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as i64 + off, c.clone()))
            .collect()
    }

    /// Width of the range of `t`-powers occurring in numerator and denominator.
    pub fn degree_span(&self) -> usize {
        if self.is_zero() {
            return 0;
        }
        (self.num.len() - 1).max(self.den.len() - 1) + self.shift.unsigned_abs() as usize
    }

    pub(crate) fn check_prime(&self, other: &Self) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime, other.prime));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let p = self.prime;
        let m = self.shift.min(other.shift);
        let a = shifted(&self.num, (self.shift - m) as usize, p);
        let b = shifted(&other.num, (other.shift - m) as usize, p);
        if self.den == other.den {
            return Self::build(p, m, poly_add(&a, &b), self.den.clone());
        }
        let num = poly_add(&poly_mul(&a, &other.den, p), &poly_mul(&b, &self.den, p));
        Self::build(p, m, num, poly_mul(&self.den, &other.den, p))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.prime));
        }
        let p = self.prime;
        let shift = self.shift + other.shift;
        // cross-cancel first so the products stay small
        let (n1, d2) = Self::cancel(&self.num, &other.den, p);
        let (n2, d1) = Self::cancel(&other.num, &self.den, p);
        Ok(Self::normalized(
            p,
            shift,
            poly_mul(&n1, &n2, p),
            poly_mul(&d1, &d2, p),
        ))
    }

    fn cancel(a: &[ExtScalar], b: &[ExtScalar], p: u64) -> (Poly, Poly) {
        if a.len() > 1 && b.len() > 1 {
            let g = poly_gcd(a, b, p);
            if g.len() > 1 {
                return (poly_divrem(a, &g, p).0, poly_divrem(b, &g, p).0);
            }
        }
        (a.to_vec(), b.to_vec())
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(
            self.prime,
            -self.shift,
            self.den.clone(),
            self.num.clone(),
        ))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.inverse()?)
    }

    /// Equality by cross-multiplication.
    pub fn checked_eq(&self, other: &Self) -> Result<bool> {
        self.check_prime(other)?;
        let p = self.prime;
        let m = self.shift.min(other.shift);
        let a = shifted(&self.num, (self.shift - m) as usize, p);
        let b = shifted(&other.num, (other.shift - m) as usize, p);
        Ok(poly_mul(&a, &other.den, p) == poly_mul(&b, &self.den, p))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.prime);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    pub fn scale_by(&self, c: &ExtScalar) -> Self {
        if c.is_zero() || self.is_zero() {
            return Self::zero(self.prime);
        }
        RationalFunctionT {
            prime: self.prime,
            shift: self.shift,
            num: poly_scale(&self.num, c),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        self.scale_by(&ExtScalar::from_rational(self.prime, q.clone()))
    }

    /// Complex conjugate of every coefficient.
    pub fn conj_coefficients(&self) -> Self {
        RationalFunctionT {
            prime: self.prime,
            shift: self.shift,
            num: self.num.iter().map(ExtScalar::conj).collect(),
            den: self.den.iter().map(ExtScalar::conj).collect(),
        }
    }

    /// Substitution `t ↦ c·t`.
    pub fn scale_var(&self, c: &ExtScalar) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::ZeroArgument("scale_var"));
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let powers = |poly: &Poly| -> Poly {
            let mut acc = ExtScalar::one(self.prime);
            poly.iter()
                .map(|x| {
                    let v = x * &acc;
                    acc = &acc * c;
                    v
                })
                .collect()
        };
        let num = poly_scale(&powers(&self.num), &c.pow(self.shift)?);
        Ok(RationalFunctionT {
            prime: self.prime,
            shift: self.shift,
            num,
            den: powers(&self.den),
        })
    }

    /// Substitution `t ↦ 1/t`.
    pub fn invert_var(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let dn = self.num.len() as i64 - 1;
        let dd = self.den.len() as i64 - 1;
        let num: Poly = self.num.iter().rev().cloned().collect();
        let den: Poly = self.den.iter().rev().cloned().collect();
        Self::normalized(self.prime, -self.shift - dn + dd, num, den)
    }

    pub fn eval(&self, t0: &ExtScalar) -> Result<ExtScalar> {
        let p = self.prime;
        if t0.prime() != p {
            return Err(Error::PrimeMismatch(p, t0.prime()));
        }
        if self.is_zero() {
            return Ok(ExtScalar::zero(p));
        }
        if t0.is_zero() {
            return match self.shift {
                s if s < 0 => Err(Error::Pole),
                0 => Ok(self.num[0].clone()),
                _ => Ok(ExtScalar::zero(p)),
            };
        }
        let d = poly_eval(&self.den, t0, p);
        if d.is_zero() {
            return Err(Error::Pole);
        }
        let n = poly_eval(&self.num, t0, p);
        Ok(&(&n * &d.inverse()?) * &t0.pow(self.shift)?)
    }

    pub fn eval_rational(&self, t0: &Rational) -> Result<ExtScalar> {
        self.eval(&ExtScalar::from_rational(self.prime, t0.clone()))
    }

    /// Float evaluation at a complex point.
    pub fn eval_complex(&self, z: Complex64) -> Result<Complex64> {
        if self.is_zero() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let d = poly_eval_complex(&self.den, z);
        if d.norm() == 0.0 || (z.norm() == 0.0 && self.shift < 0) {
            return Err(Error::Pole);
        }
        Ok(poly_eval_complex(&self.num, z) / d * z.powi(self.shift as i32))
    }

    /// Multiplicity of `t0` as a pole (0 if regular there).
    pub fn pole_order(&self, t0: &ExtScalar) -> usize {
        if self.is_zero() {
            return 0;
        }
        if t0.is_zero() {
            return (-self.shift).max(0) as usize;
        }
        let p = self.prime;
        let root = vec![-t0, ExtScalar::one(p)];
        let mut den = self.den.clone();
        let mut k = 0;
        loop {
            let (q, r) = poly_divrem(&den, &root, p);
            if !r.is_empty() {
                return k;
            }
            den = q;
            k += 1;
        }
    }

    /// Same as [`RationalFunctionT::eval`]: the stored form is already reduced.
    pub fn value_after_cancellation(&self, t0: &ExtScalar) -> Result<ExtScalar> {
        self.eval(t0)
    }
}

/// Evaluates `num/den` at `t0` after cancelling common factors.
pub fn value_after_cancellation(
    num: &RationalFunctionT,
    den: &RationalFunctionT,
    t0: &ExtScalar,
) -> Result<ExtScalar> {
    num.checked_div(den)?.eval(t0)
}

impl PartialEq for RationalFunctionT {
    fn eq(&self, other: &Self) -> bool {
        self.checked_eq(other).unwrap_or(false)
    }
}

impl Add for &RationalFunctionT {
    type Output = RationalFunctionT;
    fn add(self, rhs: &RationalFunctionT) -> RationalFunctionT {
        self.checked_add(rhs).expect("prime mismatch")
    }
}

impl Add for RationalFunctionT {
    type Output = RationalFunctionT;
    fn add(self, rhs: RationalFunctionT) -> RationalFunctionT {
        &self + &rhs
    }
}

impl Sub for &RationalFunctionT {
    type Output = RationalFunctionT;
    fn sub(self, rhs: &RationalFunctionT) -> RationalFunctionT {
        self + &(-rhs)
    }
}

impl Sub for RationalFunctionT {
    type Output = RationalFunctionT;
    fn sub(self, rhs: RationalFunctionT) -> RationalFunctionT {
        &self - &rhs
    }
}

impl Mul for &RationalFunctionT {
    type Output = RationalFunctionT;
    fn mul(self, rhs: &RationalFunctionT) -> RationalFunctionT {
        self.checked_mul(rhs).expect("prime mismatch")
    }
}

impl Mul for RationalFunctionT {
    type Output = RationalFunctionT;
    fn mul(self, rhs: RationalFunctionT) -> RationalFunctionT {
        &self * &rhs
    }
}

impl Neg for &RationalFunctionT {
    type Output = RationalFunctionT;
    fn neg(self) -> RationalFunctionT {
        RationalFunctionT {
            prime: self.prime,
            shift: self.shift,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalFunctionT {
    type Output = RationalFunctionT;
    fn neg(self) -> RationalFunctionT {
        -&self
    }
}

fn fmt_terms(f: &mut fmt::Formatter<'_>, terms: &[(i64, ExtScalar)]) -> fmt::Result {
    write!(f, "(")?;
    for (i, (k, c)) in terms.iter().enumerate() {
        if i > 0 {
            write!(f, " + ")?;
        }
        match *k {
            0 => write!(f, "{c}")?,
            1 => write!(f, "({c})*t")?,
            _ => write!(f, "({c})*t^{k}")?,
        }
    }
    write!(f, ")")
}

impl fmt::Display for RationalFunctionT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        fmt_terms(f, &self.numerator_terms())?;
        let den = self.denominator_terms();
        if den.len() == 1 && den[0].0 == 0 {
            return Ok(());
        }
        write!(f, "/")?;
        fmt_terms(f, &den)
    }
}

impl fmt::Debug for RationalFunctionT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{p_power, rat};

    fn q(p: u64, n: i64, d: i64) -> ExtScalar {
        ExtScalar::from_rational(p, rat(n, d))
    }

    fn lin(p: u64, terms: &[(i64, i64)]) -> RationalFunctionT {
        let t: Vec<_> = terms.iter().map(|&(k, c)| (k, q(p, c, 1))).collect();
        RationalFunctionT::from_laurent(p, &t)
    }

    #[test]
    fn cancellation_before_eval() {
        let p = 3;
        let num = lin(p, &[(0, 1), (2, -1)]);
        let den = lin(p, &[(0, 1), (1, -1)]);
        assert_eq!(den.inverse().unwrap().eval(&q(p, 1, 1)), Err(Error::Pole));
        assert_eq!(value_after_cancellation(&num, &den, &q(p, 1, 1)).unwrap(), q(p, 2, 1));
        let f = num.checked_div(&den).unwrap();
        assert_eq!(f, lin(p, &[(0, 1), (1, 1)]));
    }

    #[test]
    fn delta_limit_sample() {
        // (1 - p^-2)/(1 - p^-2 t^-1) at t = 1
        let p = 5;
        let c = ExtScalar::from_rational(p, p_power(p, -2));
        let num = RationalFunctionT::constant(&ExtScalar::one(p) - &c);
        let den = RationalFunctionT::from_laurent(p, &[(0, ExtScalar::one(p)), (-1, -&c)]);
        assert!(value_after_cancellation(&num, &den, &ExtScalar::one(p)).unwrap().is_one());
    }

    #[test]
    fn ring_identity() {
        let p = 7;
        let a = lin(p, &[(0, 1), (1, -1)]);
        let b = lin(p, &[(0, 1), (1, 1)]);
        assert_eq!(&a * &b, lin(p, &[(0, 1), (2, -1)]));
        assert_eq!((&a * &b).checked_eq(&lin(p, &[(0, 1), (2, -1)])), Ok(true));
    }

    #[test]
    fn canonical_denominator() {
        let p = 3;
        let f = RationalFunctionT::from_parts(
            p,
            &[(-1, q(p, 2, 1))],
            &[(1, q(p, 4, 1)), (3, q(p, 6, 1))],
        )
        .unwrap();
        let den = f.denominator_terms();
        assert!(den[0].1.is_one());
        assert_eq!(den[0].0, 2);
        assert_eq!(f.numerator_terms(), vec![(0, q(p, 1, 2))]);
    }

    #[test]
    fn substitutions() {
        let p = 5;
        let f = RationalFunctionT::from_parts(
            p,
            &[(0, q(p, 1, 1)), (-1, q(p, -1, 25))],
            &[(0, q(p, 1, 1)), (1, q(p, -1, 1))],
        )
        .unwrap();
        let g = f.invert_var();
        let x = q(p, 3, 7);
        assert_eq!(g.eval(&x).unwrap(), f.eval(&x.inverse().unwrap()).unwrap());
        let h = f.scale_var(&q(p, 1, 5)).unwrap();
        assert_eq!(h.eval(&x).unwrap(), f.eval(&(&x * &q(p, 1, 5))).unwrap());
        assert_eq!(g.invert_var(), f);
    }

    #[test]
    fn pole_orders() {
        let p = 3;
        let d = lin(p, &[(0, 1), (1, -2), (2, 1)]);
        let f = RationalFunctionT::one(p).checked_div(&d).unwrap();
        assert_eq!(f.pole_order(&q(p, 1, 1)), 2);
        assert_eq!(f.pole_order(&q(p, 2, 1)), 0);
    }

    #[test]
    fn division_by_zero() {
        let p = 3;
        assert_eq!(
            RationalFunctionT::one(p).checked_div(&RationalFunctionT::zero(p)),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn complex_eval_matches_exact() {
        let p = 7;
        let f = RationalFunctionT::from_parts(
            p,
            &[(0, ExtScalar::sigma(p)), (2, q(p, 1, 3))],
            &[(0, q(p, 1, 1)), (1, q(p, -1, 49))],
        )
        .unwrap();
        let x = q(p, 2, 5);
        let exact = f.eval(&x).unwrap().to_complex();
        let float = f.eval_complex(Complex64::new(0.4, 0.0)).unwrap();
        assert!((exact - float).norm() < 1e-12);
    }
}
