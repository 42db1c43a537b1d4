//! Diagonal quadratic forms over `Q_p`, square classes, Hilbert symbols,
//! Weil constants and ρ-factors.

mod hilbert_oracle;
mod rho;
mod rho_signs;
mod weil;

pub use hilbert_oracle::hilbert_oracle;
pub use rho::{rho_factor, rho_oracle, rho_sign, rho_sign_oracle};
pub use weil::{weil_gamma, weil_gamma_class, weil_gamma_form, weil_gamma_oracle};

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{ord, unit_residue};
use crate::scalars::{ExtScalar, Rational};

/// Rejects `p = 2` and composite moduli.
pub fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 {
        return Err(Error::Unsupported("p = 2".into()));
    }
    let is_prime = p >= 3 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0);
    if !is_prime {
        return Err(Error::Invalid(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// Euler's criterion: `a^{(p-1)/2} mod p`.
pub fn legendre(a: i64, p: u64) -> Result<i8> {
    legendre_big(&BigInt::from(a), p)
}

pub(crate) fn legendre_big(a: &BigInt, p: u64) -> Result<i8> {
    let pb = BigInt::from(p);
    let r = ((a % &pb) + &pb) % &pb;
    if r.is_zero() {
        return Err(Error::ZeroArgument("legendre symbol of a multiple of p"));
    }
    let e = r.modpow(&BigInt::from((p - 1) / 2), &pb);
    Ok(if e.is_one() { 1 } else { -1 })
}

/// Smallest positive quadratic non-residue mod `p`.
pub fn epsilon(p: u64) -> u64 {
    (2..p)
        .find(|&a| legendre(a as i64, p) == Ok(-1))
        .expect("odd prime has a non-residue")
}

/// Element of `Q_p^×/(Q_p^×)²` with representatives `1, ε, p, εp`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SquareClass {
    One,
    Eps,
    P,
    EpsP,
}

impl SquareClass {
    pub const ALL: [SquareClass; 4] = [Self::One, Self::Eps, Self::P, Self::EpsP];

    fn from_bits(odd_order: bool, nonresidue: bool) -> Self {
        match (odd_order, nonresidue) {
            (false, false) => Self::One,
            (false, true) => Self::Eps,
            (true, false) => Self::P,
            (true, true) => Self::EpsP,
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Self::One => (false, false),
            Self::Eps => (false, true),
            Self::P => (true, false),
            Self::EpsP => (true, true),
        }
    }

    pub fn is_unit(self) -> bool {
        !self.bits().0
    }

    pub fn representative(self, p: u64) -> Rational {
        let e = epsilon(p);
        let r = match self {
            Self::One => 1,
            Self::Eps => e,
            Self::P => p,
            Self::EpsP => e * p,
        };
        Rational::from_integer(r.into())
    }

    /// Product in the group of square classes.
    pub fn mul(self, other: Self) -> Self {
        let (a, b) = self.bits();
        let (c, d) = other.bits();
        Self::from_bits(a ^ c, b ^ d)
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::One => "1",
            Self::Eps => "eps",
            Self::P => "p",
            Self::EpsP => "eps*p",
        }
    }

    pub fn parse(s: &str, p: u64) -> Result<Self> {
        match s.trim() {
            "1" => Ok(Self::One),
            "eps" | "e" => Ok(Self::Eps),
            "p" => Ok(Self::P),
            "eps*p" | "ep" | "epsp" => Ok(Self::EpsP),
            other => square_class(&crate::scalars::parse_rational(other)?, p),
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Square class of `x ≠ 0`.
pub fn square_class(x: &Rational, p: u64) -> Result<SquareClass> {
    if x.is_zero() {
        return Err(Error::ZeroArgument("square class of 0"));
    }
    let odd = ord(x, p).rem_euclid(2) == 1;
    let u = unit_residue(x, p);
    let nonres = legendre(u as i64, p)? == -1;
    Ok(SquareClass::from_bits(odd, nonres))
}

/// Hilbert symbol `(a, b)_p` for odd `p`.
pub fn hilbert(a: &Rational, b: &Rational, p: u64) -> Result<i8> {
    check_odd_prime(p)?;
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument("Hilbert symbol"));
    }
    Ok(hilbert_class(square_class(a, p)?, square_class(b, p)?, p))
}

/// `(a, b)_p` on square classes: `(u, v) = 1`, `(u, p) = (u/p)`, `(p, p) = (-1/p)`.
pub fn hilbert_class(a: SquareClass, b: SquareClass, p: u64) -> i8 {
    let (a_odd, a_eps) = a.bits();
    let (b_odd, b_eps) = b.bits();
    let minus_one = legendre(-1, p).unwrap();
    let mut s = 1;
    if a_odd && b_odd {
        s *= minus_one;
    }
    if a_eps && b_odd {
        s = -s;
    }
    if b_eps && a_odd {
        s = -s;
    }
    s
}

/// `π_β(x) = (β, x)_p`.
pub fn pi_beta(beta: &Rational, x: &Rational, p: u64) -> Result<i8> {
    hilbert(beta, x, p)
}

/// Diagonal form `Σ a_i x_i²` with nonzero rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    prime: u64,
    coeffs: Vec<Rational>,
}

impl QuadraticForm {
    pub fn new(prime: u64, coeffs: Vec<Rational>) -> Result<Self> {
        check_odd_prime(prime)?;
        if coeffs.is_empty() {
            return Err(Error::Invalid("form of dimension 0".into()));
        }
        if coeffs.iter().any(Zero::is_zero) {
            return Err(Error::Invalid("zero coefficient in quadratic form".into()));
        }
        Ok(QuadraticForm { prime, coeffs })
    }

    pub fn from_integers(prime: u64, coeffs: &[i64]) -> Result<Self> {
        Self::new(prime, coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    /// `x₁² − a x₂² − p x₃² + a p x₄²` for a unit non-residue `a`.
    pub fn four_dim(prime: u64, a: i64) -> Result<Self> {
        check_odd_prime(prime)?;
        if legendre(a, prime)? != -1 {
            return Err(Error::Invalid(format!("{a} is a square mod {prime}")));
        }
        let p = prime as i64;
        Self::from_integers(prime, &[1, -a, -p, a * p])
    }

    /// `x₁² − η x₂²`.
    pub fn binary(prime: u64, eta: i64) -> Result<Self> {
        Self::from_integers(prime, &[1, -eta])
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .zip(x)
            .fold(Rational::zero(), |acc, (a, xi)| acc + a * xi * xi)
    }

    /// `D = a₁⋯a_n`.
    pub fn discriminant(&self) -> Rational {
        self.coeffs.iter().fold(Rational::one(), |acc, a| acc * a)
    }

    /// `D* = (−1)^{n/2} D` for even `n`.
    pub fn d_star(&self) -> Option<Rational> {
        let n = self.dim();
        (n % 2 == 0).then(|| {
            let d = self.discriminant();
            if (n / 2) % 2 == 1 {
                -d
            } else {
                d
            }
        })
    }

    /// `f*(x) = f(x₁/a₁, …, x_n/a_n)`, i.e. coefficients `1/a_i`.
    pub fn star(&self) -> Self {
        QuadraticForm {
            prime: self.prime,
            coeffs: self.coeffs.iter().map(|a| a.recip()).collect(),
        }
    }

    pub fn scaled(&self, t: &Rational) -> Result<Self> {
        Self::new(self.prime, self.coeffs.iter().map(|a| a * t).collect())
    }

    pub fn label(&self) -> String {
        self.coeffs
            .iter()
            .map(crate::scalars::display_rational)
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Integer-valued rescaling `c·f` with every coefficient in `Z_p` and
    /// at least one unit, plus `ord c`.
    pub(crate) fn integral_rescaling(&self) -> (Self, i64) {
        let m = self.coeffs.iter().map(|a| ord(a, self.prime)).min().unwrap();
        let scale = crate::scalars::p_power(self.prime, -m);
        let coeffs = self.coeffs.iter().map(|a| a * &scale).collect();
        (
            QuadraticForm {
                prime: self.prime,
                coeffs,
            },
            -m,
        )
    }
}

impl fmt::Debug for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q_{}[", self.prime)?;
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

/// Classical invariants of a diagonal form.
#[derive(Debug, Clone, PartialEq)]
pub struct FormInvariants {
    pub dim: usize,
    pub discriminant: Rational,
    pub discriminant_class: SquareClass,
    pub hasse: i8,
    pub d_star: Option<Rational>,
    pub d_star_class: Option<SquareClass>,
    pub weil_gamma: ExtScalar,
}

pub fn form_invariants(f: &QuadraticForm) -> Result<FormInvariants> {
    let p = f.prime();
    let a = f.coeffs();
    let mut hasse = 1;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            hasse *= hilbert(&a[i], &a[j], p)?;
        }
    }
    let disc = f.discriminant();
    let d_star = f.d_star();
    Ok(FormInvariants {
        dim: f.dim(),
        discriminant_class: square_class(&disc, p)?,
        discriminant: disc,
        hasse,
        d_star_class: d_star.as_ref().map(|d| square_class(d, p)).transpose()?,
        d_star,
        weil_gamma: weil_gamma_form(f)?,
    })
}
