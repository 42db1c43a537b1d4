//! Exact scalar rings: rationals, cyclotomic numbers `Q(ζ_{p^r})`, their
//! extension by `σ_p` and `√p`, and rational functions in `t = p^(-s)`.

mod cyclotomic;
mod ext;
mod rational;
mod ratfun;

pub use cyclotomic::CyclotomicScalar;
pub use ext::ExtScalar;
pub(crate) use rational::display_rational;
pub use rational::{format_rational, p_power, parse_rational, rat, Rational};
pub use ratfun::{value_after_cancellation, RationalFunctionT};

use std::fmt::Debug;

use crate::error::Result;

/// Coefficient ring for ball-sum test functions.
///
/// Every implementor is an algebra over `Q(ζ_{p^∞})`, which is all the
/// Fourier transform needs.
pub trait Coeff: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero(prime: u64) -> Self;
    fn from_cyclotomic(c: CyclotomicScalar) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &CyclotomicScalar) -> Self;
    /// Multiply by `ζ_{p^level}^k`.
    fn mul_root_of_unity(&self, k: u64, level: u32) -> Self;
    /// Complex conjugation (ζ ↦ ζ^{-1}, σ_p ↦ conj σ_p).
    fn conj(&self) -> Self;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn one(prime: u64) -> Self {
        Self::from_cyclotomic(CyclotomicScalar::one(prime))
    }
    fn from_rational(prime: u64, q: Rational) -> Self {
        Self::from_cyclotomic(CyclotomicScalar::from_rational(prime, q))
    }
}

impl Coeff for CyclotomicScalar {
    fn zero(prime: u64) -> Self {
        CyclotomicScalar::zero(prime)
    }
    fn from_cyclotomic(c: CyclotomicScalar) -> Self {
        c
    }
    fn is_zero(&self) -> bool {
        CyclotomicScalar::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &CyclotomicScalar) -> Self {
        self * c
    }
    fn mul_root_of_unity(&self, k: u64, level: u32) -> Self {
        CyclotomicScalar::mul_root_of_unity(self, k, level)
    }
    fn conj(&self) -> Self {
        CyclotomicScalar::conj(self)
    }
}

impl Coeff for ExtScalar {
    fn zero(prime: u64) -> Self {
        ExtScalar::zero(prime)
    }
    fn from_cyclotomic(c: CyclotomicScalar) -> Self {
        ExtScalar::from(c)
    }
    fn is_zero(&self) -> bool {
        ExtScalar::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &CyclotomicScalar) -> Self {
        self.scale_cyclotomic(c)
    }
    fn mul_root_of_unity(&self, k: u64, level: u32) -> Self {
        ExtScalar::mul_root_of_unity(self, k, level)
    }
    fn conj(&self) -> Self {
        ExtScalar::conj(self)
    }
}

impl Coeff for RationalFunctionT {
    fn zero(prime: u64) -> Self {
        RationalFunctionT::zero(prime)
    }
    fn from_cyclotomic(c: CyclotomicScalar) -> Self {
        RationalFunctionT::constant(ExtScalar::from(c))
    }
    fn is_zero(&self) -> bool {
        RationalFunctionT::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &CyclotomicScalar) -> Self {
        self.scale_by(&ExtScalar::from(c.clone()))
    }
    fn mul_root_of_unity(&self, k: u64, level: u32) -> Self {
        self.scale_by(&ExtScalar::from(CyclotomicScalar::root_of_unity(
            self.prime(),
            level,
            k,
        )))
    }
    fn conj(&self) -> Self {
        self.conj_coefficients()
    }
}

/// Operation selector for [`cyc_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Eq,
    Negate,
    Conj,
    Div,
}

/// Result of a dispatched arithmetic operation.
#[derive(Debug, Clone, PartialEq)]
pub enum ArithValue<T> {
    Value(T),
    Bool(bool),
}

/// Dispatched cyclotomic arithmetic; unary operations ignore `b`.
pub fn cyc_arith(
    a: &CyclotomicScalar,
    b: &CyclotomicScalar,
    op: ArithOp,
) -> Result<ArithValue<CyclotomicScalar>> {
    Ok(match op {
        ArithOp::Add => ArithValue::Value(a.checked_add(b)?),
        ArithOp::Mul => ArithValue::Value(a.checked_mul(b)?),
        ArithOp::Eq => {
            a.check_prime(b)?;
            ArithValue::Bool(a == b)
        }
        ArithOp::Negate => ArithValue::Value(-a),
        ArithOp::Conj => ArithValue::Value(a.conj()),
        ArithOp::Div => ArithValue::Value(a.checked_mul(&b.inverse()?)?),
    })
}

/// Dispatched arithmetic on [`ExtScalar`].
pub fn ext_arith(a: &ExtScalar, b: &ExtScalar, op: ArithOp) -> Result<ArithValue<ExtScalar>> {
    Ok(match op {
        ArithOp::Add => ArithValue::Value(a.checked_add(b)?),
        ArithOp::Mul => ArithValue::Value(a.checked_mul(b)?),
        ArithOp::Eq => {
            a.check_prime(b)?;
            ArithValue::Bool(a == b)
        }
        ArithOp::Negate => ArithValue::Value(-a),
        ArithOp::Conj => ArithValue::Value(a.conj()),
        ArithOp::Div => ArithValue::Value(a.checked_mul(&b.inverse()?)?),
    })
}

/// Dispatched arithmetic on [`RationalFunctionT`].
pub fn ratfun_arith(
    a: &RationalFunctionT,
    b: &RationalFunctionT,
    op: ArithOp,
) -> Result<ArithValue<RationalFunctionT>> {
    Ok(match op {
        ArithOp::Add => ArithValue::Value(a.checked_add(b)?),
        ArithOp::Mul => ArithValue::Value(a.checked_mul(b)?),
        ArithOp::Div => ArithValue::Value(a.checked_div(b)?),
        ArithOp::Eq => ArithValue::Bool(a.checked_eq(b)?),
        ArithOp::Negate => ArithValue::Value(-a),
        ArithOp::Conj => ArithValue::Value(a.conj_coefficients()),
    })
}
