//! Locally constant, compactly supported functions on `Q_p^n` as finite sums
//! of ball indicators.

mod corpus;
mod fourier;
mod json;

pub use corpus::{builtin, lizorkin0, random_phi, random_psi, shifted_box, unit_ball, BUILTINS};
pub use json::{TestFunctionFile, TermJson};

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::padic::{canonical_coord, Ball, PVector};
use crate::scalars::{p_power, Coeff, CyclotomicScalar, Rational};

/// Which Lizorkin space to test membership in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lizorkin {
    /// `ψ(0) = 0`.
    Psi,
    /// `∫ φ = 0`.
    Phi,
}

/// `Σ c_a 1_{a + B_γ}` over disjoint balls of one common radius `p^γ`.
///
/// Keys are canonical ball centers, so two values at the same `γ` are equal
/// as functions iff their term maps agree.
#[derive(Clone)]
pub struct TestFunction<S> {
    prime: u64,
    dim: usize,
    gamma: i64,
    terms: BTreeMap<Vec<Rational>, S>,
}

impl<S: Coeff> TestFunction<S> {
    pub fn zero(prime: u64, dim: usize) -> Self {
        TestFunction {
            prime,
            dim,
            gamma: 0,
            terms: BTreeMap::new(),
        }
    }

    /// `c·1_B`.
    pub fn indicator(ball: &Ball, c: S) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(ball.center().coords().to_vec(), c);
        }
        TestFunction {
            prime: ball.prime(),
            dim: ball.dim(),
            gamma: ball.gamma(),
            terms,
        }
    }

    /// Canonical form of `Σ c_i 1_{B_i}` (balls may overlap or nest).
    pub fn from_terms(prime: u64, dim: usize, raw: Vec<(Ball, S)>, depth_bound: u32) -> Result<Self> {
        let Some(gamma) = raw.iter().map(|(b, _)| b.gamma()).min() else {
            return Ok(Self::zero(prime, dim));
        };
        let mut terms: BTreeMap<Vec<Rational>, S> = BTreeMap::new();
        for (ball, c) in raw {
            if ball.prime() != prime {
                return Err(Error::PrimeMismatch(prime, ball.prime()));
            }
            if ball.dim() != dim {
                return Err(Error::DimensionMismatch(dim, ball.dim()));
            }
            if (ball.gamma() - gamma) as u64 > depth_bound as u64 {
                return Err(Error::DepthExceeded(depth_bound));
            }
            if c.is_zero() {
                continue;
            }
            for (k, v) in Self::indicator(&ball, c).refined(gamma).terms {
                match terms.entry(k) {
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let sum = e.get().add(&v);
                        *e.get_mut() = sum;
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(v);
                    }
                }
            }
        }
        terms.retain(|_, v| !v.is_zero());
        Ok(Self::from_raw(prime, dim, gamma, terms))
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Common radius exponent of the balls.
    pub fn gamma(&self) -> i64 {
        self.gamma
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as `(ball, coefficient)` in lexicographic center order.
    pub fn terms(&self) -> impl Iterator<Item = (Ball, &S)> + '_ {
        self.terms.iter().map(move |(c, s)| {
            (
                Ball::new(PVector::new(self.prime, c.clone()).unwrap(), self.gamma),
                s,
            )
        })
    }

    pub(crate) fn raw_terms(&self) -> &BTreeMap<Vec<Rational>, S> {
        &self.terms
    }

    pub(crate) fn from_raw(prime: u64, dim: usize, gamma: i64, terms: BTreeMap<Vec<Rational>, S>) -> Self {
        TestFunction {
            prime,
            dim,
            gamma,
            terms,
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime, other.prime));
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    /// Same function written with balls of exponent `gamma ≤ self.gamma`.
    pub fn refined(&self, gamma: i64) -> Self {
        if gamma >= self.gamma || self.is_zero() {
            let mut out = self.clone();
            if self.is_zero() {
                out.gamma = gamma;
            }
            return out;
        }
        let mut terms = BTreeMap::new();
        for (center, c) in &self.terms {
            let ball = Ball::new(PVector::new(self.prime, center.clone()).unwrap(), self.gamma);
            let mut level = vec![ball];
            for _ in gamma..self.gamma {
                level = level.iter().flat_map(Ball::children).collect();
            }
            for b in level {
                terms.insert(b.center().coords().to_vec(), c.clone());
            }
        }
        TestFunction {
            prime: self.prime,
            dim: self.dim,
            gamma,
            terms,
        }
    }

    /// Merges complete sibling families with equal coefficients.
    pub fn coarsened(&self) -> Self {
        let mut cur = self.clone();
        let family = (self.prime as usize).pow(self.dim as u32);
        loop {
            if cur.is_zero() {
                return cur;
            }
            let up = cur.gamma + 1;
            let mut groups: BTreeMap<Vec<Rational>, Vec<&S>> = BTreeMap::new();
            for (center, c) in &cur.terms {
                let parent = center.iter().map(|a| canonical_coord(a, cur.prime, up)).collect();
                groups.entry(parent).or_default().push(c);
            }
            let mergeable = groups
                .values()
                .all(|cs| cs.len() == family && cs.iter().all(|c| *c == cs[0]));
            if !mergeable {
                return cur;
            }
            let terms = groups.into_iter().map(|(k, cs)| (k, cs[0].clone())).collect();
            cur = TestFunction {
                prime: cur.prime,
                dim: cur.dim,
                gamma: up,
                terms,
            };
        }
    }

    /// The same function as a sum over balls of mixed radii: wherever most
    /// siblings share a coefficient, it is moved to the parent ball and only
    /// the differences stay at the finer level.
    pub fn multiscale_terms(&self) -> Vec<(Ball, S)> {
        let family = (self.prime as usize).pow(self.dim as u32);
        let mut out = Vec::new();
        let mut level = self.terms.clone();
        let mut gamma = self.gamma;
        while !level.is_empty() {
            let up = gamma + 1;
            let mut groups: BTreeMap<Vec<Rational>, Vec<(Vec<Rational>, S)>> = BTreeMap::new();
            for (center, c) in level {
                let parent = center.iter().map(|a| canonical_coord(a, self.prime, up)).collect();
                groups.entry(parent).or_default().push((center, c));
            }
            let mut next = BTreeMap::new();
            let ball = |c: Vec<Rational>, g| Ball::new(PVector::new(self.prime, c).unwrap(), g);
            for (parent, children) in groups {
                let mut counts: Vec<(&S, usize)> = Vec::new();
                for (_, c) in &children {
                    match counts.iter_mut().find(|(v, _)| *v == c) {
                        Some(slot) => slot.1 += 1,
                        None => counts.push((c, 1)),
                    }
                }
                let (mode, hits) = counts.into_iter().max_by_key(|(_, n)| *n).expect("nonempty group");
                if 2 * hits <= family {
                    out.extend(children.into_iter().map(|(c, v)| (ball(c, gamma), v)));
                    continue;
                }
                let mode = mode.clone();
                let present: std::collections::BTreeSet<Vec<Rational>> = children.iter().map(|(c, _)| c.clone()).collect();
                for (c, v) in &children {
                    if *v != mode {
                        out.push((ball(c.clone(), gamma), v.sub(&mode)));
                    }
                }
                for child in ball(parent.clone(), up).children() {
                    if !present.contains(child.center().coords()) {
                        out.push((child, mode.neg()));
                    }
                }
                next.insert(parent, mode);
            }
            level = next;
            gamma = up;
        }
        out
    }

    fn common(&self, other: &Self) -> Result<(Self, Self)> {
        self.check(other)?;
        let g = self.gamma.min(other.gamma);
        Ok((self.refined(g), other.refined(g)))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            self.check(other)?;
            return Ok(self.clone());
        }
        if self.is_zero() {
            self.check(other)?;
            return Ok(other.clone());
        }
        let (mut a, b) = self.common(other)?;
        for (k, c) in b.terms {
            match a.terms.get_mut(&k) {
                Some(x) => {
                    let s = x.add(&c);
                    if s.is_zero() {
                        a.terms.remove(&k);
                    } else {
                        *x = s;
                    }
                }
                None => {
                    a.terms.insert(k, c);
                }
            }
        }
        Ok(a)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    /// Pointwise product.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.common(other)?;
        let terms = a
            .terms
            .iter()
            .filter_map(|(k, x)| {
                let y = b.terms.get(k)?;
                let v = x.mul(y);
                (!v.is_zero()).then(|| (k.clone(), v))
            })
            .collect();
        Ok(TestFunction { terms, ..a })
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn scale_cyclotomic(&self, c: &CyclotomicScalar) -> Self {
        self.map(|x| x.scale(c))
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale_cyclotomic(&CyclotomicScalar::from_rational(self.prime, q.clone()))
    }

    /// Coefficientwise map, dropping terms that become zero.
    pub fn map<T: Coeff>(&self, f: impl Fn(&S) -> T) -> TestFunction<T> {
        self.try_map(|c| Ok(f(c))).unwrap()
    }

    pub fn try_map<T: Coeff>(&self, f: impl Fn(&S) -> Result<T>) -> Result<TestFunction<T>> {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            let v = f(c)?;
            if !v.is_zero() {
                terms.insert(k.clone(), v);
            }
        }
        Ok(TestFunction {
            prime: self.prime,
            dim: self.dim,
            gamma: self.gamma,
            terms,
        })
    }

    /// Complex conjugate function.
    pub fn conj(&self) -> Self {
        self.map(|c| c.conj())
    }

    /// `x ↦ φ(−x)`.
    pub fn reflect(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| {
                let center = k.iter().map(|a| canonical_coord(&-a, self.prime, self.gamma)).collect();
                (center, c.clone())
            })
            .collect();
        TestFunction { terms, ..self.clone() }
    }

    /// `x ↦ φ(x − v)`.
    pub fn translate(&self, v: &PVector) -> Result<Self> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, v.dim()));
        }
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| {
                let center = k
                    .iter()
                    .zip(v.coords())
                    .map(|(a, b)| canonical_coord(&(a + b), self.prime, self.gamma))
                    .collect();
                (center, c.clone())
            })
            .collect();
        Ok(TestFunction { terms, ..self.clone() })
    }

    pub fn eval(&self, x: &PVector) -> Result<S> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch(self.dim, x.dim()));
        }
        let key: Vec<Rational> = x
            .coords()
            .iter()
            .map(|a| canonical_coord(a, self.prime, self.gamma))
            .collect();
        Ok(self.terms.get(&key).cloned().unwrap_or_else(|| S::zero(self.prime)))
    }

    pub fn value_at_origin(&self) -> S {
        self.terms
            .get(&vec![Rational::zero(); self.dim])
            .cloned()
            .unwrap_or_else(|| S::zero(self.prime))
    }

    /// `∫ φ = Σ c·p^{γn}`.
    pub fn integral(&self) -> S {
        let vol = p_power(self.prime, self.gamma * self.dim as i64);
        let sum = self
            .terms
            .values()
            .fold(S::zero(self.prime), |acc, c| acc.add(c));
        sum.scale(&CyclotomicScalar::from_rational(self.prime, vol))
    }

    pub fn lizorkin_check(&self, space: Lizorkin) -> bool {
        match space {
            Lizorkin::Psi => self.value_at_origin().is_zero(),
            Lizorkin::Phi => self.integral().is_zero(),
        }
    }

    /// `φ₁ ∗ φ₂`, using `1_{a+B_γ} ∗ 1_{b+B_γ} = p^{γn} 1_{a+b+B_γ}`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.common(other)?;
        let g = a.gamma;
        let p = a.prime;
        let mut terms: BTreeMap<Vec<Rational>, S> = BTreeMap::new();
        for (ka, ca) in &a.terms {
            for (kb, cb) in &b.terms {
                let key: Vec<Rational> = ka
                    .iter()
                    .zip(kb)
                    .map(|(x, y)| canonical_coord(&(x + y), p, g))
                    .collect();
                let v = ca.mul(cb);
                match terms.get_mut(&key) {
                    Some(acc) => *acc = acc.add(&v),
                    None => {
                        terms.insert(key, v);
                    }
                }
            }
        }
        let vol = CyclotomicScalar::from_rational(p, p_power(p, g * a.dim as i64));
        terms.retain(|_, c| !c.is_zero());
        let out = TestFunction { terms, ..a };
        Ok(out.scale_cyclotomic(&vol))
    }

    /// Exact Fourier transform `ξ ↦ ∫ χ(−ξ·x) φ(x) dx`.
    pub fn fourier(&self) -> Self {
        fourier::fourier(self)
    }

    /// `F⁻¹φ(x) = Fφ(−x)`.
    pub fn inverse_fourier(&self) -> Self {
        fourier::fourier(self).reflect()
    }

    /// Whether every coefficient lies in `Q`.
    pub fn max_level(&self) -> u32
    where
        S: HasLevel,
    {
        self.terms.values().map(HasLevel::level).max().unwrap_or(0)
    }
}

/// Coefficient types whose cyclotomic level can be read off.
pub trait HasLevel {
    fn level(&self) -> u32;
}

impl HasLevel for CyclotomicScalar {
    fn level(&self) -> u32 {
        CyclotomicScalar::level(self)
    }
}

impl HasLevel for crate::scalars::ExtScalar {
    fn level(&self) -> u32 {
        crate::scalars::ExtScalar::level(self)
    }
}

impl<S: Coeff> PartialEq for TestFunction<S> {
    fn eq(&self, other: &Self) -> bool {
        match self.common(other) {
            Ok((a, b)) => a.terms == b.terms,
            Err(_) => false,
        }
    }
}

impl<S: Coeff> fmt::Debug for TestFunction<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TestFunction(p={}, n={}, γ={}) {{", self.prime, self.dim, self.gamma)?;
        for (k, c) in &self.terms {
            write!(f, " {:?}: {:?};", k.iter().map(|x| x.to_string()).collect::<Vec<_>>(), c)?;
        }
        write!(f, " }}")
    }
}

/// `Σ` over a slice of test functions.
pub fn sum<S: Coeff>(prime: u64, dim: usize, items: &[TestFunction<S>]) -> Result<TestFunction<S>> {
    items
        .iter()
        .try_fold(TestFunction::zero(prime, dim), |acc, x| acc.checked_add(x))
}

/// Canonical one-line form: coarsest `γ`, centers in lexicographic order.
impl<S: Coeff + fmt::Display> fmt::Display for TestFunction<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.coarsened();
        write!(f, "gamma={}", c.gamma)?;
        for (k, v) in &c.terms {
            let center: Vec<String> = k.iter().map(crate::scalars::display_rational).collect();
            write!(f, "; [{}]: {}", center.join(","), v)?;
        }
        Ok(())
    }
}
