//! Local zeta integrals `∫ π_β(f(x)) |f(x)|^s φ(x) dx` of diagonal quadratic
//! forms as exact rational functions of `t = p^{-s}`.
//!
//! Each ball of the test function is either certified (both `ord f` and the
//! square class of `f` are constant on it), closed off by homogeneity when
//! centered at the origin, or subdivided.

mod oracle;
mod sphere;

pub use oracle::{ord_moment_oracle, zeta_oracle_float};
pub use sphere::{ellipticity_bounds, tail_integral, unit_box, unit_sphere_integral, EllipticityBounds, SphereBreakdown};

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{ord, Ball};
use crate::quadform::{hilbert_class, square_class, QuadraticForm, SquareClass};
use crate::scalars::{p_power, ExtScalar, Rational, RationalFunctionT};
use crate::schwartz::TestFunction;

/// How the integrand's exponent relates to `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `|f|^s`.
    Plain,
    /// `|f|^{s − n/2}`.
    Shifted,
}

impl Convention {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Convention::Plain),
            "shifted" => Ok(Convention::Shifted),
            _ => Err(Error::Invalid(format!("unknown exponent convention {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Finitely many certified balls.
    Certified,
    /// At least one ball at the origin summed as a geometric series.
    GeometricClosure,
}

#[derive(Debug, Clone)]
pub struct ZetaRequest<'a> {
    pub form: &'a QuadraticForm,
    pub phi: &'a TestFunction<ExtScalar>,
    pub beta: SquareClass,
    pub convention: Convention,
    pub depth_bound: u32,
}

impl<'a> ZetaRequest<'a> {
    pub fn new(form: &'a QuadraticForm, phi: &'a TestFunction<ExtScalar>) -> Self {
        ZetaRequest {
            form,
            phi,
            beta: SquareClass::One,
            convention: Convention::Shifted,
            depth_bound: crate::DEFAULT_DEPTH_BOUND,
        }
    }

    pub fn beta(mut self, beta: SquareClass) -> Self {
        self.beta = beta;
        self
    }

    pub fn convention(mut self, convention: Convention) -> Self {
        self.convention = convention;
        self
    }

    pub fn depth_bound(mut self, depth_bound: u32) -> Self {
        self.depth_bound = depth_bound;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZetaResult {
    pub value: RationalFunctionT,
    /// Absolute convergence holds for `Re(s)` above this bound.
    pub abscissa: Rational,
    pub method: Method,
    /// Deepest subdivision used below the input balls.
    pub max_depth: u32,
    /// Number of certified balls.
    pub balls: usize,
}

/// A ball on which `ord f = order` and `f` lies in `class`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifiedBall {
    pub ball: Ball,
    pub order: i64,
    pub class: SquareClass,
}

/// Decomposition of a test function's support for one form.
///
/// `direct` balls tile the part of the support away from the origin. If the
/// support meets the origin, it does so in one ball `B_γ(0)` with coefficient
/// `origin.1`, whose shell `B_γ(0) ∖ B_{γ−1}(0)` is tiled by `shell`.
#[derive(Debug, Clone)]
pub struct Profile {
    pub prime: u64,
    pub dim: usize,
    pub direct: Vec<(CertifiedBall, ExtScalar)>,
    pub origin: Option<(i64, ExtScalar)>,
    pub shell: Vec<CertifiedBall>,
    pub max_depth: u32,
}

/// Certificate exponent: if `ord f(a) + 1 ≤ m*`, `f` has constant order and
/// square class on `a + B_γ`.
fn certificate(coeffs: &[Rational], center: &[Rational], gamma: i64, p: u64) -> i64 {
    coeffs
        .iter()
        .zip(center)
        .map(|(c, a)| {
            let oc = ord(c, p);
            let quad = oc - 2 * gamma;
            if a == &Rational::from_integer(0.into()) {
                quad
            } else {
                quad.min(oc + ord(a, p) - gamma)
            }
        })
        .min()
        .unwrap_or(i64::MAX)
}

/// Tiles `ball` (which must avoid the origin) by certified balls.
fn certify(form: &QuadraticForm, ball: Ball, depth: u32, bound: u32, out: &mut Vec<CertifiedBall>, deepest: &mut u32) -> Result<()> {
    let p = form.prime();
    let center = ball.center().coords();
    let value = form.eval(center);
    let m_star = certificate(form.coeffs(), center, ball.gamma(), p);
    if value != Rational::from_integer(0.into()) && ord(&value, p) < m_star {
        *deepest = (*deepest).max(depth);
        out.push(CertifiedBall {
            order: ord(&value, p),
            class: square_class(&value, p)?,
            ball,
        });
        return Ok(());
    }
    if depth >= bound {
        return Err(Error::DepthExceeded(bound));
    }
    for child in ball.children() {
        certify(form, child, depth + 1, bound, out, deepest)?;
    }
    Ok(())
}

/// Certified tiling of a ball that avoids the origin.
pub(crate) fn certified_tiling(form: &QuadraticForm, ball: Ball, depth_bound: u32) -> Result<Vec<CertifiedBall>> {
    let mut out = Vec::new();
    let mut deepest = 0;
    certify(form, ball, 0, depth_bound, &mut out, &mut deepest)?;
    Ok(out)
}

fn shell_children(ball: &Ball) -> impl Iterator<Item = Ball> {
    ball.children().into_iter().filter(|b| !b.contains_origin())
}

/// Certified decomposition of `φ`'s support.
pub fn profile(form: &QuadraticForm, phi: &TestFunction<ExtScalar>, depth_bound: u32) -> Result<Profile> {
    let p = form.prime();
    if phi.prime() != p {
        return Err(Error::PrimeMismatch(p, phi.prime()));
    }
    if phi.dim() != form.dim() {
        return Err(Error::DimensionMismatch(form.dim(), phi.dim()));
    }
    let terms: Vec<(Ball, ExtScalar)> = phi.terms().map(|(b, c)| (b, c.clone())).collect();
    let origin = terms
        .iter()
        .find(|(b, _)| b.contains_origin())
        .map(|(b, c)| (b.gamma(), c.clone()));
    let pieces: Vec<(Vec<CertifiedBall>, u32, Option<ExtScalar>)> = terms
        .into_par_iter()
        .map(|(ball, c)| -> Result<_> {
            let mut out = Vec::new();
            let mut deepest = 0;
            if ball.contains_origin() {
                for child in shell_children(&ball) {
                    certify(form, child, 1, depth_bound, &mut out, &mut deepest)?;
                }
                Ok((out, deepest, None))
            } else {
                certify(form, ball, 0, depth_bound, &mut out, &mut deepest)?;
                Ok((out, deepest, Some(c)))
            }
        })
        .collect::<Result<_>>()?;
    let mut direct = Vec::new();
    let mut shell = Vec::new();
    let mut max_depth = 0;
    for (balls, deepest, coeff) in pieces {
        max_depth = max_depth.max(deepest);
        match coeff {
            Some(c) => direct.extend(balls.into_iter().map(|b| (b, c.clone()))),
            None => shell = balls,
        }
    }
    Ok(Profile {
        prime: p,
        dim: form.dim(),
        direct,
        origin,
        shell,
        max_depth,
    })
}

impl Profile {
    /// `p^{mn/2}` in the shifted convention, `1` otherwise.
    fn weight(&self, order: i64, convention: Convention) -> ExtScalar {
        match convention {
            Convention::Plain => ExtScalar::one(self.prime),
            Convention::Shifted => ExtScalar::p_half_power(self.prime, order * self.dim as i64),
        }
    }

    fn laurent<'b>(
        &self,
        balls: impl Iterator<Item = (&'b CertifiedBall, ExtScalar)>,
        beta: SquareClass,
        convention: Convention,
    ) -> BTreeMap<i64, ExtScalar> {
        let p = self.prime;
        let mut acc: BTreeMap<i64, ExtScalar> = BTreeMap::new();
        for (cb, c) in balls {
            let sign = hilbert_class(beta, cb.class, p);
            let vol = cb.ball.volume();
            let term = self.weight(cb.order, convention).scale(&(vol * Rational::from_integer(sign.into())));
            let term = &term * &c;
            let slot = acc.entry(cb.order).or_insert_with(|| ExtScalar::zero(p));
            *slot = &*slot + &term;
        }
        acc.retain(|_, v| !v.is_zero());
        acc
    }

    /// Zeta integral over the profiled support.
    pub fn zeta(&self, beta: SquareClass, convention: Convention) -> Result<RationalFunctionT> {
        let p = self.prime;
        let direct = self.laurent(self.direct.iter().map(|(b, c)| (b, c.clone())), beta, convention);
        let mut value = laurent_to_ratfun(p, &direct);
        if let Some((_, c)) = &self.origin {
            let shell = self.laurent(self.shell.iter().map(|b| (b, c.clone())), beta, convention);
            let closure = match convention {
                Convention::Plain => p_power(p, -(self.dim as i64)),
                Convention::Shifted => Rational::from_integer(1.into()),
            };
            let den = RationalFunctionT::from_parts(
                p,
                &[(0, ExtScalar::one(p))],
                &[(0, ExtScalar::one(p)), (2, ExtScalar::from_rational(p, -closure))],
            )?;
            value = value.checked_add(&laurent_to_ratfun(p, &shell).checked_mul(&den)?)?;
        }
        Ok(value)
    }

    /// `∫ ord(f(x)) φ(x) dx`.
    pub fn ord_moment(&self) -> ExtScalar {
        let p = self.prime;
        let mut total = ExtScalar::zero(p);
        for (cb, c) in &self.direct {
            let w = cb.ball.volume() * Rational::from_integer(cb.order.into());
            total = &total + &c.scale(&w);
        }
        if let Some((_, c)) = &self.origin {
            let q = p_power(p, -(self.dim as i64));
            let one = Rational::from_integer(1.into());
            let geo = &one / (&one - &q);
            let arith = Rational::from_integer(2.into()) * &q / ((&one - &q) * (&one - &q));
            let mut shell = Rational::from_integer(0.into());
            for cb in &self.shell {
                shell += cb.ball.volume() * (Rational::from_integer(cb.order.into()) * &geo + &arith);
            }
            total = &total + &c.scale(&shell);
        }
        total
    }

    pub fn uses_closure(&self) -> bool {
        self.origin.is_some()
    }

    pub fn ball_count(&self) -> usize {
        self.direct.len() + self.shell.len()
    }
}

pub(crate) fn laurent_to_ratfun(p: u64, terms: &BTreeMap<i64, ExtScalar>) -> RationalFunctionT {
    let v: Vec<(i64, ExtScalar)> = terms.iter().map(|(k, c)| (*k, c.clone())).collect();
    RationalFunctionT::from_laurent(p, &v)
}

/// `Z_φ(s, π_β, f)` as a rational function of `t = p^{-s}`.
pub fn zeta(req: &ZetaRequest<'_>) -> Result<ZetaResult> {
    let prof = profile(req.form, req.phi, req.depth_bound)?;
    let value = prof.zeta(req.beta, req.convention)?;
    let abscissa = match req.convention {
        Convention::Plain => Rational::from_integer(0.into()),
        Convention::Shifted => Rational::new((req.form.dim() as i64).into(), 2.into()),
    };
    Ok(ZetaResult {
        value,
        abscissa,
        method: if prof.uses_closure() {
            Method::GeometricClosure
        } else {
            Method::Certified
        },
        max_depth: prof.max_depth,
        balls: prof.ball_count(),
    })
}

/// `∫ ord(f(x)) φ(x) dx`, exact.
pub fn ord_moment(form: &QuadraticForm, phi: &TestFunction<ExtScalar>, depth_bound: u32) -> Result<ExtScalar> {
    Ok(profile(form, phi, depth_bound)?.ord_moment())
}

/// Wire form `{num: [[power, coeff]...], den: [...]}` of a rational function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatFunJson {
    pub num: Vec<(i64, String)>,
    pub den: Vec<(i64, String)>,
}

impl From<&RationalFunctionT> for RatFunJson {
    fn from(r: &RationalFunctionT) -> Self {
        let enc = |v: Vec<(i64, ExtScalar)>| v.into_iter().map(|(k, c)| (k, c.to_string())).collect();
        RatFunJson {
            num: enc(r.numerator_terms()),
            den: enc(r.denominator_terms()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PVector;
    use crate::scalars::rat;
    use crate::schwartz::{lizorkin0, random_phi, shifted_box, unit_ball};

    fn unit_ball_closed_form(p: u64) -> RationalFunctionT {
        // (1 − p^{-2})/(1 − t)
        let one = ExtScalar::one(p);
        RationalFunctionT::from_parts(
            p,
            &[(0, ExtScalar::from_rational(p, rat(1, 1) - p_power(p, -2)))],
            &[(0, one.clone()), (1, -one)],
        )
        .unwrap()
    }

    #[test]
    fn unit_ball_four_dim() {
        for p in [3u64, 5, 7] {
            let f = QuadraticForm::four_dim(p, crate::quadform::epsilon(p) as i64).unwrap();
            let phi = unit_ball(p, 4);
            let z = zeta(&ZetaRequest::new(&f, &phi)).unwrap();
            assert_eq!(z.value, unit_ball_closed_form(p));
            assert_eq!(z.method, Method::GeometricClosure);
        }
    }

    #[test]
    fn scaled_balls() {
        let p = 3;
        let f = QuadraticForm::four_dim(p, 2).unwrap();
        for m in 1..=3 {
            let phi = TestFunction::indicator(&Ball::centered(p, 4, -m), ExtScalar::one(p));
            let z = zeta(&ZetaRequest::new(&f, &phi)).unwrap().value;
            let scale = RationalFunctionT::monomial(ExtScalar::one(p), 2 * m);
            assert_eq!(z, unit_ball_closed_form(p).checked_mul(&scale).unwrap(), "m={m}");
        }
    }

    #[test]
    fn one_dimensional_square() {
        // ∫_{Z_p} |x²|^s = (1 − p^{-1})/(1 − p^{-1} t²)
        let p = 5;
        let f = QuadraticForm::from_integers(p, &[1]).unwrap();
        let phi = unit_ball(p, 1);
        let z = zeta(&ZetaRequest::new(&f, &phi).convention(Convention::Plain)).unwrap().value;
        let expect = RationalFunctionT::from_parts(
            p,
            &[(0, ExtScalar::from_rational(p, rat(4, 5)))],
            &[(0, ExtScalar::one(p)), (2, ExtScalar::from_rational(p, rat(-1, 5)))],
        )
        .unwrap();
        assert_eq!(z, expect);
    }

    #[test]
    fn linearity() {
        let p = 3;
        let f = QuadraticForm::four_dim(p, 2).unwrap();
        let a = shifted_box(p, 4);
        let b = random_phi(p, 4, 1);
        let two = ExtScalar::from_integer(p, 2);
        let combo = a.scale(&two).checked_add(&b).unwrap();
        let z = |phi: &TestFunction<ExtScalar>| zeta(&ZetaRequest::new(&f, phi)).unwrap().value;
        let lhs = z(&combo);
        let rhs = z(&a).scale_by(&two).checked_add(&z(&b)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn moment_of_unit_ball() {
        for p in [3u64, 5] {
            let f = QuadraticForm::four_dim(p, crate::quadform::epsilon(p) as i64).unwrap();
            let m = ord_moment(&f, &unit_ball(p, 4), 64).unwrap();
            assert_eq!(m, ExtScalar::from_rational(p, rat(1, (p * p - 1) as i64)));
            let box_m = ord_moment(&f, &shifted_box(p, 4), 64).unwrap();
            assert!(box_m.is_zero());
        }
    }

    #[test]
    fn isotropic_form_is_rejected() {
        let p = 5;
        let f = QuadraticForm::from_integers(p, &[1, -1]).unwrap();
        let err = zeta(&ZetaRequest::new(&f, &unit_ball(p, 2)).depth_bound(6)).unwrap_err();
        assert_eq!(err, Error::DepthExceeded(6));
        // support away from the zero set is fine
        let off = TestFunction::indicator(
            &Ball::new(PVector::new(p, vec![rat(1, 1), rat(0, 1)]).unwrap(), -1),
            ExtScalar::one(p),
        );
        assert!(zeta(&ZetaRequest::new(&f, &off).depth_bound(6)).is_ok());
    }

    #[test]
    fn lizorkin_sample_zeta() {
        let p = 3;
        let f = QuadraticForm::four_dim(p, 2).unwrap();
        let z = zeta(&ZetaRequest::new(&f, &lizorkin0(p, 4))).unwrap().value;
        // (t² − p^{-4})·(1 − p^{-2})/(1 − t)
        let poly = RationalFunctionT::from_laurent(
            p,
            &[(2, ExtScalar::one(p)), (0, ExtScalar::from_rational(p, -p_power(p, -4)))],
        );
        assert_eq!(z, unit_ball_closed_form(p).checked_mul(&poly).unwrap());
    }
}
