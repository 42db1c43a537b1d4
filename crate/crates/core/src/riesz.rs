//! Riesz kernels `K_α = c(α)|f|^{α−n/2}` of the elliptic forms in four and
//! two variables, evaluated through pairings with test functions.
//!
//! Every pairing is a rational function of `t = p^{−α}`. Convolutions with
//! Lizorkin functions act on the Fourier side by `|f°(ξ)|^{−α}`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{Ball, PVector};
use crate::quadform::{epsilon, legendre, square_class, QuadraticForm, SquareClass};
use crate::scalars::{p_power, rat, Coeff, ExtScalar, Rational, RationalFunctionT};
use crate::schwartz::{Lizorkin, TestFunction};
use crate::zeta::{certified_tiling, ord_moment, tail_integral, zeta, Convention, ZetaRequest};

/// Which elliptic family the form belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KernelFamily {
    /// `x₁² − a x₂² − p x₃² + a p x₄²`.
    FourDim,
    /// `x₁² − η x₂²` with `η` in the given non-square class.
    Binary(SquareClass),
}

/// Exponent of a convolution kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exponent {
    /// `K_{kα}` with `α` symbolic; coefficients are Laurent monomials in `t`.
    Symbolic(i64),
    /// `K_a` for an integer `a`.
    Numeric(i64),
}

impl std::ops::Neg for Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        match self {
            Exponent::Symbolic(k) => Exponent::Symbolic(-k),
            Exponent::Numeric(a) => Exponent::Numeric(-a),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RieszKernel {
    form: QuadraticForm,
    dual: QuadraticForm,
    family: KernelFamily,
    prefactor: RationalFunctionT,
    delta_term: RationalFunctionT,
    depth_bound: u32,
}

type Tf = TestFunction<ExtScalar>;
type TfT = TestFunction<RationalFunctionT>;

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `c₀ / (1 − c t^{−k})` style builder: `Σ num / Σ den`.
fn ratfun(p: u64, num: &[(i64, Rational)], den: &[(i64, Rational)]) -> RationalFunctionT {
    let lift = |v: &[(i64, Rational)]| -> Vec<(i64, ExtScalar)> {
        v.iter().map(|(k, c)| (*k, ExtScalar::from_rational(p, c.clone()))).collect()
    };
    RationalFunctionT::from_parts(p, &lift(num), &lift(den)).expect("nonzero denominator")
}

impl RieszKernel {
    /// Recognizes the form and fixes `f°`, the normalizing prefactor, and the
    /// value of `⟨K_α, 1_{Z_p^n}⟩`.
    pub fn new(form: &QuadraticForm) -> Result<Self> {
        let p = form.prime();
        let c = form.coeffs();
        let pr = int(p as i64);
        let unsupported = || Error::Unsupported(format!("no Riesz kernel for the form [{}]", form.label()));
        let (family, dual) = match c.len() {
            4 => {
                let a = -&c[1];
                let ok = c[0] == int(1)
                    && c[2] == -&pr
                    && c[3] == &a * &pr
                    && a.is_integer()
                    && a.to_integer() != 0.into()
                    && square_class(&a, p)? == SquareClass::Eps;
                if !ok {
                    return Err(unsupported());
                }
                let dual = QuadraticForm::new(p, vec![c[3].clone(), c[2].clone(), c[1].clone(), c[0].clone()])?;
                (KernelFamily::FourDim, dual)
            }
            2 => {
                let eta = -&c[1];
                let class = square_class(&eta, p)?;
                if c[0] != int(1) || class == SquareClass::One {
                    return Err(unsupported());
                }
                let dual = QuadraticForm::new(p, vec![eta, int(-1)])?;
                (KernelFamily::Binary(class), dual)
            }
            _ => return Err(unsupported()),
        };
        let one = int(1);
        let q2 = p_power(p, -2);
        let q1 = p_power(p, -1);
        let (prefactor, delta_term) = match family {
            KernelFamily::FourDim => (
                ratfun(p, &[(0, one.clone()), (1, -&one)], &[(0, one.clone()), (-1, -&q2)]),
                ratfun(p, &[(0, &one - &q2)], &[(0, one.clone()), (-1, -&q2)]),
            ),
            KernelFamily::Binary(SquareClass::Eps) => (
                ratfun(p, &[(0, one.clone()), (2, -&one)], &[(0, one.clone()), (-2, -&q2)]),
                ratfun(p, &[(0, &one - &q2)], &[(0, one.clone()), (-2, -&q2)]),
            ),
            KernelFamily::Binary(_) => (
                ratfun(p, &[(0, one.clone()), (1, -&one)], &[(0, one.clone()), (-1, -&q1)]),
                ratfun(p, &[(0, &one - &q1)], &[(0, one.clone()), (-1, -&q1)]),
            ),
        };
        Ok(RieszKernel {
            form: form.clone(),
            dual,
            family,
            prefactor,
            delta_term,
            depth_bound: crate::DEFAULT_DEPTH_BOUND,
        })
    }

    /// Kernel of `x₁² − εx₂² − px₃² + εpx₄²` with `ε` the least non-residue.
    pub fn four_dim(p: u64) -> Result<Self> {
        Self::new(&QuadraticForm::four_dim(p, epsilon(p) as i64)?)
    }

    /// Kernel of `x₁² − ηx₂²`.
    pub fn binary(p: u64, eta: i64) -> Result<Self> {
        Self::new(&QuadraticForm::binary(p, eta)?)
    }

    pub fn with_depth_bound(mut self, depth_bound: u32) -> Self {
        self.depth_bound = depth_bound;
        self
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    /// `f°`, whose powers are the Fourier multipliers of the kernels.
    pub fn dual(&self) -> &QuadraticForm {
        &self.dual
    }

    pub fn family(&self) -> KernelFamily {
        self.family
    }

    pub fn prime(&self) -> u64 {
        self.form.prime()
    }

    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    pub fn prefactor(&self) -> &RationalFunctionT {
        &self.prefactor
    }

    fn check_phi<S: crate::scalars::Coeff>(&self, phi: &TestFunction<S>) -> Result<()> {
        if phi.prime() != self.prime() {
            return Err(Error::PrimeMismatch(self.prime(), phi.prime()));
        }
        if phi.dim() != self.dim() {
            return Err(Error::DimensionMismatch(self.dim(), phi.dim()));
        }
        Ok(())
    }

    fn shifted_zeta(&self, phi: &Tf) -> Result<RationalFunctionT> {
        Ok(zeta(&ZetaRequest::new(&self.form, phi).depth_bound(self.depth_bound))?.value)
    }

    /// `∫ |f°(x)|^{s} φ(x) dx` in `t = p^{−s}`.
    fn dual_zeta(&self, phi: &Tf) -> Result<RationalFunctionT> {
        let req = ZetaRequest::new(&self.dual, phi)
            .convention(Convention::Plain)
            .depth_bound(self.depth_bound);
        Ok(zeta(&req)?.value)
    }

    /// `⟨K_α, φ⟩` = prefactor × `∫ |f|^{α−n/2} φ`.
    pub fn pair(&self, phi: &Tf) -> Result<RationalFunctionT> {
        self.check_phi(phi)?;
        self.prefactor.checked_mul(&self.shifted_zeta(phi)?)
    }

    /// `⟨K_α, φ⟩` via the split `φ(0)⟨K_α, 1_{Z_p^n}⟩ + ⟨K_α, φ − φ(0)1_{Z_p^n}⟩`,
    /// where the first term is the closed form and the second needs no
    /// geometric closure.
    pub fn pair_split(&self, phi: &Tf) -> Result<RationalFunctionT> {
        self.check_phi(phi)?;
        let p = self.prime();
        let at0 = phi.value_at_origin();
        let unit = Tf::indicator(&Ball::centered(p, self.dim(), 0), at0.clone());
        let rest = phi.checked_sub(&unit)?;
        let head = self.delta_term.scale_by(&at0);
        head.checked_add(&self.prefactor.checked_mul(&self.shifted_zeta(&rest)?)?)
    }

    /// `⟨K_{−α}, φ⟩ = c(−α) ∫ (φ(x) − φ(0)) |f(x)|^{−α−n/2} dx`, as a function
    /// of `t = p^{−α}`.
    pub fn pair_negative(&self, phi: &Tf) -> Result<RationalFunctionT> {
        self.check_phi(phi)?;
        let p = self.prime();
        let n = self.dim();
        let at0 = phi.value_at_origin();
        let radius = support_radius(phi).max(0);
        let inner = Tf::indicator(&Ball::centered(p, n, radius), at0.clone());
        let compact = self.shifted_zeta(&phi.checked_sub(&inner)?)?.invert_var();
        let layers = RationalFunctionT::monomial(ExtScalar::one(p), 2 * radius);
        let tail = tail_integral(&self.form)?.checked_mul(&layers)?.scale_by(&at0);
        self.prefactor.invert_var().checked_mul(&compact.checked_add(&-tail)?)
    }

    /// `lim_{α→0} ⟨K_α, φ⟩`, which should be `φ(0)`.
    pub fn delta_limit(&self, phi: &Tf) -> Result<ExtScalar> {
        self.pair(phi)?.value_after_cancellation(&ExtScalar::one(self.prime()))
    }

    /// Checks `⟨K_{±α}, F[ψ]⟩ = ∫ |f°|^{∓α} ψ` for `ψ ∈ Ψ`; returns
    /// `(positive, negative)` outcomes.
    pub fn fourier_check(&self, psi: &Tf) -> Result<(bool, bool)> {
        self.check_phi(psi)?;
        if !psi.lizorkin_check(Lizorkin::Psi) {
            return Err(Error::NotInPsi);
        }
        let hat = psi.fourier();
        let dual = self.dual_zeta(psi)?;
        let pos = self.pair(&hat)? == dual.invert_var();
        let neg = self.pair_negative(&hat)? == dual;
        Ok((pos, neg))
    }

    /// `K ∗ φ = F⁻¹[|f°|^{−exponent} F[φ]]` for `φ ∈ Φ`.
    pub fn convolve(&self, phi: &Tf, exponent: Exponent) -> Result<TfT> {
        self.convolve_general(&phi.map(|c| RationalFunctionT::constant(c.clone())), exponent)
    }

    /// [`RieszKernel::convolve`] for symbolic inputs.
    pub fn convolve_general(&self, phi: &TfT, exponent: Exponent) -> Result<TfT> {
        self.check_phi(phi)?;
        if !phi.lizorkin_check(Lizorkin::Phi) {
            return Err(Error::NotInPhi);
        }
        let hat = phi.fourier();
        let multiplied = self.multiply_by_dual_power(&hat, exponent)?;
        Ok(multiplied.inverse_fourier())
    }

    /// Pointwise product with `|f°|^{−exponent}` on a function vanishing
    /// near the origin.
    pub fn multiply_by_dual_power(&self, g: &TfT, exponent: Exponent) -> Result<TfT> {
        let p = self.prime();
        self.multiply_with(g, &|order| match exponent {
            Exponent::Symbolic(k) => RationalFunctionT::monomial(ExtScalar::one(p), -k * order),
            Exponent::Numeric(a) => RationalFunctionT::from_rational(p, p_power(p, a * order)),
        })
    }

    /// `K_a ∗ φ` for an integer `a`, with scalar coefficients throughout.
    pub fn convolve_numeric(&self, phi: &Tf, a: i64) -> Result<Tf> {
        self.check_phi(phi)?;
        if !phi.lizorkin_check(Lizorkin::Phi) {
            return Err(Error::NotInPhi);
        }
        let p = self.prime();
        let hat = phi.fourier();
        let multiplied = self.multiply_with(&hat, &|order| ExtScalar::from_rational(p, p_power(p, a * order)))?;
        Ok(multiplied.inverse_fourier())
    }

    /// Multiplies each coefficient by `weight(ord f°)` on a certified tiling.
    pub(crate) fn multiply_with<S: Coeff>(&self, g: &TestFunction<S>, weight: &(dyn Fn(i64) -> S + Sync)) -> Result<TestFunction<S>> {
        let p = self.prime();
        let pieces: Vec<Vec<(Ball, S)>> = g
            .terms()
            .map(|(b, c)| (b, c.clone()))
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|(ball, c)| -> Result<_> {
                if ball.contains_origin() {
                    return Err(Error::NotInPhi);
                }
                let tiles = certified_tiling(&self.dual, ball, self.depth_bound)?;
                Ok(tiles.into_iter().map(|cb| (cb.ball, c.mul(&weight(cb.order)))).collect())
            })
            .collect::<Result<_>>()?;
        TestFunction::from_terms(p, g.dim(), pieces.into_iter().flatten().collect(), self.depth_bound)
    }

    /// `(K_α ∗ φ)(x) = ⟨K_α, φ(x + ·)⟩`.
    pub fn convolve_at(&self, phi: &Tf, x: &PVector) -> Result<RationalFunctionT> {
        self.pair(&phi.translate(&x.neg())?)
    }

    /// `(K_{−α} ∗ φ)(x) = c(−α) ∫ (φ(x+y) − φ(x)) |f(y)|^{−α−n/2} dy`.
    pub fn convolve_negative_at(&self, phi: &Tf, x: &PVector) -> Result<RationalFunctionT> {
        self.pair_negative(&phi.translate(&x.neg())?)
    }

    /// `(1 − p^{−2}) ∫ ord(f) φ`, the pairing with the kernel at `α = 2`.
    pub fn log_pair(&self, phi: &Tf) -> Result<ExtScalar> {
        if self.family != KernelFamily::FourDim {
            return Err(Error::Unsupported("log kernel is defined for the four-variable form".into()));
        }
        self.check_phi(phi)?;
        if !phi.lizorkin_check(Lizorkin::Phi) {
            return Err(Error::NotInPhi);
        }
        let p = self.prime();
        let m = ord_moment(&self.form, phi, self.depth_bound)?;
        Ok(m.scale(&(int(1) - p_power(p, -2))))
    }

    /// [`RieszKernel::log_pair`] of `φ(x + ·)` at each `x`, by linearity over
    /// the balls of `φ` with moments shared between points.
    pub fn log_convolve_at(&self, phi: &Tf, points: &[PVector]) -> Result<Vec<ExtScalar>> {
        if self.family != KernelFamily::FourDim {
            return Err(Error::Unsupported("log kernel is defined for the four-variable form".into()));
        }
        self.check_phi(phi)?;
        if !phi.lizorkin_check(Lizorkin::Phi) {
            return Err(Error::NotInPhi);
        }
        let p = self.prime();
        let scale = int(1) - p_power(p, -2);
        let mut moments: HashMap<Ball, ExtScalar> = HashMap::new();
        let pieces = phi.multiscale_terms();
        let mut out = Vec::with_capacity(points.len());
        for x in points {
            let mut total = ExtScalar::zero(p);
            for (ball, c) in &pieces {
                let moved = Ball::new(ball.center().sub(x)?, ball.gamma());
                let m = match moments.get(&moved) {
                    Some(m) => m.clone(),
                    None => {
                        let one = Tf::indicator(&moved, ExtScalar::one(p));
                        let m = ord_moment(&self.form, &one, self.depth_bound)?;
                        moments.insert(moved, m.clone());
                        m
                    }
                };
                total = &total + &(c * &m);
            }
            out.push(total.scale(&scale));
        }
        Ok(out)
    }

    /// Largest `t`-degree span among the coefficients of `K_α ∗ φ`.
    pub fn degree_bound(&self, phi: &Tf) -> Result<usize> {
        let k = self.convolve(phi, Exponent::Symbolic(1))?;
        Ok(k.terms().map(|(_, c)| c.degree_span()).max().unwrap_or(0))
    }

    /// `K_a ∗ (K_b ∗ φ) = K_{a+b} ∗ φ` on each grid point.
    pub fn group_law(&self, phi: &Tf, grid: &[(i64, i64)]) -> Result<Vec<GroupLawCase>> {
        grid.par_iter()
            .map(|&(a, b)| {
                let inner = self.convolve_numeric(phi, b)?;
                let lhs = self.convolve_numeric(&inner, a)?;
                let rhs = self.convolve_numeric(phi, a + b)?;
                Ok(GroupLawCase { a, b, holds: lhs == rhs })
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GroupLawCase {
    pub a: i64,
    pub b: i64,
    pub holds: bool,
}

/// `{1,2,3}²` together with `(−1,−1), (−1,2), (2,−1)`.
pub fn default_grid() -> Vec<(i64, i64)> {
    let mut g: Vec<(i64, i64)> = (1..=3).flat_map(|a| (1..=3).map(move |b| (a, b))).collect();
    g.extend([(-1, -1), (-1, 2), (2, -1)]);
    g
}

/// Smallest `R ≥ γ` with the support inside `B_R(0)`.
fn support_radius<S: crate::scalars::Coeff>(phi: &TestFunction<S>) -> i64 {
    let p = phi.prime();
    phi.terms()
        .flat_map(|(b, _)| b.center().coords().to_vec())
        .filter(|a| a != &int(0))
        .map(|a| -crate::padic::ord(&a, p))
        .fold(phi.gamma(), i64::max)
}

/// Whether `a` is a unit non-residue, for callers building forms by hand.
pub fn is_nonresidue(a: i64, p: u64) -> bool {
    legendre(a, p) == Ok(-1)
}

/// `t`-value `p^{−2}` at which the four-variable prefactor has its pole.
pub fn log_point(p: u64) -> ExtScalar {
    ExtScalar::from_rational(p, rat(1, (p * p) as i64))
}
