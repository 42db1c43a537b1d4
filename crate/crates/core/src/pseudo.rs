//! The operator `f(∂,α)φ = F⁻¹[|f°|^α F[φ]]` on Lizorkin functions, its
//! fundamental solutions, the Bernstein-type identity, and the local
//! functional equation of zeta integrals.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{ord, PVector};
use crate::quadform::{rho_factor, square_class, weil_gamma_form, QuadraticForm, SquareClass};
use crate::riesz::{Exponent, KernelFamily, RieszKernel};
use crate::scalars::{p_power, ExtScalar, Rational, RationalFunctionT};
use crate::schwartz::{Lizorkin, TestFunction};
use crate::zeta::{zeta, Convention, ZetaRequest};

type Tf = TestFunction<ExtScalar>;
type TfT = TestFunction<RationalFunctionT>;

fn lift(phi: &Tf) -> TfT {
    phi.map(|c| RationalFunctionT::constant(c.clone()))
}

/// Collapses constant rational-function coefficients back to scalars.
pub fn constants(g: &TfT) -> Result<Tf> {
    g.try_map(|c| {
        c.as_constant()
            .ok_or_else(|| Error::Invalid("coefficient depends on t".into()))
    })
}

#[derive(Debug, Clone)]
pub struct PseudoOp {
    pub kernel: RieszKernel,
    pub alpha: Exponent,
}

/// Result of applying `f(∂,α)` with both evaluation paths.
#[derive(Debug, Clone)]
pub struct Application {
    pub value: TfT,
    /// The image has zero integral.
    pub in_phi: bool,
    /// Pointwise hypersingular integrals agree with `value` at every ball
    /// center checked (only for `α` symbolic of weight 1 or numeric).
    pub pointwise_agrees: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct FundamentalSolution {
    pub u: TfT,
    pub in_phi: bool,
    /// `f(∂,α) u = φ`.
    pub round_trip: bool,
    /// `|f°|^α F[u] = F[φ]`.
    pub multiplier_identity: bool,
    /// For `α = 2`: `u(x)` equals the log-kernel pairing with `φ(x + ·)`.
    pub log_kernel_agrees: Option<bool>,
}

impl PseudoOp {
    pub fn new(kernel: RieszKernel, alpha: Exponent) -> Self {
        PseudoOp { kernel, alpha }
    }

    fn require_phi(&self, phi: &Tf) -> Result<()> {
        if phi.lizorkin_check(Lizorkin::Phi) {
            Ok(())
        } else {
            Err(Error::NotInPhi)
        }
    }

    /// `f(∂,α)φ = K_{−α} ∗ φ`.
    pub fn apply(&self, phi: &Tf) -> Result<TfT> {
        self.kernel.convolve(phi, -self.alpha)
    }

    /// [`PseudoOp::apply`] for symbolic inputs.
    pub fn apply_general(&self, phi: &TfT) -> Result<TfT> {
        self.kernel.convolve_general(phi, -self.alpha)
    }

    /// Applies the operator and cross-checks it against
    /// `c(−α) ∫ (φ(x+y) − φ(x)) |f(y)|^{−α−n/2} dy` at `points`.
    pub fn apply_checked(&self, phi: &Tf, points: &[PVector]) -> Result<Application> {
        self.require_phi(phi)?;
        let value = self.apply(phi)?;
        let in_phi = value.lizorkin_check(Lizorkin::Phi);
        let p = self.kernel.prime();
        let pointwise_agrees = match self.alpha {
            Exponent::Symbolic(1) | Exponent::Numeric(_) => {
                let mut ok = true;
                for x in points {
                    let exact = self.kernel.convolve_negative_at(phi, x)?;
                    let exact = match self.alpha {
                        Exponent::Numeric(a) => RationalFunctionT::constant(
                            exact.value_after_cancellation(&ExtScalar::from_rational(p, p_power(p, -a)))?,
                        ),
                        _ => exact,
                    };
                    ok &= value.eval(x)? == exact;
                }
                Some(ok)
            }
            Exponent::Symbolic(_) => None,
        };
        Ok(Application {
            value,
            in_phi,
            pointwise_agrees,
        })
    }

    /// `u = E_α ∗ φ` with the round-trip and multiplier checks.
    pub fn fundamental_solve(&self, phi: &Tf) -> Result<FundamentalSolution> {
        self.require_phi(phi)?;
        let (u, round_trip, multiplier_identity) = match self.alpha {
            Exponent::Numeric(a) => {
                let p = self.kernel.prime();
                let u = self.kernel.convolve_numeric(phi, a)?;
                let round_trip = self.kernel.convolve_numeric(&u, -a)? == *phi;
                let weight = |order: i64| ExtScalar::from_rational(p, p_power(p, -a * order));
                let multiplier_identity = self.kernel.multiply_with(&u.fourier(), &weight)? == phi.fourier();
                (lift(&u), round_trip, multiplier_identity)
            }
            Exponent::Symbolic(_) => {
                let lifted = lift(phi);
                let u = self.kernel.convolve(phi, self.alpha)?;
                let round_trip = self.apply_general(&u)? == lifted;
                let multiplier_identity =
                    self.kernel.multiply_by_dual_power(&u.fourier(), -self.alpha)? == lifted.fourier();
                (u, round_trip, multiplier_identity)
            }
        };
        let log_kernel_agrees = match (self.alpha, self.kernel.family()) {
            (Exponent::Numeric(2), KernelFamily::FourDim) => {
                let points: Vec<PVector> = u.terms().map(|(b, _)| b.center().clone()).collect();
                let values = self.kernel.log_convolve_at(phi, &points)?;
                Some(
                    u.terms()
                        .zip(values)
                        .all(|((_, c), v)| RationalFunctionT::constant(v) == *c),
                )
            }
            _ => None,
        };
        Ok(FundamentalSolution {
            in_phi: u.lizorkin_check(Lizorkin::Phi),
            u,
            round_trip,
            multiplier_identity,
            log_kernel_agrees,
        })
    }

    /// `f(∂,α) ∘ f(∂,β) = f(∂,α+β)` at each grid point.
    pub fn semigroup(&self, phi: &Tf, grid: &[(i64, i64)]) -> Result<Vec<(i64, i64, bool)>> {
        self.require_phi(phi)?;
        let negated: Vec<(i64, i64)> = grid.iter().map(|&(a, b)| (-a, -b)).collect();
        Ok(self
            .kernel
            .group_law(phi, &negated)?
            .into_iter()
            .map(|c| (-c.a, -c.b, c.holds))
            .collect())
    }
}

/// `A(s) = (1−p^{s+1})(1−p^{−s−2}) / ((1−p^{−s−3})(1−p^{s}))` in `t = p^{−s}`.
pub fn bernstein_factor(p: u64) -> RationalFunctionT {
    let e = |q: Rational| ExtScalar::from_rational(p, q);
    let one = e(Rational::from_integer(1.into()));
    let lin = |k: i64, c: Rational| RationalFunctionT::from_laurent(p, &[(0, one.clone()), (k, -e(c))]);
    let num = lin(-1, p_power(p, 1)).checked_mul(&lin(1, p_power(p, -2))).unwrap();
    let den = lin(1, p_power(p, -3)).checked_mul(&lin(-1, p_power(p, 0))).unwrap();
    num.checked_div(&den).unwrap()
}

#[derive(Debug, Clone)]
pub struct BernsteinReport {
    /// `⟨|f|^{s+1}, f(∂,1)φ⟩`.
    pub lhs: RationalFunctionT,
    /// `A(s)⟨|f|^s, φ⟩`.
    pub rhs: RationalFunctionT,
    pub equal: bool,
    /// Both sides agree at `s = 1`.
    pub spot_check: bool,
    /// `⟨|f|^{s+1}, φ⟩ = (1−p^{s+1})/(1−p^{−s−3}) ⟨K_{s+3}, φ⟩`.
    pub kernel_identity: bool,
}

/// Verifies `f(∂,1)|f|^{s+1} = A(s)|f|^s` by pairing with `φ ∈ Φ`.
pub fn bernstein_verify(kernel: &RieszKernel, phi: &Tf) -> Result<BernsteinReport> {
    if kernel.family() != KernelFamily::FourDim {
        return Err(Error::Unsupported("Bernstein identity is stated for the four-variable form".into()));
    }
    if !phi.lizorkin_check(Lizorkin::Phi) {
        return Err(Error::NotInPhi);
    }
    let p = kernel.prime();
    let plain = |g: &Tf| -> Result<RationalFunctionT> {
        Ok(zeta(&ZetaRequest::new(kernel.form(), g).convention(Convention::Plain))?.value)
    };
    let inv_p = ExtScalar::from_rational(p, p_power(p, -1));
    let image = constants(&PseudoOp::new(kernel.clone(), Exponent::Numeric(1)).apply(phi)?)?;
    let lhs = plain(&image)?.scale_var(&inv_p)?;
    let rhs = bernstein_factor(p).checked_mul(&plain(phi)?)?;
    let s1 = inv_p.clone();
    let spot_check = lhs.value_after_cancellation(&s1)? == rhs.value_after_cancellation(&s1)?;

    let one = ExtScalar::one(p);
    let ratio = RationalFunctionT::from_laurent(p, &[(0, one.clone()), (-1, -ExtScalar::from_integer(p, p as i64))])
        .checked_div(&RationalFunctionT::from_laurent(
            p,
            &[(0, one), (1, -ExtScalar::from_rational(p, p_power(p, -3)))],
        ))?;
    let shifted_kernel = kernel.pair(phi)?.scale_var(&ExtScalar::from_rational(p, p_power(p, -3)))?;
    let kernel_identity = plain(phi)?.scale_var(&inv_p)? == ratio.checked_mul(&shifted_kernel)?;
    Ok(BernsteinReport {
        equal: lhs == rhs,
        lhs,
        rhs,
        spot_check,
        kernel_identity,
    })
}

/// Which side(s) of the functional equation to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FunceqPath {
    General,
    Certified,
    Both,
}

#[derive(Debug, Clone)]
pub struct FunceqReport {
    /// `Z_{F[φ]}(s)` in the shifted convention.
    pub lhs: RationalFunctionT,
    /// `ρ(π₁, s−n/2+1) ρ(π_{D*}, s) |D|^{−1/2} γ(f)`.
    pub rhs_factor: Option<RationalFunctionT>,
    /// `∫ π_{D*}(f*) |f*|^{−s} φ`.
    pub rhs_zeta: Option<RationalFunctionT>,
    pub equal: Option<bool>,
    /// Closed-form factor in front of `∫ |f°|^{−s} φ`.
    pub certified_factor: Option<RationalFunctionT>,
    pub certified_zeta: Option<RationalFunctionT>,
    pub certified_equal: Option<bool>,
}

impl FunceqReport {
    /// Every requested path holds.
    pub fn holds(&self) -> bool {
        self.equal.unwrap_or(true) && self.certified_equal.unwrap_or(true)
    }
}

fn rational_unit(p: u64, c: Rational) -> ExtScalar {
    ExtScalar::from_rational(p, c)
}

/// `ρ(π₁, s−n/2+1) ρ(π_{D*}, s) |D|_p^{−1/2} γ(f)` in `t = p^{−s}`.
pub fn funceq_factor(form: &QuadraticForm) -> Result<RationalFunctionT> {
    let p = form.prime();
    let n = form.dim();
    let d_star = form
        .d_star()
        .ok_or_else(|| Error::Unsupported("functional equation needs even dimension".into()))?;
    let shift = ExtScalar::from_rational(p, p_power(p, n as i64 / 2 - 1));
    let rho1 = rho_factor(SquareClass::One, p)?.scale_var(&shift)?;
    let rho_d = rho_factor(square_class(&d_star, p)?, p)?;
    let disc = ExtScalar::p_half_power(p, ord(&form.discriminant(), p));
    let constant = &disc * &weil_gamma_form(form)?;
    Ok(rho1.checked_mul(&rho_d)?.scale_by(&constant))
}

/// Closed-form factor `Z_{F[φ]}(s) = c(s) ∫ |f°|^{−s} φ` for the certified forms.
pub fn certified_factor(kernel: &RieszKernel) -> RationalFunctionT {
    let p = kernel.prime();
    let one = rational_unit(p, Rational::from_integer(1.into()));
    let q = |e| rational_unit(p, p_power(p, e));
    let (num, den) = match kernel.family() {
        KernelFamily::FourDim => (vec![(0, one.clone()), (-1, -q(-2))], vec![(0, one.clone()), (1, -one.clone())]),
        KernelFamily::Binary(SquareClass::Eps) => {
            (vec![(0, one.clone()), (-2, -q(-2))], vec![(0, one.clone()), (2, -one.clone())])
        }
        KernelFamily::Binary(_) => (vec![(0, one.clone()), (-1, -q(-1))], vec![(0, one.clone()), (1, -one.clone())]),
    };
    RationalFunctionT::from_parts(p, &num, &den).expect("nonzero denominator")
}

/// Checks the local functional equation for `f` and `φ`.
pub fn funceq_verify(form: &QuadraticForm, phi: &Tf, path: FunceqPath, depth_bound: u32) -> Result<FunceqReport> {
    let p = form.prime();
    let hat = phi.fourier();
    let lhs = zeta(&ZetaRequest::new(form, &hat).depth_bound(depth_bound))?.value;
    let mut report = FunceqReport {
        lhs,
        rhs_factor: None,
        rhs_zeta: None,
        equal: None,
        certified_factor: None,
        certified_zeta: None,
        certified_equal: None,
    };
    if matches!(path, FunceqPath::General | FunceqPath::Both) {
        let factor = funceq_factor(form)?;
        let d_star_class = square_class(&form.d_star().expect("even dimension"), p)?;
        let star = form.star();
        let req = ZetaRequest::new(&star, phi)
            .beta(d_star_class)
            .convention(Convention::Plain)
            .depth_bound(depth_bound);
        let rhs_zeta = zeta(&req)?.value.invert_var();
        report.equal = Some(report.lhs == factor.checked_mul(&rhs_zeta)?);
        report.rhs_factor = Some(factor);
        report.rhs_zeta = Some(rhs_zeta);
    }
    if matches!(path, FunceqPath::Certified | FunceqPath::Both) {
        let kernel = RieszKernel::new(form)?.with_depth_bound(depth_bound);
        let factor = certified_factor(&kernel);
        let req = ZetaRequest::new(kernel.dual(), phi)
            .convention(Convention::Plain)
            .depth_bound(depth_bound);
        let dual_zeta = zeta(&req)?.value.invert_var();
        report.certified_equal = Some(report.lhs == factor.checked_mul(&dual_zeta)?);
        report.certified_factor = Some(factor);
        report.certified_zeta = Some(dual_zeta);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::riesz::default_grid;
    use crate::scalars::rat;
    use crate::schwartz::{lizorkin0, random_phi, shifted_box, unit_ball};

    #[test]
    fn operator_paths_and_stability() {
        let p = 3;
        let k = RieszKernel::four_dim(p).unwrap();
        let phi = lizorkin0(p, 4);
        let points = [PVector::zero(p, 4), PVector::unit(p, 4, 0), PVector::unit(p, 4, 3)];
        for alpha in [Exponent::Symbolic(1), Exponent::Numeric(1), Exponent::Numeric(2)] {
            let app = PseudoOp::new(k.clone(), alpha).apply_checked(&phi, &points).unwrap();
            assert!(app.in_phi);
            assert_eq!(app.pointwise_agrees, Some(true), "{alpha:?}");
        }
        // F[ϕ₀] at ξ = e₁/p gains |f°(ξ)|^α = p^α
        let op = PseudoOp::new(k.clone(), Exponent::Symbolic(1));
        let image_hat = op.apply(&phi).unwrap().fourier();
        let xi = PVector::new(p, vec![rat(1, 3), rat(0, 1), rat(0, 1), rat(0, 1)]).unwrap();
        let before = RationalFunctionT::constant(phi.fourier().eval(&xi).unwrap());
        let gain = RationalFunctionT::monomial(ExtScalar::one(p), -1);
        assert_eq!(image_hat.eval(&xi).unwrap(), before.checked_mul(&gain).unwrap());
    }

    #[test]
    fn fundamental_solutions() {
        let p = 3;
        let k = RieszKernel::four_dim(p).unwrap();
        for alpha in [Exponent::Numeric(1), Exponent::Symbolic(1), Exponent::Numeric(2)] {
            let sol = PseudoOp::new(k.clone(), alpha).fundamental_solve(&lizorkin0(p, 4)).unwrap();
            assert!(sol.round_trip && sol.multiplier_identity && sol.in_phi, "{alpha:?}");
            if alpha == Exponent::Numeric(2) {
                assert_eq!(sol.log_kernel_agrees, Some(true));
            }
        }
    }

    #[test]
    fn semigroup_on_grid() {
        let p = 3;
        let op = PseudoOp::new(RieszKernel::four_dim(p).unwrap(), Exponent::Numeric(1));
        let cases = op.semigroup(&random_phi(p, 4, 2), &default_grid()).unwrap();
        assert!(cases.iter().all(|c| c.2));
    }

    #[test]
    fn bernstein() {
        for p in [3u64, 5] {
            let k = RieszKernel::four_dim(p).unwrap();
            let r = bernstein_verify(&k, &lizorkin0(p, 4)).unwrap();
            assert!(r.equal && r.spot_check && r.kernel_identity, "p={p}");
        }
    }

    #[test]
    fn functional_equations() {
        for p in [3u64, 5] {
            let forms = [
                QuadraticForm::four_dim(p, crate::quadform::epsilon(p) as i64).unwrap(),
                QuadraticForm::binary(p, crate::quadform::epsilon(p) as i64).unwrap(),
                QuadraticForm::binary(p, p as i64).unwrap(),
                QuadraticForm::binary(p, (p * crate::quadform::epsilon(p)) as i64).unwrap(),
            ];
            for f in &forms {
                for phi in [unit_ball(p, f.dim()), shifted_box(p, f.dim())] {
                    let r = funceq_verify(f, &phi, FunceqPath::Both, 64).unwrap();
                    assert_eq!(r.certified_equal, Some(true), "certified p={p} {f:?}");
                    assert_eq!(r.equal, Some(true), "general p={p} {f:?}");
                }
            }
        }
    }
}
