use num_traits::ToPrimitive;

use super::{laurent_to_ratfun, profile, Convention, ZetaRequest};
use crate::error::{Error, Result};
use crate::padic::{ord, residue_mod, Ball, PVector};
use crate::quadform::{QuadraticForm, SquareClass};
use crate::scalars::{p_power, rat, ExtScalar, Rational, RationalFunctionT};
use crate::schwartz::{unit_ball, TestFunction};

/// `1_U` for `U = Π_j (pZ_p if pattern[j] else Z_p^×)`.
pub fn unit_box(p: u64, pattern: &[bool]) -> TestFunction<ExtScalar> {
    let n = pattern.len();
    let mut centers: Vec<Vec<Rational>> = vec![vec![]];
    for &in_pz in pattern {
        let digits: Vec<i64> = if in_pz { vec![0] } else { (1..p as i64).collect() };
        centers = centers
            .into_iter()
            .flat_map(|c| {
                digits.iter().map(move |d| {
                    let mut c = c.clone();
                    c.push(rat(*d, 1));
                    c
                })
            })
            .collect();
    }
    let terms = centers
        .into_iter()
        .map(|c| (Ball::new(PVector::new(p, c).unwrap(), -1), ExtScalar::one(p)))
        .collect();
    TestFunction::from_terms(p, n, terms, crate::DEFAULT_DEPTH_BOUND).unwrap()
}

#[derive(Debug, Clone)]
pub struct SphereBreakdown {
    /// `(pattern, ∫_{U^{(i)}} |f|^{s−n/2})`, patterns in lexicographic order
    /// with `true` meaning `pZ_p`; the all-`true` pattern is not part of the
    /// sphere and is omitted.
    pub rows: Vec<(Vec<bool>, RationalFunctionT)>,
    pub total: RationalFunctionT,
}

/// `∫_{‖x‖=1} |f(x)|^{s−n/2} dx`, split over the boxes `U^{(i)}`.
pub fn unit_sphere_integral(form: &QuadraticForm) -> Result<SphereBreakdown> {
    let p = form.prime();
    let n = form.dim();
    let mut rows = Vec::new();
    let mut total = RationalFunctionT::zero(p);
    for mask in 0..(1u32 << n) - 1 {
        let pattern: Vec<bool> = (0..n).rev().map(|j| mask >> j & 1 == 1).collect();
        let phi = unit_box(p, &pattern);
        let z = super::zeta(&ZetaRequest::new(form, &phi))?.value;
        total = total.checked_add(&z)?;
        rows.push((pattern, z));
    }
    Ok(SphereBreakdown { rows, total })
}

/// `∫_{‖x‖>1} |f(x)|^{−α−n/2} dx` as a rational function of `t = p^{−α}`.
///
/// The region is `⋃_{j≥1} p^{−j}S` with `S` the unit sphere; each layer
/// contributes `t^{2j}` times the sphere integral at `s = −α`.
pub fn tail_integral(form: &QuadraticForm) -> Result<RationalFunctionT> {
    let p = form.prime();
    let prof = profile(form, &unit_ball(p, form.dim()), crate::DEFAULT_DEPTH_BOUND)?;
    let sphere = prof.laurent(
        prof.shell.iter().map(|b| (b, ExtScalar::one(p))),
        SquareClass::One,
        Convention::Shifted,
    );
    let at_minus_alpha = laurent_to_ratfun(p, &sphere).invert_var();
    let one = ExtScalar::one(p);
    let layers = RationalFunctionT::from_parts(p, &[(2, one.clone())], &[(0, one.clone()), (2, -one)])?;
    at_minus_alpha.checked_mul(&layers)
}

/// Constants in `B‖x‖² ≤ |f(x)|_p ≤ A‖x‖²`, read off from `ord f` on the
/// unit sphere modulo `p^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllipticityBounds {
    pub min_order: i64,
    pub max_order: i64,
    pub lower: Rational,
    pub upper: Rational,
}

/// Enumerates `x mod p^k` with `‖x‖ = 1` and records the range of `ord f(x)`.
///
/// Fails with `Unsupported` if some residue has `ord f(x) ≥ k + shift`, where
/// the order is no longer determined (an isotropic vector may exist).
pub fn ellipticity_bounds(form: &QuadraticForm, k: u32) -> Result<EllipticityBounds> {
    let p = form.prime();
    let n = form.dim();
    let (integral, shift) = form.integral_rescaling();
    let modulus = (p as i128).pow(k);
    let coeffs: Vec<i128> = integral
        .coeffs()
        .iter()
        .map(|c| residue_mod(c, p, k).to_i128().unwrap())
        .collect();
    let total = (modulus as u128).pow(n as u32);
    if total > 50_000_000 {
        return Err(Error::Invalid(format!("p^({k}·{n}) residues is too many to enumerate")));
    }
    let (mut lo, mut hi) = (i64::MAX, i64::MIN);
    let mut x = vec![0i128; n];
    for flat in 0..total {
        let mut rest = flat;
        for slot in x.iter_mut() {
            *slot = (rest % modulus as u128) as i128;
            rest /= modulus as u128;
        }
        if x.iter().all(|v| v % p as i128 == 0) {
            continue;
        }
        let v = coeffs
            .iter()
            .zip(&x)
            .fold(0i128, |acc, (c, xi)| (acc + c * (xi * xi % modulus)) % modulus);
        if v == 0 {
            return Err(Error::Unsupported(format!(
                "ord f(x) ≥ {k} for a unit vector mod {p}^{k}: ellipticity not certified"
            )));
        }
        let o = ord(&Rational::from_integer(v.into()), p);
        lo = lo.min(o);
        hi = hi.max(o);
    }
    let (lo, hi) = (lo - shift, hi - shift);
    Ok(EllipticityBounds {
        min_order: lo,
        max_order: hi,
        lower: p_power(p, -hi),
        upper: p_power(p, -lo),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadform::epsilon;

    fn form(p: u64) -> QuadraticForm {
        QuadraticForm::four_dim(p, epsilon(p) as i64).unwrap()
    }

    #[test]
    fn sphere_total() {
        for p in [3u64, 5, 7] {
            let b = unit_sphere_integral(&form(p)).unwrap();
            assert_eq!(b.rows.len(), 15);
            let c = ExtScalar::from_rational(p, rat(1, 1) - p_power(p, -2));
            let expect = RationalFunctionT::from_laurent(p, &[(0, c.clone()), (1, c)]);
            assert_eq!(b.total, expect);
        }
    }

    #[test]
    fn tail_closed_form() {
        for p in [3u64, 5, 7] {
            let c = ExtScalar::from_rational(p, rat(1, 1) - p_power(p, -2));
            let one = ExtScalar::one(p);
            // t²(1 − p^{-2})(1 + t^{-1})/(1 − t²)
            let expect = RationalFunctionT::from_parts(
                p,
                &[(2, c.clone()), (1, c)],
                &[(0, one.clone()), (2, -one)],
            )
            .unwrap();
            assert_eq!(tail_integral(&form(p)).unwrap(), expect);
        }
    }

    #[test]
    fn ellipticity_constants() {
        for p in [3u64, 5, 7] {
            let b = ellipticity_bounds(&form(p), 2).unwrap();
            assert_eq!((b.min_order, b.max_order), (0, 1));
            assert_eq!(b.upper, rat(1, 1));
            assert_eq!(b.lower, rat(1, p as i64));
        }
        let iso = QuadraticForm::from_integers(5, &[1, 1]).unwrap();
        assert!(matches!(ellipticity_bounds(&iso, 2), Err(Error::Unsupported(_))));
    }
}
