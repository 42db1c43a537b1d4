use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::{Convention, ZetaRequest};
use crate::error::Result;
use crate::padic::{ord, Ball};
use crate::quadform::{hilbert_class, square_class, QuadraticForm, SquareClass};
use crate::scalars::ExtScalar;
use crate::schwartz::TestFunction;

/// Walks `ball` down to `depth` levels, calling `visit(order, class, volume)`
/// on every cell where `f` has constant order. Cells containing the origin
/// at the last level are dropped; other undecided cells are evaluated at
/// their center.
///
/// The constancy test is the coarse bound `ord(f(a+h) − f(a)) ≥
/// min ord(c) + min(ord a, −γ) − γ`, independent of the per-coordinate
/// certificate used by the exact engine.
fn walk(form: &QuadraticForm, ball: &Ball, depth: u32, visit: &mut dyn FnMut(i64, SquareClass, f64)) -> Result<()> {
    let p = form.prime();
    let min_c = form.coeffs().iter().map(|c| ord(c, p)).min().unwrap();
    let mut stack = vec![(ball.clone(), 0u32)];
    while let Some((cell, level)) = stack.pop() {
        let center = cell.center().coords();
        let value = form.eval(center);
        let vol = cell.volume().to_f64().unwrap();
        if value.is_zero() {
            if level < depth {
                stack.extend(cell.children().into_iter().map(|c| (c, level + 1)));
            }
            continue;
        }
        let order = ord(&value, p);
        let min_a = center.iter().filter(|a| !a.is_zero()).map(|a| ord(a, p)).min().unwrap_or(i64::MAX);
        let gamma = cell.gamma();
        let threshold = min_c + min_a.min(-gamma) - gamma;
        if order < threshold || level >= depth {
            visit(order, square_class(&value, p)?, vol);
        } else {
            stack.extend(cell.children().into_iter().map(|c| (c, level + 1)));
        }
    }
    Ok(())
}

/// Float Riemann sum for `∫ π_β(f) |f|^{e(s)} φ`, `e(s) = s` or `s − n/2`.
pub fn zeta_oracle_float(req: &ZetaRequest<'_>, s: Complex64, depth: u32) -> Result<Complex64> {
    let p = req.form.prime();
    let n = req.form.dim() as f64;
    let exponent = match req.convention {
        Convention::Plain => s,
        Convention::Shifted => s - n / 2.0,
    };
    let ln_p = (p as f64).ln();
    let mut total = Complex64::zero();
    for (ball, c) in req.phi.terms() {
        let coeff = c.to_complex();
        let mut acc = Complex64::zero();
        walk(req.form, &ball, depth, &mut |order, class, vol| {
            let sign = hilbert_class(req.beta, class, p) as f64;
            acc += (-(order as f64) * ln_p * exponent).exp() * sign * vol;
        })?;
        total += coeff * acc;
    }
    Ok(total)
}

/// Float Riemann sum for `∫ ord(f(x)) φ(x) dx`.
pub fn ord_moment_oracle(form: &QuadraticForm, phi: &TestFunction<ExtScalar>, depth: u32) -> Result<Complex64> {
    let mut total = Complex64::zero();
    for (ball, c) in phi.terms() {
        let mut acc = 0.0;
        walk(form, &ball, depth, &mut |order, _, vol| acc += order as f64 * vol)?;
        total += c.to_complex() * acc;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::super::zeta;
    use super::*;
    use crate::schwartz::{random_psi, shifted_box, unit_ball};

    #[test]
    fn matches_certified_unit_ball() {
        let p = 3;
        let f = QuadraticForm::four_dim(p, 2).unwrap();
        let phi = unit_ball(p, 4);
        let req = ZetaRequest::new(&f, &phi);
        let exact = zeta(&req).unwrap().value;
        let s = 3.0;
        let t = (p as f64).powf(-s);
        let want = exact.eval_complex(Complex64::new(t, 0.0)).unwrap();
        let got = zeta_oracle_float(&req, Complex64::new(s, 0.0), 6).unwrap();
        assert!((got - want).norm() < 1e-5, "{got} vs {want}");
    }

    #[test]
    fn twisted_and_moment() {
        let p = 5;
        let f = QuadraticForm::four_dim(p, 2).unwrap();
        for phi in [shifted_box(p, 4), random_psi(p, 4, 2)] {
            for beta in SquareClass::ALL {
                let req = ZetaRequest::new(&f, &phi).beta(beta);
                let exact = zeta(&req).unwrap().value;
                let s = 2.7;
                let want = exact.eval_complex(Complex64::new((p as f64).powf(-s), 0.0)).unwrap();
                let got = zeta_oracle_float(&req, Complex64::new(s, 0.0), 5).unwrap();
                assert!((got - want).norm() < 1e-6, "{beta}: {got} vs {want}");
            }
        }
        let m = ord_moment_oracle(&f, &unit_ball(p, 4), 6).unwrap();
        assert!((m.re - 1.0 / 24.0).abs() < 1e-6);
    }
}
