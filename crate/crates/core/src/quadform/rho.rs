use num_complex::Complex64;

use super::rho_signs::RHO_SIGNS;
use super::{hilbert_class, legendre, SquareClass};
use crate::error::{Error, Result};
use crate::scalars::{p_power, ExtScalar, Rational, RationalFunctionT};

/// Stored sign `±1` with `ρ(π_η, s) = ±σ_p p^{s−1/2}` for ramified `η`.
pub fn rho_sign(class: SquareClass, p: u64) -> Result<i8> {
    let row = RHO_SIGNS
        .iter()
        .find(|(q, _, _)| *q == p)
        .ok_or(Error::RhoSignUnresolved(p))?;
    match class {
        SquareClass::P => Ok(row.1),
        SquareClass::EpsP => Ok(row.2),
        _ => Err(Error::Invalid(format!("class {class} is unramified"))),
    }
}

/// `ρ(π_β, s)` as a rational function of `t = p^{-s}`.
pub fn rho_factor(class: SquareClass, p: u64) -> Result<RationalFunctionT> {
    let q = |x: Rational| ExtScalar::from_rational(p, x);
    let one = ExtScalar::one(p);
    let inv_p = q(p_power(p, -1));
    match class {
        SquareClass::One => RationalFunctionT::from_parts(
            p,
            &[(0, one.clone()), (-1, -&inv_p)],
            &[(0, one.clone()), (1, -&one)],
        ),
        SquareClass::Eps => RationalFunctionT::from_parts(
            p,
            &[(0, one.clone()), (-1, inv_p)],
            &[(0, one.clone()), (1, one)],
        ),
        SquareClass::P | SquareClass::EpsP => {
            let sign = ExtScalar::from_integer(p, rho_sign(class, p)?.into());
            // p^{s−1/2} = p^{−1/2}·t^{−1}
            let c = &(&sign * &ExtScalar::sigma(p)) * &ExtScalar::p_half_power(p, -1);
            Ok(RationalFunctionT::monomial(c, -1))
        }
    }
}

/// Numeric `ρ(π_β, s)` from the Tate relation
/// `∫ φ̂(t) π_β(t)|t|^{s−1} dt = ρ ∫ φ(t) π_β(t)|t|^{−s} dt` with `φ = 1_{1+pZ_p}`.
///
/// Both integrals are Riemann sums over cells of `p^{-2}Z_p` of radius
/// `p^{2−depth}`; `φ̂` is itself a character sum over `1 + pZ_p mod p^2`.
pub fn rho_oracle(class: SquareClass, p: u64, s: f64, depth: u32) -> Result<Complex64> {
    const R: u32 = 2;
    if depth <= R {
        return Err(Error::Invalid(format!("oracle depth must exceed {R}")));
    }
    let residues: Vec<i8> = (0..p)
        .map(|u| if u == 0 { 0 } else { legendre(u as i64, p).unwrap() })
        .collect();
    // π_β on the four classes, indexed by (odd order, non-residue unit)
    let chi: Vec<f64> = [SquareClass::One, SquareClass::Eps, SquareClass::P, SquareClass::EpsP]
        .iter()
        .map(|&c| hilbert_class(class, c, p) as f64)
        .collect();
    // π_β(j p^{-shift}) and the order of j p^{-shift}
    let pi = |j: u64, shift: i64| -> (f64, i64) {
        let (mut u, mut k) = (j, 0i64);
        while u % p == 0 {
            u /= p;
            k += 1;
        }
        let order = k - shift;
        let odd = order.rem_euclid(2) as usize;
        let nonres = usize::from(residues[(u % p) as usize] == -1);
        (chi[2 * odd + nonres], order)
    };
    let tau = std::f64::consts::TAU;
    let pr = p.pow(R);
    // φ̂(j p^{-R}) = Σ_{k mod p^{R-1}} p^{-R} χ(−j p^{-R}(1 + p k))
    let fourier: Vec<Complex64> = (0..pr)
        .map(|j| {
            (0..p.pow(R - 1))
                .map(|k| {
                    let num = (j * (1 + p * k)) % pr;
                    Complex64::from_polar(1.0, -tau * num as f64 / pr as f64)
                })
                .sum::<Complex64>()
                / pr as f64
        })
        .collect();
    let cells = p.pow(depth);
    let cell_vol = (p as f64).powi(R as i32 - depth as i32);
    // |t|^{s−1} for each order −R..depth
    let weight: Vec<f64> = (-(R as i64)..=depth as i64)
        .map(|o| (p as f64).powf(-(o as f64) * (s - 1.0)))
        .collect();
    let mut lhs = Complex64::new(0.0, 0.0);
    for j in 1..cells {
        let f = fourier[(j % pr) as usize];
        if f.norm_sqr() < 1e-24 {
            continue;
        }
        let (chi, order) = pi(j, R as i64);
        lhs += f * (chi * weight[(order + R as i64) as usize] * cell_vol);
    }
    let mut rhs = 0.0;
    let unit_cells = p.pow(depth - 1);
    for k in 0..unit_cells {
        rhs += pi(1 + p * k, 0).0 * (p as f64).powi(-(depth as i32));
    }
    Ok(lhs / rhs)
}

/// Sign `±1` matching `rho_oracle ≈ ±σ_p p^{s−1/2}` at `s = 3/4`.
pub fn rho_sign_oracle(class: SquareClass, p: u64, depth: u32) -> Result<i8> {
    if class.is_unit() {
        return Err(Error::Invalid(format!("class {class} is unramified")));
    }
    let s = 0.75;
    let rho = rho_oracle(class, p, s, depth)?;
    let unit = ExtScalar::sigma(p).to_complex() * (p as f64).powf(s - 0.5);
    let ratio = rho / unit;
    if (ratio.norm() - 1.0).abs() > 1e-6 {
        return Err(Error::RhoSignUnresolved(p));
    }
    Ok(if ratio.re > 0.0 { 1 } else { -1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;

    #[test]
    fn unramified_formulas() {
        let p = 5;
        let r1 = rho_factor(SquareClass::One, p).unwrap();
        // at s = 2: (1 − p)/(1 − p^{-2})
        let t = ExtScalar::from_rational(p, rat(1, 25));
        assert_eq!(r1.eval(&t).unwrap(), ExtScalar::from_rational(p, rat(-4, 1) / rat(24, 25)));
        let re = rho_factor(SquareClass::Eps, p).unwrap();
        assert_eq!(re.eval(&t).unwrap(), ExtScalar::from_rational(p, rat(6, 1) / rat(26, 25)));
    }

    #[test]
    fn unramified_oracle() {
        for p in [3u64, 5] {
            for class in [SquareClass::One, SquareClass::Eps] {
                let s = 0.75;
                let t = (p as f64).powf(-s);
                let exact = rho_factor(class, p)
                    .unwrap()
                    .eval_complex(Complex64::new(t, 0.0))
                    .unwrap();
                let got = rho_oracle(class, p, s, 7).unwrap();
                // truncation near 0 is not exact for the unramified characters
                assert!((got - exact).norm() < 0.05, "p={p} {class}: {got} vs {exact}");
            }
        }
    }

    #[test]
    fn ramified_signs_match_table() {
        for p in [3u64, 5, 7] {
            for class in [SquareClass::P, SquareClass::EpsP] {
                for depth in [3, 4, 5] {
                    assert_eq!(rho_sign_oracle(class, p, depth).unwrap(), rho_sign(class, p).unwrap());
                }
            }
        }
    }

    #[test]
    fn unknown_prime() {
        assert_eq!(rho_factor(SquareClass::P, 101), Err(Error::RhoSignUnresolved(101)));
    }
}
