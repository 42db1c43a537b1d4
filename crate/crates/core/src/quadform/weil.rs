use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::{square_class, QuadraticForm, SquareClass};
use crate::error::{Error, Result};
use crate::padic::{ord, residue_mod, unit_part};
use crate::scalars::{ExtScalar, Rational};

/// Weil constant of `x ↦ α x²` on a square class.
pub fn weil_gamma_class(class: SquareClass, p: u64) -> ExtScalar {
    match class {
        SquareClass::One | SquareClass::Eps => ExtScalar::one(p),
        SquareClass::P => ExtScalar::sigma(p),
        SquareClass::EpsP => -ExtScalar::sigma(p),
    }
}

/// `γ(α x²)`: `1` on unit classes, `(u₀/p)·σ_p` for `α = u p^{odd}`.
pub fn weil_gamma(alpha: &Rational, p: u64) -> Result<ExtScalar> {
    Ok(weil_gamma_class(square_class(alpha, p)?, p))
}

/// `γ(f) = Π_i γ(a_i x_i²)`.
pub fn weil_gamma_form(f: &QuadraticForm) -> Result<ExtScalar> {
    let p = f.prime();
    f.coeffs()
        .iter()
        .try_fold(ExtScalar::one(p), |acc, a| Ok(&acc * &weil_gamma(a, p)?))
}

/// Float evaluation of `γ(α x²)` from the normalized Gauss sum
/// `p^{-N/2} Σ_{x mod p^N} exp(2πi u x²/p^N)` with `N ≡ ord α (mod 2)`.
///
/// `depth` is the smallest modulus exponent tried; it is raised by one when
/// needed to match the parity of `ord α`.
pub fn weil_gamma_oracle(alpha: &Rational, p: u64, depth: u32) -> Result<Complex64> {
    if alpha.is_zero() {
        return Err(Error::ZeroArgument("Weil constant"));
    }
    let depth = depth.max(1);
    let odd = ord(alpha, p).rem_euclid(2) as u32;
    let n = if depth % 2 == odd { depth } else { depth + 1 };
    let modulus = p.pow(n);
    let u = residue_mod(&unit_part(alpha, p), p, n).to_u64().unwrap();
    let mut sum = Complex64::new(0.0, 0.0);
    for x in 0..modulus as u128 {
        let k = (u as u128 * x % modulus as u128) * x % modulus as u128;
        let theta = std::f64::consts::TAU * k as f64 / modulus as f64;
        sum += Complex64::from_polar(1.0, theta);
    }
    Ok(sum / (modulus as f64).sqrt())
}
