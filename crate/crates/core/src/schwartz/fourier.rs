use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::TestFunction;
use crate::padic::{canonical_coord, ord};
use crate::scalars::{p_power, Coeff, CyclotomicScalar, Rational};

/// `Fφ` for `φ = Σ c_a 1_{a+B_γ}`.
///
/// With `R ≥ γ` chosen so that every `a·p^R` is an integer `A`, the transform
/// is supported on `B_{-γ}`, constant on balls `B_{-R}`, and at `ξ = p^γ l`
/// equals `p^{γn} Σ_A c_A ζ_N^{-A·l}` with `N = p^{R−γ}`. The sum is a
/// separable n-dimensional DFT of length `N`.
pub(super) fn fourier<S: Coeff>(phi: &TestFunction<S>) -> TestFunction<S> {
    let p = phi.prime;
    let n = phi.dim;
    let gamma = phi.gamma;
    if phi.is_zero() {
        return TestFunction::from_raw(p, n, -gamma, BTreeMap::new());
    }
    let r = phi
        .terms
        .keys()
        .flatten()
        .filter(|a| !a.is_zero())
        .map(|a| -ord(a, p))
        .fold(gamma, i64::max);
    let level = (r - gamma) as u32;
    let len = (p as usize).pow(level);
    let size = len.pow(n as u32);
    let scale_r = p_power(p, r);

    let mut grid: Vec<S> = vec![S::zero(p); size];
    for (center, c) in &phi.terms {
        let mut idx = 0usize;
        for a in center {
            let big: Rational = a * &scale_r;
            debug_assert!(big.is_integer());
            let v: BigInt = big.to_integer();
            idx = idx * len + v.to_usize().expect("index fits") % len;
        }
        grid[idx] = c.clone();
    }

    // one axis at a time: out[..l..] = Σ_A in[..A..] ζ_N^{-A l}
    let mut stride = size;
    for _ in 0..n {
        let inner = stride / len;
        let mut out: Vec<S> = vec![S::zero(p); size];
        for outer in (0..size).step_by(stride) {
            for k in 0..inner {
                let base = outer + k;
                for a in 0..len {
                    let src = &grid[base + a * inner];
                    if src.is_zero() {
                        continue;
                    }
                    for l in 0..len {
                        let e = (len - (a * l) % len) % len;
                        let term = if e == 0 {
                            src.clone()
                        } else {
                            src.mul_root_of_unity(e as u64, level)
                        };
                        let slot = &mut out[base + l * inner];
                        *slot = slot.add(&term);
                    }
                }
            }
        }
        grid = out;
        stride = inner;
    }

    let vol = CyclotomicScalar::from_rational(p, p_power(p, gamma * n as i64));
    let step = p_power(p, gamma);
    let mut terms = BTreeMap::new();
    for (flat, c) in grid.into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut rest = flat;
        let mut key = vec![Rational::zero(); n];
        for slot in key.iter_mut().rev() {
            let l = rest % len;
            rest /= len;
            *slot = canonical_coord(&(&step * Rational::from_integer(l.into())), p, -r);
        }
        terms.insert(key, c.scale(&vol));
    }
    TestFunction::from_raw(p, n, -r, terms)
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use crate::padic::{Ball, PVector};
    use crate::scalars::{rat, ExtScalar};

    type Tf = TestFunction<ExtScalar>;

    #[test]
    fn unit_ball_is_self_dual() {
        for p in [3u64, 5] {
            let u = unit_ball(p, 2);
            assert_eq!(u.fourier(), u);
        }
    }

    #[test]
    fn small_ball_transform() {
        let p = 3;
        let f = Tf::indicator(&Ball::centered(p, 1, -2), ExtScalar::one(p));
        let g = f.fourier();
        let expect = Tf::indicator(&Ball::centered(p, 1, 2), ExtScalar::from_rational(p, rat(1, 9)));
        assert_eq!(g, expect);
    }

    #[test]
    fn shifted_ball_phase() {
        let p = 5;
        let a = PVector::new(p, vec![rat(1, 5)]).unwrap();
        let f = Tf::indicator(&Ball::new(a, 0), ExtScalar::one(p));
        let g = f.fourier();
        // F(ξ) = χ(−ξ/5) on Z_5
        for l in 0..5 {
            let xi = PVector::new(p, vec![rat(l, 1)]).unwrap();
            let want = ExtScalar::from(crate::padic::char_value(&rat(-l, 5), p));
            assert_eq!(g.eval(&xi).unwrap(), want);
        }
    }

    #[test]
    fn inversion() {
        let p = 3;
        for phi in [lizorkin0(p, 2), shifted_box(p, 2), random_phi(p, 2, 7), random_psi(p, 3, 11)] {
            assert_eq!(phi.fourier().inverse_fourier(), phi);
            assert_eq!(phi.fourier().fourier(), phi.reflect());
        }
    }
}
