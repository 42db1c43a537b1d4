use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::TestFunction;
use crate::error::{Error, Result};
use crate::padic::{Ball, PVector};
use crate::scalars::{p_power, rat, ExtScalar, Rational};

pub const BUILTINS: [&str; 3] = ["unit_ball", "lizorkin0", "shifted_box"];

type Tf = TestFunction<ExtScalar>;

/// `1_{Z_p^n}`.
pub fn unit_ball(p: u64, n: usize) -> Tf {
    Tf::indicator(&Ball::centered(p, n, 0), ExtScalar::one(p))
}

/// `1_{pZ_p^n} − p^{-n} 1_{Z_p^n}`, which has zero integral.
pub fn lizorkin0(p: u64, n: usize) -> Tf {
    let inner = Tf::indicator(&Ball::centered(p, n, -1), ExtScalar::one(p));
    let outer = unit_ball(p, n).scale_rational(&-p_power(p, -(n as i64)));
    inner.checked_add(&outer).unwrap()
}

/// `1_{e₁ + pZ_p^n}`.
pub fn shifted_box(p: u64, n: usize) -> Tf {
    Tf::indicator(&Ball::new(PVector::unit(p, n, 0), -1), ExtScalar::one(p))
}

pub fn builtin(name: &str, p: u64, n: usize) -> Result<Tf> {
    match name {
        "unit_ball" => Ok(unit_ball(p, n)),
        "lizorkin0" => Ok(lizorkin0(p, n)),
        "shifted_box" => Ok(shifted_box(p, n)),
        _ => Err(Error::Invalid(format!("unknown builtin test function {name:?}"))),
    }
}

fn random_cell(rng: &mut ChaCha8Rng, p: u64, n: usize) -> Ball {
    let coords = (0..n).map(|_| rat(rng.gen_range(0..p as i64), 1)).collect();
    Ball::new(PVector::new(p, coords).unwrap(), -1)
}

fn random_sum(rng: &mut ChaCha8Rng, p: u64, n: usize) -> Tf {
    loop {
        let count = rng.gen_range(1..=4);
        let mut f = Tf::zero(p, n);
        for _ in 0..count {
            let mut c = 0;
            while c == 0 {
                c = rng.gen_range(-3..=3);
            }
            let piece = Tf::indicator(&random_cell(rng, p, n), ExtScalar::from_integer(p, c));
            f = f.checked_add(&piece).unwrap();
        }
        if !f.is_zero() {
            return f;
        }
    }
}

/// Seeded sparse member of `Φ` (zero integral) supported in `Z_p^n` with
/// balls of radius `1/p`.
pub fn random_phi(p: u64, n: usize, seed: u64) -> Tf {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5048_4931);
    loop {
        let f = random_sum(&mut rng, p, n);
        let mass: Rational = f.integral().as_rational().cloned().expect("rational coefficients");
        // cancel the mass on one cell of volume p^{-n}
        let fix = Tf::indicator(&random_cell(&mut rng, p, n), ExtScalar::one(p))
            .scale_rational(&-(mass * p_power(p, n as i64)));
        let g = f.checked_add(&fix).unwrap();
        if !g.is_zero() {
            return g;
        }
    }
}

/// Seeded sparse member of `Ψ` (vanishing at the origin).
pub fn random_psi(p: u64, n: usize, seed: u64) -> Tf {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5053_4931);
    loop {
        let f = random_sum(&mut rng, p, n);
        let at0 = f.value_at_origin();
        let g = f
            .checked_sub(&Tf::indicator(&Ball::centered(p, n, -1), at0))
            .unwrap();
        if !g.is_zero() {
            return g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::Lizorkin;
    use super::*;

    #[test]
    fn builtins_and_membership() {
        for p in [3u64, 5] {
            assert!(lizorkin0(p, 4).lizorkin_check(Lizorkin::Phi));
            assert!(shifted_box(p, 4).lizorkin_check(Lizorkin::Psi));
            assert!(builtin("nope", p, 4).is_err());
            for seed in 0..10 {
                let phi = random_phi(p, 4, seed);
                assert!(phi.lizorkin_check(Lizorkin::Phi) && !phi.is_zero());
                assert!(random_psi(p, 4, seed).lizorkin_check(Lizorkin::Psi));
            }
        }
        assert_eq!(random_phi(5, 4, 3), random_phi(5, 4, 3));
    }
}
