use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalars::Rational;

/// Integer `c·a` with `c` a nonzero square and `ord_p ∈ {0, 1}`.
fn squarefree_integer(a: &Rational, p: u64) -> i128 {
    let n: BigInt = a.numer() * a.denom();
    let mut n = n.to_i128().expect("small coefficient");
    let p2 = (p * p) as i128;
    while n % p2 == 0 {
        n /= p2;
    }
    n
}

fn vord(x: i128, p: i128, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut k = 0;
    let mut x = x;
    while x % p == 0 && k < cap {
        x /= p;
        k += 1;
    }
    k
}

/// Decides `(a, b)_p` by searching for a primitive zero of `a x² + b y² − z²`
/// digit by digit, stopping once Hensel's lemma guarantees a lift
/// (`F ≡ 0 mod p^{2e+1}` with `e` the order of some partial derivative).
///
/// Returns `None` if neither outcome is certified by level `max_level`.
pub fn hilbert_oracle(a: &Rational, b: &Rational, p: u64, max_level: u32) -> Result<Option<i8>> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument("Hilbert symbol"));
    }
    let pa = squarefree_integer(a, p);
    let pb = squarefree_integer(b, p);
    let pi = p as i128;
    let form = |x: i128, y: i128, z: i128| pa * x * x + pb * y * y - z * z;
    let mut frontier: Vec<(i128, i128, i128)> = Vec::new();
    for x in 0..pi {
        for y in 0..pi {
            for z in 0..pi {
                if (x, y, z) != (0, 0, 0) && form(x, y, z).rem_euclid(pi) == 0 {
                    frontier.push((x, y, z));
                }
            }
        }
    }
    let mut modulus = pi;
    for level in 1..=max_level {
        if frontier.is_empty() {
            return Ok(Some(-1));
        }
        for &(x, y, z) in &frontier {
            let partials = [
                vord(pa, pi, level) + vord(x, pi, level),
                vord(pb, pi, level) + vord(y, pi, level),
                vord(z, pi, level),
            ];
            let e = partials.iter().copied().min().unwrap();
            if e < level && 2 * e < level {
                // F ≡ 0 mod p^level and level ≥ 2e + 1
                return Ok(Some(1));
            }
        }
        if level == max_level {
            break;
        }
        let next = modulus * pi;
        let mut grown = Vec::new();
        for &(x, y, z) in &frontier {
            for dx in 0..pi {
                for dy in 0..pi {
                    for dz in 0..pi {
                        let v = (x + dx * modulus, y + dy * modulus, z + dz * modulus);
                        if form(v.0, v.1, v.2).rem_euclid(next) == 0 {
                            grown.push(v);
                        }
                    }
                }
            }
        }
        frontier = grown;
        modulus = next;
    }
    Ok(None)
}
