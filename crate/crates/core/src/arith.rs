//! Integer helpers shared by the stable-range and decomposition code.

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Trial division stops at this bound; any cofactor left over has no prime
/// factor below it.
pub const TRIAL_DIVISION_LIMIT: u64 = 1 << 20;

const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];

/// Non-negative gcd of all values; the gcd of an empty list is zero.
pub fn gcd_all<'a, I>(values: I) -> BigInt
where
    I: IntoIterator<Item = &'a BigInt>,
{
    values.into_iter().fold(BigInt::zero(), |acc, v| acc.gcd(v))
}

/// Returns `(g, x, y)` with `g = gcd(a, b) >= 0` and `a*x + b*y = g`.
pub fn extended_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Inverse of `a` modulo `m`, if it exists. The result lies in `0..m`.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let (g, x, _) = extended_gcd(&a.mod_floor(m), m);
    g.is_one().then(|| x.mod_floor(m))
}

/// Remainder in the balanced range `(-m/2, m/2]`.
pub fn balanced_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let r = a.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Distinct prime divisors of `|n|` found by wheel trial division, plus the
/// leftover cofactor (1 when the factorisation is complete).
pub fn small_prime_divisors(n: &BigInt) -> (Vec<BigInt>, BigInt) {
    let mut rest = n.abs();
    let mut primes = Vec::new();
    if rest.is_zero() {
        return (primes, rest);
    }
    for p in [2u64, 3, 5] {
        strip(p, &mut rest, &mut primes);
    }
    let mut p = 7u64;
    let mut w = 0usize;
    while p <= TRIAL_DIVISION_LIMIT {
        if rest.is_one() {
            break;
        }
        let pp = BigInt::from(p) * p;
        if pp > rest {
            // whatever remains is prime
            primes.push(core::mem::replace(&mut rest, BigInt::one()));
            break;
        }
        strip(p, &mut rest, &mut primes);
        p += WHEEL[w];
        w = (w + 1) % WHEEL.len();
    }
    (primes, rest)
}

fn strip(p: u64, rest: &mut BigInt, primes: &mut Vec<BigInt>) {
    let bp = BigInt::from(p);
    if (&*rest % &bp).is_zero() {
        while (&*rest % &bp).is_zero() {
            *rest /= &bp;
        }
        primes.push(bp);
    }
}

/// Product of the primes `p | d` that divide none of `avoid`.
///
/// Small primes are found by trial division and contribute once each. A
/// cofactor that trial division could not split contributes its part coprime
/// to every `avoid` value, so the prime support of the result is always
/// exactly `{p | d : p ∤ a for all a in avoid}`. `d` must be nonzero.
pub fn coprime_prime_product(d: &BigInt, avoid: &[&BigInt]) -> BigInt {
    debug_assert!(!d.is_zero());
    let (primes, mut cofactor) = small_prime_divisors(d);
    let mut x = BigInt::one();
    for p in primes {
        if avoid.iter().all(|a| !(*a % &p).is_zero()) {
            x *= p;
        }
    }
    for a in avoid {
        loop {
            let g = cofactor.gcd(a);
            if g.is_one() {
                break;
            }
            cofactor /= g;
        }
    }
    x * cofactor
}

/// Deterministic primality test for word-sized integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut p = 7u64;
    let mut w = 0usize;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += WHEEL[w];
        w = (w + 1) % WHEEL.len();
    }
    true
}

/// Greatest common divisor of two machine integers.
pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// `a^{-1} mod m` for machine integers, when it exists.
pub fn mod_inverse_u64(a: u64, m: u64) -> Option<u64> {
    mod_inverse(&BigInt::from(a), &BigInt::from(m)).and_then(|v| v.to_u64())
}

/// Least non-negative residue of a big integer modulo `q > 0`.
pub fn residue_u64(a: &BigInt, q: u64) -> u64 {
    a.mod_floor(&BigInt::from(q))
        .to_u64()
        .expect("residue fits in u64")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn small_primes_of_composites() {
        let (p, rest) = small_prime_divisors(&b(360));
        assert_eq!(p, [b(2), b(3), b(5)]);
        assert!(rest.is_one());
        let (p, rest) = small_prime_divisors(&b(-7 * 7 * 1_000_003));
        assert_eq!(p, [b(7), b(1_000_003)]);
        assert!(rest.is_one());
    }

    #[test]
    fn coprime_product_matches_prime_set() {
        // d = 6: prime 2 divides the avoided 4, prime 3 does not
        assert_eq!(coprime_prime_product(&b(6), &[&b(1), &b(4)]), b(3));
        assert_eq!(coprime_prime_product(&b(1), &[&b(1), &b(1)]), b(1));
        // every prime divides zero
        assert_eq!(coprime_prime_product(&b(30), &[&b(0)]), b(1));
    }

    #[test]
    fn coprime_product_with_unsplit_cofactor() {
        // two primes above the trial-division limit
        let p = b(1_000_000_007);
        let q = b(998_244_353);
        let d = &p * &q * 4;
        let x = coprime_prime_product(&d, &[&q]);
        assert_eq!(x, p * 2);
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(
            primes,
            [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1_000_000_007 * 3));
    }

    #[test]
    fn inverses_and_balanced() {
        assert_eq!(mod_inverse(&b(3), &b(7)), Some(b(5)));
        assert_eq!(mod_inverse(&b(2), &b(4)), None);
        assert_eq!(balanced_mod(&b(5), &b(6)), b(-1));
        assert_eq!(balanced_mod(&b(3), &b(6)), b(3));
        let (g, x, y) = extended_gcd(&b(-12), &b(18));
        assert_eq!(g, b(6));
        assert_eq!(b(-12) * x + b(18) * y, b(6));
    }
}
