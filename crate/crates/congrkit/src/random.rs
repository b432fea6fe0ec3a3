//! Seeded random inputs. Every stream is derived from one master seed and a
//! label, so adding a stream never shifts the values of another.

use congrkit_core::word::{random_word, sigma_symbols};
use congrkit_core::{IntMatrix, Result, Word};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Splittable source of independent ChaCha streams.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeedStream {
    seed: u64,
}

impl SeedStream {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The generator for `label`: ChaCha8 keyed by `SHA-256(seed || label)`.
    pub fn rng(&self, label: &str) -> ChaCha8Rng {
        let mut h = Sha256::new();
        h.update(self.seed.to_le_bytes());
        h.update(label.as_bytes());
        ChaCha8Rng::from_seed(h.finalize().into())
    }
}

/// A random element of `Γ_n(level)` as a word over `Σ_n(level)` of length
/// uniform in `0..=max_len`, with its product.
pub fn random_gamma_element<R: Rng>(
    n: usize,
    level: u64,
    max_len: usize,
    rng: &mut R,
) -> Result<(Word, IntMatrix)> {
    let alphabet = sigma_symbols(n, level)?;
    let len = rng.random_range(0..=max_len);
    let w = random_word(n, &alphabet, len, rng)?;
    let a = w.eval();
    Ok((w, a))
}

/// A nonzero integer with `|v| <= bound`.
pub fn random_nonzero<R: Rng>(bound: i64, rng: &mut R) -> BigInt {
    let v = rng.random_range(1..=bound);
    BigInt::from(if rng.random_bool(0.5) { v } else { -v })
}

fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    if a < BigInt::zero() {
        -a
    } else {
        a
    }
}

/// Nonzero entries with `|a_i| <= bound` whose gcd is 1.
pub fn random_coprime_tuple<R: Rng>(n: usize, bound: i64, rng: &mut R) -> Vec<BigInt> {
    loop {
        let a: Vec<BigInt> = (0..n).map(|_| random_nonzero(bound, rng)).collect();
        let g = a.iter().fold(BigInt::zero(), |g, v| gcd(&g, v));
        if g.is_one() {
            return a;
        }
    }
}

/// Nonzero `a` with `gcd(s a_1, ..., s a_{n-1}, s a_n + 1) = 1`, the last column
/// of an element of `Γ_n(s)` read as `s a` plus the identity column.
pub fn random_level_tuple<R: Rng>(n: usize, s: &BigInt, bound: i64, rng: &mut R) -> Vec<BigInt> {
    loop {
        let a: Vec<BigInt> = (0..n).map(|_| random_nonzero(bound, rng)).collect();
        let mut g = s * &a[n - 1] + 1u32;
        for v in &a[..n - 1] {
            g = gcd(&g, &(s * v));
        }
        if g.is_one() {
            return a;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_independent_and_reproducible() {
        let s = SeedStream::new(42);
        let a: u64 = s.rng("a").random();
        let b: u64 = s.rng("b").random();
        assert_ne!(a, b);
        assert_eq!(a, SeedStream::new(42).rng("a").random::<u64>());
        assert_ne!(a, SeedStream::new(43).rng("a").random::<u64>());
    }

    #[test]
    fn random_elements_are_in_gamma() {
        let mut rng = SeedStream::new(1).rng("gamma");
        for _ in 0..20 {
            let (w, a) = random_gamma_element(4, 3, 40, &mut rng).unwrap();
            assert!(w.len() <= 40);
            assert!(a.determinant().is_one());
            assert!(a.congruent_to_identity(&BigInt::from(3)));
        }
    }
}
