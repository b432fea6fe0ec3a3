use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{abelian_cap, abelian_kazhdan_exact, AbelianGroup};
use crate::arith::is_prime_u64;
use crate::{Error, Result};

/// The least prime whose cap `2π/(p^{1/k} − 1)` falls below a target.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimeSearch {
    pub eps: f64,
    pub k: usize,
    pub p: u64,
    pub curve_at_p: f64,
    /// The largest prime below `p`, whose cap is still `>= eps`.
    pub previous: Option<u64>,
    pub curve_at_previous: Option<f64>,
}

fn curve(p: u64, k: usize) -> f64 {
    abelian_cap(p as f64, k).unwrap_or(f64::INFINITY)
}

fn next_prime(mut n: u64) -> u64 {
    while !is_prime_u64(n) {
        n += 1;
    }
    n
}

fn previous_prime(n: u64) -> Option<u64> {
    (2..n).rev().find(|&x| is_prime_u64(x))
}

/// Finds the least prime `p` with `2π/(p^{1/k} − 1) < eps`.
pub fn minimal_prime_for(eps: f64, k: usize) -> Result<PrimeSearch> {
    if !(eps > 0.0) || k == 0 {
        return Err(Error::InvalidParameter("need eps > 0 and k >= 1".into()));
    }
    let threshold = libm::pow(1.0 + 2.0 * core::f64::consts::PI / eps, k as f64);
    if !(threshold < 1e18) {
        return Err(Error::InvalidParameter(
            "target prime exceeds u64 search range".into(),
        ));
    }
    // the curve is decreasing; start just below the real threshold
    let mut n = (threshold as u64).saturating_sub(2).max(2);
    while n > 2 && curve(n, k) < eps {
        n -= 1;
    }
    while curve(n, k) >= eps {
        n += 1;
    }
    let p = next_prime(n);
    let previous = previous_prime(p);
    Ok(PrimeSearch {
        eps,
        k,
        p,
        curve_at_p: curve(p, k),
        previous,
        curve_at_previous: previous.map(|q| curve(q, k)),
    })
}

/// One random generating set of `C_p` and its exact Kazhdan constant.
#[derive(Clone, Debug, PartialEq)]
pub struct DemoSample {
    pub generators: Vec<u64>,
    pub kappa: f64,
}

/// `κ(C_p, S)` for random `k`-element sets `S`, against the cap.
#[derive(Clone, Debug, PartialEq)]
pub struct NonuniformReport {
    pub p: u64,
    pub k: usize,
    pub seed: u64,
    pub curve: f64,
    pub samples: Vec<DemoSample>,
    pub all_below: bool,
}

/// Computes the exact constant of `C_p` for `samples` random sets of `k`
/// nonzero generators drawn from a seeded generator.
pub fn nonuniform_demo(
    p: u64,
    k: usize,
    seed: u64,
    samples: usize,
    cap: usize,
) -> Result<NonuniformReport> {
    if !is_prime_u64(p) || k == 0 {
        return Err(Error::InvalidParameter("need a prime p and k >= 1".into()));
    }
    let curve = curve(p, k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        let generators: Vec<u64> = (0..k).map(|_| rng.random_range(1..p)).collect();
        let gens: Vec<i64> = generators.iter().map(|&g| g as i64).collect();
        let group = AbelianGroup::cyclic(p, &gens)?;
        let kappa = abelian_kazhdan_exact(&group, cap)?.upper;
        out.push(DemoSample { generators, kappa });
    }
    let all_below = out.iter().all(|s| s.kappa <= curve);
    Ok(NonuniformReport {
        p,
        k,
        seed,
        curve,
        samples: out,
        all_below,
    })
}
