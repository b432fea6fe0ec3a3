//! The invariant suites run by `congrkit selftest`.

use num_bigint::BigInt;
use num_traits::One;
use rand::Rng;
use serde::Serialize;

use congrkit_core::decompose::decompose_full;
use congrkit_core::kazhdan::{
    abelian_kazhdan_exact, spectral_bounds, AbelianGroup, SpectralOptions,
};
use congrkit_core::quotient::{
    elementary_generators, enumerate_group, verify_product_decomposition, CayleyGraph, GroupKind,
};
use congrkit_core::stable_range::{corner_gcd_witness, level_stabilize, stabilize_gcd};
use congrkit_core::{steinberg_check, CongruenceLevel, Error as CoreError};

use crate::random::{random_coprime_tuple, random_gamma_element, random_level_tuple, SeedStream};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub status: SuiteStatus,
    pub checks: usize,
    pub detail: String,
}

impl SuiteResult {
    fn from_checks(name: &'static str, checks: usize, failures: Vec<String>) -> Self {
        let status = if failures.is_empty() {
            SuiteStatus::Pass
        } else {
            SuiteStatus::Fail
        };
        let detail = match failures.first() {
            None => format!("{checks} checks passed"),
            Some(f) => format!("{} of {checks} checks failed; first: {f}", failures.len()),
        };
        Self {
            name,
            status,
            checks,
            detail,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SelftestConfig {
    pub seed: u64,
    pub cap: usize,
    pub spectral: SpectralOptions,
}

pub fn steinberg_suite(stream: &SeedStream, count: usize) -> SuiteResult {
    let mut rng = stream.rng("steinberg");
    let mut failures = Vec::new();
    for _ in 0..count {
        let n = rng.random_range(3..=6usize);
        let i = rng.random_range(1..=n);
        let k = loop {
            let k = rng.random_range(1..=n);
            if k != i {
                break k;
            }
        };
        let j = loop {
            let j = rng.random_range(1..=n);
            if j != i && j != k {
                break j;
            }
        };
        let s = crate::random::random_nonzero(1_000_000, &mut rng);
        let t = crate::random::random_nonzero(1_000_000, &mut rng);
        match steinberg_check(i, k, j, &s, &t) {
            Ok(true) => {}
            Ok(false) => failures.push(format!("[X_{i}{k}({s}), X_{k}{j}({t})]")),
            Err(e) => failures.push(e.to_string()),
        }
    }
    SuiteResult::from_checks("steinberg", count, failures)
}

pub fn coverage_suite(cap: usize) -> SuiteResult {
    match verify_product_decomposition(3, 2, cap) {
        Ok(r) => {
            let ok = r.coverage && r.lagrange_ok && r.product_size == 256 && r.quotient_size == 256;
            let failures = if ok {
                Vec::new()
            } else {
                vec![format!(
                    "|E·F| = {} of {} (|E| = {}, |F| = {})",
                    r.product_size, r.quotient_size, r.e_size, r.f_size
                )]
            };
            SuiteResult::from_checks("coverage", 1, failures)
        }
        Err(CoreError::CapExceeded { cap, reached }) => SuiteResult {
            name: "coverage",
            status: SuiteStatus::Skipped,
            checks: 0,
            detail: format!("skipped (cap {cap} exceeded at {reached} elements)"),
        },
        Err(e) => SuiteResult::from_checks("coverage", 1, vec![e.to_string()]),
    }
}

pub fn stable_range_suite(stream: &SeedStream, count: usize) -> SuiteResult {
    let mut rng = stream.rng("stable-range");
    let mut failures = Vec::new();
    for _ in 0..count {
        let n = rng.random_range(3..=7usize);
        let m = rng.random_range(2..=5u64);
        let level = CongruenceLevel::new(m).expect("m >= 1");
        let mb = BigInt::from(m);
        let a = random_coprime_tuple(n, 1_000_000, &mut rng);
        match stabilize_gcd(&a) {
            Ok(w) if w.verify() && w.evaluate().is_some_and(|g| g.is_one()) => {}
            Ok(_) => failures.push(format!("stabilize_gcd {a:?}")),
            Err(e) => failures.push(format!("stabilize_gcd {a:?}: {e}")),
        }
        let b = random_level_tuple(n, &mb, 1_000_000, &mut rng);
        match level_stabilize(level, &b) {
            Ok(w) if w.verify() && w.evaluate().is_some_and(|g| g.is_one()) => {}
            Ok(_) => failures.push(format!("level_stabilize m={m} {b:?}")),
            Err(e) => failures.push(format!("level_stabilize m={m} {b:?}: {e}")),
        }
        let c = random_level_tuple(n, &(&mb * &mb), 1_000_000, &mut rng);
        match corner_gcd_witness(level, &c) {
            Ok(w) => {
                let g = w.evaluate();
                let exact = g.as_ref().is_some_and(|g| {
                    (g % &mb) == BigInt::from(0) && (g % (&mb * &mb)) != BigInt::from(0)
                });
                if !(w.verify() && exact && g == Some(mb.clone())) {
                    failures.push(format!("corner_gcd_witness m={m} {c:?}"));
                }
            }
            Err(e) => failures.push(format!("corner_gcd_witness m={m} {c:?}: {e}")),
        }
    }
    SuiteResult::from_checks("stable-range", 3 * count, failures)
}

pub fn round_trip_suite(stream: &SeedStream, count: usize) -> SuiteResult {
    let mut rng = stream.rng("round-trip");
    let mut failures = Vec::new();
    let mut checks = 0;
    for n in 3..=4usize {
        for m in 2..=3u64 {
            let level = CongruenceLevel::new(m).expect("m >= 1");
            for _ in 0..count {
                checks += 1;
                let result = random_gamma_element(n, m, 40, &mut rng)
                    .and_then(|(_, a)| decompose_full(&a, level).map(|d| (a, d)));
                match result {
                    Ok((a, d)) if d.verify() && d.reconstruct() == a => {}
                    Ok(_) => failures.push(format!("n={n} m={m}: verification failed")),
                    Err(e) => failures.push(format!("n={n} m={m}: {e}")),
                }
            }
        }
    }
    SuiteResult::from_checks("round-trip", checks, failures)
}

/// Character-exact constants of small abelian groups against the spectral
/// lower bound, plus a Lanczos run on `SL_3(Z/3)` checked for its sandwich
/// and residual.
pub fn eigensolver_suite(cfg: &SelftestConfig) -> SuiteResult {
    let mut failures = Vec::new();
    let cases: Vec<(&str, AbelianGroup)> = vec![
        ("C3", AbelianGroup::cyclic(3, &[1]).expect("valid group")),
        ("C4", AbelianGroup::cyclic(4, &[1]).expect("valid group")),
        ("C6", AbelianGroup::cyclic(6, &[1]).expect("valid group")),
        (
            "C2xC2",
            AbelianGroup::new(vec![2, 2], &[vec![1, 0], vec![0, 1]]).expect("valid group"),
        ),
    ];
    for (name, g) in &cases {
        let exact = abelian_kazhdan_exact(g, cfg.cap);
        let spectral = g
            .cayley_graph(cfg.cap)
            .and_then(|c| spectral_bounds(&c, &cfg.spectral));
        match (exact, spectral) {
            (Ok(e), Ok(s)) if (e.lower - s.lower).abs() <= 1e-8 => {}
            (Ok(e), Ok(s)) => {
                failures.push(format!("{name}: exact {} vs spectral {}", e.lower, s.lower))
            }
            (Err(e), _) | (_, Err(e)) => failures.push(format!("{name}: {e}")),
        }
    }
    let sl = elementary_generators(3, 1)
        .and_then(|gens| enumerate_group(GroupKind::MatrixModQ { n: 3 }, &gens, 3, cfg.cap))
        .and_then(|g| spectral_bounds(&CayleyGraph::from_group(&g), &cfg.spectral));
    match sl {
        Ok(b) => {
            let resid = b.spectral.as_ref().map_or(f64::INFINITY, |s| s.residual);
            if !(b.lower > 0.0 && b.is_consistent() && resid <= cfg.spectral.tol) {
                failures.push(format!(
                    "SL3(Z/3): [{}, {}] residual {resid:e}",
                    b.lower, b.upper
                ));
            }
        }
        Err(CoreError::CapExceeded { .. }) => {}
        Err(e) => failures.push(format!("SL3(Z/3): {e}")),
    }
    SuiteResult::from_checks("eigensolver", cases.len() + 1, failures)
}

/// All suites in a fixed order.
pub fn run_selftest(cfg: &SelftestConfig) -> Vec<SuiteResult> {
    let stream = SeedStream::new(cfg.seed);
    vec![
        steinberg_suite(&stream, 1000),
        coverage_suite(cfg.cap),
        stable_range_suite(&stream, 200),
        round_trip_suite(&stream, 25),
        eigensolver_suite(cfg),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cap_skips_coverage() {
        assert_eq!(coverage_suite(10).status, SuiteStatus::Skipped);
        assert_eq!(coverage_suite(1_000_000).status, SuiteStatus::Pass);
    }

    #[test]
    fn suites_pass() {
        let stream = SeedStream::new(5);
        assert_eq!(steinberg_suite(&stream, 50).status, SuiteStatus::Pass);
        let r = stable_range_suite(&stream, 30);
        assert_eq!(r.status, SuiteStatus::Pass, "{}", r.detail);
        assert_eq!(round_trip_suite(&stream, 3).status, SuiteStatus::Pass);
    }
}
