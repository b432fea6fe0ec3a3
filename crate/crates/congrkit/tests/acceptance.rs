//! Acceptance suite. Each criterion prints one PASS or FAIL line; the process
//! exits nonzero when any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use congrkit::formats::{sha256_hex, Certificate};
use congrkit::random::{
    random_coprime_tuple, random_gamma_element, random_level_tuple, SeedStream,
};
use congrkit::scan::{run_scan, ScanConfig};
use congrkit_core::decompose::{corner_reduce, decompose_full, word_budget};
use congrkit_core::kazhdan::{
    abelian_cap, abelian_kazhdan_exact, abelian_kazhdan_report, eps_m, minimal_prime_for,
    relative_spectral_bound, spectral_bounds, AbelianGroup, SpectralOptions,
};
use congrkit_core::quotient::{
    abelian_quotient, build_semidirect, elementary_generators, enumerate_group,
    sigma_abelian_images, verify_product_decomposition, CayleyGraph, GroupKind, DEFAULT_CAP,
};
use congrkit_core::stable_range::{corner_gcd_witness, level_stabilize, stabilize_gcd};
use congrkit_core::{CongruenceLevel, IntMatrix};

const SEED: u64 = 20_240_601;

/// Outcome of one criterion. `detail` must be a deterministic function of
/// the seed.
struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(failures: &[String], summary: String) -> Verdict {
    match failures.first() {
        None => Verdict {
            ok: true,
            detail: summary,
        },
        Some(f) => Verdict {
            ok: false,
            detail: format!("{summary}; {} failures, first: {f}", failures.len()),
        },
    }
}

fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

fn gcd_list(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| gcd(&g, x))
}

// Plain row-major multiplication, independent of the library matrix type.
fn mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(BigInt::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

fn elem(n: usize, i: usize, j: usize, t: &BigInt) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|r| (0..n).map(|c| BigInt::from(u8::from(r == c))).collect())
        .collect();
    m[i - 1][j - 1] = t.clone();
    m
}

fn rows(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..a.dim()).map(|i| a.row(i).to_vec()).collect()
}

fn c1_round_trip() -> Verdict {
    let stream = SeedStream::new(SEED);
    let mut failures = Vec::new();
    let mut transcript = String::new();
    let mut longest = [0usize; 6];
    for n in 3..=5usize {
        for m in 2..=3u64 {
            let level = CongruenceLevel::new(m).unwrap();
            let mb = BigInt::from(m);
            let mut rng = stream.rng(&format!("c1-{n}-{m}"));
            for k in 0..200 {
                let (_, a) = random_gamma_element(n, m, 40, &mut rng).unwrap();
                let d = match decompose_full(&a, level) {
                    Ok(d) => d,
                    Err(e) => {
                        failures.push(format!("n={n} m={m} #{k}: {e}"));
                        continue;
                    }
                };
                let r = &d.residual;
                let mut product = rows(&d.word.eval());
                let mut big = rows(&IntMatrix::identity(n));
                for (i, row) in big.iter_mut().take(2).enumerate() {
                    row[..2].clone_from_slice(r.row(i));
                }
                product = mul(&product, &big);
                let residual_ok = r.dim() == 2
                    && r.determinant().is_one()
                    && r.entries().iter().enumerate().all(|(idx, v)| {
                        let diag = idx == 0 || idx == 3;
                        (v - BigInt::from(u8::from(diag))).is_multiple_of(&mb)
                    });
                if product != rows(&a) {
                    failures.push(format!("n={n} m={m} #{k}: reconstruction differs"));
                }
                if !residual_ok {
                    failures.push(format!("n={n} m={m} #{k}: residual outside Γ_2({m})"));
                }
                if d.word.len() > word_budget(n) || d.relaxed {
                    failures.push(format!("n={n} m={m} #{k}: length {}", d.word.len()));
                }
                let slot = (n - 3) * 2 + (m as usize - 2);
                longest[slot] = longest[slot].max(d.word.len());
                transcript.push_str(&Certificate::from_decomposition(&d).to_text());
            }
        }
    }
    let summary = format!(
        "1200 elements, budgets 15/40/77, longest words {:?}, certificates sha256 {}",
        longest,
        &sha256_hex(&transcript)[..16]
    );
    verdict(&failures, summary)
}

fn c2_corner_budget() -> Verdict {
    let stream = SeedStream::new(SEED);
    let mut failures = Vec::new();
    let mut longest = 0usize;
    for n in 3..=5usize {
        for m in 2..=3u64 {
            let level = CongruenceLevel::new(m).unwrap();
            let mb = BigInt::from(m);
            let mut rng = stream.rng(&format!("c2-{n}-{m}"));
            for k in 0..100 {
                let (_, a) = random_gamma_element(n, m * m, 40, &mut rng).unwrap();
                let c = match corner_reduce(&a, level) {
                    Ok(c) => c,
                    Err(e) => {
                        failures.push(format!("n={n} m={m} #{k}: {e}"));
                        continue;
                    }
                };
                longest = longest.max(c.word.len());
                if c.word.len() > 3 * n - 2 || c.relaxed {
                    failures.push(format!("n={n} m={m} #{k}: {} symbols", c.word.len()));
                }
                if c.word.first_off_level(&mb).is_some() {
                    failures.push(format!("n={n} m={m} #{k}: symbol off level"));
                }
                let block_ok = c.block.dim() == n - 1
                    && c.block.determinant().is_one()
                    && c.block.congruent_to_identity(&mb);
                if !block_ok {
                    failures.push(format!("n={n} m={m} #{k}: block outside Γ_{}({m})", n - 1));
                }
                if mul(&rows(&c.word.eval()), &rows(&c.block.embed(n))) != rows(&a) {
                    failures.push(format!("n={n} m={m} #{k}: postcondition fails"));
                }
            }
        }
    }
    verdict(
        &failures,
        format!("600 elements, longest corner word {longest}"),
    )
}

fn c3_stable_range() -> Verdict {
    let mut rng = SeedStream::new(SEED).rng("c3");
    let mut failures = Vec::new();
    for k in 0..500 {
        let n = 3 + k % 5;
        let m = 2 + (k % 2) as u64;
        let level = CongruenceLevel::new(m).unwrap();
        let mb = BigInt::from(m);
        let m2 = &mb * &mb;
        let m3 = &m2 * &mb;

        let a = random_coprime_tuple(n, 1_000_000, &mut rng);
        match stabilize_gcd(&a) {
            Ok(w) => {
                let x = &w.x_values[0];
                let mut v = vec![&a[0] + x * &a[n - 1]];
                v.extend_from_slice(&a[1..n - 1]);
                if !gcd_list(&v).is_one() {
                    failures.push(format!("#{k} stable range gcd {}", gcd_list(&v)));
                }
            }
            Err(e) => failures.push(format!("#{k} stable range: {e}")),
        }

        let b = random_level_tuple(n, &mb, 1_000_000, &mut rng);
        match level_stabilize(level, &b) {
            Ok(w) => {
                let mut first = &mb * &b[0];
                for (i, x) in w.x_values.iter().enumerate().take(n - 3) {
                    first += x * &m2 * &b[i + 2];
                }
                let g = gcd_list(&[first, &mb * &b[1], &mb * &b[n - 1] + 1u32]);
                if !g.is_one() {
                    failures.push(format!("#{k} level gcd {g}"));
                }
            }
            Err(e) => failures.push(format!("#{k} level: {e}")),
        }

        let c = random_level_tuple(n, &m2, 1_000_000, &mut rng);
        match corner_gcd_witness(level, &c) {
            Ok(w) => {
                let x = &w.x_values;
                let mut first = &m2 * &c[0];
                for i in 0..n - 3 {
                    first += &x[i] * &m3 * &c[i + 2];
                }
                first += &x[n - 3] * &mb * (&m2 * &c[n - 1] + 1u32);
                let g = gcd(&first, &(&m2 * &c[1])).abs();
                if !(g.is_multiple_of(&mb) && !g.is_multiple_of(&m2) && g == mb) {
                    failures.push(format!("#{k} corner gcd {g} for m = {m}"));
                }
            }
            Err(e) => failures.push(format!("#{k} corner: {e}")),
        }
    }
    verdict(&failures, "500 tuples, 1500 witnesses".to_string())
}

fn c4_steinberg() -> Verdict {
    let mut rng = SeedStream::new(SEED).rng("c4");
    let mut failures = Vec::new();
    for k in 0..1000 {
        let n = rng.random_range(3..=6usize);
        let mut pick = |avoid: &[usize]| loop {
            let v = rng.random_range(1..=n);
            if !avoid.contains(&v) {
                break v;
            }
        };
        let i = pick(&[]);
        let l = pick(&[i]);
        let j = pick(&[i, l]);
        let s = BigInt::from(
            rng.random_range(1..=1_000_000i64) * if rng.random_bool(0.5) { 1 } else { -1 },
        );
        let t = BigInt::from(
            rng.random_range(1..=1_000_000i64) * if rng.random_bool(0.5) { 1 } else { -1 },
        );
        let comm = mul(
            &mul(
                &mul(&elem(n, i, l, &s), &elem(n, l, j, &t)),
                &elem(n, i, l, &-&s),
            ),
            &elem(n, l, j, &-&t),
        );
        let lib = congrkit_core::steinberg_check(i, l, j, &s, &t);
        if comm != elem(n, i, j, &(&s * &t)) || lib != Ok(true) {
            failures.push(format!("#{k} [X_{i}{l}({s}), X_{l}{j}({t})]"));
        }
    }
    verdict(&failures, "1000 commutators".to_string())
}

fn c5_coverage() -> Verdict {
    let mut failures = Vec::new();
    let mut sizes = Vec::new();
    for (m, expect) in [(2u64, 256usize), (3, 6561)] {
        match verify_product_decomposition(3, m, DEFAULT_CAP) {
            Ok(r) => {
                sizes.push(r.product_size);
                if !(r.coverage && r.product_size == expect && r.quotient_size == expect) {
                    failures.push(format!(
                        "m={m}: |E·F| = {} of {}",
                        r.product_size, r.quotient_size
                    ));
                }
            }
            Err(e) => failures.push(format!("m={m}: {e}")),
        }
    }
    verdict(&failures, format!("|E·F| = {sizes:?}"))
}

fn c6_abelian_exact() -> Verdict {
    let mut failures = Vec::new();
    let mut worst = 0f64;
    for m in 2..=50u64 {
        let g = AbelianGroup::cyclic(m, &[1]).unwrap();
        let k = abelian_kazhdan_exact(&g, DEFAULT_CAP).unwrap();
        let want = 2.0 * (PI / m as f64).sin();
        worst = worst
            .max((k.upper - want).abs())
            .max((k.lower - want).abs());
        if (k.upper - want).abs() > 1e-12 || (k.lower - want).abs() > 1e-12 {
            failures.push(format!("C_{m}: {} vs {want}", k.upper));
        }
        if let Some(cap) = abelian_cap(m as f64, 1) {
            if k.upper > cap {
                failures.push(format!("C_{m}: above cap {cap}"));
            }
        }
    }
    let mut orders = Vec::new();
    for (n, m) in [(3usize, 2u64), (3, 3), (4, 2)] {
        let expect = m.pow((n * n - 1) as u32);
        match abelian_quotient(n, m, DEFAULT_CAP) {
            Ok(q) => {
                orders.push(q.order());
                if q.order() as u64 != expect {
                    failures.push(format!(
                        "Γ_{n}({m})/Γ_{n}({}) has {} elements",
                        m * m,
                        q.order()
                    ));
                }
            }
            Err(e) => failures.push(format!("quotient n={n} m={m}: {e}")),
        }
        let g =
            AbelianGroup::from_residues(vec![m; n * n - 1], sigma_abelian_images(n, m).unwrap())
                .unwrap();
        let r = abelian_kazhdan_report(&g, DEFAULT_CAP).unwrap();
        let cap = abelian_cap(expect as f64, r.generators.len());
        if cap.is_some_and(|c| r.bounds.upper > c) {
            failures.push(format!("n={n} m={m}: κ {} above cap", r.bounds.upper));
        }
    }
    verdict(
        &failures,
        format!("max |κ − 2 sin(π/m)| = {worst:.1e}, quotient orders {orders:?}"),
    )
}

fn c7_spectral_vs_characters() -> Verdict {
    let mut failures = Vec::new();
    let mut values = Vec::new();
    let cases = [
        ("C3", AbelianGroup::cyclic(3, &[1]).unwrap()),
        ("C4", AbelianGroup::cyclic(4, &[1]).unwrap()),
        ("C6", AbelianGroup::cyclic(6, &[1]).unwrap()),
        (
            "C2xC2",
            AbelianGroup::new(vec![2, 2], &[vec![1, 0], vec![0, 1]]).unwrap(),
        ),
    ];
    for (name, g) in &cases {
        let exact = abelian_kazhdan_exact(g, DEFAULT_CAP).unwrap().upper;
        let b = spectral_bounds(
            &g.cayley_graph(DEFAULT_CAP).unwrap(),
            &SpectralOptions::default(),
        )
        .unwrap();
        let mu = b.spectral.as_ref().unwrap().mu;
        let lower = (2.0 * (1.0 - mu)).sqrt();
        values.push(format!("{name}={exact:.9}"));
        if (lower - exact).abs() > 1e-8 {
            failures.push(format!("{name}: spectral {lower} vs exact {exact}"));
        }
    }
    verdict(&failures, values.join(" "))
}

fn c8_sl3_quotients() -> Verdict {
    let mut failures = Vec::new();
    let mut intervals = Vec::new();
    let reference = 1.0 / (42.0 * 3f64.sqrt() + 860.0);
    for q in [2u64, 3, 5] {
        let gens = elementary_generators(3, 1).unwrap();
        let g = enumerate_group(GroupKind::MatrixModQ { n: 3 }, &gens, q, DEFAULT_CAP).unwrap();
        match spectral_bounds(&CayleyGraph::from_group(&g), &SpectralOptions::default()) {
            Ok(b) => {
                intervals.push(format!(
                    "q={q} |G|={} [{:.9}, {:.9}]",
                    g.order(),
                    b.lower,
                    b.upper
                ));
                if !(b.lower > 0.0 && b.lower <= b.upper + 1e-9 && b.upper >= reference) {
                    failures.push(format!("q={q}: [{}, {}]", b.lower, b.upper));
                }
            }
            Err(e) => failures.push(format!("q={q}: {e}")),
        }
    }
    verdict(&failures, intervals.join("; "))
}

fn c9_relative() -> Verdict {
    let mut failures = Vec::new();
    let mut parts = Vec::new();
    for q in [2u64, 3] {
        let s = build_semidirect(1, 1, q, DEFAULT_CAP).unwrap();
        let order = s.group.order();
        match relative_spectral_bound(&s.group, &s.translations, &SpectralOptions::default()) {
            Ok(r) => {
                let want = order - order / (q * q) as usize;
                parts.push(format!(
                    "q={q} |G|={order} dim H0={} lower={:.9}",
                    r.subspace_dim, r.bounds.lower
                ));
                if r.subspace_dim != want || r.bounds.lower <= 0.0 {
                    failures.push(format!(
                        "q={q}: dim {} (want {want}), lower {}",
                        r.subspace_dim, r.bounds.lower
                    ));
                }
            }
            Err(e) => failures.push(format!("q={q}: {e}")),
        }
    }
    parts.push(format!("eps(1)={}", eps_m(1)));
    verdict(&failures, parts.join("; "))
}

fn c10_scaling() -> Verdict {
    let cfg = ScanConfig {
        cap: DEFAULT_CAP,
        spectral_limit: 0,
        spectral: SpectralOptions::default(),
    };
    let points: Vec<(usize, u64)> = (2..=20).map(|m| (3, m)).collect();
    let r = run_scan(&points, &cfg);
    match r.slope_m {
        Some(s) => Verdict {
            ok: (-1.05..=-0.95).contains(&s),
            detail: format!("slope {s:.6}, required in [-1.05, -0.95]"),
        },
        None => Verdict {
            ok: false,
            detail: "no slope fitted".to_string(),
        },
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

fn c11_demo_prime() -> Verdict {
    let s = minimal_prime_for(0.1, 3).unwrap();
    let curve = |p: u64| 2.0 * PI / ((p as f64).cbrt() - 1.0);
    let prev = (2..s.p).rev().find(|&x| is_prime(x));
    let ok = is_prime(s.p)
        && curve(s.p) < 0.1
        && prev.is_some_and(|q| curve(q) >= 0.1)
        && s.previous == prev;
    Verdict {
        ok,
        detail: format!(
            "p = {}, previous prime {:?}, curve(p) = {:.9}",
            s.p,
            prev,
            curve(s.p)
        ),
    }
}

type Criterion = (u32, &'static str, fn() -> Verdict, Duration);

fn criteria() -> Vec<Criterion> {
    let s = Duration::from_secs;
    vec![
        (1, "round-trip decomposition", c1_round_trip, s(30)),
        (2, "corner reduction budget", c2_corner_budget, s(10)),
        (3, "stable-range batch", c3_stable_range, s(5)),
        (4, "Steinberg relations", c4_steinberg, s(2)),
        (5, "product coverage", c5_coverage, s(10)),
        (6, "abelian exactness", c6_abelian_exact, s(30)),
        (7, "spectral vs characters", c7_spectral_vs_characters, s(1)),
        (8, "SL_3(Z/q) bounds", c8_sl3_quotients, s(60)),
        (9, "relative bound wiring", c9_relative, s(5)),
        (10, "scaling shape", c10_scaling, s(10)),
        (11, "non-uniformity prime", c11_demo_prime, s(1)),
    ]
}

fn main() {
    let mut all_ok = true;
    let mut first_run = Vec::new();
    for (id, name, f, limit) in criteria() {
        let start = Instant::now();
        let v = f();
        let elapsed = start.elapsed();
        let ok = v.ok && elapsed <= limit;
        all_ok &= ok;
        println!(
            "{} criterion {id} ({name}): {} [{:.2} s, limit {} s]",
            if ok { "PASS" } else { "FAIL" },
            v.detail,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
        first_run.push((v.ok, v.detail));
    }

    let start = Instant::now();
    let mismatched: Vec<u32> = criteria()
        .into_iter()
        .zip(&first_run)
        .filter(|((_, _, f, _), (ok, detail))| {
            let v = f();
            v.ok != *ok || v.detail != *detail
        })
        .map(|((id, ..), _)| id)
        .collect();
    let joined: String = first_run
        .iter()
        .map(|(ok, d)| format!("{ok} {d}\n"))
        .collect();
    let ok = mismatched.is_empty();
    all_ok &= ok;
    println!(
        "{} criterion 12 (determinism): {} [{:.2} s]",
        if ok { "PASS" } else { "FAIL" },
        if ok {
            format!(
                "criteria 1-11 reproduced byte for byte, transcript sha256 {}",
                &sha256_hex(&joined)[..16]
            )
        } else {
            format!("criteria {mismatched:?} differ between runs")
        },
        start.elapsed().as_secs_f64()
    );
    if !all_ok {
        std::process::exit(1);
    }
}
