//! Subcommand implementations. Each returns an [`Outcome`] whose primary
//! text is a pure function of the [`RunConfig`].

use std::fs;

use serde_json::{json, Value};

use congrkit_core::decompose::decompose_full;
use congrkit_core::kazhdan::{
    abelian_cap, abelian_kazhdan_report, eps_m, minimal_prime_for, nonuniform_demo,
    projection_check, relative_spectral_bound, sl_lower, spectral_bounds, AbelianGroup, Oracle,
    SpectralOptions,
};
use congrkit_core::quotient::{
    abelian_quotient, beta_generators, build_semidirect, elementary_generators, enumerate_group,
    sigma_abelian_images, verify_product_decomposition, CayleyGraph, FiniteQuotientGroup,
    GroupKind,
};
use congrkit_core::CongruenceLevel;

use crate::cli::{Command, KazhdanKind, QuotientKind, RunConfig, SubgroupKind};
use crate::error::{CliError, CliResult, Exit};
use crate::formats::{parse_matrix, write_matrix, Certificate};
use crate::random::{random_gamma_element, SeedStream};
use crate::report::{render, BoundsRecord, Format};
use crate::scan::{render_scan, run_scan, ScanConfig};
use crate::selftest::{run_selftest, SelftestConfig, SuiteStatus};

/// What a command produced.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    /// Written to `--out` or stdout.
    pub primary: String,
    /// Written to stdout when `--out` is given, otherwise to stderr.
    pub summary: Option<String>,
    pub exit: Exit,
    /// Diagnostic for stderr.
    pub message: Option<String>,
}

impl Outcome {
    fn ok(primary: String) -> Self {
        Self {
            primary,
            summary: None,
            exit: Exit::Success,
            message: None,
        }
    }
}

impl RunConfig {
    pub fn spectral_options(&self) -> SpectralOptions {
        SpectralOptions {
            tol: self.tol,
            max_matvecs: self.max_matvecs,
            dense_limit: self.dense_limit,
        }
    }
}

/// A record starting with the schema, command and seed fields.
fn record(cfg: &RunConfig, command: &str, fields: Value) -> Value {
    let mut out = json!({
        "schema": crate::report::SCHEMA_VERSION,
        "command": command,
        "seed": cfg.seed,
    });
    if let (Some(o), Value::Object(f)) = (out.as_object_mut(), fields) {
        o.extend(f);
    }
    out
}

fn bounds_value(b: &congrkit_core::kazhdan::KazhdanBounds) -> Value {
    serde_json::to_value(BoundsRecord::from(b)).expect("records serialize")
}

fn matrix_rows(a: &congrkit_core::IntMatrix) -> Vec<String> {
    (0..a.dim())
        .map(|i| {
            a.row(i)
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect()
}

pub fn run(cfg: &RunConfig) -> CliResult<Outcome> {
    match &cfg.command {
        Command::Decompose {
            input,
            n,
            m,
            max_len,
        } => cmd_decompose(cfg, input.as_deref(), *n, *m, *max_len),
        Command::Verify { input } => {
            let text = fs::read_to_string(input)?;
            cmd_verify(cfg, &text)
        }
        Command::Scan {
            n,
            m,
            spectral_limit,
        } => cmd_scan(cfg, &n.0, &m.0, *spectral_limit),
        Command::Quotient { kind, n, m, l, q } => cmd_quotient(cfg, *kind, *n, *m, *l, *q),
        Command::Kazhdan { kind, n, m, q } => cmd_kazhdan(cfg, *kind, *n, *m, *q),
        Command::Relative { m, l, q, subgroup } => cmd_relative(cfg, *m, *l, *q, *subgroup),
        Command::DemoNonuniform { eps, k, samples, p } => cmd_demo(cfg, *eps, *k, *samples, *p),
        Command::Selftest => cmd_selftest(cfg),
    }
}

pub fn cmd_decompose(
    cfg: &RunConfig,
    input: Option<&std::path::Path>,
    n: Option<usize>,
    m: u64,
    max_len: usize,
) -> CliResult<Outcome> {
    let level = CongruenceLevel::new(m)?;
    let (a, source) = match (input, n) {
        (Some(path), _) => {
            let a = parse_matrix(&fs::read_to_string(path)?)?;
            if let Some(n) = n.filter(|&n| n != a.dim()) {
                return Err(CliError::precondition(format!(
                    "--n {n} does not match the {}x{} input",
                    a.dim(),
                    a.dim()
                )));
            }
            (a, "file".to_string())
        }
        (None, Some(n)) => {
            let mut rng = SeedStream::new(cfg.seed).rng("decompose");
            let (_, a) = random_gamma_element(n, m, max_len, &mut rng)?;
            (a, format!("random seed={} max_len={max_len}", cfg.seed))
        }
        (None, None) => return Err(CliError::parse("decompose needs --input or --n")),
    };
    let d = decompose_full(&a, level)?;
    let cert = Certificate::from_decomposition(&d);
    let primary = format!("# source {source}\n{}", cert.to_text());
    let counts = d.counts();
    let conjugated: serde_json::Map<String, Value> = counts
        .conjugated
        .iter()
        .map(|(k, v)| (k.to_string(), json!(v)))
        .collect();
    let summary = record(
        cfg,
        "decompose",
        json!({
            "source": source,
            "n": a.dim(),
            "m": m,
            "length": d.word.len(),
            "budget": d.budget(),
            "elementary": counts.elementary,
            "conjugated": conjugated,
            "relaxed": d.relaxed,
            "residual": matrix_rows(&d.residual),
            "verified": d.verify(),
        }),
    );
    Ok(Outcome {
        primary,
        summary: Some(render(&summary, cfg.format)),
        exit: Exit::Success,
        message: None,
    })
}

pub fn cmd_verify(cfg: &RunConfig, text: &str) -> CliResult<Outcome> {
    let (cert, lines) = Certificate::parse(text)?;
    let failures = cert.verify(&lines);
    let listed: Vec<String> = failures
        .iter()
        .map(|(l, m)| format!("line {l}: {m}"))
        .collect();
    let rec = record(
        cfg,
        "verify",
        json!({
            "status": if failures.is_empty() { "ok" } else { "failed" },
            "n": cert.n,
            "m": cert.m,
            "length": cert.word.len(),
            "budget": cert.budget,
            "input_sha256": crate::formats::sha256_hex(&write_matrix(&cert.input)),
            "failures": listed,
        }),
    );
    let primary = render(&rec, cfg.format);
    Ok(match listed.first() {
        None => Outcome::ok(primary),
        Some(first) => Outcome {
            primary,
            summary: None,
            exit: Exit::Verification,
            message: Some(format!("verification failed at {first}")),
        },
    })
}

pub fn cmd_scan(
    cfg: &RunConfig,
    ns: &[u64],
    ms: &[u64],
    spectral_limit: usize,
) -> CliResult<Outcome> {
    let mut points = Vec::with_capacity(ns.len() * ms.len());
    for &n in ns {
        for &m in ms {
            let n =
                usize::try_from(n).map_err(|_| CliError::parse(format!("n = {n} is too large")))?;
            points.push((n, m));
        }
    }
    let scan = ScanConfig {
        cap: cfg.cap,
        spectral_limit,
        spectral: cfg.spectral_options(),
    };
    let result = run_scan(&points, &scan);
    let mut out = Outcome::ok(render_scan(&result, cfg.seed, cfg.format));
    let capped = result
        .rows
        .iter()
        .filter(|r| r.status == "cap-exceeded")
        .count();
    if capped > 0 {
        out.message = Some(format!("{capped} rows exceeded the cap"));
    }
    Ok(out)
}

fn group_value(g: &FiniteQuotientGroup) -> Value {
    json!({
        "order": g.order(),
        "modulus": g.modulus(),
        "generators": g.generators().len(),
        "closure_ok": g.check_closure(),
    })
}

fn sl_group(n: usize, q: u64, cap: usize) -> CliResult<FiniteQuotientGroup> {
    let gens = elementary_generators(n, 1)?;
    Ok(enumerate_group(GroupKind::MatrixModQ { n }, &gens, q, cap)?)
}

pub fn cmd_quotient(
    cfg: &RunConfig,
    kind: QuotientKind,
    n: usize,
    m: u64,
    l: u64,
    q: u64,
) -> CliResult<Outcome> {
    let mut message = None;
    let fields = match kind {
        QuotientKind::Abelian => {
            let g = abelian_quotient(n, m, cfg.cap)?;
            let expected = u32::try_from(n * n - 1).ok().and_then(|e| m.checked_pow(e));
            json!({
                "group": format!("Gamma_{n}({m})/Gamma_{n}({})", m * m),
                "S": format!("Sigma_{n}({m})"),
                "quotient": group_value(&g),
                "expected_order": expected,
                "order_matches": expected == Some(g.order() as u64),
            })
        }
        QuotientKind::Sl => json!({
            "group": format!("SL_{n}(Z/{q})"),
            "S": "X_ij(+-1)",
            "quotient": group_value(&sl_group(n, q, cfg.cap)?),
        }),
        QuotientKind::Semidirect => {
            let s = build_semidirect(m, l, q, cfg.cap)?;
            json!({
                "group": format!("(Z/{q})^2 x| SL_2(Z/{q})"),
                "S": format!("F({m},{l})"),
                "quotient": group_value(&s.group),
                "translations": s.translations.len(),
            })
        }
        QuotientKind::Coverage => {
            let r = verify_product_decomposition(n, m, cfg.cap)?;
            json!({
                "group": format!("Gamma_{n}({m})/Gamma_{n}({})", m * m),
                "quotient_size": r.quotient_size,
                "e_size": r.e_size,
                "f_size": r.f_size,
                "product_size": r.product_size,
                "lagrange_ok": r.lagrange_ok,
                "coverage": r.coverage,
            })
        }
        QuotientKind::Beta => {
            let l = u32::try_from(l).map_err(|_| CliError::precondition("l is too large"))?;
            let b = beta_generators(n, m, l, None)?;
            message.clone_from(&b.warning);
            json!({
                "group": format!("beta_{n}({m},{l})"),
                "sigma": b.sigma.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                "alpha": b.alpha.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                "warning": b.warning,
            })
        }
    };
    let mut out = Outcome::ok(render(&record(cfg, "quotient", fields), cfg.format));
    out.message = message;
    Ok(out)
}

fn oracle_name(o: Oracle) -> &'static str {
    match o {
        Oracle::BranchAndBound => "branch-and-bound",
        Oracle::Enumeration => "enumeration",
        Oracle::Trivial => "trivial",
    }
}

pub fn cmd_kazhdan(
    cfg: &RunConfig,
    kind: KazhdanKind,
    n: usize,
    m: u64,
    q: u64,
) -> CliResult<Outcome> {
    let fields = match kind {
        KazhdanKind::Cyclic => {
            let g = AbelianGroup::cyclic(m, &[1])?;
            let r = abelian_kazhdan_report(&g, cfg.cap)?;
            json!({
                "group": format!("C_{m}"),
                "S": "+-1",
                "bounds": bounds_value(&r.bounds),
                "closed_form": congrkit_core::kazhdan::cyclic_exact(m),
            })
        }
        KazhdanKind::Abelian => {
            let g = AbelianGroup::from_residues(vec![m; n * n - 1], sigma_abelian_images(n, m)?)?;
            let r = abelian_kazhdan_report(&g, cfg.cap)?;
            let k = r.generators.len();
            json!({
                "group": format!("Gamma_{n}({m})/Gamma_{n}({})", m * m),
                "S": format!("Sigma_{n}({m})"),
                "generators": k,
                "bounds": bounds_value(&r.bounds),
                "mixture_size": r.mixture.len(),
                "rounds": r.rounds,
                "oracle": oracle_name(r.oracle),
                "projection_bound": congrkit_core::kazhdan::projection_upper_bound(n, m),
                "abelian_cap": g.order().and_then(|o| abelian_cap(o as f64, k)),
            })
        }
        KazhdanKind::Sl => {
            let g = sl_group(n, q, cfg.cap)?;
            let b = spectral_bounds(&CayleyGraph::from_group(&g), &cfg.spectral_options())?;
            json!({
                "group": format!("SL_{n}(Z/{q})"),
                "S": "X_ij(+-1)",
                "order": g.order(),
                "bounds": bounds_value(&b),
                "reference_sl_lower": sl_lower(n),
                "upper_above_reference": b.upper >= sl_lower(n),
            })
        }
        KazhdanKind::Projection => {
            let p = projection_check(n, m)?;
            json!({
                "group": format!("Gamma_{n}({m}) -> C_{m}"),
                "S": format!("Sigma_{n}({m})"),
                "images": p.images,
                "unit_images": p.unit_images,
                "surjective": p.surjective,
                "upper_bound": p.value,
            })
        }
    };
    Ok(Outcome::ok(render(
        &record(cfg, "kazhdan", fields),
        cfg.format,
    )))
}

pub fn cmd_relative(
    cfg: &RunConfig,
    m: u64,
    l: u64,
    q: u64,
    subgroup: SubgroupKind,
) -> CliResult<Outcome> {
    let s = build_semidirect(m, l, q, cfg.cap)?;
    let members: Vec<usize> = match subgroup {
        SubgroupKind::Translations => s.translations.clone(),
        SubgroupKind::All => (0..s.group.order()).collect(),
        SubgroupKind::Trivial => vec![0],
    };
    let r = relative_spectral_bound(&s.group, &members, &cfg.spectral_options())?;
    let fields = json!({
        "group": format!("(Z/{q})^2 x| SL_2(Z/{q})"),
        "S": format!("F({m},{l})"),
        "subgroup": format!("{subgroup:?}").to_lowercase(),
        "order": s.group.order(),
        "subgroup_order": r.subgroup_order,
        "cosets": r.cosets,
        "subspace_dim": r.subspace_dim,
        "bounds": bounds_value(&r.bounds),
        "reference_eps": r.reference_eps.unwrap_or_else(|| eps_m(m)),
        "reference_rel_half": r.reference_rel_half,
    });
    Ok(Outcome::ok(render(
        &record(cfg, "relative", fields),
        cfg.format,
    )))
}

pub fn cmd_demo(
    cfg: &RunConfig,
    eps: f64,
    k: usize,
    samples: usize,
    p: Option<u64>,
) -> CliResult<Outcome> {
    let search = minimal_prime_for(eps, k)?;
    let p = p.unwrap_or(search.p);
    let demo = nonuniform_demo(p, k, cfg.seed, samples, cfg.cap)?;
    let samples: Vec<Value> = demo
        .samples
        .iter()
        .map(|s| json!({"generators": s.generators, "kappa": s.kappa}))
        .collect();
    let fields = json!({
        "eps": eps,
        "k": k,
        "minimal_prime": search.p,
        "curve_at_minimal_prime": search.curve_at_p,
        "previous_prime": search.previous,
        "curve_at_previous_prime": search.curve_at_previous,
        "p": demo.p,
        "curve": demo.curve,
        "samples": samples,
        "all_below_curve": demo.all_below,
    });
    Ok(Outcome::ok(render(
        &record(cfg, "demo-nonuniform", fields),
        cfg.format,
    )))
}

pub fn cmd_selftest(cfg: &RunConfig) -> CliResult<Outcome> {
    let suites = run_selftest(&SelftestConfig {
        seed: cfg.seed,
        cap: cfg.cap,
        spectral: cfg.spectral_options(),
    });
    let primary = match cfg.format {
        Format::Text => {
            let mut s = format!("# seed {}\n", cfg.seed);
            for r in &suites {
                let tag = match r.status {
                    SuiteStatus::Pass => "PASS",
                    SuiteStatus::Fail => "FAIL",
                    SuiteStatus::Skipped => "SKIP",
                };
                s.push_str(&format!("{tag} {}: {}\n", r.name, r.detail));
            }
            s
        }
        f => render(&record(cfg, "selftest", json!({ "suites": suites })), f),
    };
    let failed: Vec<&str> = suites
        .iter()
        .filter(|r| r.status == SuiteStatus::Fail)
        .map(|r| r.name)
        .collect();
    let skipped: Vec<&str> = suites
        .iter()
        .filter(|r| r.status == SuiteStatus::Skipped)
        .map(|r| r.name)
        .collect();
    let mut out = Outcome::ok(primary);
    if !failed.is_empty() {
        out.exit = Exit::Verification;
        out.message = Some(format!("failed suites: {}", failed.join(", ")));
    } else if !skipped.is_empty() {
        out.message = Some(format!("skipped suites: {}", skipped.join(", ")));
    }
    Ok(out)
}
