//! Sweeps of Kazhdan constants of `Γ_n(m)/Γ_n(m²)` over `m` or `n`.

use rayon::prelude::*;
use serde::Serialize;

use congrkit_core::kazhdan::{
    abelian_kazhdan_report, projection_upper_bound, spectral_bounds, AbelianGroup, ReferenceCurves,
    SpectralOptions,
};
use congrkit_core::quotient::sigma_abelian_images;
use congrkit_core::Error as CoreError;

use crate::report::{csv_line, Format};

/// CSV columns of a scan, in order.
pub const SCAN_COLUMNS: [&str; 16] = [
    "n",
    "m",
    "order",
    "generators",
    "status",
    "kappa_exact",
    "projection_bound",
    "spectral_lower",
    "spectral_upper",
    "spectral_mu",
    "eps_m",
    "rel_half",
    "cyclic_exact",
    "sl_lower",
    "sl_upper",
    "corollary_shape",
];

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub cap: usize,
    /// Largest quotient order for which spectral bounds are also computed.
    pub spectral_limit: usize,
    pub spectral: SpectralOptions,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub n: usize,
    pub m: u64,
    pub order: Option<String>,
    pub generators: usize,
    pub status: String,
    pub kappa_exact: Option<f64>,
    pub projection_bound: f64,
    pub spectral_lower: Option<f64>,
    pub spectral_upper: Option<f64>,
    pub spectral_mu: Option<f64>,
    pub eps_m: f64,
    pub rel_half: f64,
    pub cyclic_exact: f64,
    pub sl_lower: f64,
    pub sl_upper: f64,
    pub corollary_shape: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanResult {
    pub rows: Vec<ScanRow>,
    /// Least-squares slope of `log κ` against `log m`, over rows sharing `n`.
    pub slope_m: Option<f64>,
    /// Least-squares slope of `log κ` against `log n`, over rows sharing `m`.
    pub slope_n: Option<f64>,
}

fn order_string(n: usize, m: u64) -> Option<String> {
    let e = u32::try_from(n * n - 1).ok()?;
    Some(num_bigint::BigUint::from(m).pow(e).to_string())
}

/// Computes one row. Errors are recorded in `status` rather than returned.
pub fn scan_point(n: usize, m: u64, cfg: &ScanConfig) -> ScanRow {
    let curves = ReferenceCurves::at(n, m);
    let mut row = ScanRow {
        n,
        m,
        order: if m >= 2 && n >= 3 {
            order_string(n, m)
        } else {
            None
        },
        generators: 0,
        status: "ok".to_string(),
        kappa_exact: None,
        projection_bound: projection_upper_bound(n, m),
        spectral_lower: None,
        spectral_upper: None,
        spectral_mu: None,
        eps_m: curves.eps_m,
        rel_half: curves.rel_half,
        cyclic_exact: curves.cyclic_exact,
        sl_lower: curves.sl_lower,
        sl_upper: curves.sl_upper,
        corollary_shape: curves.corollary_shape,
    };
    if n < 3 || m < 2 {
        row.status = "skipped: need n >= 3 and m >= 2".to_string();
        return row;
    }
    let group = match sigma_abelian_images(n, m)
        .and_then(|g| AbelianGroup::from_residues(vec![m; n * n - 1], g))
    {
        Ok(g) => g,
        Err(e) => {
            row.status = format!("error: {e}");
            return row;
        }
    };
    row.generators = group.symmetric_generators().len();
    match abelian_kazhdan_report(&group, cfg.cap) {
        Ok(r) => row.kappa_exact = Some(r.bounds.upper),
        Err(CoreError::CapExceeded { .. }) => {
            row.status = "cap-exceeded".to_string();
            return row;
        }
        Err(e) => {
            row.status = format!("error: {e}");
            return row;
        }
    }
    let small = group
        .order()
        .is_some_and(|o| o <= cfg.spectral_limit as u64 && o <= cfg.cap as u64);
    if small {
        let spectral = group
            .cayley_graph(cfg.cap)
            .and_then(|g| spectral_bounds(&g, &cfg.spectral));
        match spectral {
            Ok(b) => {
                row.spectral_lower = Some(b.lower);
                row.spectral_upper = Some(b.upper);
                row.spectral_mu = b.spectral.as_ref().map(|s| s.mu);
            }
            Err(e) => row.status = format!("spectral error: {e}"),
        }
    }
    row
}

fn fit_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Slope of `log κ` against the logarithm of the varying parameter.
fn slope_by<F: Fn(&ScanRow) -> f64, K: Fn(&ScanRow) -> u64>(
    rows: &[ScanRow],
    x: F,
    key: K,
) -> Option<f64> {
    let first = rows.first().map(&key)?;
    if rows.iter().any(|r| key(r) != first) {
        return None;
    }
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| {
            r.kappa_exact
                .filter(|&k| k > 0.0)
                .map(|k| (x(r).ln(), k.ln()))
        })
        .collect();
    fit_slope(&pts)
}

/// Runs every point on the rayon pool; rows keep the order of `points`.
pub fn run_scan(points: &[(usize, u64)], cfg: &ScanConfig) -> ScanResult {
    let rows: Vec<ScanRow> = points
        .par_iter()
        .map(|&(n, m)| scan_point(n, m, cfg))
        .collect();
    let slope_m = slope_by(&rows, |r| r.m as f64, |r| r.n as u64);
    let slope_n = slope_by(&rows, |r| r.n as f64, |r| r.m);
    ScanResult {
        rows,
        slope_m,
        slope_n,
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Renders a scan. CSV output starts with `#` lines carrying the schema and
/// seed, followed by the header and one line per row; slopes follow as
/// trailing `#` lines.
pub fn render_scan(result: &ScanResult, seed: u64, format: Format) -> String {
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                schema: u32,
                command: &'static str,
                seed: u64,
                #[serde(flatten)]
                result: &'a ScanResult,
            }
            crate::report::render(
                &Out {
                    schema: crate::report::SCHEMA_VERSION,
                    command: "scan",
                    seed,
                    result,
                },
                Format::Json,
            )
        }
        Format::Csv | Format::Text => {
            let mut s = format!(
                "# schema={} command=scan seed={seed}\n",
                crate::report::SCHEMA_VERSION
            );
            let header: Vec<String> = SCAN_COLUMNS.iter().map(|c| c.to_string()).collect();
            s.push_str(&csv_line(&header));
            for r in &result.rows {
                let fields = vec![
                    r.n.to_string(),
                    r.m.to_string(),
                    r.order.clone().unwrap_or_default(),
                    r.generators.to_string(),
                    r.status.clone(),
                    opt(r.kappa_exact),
                    r.projection_bound.to_string(),
                    opt(r.spectral_lower),
                    opt(r.spectral_upper),
                    opt(r.spectral_mu),
                    r.eps_m.to_string(),
                    r.rel_half.to_string(),
                    r.cyclic_exact.to_string(),
                    r.sl_lower.to_string(),
                    r.sl_upper.to_string(),
                    r.corollary_shape.to_string(),
                ];
                s.push_str(&csv_line(&fields));
            }
            if let Some(v) = result.slope_m {
                s.push_str(&format!("# slope_m={v}\n"));
            }
            if let Some(v) = result.slope_n {
                s.push_str(&format!("# slope_n={v}\n"));
            }
            s
        }
    }
}
