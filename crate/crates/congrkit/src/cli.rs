//! Command-line arguments.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use congrkit_core::kazhdan::{DEFAULT_DENSE_LIMIT, DEFAULT_MAX_MATVECS, DEFAULT_TOL};
use congrkit_core::quotient::DEFAULT_CAP;

use crate::report::Format;

/// A full run: one subcommand plus the shared options. Identical configs
/// produce byte-identical primary output.
#[derive(Clone, Debug, Parser)]
#[command(
    name = "congrkit",
    version,
    about = "Bounded generation and Kazhdan constants of congruence subgroups"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Maximum number of enumerated group elements or searched characters.
    #[arg(long, global = true, env = "CONGRKIT_CAP", default_value_t = DEFAULT_CAP)]
    pub cap: usize,

    /// Eigensolver residual tolerance.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,

    /// Eigensolver matrix-vector product limit.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_MATVECS)]
    pub max_matvecs: usize,

    /// Largest group order solved with a dense eigendecomposition.
    #[arg(long, global = true, default_value_t = DEFAULT_DENSE_LIMIT)]
    pub dense_limit: usize,

    /// Master seed for every random input.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Decompose a matrix of Γ_n(m) into a certified word and a 2x2 residual.
    Decompose {
        /// Matrix file; without it a seeded random element of Γ_n(m) is used.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: u64,
        /// Maximum length of the random word producing a random input.
        #[arg(long, default_value_t = 40)]
        max_len: usize,
    },
    /// Re-check a decomposition certificate by exact arithmetic.
    Verify {
        /// Certificate file.
        #[arg(long)]
        input: PathBuf,
    },
    /// Sweep Kazhdan constants of Γ_n(m)/Γ_n(m²) over ranges of n and m.
    Scan {
        /// A value, an inclusive range `a..b`, or a comma-separated list.
        #[arg(long, value_parser = parse_range)]
        n: Values,
        #[arg(long, value_parser = parse_range)]
        m: Values,
        /// Also compute spectral bounds for quotients up to this order.
        #[arg(long, default_value_t = 10_000)]
        spectral_limit: usize,
    },
    /// Enumerate a finite quotient and report its order.
    Quotient {
        #[arg(long, value_enum, default_value_t = QuotientKind::Abelian)]
        kind: QuotientKind,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        m: u64,
        #[arg(long, default_value_t = 1)]
        l: u64,
        #[arg(long, default_value_t = 2)]
        q: u64,
    },
    /// Bounds on a Kazhdan constant.
    Kazhdan {
        #[arg(long, value_enum, default_value_t = KazhdanKind::Abelian)]
        kind: KazhdanKind,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        m: u64,
        #[arg(long, default_value_t = 2)]
        q: u64,
    },
    /// Relative spectral bound for (Z/q)² ⋊ SL_2(Z/q) and a normal subgroup.
    Relative {
        #[arg(long, default_value_t = 1)]
        m: u64,
        #[arg(long, default_value_t = 1)]
        l: u64,
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, value_enum, default_value_t = SubgroupKind::Translations)]
        subgroup: SubgroupKind,
    },
    /// Exact constants of C_p for random k-element generating sets against the
    /// uniform cap 2π/(p^{1/k} − 1).
    DemoNonuniform {
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        samples: usize,
        /// Use this prime instead of the least one below `eps`.
        #[arg(long)]
        p: Option<u64>,
    },
    /// Run the invariant suites.
    Selftest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum QuotientKind {
    /// Γ_n(m)/Γ_n(m²) generated by the images of Σ_n(m).
    Abelian,
    /// SL_n(Z/q) generated by elementary matrices.
    Sl,
    /// The image of F(m, l) in (Z/q)² ⋊ SL_2(Z/q).
    Semidirect,
    /// Whether E·F covers Γ_n(m)/Γ_n(m²).
    Coverage,
    /// The symbols of β_n(m, l).
    Beta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KazhdanKind {
    /// C_m with {±1}.
    Cyclic,
    /// Γ_n(m)/Γ_n(m²) with the images of Σ_n(m).
    Abelian,
    /// SL_n(Z/q) with symmetrized elementary images.
    Sl,
    /// The projection of Γ_n(m) onto C_m.
    Projection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SubgroupKind {
    Translations,
    All,
    Trivial,
}

/// A list of parameter values given as a range or list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Values(pub Vec<u64>);

/// Parses `7`, `2..20` (inclusive) or `2,3,5`. A range whose end is below its
/// start is empty.
pub fn parse_range(s: &str) -> Result<Values, String> {
    let one = |v: &str| {
        v.trim()
            .parse::<u64>()
            .map_err(|_| format!("'{v}' is not a nonnegative integer"))
    };
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (one(a)?, one(b.trim_start_matches('='))?);
        return Ok(Values((a..=b).collect()));
    }
    s.split(',')
        .filter(|v| !v.trim().is_empty())
        .map(one)
        .collect::<Result<_, _>>()
        .map(Values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..5").unwrap().0, vec![2, 3, 4, 5]);
        assert_eq!(parse_range("2..=3").unwrap().0, vec![2, 3]);
        assert!(parse_range("5..4").unwrap().0.is_empty());
        assert_eq!(parse_range("2,3,7").unwrap().0, vec![2, 3, 7]);
        assert_eq!(parse_range("4").unwrap().0, vec![4]);
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn parses_a_run() {
        let c = RunConfig::try_parse_from([
            "congrkit", "scan", "--n", "3", "--m", "2..4", "--format", "csv",
        ])
        .unwrap();
        assert_eq!(c.format, Format::Csv);
        match c.command {
            Command::Scan { n, m, .. } => {
                assert_eq!(n.0, vec![3]);
                assert_eq!(m.0, vec![2, 3, 4]);
            }
            _ => panic!("wrong subcommand"),
        }
    }
}
