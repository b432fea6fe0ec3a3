//! Text formats: matrices, words and decomposition certificates.
//!
//! A matrix file holds `n` on its first line and then `n` rows of `n`
//! integers. A word file holds one symbol per line, `E i j t` or
//! `C k i j t`. In both, blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use congrkit_core::decompose::{word_budget, Decomposition};
use congrkit_core::{GenSymbol, IntMatrix, Word};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const CERTIFICATE_HEADER: &str = "congrkit-certificate 1";

/// Lowercase hex SHA-256 of a string.
pub fn sha256_hex(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    let mut out = String::with_capacity(64);
    for b in digest.iter() {
        write!(out, "{b:02x}").expect("writing to a string");
    }
    out
}

/// Non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_row(line: usize, text: &str, n: usize) -> CliResult<Vec<BigInt>> {
    let row: Vec<BigInt> = text
        .split_whitespace()
        .map(|v| {
            v.parse::<BigInt>()
                .map_err(|_| CliError::parse(format!("line {line}: '{v}' is not an integer")))
        })
        .collect::<CliResult<_>>()?;
    if row.len() != n {
        return Err(CliError::parse(format!(
            "line {line}: expected {n} entries, found {}",
            row.len()
        )));
    }
    Ok(row)
}

fn parse_dim(line: usize, text: &str) -> CliResult<usize> {
    match text.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(CliError::parse(format!(
            "line {line}: expected a positive dimension, found '{text}'"
        ))),
    }
}

/// Parses the matrix text format.
pub fn parse_matrix(text: &str) -> CliResult<IntMatrix> {
    let mut lines = content_lines(text);
    let (l0, first) = lines
        .next()
        .ok_or_else(|| CliError::parse("empty matrix file"))?;
    let n = parse_dim(l0, first)?;
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let (l, t) = lines
            .next()
            .ok_or_else(|| CliError::parse(format!("expected {n} rows, found {}", rows.len())))?;
        rows.push(parse_row(l, t, n)?);
    }
    if let Some((l, _)) = lines.next() {
        return Err(CliError::parse(format!(
            "line {l}: trailing content after matrix"
        )));
    }
    IntMatrix::from_rows(rows).map_err(|e| CliError::parse(e.to_string()))
}

/// The matrix text format (same as `Display`).
pub fn write_matrix(a: &IntMatrix) -> String {
    a.to_string()
}

/// Parses a word file for dimension `n`.
pub fn parse_word(text: &str, n: usize) -> CliResult<Word> {
    let symbols = content_lines(text)
        .map(|(l, t)| {
            t.parse::<GenSymbol>()
                .map_err(|_| CliError::parse(format!("line {l}: bad symbol '{t}'")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Word::from_symbols(n, symbols).map_err(|e| CliError::parse(e.to_string()))
}

pub fn write_word(w: &Word) -> String {
    let mut out = String::new();
    for s in w.symbols() {
        writeln!(out, "{s}").expect("writing to a string");
    }
    out
}

/// A serialized decomposition `input = eval(word) · diag(residual, I)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub n: usize,
    pub m: u64,
    pub budget: usize,
    pub relaxed: bool,
    pub input: IntMatrix,
    pub word: Vec<GenSymbol>,
    pub residual: IntMatrix,
    /// SHA-256 of the input in matrix text format.
    pub checksum: String,
}

/// Line numbers of each section, for failure reports.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CertificateLines {
    pub budget: usize,
    pub input: usize,
    pub word: usize,
    pub symbols: Vec<usize>,
    pub residual: usize,
    pub checksum: usize,
}

impl Certificate {
    pub fn from_decomposition(d: &Decomposition) -> Self {
        Self {
            n: d.input.dim(),
            m: d.level.get(),
            budget: d.budget(),
            relaxed: d.relaxed,
            input: d.input.clone(),
            word: d.word.symbols().to_vec(),
            residual: d.residual.clone(),
            checksum: sha256_hex(&write_matrix(&d.input)),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        writeln!(w, "{CERTIFICATE_HEADER}").unwrap();
        writeln!(w, "n {}", self.n).unwrap();
        writeln!(w, "m {}", self.m).unwrap();
        writeln!(w, "budget {}", self.budget).unwrap();
        writeln!(w, "relaxed {}", u8::from(self.relaxed)).unwrap();
        writeln!(w, "input").unwrap();
        for i in 0..self.n {
            let row: Vec<String> = self.input.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(w, "{}", row.join(" ")).unwrap();
        }
        writeln!(w, "word {}", self.word.len()).unwrap();
        for s in &self.word {
            writeln!(w, "{s}").unwrap();
        }
        writeln!(w, "residual").unwrap();
        for i in 0..2 {
            let row: Vec<String> = self.residual.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(w, "{}", row.join(" ")).unwrap();
        }
        writeln!(w, "sha256 {}", self.checksum).unwrap();
        out
    }

    /// Parses a certificate. Structural problems are parse errors; semantic
    /// checks are left to [`Certificate::verify`].
    pub fn parse(text: &str) -> CliResult<(Self, CertificateLines)> {
        let mut lines = content_lines(text);
        let mut next = |what: &str| {
            lines.next().ok_or_else(|| {
                CliError::parse(format!("unexpected end of certificate, expected {what}"))
            })
        };
        let keyed = |(l, t): (usize, &str), key: &str| -> CliResult<String> {
            t.strip_prefix(key)
                .and_then(|rest| rest.strip_prefix(' '))
                .map(|v| v.trim().to_string())
                .ok_or_else(|| CliError::parse(format!("line {l}: expected '{key} <value>'")))
        };
        let (l, t) = next("header")?;
        if t != CERTIFICATE_HEADER {
            return Err(CliError::parse(format!(
                "line {l}: expected '{CERTIFICATE_HEADER}'"
            )));
        }
        let line = next("n")?;
        let n = parse_dim(line.0, &keyed(line, "n")?)?;
        let line = next("m")?;
        let m: u64 = keyed(line, "m")?
            .parse()
            .ok()
            .filter(|&m| m >= 1)
            .ok_or_else(|| CliError::parse(format!("line {}: bad level", line.0)))?;
        let line = next("budget")?;
        let budget_line = line.0;
        let budget: usize = keyed(line, "budget")?
            .parse()
            .map_err(|_| CliError::parse(format!("line {}: bad budget", line.0)))?;
        let line = next("relaxed")?;
        let relaxed = match keyed(line, "relaxed")?.as_str() {
            "0" => false,
            "1" => true,
            _ => {
                return Err(CliError::parse(format!(
                    "line {}: relaxed must be 0 or 1",
                    line.0
                )))
            }
        };
        let (input_line, t) = next("input")?;
        if t != "input" {
            return Err(CliError::parse(format!(
                "line {input_line}: expected 'input'"
            )));
        }
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let (l, t) = next("input row")?;
            rows.push(parse_row(l, t, n)?);
        }
        let input = IntMatrix::from_rows(rows).map_err(|e| CliError::parse(e.to_string()))?;
        let line = next("word")?;
        let word_line = line.0;
        let count: usize = keyed(line, "word")?
            .parse()
            .map_err(|_| CliError::parse(format!("line {word_line}: bad word length")))?;
        let mut word = Vec::with_capacity(count);
        let mut symbol_lines = Vec::with_capacity(count);
        for _ in 0..count {
            let (l, t) = next("symbol")?;
            let s = t
                .parse::<GenSymbol>()
                .map_err(|_| CliError::parse(format!("line {l}: bad symbol '{t}'")))?;
            word.push(s);
            symbol_lines.push(l);
        }
        let (residual_line, t) = next("residual")?;
        if t != "residual" {
            return Err(CliError::parse(format!(
                "line {residual_line}: expected 'residual'"
            )));
        }
        let mut rows = Vec::with_capacity(2);
        for _ in 0..2 {
            let (l, t) = next("residual row")?;
            rows.push(parse_row(l, t, 2)?);
        }
        let residual = IntMatrix::from_rows(rows).map_err(|e| CliError::parse(e.to_string()))?;
        let line = next("sha256")?;
        let checksum_line = line.0;
        let checksum = keyed(line, "sha256")?;
        if let Some((l, _)) = lines.next() {
            return Err(CliError::parse(format!("line {l}: trailing content")));
        }
        Ok((
            Self {
                n,
                m,
                budget,
                relaxed,
                input,
                word,
                residual,
                checksum,
            },
            CertificateLines {
                budget: budget_line,
                input: input_line,
                word: word_line,
                symbols: symbol_lines,
                residual: residual_line,
                checksum: checksum_line,
            },
        ))
    }

    /// Re-checks the certificate by exact arithmetic. Returns every failed
    /// check as `(line, message)`, sorted by line.
    pub fn verify(&self, lines: &CertificateLines) -> Vec<(usize, String)> {
        let mut failures = Vec::new();
        let n = self.n;
        let mb = BigInt::from(self.m);
        if n < 3 {
            failures.push((lines.input, format!("dimension {n} is below 3")));
            return failures;
        }
        if self.budget != word_budget(n) {
            failures.push((
                lines.budget,
                format!(
                    "budget {} differs from B({n}) = {}",
                    self.budget,
                    word_budget(n)
                ),
            ));
        }
        if !self.input.determinant().is_one() || !self.input.congruent_to_identity(&mb) {
            failures.push((lines.input, format!("input is not in Γ_{n}({})", self.m)));
        }
        let mut symbols_ok = true;
        for (s, &l) in self.word.iter().zip(&lines.symbols) {
            if let Err(e) = s.validate(n) {
                failures.push((l, format!("symbol '{s}': {e}")));
                symbols_ok = false;
            } else if !s.has_level(&mb) {
                failures.push((l, format!("symbol '{s}' is not of level {}", self.m)));
            }
        }
        let allowed = word_budget(n) + if self.relaxed { n } else { 0 };
        if self.word.len() > allowed {
            failures.push((
                lines.word,
                format!(
                    "word length {} exceeds the budget {allowed}",
                    self.word.len()
                ),
            ));
        }
        let r = &self.residual;
        if !r.determinant().is_one() || !r.congruent_to_identity(&mb) {
            failures.push((
                lines.residual,
                format!("residual is not in Γ_2({})", self.m),
            ));
        }
        if symbols_ok && !r.determinant().is_zero() {
            let word = Word::from_symbols(n, self.word.clone()).expect("validated symbols");
            let product = &word.eval() * &r.embed(n);
            if product != self.input {
                failures.push((
                    lines.word,
                    "word times residual does not reproduce the input".into(),
                ));
            }
        }
        if sha256_hex(&write_matrix(&self.input)) != self.checksum {
            failures.push((lines.checksum, "checksum does not match the input".into()));
        }
        failures.sort_by_key(|(l, _)| *l);
        failures
    }
}
