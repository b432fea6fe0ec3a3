//! Elementary generator symbols, words over them and their evaluation.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;

use crate::matrix::{make_y, make_y_inverse, IntMatrix};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    /// `X_ij(t)`.
    Elementary,
    /// `y_k^{-1} X_ij(t) y_k`, with `y_k` embedded in the top-left block.
    ConjElementary { conj_dim: usize },
}

/// One letter of the decomposition alphabet. Positions are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenSymbol {
    pub kind: SymbolKind,
    pub i: usize,
    pub j: usize,
    pub t: BigInt,
}

impl GenSymbol {
    pub fn elementary(i: usize, j: usize, t: BigInt) -> Self {
        Self {
            kind: SymbolKind::Elementary,
            i,
            j,
            t,
        }
    }

    pub fn conjugated(conj_dim: usize, i: usize, j: usize, t: BigInt) -> Self {
        Self {
            kind: SymbolKind::ConjElementary { conj_dim },
            i,
            j,
            t,
        }
    }

    /// Checks positions, the conjugator dimension and `t != 0` for ambient dimension `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        let bound = match self.kind {
            SymbolKind::Elementary => n,
            SymbolKind::ConjElementary { conj_dim } => {
                if conj_dim < 3 || conj_dim > n {
                    return Err(Error::InvalidSymbol(format!(
                        "conjugator dimension {conj_dim} outside 3..={n}"
                    )));
                }
                conj_dim
            }
        };
        if self.i == self.j || self.i == 0 || self.j == 0 || self.i > bound || self.j > bound {
            return Err(Error::InvalidSymbol(format!(
                "positions ({}, {}) invalid for block size {bound}",
                self.i, self.j
            )));
        }
        if self.t.is_zero() {
            return Err(Error::InvalidSymbol("zero value".to_string()));
        }
        Ok(())
    }

    pub fn has_level(&self, m: &BigInt) -> bool {
        self.t.is_multiple_of(m)
    }

    pub fn inverse(&self) -> Self {
        Self {
            kind: self.kind,
            i: self.i,
            j: self.j,
            t: -&self.t,
        }
    }

    /// The `n x n` matrix of the symbol.
    pub fn matrix(&self, n: usize) -> Result<IntMatrix> {
        self.validate(n)?;
        let x = IntMatrix::elementary(n, self.i, self.j, self.t.clone())?;
        match self.kind {
            SymbolKind::Elementary => Ok(x),
            SymbolKind::ConjElementary { conj_dim } => {
                let y = make_y(conj_dim)?.embed(n);
                let y_inv = make_y_inverse(conj_dim)?.embed(n);
                Ok(&(&y_inv * &x) * &y)
            }
        }
    }

    /// `a <- a * self`, by column operations. The symbol must be valid for `a.dim()`.
    pub fn apply_right(&self, a: &mut IntMatrix) {
        let (i, j) = (self.i - 1, self.j - 1);
        match self.kind {
            SymbolKind::Elementary => a.add_col_multiple(j, i, &self.t),
            SymbolKind::ConjElementary { conj_dim: k } => {
                // right multiplication by y_k^{-1}: suffix sums of the first k columns
                for c in (0..k - 1).rev() {
                    a.add_col_multiple(c, c + 1, &BigInt::one());
                }
                a.add_col_multiple(j, i, &self.t);
                // right multiplication by y_k
                for c in 0..k - 1 {
                    a.add_col_multiple(c, c + 1, &BigInt::from(-1));
                }
            }
        }
    }

    /// `a <- self * a`, by row operations. The symbol must be valid for `a.dim()`.
    pub fn apply_left(&self, a: &mut IntMatrix) {
        let (i, j) = (self.i - 1, self.j - 1);
        match self.kind {
            SymbolKind::Elementary => a.add_row_multiple(i, j, &self.t),
            SymbolKind::ConjElementary { conj_dim: k } => {
                // left multiplication by y_k
                for r in (1..k).rev() {
                    a.add_row_multiple(r, r - 1, &BigInt::from(-1));
                }
                a.add_row_multiple(i, j, &self.t);
                // left multiplication by y_k^{-1}: prefix sums of the first k rows
                for r in 1..k {
                    a.add_row_multiple(r, r - 1, &BigInt::one());
                }
            }
        }
    }
}

impl fmt::Display for GenSymbol {
    /// `E i j t` or `C k i j t`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SymbolKind::Elementary => write!(f, "E {} {} {}", self.i, self.j, self.t),
            SymbolKind::ConjElementary { conj_dim } => {
                write!(f, "C {} {} {} {}", conj_dim, self.i, self.j, self.t)
            }
        }
    }
}

impl FromStr for GenSymbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSymbol(s.to_string());
        let fields: Vec<&str> = s.split_whitespace().collect();
        let index = |v: &str| v.parse::<usize>().map_err(|_| bad());
        let value = |v: &str| v.parse::<BigInt>().map_err(|_| bad());
        match fields.as_slice() {
            ["E", i, j, t] => Ok(Self::elementary(index(i)?, index(j)?, value(t)?)),
            ["C", k, i, j, t] => Ok(Self::conjugated(index(k)?, index(i)?, index(j)?, value(t)?)),
            _ => Err(bad()),
        }
    }
}

/// Number of symbols of each kind in a word.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolCounts {
    pub elementary: usize,
    /// Conjugated symbols keyed by conjugator dimension.
    pub conjugated: BTreeMap<usize, usize>,
}

impl SymbolCounts {
    pub fn total(&self) -> usize {
        self.elementary + self.conjugated.values().sum::<usize>()
    }
}

/// A word in the alphabet of `n x n` symbols, evaluated left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    n: usize,
    symbols: Vec<GenSymbol>,
}

impl Word {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            symbols: Vec::new(),
        }
    }

    /// Builds a word, validating each symbol against dimension `n`.
    pub fn from_symbols(n: usize, symbols: Vec<GenSymbol>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(n));
        }
        for (k, s) in symbols.iter().enumerate() {
            s.validate(n)
                .map_err(|e| Error::InvalidWord(format!("symbol {}: {e}", k + 1)))?;
        }
        Ok(Self { n, symbols })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn symbols(&self) -> &[GenSymbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn push(&mut self, s: GenSymbol) -> Result<()> {
        s.validate(self.n)
            .map_err(|e| Error::InvalidWord(format!("symbol {}: {e}", self.len() + 1)))?;
        self.symbols.push(s);
        Ok(())
    }

    /// Appends every symbol of `other`, which must have the same dimension.
    pub fn extend(&mut self, other: &Word) -> Result<()> {
        if other.n != self.n {
            return Err(Error::InvalidWord(format!(
                "cannot concatenate dimension {} with dimension {}",
                self.n, other.n
            )));
        }
        self.symbols.extend(other.symbols.iter().cloned());
        Ok(())
    }

    /// The same symbols read in a larger ambient dimension.
    pub fn embed(&self, n: usize) -> Result<Self> {
        if n < self.n {
            return Err(Error::InvalidDimension(n));
        }
        Ok(Self {
            n,
            symbols: self.symbols.clone(),
        })
    }

    pub fn inverse(&self) -> Self {
        Self {
            n: self.n,
            symbols: self.symbols.iter().rev().map(GenSymbol::inverse).collect(),
        }
    }

    pub fn eval(&self) -> IntMatrix {
        let mut a = IntMatrix::identity(self.n);
        for s in &self.symbols {
            s.apply_right(&mut a);
        }
        a
    }

    /// Index of the first symbol whose value is not divisible by `m`.
    pub fn first_off_level(&self, m: &BigInt) -> Option<usize> {
        self.symbols.iter().position(|s| !s.has_level(m))
    }

    pub fn counts(&self) -> SymbolCounts {
        let mut c = SymbolCounts::default();
        for s in &self.symbols {
            match s.kind {
                SymbolKind::Elementary => c.elementary += 1,
                SymbolKind::ConjElementary { conj_dim } => {
                    *c.conjugated.entry(conj_dim).or_default() += 1
                }
            }
        }
        c
    }
}

/// Exact product of the symbols of `w`; the empty word gives the identity.
pub fn eval_word(w: &Word) -> Result<IntMatrix> {
    for (k, s) in w.symbols.iter().enumerate() {
        s.validate(w.n)
            .map_err(|e| Error::InvalidWord(format!("symbol {}: {e}", k + 1)))?;
    }
    Ok(w.eval())
}

/// The symmetric generating set `Σ_n(m)`: every `X_ij(±m)` and its conjugate by `y_n`.
pub fn sigma_symbols(n: usize, m: u64) -> Result<Vec<GenSymbol>> {
    if n < 3 {
        return Err(Error::InvalidDimension(n));
    }
    let mut out = Vec::with_capacity(4 * n * (n - 1));
    for conj in [false, true] {
        for i in 1..=n {
            for j in (1..=n).filter(|&j| j != i) {
                for sign in [1i64, -1] {
                    let t = BigInt::from(m) * sign;
                    out.push(if conj {
                        GenSymbol::conjugated(n, i, j, t)
                    } else {
                        GenSymbol::elementary(i, j, t)
                    });
                }
            }
        }
    }
    Ok(out)
}

/// A word of exactly `len` symbols drawn uniformly from `alphabet`.
pub fn random_word<R: Rng + ?Sized>(
    n: usize,
    alphabet: &[GenSymbol],
    len: usize,
    rng: &mut R,
) -> Result<Word> {
    if alphabet.is_empty() && len > 0 {
        return Err(Error::InvalidParameter("empty alphabet".to_string()));
    }
    let symbols = (0..len)
        .map(|_| alphabet[rng.random_range(0..alphabet.len())].clone())
        .collect();
    Word::from_symbols(n, symbols)
}

/// Checks `[X_ik(s), X_kj(t)] = X_ij(st)` with `[a, b] = a b a^{-1} b^{-1}`
/// by exact multiplication in dimension `max(i, k, j)`.
pub fn steinberg_check(i: usize, k: usize, j: usize, s: &BigInt, t: &BigInt) -> Result<bool> {
    let n = i.max(j).max(k);
    if i == k || k == j || i == j || i == 0 || j == 0 || k == 0 {
        return Err(Error::InvalidPositions { n });
    }
    if s.is_zero() || t.is_zero() {
        return Err(Error::InvalidSymbol("zero value".to_string()));
    }
    let a = IntMatrix::elementary(n, i, k, s.clone())?;
    let b = IntMatrix::elementary(n, k, j, t.clone())?;
    let a_inv = IntMatrix::elementary(n, i, k, -s)?;
    let b_inv = IntMatrix::elementary(n, k, j, -t)?;
    let comm = &(&(&a * &b) * &a_inv) * &b_inv;
    Ok(comm == IntMatrix::elementary(n, i, j, s * t)?)
}
