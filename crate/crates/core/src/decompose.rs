//! Bounded-generation words for elements of `Γ_n(m)`.
//!
//! [`decompose_full`] peels one level at a time: a coset word in `Σ_k(m)`
//! moves the current `k x k` block into `Γ_k(m^2)`, then [`corner_reduce`]
//! clears its last row and column with level-`m` elementary matrices. The
//! recursion stops at a `Γ_2(m)` residual.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{balanced_mod, extended_gcd};
use crate::matrix::{make_y, make_y_inverse, sl_coordinates, CongruenceLevel, IntMatrix};
use crate::smith::solve_mod;
use crate::stable_range::plan_corner;
use crate::word::{GenSymbol, SymbolCounts, Word};
use crate::{Error, Result};

/// Maximum word length of [`corner_reduce`] in dimension `n`.
pub fn corner_budget(n: usize) -> usize {
    3 * n - 2
}

/// Maximum word length of [`abelian_coset_word`] in dimension `n`.
pub fn coset_budget(n: usize) -> usize {
    n * n - 1
}

/// `B(n) = Σ_{k=3}^{n} ((k^2 - 1) + (3k - 2))`: 15, 40, 77 for n = 3, 4, 5.
pub fn word_budget(n: usize) -> usize {
    (3..=n).map(|k| coset_budget(k) + corner_budget(k)).sum()
}

fn check_level(a: &IntMatrix, level: &BigInt) -> Result<()> {
    let det = a.determinant();
    if !det.is_one() {
        return Err(Error::NotUnimodular(det));
    }
    if !a.congruent_to_identity(level) {
        return Err(Error::WrongLevel {
            n: a.dim(),
            level: level.clone(),
        });
    }
    Ok(())
}

/// Output of [`corner_reduce`]: `A = eval(word) * diag(block, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerReduction {
    pub word: Word,
    pub block: IntMatrix,
    /// Set when one symbol beyond `3n - 2` was needed (only possible for `m = 1`).
    pub relaxed: bool,
}

/// Writes `A ∈ Γ_n(m^2)` as at most `3n - 2` level-`m` elementary matrices
/// times `diag(C, 1)` with `C ∈ Γ_{n-1}(m)`.
pub fn corner_reduce(a: &IntMatrix, m: CongruenceLevel) -> Result<CornerReduction> {
    let n = a.dim();
    if n < 3 {
        return Err(Error::InvalidDimension(n));
    }
    check_level(a, &m.squared())?;
    let mb = m.to_bigint();
    let m2 = m.squared();
    let last = n - 1;
    let mut work = a.clone();
    let mut ops: Vec<GenSymbol> = Vec::new();
    let mut relaxed = false;

    let mut apply = |work: &mut IntMatrix, i: usize, j: usize, t: BigInt| {
        if !t.is_zero() {
            let s = GenSymbol::elementary(i + 1, j + 1, t);
            s.apply_left(work);
            ops.push(s);
        }
    };

    if !work[(last, last)].is_one() {
        if (0..last).all(|i| work[(i, last)].is_zero()) {
            // corner is -1 with nothing above it, which needs m = 1
            apply(&mut work, 0, last, mb.clone());
            relaxed = true;
        }
        let col: Vec<BigInt> = (0..n).map(|i| work[(i, last)].clone()).collect();
        let second = if !col[1].is_zero() {
            1
        } else {
            (0..last)
                .find(|&i| !col[i].is_zero())
                .ok_or(Error::InternalInvariant(
                    "no nonzero entry above the corner",
                ))?
        };
        let first = if second == 0 { 1 } else { 0 };
        let plan = plan_corner(&mb, &col, first, second)?;
        for (k, x) in &plan.fold {
            apply(&mut work, first, *k, x * &mb);
        }
        apply(&mut work, first, last, &plan.x_last * &mb);
        if work[(first, last)] != plan.first_entry {
            return Err(Error::InternalInvariant(
                "corner plan diverged from the matrix",
            ));
        }

        let (g, y1, y2) = extended_gcd(&work[(first, last)], &work[(second, last)]);
        if g != mb {
            return Err(Error::InternalInvariant("corner gcd is not m"));
        }
        let (a_n, rem) = (&work[(last, last)] - 1u32).div_rem(&m2);
        if !rem.is_zero() {
            return Err(Error::InternalInvariant("corner entry is not 1 mod m^2"));
        }
        let scale = -(&a_n * &mb);
        apply(&mut work, last, first, &scale * y1);
        apply(&mut work, last, second, &scale * y2);
        if !work[(last, last)].is_one() {
            return Err(Error::InternalInvariant(
                "Bezout step did not produce a unit corner",
            ));
        }
    }

    for i in 0..last {
        let c = work[(i, last)].clone();
        if !c.is_multiple_of(&mb) {
            return Err(Error::InternalInvariant(
                "column entry is not divisible by m",
            ));
        }
        apply(&mut work, i, last, -c);
    }

    // work = [[C, 0], [r, 1]] = (Π_j X_{n,j}(u_j)) * diag(C, 1) with u = r C^{-1}
    let block = work.top_left(last);
    let block_inv = block.inverse()?;
    let mut word = Word::new(n);
    for s in &ops {
        word.push(s.inverse())?;
    }
    for j in 0..last {
        let u: BigInt = (0..last)
            .map(|i| &work[(last, i)] * &block_inv[(i, j)])
            .sum();
        if !u.is_zero() {
            word.push(GenSymbol::elementary(n, j + 1, u))?;
        }
    }

    if word.first_off_level(&mb).is_some() {
        return Err(Error::InternalInvariant(
            "corner word has a symbol below level m",
        ));
    }
    if word.len() > corner_budget(n) + usize::from(relaxed) {
        return Err(Error::InternalInvariant("corner word exceeds its budget"));
    }
    if &word.eval() * &block.embed(n) != *a {
        return Err(Error::InternalInvariant(
            "corner reduction does not reconstruct the input",
        ));
    }
    if !block.congruent_to_identity(&mb) {
        return Err(Error::InternalInvariant("corner block is not in Γ(m)"));
    }
    Ok(CornerReduction {
        word,
        block,
        relaxed,
    })
}

/// The generators used for coset words, as `(symbol with t = 1, coordinates)`:
/// every `E_ij`, then the conjugates `y_n^{-1} E_{j-1,j} y_n` for `j = 2..n`.
fn coset_basis(n: usize) -> Result<Vec<(GenSymbol, Vec<BigInt>)>> {
    let y = make_y(n)?;
    let y_inv = make_y_inverse(n)?;
    let mut out = Vec::with_capacity(n * n - 1);
    for i in 1..=n {
        for j in (1..=n).filter(|&j| j != i) {
            let mut e = IntMatrix::zeros(n);
            e[(i - 1, j - 1)] = BigInt::one();
            out.push((
                GenSymbol::elementary(i, j, BigInt::one()),
                sl_coordinates(&e),
            ));
        }
    }
    for j in 2..=n {
        let mut e = IntMatrix::zeros(n);
        e[(j - 2, j - 1)] = BigInt::one();
        let z = &(&y_inv * &e) * &y;
        out.push((
            GenSymbol::conjugated(n, j - 1, j, BigInt::one()),
            sl_coordinates(&z),
        ));
    }
    Ok(out)
}

/// A word of at most `n^2 - 1` symbols from `Σ_n(m)`-type letters whose
/// product agrees with `A ∈ Γ_n(m)` modulo `m^2`.
pub fn abelian_coset_word(a: &IntMatrix, m: CongruenceLevel) -> Result<Word> {
    let n = a.dim();
    if n < 3 {
        return Err(Error::InvalidDimension(n));
    }
    let mb = m.to_bigint();
    check_level(a, &mb)?;
    let mut word = Word::new(n);
    if mb.is_one() {
        return Ok(word);
    }
    let mut b = a.clone();
    for i in 0..n {
        b[(i, i)] -= 1u32;
    }
    let rhs: Vec<BigInt> = sl_coordinates(&b).into_iter().map(|v| v / &mb).collect();
    let basis = coset_basis(n)?;
    let dim = basis.len();
    let system: Vec<Vec<BigInt>> = (0..dim)
        .map(|r| basis.iter().map(|(_, c)| c[r].clone()).collect())
        .collect();
    let coeffs = solve_mod(&system, &rhs, &mb)?
        .ok_or(Error::InternalInvariant("coset system has no solution"))?;
    for ((sym, _), c) in basis.into_iter().zip(coeffs) {
        let c = balanced_mod(&c, &mb);
        if !c.is_zero() {
            word.push(GenSymbol { t: c * &mb, ..sym })?;
        }
    }
    let m2 = m.squared();
    let e = word.eval();
    let agrees = a
        .entries()
        .iter()
        .zip(e.entries())
        .all(|(x, y)| (x - y).is_multiple_of(&m2));
    if !agrees {
        return Err(Error::InternalInvariant(
            "coset word does not match modulo m^2",
        ));
    }
    Ok(word)
}

/// A certified decomposition `input = eval(word) * diag(residual, I)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub input: IntMatrix,
    pub word: Word,
    /// The `2 x 2` residual in `Γ_2(m)`.
    pub residual: IntMatrix,
    pub level: CongruenceLevel,
    /// Set when a corner step used one symbol beyond its budget (only for `m = 1`).
    pub relaxed: bool,
}

impl Decomposition {
    pub fn counts(&self) -> SymbolCounts {
        self.word.counts()
    }

    pub fn budget(&self) -> usize {
        word_budget(self.input.dim())
    }

    /// The product `eval(word) * diag(residual, I)`.
    pub fn reconstruct(&self) -> IntMatrix {
        &self.word.eval() * &self.residual.embed(self.input.dim())
    }

    /// Re-checks exact reconstruction, the residual level, symbol levels and the budget.
    pub fn verify(&self) -> bool {
        let mb = self.level.to_bigint();
        let det_ok = self.residual.determinant().is_one();
        let extra = if self.relaxed { self.input.dim() } else { 0 };
        det_ok
            && self.residual.dim() == 2
            && self.residual.congruent_to_identity(&mb)
            && self.word.first_off_level(&mb).is_none()
            && self.word.len() <= self.budget() + extra
            && self.reconstruct() == self.input
    }
}

/// Decomposes `A ∈ Γ_n(m)`, `n >= 3`, down to a `Γ_2(m)` residual.
pub fn decompose_full(a: &IntMatrix, m: CongruenceLevel) -> Result<Decomposition> {
    let n = a.dim();
    if n < 3 {
        return Err(Error::InvalidDimension(n));
    }
    check_level(a, &m.to_bigint())?;
    let mut word = Word::new(n);
    let mut block = a.clone();
    let mut relaxed = false;
    for k in (3..=n).rev() {
        if block.is_corner_trivial() {
            block = block.top_left(k - 1);
            continue;
        }
        let coset = abelian_coset_word(&block, m)?;
        let mut reduced = block;
        for s in coset.inverse().symbols().iter().rev() {
            s.apply_left(&mut reduced);
        }
        let corner = corner_reduce(&reduced, m)?;
        relaxed |= corner.relaxed;
        word.extend(&coset.embed(n)?)?;
        word.extend(&corner.word.embed(n)?)?;
        block = corner.block;
    }
    let d = Decomposition {
        input: a.clone(),
        word,
        residual: block,
        level: m,
        relaxed,
    };
    if !d.verify() {
        return Err(Error::InternalInvariant(
            "decomposition failed verification",
        ));
    }
    Ok(d)
}

/// Result of [`residual_reduce_greedy`]: `r = eval(word) * remainder`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyOutcome {
    pub word: Word,
    pub remainder: IntMatrix,
    pub success: bool,
    pub iterations: usize,
}

/// Euclidean reduction of `r ∈ Γ_2(m)` by level-`m` moves `X_12(qm)`,
/// `X_21(qm)`. Succeeds when the remainder reaches the identity; gives up
/// when no move shrinks the first column or after `cap` moves.
pub fn residual_reduce_greedy(
    r: &IntMatrix,
    m: CongruenceLevel,
    cap: usize,
) -> Result<GreedyOutcome> {
    if r.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: r.dim(),
        });
    }
    let mb = m.to_bigint();
    check_level(r, &mb)?;
    let mut rem = r.clone();
    let mut word = Word::new(2);
    let mut iterations = 0;

    let mv = |rem: &mut IntMatrix, word: &mut Word, i: usize, j: usize, t: BigInt| {
        GenSymbol::elementary(i, j, -&t).apply_left(rem);
        word.push(GenSymbol::elementary(i, j, t))
    };

    let success = loop {
        if rem[(1, 0)].is_zero() {
            if !rem[(0, 0)].is_one() {
                break false;
            }
            let b = rem[(0, 1)].clone();
            if !b.is_zero() {
                if iterations >= cap {
                    break false;
                }
                mv(&mut rem, &mut word, 1, 2, b)?;
                iterations += 1;
            }
            break true;
        }
        if iterations >= cap {
            break false;
        }
        let (a, c) = (rem[(0, 0)].clone(), rem[(1, 0)].clone());
        let (i, j, num, den) = if a.abs() >= c.abs() {
            (1, 2, a, &c * &mb)
        } else {
            (2, 1, c, &a * &mb)
        };
        if den.is_zero() {
            break false;
        }
        let q = nearest_quotient(&num, &den);
        if q.is_zero() {
            break false;
        }
        mv(&mut rem, &mut word, i, j, q * &mb)?;
        iterations += 1;
    };
    Ok(GreedyOutcome {
        word,
        remainder: rem,
        success,
        iterations,
    })
}

/// `round(num / den)` with ties toward zero.
fn nearest_quotient(num: &BigInt, den: &BigInt) -> BigInt {
    let (q, r) = num.div_mod_floor(den);
    let twice = &r * 2u32;
    let beyond_half = if den.is_positive() {
        twice > *den
    } else {
        twice < *den
    };
    if beyond_half {
        q + 1u32
    } else {
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{random_word, sigma_symbols};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn lvl(m: u64) -> CongruenceLevel {
        CongruenceLevel::new(m).unwrap()
    }

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn budgets() {
        assert_eq!(word_budget(3), 15);
        assert_eq!(word_budget(4), 40);
        assert_eq!(word_budget(5), 77);
    }

    #[test]
    fn corner_identity_and_elementary() {
        let r = corner_reduce(&IntMatrix::identity(3), lvl(2)).unwrap();
        assert!(r.word.is_empty());
        assert!(r.block.is_identity());
        let a = IntMatrix::elementary(3, 1, 3, b(4)).unwrap();
        let r = corner_reduce(&a, lvl(2)).unwrap();
        assert!(r.word.len() <= 7);
        assert_eq!(&r.word.eval() * &r.block.embed(3), a);
    }

    #[test]
    fn corner_rejects_wrong_level() {
        let a = IntMatrix::elementary(3, 1, 3, b(2)).unwrap();
        assert!(matches!(
            corner_reduce(&a, lvl(2)),
            Err(Error::WrongLevel { .. })
        ));
    }

    #[test]
    fn corner_random_level_m_squared() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 3..=5 {
            for m in [2u64, 3] {
                let alphabet: Vec<GenSymbol> = sigma_symbols(n, m * m).unwrap();
                for len in [0, 5, 30] {
                    let a = random_word(n, &alphabet, len, &mut rng).unwrap().eval();
                    let r = corner_reduce(&a, lvl(m)).unwrap();
                    assert!(r.word.len() <= corner_budget(n));
                    assert!(!r.relaxed);
                }
            }
        }
    }

    #[test]
    fn corner_sign_corner_for_level_one() {
        let a = IntMatrix::from_i64_rows(&[&[-1, 0, 0], &[0, 1, 0], &[0, 0, -1]]).unwrap();
        let r = corner_reduce(&a, lvl(1)).unwrap();
        assert!(r.relaxed);
        assert_eq!(&r.word.eval() * &r.block.embed(3), a);
    }

    #[test]
    fn coset_word_examples() {
        let x = IntMatrix::elementary(3, 1, 2, b(5)).unwrap();
        let w = abelian_coset_word(&x, lvl(5)).unwrap();
        assert_eq!(w.symbols(), &[GenSymbol::elementary(1, 2, b(5))]);
        assert!(abelian_coset_word(&IntMatrix::identity(4), lvl(3))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn coset_word_diagonal_deviation() {
        // I + 2B mod 4 with B having diagonal (1, 1, 0)
        let a = IntMatrix::from_i64_rows(&[&[3, 2, 0], &[4, 3, 0], &[0, 0, 1]]).unwrap();
        assert!(a.determinant().is_one());
        let w = abelian_coset_word(&a, lvl(2)).unwrap();
        assert!(w.len() <= 8);
    }

    #[test]
    fn coset_basis_is_unimodular() {
        for n in 3..=6 {
            let basis = coset_basis(n).unwrap();
            let dim = basis.len();
            let rows: Vec<Vec<BigInt>> = (0..dim)
                .map(|r| basis.iter().map(|(_, c)| c[r].clone()).collect())
                .collect();
            let m = IntMatrix::from_rows(rows).unwrap();
            assert!(m.determinant().abs().is_one(), "n = {n}");
        }
    }

    #[test]
    fn full_decomposition_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 3..=5 {
            for m in [2u64, 3] {
                let alphabet = sigma_symbols(n, m).unwrap();
                for _ in 0..10 {
                    let a = random_word(n, &alphabet, 40, &mut rng).unwrap().eval();
                    let d = decompose_full(&a, lvl(m)).unwrap();
                    assert!(d.verify());
                    assert!(d.word.len() <= word_budget(n));
                }
            }
        }
    }

    #[test]
    fn embedded_input_is_left_alone() {
        let r = IntMatrix::from_i64_rows(&[&[5, 2], &[2, 1]]).unwrap();
        let d = decompose_full(&r.embed(4), lvl(2)).unwrap();
        assert!(d.word.is_empty());
        assert_eq!(d.residual, r);
    }

    #[test]
    fn greedy_examples() {
        let x = IntMatrix::elementary(2, 1, 2, b(10)).unwrap();
        let g = residual_reduce_greedy(&x, lvl(2), 100).unwrap();
        assert!(g.success);
        assert_eq!(g.word.symbols(), &[GenSymbol::elementary(1, 2, b(10))]);
        let g = residual_reduce_greedy(&IntMatrix::identity(2), lvl(2), 100).unwrap();
        assert!(g.success && g.word.is_empty());
        let r = IntMatrix::from_i64_rows(&[&[5, 2], &[2, 1]]).unwrap();
        let g = residual_reduce_greedy(&r, lvl(2), 100).unwrap();
        assert_eq!(&g.word.eval() * &g.remainder, r);
        if g.success {
            assert!(g.remainder.is_identity());
        }
        let minus = IntMatrix::from_i64_rows(&[&[-1, 0], &[0, -1]]).unwrap();
        assert!(!residual_reduce_greedy(&minus, lvl(2), 100).unwrap().success);
    }
}
