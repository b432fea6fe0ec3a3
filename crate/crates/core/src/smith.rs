//! Smith normal form over `Z` and linear congruence solving.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::mod_inverse;
use crate::{Error, Result};

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal, each diagonal
/// entry dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
    /// The `min(rows, cols)` diagonal entries of `D`, all non-negative.
    pub diagonal: Vec<BigInt>,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as u8)).collect())
        .collect()
}

fn row_axpy(m: &mut [Vec<BigInt>], target: usize, source: usize, t: &BigInt) {
    if t.is_zero() {
        return;
    }
    let (a, b) = if target < source {
        let (lo, hi) = m.split_at_mut(source);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(target);
        (&mut hi[0], &lo[source])
    };
    for (x, y) in a.iter_mut().zip(b.iter()) {
        *x += t * y;
    }
}

fn col_axpy(m: &mut [Vec<BigInt>], target: usize, source: usize, t: &BigInt) {
    if t.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let delta = t * &row[source];
        row[target] += delta;
    }
}

fn col_swap(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Computes the Smith normal form of a `rows x cols` integer matrix.
pub fn smith_normal_form(m: &[Vec<BigInt>]) -> Result<SmithForm> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if let Some(bad) = m.iter().find(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch {
            expected: cols,
            found: bad.len(),
        });
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                let diagonal = (0..rows.min(cols)).map(|k| a[k][k].abs()).collect();
                return Ok(finish(a, u, v, diagonal));
            };
            a.swap(t, pi);
            u.swap(t, pi);
            col_swap(&mut a, t, pj);
            col_swap(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t].div_floor(&a[t][t]);
                let nq = -q;
                row_axpy(&mut a, i, t, &nq);
                row_axpy(&mut u, i, t, &nq);
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = a[t][j].div_floor(&a[t][t]);
                let nq = -q;
                col_axpy(&mut a, j, t, &nq);
                col_axpy(&mut v, j, t, &nq);
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // enforce divisibility of the remaining block by the pivot
            let bad_row =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad_row {
                Some(i) => {
                    let one = BigInt::one();
                    row_axpy(&mut a, t, i, &one);
                    row_axpy(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -core::mem::take(x);
            }
            for x in u[t].iter_mut() {
                *x = -core::mem::take(x);
            }
        }
    }
    let diagonal = (0..rows.min(cols)).map(|k| a[k][k].abs()).collect();
    Ok(finish(a, u, v, diagonal))
}

fn finish(
    a: Vec<Vec<BigInt>>,
    mut u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    diagonal: Vec<BigInt>,
) -> SmithForm {
    // zero-pivot exits can leave negative diagonal entries; fold the sign into U
    for (k, row) in a.iter().enumerate().take(diagonal.len()) {
        if row[k].is_negative() {
            for x in u[k].iter_mut() {
                *x = -core::mem::take(x);
            }
        }
    }
    SmithForm { u, v, diagonal }
}

fn mat_vec(m: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

/// Solves `M x ≡ b (mod modulus)`, returning a solution with entries in
/// `0..modulus`, or `None` when the system has no solution.
pub fn solve_mod(m: &[Vec<BigInt>], b: &[BigInt], modulus: &BigInt) -> Result<Option<Vec<BigInt>>> {
    if !modulus.is_positive() {
        return Err(Error::InvalidParameter("modulus must be positive".into()));
    }
    if m.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: m.len(),
            found: b.len(),
        });
    }
    let cols = m.first().map_or(0, Vec::len);
    let snf = smith_normal_form(m)?;
    let c = mat_vec(&snf.u, b);
    let mut z = vec![BigInt::zero(); cols];
    for (i, ci) in c.iter().enumerate() {
        let d = snf.diagonal.get(i).cloned().unwrap_or_default();
        if d.is_zero() {
            if !ci.is_multiple_of(modulus) {
                return Ok(None);
            }
            continue;
        }
        let g = d.gcd(modulus);
        if !ci.is_multiple_of(&g) {
            return Ok(None);
        }
        let reduced = modulus / &g;
        let inv = mod_inverse(&(&d / &g), &reduced)
            .ok_or(Error::InternalInvariant("reduced pivot is not invertible"))?;
        z[i] = ((ci / &g) * inv).mod_floor(&reduced);
    }
    Ok(Some(
        mat_vec(&snf.v, &z)
            .into_iter()
            .map(|x| x.mod_floor(modulus))
            .collect(),
    ))
}
