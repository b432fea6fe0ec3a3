//! Square matrices over `Z` with arbitrary-precision entries.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// An `n x n` integer matrix stored row-major. Indexing is zero-based.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

/// The level `m >= 1` of a principal congruence subgroup `Γ_n(m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CongruenceLevel(u64);

impl CongruenceLevel {
    pub fn new(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter(
                "congruence level must be positive".into(),
            ));
        }
        Ok(Self(m))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// `m^2` as a big integer (levels above `u32::MAX` do not fit a `u64` square).
    pub fn squared(self) -> BigInt {
        let m = self.to_bigint();
        &m * &m
    }

    pub fn divides(self, value: &BigInt) -> bool {
        value.is_multiple_of(&self.to_bigint())
    }
}

impl fmt::Display for CongruenceLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![BigInt::zero(); n * n],
        }
    }

    /// Builds a matrix from rows; every row must have length `rows.len()`.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidDimension(0));
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(Self { n, entries })
    }

    /// Convenience constructor for small literal matrices.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    /// The elementary matrix `X_ij(t)` with 1-based positions `i != j`.
    pub fn elementary(n: usize, i: usize, j: usize, t: BigInt) -> Result<Self> {
        if i == j || i == 0 || j == 0 || i > n || j > n {
            return Err(Error::InvalidPositions { n });
        }
        let mut m = Self::identity(n);
        m[(i - 1, j - 1)] = t;
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let v = &self[(i, j)];
                if i == j {
                    v.is_one()
                } else {
                    v.is_zero()
                }
            })
        })
    }

    /// `row_target += t * row_source`, i.e. left multiplication by `X_{target,source}(t)`.
    pub fn add_row_multiple(&mut self, target: usize, source: usize, t: &BigInt) {
        if t.is_zero() {
            return;
        }
        let n = self.n;
        for c in 0..n {
            let delta = t * &self.entries[source * n + c];
            self.entries[target * n + c] += delta;
        }
    }

    /// `col_target += t * col_source`, i.e. right multiplication by `X_{source,target}(t)`.
    pub fn add_col_multiple(&mut self, target: usize, source: usize, t: &BigInt) {
        if t.is_zero() {
            return;
        }
        let n = self.n;
        for r in 0..n {
            let delta = t * &self.entries[r * n + source];
            self.entries[r * n + target] += delta;
        }
    }

    /// Top-left `k x k` block.
    pub fn top_left(&self, k: usize) -> Self {
        let mut out = Self::zeros(k);
        for i in 0..k {
            for j in 0..k {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Block-diagonal `diag(self, I)` of size `n >= self.dim()`.
    pub fn embed(&self, n: usize) -> Self {
        assert!(n >= self.n, "cannot embed into a smaller dimension");
        let mut out = Self::identity(n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// True when the last row and column are those of the identity, so the
    /// matrix is `diag(B, 1)` for a smaller block `B`.
    pub fn is_corner_trivial(&self) -> bool {
        let k = self.n - 1;
        self[(k, k)].is_one() && (0..k).all(|i| self[(i, k)].is_zero() && self[(k, i)].is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n).map(|i| &self[(i, i)]).sum()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.entries.clone();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for c in 0..n {
                    a.swap(k * n + c, p * n + c);
                }
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
            }
            prev = a[k * n + k].clone();
        }
        let det = a[n * n - 1].clone();
        if negate {
            -det
        } else {
            det
        }
    }

    /// Minor obtained by deleting row `r` and column `c`.
    fn minor(&self, r: usize, c: usize) -> Self {
        let n = self.n;
        let mut entries = Vec::with_capacity((n - 1) * (n - 1));
        for i in (0..n).filter(|&i| i != r) {
            for j in (0..n).filter(|&j| j != c) {
                entries.push(self[(i, j)].clone());
            }
        }
        Self { n: n - 1, entries }
    }

    /// Classical adjugate, so that `A * adj(A) = det(A) * I`.
    pub fn adjugate(&self) -> Self {
        let n = self.n;
        if n == 1 {
            return Self::identity(1);
        }
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let d = self.minor(i, j).determinant();
                out[(j, i)] = if (i + j) % 2 == 0 { d } else { -d };
            }
        }
        out
    }

    /// Exact inverse of a matrix with determinant `±1`.
    pub fn inverse(&self) -> Result<Self> {
        let det = self.determinant();
        if !det.abs().is_one() {
            return Err(Error::NotUnimodular(det));
        }
        let mut adj = self.adjugate();
        if det.is_negative() {
            for e in adj.entries.iter_mut() {
                *e = -core::mem::take(e);
            }
        }
        Ok(adj)
    }

    /// True when `self ≡ I (mod m)` entrywise; no determinant check.
    pub fn congruent_to_identity(&self, m: &BigInt) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let v = &self[(i, j)];
                if i == j {
                    (v - 1u32).is_multiple_of(m)
                } else {
                    v.is_multiple_of(m)
                }
            })
        })
    }

    /// Entries reduced into `0..q`, row-major.
    pub fn residues(&self, q: u64) -> Vec<u64> {
        self.entries
            .iter()
            .map(|e| crate::arith::residue_u64(e, q))
            .collect()
    }

    /// Largest absolute value of any entry (zero for the empty matrix).
    pub fn max_abs_entry(&self) -> BigInt {
        self.entries
            .iter()
            .map(|e| e.abs())
            .max()
            .unwrap_or_default()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.n + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matrix product");
        let n = self.n;
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs.entries[k * n + j];
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{:?}", self.rows_for_debug())
    }
}

impl IntMatrix {
    fn rows_for_debug(&self) -> Vec<Vec<&BigInt>> {
        (0..self.n).map(|i| self.row(i).iter().collect()).collect()
    }
}

impl fmt::Display for IntMatrix {
    /// The text matrix format: `n` on the first line, then one row per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for i in 0..self.n {
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{v}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// The lower-bidiagonal conjugator `y_n`: ones on the diagonal and `-1` on
/// every subdiagonal entry.
pub fn make_y(n: usize) -> Result<IntMatrix> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    let mut y = IntMatrix::identity(n);
    for i in 0..n - 1 {
        y[(i + 1, i)] = BigInt::from(-1);
    }
    Ok(y)
}

/// Inverse of `y_n`: ones on and below the diagonal.
pub fn make_y_inverse(n: usize) -> Result<IntMatrix> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    let mut y = IntMatrix::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            y[(i, j)] = BigInt::one();
        }
    }
    Ok(y)
}

/// Membership in `Γ_n(m)`: `A ≡ I (mod m)`. Fails unless `det A = 1`.
pub fn is_in_gamma(a: &IntMatrix, m: CongruenceLevel) -> Result<bool> {
    let det = a.determinant();
    if !det.is_one() {
        return Err(Error::NotUnimodular(det));
    }
    Ok(a.congruent_to_identity(&m.to_bigint()))
}

/// Coordinates of a trace-zero `n x n` matrix: off-diagonal entries in
/// row-major order, then the first `n - 1` diagonal entries.
pub fn sl_coordinates(z: &IntMatrix) -> Vec<BigInt> {
    let n = z.dim();
    let mut out = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push(z[(i, j)].clone());
            }
        }
    }
    for i in 0..n - 1 {
        out.push(z[(i, i)].clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn y_matrices() {
        assert_eq!(make_y(2).unwrap(), m(&[&[1, 0], &[-1, 1]]));
        assert_eq!(
            make_y(3).unwrap(),
            m(&[&[1, 0, 0], &[-1, 1, 0], &[0, -1, 1]])
        );
        for n in 2..=8 {
            let y = make_y(n).unwrap();
            assert!(y.determinant().is_one());
            assert!((&y * &make_y_inverse(n).unwrap()).is_identity());
        }
        assert_eq!(make_y(1), Err(Error::InvalidDimension(1)));
    }

    #[test]
    fn gamma_membership() {
        let five = CongruenceLevel::new(5).unwrap();
        assert!(is_in_gamma(&IntMatrix::identity(3), five).unwrap());
        let x13 = IntMatrix::elementary(3, 1, 3, BigInt::from(4)).unwrap();
        assert!(is_in_gamma(&x13, CongruenceLevel::new(2).unwrap()).unwrap());
        assert!(!is_in_gamma(&x13, CongruenceLevel::new(8).unwrap()).unwrap());
        assert!(!is_in_gamma(&make_y(3).unwrap(), CongruenceLevel::new(2).unwrap()).unwrap());
        let det2 = m(&[&[2, 0], &[0, 1]]);
        assert_eq!(
            is_in_gamma(&det2, five),
            Err(Error::NotUnimodular(BigInt::from(2)))
        );
    }

    #[test]
    fn determinant_with_pivoting() {
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant(), BigInt::from(-1));
        assert_eq!(
            m(&[&[0, 2, 1], &[3, 0, 4], &[5, 6, 0]]).determinant(),
            BigInt::from(58)
        );
        assert_eq!(m(&[&[1, 2], &[2, 4]]).determinant(), BigInt::from(0));
    }

    #[test]
    fn unimodular_inverse() {
        let a = m(&[&[2, 3, 1], &[1, 2, 1], &[1, 1, 1]]);
        assert!(a.determinant().abs().is_one());
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_identity());
        assert!((&inv * &a).is_identity());
        assert!(matches!(
            m(&[&[2, 0], &[0, 1]]).inverse(),
            Err(Error::NotUnimodular(_))
        ));
    }

    #[test]
    fn row_and_column_operations_match_products() {
        let a = m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        let t = BigInt::from(-3);
        let mut rows = a.clone();
        rows.add_row_multiple(0, 2, &t);
        assert_eq!(
            rows,
            &IntMatrix::elementary(3, 1, 3, t.clone()).unwrap() * &a
        );
        let mut cols = a.clone();
        cols.add_col_multiple(0, 2, &t);
        assert_eq!(cols, &a * &IntMatrix::elementary(3, 3, 1, t).unwrap());
    }

    #[test]
    fn text_format() {
        let a = m(&[&[1, -2], &[0, 1]]);
        assert_eq!(alloc::format!("{a}"), "2\n1 -2\n0 1\n");
    }
}
