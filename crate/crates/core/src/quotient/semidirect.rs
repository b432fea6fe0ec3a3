use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Pow, Zero};

use super::{enumerate_group, FiniteQuotientGroup, GroupKind};
use crate::matrix::IntMatrix;
use crate::word::{GenSymbol, SymbolKind};
use crate::{Error, Result};

/// Labels of the eight generators, in the order used throughout.
pub const F_LABELS: [&str; 8] = ["U+", "U-", "L+", "L-", "e+", "e-", "f+", "f-"];

/// The affine `3 x 3` matrix of `(g, v)`: `[[g, v], [0, 1]]`, so that
/// `(g, v)(h, w) = (gh, v + g w)`.
pub fn affine(g: &IntMatrix, v: [&BigInt; 2]) -> IntMatrix {
    let mut a = IntMatrix::identity(3);
    for i in 0..2 {
        for j in 0..2 {
            a[(i, j)] = g[(i, j)].clone();
        }
        a[(i, 2)] = v[i].clone();
    }
    a
}

/// `F(m, l) = {U±, L±, e±, f±}` as integer affine matrices, in [`F_LABELS`] order.
pub fn f_generators(m: &BigInt, l: &BigInt) -> Vec<IntMatrix> {
    let zero = BigInt::zero();
    let id2 = IntMatrix::identity(2);
    let mut out = Vec::with_capacity(8);
    for (i, j) in [(1, 2), (2, 1)] {
        for t in [m.clone(), -m] {
            let g = IntMatrix::elementary(2, i, j, t).expect("valid positions");
            out.push(affine(&g, [&zero, &zero]));
        }
    }
    for k in 0..2 {
        for t in [l.clone(), -l] {
            let v = if k == 0 { [&t, &zero] } else { [&zero, &t] };
            out.push(affine(&id2, v));
        }
    }
    out
}

/// A semidirect quotient together with its translation subgroup.
#[derive(Clone, Debug)]
pub struct SemidirectGroup {
    pub group: FiniteQuotientGroup,
    /// Element indices with trivial linear part, ascending.
    pub translations: Vec<usize>,
}

/// The image of `EL_2(R_m) ⋉ R_l^2` in `SL_2(Z/q) ⋉ (Z/q)^2`, generated by `F(m, l)`.
pub fn build_semidirect(m: u64, l: u64, q: u64, cap: usize) -> Result<SemidirectGroup> {
    if m == 0 || l == 0 {
        return Err(Error::InvalidParameter("m and l must be positive".into()));
    }
    let gens = f_generators(&BigInt::from(m), &BigInt::from(l));
    let group = enumerate_group(GroupKind::SemidirectModQ { m, l }, &gens, q, cap)?;
    let id_linear: [u32; 4] = if q > 1 { [1, 0, 0, 1] } else { [0; 4] };
    let translations = (0..group.order())
        .filter(|&x| {
            let e = group.element(x);
            [e[0], e[1], e[3], e[4]] == id_linear
        })
        .collect();
    Ok(SemidirectGroup {
        group,
        translations,
    })
}

/// Where the pair of `EL_2` coordinates and the translation line sit in `n x n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbeddingShape {
    /// Translations fill row `r` at columns `a, b`; `g` acts through `g^{-T}`.
    Row { r: usize, a: usize, b: usize },
    /// Translations fill column `c` at rows `a, b`; `g` acts directly.
    Column { c: usize, a: usize, b: usize },
}

/// An injective homomorphism `ψ: EL_2(R_m) ⋉ R_{m^l}^2 -> SL_n(Z)` given by
/// the images of the eight generators. Positions are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct El2Embedding {
    pub n: usize,
    pub m: BigInt,
    pub ml: BigInt,
    pub shape: EmbeddingShape,
    /// Images of `F(m, m^l)` in [`F_LABELS`] order.
    pub images: Vec<GenSymbol>,
}

/// Chooses an embedding whose translation image contains the elementary
/// symbol `g = X_ij(t)`, with `i >= 3, j < n` (row case) or `j >= 3, i < n`
/// (column case) and `m^l | t`.
pub fn embed_el2_pair(n: usize, g: &GenSymbol, m: u64, l: u32) -> Result<El2Embedding> {
    if n < 3 {
        return Err(Error::InvalidDimension(n));
    }
    g.validate(n)?;
    if g.kind != SymbolKind::Elementary {
        return Err(Error::InvalidSymbol(
            "embedding targets an elementary symbol".into(),
        ));
    }
    let mb = BigInt::from(m);
    let ml: BigInt = Pow::pow(mb.clone(), l);
    if !g.has_level(&ml) {
        return Err(Error::InvalidSymbol(
            "value is not a multiple of m^l".into(),
        ));
    }
    let third = |x: usize, y: usize| (1..=n).find(|&k| k != x && k != y).expect("n >= 3");
    let (i, j) = (g.i, g.j);
    let shape = if i >= 3 && j < n {
        EmbeddingShape::Row {
            r: i,
            a: j,
            b: third(i, j),
        }
    } else if j >= 3 && i < n {
        EmbeddingShape::Column {
            c: j,
            a: i,
            b: third(i, j),
        }
    } else {
        return Err(Error::InvalidPositions { n });
    };
    let e = |i, j, t: &BigInt| GenSymbol::elementary(i, j, t.clone());
    let (nm, nml) = (-&mb, -&ml);
    let images = match shape {
        EmbeddingShape::Row { r, a, b } => alloc::vec![
            e(b, a, &nm),
            e(b, a, &mb),
            e(a, b, &nm),
            e(a, b, &mb),
            e(r, a, &ml),
            e(r, a, &nml),
            e(r, b, &ml),
            e(r, b, &nml),
        ],
        EmbeddingShape::Column { c, a, b } => alloc::vec![
            e(a, b, &mb),
            e(a, b, &nm),
            e(b, a, &mb),
            e(b, a, &nm),
            e(a, c, &ml),
            e(a, c, &nml),
            e(b, c, &ml),
            e(b, c, &nml),
        ],
    };
    Ok(El2Embedding {
        n,
        m: mb,
        ml,
        shape,
        images,
    })
}

impl El2Embedding {
    /// `ψ(g, v)` for `g ∈ SL_2(Z)` and `v ∈ Z^2`.
    pub fn psi(&self, g: &IntMatrix, v: [&BigInt; 2]) -> Result<IntMatrix> {
        let mut out = IntMatrix::identity(self.n);
        match self.shape {
            EmbeddingShape::Row { r, a, b } => {
                let h = g.inverse()?.transpose();
                let idx = [a - 1, b - 1];
                for (x, &p) in idx.iter().enumerate() {
                    for (y, &q) in idx.iter().enumerate() {
                        out[(p, q)] = h[(x, y)].clone();
                    }
                }
                // T(v) L(g): the translation row is v^T g^{-T}
                for (y, &q) in idx.iter().enumerate() {
                    out[(r - 1, q)] = v[0] * &h[(0, y)] + v[1] * &h[(1, y)];
                }
            }
            EmbeddingShape::Column { c, a, b } => {
                let idx = [a - 1, b - 1];
                for (x, &p) in idx.iter().enumerate() {
                    for (y, &q) in idx.iter().enumerate() {
                        out[(p, q)] = g[(x, y)].clone();
                    }
                    out[(p, c - 1)] = v[x].clone();
                }
            }
        }
        Ok(out)
    }

    fn psi_affine(&self, x: &IntMatrix) -> Result<IntMatrix> {
        let g = x.top_left(2);
        self.psi(&g, [&x[(0, 2)], &x[(1, 2)]])
    }

    /// Checks that the images match `ψ` on the generators and that `ψ` is
    /// multiplicative on every pair of generators.
    pub fn verify_relations(&self) -> Result<bool> {
        let gens = f_generators(&self.m, &self.ml);
        for (x, img) in gens.iter().zip(&self.images) {
            if self.psi_affine(x)? != img.matrix(self.n)? {
                return Ok(false);
            }
        }
        for x in &gens {
            for y in &gens {
                let lhs = self.psi_affine(&(x * y))?;
                let rhs = &self.psi_affine(x)? * &self.psi_affine(y)?;
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Whether `g` lies in the image of the translation subgroup.
    pub fn translation_contains(&self, g: &GenSymbol) -> bool {
        let (line, a, b) = match self.shape {
            EmbeddingShape::Row { r, a, b } => ((g.i == r), a, b),
            EmbeddingShape::Column { c, a, b } => ((g.j == c), a, b),
        };
        let other = match self.shape {
            EmbeddingShape::Row { .. } => g.j,
            EmbeddingShape::Column { .. } => g.i,
        };
        g.kind == SymbolKind::Elementary
            && line
            && (other == a || other == b)
            && g.has_level(&self.ml)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::{CayleyGraph, DEFAULT_CAP};

    #[test]
    fn semidirect_sizes() {
        let s = build_semidirect(1, 1, 2, DEFAULT_CAP).unwrap();
        assert_eq!(s.group.order(), 24);
        assert_eq!(s.translations.len(), 4);
        let s = build_semidirect(1, 1, 3, DEFAULT_CAP).unwrap();
        assert_eq!(s.group.order(), 216);
        assert_eq!(s.translations.len(), 9);
        assert!(CayleyGraph::from_group(&s.group).check_permutations());
    }

    #[test]
    fn translations_commute() {
        let s = build_semidirect(1, 1, 3, DEFAULT_CAP).unwrap();
        for &x in &s.translations {
            for &y in &s.translations {
                assert_eq!(s.group.multiply(x, y), s.group.multiply(y, x));
            }
        }
    }

    #[test]
    fn row_embedding_for_x31() {
        let (m, l) = (2u64, 1u32);
        let g = GenSymbol::elementary(3, 1, BigInt::from(2));
        let emb = embed_el2_pair(3, &g, m, l).unwrap();
        assert_eq!(emb.shape, EmbeddingShape::Row { r: 3, a: 1, b: 2 });
        assert!(emb.verify_relations().unwrap());
        assert!(emb.translation_contains(&g));
        let zero = BigInt::zero();
        assert!(emb
            .psi(&IntMatrix::identity(2), [&zero, &zero])
            .unwrap()
            .is_identity());
        for s in &emb.images {
            let a = s.matrix(3).unwrap();
            assert!(a.congruent_to_identity(&BigInt::from(2)));
        }
    }

    #[test]
    fn embeddings_verify_across_positions() {
        for (n, i, j) in [(3, 1, 3), (4, 2, 4), (5, 4, 3), (5, 1, 5)] {
            let g = GenSymbol::elementary(i, j, BigInt::from(9));
            let emb = embed_el2_pair(n, &g, 3, 2).unwrap();
            assert!(emb.verify_relations().unwrap(), "{n} {i} {j}");
            assert!(emb.translation_contains(&g));
        }
        let bad = GenSymbol::elementary(1, 2, BigInt::from(9));
        assert!(embed_el2_pair(3, &bad, 3, 2).is_err());
    }
}
