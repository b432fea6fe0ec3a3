use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Pow;

use super::{enumerate_group, FiniteQuotientGroup, GroupKind};
use crate::arith::residue_u64;
use crate::matrix::{sl_coordinates, IntMatrix};
use crate::word::{sigma_symbols, GenSymbol};
use crate::{Error, Result};

/// `{X_ij(±t) : i != j}` as matrices.
pub fn elementary_generators(n: usize, t: u64) -> Result<Vec<IntMatrix>> {
    let mut out = Vec::with_capacity(2 * n * (n - 1));
    for i in 1..=n {
        for j in (1..=n).filter(|&j| j != i) {
            for sign in [1i64, -1] {
                out.push(IntMatrix::elementary(n, i, j, BigInt::from(t) * sign)?);
            }
        }
    }
    Ok(out)
}

/// `Σ_n(m)` as matrices.
pub fn sigma_matrices(n: usize, m: u64) -> Result<Vec<IntMatrix>> {
    sigma_symbols(n, m)?.iter().map(|s| s.matrix(n)).collect()
}

/// The image of `Γ_n(m)` in `SL_n(Z/m^2)`, generated by `Σ_n(m)`.
pub fn abelian_quotient(n: usize, m: u64, cap: usize) -> Result<FiniteQuotientGroup> {
    let q = m
        .checked_mul(m)
        .ok_or(Error::InvalidParameter("m^2 overflows".into()))?;
    enumerate_group(
        GroupKind::CongruenceQuotient { n, m },
        &sigma_matrices(n, m)?,
        q,
        cap,
    )
}

/// Coordinates in `(Z/m)^{n^2-1}` of `I + mB (mod m^2)`, given as residues mod `m^2`.
pub fn abelian_coordinates(residues: &[u32], n: usize, m: u64) -> Vec<u64> {
    let mut b = IntMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let v = residues[i * n + j] as u64 + if i == j { m * m - 1 } else { 0 };
            b[(i, j)] = BigInt::from((v % (m * m)) / m);
        }
    }
    // the diagonal of B sums to 0 mod m, so the last entry is implied
    sl_coordinates(&b)
        .iter()
        .map(|v| residue_u64(v, m))
        .collect()
}

/// Coordinates in `(Z/m)^{n^2-1}` of the images of `Σ_n(m)`.
pub fn sigma_abelian_images(n: usize, m: u64) -> Result<Vec<Vec<u64>>> {
    let mb = BigInt::from(m);
    sigma_symbols(n, m)?
        .iter()
        .map(|s| {
            let a = s.matrix(n)?;
            let mut b = a;
            for i in 0..n {
                b[(i, i)] -= 1u32;
            }
            Ok(sl_coordinates(&b)
                .iter()
                .map(|v| residue_u64(&(v / &mb), m))
                .collect())
        })
        .collect()
}

/// `β_n(m, l) = Σ_{n-1}(m) ∪ α_n(m, l)` as symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaGenerators {
    /// `X_in(±m^l)` and `X_nj(±m^l)`.
    pub alpha: Vec<GenSymbol>,
    /// The `Σ_{n-1}(m)` part, in the top-left block.
    pub sigma: Vec<GenSymbol>,
    pub warning: Option<String>,
}

impl BetaGenerators {
    pub fn all(&self) -> Vec<GenSymbol> {
        self.sigma.iter().chain(&self.alpha).cloned().collect()
    }
}

/// Builds `β_n(m, l)`. For `n = 3` the `Σ_2(m)` part is `sigma2` when given,
/// otherwise `{X_12(±m), X_21(±m)}` with a warning.
pub fn beta_generators(
    n: usize,
    m: u64,
    l: u32,
    sigma2: Option<&[GenSymbol]>,
) -> Result<BetaGenerators> {
    if n < 3 {
        return Err(Error::InvalidDimension(n));
    }
    if m == 0 || l == 0 {
        return Err(Error::InvalidParameter("m and l must be positive".into()));
    }
    let ml: BigInt = Pow::pow(BigInt::from(m), l);
    let mut alpha = Vec::with_capacity(4 * (n - 1));
    for i in 1..n {
        for sign in [1i64, -1] {
            alpha.push(GenSymbol::elementary(i, n, &ml * sign));
        }
    }
    for j in 1..n {
        for sign in [1i64, -1] {
            alpha.push(GenSymbol::elementary(n, j, &ml * sign));
        }
    }
    let (sigma, warning) = if n > 3 {
        (sigma_symbols(n - 1, m)?, None)
    } else if let Some(s) = sigma2 {
        for sym in s {
            sym.validate(2)?;
        }
        (s.to_vec(), None)
    } else {
        let mb = BigInt::from(m);
        let default = [(1, 2), (2, 1)]
            .iter()
            .flat_map(|&(i, j)| {
                [
                    GenSymbol::elementary(i, j, mb.clone()),
                    GenSymbol::elementary(i, j, -&mb),
                ]
            })
            .collect();
        let warning = String::from(
            "default Σ_2(m) = {X_12(±m), X_21(±m)} generates EL_2(mZ), which may have infinite index in Γ_2(m)",
        );
        (default, Some(warning))
    };
    for s in sigma.iter().chain(&alpha) {
        s.validate(n)?;
    }
    Ok(BetaGenerators {
        alpha,
        sigma,
        warning,
    })
}
