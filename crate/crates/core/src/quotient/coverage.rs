use alloc::vec::Vec;

use hashbrown::HashSet;

use super::generators::{abelian_quotient, elementary_generators};
use super::group::mul_mod;
use super::{enumerate_group, GroupKind};
use crate::matrix::IntMatrix;
use crate::word::GenSymbol;
use crate::Result;

/// Brute-force check that `E · F` covers `Γ_n(m)/Γ_n(m^2)`, where `E` and `F`
/// are the images of `EL_n(R_m)` and its conjugate by `y_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageReport {
    pub n: usize,
    pub m: u64,
    pub quotient_size: usize,
    pub e_size: usize,
    pub f_size: usize,
    pub product_size: usize,
    /// `|E|` and `|F|` divide the quotient order.
    pub lagrange_ok: bool,
    pub coverage: bool,
}

pub fn verify_product_decomposition(n: usize, m: u64, cap: usize) -> Result<CoverageReport> {
    let quotient = abelian_quotient(n, m, cap)?;
    let q = m * m;
    let kind = GroupKind::CongruenceQuotient { n, m };
    let e_gens = elementary_generators(n, m)?;
    let f_gens: Vec<IntMatrix> = e_gens
        .iter()
        .enumerate()
        .map(|(k, _)| {
            let (i, j, sign) = elementary_position(n, k);
            GenSymbol::conjugated(n, i, j, (m as i64 * sign).into()).matrix(n)
        })
        .collect::<Result<_>>()?;
    let e = enumerate_group(kind, &e_gens, q, cap)?;
    let f = enumerate_group(kind, &f_gens, q, cap)?;

    let mut products: HashSet<usize> = HashSet::new();
    let mut scratch = alloc::vec![0u32; n * n];
    let mut inside = true;
    for x in 0..e.order() {
        for y in 0..f.order() {
            mul_mod(e.element(x), f.element(y), n, q, &mut scratch);
            match quotient.index_of(&scratch) {
                Some(idx) => {
                    products.insert(idx);
                }
                None => inside = false,
            }
        }
    }
    let order = quotient.order();
    Ok(CoverageReport {
        n,
        m,
        quotient_size: order,
        e_size: e.order(),
        f_size: f.order(),
        product_size: products.len(),
        lagrange_ok: order % e.order() == 0 && order % f.order() == 0,
        coverage: inside && products.len() == order,
    })
}

/// The `(i, j, sign)` of the `k`-th matrix produced by `elementary_generators`.
fn elementary_position(n: usize, k: usize) -> (usize, usize, i64) {
    let pair = k / 2;
    let sign = if k.is_multiple_of(2) { 1 } else { -1 };
    let i = pair / (n - 1) + 1;
    let jj = pair % (n - 1) + 1;
    let j = if jj >= i { jj + 1 } else { jj };
    (i, j, sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::DEFAULT_CAP;
    use num_bigint::BigInt;

    #[test]
    fn positions_match_generator_order() {
        let n = 4;
        let gens = elementary_generators(n, 5).unwrap();
        for (k, g) in gens.iter().enumerate() {
            let (i, j, s) = elementary_position(n, k);
            assert_eq!(
                *g,
                IntMatrix::elementary(n, i, j, BigInt::from(5 * s)).unwrap()
            );
        }
    }

    #[test]
    fn coverage_small_cases() {
        let r = verify_product_decomposition(3, 2, DEFAULT_CAP).unwrap();
        assert_eq!(r.quotient_size, 256);
        assert!(r.coverage && r.lagrange_ok);
        let r = verify_product_decomposition(3, 1, DEFAULT_CAP).unwrap();
        assert_eq!(r.quotient_size, 1);
        assert!(r.coverage);
    }
}
