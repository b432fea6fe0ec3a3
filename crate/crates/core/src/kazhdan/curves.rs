use alloc::vec::Vec;

use core::f64::consts::PI;

use crate::quotient::sigma_abelian_images;
use crate::{Error, Result};

/// `t = 2 · 8!`, the exponent constant of the first-order axioms behind
/// bounded generation over `Z`; kept as metadata only.
pub const AXIOM_CONSTANT_T: u64 = 80_640;

fn sin_pi_over(m: u64) -> f64 {
    if m <= 1 {
        0.0
    } else {
        libm::sin(PI / m as f64)
    }
}

/// `ε(m) = sin(π/m) / 27`.
pub fn eps_m(m: u64) -> f64 {
    sin_pi_over(m) / 27.0
}

/// `ε(m) / 2`.
pub fn rel_half(m: u64) -> f64 {
    eps_m(m) / 2.0
}

/// `2π / (N^{1/k} − 1)`, or `None` when the denominator is not positive.
pub fn abelian_cap(order: f64, k: usize) -> Option<f64> {
    if k == 0 {
        return None;
    }
    let denom = libm::pow(order, 1.0 / k as f64) - 1.0;
    (denom > 0.0 && denom.is_finite()).then(|| 2.0 * PI / denom)
}

/// Upper bound for the Kazhdan constant of any abelian group of order `N`
/// generated by `k` elements. `None` means "no constraint".
pub fn abelian_upper_bound(order: u64, k: usize) -> Option<f64> {
    if order < 2 {
        return None;
    }
    abelian_cap(order as f64, k)
}

/// `κ(C_m, {±1}) = 2 sin(π/m)`.
pub fn cyclic_exact(m: u64) -> f64 {
    2.0 * sin_pi_over(m)
}

/// `1 / (42 √n + 860)`.
pub fn sl_lower(n: usize) -> f64 {
    1.0 / (42.0 * libm::sqrt(n as f64) + 860.0)
}

/// `2 / √n`.
pub fn sl_upper(n: usize) -> f64 {
    2.0 / libm::sqrt(n as f64)
}

/// `1 / (n^3 m)`; a shape with an unknown constant in front.
pub fn corollary_shape(n: usize, m: u64) -> f64 {
    1.0 / ((n as f64).powi(3) * m as f64)
}

/// All reference curves at one parameter point.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceCurves {
    pub eps_m: f64,
    pub rel_half: f64,
    pub cyclic_exact: f64,
    pub sl_lower: f64,
    pub sl_upper: f64,
    pub corollary_shape: f64,
}

impl ReferenceCurves {
    pub fn at(n: usize, m: u64) -> Self {
        Self {
            eps_m: eps_m(m),
            rel_half: rel_half(m),
            cyclic_exact: cyclic_exact(m),
            sl_lower: sl_lower(n),
            sl_upper: sl_upper(n),
            corollary_shape: corollary_shape(n, m),
        }
    }
}

/// `2 sin(π/m)`: the Kazhdan constant of `C_m` with `{±1}`, which bounds
/// `κ(Γ_n(m), Σ_n(m))` from above through the projection `I + mB -> B_11 mod m`.
pub fn projection_upper_bound(_n: usize, m: u64) -> f64 {
    cyclic_exact(m)
}

/// The projection `Γ_n(m) -> C_m`, `I + mB -> B_11 mod m`, evaluated on `Σ_n(m)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionCheck {
    pub n: usize,
    pub m: u64,
    /// Balanced images of the generators, in `Σ_n(m)` order.
    pub images: Vec<i64>,
    /// Every image lies in `{−1, 0, 1}`.
    pub unit_images: bool,
    /// Some image is `±1`, so the image generates `C_m`.
    pub surjective: bool,
    pub value: f64,
}

/// Builds the projection on the abelianized quotient and checks its images.
pub fn projection_check(n: usize, m: u64) -> Result<ProjectionCheck> {
    if n < 3 || m < 2 {
        return Err(Error::InvalidParameter(
            "projection needs n >= 3 and m >= 2".into(),
        ));
    }
    // coordinate of B_11 among off-diagonal entries then the leading diagonal
    let idx = n * (n - 1);
    let images: Vec<i64> = sigma_abelian_images(n, m)?
        .iter()
        .map(|c| {
            let v = c[idx];
            if 2 * v > m {
                v as i64 - m as i64
            } else {
                v as i64
            }
        })
        .collect();
    let unit_images = images.iter().all(|v| v.abs() <= 1);
    let surjective = images.iter().any(|v| v.abs() == 1);
    Ok(ProjectionCheck {
        n,
        m,
        images,
        unit_images,
        surjective,
        value: projection_upper_bound(n, m),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_values() {
        assert_eq!(cyclic_exact(2), 2.0);
        assert!((cyclic_exact(4) - libm::sqrt(2.0)).abs() < 1e-15);
        assert!((abelian_upper_bound(2, 1).unwrap() - 2.0 * PI).abs() < 1e-12);
        assert!(abelian_upper_bound(1, 1).is_none());
        assert!((sl_lower(3) - 1.0 / (42.0 * libm::sqrt(3.0) + 860.0)).abs() < 1e-18);
        assert!(sl_lower(3) > 1.07e-3 && sl_lower(3) < 1.08e-3);
        let r = ReferenceCurves::at(3, 5);
        assert!(r.eps_m > 0.0 && r.rel_half > 0.0 && r.corollary_shape > 0.0);
        assert_eq!(AXIOM_CONSTANT_T, 2 * 40_320);
    }

    #[test]
    fn cyclic_below_cap() {
        for p in 2..=10_000u64 {
            assert!(cyclic_exact(p) <= abelian_upper_bound(p, 1).unwrap() + 1e-15);
        }
    }

    #[test]
    fn projection_images() {
        for (n, m) in [(3, 2), (3, 5), (4, 3)] {
            let c = projection_check(n, m).unwrap();
            assert!(c.unit_images && c.surjective, "{n} {m} {:?}", c.images);
        }
    }
}
