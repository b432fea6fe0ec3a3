//! Kazhdan constants: exact values for finite abelian groups, certified
//! spectral bounds for general finite groups, relative bounds for pairs and
//! reference curves.

mod abelian;
mod curves;
mod demo;
mod eigen;
mod simplex;
mod spectral;

pub use abelian::{
    abelian_kazhdan_exact, abelian_kazhdan_report, AbelianGroup, AbelianKazhdanReport, Oracle,
};
pub use curves::{
    abelian_cap, abelian_upper_bound, corollary_shape, cyclic_exact, eps_m, projection_check,
    projection_upper_bound, rel_half, sl_lower, sl_upper, ProjectionCheck, ReferenceCurves,
    AXIOM_CONSTANT_T,
};
pub use demo::{minimal_prime_for, nonuniform_demo, DemoSample, NonuniformReport, PrimeSearch};
pub use eigen::EigenResult;
pub use simplex::{solve_packing, PackingSolution};
pub use spectral::{
    relative_spectral_bound, spectral_bounds, RelativeReport, SpectralOptions, DEFAULT_DENSE_LIMIT,
    DEFAULT_MAX_MATVECS, DEFAULT_TOL,
};

/// How a bound was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Minimax over unitary characters of an abelian group.
    Characters,
    /// `√(2(1 − μ))` from the averaging operator.
    SpectralGap,
    /// Largest generator displacement of the top eigenvector.
    EigenvectorDisplacement,
    /// Descent through the projection onto a cyclic quotient.
    ProjectionQuotient,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Characters => "characters",
            Method::SpectralGap => "spectral-gap",
            Method::EigenvectorDisplacement => "eigenvector-displacement",
            Method::ProjectionQuotient => "projection-quotient",
        }
    }
}

/// Spectral data behind a bound.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralData {
    /// Largest eigenvalue of the averaging operator on the deflated subspace.
    pub mu: f64,
    /// `|G|`.
    pub order: usize,
    /// `|S|` after symmetrization.
    pub generators: usize,
    /// Dimension of the subspace the operator was restricted to.
    pub subspace_dim: usize,
    /// `‖A v − μ v‖` for the returned unit eigenvector.
    pub residual: f64,
    pub matvecs: usize,
    pub dense: bool,
}

/// Lower and upper bounds for a Kazhdan constant.
#[derive(Clone, Debug, PartialEq)]
pub struct KazhdanBounds {
    pub lower: f64,
    pub upper: f64,
    pub exact: bool,
    pub lower_method: Method,
    pub upper_method: Method,
    pub spectral: Option<SpectralData>,
    /// No representation is constrained (the constant is an empty infimum).
    pub vacuous: bool,
}

impl KazhdanBounds {
    pub(crate) fn vacuous(method: Method) -> Self {
        Self {
            lower: 0.0,
            upper: 0.0,
            exact: false,
            lower_method: method,
            upper_method: method,
            spectral: None,
            vacuous: true,
        }
    }

    /// Replaces the upper bound when `value` improves it.
    pub fn tighten_upper(&mut self, value: f64, method: Method) {
        if value < self.upper {
            self.upper = value;
            self.upper_method = method;
        }
    }

    /// `0 <= lower <= upper + 1e-9` and `upper <= 2` (up to rounding).
    pub fn is_consistent(&self) -> bool {
        self.lower >= 0.0
            && self.upper >= 0.0
            && self.lower <= self.upper + 1e-9
            && self.upper <= 2.0 + 1e-12
    }
}
