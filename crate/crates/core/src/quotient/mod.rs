//! Finite congruence quotients, semidirect products and Cayley graphs.

mod cayley;
mod coverage;
mod generators;
mod group;
mod semidirect;

pub use cayley::CayleyGraph;
pub use coverage::{verify_product_decomposition, CoverageReport};
pub use generators::{
    abelian_coordinates, abelian_quotient, beta_generators, elementary_generators,
    sigma_abelian_images, sigma_matrices, BetaGenerators,
};
pub use group::{enumerate_group, mul_mod, FiniteQuotientGroup, GroupKind, DEFAULT_CAP};
pub use semidirect::{
    affine, build_semidirect, embed_el2_pair, f_generators, El2Embedding, EmbeddingShape,
    SemidirectGroup, F_LABELS,
};
