use alloc::vec;
use alloc::vec::Vec;

use super::eigen::{Averaging, Deflation, EigenResult};
use super::{eps_m, rel_half, KazhdanBounds, Method, SpectralData};
use crate::quotient::{CayleyGraph, FiniteQuotientGroup, GroupKind};
use crate::{Error, Result};

/// Residual target for eigenpairs.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Matrix-vector product cap for the iterative solver.
pub const DEFAULT_MAX_MATVECS: usize = 100_000;
/// Largest order solved densely.
pub const DEFAULT_DENSE_LIMIT: usize = 512;

const PAIR_CHECK_LIMIT: usize = 40_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralOptions {
    pub tol: f64,
    pub max_matvecs: usize,
    pub dense_limit: usize,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_matvecs: DEFAULT_MAX_MATVECS,
            dense_limit: DEFAULT_DENSE_LIMIT,
        }
    }
}

fn solve(op: &Averaging<'_>, opts: &SpectralOptions) -> Result<EigenResult> {
    let r = if op.order <= opts.dense_limit {
        op.dense_top()?
    } else {
        op.lanczos_top(opts.tol, opts.max_matvecs)?
    };
    if r.residual > opts.tol {
        return Err(Error::Tolerance {
            residual: r.residual,
            iterations: r.matvecs,
        });
    }
    Ok(r)
}

fn bounds_from(op: &Averaging<'_>, eig: &EigenResult) -> KazhdanBounds {
    let mu = eig.value.clamp(-1.0, 1.0);
    let lower = libm::sqrt((2.0 * (1.0 - mu)).max(0.0)).min(2.0);
    let v = &eig.vector;
    let upper = op
        .perms
        .iter()
        .map(|p| {
            let d: f64 = p
                .iter()
                .enumerate()
                .map(|(x, &y)| {
                    let t = v[y as usize] - v[x];
                    t * t
                })
                .sum();
            libm::sqrt(d)
        })
        .fold(0.0f64, f64::max)
        .min(2.0);
    KazhdanBounds {
        lower,
        upper,
        exact: false,
        lower_method: Method::SpectralGap,
        upper_method: Method::EigenvectorDisplacement,
        spectral: Some(SpectralData {
            mu: eig.value,
            order: op.order,
            generators: op.perms.len(),
            subspace_dim: op.subspace_dim(),
            residual: eig.residual,
            matvecs: eig.matvecs,
            dense: eig.dense,
        }),
        vacuous: false,
    }
}

/// Spectral bounds for `κ(G, S)` from the right Cayley graph of a symmetric
/// generating set: `lower = √(2(1 − μ))` with `μ` the top eigenvalue of the
/// averaging operator off the constants, and `upper` the largest generator
/// displacement of the corresponding unit eigenvector.
pub fn spectral_bounds(graph: &CayleyGraph, opts: &SpectralOptions) -> Result<KazhdanBounds> {
    if !graph.check_permutations() {
        return Err(Error::InvalidParameter(
            "generating set is not symmetric".into(),
        ));
    }
    if graph.order() <= 1 {
        return Ok(KazhdanBounds::vacuous(Method::SpectralGap));
    }
    if graph.degree() == 0 || !graph.is_connected() {
        return Err(Error::NotGenerating);
    }
    let op = Averaging {
        perms: graph.permutations(),
        order: graph.order(),
        deflation: Deflation::Constants,
    };
    let eig = solve(&op, opts)?;
    Ok(bounds_from(&op, &eig))
}

/// Relative bound for a pair `(G, B)` with `B` normal.
#[derive(Clone, Debug, PartialEq)]
pub struct RelativeReport {
    pub bounds: KazhdanBounds,
    /// `dim H₀ = |G| − |G|/|B|`.
    pub subspace_dim: usize,
    pub cosets: usize,
    pub subgroup_order: usize,
    /// `ε(m)` and `ε(m)/2` for the semidirect family, for context only.
    pub reference_eps: Option<f64>,
    pub reference_rel_half: Option<f64>,
}

/// Spectral lower bound for the relative constant of `(G, B)` with respect
/// to the generators of `group`: the gap of the averaging operator on
/// `H₀ = ℓ²(G) ⊖ {functions constant on the cosets xB}`.
///
/// `subgroup` lists element indices of `B`; it must be a normal subgroup.
/// `B = G` gives the ordinary bound; `B = {e}` leaves nothing to constrain
/// and returns a vacuous report.
pub fn relative_spectral_bound(
    group: &FiniteQuotientGroup,
    subgroup: &[usize],
    opts: &SpectralOptions,
) -> Result<RelativeReport> {
    let n = group.order();
    let mut members = vec![false; n];
    for &b in subgroup {
        if b >= n {
            return Err(Error::InvalidParameter(
                "subgroup index out of range".into(),
            ));
        }
        members[b] = true;
    }
    let elements: Vec<usize> = (0..n).filter(|&x| members[x]).collect();
    let size = elements.len();
    if !members[0] {
        return Err(Error::InvalidParameter(
            "subgroup must contain the identity".into(),
        ));
    }
    let (reference_eps, reference_rel_half) = match group.kind() {
        GroupKind::SemidirectModQ { m, .. } => (Some(eps_m(m)), Some(rel_half(m))),
        _ => (None, None),
    };
    let report = |bounds, subspace_dim, cosets| RelativeReport {
        bounds,
        subspace_dim,
        cosets,
        subgroup_order: size,
        reference_eps,
        reference_rel_half,
    };
    if size == 1 {
        return Ok(report(KazhdanBounds::vacuous(Method::SpectralGap), 0, n));
    }
    let graph = CayleyGraph::from_group(group);
    if size == n {
        let bounds = spectral_bounds(&graph, opts)?;
        return Ok(report(bounds, n - 1, 1));
    }
    if size.saturating_mul(size) > PAIR_CHECK_LIMIT {
        return Err(Error::InvalidParameter(
            "subgroup too large to verify".into(),
        ));
    }
    let mul = |x: usize, y: usize| {
        group
            .multiply(x, y)
            .ok_or(Error::InternalInvariant("group not closed"))
    };
    for &x in &elements {
        for &y in &elements {
            if !members[mul(x, y)?] {
                return Err(Error::InvalidParameter("not a subgroup".into()));
            }
        }
    }
    let gens = group.generators();
    for (k, &s) in gens.iter().enumerate() {
        let s_inv = gens[group.generator_inverse()[k]];
        for &b in &elements {
            if !members[mul(mul(s_inv, b)?, s)?] {
                return Err(Error::InvalidParameter("subgroup is not normal".into()));
            }
        }
    }
    let mut block = vec![u32::MAX; n];
    let mut count = 0usize;
    for x in 0..n {
        if block[x] != u32::MAX {
            continue;
        }
        for &b in &elements {
            block[mul(x, b)?] = count as u32;
        }
        count += 1;
    }
    if count * size != n {
        return Err(Error::InternalInvariant(
            "cosets do not partition the group",
        ));
    }
    if !graph.is_connected() {
        return Err(Error::NotGenerating);
    }
    let op = Averaging {
        perms: graph.permutations(),
        order: n,
        deflation: Deflation::Blocks { block, count },
    };
    let eig = solve(&op, opts)?;
    let bounds = bounds_from(&op, &eig);
    Ok(report(bounds, n - count, count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kazhdan::{abelian_kazhdan_exact, cyclic_exact, AbelianGroup};
    use crate::quotient::{build_semidirect, elementary_generators, enumerate_group, DEFAULT_CAP};

    fn opts() -> SpectralOptions {
        SpectralOptions::default()
    }

    #[test]
    fn c2_and_c3() {
        let g = AbelianGroup::cyclic(2, &[1]).unwrap();
        let b = spectral_bounds(&g.cayley_graph(10).unwrap(), &opts()).unwrap();
        assert!((b.lower - 2.0).abs() < 1e-12);
        let g = AbelianGroup::cyclic(3, &[1, -1]).unwrap();
        let b = spectral_bounds(&g.cayley_graph(10).unwrap(), &opts()).unwrap();
        assert!((b.spectral.as_ref().unwrap().mu + 0.5).abs() < 1e-12);
        assert!((b.lower - libm::sqrt(3.0)).abs() < 1e-10);
        assert!((b.lower - cyclic_exact(3)).abs() < 1e-10);
    }

    #[test]
    fn klein_four_matches_characters() {
        let g = AbelianGroup::new(vec![2, 2], &[vec![1, 0], vec![0, 1]]).unwrap();
        let s = spectral_bounds(&g.cayley_graph(10).unwrap(), &opts()).unwrap();
        let e = abelian_kazhdan_exact(&g, 10).unwrap();
        assert!((s.lower - e.upper).abs() < 1e-8);
        assert!(s.lower <= e.lower + 1e-9 && e.upper <= s.upper + 1e-9);
    }

    #[test]
    fn abelian_sandwich() {
        for (moduli, gens) in [
            (vec![6u64], vec![vec![1i64]]),
            (vec![5, 5], vec![vec![1, 0], vec![0, 1], vec![1, 1]]),
            (vec![3, 9], vec![vec![1, 2], vec![0, 1]]),
        ] {
            let g = AbelianGroup::new(moduli, &gens).unwrap();
            let s = spectral_bounds(&g.cayley_graph(1000).unwrap(), &opts()).unwrap();
            let e = abelian_kazhdan_exact(&g, 1000).unwrap();
            assert!(s.lower <= e.lower + 1e-9, "{g:?}");
            assert!(e.upper <= s.upper + 1e-9, "{g:?}");
        }
    }

    #[test]
    fn disconnected_graph() {
        let g = AbelianGroup::cyclic(4, &[2]).unwrap();
        assert_eq!(
            spectral_bounds(&g.cayley_graph(10).unwrap(), &opts()).unwrap_err(),
            Error::NotGenerating
        );
    }

    #[test]
    fn sl3_mod_2() {
        let gens = elementary_generators(3, 1).unwrap();
        let g = enumerate_group(GroupKind::MatrixModQ { n: 3 }, &gens, 2, DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), 168);
        let b = spectral_bounds(&CayleyGraph::from_group(&g), &opts()).unwrap();
        assert!(b.lower > 0.0 && b.is_consistent());
        assert!(b.spectral.unwrap().residual <= 1e-10);
    }

    #[test]
    fn relative_semidirect() {
        for q in [2u64, 3] {
            let s = build_semidirect(1, 1, q, DEFAULT_CAP).unwrap();
            let r = relative_spectral_bound(&s.group, &s.translations, &opts()).unwrap();
            let n = s.group.order();
            assert_eq!(r.subspace_dim, n - n / (q * q) as usize);
            assert!(r.bounds.lower > 0.0 && r.bounds.is_consistent());
        }
        let s = build_semidirect(1, 1, 2, DEFAULT_CAP).unwrap();
        let r = relative_spectral_bound(&s.group, &s.translations, &opts()).unwrap();
        assert_eq!(r.subspace_dim, 18);
    }

    #[test]
    fn relative_degenerations() {
        let s = build_semidirect(1, 1, 2, DEFAULT_CAP).unwrap();
        let r = relative_spectral_bound(&s.group, &[0], &opts()).unwrap();
        assert!(r.bounds.vacuous);
        assert_eq!(r.subspace_dim, 0);
        let all: Vec<usize> = (0..s.group.order()).collect();
        let r = relative_spectral_bound(&s.group, &all, &opts()).unwrap();
        let plain = spectral_bounds(&CayleyGraph::from_group(&s.group), &opts()).unwrap();
        assert_eq!(r.bounds, plain);
        assert_eq!(r.subspace_dim, 23);
    }

    #[test]
    fn non_normal_subgroup_rejected() {
        let s = build_semidirect(1, 1, 2, DEFAULT_CAP).unwrap();
        // the stabilizer of the zero vector is a complement, not normal
        let g = &s.group;
        let linear: Vec<usize> = (0..g.order())
            .filter(|&x| {
                let e = g.element(x);
                e[2] == 0 && e[5] == 0
            })
            .collect();
        assert_eq!(linear.len(), 6);
        assert!(relative_spectral_bound(g, &linear, &opts()).is_err());
    }
}
