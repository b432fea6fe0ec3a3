use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;

use congrkit_core::decompose::{decompose_full, word_budget};
use congrkit_core::kazhdan::{
    abelian_kazhdan_exact, spectral_bounds, AbelianGroup, SpectralOptions,
};
use congrkit_core::quotient::DEFAULT_CAP;
use congrkit_core::stable_range::stabilize_gcd;
use congrkit_core::word::sigma_symbols;
use congrkit_core::{steinberg_check, CongruenceLevel, Word};

fn gamma_word(n: usize, m: u64) -> impl Strategy<Value = Word> {
    let alphabet = sigma_symbols(n, m).unwrap();
    let k = alphabet.len();
    prop::collection::vec(0..k, 0..30).prop_map(move |idx| {
        Word::from_symbols(n, idx.iter().map(|&i| alphabet[i].clone()).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn decomposition_reconstructs(w in gamma_word(4, 2)) {
        let a = w.eval();
        let d = decompose_full(&a, CongruenceLevel::new(2).unwrap()).unwrap();
        prop_assert_eq!(d.reconstruct(), a);
        prop_assert!(d.word.len() <= word_budget(4));
        prop_assert!(d.residual.congruent_to_identity(&BigInt::from(2)));
    }

    #[test]
    fn steinberg_relation_holds(s in -10_000i64..10_000, t in -10_000i64..10_000, perm in 0usize..6) {
        prop_assume!(s != 0 && t != 0);
        let [i, k, j] = [[1, 2, 3], [1, 3, 2], [2, 1, 3], [2, 3, 1], [3, 1, 2], [3, 2, 1]][perm];
        prop_assert!(steinberg_check(i, k, j, &BigInt::from(s), &BigInt::from(t)).unwrap());
    }

    #[test]
    fn stable_range_witness_is_unimodular(a in prop::collection::vec(1i64..1_000_000, 3..7)) {
        let a: Vec<BigInt> = a.into_iter().map(BigInt::from).collect();
        let g = a.iter().fold(BigInt::from(0), |g, x| num_integer::Integer::gcd(&g, x));
        prop_assume!(g.is_one());
        let w = stabilize_gcd(&a).unwrap();
        prop_assert!(w.verify());
    }

    #[test]
    fn spectral_lower_never_exceeds_exact(m in 3u64..40, a in 1i64..40, b in 1i64..40) {
        let g = AbelianGroup::cyclic(m, &[a, b]).unwrap();
        prop_assume!(g.is_generating().unwrap());
        let exact = abelian_kazhdan_exact(&g, DEFAULT_CAP).unwrap();
        let spectral = spectral_bounds(&g.cayley_graph(DEFAULT_CAP).unwrap(), &SpectralOptions::default()).unwrap();
        prop_assert!(spectral.lower <= exact.lower + 1e-9);
        prop_assert!(exact.upper <= spectral.upper + 1e-9);
    }
}
