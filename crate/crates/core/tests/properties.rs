use std::sync::OnceLock;

use fusionkit::catalog::{self, CatalogEntry};
use fusionkit::double_construction::deligne_double;
use fusionkit::lr_oracle::CrossedProductAlgebra;
use fusionkit::multi_interval::{canonical_multiplicities, mu_n};
use fusionkit::{Combination, FusionRing, GroupTable};
use proptest::prelude::*;
use proptest::sample::Index;

fn entries() -> &'static [CatalogEntry] {
    static ENTRIES: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    ENTRIES.get_or_init(catalog::entries)
}

fn modular_entries() -> Vec<&'static CatalogEntry> {
    entries().iter().filter(|e| e.modular.is_some()).collect()
}

/// A permutation of `0..n` fixing 0, built from a shuffle key.
fn permutation(n: usize, keys: &[u32]) -> Vec<usize> {
    let mut rest: Vec<usize> = (1..n).collect();
    rest.sort_by_key(|&i| (keys[i % keys.len()], i));
    let mut perm = vec![0; n];
    for (slot, &i) in rest.iter().enumerate() {
        perm[i] = slot + 1;
    }
    perm
}

fn combination(ring: &FusionRing, coeffs: &[u64]) -> Combination {
    Combination((0..ring.rank()).map(|i| coeffs[i % coeffs.len()]).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dims_are_relabeling_invariant(e in any::<Index>(), keys in prop::collection::vec(any::<u32>(), 1..12)) {
        let entry = e.get(entries());
        let perm = permutation(entry.ring.rank(), &keys);
        let d = entry.ring.dims().unwrap();
        let dp = entry.ring.permuted(&perm).unwrap().dims().unwrap();
        for (i, &p) in perm.iter().enumerate() {
            prop_assert!((d.d[i] - dp.d[p]).abs() < 1e-9);
        }
    }

    #[test]
    fn global_index_at_least_rank(e in any::<Index>()) {
        let ring = &e.get(entries()).ring;
        let index = ring.global_index().unwrap();
        let pointed = ring.dims().unwrap().d.iter().all(|d| (d - 1.0).abs() < 1e-9);
        prop_assert!(index >= ring.rank() as f64 - 1e-9);
        prop_assert_eq!(pointed, (index - ring.rank() as f64).abs() < 1e-9);
    }

    #[test]
    fn fuse_is_bilinear_and_associative(
        e in any::<Index>(),
        a in prop::collection::vec(0u64..3, 1..6),
        b in prop::collection::vec(0u64..3, 1..6),
        c in prop::collection::vec(0u64..3, 1..6),
    ) {
        let ring = &e.get(entries()).ring;
        let (a, b, c) = (combination(ring, &a), combination(ring, &b), combination(ring, &c));
        let sum = Combination(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect());
        let left = ring.fuse(&sum, &c).unwrap();
        let split_a = ring.fuse(&a, &c).unwrap();
        let split_b = ring.fuse(&b, &c).unwrap();
        let split: Vec<u64> = split_a.0.iter().zip(&split_b.0).map(|(x, y)| x + y).collect();
        prop_assert_eq!(left.0, split);

        let ab_c = ring.fuse(&ring.fuse(&a, &b).unwrap(), &c).unwrap();
        let a_bc = ring.fuse(&a, &ring.fuse(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
    }

    #[test]
    fn fusion_respects_dimensions(e in any::<Index>(), a in prop::collection::vec(0u64..4, 1..6), b in prop::collection::vec(0u64..4, 1..6)) {
        let ring = &e.get(entries()).ring;
        let d = ring.dims().unwrap().d;
        let dim = |c: &Combination| c.0.iter().zip(&d).map(|(&x, y)| x as f64 * y).sum::<f64>();
        let (a, b) = (combination(ring, &a), combination(ring, &b));
        let ab = ring.fuse(&a, &b).unwrap();
        prop_assert!((dim(&ab) - dim(&a) * dim(&b)).abs() < 1e-7 * dim(&ab).max(1.0));
    }

    #[test]
    fn mu_n_exponents_add(mu in 1.0f64..50.0, a in 1u32..6, b in 1u32..6) {
        let lhs = mu_n(mu, a + b - 1).unwrap();
        let rhs = mu_n(mu, a).unwrap() * mu_n(mu, b).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs);
    }

    #[test]
    fn alternating_word_is_dual_twisted_word(e in any::<Index>(), word in prop::collection::vec(any::<Index>(), 1..5)) {
        let ring = &e.get(entries()).ring;
        let word: Vec<usize> = word.iter().map(|i| i.index(ring.rank())).collect();
        let twisted: Vec<usize> = word
            .iter()
            .enumerate()
            .map(|(p, &i)| if p % 2 == 1 { ring.dual(i) } else { i })
            .collect();
        prop_assert_eq!(
            canonical_multiplicities(ring, &word, true).unwrap(),
            canonical_multiplicities(ring, &twisted, false).unwrap()
        );
    }

    #[test]
    fn modularity_is_relabeling_invariant(e in any::<Index>(), keys in prop::collection::vec(any::<u32>(), 1..12)) {
        let modular = modular_entries();
        let md = e.get(&modular).modular.as_ref().unwrap();
        let perm = permutation(md.ring().rank(), &keys);
        let p = md.permuted(&perm).unwrap();
        prop_assert!(p.check_modularity().pass);
        prop_assert!(p.verlinde().unwrap().matches(p.ring()));
    }

    #[test]
    fn deligne_double_squares_index(e in any::<Index>()) {
        let ring = &e.get(entries()).ring;
        let i = ring.global_index().unwrap();
        let doubled = deligne_double(ring).ring.global_index().unwrap();
        prop_assert!((doubled - i * i).abs() < 1e-6 * i * i);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn expansion_round_trips(seed in any::<u64>(), three in any::<bool>()) {
        let n = if three { 3 } else { 2 };
        let a = CrossedProductAlgebra::build(&GroupTable::cyclic(n), n, seed).unwrap();
        prop_assert!(a.roundtrip_error(3, seed).unwrap() < 1e-12);
    }

    #[test]
    fn expectation_is_a_bimodule_map(seed in any::<u64>(), three in any::<bool>()) {
        let n = if three { 3 } else { 2 };
        let a = CrossedProductAlgebra::build(&GroupTable::cyclic(n), n, seed).unwrap();
        prop_assert!(a.bimodule_residual(2, seed).unwrap() < 1e-10);
    }

    #[test]
    fn pimsner_popa_holds_at_the_index(seed in any::<u64>()) {
        let a = CrossedProductAlgebra::build(&GroupTable::cyclic(2), 2, seed).unwrap();
        prop_assert!(a.pimsner_popa_check(4, seed).unwrap().pass());
    }
}
