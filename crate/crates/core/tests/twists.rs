use iwasawa_core::modules::{
    coinvariants, specialize, BivarPoly, CyclicPresentation, WildCharacter,
};
use iwasawa_core::padic::PadicContext;
use iwasawa_core::primes::{bad_prime_set, HeightOnePrime};
use proptest::prelude::*;

fn ctx() -> PadicContext {
    PadicContext::new(3, 12, 4).unwrap()
}

fn relation(terms: &[(i64, u32, u32)]) -> BivarPoly {
    BivarPoly::from_terms(&ctx(), terms)
}

fn terms() -> impl Strategy<Value = Vec<(i64, u32, u32)>> {
    prop::collection::vec((-20i64..=20, 0u32..=2, 0u32..=2), 1..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn twisting_twice_is_twisting_by_the_product(
        t in terms(),
        l1 in -500i64..=500,
        l2 in -500i64..=500,
    ) {
        let r = relation(&t);
        prop_assume!(!r.is_zero());
        let c = ctx();
        let m = CyclicPresentation::new(vec![r]).unwrap();
        let (a, b) = (WildCharacter::new(c.int(l1)), WildCharacter::new(c.int(l2)));
        let twice = m.twist(&a).twist(&b);
        let once = m.twist(&a.compose(&b));
        let swapped = m.twist(&b).twist(&a);
        let trivial = m.twist(&WildCharacter::trivial(&c));
        prop_assert_eq!(twice.relations(), once.relations());
        prop_assert_eq!(twice.relations(), swapped.relations());
        prop_assert_eq!(trivial.relations(), m.relations());
    }

    #[test]
    fn coinvariants_grow_with_the_level(
        t in terms(),
        lambda in -4i64..=4,
        q in 0i64..=4,
    ) {
        let c = ctx();
        // a unit T-coefficient keeps the fast path available
        let mut t = t;
        t.push((1, 0, 1));
        let r = relation(&t);
        prop_assume!(!r.is_zero());
        let m = CyclicPresentation::new(vec![r]).unwrap().twist(&WildCharacter::new(c.int(lambda)));
        let prime = HeightOnePrime::parse(&c, &format!("X-{}", 3 * q), false).unwrap();
        let sm = specialize(&m, &prime).unwrap();
        let levels: Vec<_> = (0..=2).map(|n| coinvariants(&sm, n)).collect();
        for w in levels.windows(2) {
            // M/ω_{n+1} surjects onto M/ω_n
            if w[0].is_infinite() {
                prop_assert!(!w[1].is_finite(), "{:?}", levels);
            }
            if let (Some(a), Some(b)) = (w[0].exponent(), w[1].exponent()) {
                prop_assert!(a <= b, "{:?}", levels);
            }
        }
    }

    #[test]
    fn bad_prime_sets_grow_strictly(lambda in -50i64..=50) {
        let c = ctx();
        let sets: Vec<_> = (0..=2).map(|n| bad_prime_set(&c.int(lambda), n).unwrap()).collect();
        for (n, s) in sets.iter().enumerate() {
            prop_assert_eq!(s.primes.len(), n + 1);
            prop_assert!(s.reconstruction_holds());
        }
        prop_assert!(sets[0].is_strict_subset_of(&sets[1]));
        prop_assert!(sets[1].is_strict_subset_of(&sets[2]));
    }
}

#[test]
fn the_twisted_diagonal_is_bad_exactly_at_its_factors() {
    let c = ctx();
    let m = CyclicPresentation::diagonal(&c);
    for lambda in [-1i64, 1, 2, 4] {
        let theta = WildCharacter::new(c.int(lambda));
        let twisted = m.twist(&theta);
        let bad = bad_prime_set(&c.int(lambda), 2).unwrap();
        for (j, q) in bad.primes.iter().enumerate() {
            let sm = specialize(&twisted, q).unwrap();
            for n in 0..=2u32 {
                assert_eq!(
                    coinvariants(&sm, n).is_infinite(),
                    n as usize >= j,
                    "lambda={lambda} Q={q} n={n}"
                );
            }
        }
        for k in [0i64, 1, 2, 5] {
            if k == lambda {
                continue;
            }
            let q = HeightOnePrime::parse(&c, &format!("X-{}", 3 * k), false).unwrap();
            let sm = specialize(&twisted, &q).unwrap();
            assert!(coinvariants(&sm, 0).is_finite(), "lambda={lambda} Q={q}");
        }
    }
}
