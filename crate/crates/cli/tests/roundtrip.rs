use freeaut::commalg::{CommMonomial, CommPoly, xy_vars};
use freeaut::freealg::{to_comm_basis, FreePoly, Letter, Word};
use freeaut::scalar::ratio;
use freeaut_cli::parse::{parse_aut, parse_comm, parse_free};
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = (i64, i64)> {
    (-9i64..=9, prop_oneof![4 => Just(1i64), 1 => 2i64..=5])
}

fn free_poly() -> impl Strategy<Value = FreePoly> {
    let word = prop::collection::vec(any::<bool>(), 0..=6);
    prop::collection::vec((word, coeff()), 0..=12).prop_map(|terms| {
        let mut p = FreePoly::zero();
        for (w, (n, d)) in terms {
            let w = Word::from_letters(w.into_iter().map(|b| if b { Letter::Y } else { Letter::X }));
            p.add_term(w, ratio(n, d));
        }
        p
    })
}

fn comm_poly() -> impl Strategy<Value = CommPoly> {
    prop::collection::vec(((0u32..=6, 0u32..=6), coeff()), 0..=12).prop_map(|terms| {
        let mut p = CommPoly::zero(xy_vars());
        for ((a, b), (n, d)) in terms {
            if a + b <= 6 {
                p.add_term(CommMonomial::from_exps(&[a, b]), ratio(n, d));
            }
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn free_print_parse(u in free_poly()) {
        prop_assert_eq!(parse_free(&u.to_string()).unwrap(), u);
    }

    #[test]
    fn comm_print_parse(u in comm_poly()) {
        prop_assert_eq!(parse_comm(&u.to_string()).unwrap(), u);
    }

    #[test]
    fn basis_form_print_parse(u in free_poly()) {
        prop_assert_eq!(parse_free(&to_comm_basis(&u).to_string()).unwrap(), u);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn automorphism_print_parse(seed in any::<u64>()) {
        let phi = freeaut::autgroup::random_tame(seed, 4, 4, 5);
        prop_assert_eq!(parse_aut(&phi.to_string()).unwrap(), phi);
    }
}
