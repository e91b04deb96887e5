use pfstab::pf::{commutation, lambda_matrix, PfOperator};
use proptest::prelude::*;

fn op_strategy(d: u64, m: usize) -> impl Strategy<Value = PfOperator> {
    (0..2 * d, proptest::collection::vec(0..d, m)).prop_map(move |(mu, alpha)| PfOperator::new(d, mu, alpha).unwrap())
}

fn triple() -> impl Strategy<Value = (PfOperator, PfOperator, PfOperator)> {
    (2u64..=7, 1usize..=3).prop_map(|(d, h)| (d, 2 * h)).prop_flat_map(|(d, m)| (op_strategy(d, m), op_strategy(d, m), op_strategy(d, m)))
}

proptest! {
    #[test]
    fn multiplication_is_associative((a, b, c) in triple()) {
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn inverse_is_two_sided((a, _, _) in triple()) {
        prop_assert!(a.multiply(&a.inverse()).unwrap().is_identity());
        prop_assert!(a.inverse().multiply(&a).unwrap().is_identity());
    }

    #[test]
    fn commutation_is_the_phase_of_swapping((a, b, _) in triple()) {
        // a b = w^c b a with w = w_2D^2
        let c = a.commutation_exponent(&b).unwrap();
        let ab = a.multiply(&b).unwrap();
        let ba = b.multiply(&a).unwrap();
        prop_assert_eq!(ab.alpha(), ba.alpha());
        prop_assert_eq!(ab.mu(), (ba.mu() + 2 * c) % (2 * a.modulus()));
        prop_assert_eq!((c + b.commutation_exponent(&a).unwrap()) % a.modulus(), 0);
    }

    #[test]
    fn charge_is_additive((a, b, _) in triple()) {
        let d = a.modulus();
        prop_assert_eq!(a.multiply(&b).unwrap().charge(), (a.charge() + b.charge()) % d);
    }

    #[test]
    fn commutation_is_bilinear((a, b, c) in triple()) {
        let d = a.modulus();
        let bc = b.multiply(&c).unwrap();
        let lhs = a.commutation_exponent(&bc).unwrap();
        let rhs = (a.commutation_exponent(&b).unwrap() + a.commutation_exponent(&c).unwrap()) % d;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pow_matches_repeated_product((a, _, _) in triple(), e in 0u64..10) {
        let mut acc = PfOperator::identity(a.modulus(), a.num_modes()).unwrap();
        for _ in 0..e {
            acc = acc.multiply(&a).unwrap();
        }
        prop_assert_eq!(a.pow(e), acc);
    }

    #[test]
    fn display_parses_back((a, _, _) in triple()) {
        let text = a.to_string();
        prop_assert_eq!(PfOperator::parse(&text, a.modulus(), a.num_modes()).unwrap(), a);
    }
}

#[test]
fn single_mode_relations() {
    for d in 2..=7u64 {
        for m in [2usize, 4, 6] {
            let modes: Vec<PfOperator> = (1..=m).map(|j| PfOperator::mode(d, m, j, 1).unwrap()).collect();
            for (j, g) in modes.iter().enumerate() {
                assert!(g.pow(d).is_identity(), "g_{}^{d} = 1", j + 1);
                for h in &modes[j + 1..] {
                    assert_eq!(g.commutation_exponent(h).unwrap(), 1);
                }
            }
        }
    }
}

#[test]
fn lambda_matches_sign_pattern() {
    let l = lambda_matrix(5, 4);
    for i in 0..4 {
        for j in 0..4 {
            let expected = match j.cmp(&i) {
                std::cmp::Ordering::Greater => 1,
                std::cmp::Ordering::Less => 4,
                std::cmp::Ordering::Equal => 0,
            };
            assert_eq!(l.get(i, j), expected);
        }
    }
    assert_eq!(commutation(&[1, 0, 0, 0], &[0, 0, 0, 1], 5), 1);
}

#[test]
fn diameter_and_support() {
    let a = PfOperator::parse("g2 g5^2", 3, 6).unwrap();
    assert_eq!(a.support(), vec![2, 5]);
    assert_eq!(a.weight(), 2);
    assert_eq!(a.diameter(), 4);
    assert_eq!(PfOperator::identity(3, 6).unwrap().diameter(), 0);
}

#[test]
fn parse_rejects_garbage() {
    assert!(PfOperator::parse("g9", 3, 4).is_err());
    assert!(PfOperator::parse("x2", 3, 4).is_err());
    assert!(PfOperator::parse("g1^^2", 3, 4).is_err());
    assert_eq!(
        PfOperator::parse("g1^-1", 3, 2).unwrap(),
        PfOperator::parse("g1^2", 3, 2).unwrap()
    );
}
