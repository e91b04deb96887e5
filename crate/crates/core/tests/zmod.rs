use std::collections::BTreeSet;

use pfstab::zmod::{gcd, ZModMatrix};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every combination of the rows, by direct enumeration.
fn enumerate_span(m: &ZModMatrix) -> BTreeSet<Vec<u64>> {
    let d = m.modulus();
    let mut out = BTreeSet::new();
    let mut coeffs = vec![0u64; m.rows()];
    loop {
        let v: Vec<u64> = (0..m.cols())
            .map(|c| (0..m.rows()).map(|r| coeffs[r] * m.get(r, c)).sum::<u64>() % d)
            .collect();
        out.insert(v);
        let mut t = 0;
        loop {
            if t == coeffs.len() {
                return out;
            }
            coeffs[t] += 1;
            if coeffs[t] < d {
                break;
            }
            coeffs[t] = 0;
            t += 1;
        }
    }
}

fn all_vectors(d: u64, len: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..d).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn random_matrix(rng: &mut ChaCha8Rng, d: u64, rows: usize, cols: usize) -> ZModMatrix {
    let data: Vec<Vec<u64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(0..d)).collect())
        .collect();
    ZModMatrix::from_rows(d, cols, &data).unwrap()
}

#[test]
fn howell_preserves_span_over_z6() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..40 {
        let m = random_matrix(&mut rng, 6, 3, 4);
        let h = m.howell_form();
        assert!(h.rows() <= 4);
        assert_eq!(enumerate_span(&m), enumerate_span(&h));
    }
}

#[test]
fn span_order_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in [2u64, 3, 4, 6, 8, 9, 12] {
        for rows in 0..=3 {
            let m = random_matrix(&mut rng, d, rows, 3);
            assert_eq!(m.span_order(), enumerate_span(&m).len() as u128, "D={d} {m:?}");
        }
    }
}

#[test]
fn membership_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for d in [4u64, 6, 9] {
        let m = random_matrix(&mut rng, d, 2, 3);
        let span = enumerate_span(&m);
        let h = m.howell_form();
        for v in all_vectors(d, 3) {
            let expected = span.contains(&v);
            assert_eq!(m.span_membership(&v).unwrap(), expected);
            assert_eq!(h.span_membership(&v).unwrap(), expected);
        }
    }
}

#[test]
fn kernel_matches_enumeration_over_z6() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let m = random_matrix(&mut rng, 6, 3, 5);
        let k = m.kernel_basis();
        let kernel_span = enumerate_span(&k);
        for x in all_vectors(6, 3) {
            let img = m.left_mul_vec(&x).unwrap();
            let in_kernel = img.iter().all(|&e| e == 0);
            assert_eq!(in_kernel, kernel_span.contains(&x), "x={x:?}");
        }
    }
}

#[test]
fn documented_examples() {
    let id = ZModMatrix::identity(3, 2);
    assert_eq!(id.howell_form(), id);
    let two = ZModMatrix::from_rows(4, 1, &[[2u64]]).unwrap();
    assert_eq!(two.howell_form(), two);
    assert_eq!(two.span_order(), 2);
    assert_eq!(ZModMatrix::zeros(5, 0, 3).span_order(), 1);
    assert_eq!(ZModMatrix::from_rows(3, 3, &[[1u64, 0, 0]]).unwrap().span_order(), 3);
    let m = ZModMatrix::from_rows(4, 2, &[[2u64, 0]]).unwrap();
    assert!(!m.span_membership(&[1, 0]).unwrap());
    assert!(m.span_membership(&[0, 0]).unwrap());
    assert!(m.span_membership(&[2, 0]).unwrap());
    let one = ZModMatrix::from_rows(3, 1, &[[1u64]]).unwrap();
    assert_eq!(one.kernel_basis().span_order(), 1);
    let k = two.kernel_basis();
    assert_eq!(enumerate_span(&k), BTreeSet::from([vec![0], vec![2]]));
}

#[test]
fn kernel_rank_duality_for_prime_moduli() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for d in [2u64, 3, 5, 7] {
        for _ in 0..10 {
            let m = random_matrix(&mut rng, d, 3, 3);
            let kernel = all_vectors(d, 3)
                .into_iter()
                .filter(|x| m.left_mul_vec(x).unwrap().iter().all(|&e| e == 0))
                .count() as u128;
            assert_eq!(m.span_order() * kernel, (d as u128).pow(3));
        }
    }
}

#[test]
fn dimension_errors() {
    let m = ZModMatrix::from_rows(5, 2, &[[1u64, 2]]).unwrap();
    assert!(m.span_membership(&[1, 2, 3]).is_err());
    assert!(ZModMatrix::from_rows(5, 2, &[[1u64, 7]]).is_err());
    assert!(ZModMatrix::new(1, 1, 1, vec![0]).is_err());
}

fn matrix_strategy() -> impl Strategy<Value = ZModMatrix> {
    (2u64..=12, 0usize..=4, 1usize..=4).prop_flat_map(|(d, r, c)| {
        proptest::collection::vec(proptest::collection::vec(0..d, c), r)
            .prop_map(move |rows| ZModMatrix::from_rows(d, c, &rows).unwrap())
    })
}

proptest! {
    #[test]
    fn howell_is_idempotent(m in matrix_strategy()) {
        let h = m.howell_form();
        prop_assert_eq!(h.howell_form(), h.clone());
        prop_assert_eq!(h.span_order(), m.span_order());
    }

    #[test]
    fn howell_is_canonical_under_row_operations(m in matrix_strategy(), seed in any::<u64>()) {
        // Append random combinations and shuffle; the span and the form stay put.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = m.modulus();
        let mut rows = m.to_rows();
        for _ in 0..2 {
            let coeffs: Vec<u64> = (0..m.rows()).map(|_| rng.gen_range(0..d)).collect();
            let combo: Vec<u64> = (0..m.cols())
                .map(|c| (0..m.rows()).map(|r| coeffs[r] * m.get(r, c)).sum::<u64>() % d)
                .collect();
            rows.push(combo);
        }
        rows.reverse();
        let other = ZModMatrix::from_rows(d, m.cols(), &rows).unwrap();
        prop_assert_eq!(other.howell_form(), m.howell_form());
    }

    #[test]
    fn kernel_annihilates(m in matrix_strategy()) {
        let k = m.kernel_basis();
        if k.rows() > 0 && m.rows() > 0 {
            prop_assert!(k.mul(&m).unwrap().is_zero());
        }
    }

    #[test]
    fn solve_left_round_trips(m in matrix_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = m.modulus();
        let x: Vec<u64> = (0..m.rows()).map(|_| rng.gen_range(0..d)).collect();
        let v = if m.rows() == 0 { vec![0; m.cols()] } else { m.left_mul_vec(&x).unwrap() };
        let sol = m.solve_left(&v).unwrap().expect("v is in the span");
        if m.rows() > 0 {
            prop_assert_eq!(m.left_mul_vec(&sol).unwrap(), v);
        }
    }

    #[test]
    fn gcd_divides(a in 0u64..1000, b in 1u64..1000) {
        let g = gcd(a, b);
        prop_assert_eq!(a % g, 0);
        prop_assert_eq!(b % g, 0);
    }
}
