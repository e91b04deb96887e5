use pfstab::builders::{build_clock_chain, code_6_1_3_d7, code_8_1_3_d3};
use pfstab::code::{CodeError, DistanceOutcome, ModeLayout, PfCode, ReportOptions};
use pfstab::repro::corpus;
use pfstab::zmod::ZModMatrix;
use pfstab::PfOperator;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// All exponent vectors (trivial phase) with support size at most `w`.
fn operators_up_to_weight(d: u64, m: usize, w: usize) -> Vec<PfOperator> {
    let mut out = Vec::new();
    let mut alpha = vec![0u64; m];
    fn rec(d: u64, m: usize, start: usize, left: usize, alpha: &mut Vec<u64>, out: &mut Vec<PfOperator>) {
        out.push(PfOperator::new(d, 0, alpha.clone()).unwrap());
        if left == 0 {
            return;
        }
        for j in start..m {
            for e in 1..d {
                alpha[j] = e;
                rec(d, m, j + 1, left - 1, alpha, out);
            }
            alpha[j] = 0;
        }
    }
    rec(d, m, 0, w, &mut alpha, &mut out);
    out
}

/// Minimum weight of a logical by scanning every operator of weight <= cap.
fn brute_distance(code: &PfCode, cap: usize) -> Option<usize> {
    operators_up_to_weight(code.modulus(), code.num_modes(), cap)
        .into_iter()
        .filter(|op| code.is_logical(op).unwrap())
        .map(|op| op.weight())
        .min()
}

#[test]
fn distances_agree_with_brute_force() {
    let cases = [
        (code_8_1_3_d3(), 3),
        (code_6_1_3_d7(), 3),
        (build_clock_chain(3, 3).unwrap(), 1),
        (build_clock_chain(2, 4).unwrap(), 1),
    ];
    for (code, expected) in cases {
        let fast = code.distance(None).unwrap().exact();
        assert_eq!(fast, Some(expected));
        assert_eq!(brute_distance(&code, expected), Some(expected));
        if expected > 1 {
            assert_eq!(brute_distance(&code, expected - 1), None);
        }
    }
}

#[test]
fn group_order_times_dimension_on_corpus() {
    for (name, code, _) in corpus() {
        let d = code.modulus() as u128;
        assert_eq!(
            code.group_order().unwrap() * code.codespace_dim().unwrap(),
            d.pow(code.n() as u32),
            "{name}"
        );
    }
}

#[test]
fn centralizer_order_for_prime_codes() {
    for code in [code_8_1_3_d3(), code_6_1_3_d7(), build_clock_chain(5, 3).unwrap()] {
        let d = code.modulus() as u128;
        let k = code.logical_qudits().unwrap().unwrap();
        let c = code.centralizer_basis().unwrap().span_order();
        assert_eq!(c, d.pow(code.n() as u32 + k));
    }
}

#[test]
fn detection_guarantee() {
    for code in [code_8_1_3_d3(), code_6_1_3_d7()] {
        let d = code.distance(None).unwrap().exact().unwrap();
        let stab = code.stabilizer_matrix().howell();
        for e in operators_up_to_weight(code.modulus(), code.num_modes(), d - 1) {
            if stab.contains(e.alpha()).unwrap() {
                continue;
            }
            let s = code.syndrome(&e).unwrap();
            assert!(s.iter().any(|&x| x != 0), "undetected {e}");
        }
    }
}

#[test]
fn syndrome_of_documented_error() {
    let code = code_8_1_3_d3();
    let e = PfOperator::mode(3, 8, 3, 1).unwrap();
    assert_eq!(code.syndrome(&e).unwrap(), vec![0, 2, 2]);
    let id = PfOperator::identity(3, 8).unwrap();
    assert_eq!(code.syndrome(&id).unwrap(), vec![0, 0, 0]);
    assert_eq!(code.syndrome(&code.generators()[0]).unwrap(), vec![0, 0, 0]);
}

fn random_op(rng: &mut ChaCha8Rng, d: u64, m: usize) -> PfOperator {
    let alpha = (0..m).map(|_| rng.gen_range(0..d)).collect();
    PfOperator::new(d, rng.gen_range(0..2 * d), alpha).unwrap()
}

proptest! {
    #[test]
    fn syndrome_is_linear(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for code in [code_8_1_3_d3(), code_6_1_3_d7()] {
            let d = code.modulus();
            let a = random_op(&mut rng, d, code.num_modes());
            let b = random_op(&mut rng, d, code.num_modes());
            let sab = code.syndrome(&a.multiply(&b).unwrap()).unwrap();
            let sa = code.syndrome(&a).unwrap();
            let sb = code.syndrome(&b).unwrap();
            let sum: Vec<u64> = sa.iter().zip(&sb).map(|(x, y)| (x + y) % d).collect();
            prop_assert_eq!(sab, sum);
        }
    }

    #[test]
    fn distance_invariant_under_row_operations(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let code = code_8_1_3_d3();
        let gens = code.generators();
        // Random elementary row operations g_i <- g_i g_j^c, which keep the span.
        let mut ops: Vec<PfOperator> = gens.to_vec();
        for _ in 0..6 {
            let i = rng.gen_range(0..ops.len());
            let j = (i + rng.gen_range(1..ops.len())) % ops.len();
            ops[i] = ops[i].multiply(&ops[j].pow(rng.gen_range(1..3))).unwrap();
        }
        let mut rows: Vec<Vec<u64>> = ops.iter().map(|o| o.alpha().to_vec()).collect();
        rows.swap(0, 2);
        let other = PfCode::from_alpha_rows(3, 8, &rows).unwrap().canonical_phases().unwrap();
        prop_assert_eq!(
            other.stabilizer_matrix().howell_form(),
            code.stabilizer_matrix().howell_form()
        );
        prop_assert_eq!(other.distance(None).unwrap().exact(), Some(3));
        prop_assert_eq!(other.logical_qudits().unwrap(), Some(1));
    }
}

#[test]
fn validation_flags() {
    let charged = PfCode::from_alpha_rows(3, 4, &[[1u64, 0, 0, 0]]).unwrap();
    let v = charged.validate();
    assert!(v.abelian && !v.parity_ok);
    assert!(v.to_string().contains("parity"));

    // g1^-1 g2 and g2^-1 g3 do not commute.
    let noncomm = PfCode::from_alpha_rows(3, 4, &[[2u64, 1, 0, 0], [0, 2, 1, 0]]).unwrap();
    assert!(!noncomm.validate().abelian);

    // A pure phase is never allowed.
    let scalar = PfCode::new(3, 4, vec![PfOperator::new(3, 2, vec![0; 4]).unwrap()]).unwrap();
    assert!(!scalar.validate().phase_ok);
    assert_eq!(scalar.canonical_phases(), Err(CodeError::NoPhaseAssignment));

    // g1 g2 over D=2 squares to -1 without the factor i.
    let majorana = PfCode::from_alpha_rows(2, 4, &[[1u64, 1, 0, 0]]).unwrap();
    assert!(!majorana.validate().phase_ok);
    let fixed = majorana.canonical_phases().unwrap();
    assert!(fixed.validate().is_valid());
    assert_eq!(fixed.generators()[0].mu(), 1);
}

#[test]
fn canonical_phases_regression() {
    // The three weight-4 generators need no phase correction.
    let code = PfCode::from_alpha_rows(
        3,
        8,
        &[
            [2u64, 1, 0, 2, 0, 1, 0, 0],
            [0, 2, 1, 0, 2, 0, 1, 0],
            [0, 0, 2, 1, 0, 2, 0, 1],
        ],
    )
    .unwrap();
    let fixed = code.canonical_phases().unwrap();
    assert!(fixed.validate().is_valid());
    let mus: Vec<u64> = fixed.generators().iter().map(|g| g.mu()).collect();
    assert_eq!(mus, vec![0, 0, 0]);
}

#[test]
fn clock_chain_parameters() {
    let code = build_clock_chain(3, 4).unwrap();
    let r = code
        .report(ReportOptions {
            parallel: true,
            ..Default::default()
        })
        .unwrap();
    assert_eq!(r.k, Some(1));
    assert_eq!(r.distance.as_ref().and_then(DistanceOutcome::exact), Some(1));
    assert_eq!(r.l_con.as_ref().map(|w| w.diameter), Some(8));
    assert_eq!(r.group_order, 27);
}

#[test]
fn l_con_regression_for_8_mode_code() {
    let w = code_8_1_3_d3().l_con().unwrap().unwrap();
    assert_eq!(w.diameter, 4);
    assert_eq!(w.witness.charge(), 0);
    assert!(code_8_1_3_d3().is_logical(&w.witness).unwrap());
    // No charge-zero logical fits in a window of three modes.
    let code = code_8_1_3_d3();
    for op in operators_up_to_weight(3, 8, 3) {
        if op.charge() == 0 && op.diameter() > 0 && op.diameter() <= 3 {
            assert!(!code.is_logical(&op).unwrap(), "{op}");
        }
    }
}

#[test]
fn layout_changes_geometry() {
    let code = code_8_1_3_d3();
    let coords: Vec<Vec<i64>> = (0..8).map(|i| vec![i % 4, i / 4]).collect();
    let laid = code.clone().with_layout(ModeLayout::new(coords).unwrap()).unwrap();
    let w = laid.l_con().unwrap().unwrap();
    assert!(w.diameter <= 4);
    assert!(laid.is_logical(&w.witness).unwrap());
}

#[test]
fn distance_cap_is_enforced() {
    let code = PfCode::new(3, 22, vec![]).unwrap();
    assert!(matches!(code.distance(None), Err(CodeError::CapRequired { .. })));
    assert_eq!(code.distance(Some(1)).unwrap().exact(), Some(1));
}

#[test]
fn parallel_and_serial_distance_agree() {
    for code in [code_8_1_3_d3(), code_6_1_3_d7()] {
        assert_eq!(code.distance_with(None, true).unwrap(), code.distance_with(None, false).unwrap());
    }
}

#[test]
fn stabilizer_matrix_shape() {
    let code = code_6_1_3_d7();
    let s: ZModMatrix = code.stabilizer_matrix();
    assert_eq!((s.rows(), s.cols()), (2, 6));
    assert!(s.mul(&code.check_matrix().transpose()).unwrap().is_zero());
}
