use super::*;
use crate::dyadic::{CubeFunction, Dyadic};
use approx::assert_relative_eq;
use proptest::prelude::*;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn step(items: &[(f64, f64, f64)]) -> PiecewiseConstantFunction {
    PiecewiseConstantFunction::Line(
        Partition1D::from_triples(
            items
                .iter()
                .map(|&(a, b, v)| (Dyadic::from_f64(a).unwrap(), Dyadic::from_f64(b).unwrap(), c(v))),
        )
        .unwrap(),
    )
}

fn hp(alpha: f64, p: f64, q: f64) -> HerzParams {
    HerzParams::new(alpha, Exponent::from(p), Exponent::from(q)).unwrap()
}

fn sp(alpha: f64, p: f64, q: f64, s: f64, beta: f64) -> SpaceParams {
    SpaceParams::b(hp(alpha, p, q), s, Exponent::from(beta)).unwrap()
}

const INF: f64 = f64::INFINITY;

#[test]
fn indicator_of_first_annulus_has_norm_one() {
    let f = step(&[(-1.0, -0.5, 1.0), (0.5, 1.0, 1.0)]);
    for (a, p, q) in [(0.0, 1.0, 1.0), (2.5, 0.5, 3.0), (-0.3, 4.0, 0.7), (1.0, INF, INF)] {
        let nv = herz_norm(&f, &hp(a, p, q)).unwrap();
        assert_relative_eq!(nv.value, 1.0, max_relative = 1e-15);
        assert!(nv.exact && nv.error_bound == 0.0);
    }
}

#[test]
fn two_annuli_with_sup_inside() {
    let f = step(&[(-2.0, -0.5, 1.0), (0.5, 2.0, 1.0)]);
    assert_relative_eq!(
        herz_norm(&f, &hp(1.0, 1.0, INF)).unwrap().value,
        3.0,
        max_relative = 1e-15
    );
}

#[test]
fn lebesgue_coincidence_at_the_origin() {
    let f = step(&[(-1.0, 1.0, 1.0)]);
    let nv = herz_norm(&f, &hp(0.0, 2.0, 2.0)).unwrap();
    assert_relative_eq!(nv.value, 2f64.sqrt(), max_relative = 1e-14);
    assert_eq!(nv.tail_from, Some(0));
    let sup = herz_norm(&step(&[(-1.0, 0.25, 3.0), (0.25, 4.0, -5.0)]), &hp(0.0, INF, INF)).unwrap();
    assert_relative_eq!(sup.value, 5.0, max_relative = 1e-15);
}

#[test]
fn origin_tail_divergence_is_flagged() {
    let f = step(&[(0.0, 1.0, 1.0)]);
    let nv = herz_norm(&f, &hp(-1.0, 1.0, 1.0)).unwrap();
    assert!(nv.divergent && nv.value.is_infinite());
    // Away from the origin the same parameters are harmless.
    let g = step(&[(1.0, 2.0, 1.0)]);
    assert!(!herz_norm(&g, &hp(-1.0, 1.0, 1.0)).unwrap().divergent);
    // p = ∞ on the critical line stays bounded.
    // Every annulus contributes 2^{-k}·2^{k-1}.
    assert_relative_eq!(
        herz_norm(&f, &hp(-1.0, INF, 1.0)).unwrap().value,
        0.5,
        max_relative = 1e-15
    );
}

#[test]
fn empty_function_is_zero() {
    let f = step(&[]);
    assert_eq!(herz_norm(&f, &hp(0.3, 1.0, 2.0)).unwrap(), NormValue::zero());
    let g = step(&[(0.0, 1.0, 0.0)]);
    assert_eq!(herz_norm(&g, &hp(-5.0, 1.0, 2.0)).unwrap().value, 0.0);
}

#[test]
fn closed_form_tail_matches_brute_force() {
    let f = step(&[(-0.75, -0.125, 2.0), (-0.125, 0.375, -1.5), (0.375, 3.0, 0.25)]);
    for (a, p, q) in [
        (0.5, 1.0, 2.0),
        (-0.2, 0.5, 1.0),
        (0.0, 2.0, 2.0),
        (1.5, INF, 0.5),
        (0.1, 3.0, INF),
    ] {
        let h = hp(a, p, q);
        let exact = herz_norm(&f, &h).unwrap();
        let brute = herz_norm_with(
            &f,
            &h,
            &NormOptions {
                tail: TailMode::Explicit(20),
                ..Default::default()
            },
        )
        .unwrap();
        assert_relative_eq!(exact.value, brute.value, max_relative = 1e-12);
        assert!(brute.explicit_terms > exact.explicit_terms);
    }
}

#[test]
fn b_norm_examples() {
    let f = CoefficientField::from_line_entries([(0, 0, c(1.0))]).unwrap();
    let nv = seq_b_norm(&f, &sp(0.0, 1.0, 1.0, 7.3, 1.0)).unwrap();
    assert_relative_eq!(nv.value, 1.0, max_relative = 1e-15);
    let z = Complex64::new(3.0, -4.0);
    let g = CoefficientField::from_line_entries([(0, 0, z)]).unwrap();
    assert_relative_eq!(
        seq_b_norm(&g, &sp(0.0, 1.0, 1.0, 0.0, 1.0)).unwrap().value,
        5.0,
        max_relative = 1e-15
    );
}

#[test]
fn f_norm_hand_partition() {
    let f = CoefficientField::from_line_entries([(0, 0, c(1.0)), (1, 0, c(1.0))]).unwrap();
    let s = sp(0.0, 1.0, 1.0, 0.0, 1.0);
    assert_relative_eq!(
        seq_f_norm(&f, &s, Exponent::from(1.0)).unwrap().value,
        1.5,
        max_relative = 1e-15
    );
    assert_relative_eq!(
        seq_f_norm(&f, &s, Exponent::Infinite).unwrap().value,
        1.0,
        max_relative = 1e-15
    );
}

#[test]
fn single_level_collapse() {
    let f = CoefficientField::from_line_entries([(3, 1, c(2.0)), (3, -5, c(-0.5)), (3, 40, c(1.25))]).unwrap();
    let s = sp(0.4, 1.5, 2.0, -0.7, 1.0);
    let h = herz_norm(&level_function(&f, 3).unwrap().into(), &s.herz)
        .unwrap()
        .value;
    let expect = (3.0 * -0.7f64).exp2() * h;
    for t in [0.5, 1.0, 2.0, INF] {
        let t = Exponent::from(t);
        let sb = SpaceParams { beta: t, ..s };
        assert_relative_eq!(seq_b_norm(&f, &sb).unwrap().value, expect, max_relative = 1e-13);
        assert_relative_eq!(seq_f_norm(&f, &s, t).unwrap().value, expect, max_relative = 1e-13);
    }
}

#[test]
fn two_dimensional_estimate_is_close_to_closed_form() {
    // χ_{[0,1)²} with α = 0, p = q = 1 is its area.
    let cf = CubeFunction::new(2, vec![(DyadicCube::new(0, vec![0, 0]).unwrap(), c(1.0))]).unwrap();
    let nv = herz_norm(&cf.into(), &hp(0.0, 1.0, 1.0)).unwrap();
    assert!(!nv.exact);
    assert!((nv.value - 1.0).abs() <= 3.0 * nv.error_bound + 1e-12, "{nv:?}");

    // Nested cells: the f-aggregate is 2 on [0, 1/2)², 1 elsewhere in [0,1)².
    let f = {
        let mut f = CoefficientField::new(2).unwrap();
        f.insert(DyadicCube::new(0, vec![0, 0]).unwrap(), c(1.0)).unwrap();
        f.insert(DyadicCube::new(1, vec![0, 0]).unwrap(), c(1.0)).unwrap();
        f
    };
    let nv = seq_f_norm(&f, &sp(0.0, 1.0, 1.0, 0.0, 1.0), Exponent::from(1.0)).unwrap();
    assert!((nv.value - 1.25).abs() <= 3.0 * nv.error_bound + 1e-9, "{nv:?}");
}

fn arb_field() -> impl Strategy<Value = CoefficientField> {
    prop::collection::vec((0u32..6, -40i64..40, -4.0f64..4.0, -4.0f64..4.0), 1..8).prop_map(|es| {
        CoefficientField::from_line_entries(es.into_iter().map(|(v, m, re, im)| (v, m, Complex64::new(re, im))))
            .unwrap()
    })
}

fn arb_exp() -> impl Strategy<Value = Exponent> {
    prop_oneof![(0.3f64..4.0).prop_map(Exponent::Finite), Just(Exponent::Infinite)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norms_are_homogeneous(f in arb_field(), a in 0.0f64..2.0, p in arb_exp(), q in arb_exp(),
                             s in -1.0f64..1.0, t in arb_exp(), re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let space = SpaceParams::b(HerzParams::new(a, p, q).unwrap(), s, t).unwrap();
        let z = Complex64::new(re, im);
        prop_assume!(z.norm() > 1e-3);
        let g = f.scaled(z);
        let b0 = seq_b_norm(&f, &space).unwrap().value;
        let b1 = seq_b_norm(&g, &space).unwrap().value;
        prop_assert!((b1 - z.norm() * b0).abs() <= 1e-12 * b1.max(1e-300));
        let f0 = seq_f_norm(&f, &space, t).unwrap().value;
        let f1 = seq_f_norm(&g, &space, t).unwrap().value;
        prop_assert!((f1 - z.norm() * f0).abs() <= 1e-12 * f1.max(1e-300));
    }

    #[test]
    fn f_norm_nonincreasing_in_theta(f in arb_field(), a in 0.0f64..1.0, t1 in 0.3f64..4.0, dt in 0.0f64..3.0, s in -1.0f64..1.0) {
        let space = sp(a, 1.5, 2.0, s, 1.0);
        let lo = seq_f_norm(&f, &space, Exponent::from(t1)).unwrap().value;
        let hi = seq_f_norm(&f, &space, Exponent::from(t1 + dt)).unwrap().value;
        let sup = seq_f_norm(&f, &space, Exponent::Infinite).unwrap().value;
        prop_assert!(hi <= lo * (1.0 + 1e-12));
        prop_assert!(sup <= hi * (1.0 + 1e-12));
    }

    #[test]
    fn b_norm_nonincreasing_in_beta(f in arb_field(), b1 in 0.3f64..4.0, db in 0.0f64..3.0) {
        let lo = seq_b_norm(&f, &sp(0.2, 1.0, 1.0, 0.5, b1)).unwrap().value;
        let hi = seq_b_norm(&f, &sp(0.2, 1.0, 1.0, 0.5, b1 + db)).unwrap().value;
        prop_assert!(hi <= lo * (1.0 + 1e-12));
    }
}
