use herzlab::dyadic::{Partition1D, PiecewiseConstantFunction};
use herzlab::herznorm::{herz_norm, seq_norm};
use herzlab::phitransform::{analyze, random_band_limited, synthesize, Grid, WindowFamily};
use herzlab::rearrange::{lp_norm, rearrangement};
use herzlab::{CoefficientField, Complex64, Dyadic, Exponent, HerzParams, SpaceParams};
use proptest::prelude::*;

fn step(cuts: &[i64], values: &[f64], scale: i32) -> PiecewiseConstantFunction {
    let mut cuts = cuts.to_vec();
    cuts.sort_unstable();
    cuts.dedup();
    let triples: Vec<_> = cuts
        .windows(2)
        .zip(values.iter().cycle())
        .map(|(w, &v)| {
            (
                Dyadic::new(w[0] as i128, scale),
                Dyadic::new(w[1] as i128, scale),
                Complex64::new(v, 0.0),
            )
        })
        .collect();
    Partition1D::from_triples(triples).unwrap().into()
}

fn exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![Just(0.5), Just(1.0), Just(2.0), Just(f64::INFINITY)].prop_map(Exponent::from)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// `‖f(2^j ·)‖ = 2^{-j(α+1/q)} ‖f‖` on dyadic step functions, `q` the inner exponent.
    #[test]
    fn herz_norm_scales_under_dyadic_dilation(
        cuts in prop::collection::vec(-512i64..512, 2..10),
        values in prop::collection::vec(0.1f64..10.0, 1..6),
        j in -6i32..6,
        alpha in -0.4f64..1.5,
        p in exponent(),
        q in exponent(),
    ) {
        prop_assume!(cuts.iter().collect::<std::collections::BTreeSet<_>>().len() >= 2);
        let hp = HerzParams::new(alpha, p, q).unwrap();
        prop_assume!(hp.is_valid(1));
        let f = step(&cuts, &values, -4);
        let g = step(&cuts, &values, -4 - j);
        let (nf, ng) = (herz_norm(&f, &hp).unwrap(), herz_norm(&g, &hp).unwrap());
        prop_assume!(!nf.divergent);
        let expected = nf.value * (-(j as f64) * (alpha + q.recip())).exp2();
        prop_assert!((ng.value / expected - 1.0).abs() <= 1e-12, "{} vs {}", ng.value, expected);
    }

    /// Rearrangement preserves every Lebesgue norm.
    #[test]
    fn rearrangement_preserves_lp(
        cuts in prop::collection::vec(-512i64..512, 2..10),
        values in prop::collection::vec(0.1f64..10.0, 1..6),
        p in exponent(),
    ) {
        prop_assume!(cuts.iter().collect::<std::collections::BTreeSet<_>>().len() >= 2);
        let f = step(&cuts, &values, -3);
        let a = lp_norm(&f, p);
        let b = rearrangement(&f).lp_norm(p);
        prop_assert!((a - b).abs() <= 1e-12 * a.max(b));
    }

    /// Sequence norms are absolutely homogeneous.
    #[test]
    fn sequence_norms_are_homogeneous(
        entries in prop::collection::vec((0u32..8, -64i64..64, -4.0f64..4.0), 1..12),
        c in -3.0f64..3.0,
        f_kind in any::<bool>(),
        beta in exponent(),
    ) {
        let field = CoefficientField::from_line_entries(
            entries.iter().map(|&(v, m, l)| (v, m, Complex64::new(l.exp2(), 0.0))),
        ).unwrap();
        let herz = HerzParams::new(0.25, Exponent::from(2.0), Exponent::from(1.0)).unwrap();
        let sp = if f_kind { SpaceParams::f(herz, 0.5, beta) } else { SpaceParams::b(herz, 0.5, beta) }.unwrap();
        let base = seq_norm(&field, &sp).unwrap().value;
        let factor = Complex64::from_polar(c.exp2(), 1.0);
        let scaled = seq_norm(&field.scaled(factor), &sp).unwrap().value;
        prop_assert!((scaled / (base * c.exp2()) - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn phi_transform_is_linear() {
    let grid = Grid::new(32.0, 1 << 11).unwrap();
    let w = WindowFamily::build(&grid).unwrap();
    let vmax = grid.max_level();
    let f = random_band_limited(&grid, 16.0, 1);
    let g = random_band_limited(&grid, 16.0, 2);
    let (a, b) = (Complex64::new(0.5, -1.0), Complex64::new(2.0, 0.25));
    let sum = f.combine(a, &g, b).unwrap();
    let lhs = analyze(&sum, &w, vmax).unwrap();
    let rhs = analyze(&f, &w, vmax)
        .unwrap()
        .combine(a, &analyze(&g, &w, vmax).unwrap(), b)
        .unwrap();
    let diff = lhs
        .combine(Complex64::new(1.0, 0.0), &rhs, Complex64::new(-1.0, 0.0))
        .unwrap();
    assert!(diff.max_abs() <= 1e-10 * lhs.max_abs(), "{}", diff.max_abs());
    let back = synthesize(&lhs, &w, &grid).unwrap();
    let err = back
        .combine(Complex64::new(1.0, 0.0), &sum, Complex64::new(-1.0, 0.0))
        .unwrap()
        .l2_norm();
    assert!(err <= 1e-8 * sum.l2_norm());
}
