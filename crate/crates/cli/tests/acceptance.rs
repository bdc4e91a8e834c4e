//! Acceptance suite: one test per criterion, tolerances and runtimes pinned.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use herzlab::dyadic::{Partition1D, PiecewiseConstantFunction, StepFunction};
use herzlab::embedlab::{
    dilation_probe, estimate_embedding_constant, generate_member, representative_case, sharpness_norms,
    single_level_witness, violate_balance, weighted_corollary_probe, Branch, EnsembleSpec, ProbeScale,
    WeightedCorollary,
};
use herzlab::herznorm::{herz_norm, seq_b_norm_with, seq_f_norm_with, NormOptions, TailMode};
use herzlab::phitransform::{analyze, random_band_limited, synthesize, Grid, WindowFamily};
use herzlab::rearrange::{check_hardy, distribution_measure, lp_norm, property2_sides, rearrangement, HardyInput};
use herzlab::{CoefficientField, Complex64, Dyadic, Exponent, HerzParams, SpaceKind, SpaceParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn exponent_from(rng: &mut ChaCha8Rng, choices: &[f64]) -> Exponent {
    Exponent::from(choices[rng.gen_range(0..choices.len())])
}

const EXPONENTS: [f64; 4] = [0.5, 1.0, 2.0, f64::INFINITY];

// ---------------------------------------------------------------------------
// 1. Norm engine exactness against a dense-grid oracle.

/// Grid spacing of the oracle.
const H: f64 = 1.0 / 262_144.0;
/// Annuli at or below this index fit inside the first grid cell.
const K_CELL: i64 = -18;

struct Cube {
    level: u32,
    lo: f64,
    hi: f64,
    value: Complex64,
}

fn cubes_of(field: &CoefficientField) -> Vec<Cube> {
    field
        .iter()
        .map(|(c, z)| {
            let (a, b) = c.extent()[0];
            Cube {
                level: c.level(),
                lo: a.to_f64(),
                hi: b.to_f64(),
                value: *z,
            }
        })
        .collect()
}

/// Midpoint quadrature of `|g|` over annuli on a `2^{-18}` grid, plus the
/// origin annuli summed term by term from the values next to the origin.
fn oracle_herz(cubes: &[&Cube], g: &dyn Fn(f64) -> f64, hp: &HerzParams) -> f64 {
    let mut intervals: Vec<(f64, f64)> = cubes.iter().map(|c| (c.lo, c.hi)).collect();
    intervals.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (a, b) in intervals {
        match merged.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => merged.push((a, b)),
        }
    }
    let mut masses: BTreeMap<i64, f64> = BTreeMap::new();
    let q = hp.q;
    let mut add = |k: i64, v: f64, w: f64| {
        let e = masses.entry(k).or_insert(0.0);
        match q {
            Exponent::Finite(q) => *e += v.powf(q) * w,
            Exponent::Infinite => *e = e.max(v),
        }
    };
    for &(a, b) in &merged {
        for (sign, lo, hi) in [(1.0, a.max(0.0), b.max(0.0)), (-1.0, (-b).max(0.0), (-a).max(0.0))] {
            let lo = lo.max(H);
            if hi <= lo {
                continue;
            }
            let mut k = (lo.log2().floor() as i64) + 1;
            loop {
                let start = lo.max(((k - 1) as f64).exp2());
                let end = hi.min((k as f64).exp2());
                if start >= hi {
                    break;
                }
                let cells = ((end - start) / H).round() as i64;
                for j in 0..cells {
                    let mid = start + (j as f64 + 0.5) * H;
                    add(k, g(sign * mid), H);
                }
                k += 1;
            }
        }
    }
    let (c_pos, c_neg) = (g(0.5 * H), g(-0.5 * H));
    let gamma = hp.origin_exponent(1);
    let mut k = K_CELL;
    loop {
        let w = ((k - 1) as f64).exp2();
        match q {
            Exponent::Finite(qq) => *masses.entry(k).or_insert(0.0) += (c_pos.powf(qq) + c_neg.powf(qq)) * w,
            Exponent::Infinite => {
                let e = masses.entry(k).or_insert(0.0);
                *e = e.max(c_pos.max(c_neg));
            }
        }
        if (K_CELL - k) as f64 * gamma > 80.0 || (c_pos == 0.0 && c_neg == 0.0) {
            break;
        }
        k -= 1;
    }
    // weights in log2 form: 2^{kα} overflows deep in the tail
    let logs: Vec<f64> = masses
        .iter()
        .filter(|(_, &m)| m > 0.0)
        .map(|(&k, &m)| {
            let lq = match q {
                Exponent::Finite(qq) => m.log2() / qq,
                Exponent::Infinite => m.log2(),
            };
            k as f64 * hp.alpha + lq
        })
        .collect();
    match hp.p {
        Exponent::Finite(p) => logs.iter().map(|l| (l * p).exp2()).sum::<f64>().powf(1.0 / p),
        Exponent::Infinite => logs.iter().map(|l| l.exp2()).fold(0.0, f64::max),
    }
}

fn lp_combine(terms: impl Iterator<Item = f64>, e: Exponent) -> f64 {
    match e {
        Exponent::Finite(p) => terms.map(|t| t.powf(p)).sum::<f64>().powf(1.0 / p),
        Exponent::Infinite => terms.fold(0.0, f64::max),
    }
}

fn oracle_b(field: &CoefficientField, sp: &SpaceParams) -> f64 {
    let cubes = cubes_of(field);
    let levels: Vec<u32> = field.levels().into_iter().collect();
    lp_combine(
        levels.iter().map(|&v| {
            let at: Vec<&Cube> = cubes.iter().filter(|c| c.level == v).collect();
            let g = |x: f64| {
                at.iter()
                    .filter(|c| c.lo <= x && x < c.hi)
                    .map(|c| c.value)
                    .sum::<Complex64>()
                    .norm()
            };
            (v as f64 * sp.s).exp2() * oracle_herz(&at, &g, &sp.herz)
        }),
        sp.beta,
    )
}

fn oracle_f(field: &CoefficientField, sp: &SpaceParams) -> f64 {
    let cubes = cubes_of(field);
    let all: Vec<&Cube> = cubes.iter().collect();
    let g = |x: f64| {
        lp_combine(
            cubes
                .iter()
                .filter(|c| c.lo <= x && x < c.hi)
                .map(|c| (c.level as f64 * sp.s).exp2() * c.value.norm()),
            sp.beta,
        )
    };
    oracle_herz(&all, &g, &sp.herz)
}

#[test]
fn c1_norm_engine_matches_dense_oracle_and_brute_force_tail() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let spec = EnsembleSpec {
        members: 500,
        vmax: 10,
        kmax: 12,
        sparsity: 6,
        seed: 2024,
        ..Default::default()
    };
    let explicit = NormOptions {
        tail: TailMode::Explicit(20),
        ..Default::default()
    };
    let (mut worst_oracle, mut worst_tail) = (0.0f64, 0.0f64);
    for i in 0..500 {
        let field = generate_member(&spec, i).unwrap();
        let q = exponent_from(&mut rng, &EXPONENTS);
        let gamma = rng.gen_range(0.1..1.5);
        let herz = HerzParams::new(gamma - q.recip(), exponent_from(&mut rng, &EXPONENTS), q).unwrap();
        let s = rng.gen_range(-1.0..1.0);
        let beta = exponent_from(&mut rng, &EXPONENTS);
        for kind in [SpaceKind::B, SpaceKind::F] {
            let sp = SpaceParams::new(herz, s, beta, kind).unwrap();
            let (engine, brute, oracle) = match kind {
                SpaceKind::B => (
                    seq_b_norm_with(&field, &sp, &NormOptions::default()).unwrap(),
                    seq_b_norm_with(&field, &sp, &explicit).unwrap(),
                    oracle_b(&field, &sp),
                ),
                SpaceKind::F => (
                    seq_f_norm_with(&field, &sp, beta, &NormOptions::default()).unwrap(),
                    seq_f_norm_with(&field, &sp, beta, &explicit).unwrap(),
                    oracle_f(&field, &sp),
                ),
            };
            assert!(engine.exact && !engine.divergent);
            let e1 = rel(engine.value, oracle);
            let e2 = rel(engine.value, brute.value);
            assert!(
                e1 <= 1e-4,
                "field {i} {kind}: engine {} oracle {oracle} ({sp:?})",
                engine.value
            );
            assert!(
                e2 <= 1e-12,
                "field {i} {kind}: engine {} explicit tail {}",
                engine.value,
                brute.value
            );
            worst_oracle = worst_oracle.max(e1);
            worst_tail = worst_tail.max(e2);
        }
    }
    eprintln!(
        "c1: worst oracle {worst_oracle:.2e}, worst tail {worst_tail:.2e}, {:?}",
        start.elapsed()
    );
    assert!(start.elapsed() < Duration::from_secs(60));
}

// ---------------------------------------------------------------------------
// 2. Lebesgue coincidence.

fn d(x: f64) -> Dyadic {
    Dyadic::from_f64(x).unwrap()
}

/// Random step function with dyadic breakpoints at resolution `2^{-6}` in `[-64, 64)`.
fn random_step(rng: &mut ChaCha8Rng, nonneg: bool) -> StepFunction {
    let pieces = rng.gen_range(1..8);
    let mut cuts: Vec<i64> = (0..2 * pieces).map(|_| rng.gen_range(-4096..4096)).collect();
    if rng.gen_bool(0.3) {
        cuts.push(0);
    }
    cuts.sort_unstable();
    cuts.dedup();
    let mut triples = Vec::new();
    for w in cuts.windows(2) {
        if rng.gen_bool(0.25) {
            continue;
        }
        let mag = rng.gen_range(-6.0f64..6.0).exp2();
        let value = if nonneg {
            Complex64::new(mag, 0.0)
        } else {
            Complex64::from_polar(mag, rng.gen_range(0.0..std::f64::consts::TAU))
        };
        triples.push((d(w[0] as f64 / 64.0), d(w[1] as f64 / 64.0), value));
    }
    if triples.is_empty() {
        triples.push((d(0.0), d(1.0), Complex64::new(1.0, 0.0)));
    }
    Partition1D::from_triples(triples).unwrap()
}

#[test]
fn c2_lebesgue_coincidence() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for p in EXPONENTS {
        let e = Exponent::from(p);
        let hp = HerzParams::new(0.0, e, e).unwrap();
        for _ in 0..300 {
            let f: PiecewiseConstantFunction = random_step(&mut rng, false).into();
            let herz = herz_norm(&f, &hp).unwrap();
            assert!(
                rel(herz.value, lp_norm(&f, e)) <= 1e-12,
                "p = {p}: {} vs {}",
                herz.value,
                lp_norm(&f, e)
            );
        }
    }
}

// ---------------------------------------------------------------------------
// 3. Sharpness family.

#[test]
fn c3_sharpness_family() {
    let start = Instant::now();
    let case = representative_case(Branch::A).unwrap();
    let r = match case.params.r.unwrap() {
        Exponent::Finite(r) => r,
        Exponent::Infinite => unreachable!(),
    };
    let sigma = 0.5;
    assert!(sigma < r);
    let pts = sharpness_norms(&case, &[4, 8, 16, 32], Exponent::from(sigma)).unwrap();
    for w in pts.windows(2).take(3) {
        assert!((w[1].source_power / w[0].source_power - 2.0).abs() <= 1e-9);
        assert!((w[1].target_power / w[0].target_power - 2.0).abs() <= 1e-9);
    }
    let cross = pts[3].ratio / pts[0].ratio;
    let predicted = 8f64.powf(1.0 / sigma - 1.0 / r);
    assert!(rel(cross, predicted) <= 0.05, "cross ratio {cross} vs {predicted}");
    assert!(start.elapsed() < Duration::from_secs(5));
}

// ---------------------------------------------------------------------------
// 4. Embedding boundedness.

#[test]
fn c4_embedding_boundedness() {
    let start = Instant::now();
    for b in [Branch::A, Branch::B, Branch::C, Branch::D, Branch::E, Branch::F] {
        let case = representative_case(b).unwrap();
        let r = estimate_embedding_constant(
            &case,
            &EnsembleSpec {
                members: 200,
                vmax: 10,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(r.extended.vmax, 14);
        assert!(r.base.samples.iter().all(|s| s.ratio.is_finite() && s.ratio >= 0.0));
        assert!(r.growth <= 1.10, "branch {b}: max ratio grew by {}", r.growth);
    }
    assert!(start.elapsed() < Duration::from_secs(600));
}

// ---------------------------------------------------------------------------
// 5. Necessity: dilation exponents and single-level witnesses.

#[test]
fn c5_necessity_probes() {
    for b in [Branch::A, Branch::B, Branch::C, Branch::D, Branch::E, Branch::F] {
        let case = representative_case(b).unwrap();
        for (scale, ns) in [
            (ProbeScale::Fine, vec![1, 2, 3, 4, 5]),
            (ProbeScale::Coarse, vec![-5, -4, -3, -2, -1, 0]),
        ] {
            let grid = scale.default_grid();
            assert_eq!(grid.size(), 1 << 16);
            let r = dilation_probe(&case, scale, &ns, &grid).unwrap();
            assert!(
                rel(r.fitted_source, r.predicted_source) <= 0.02,
                "{b} {scale:?} source {r:?}"
            );
            assert!(
                rel(r.fitted_target, r.predicted_target) <= 0.02,
                "{b} {scale:?} target {r:?}"
            );
            assert!(r.balance_holds && r.alpha_holds);
            if scale == ProbeScale::Fine {
                assert!(
                    r.ratio_spread() <= 1.03,
                    "{b}: balanced ratio spread {}",
                    r.ratio_spread()
                );
            }
        }
        let broken = violate_balance(&case, 0.5);
        let w = single_level_witness(&broken, &[6, 10]).unwrap();
        let growth = w[1].ratio / w[0].ratio;
        assert!(rel(growth, 4.0) <= 0.05, "{b}: witness growth {growth}");
    }
}

// ---------------------------------------------------------------------------
// 6. phi-transform.

#[test]
fn c6_phi_transform() {
    let start = Instant::now();
    let grid = Grid::new(64.0, 1 << 14).unwrap();
    let w = WindowFamily::build(&grid).unwrap();
    assert!(w.calderon_error <= 1e-12, "identity defect {}", w.calderon_error);
    let vmax = grid.max_level();
    for seed in 0..20 {
        let f = random_band_limited(&grid, (vmax as f64).exp2(), seed);
        let back = synthesize(&analyze(&f, &w, vmax).unwrap(), &w, &grid).unwrap();
        let err = back
            .combine(Complex64::new(1.0, 0.0), &f, Complex64::new(-1.0, 0.0))
            .unwrap()
            .l2_norm()
            / f.l2_norm();
        assert!(err <= 1e-8, "seed {seed}: roundtrip error {err}");
    }
    assert!(start.elapsed() < Duration::from_secs(30));
}

// ---------------------------------------------------------------------------
// 7. Rearrangement.

#[test]
fn c7_rearrangement() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let f: PiecewiseConstantFunction = random_step(&mut rng, false).into();
        let star = rearrangement(&f);
        let mut levels: Vec<f64> = star.values().to_vec();
        levels.extend(star.values().iter().map(|v| v * 0.999));
        levels.push(0.0);
        for lambda in levels {
            assert_eq!(distribution_measure(&f, lambda), star.distribution_measure(lambda));
        }
        for p in [0.5, 1.0, 2.0] {
            let e = Exponent::from(p);
            assert!(rel(lp_norm(&f, e), star.lp_norm(e)) <= 1e-12);
        }
    }
    for p in [1.0, 2.0, f64::INFINITY] {
        for _ in 0..1000 {
            let f = random_step(&mut rng, true);
            let g = random_step(&mut rng, true);
            let (lhs, rhs) = property2_sides(&f, &g, Exponent::from(p)).unwrap();
            // p = 1 is an identity; allow rounding of the two summation orders
            assert!(lhs <= rhs * (1.0 + 1e-12), "p = {p}: {lhs} > {rhs}");
        }
    }
}

// ---------------------------------------------------------------------------
// 8. Hardy lemma.

#[test]
fn c8_hardy_lemma() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for a in [0.25, 0.5, 0.9] {
        for q in EXPONENTS {
            for _ in 0..1000 {
                let len = rng.gen_range(1..64);
                let eps: Vec<f64> = (0..len).map(|_| rng.gen_range(-10.0f64..10.0).exp2()).collect();
                let check = check_hardy(&HardyInput::new(a, Exponent::from(q), eps).unwrap());
                assert!(check.holds, "a = {a}, q = {q}: {check:?}");
            }
        }
    }
}

// ---------------------------------------------------------------------------
// 9. Weighted corollary.

#[test]
fn c9_weighted_corollary() {
    let cor = WeightedCorollary {
        q: 1.0,
        s: 2.0,
        gamma1: 0.4,
        gamma2: 0.5,
        s2: 0.0,
        beta: Exponent::from(2.0),
    };
    let r = weighted_corollary_probe(&cor, &[1, 2, 3, 4, 5], &[-5, -4, -3, -2, -1, 0]).unwrap();
    assert!(
        r.jawerth_growth() <= 1.10,
        "F to B ratio grew by {}",
        r.jawerth_growth()
    );
    let spread = r.jawerth_fine.iter().cloned().fold(0.0, f64::max)
        / r.jawerth_fine.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(spread <= 1.10);
}

// ---------------------------------------------------------------------------
// 10. Determinism of stochastic commands.

fn run_cli(config: &Path, out: &Path, threads: &str) -> Vec<u8> {
    let status = Command::new(env!("CARGO_BIN_EXE_herzlab"))
        .args([
            "--config",
            config.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--threads",
            threads,
        ])
        .env_remove("HERZLAB_OUT")
        .status()
        .unwrap();
    assert!(status.success());
    let name = fs::read_dir(out)
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().is_some_and(|e| e == "csv"))
        .unwrap();
    fs::read(name).unwrap()
}

#[test]
fn c10_determinism() {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for name in ["verify.toml", "roundtrip.toml"] {
        let tmp = tempfile::tempdir().unwrap();
        let serial = run_cli(&configs.join(name), &tmp.path().join("serial"), "1");
        let parallel = run_cli(&configs.join(name), &tmp.path().join("auto"), "0");
        assert!(!serial.is_empty());
        assert_eq!(serial, parallel, "{name}");
    }
}
