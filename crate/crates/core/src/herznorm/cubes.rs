use std::collections::BTreeMap;

use super::profile::{AnnulusProfile, OriginTail};
use super::TailMode;
use crate::dyadic::{unit_ball_volume, DyadicCube, OverlapEstimator};
use crate::Exponent;

/// A region `Q \ ∪ holes` carrying a constant modulus; holes are disjoint
/// dyadic sub-cubes of `Q`.
pub(crate) struct Cell<'a> {
    pub cube: &'a DyadicCube,
    pub value: f64,
    pub holes: Vec<&'a DyadicCube>,
}

fn distance_range(cube: &DyadicCube) -> (f64, f64) {
    let (mut lo2, mut hi2) = (0.0, 0.0);
    for (a, b) in cube.extent() {
        let (a, b) = (a.to_f64(), b.to_f64());
        let near = if a > 0.0 {
            a
        } else if b < 0.0 {
            -b
        } else {
            0.0
        };
        lo2 += near * near;
        hi2 += a.abs().max(b.abs()).powi(2);
    }
    (lo2.sqrt(), hi2.sqrt())
}

/// Whether `C_k ∩ Q` has positive measure.
fn meets(k: i64, cube: &DyadicCube) -> bool {
    let (lo, hi) = distance_range(cube);
    lo < 2f64.powi(k as i32) && hi > 2f64.powi(k as i32 - 1)
}

/// Orthant code of an origin-touching cube (bit `i` set for the negative axis).
pub(crate) fn orthant(cube: &DyadicCube) -> Option<usize> {
    let mut code = 0;
    for (i, &m) in cube.index().iter().enumerate() {
        match m {
            0 => {}
            -1 => code |= 1 << i,
            _ => return None,
        }
    }
    Some(code)
}

/// Estimated profile for cells in `ℝⁿ`, `n ≥ 2`.
///
/// `orthant_values[o]` is the modulus of the integrand near the origin in
/// orthant `o`; it is constant on `|x| < 2^{-vmax}`.
pub(crate) fn cube_profile(
    n: usize,
    q: Exponent,
    cells: &[Cell<'_>],
    orthant_values: &[f64],
    vmax: u32,
    tail: TailMode,
    estimator: &OverlapEstimator,
) -> AnnulusProfile {
    let k0 = -(vmax as i64);
    let k_split = match tail {
        TailMode::Analytic => k0,
        TailMode::Explicit(extra) => k0 - extra as i64,
    };
    let share = unit_ball_volume(n) * (1.0 - 0.5f64.powi(n as i32)) / (1usize << n) as f64;
    let coeff = match q {
        Exponent::Finite(q) => orthant_values.iter().map(|v| v.powf(q)).sum::<f64>() * share,
        Exponent::Infinite => orthant_values.iter().cloned().fold(0.0, f64::max),
    };
    let mut profile = AnnulusProfile::new(n, q, false);
    profile.tail = Some(OriginTail { k_split, coeff });

    for cell in cells.iter().filter(|c| c.value > 0.0) {
        let (lo, hi) = distance_range(cell.cube);
        let k_lo = if lo > 0.0 {
            (lo.log2().floor() as i64).max(k_split + 1)
        } else {
            k_split + 1
        };
        let k_hi = hi.log2().ceil() as i64 + 1;
        for k in k_lo..=k_hi {
            match q {
                Exponent::Finite(_) => {
                    let o = estimator.overlap(k, cell.cube);
                    let (mut m, mut e) = (o.measure, o.std_error);
                    for h in &cell.holes {
                        let oh = estimator.overlap(k, h);
                        m -= oh.measure;
                        e += oh.std_error;
                    }
                    profile.add_signed(k, cell.value, m, e);
                }
                Exponent::Infinite => {
                    if !meets(k, cell.cube) {
                        continue;
                    }
                    let o = estimator.overlap(k, cell.cube);
                    let covered: f64 = cell.holes.iter().map(|h| estimator.overlap(k, h).measure).sum();
                    if o.measure - covered > 0.0 {
                        profile.add(k, cell.value, 1.0, 0.0);
                    }
                }
            }
        }
    }
    for (m, _) in profile.masses.values_mut() {
        *m = m.max(0.0);
    }
    profile
}

/// For every occupied cube, its nearest occupied strict ancestor.
pub(crate) fn nearest_ancestors<V>(
    cubes: &BTreeMap<DyadicCube, V>,
) -> BTreeMap<&DyadicCube, Option<&DyadicCube>> {
    cubes
        .keys()
        .map(|c| {
            let mut up = c.parent();
            let mut found = None;
            while let Some(p) = up {
                if let Some((key, _)) = cubes.get_key_value(&p) {
                    found = Some(key);
                    break;
                }
                up = p.parent();
            }
            (c, found)
        })
        .collect()
}
