use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Dyadic;
use crate::{Error, Result};

/// Deepest level accepted for a dyadic cube; keeps exact arithmetic inside `i128`.
pub const MAX_LEVEL: u32 = 48;

/// Default Monte Carlo budget per cube for `n ≥ 2` overlaps.
pub const DEFAULT_OVERLAP_SAMPLES: usize = 1 << 12;

/// The half-open dyadic cube `Q_{v,m} = Π_i [m_i 2^{-v}, (m_i+1) 2^{-v})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DyadicCube {
    level: u32,
    index: Vec<i64>,
}

impl DyadicCube {
    pub fn new(level: i64, index: Vec<i64>) -> Result<Self> {
        if level < 0 {
            return Err(Error::NegativeLevel(level));
        }
        if level > MAX_LEVEL as i64 {
            return Err(Error::LevelTooDeep(level));
        }
        if !(1..=3).contains(&index.len()) {
            return Err(Error::UnsupportedDimension(index.len()));
        }
        Ok(DyadicCube {
            level: level as u32,
            index,
        })
    }

    /// One-dimensional cube `[m 2^{-v}, (m+1) 2^{-v})`.
    pub fn line(level: u32, m: i64) -> Result<Self> {
        Self::new(level as i64, vec![m])
    }

    /// Sorts before every cube on level `v` (an empty index); used for range queries.
    pub(crate) fn level_floor(v: u32) -> DyadicCube {
        DyadicCube {
            level: v,
            index: Vec::new(),
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn index(&self) -> &[i64] {
        &self.index
    }

    pub fn dim(&self) -> usize {
        self.index.len()
    }

    pub fn side(&self) -> Dyadic {
        Dyadic::pow2(-(self.level as i32))
    }

    /// Exact half-open extent along every axis.
    pub fn extent(&self) -> Vec<(Dyadic, Dyadic)> {
        let e = -(self.level as i32);
        self.index
            .iter()
            .map(|&m| (Dyadic::new(m as i128, e), Dyadic::new(m as i128 + 1, e)))
            .collect()
    }

    /// The enclosing cube one level up, if any.
    pub fn parent(&self) -> Option<DyadicCube> {
        if self.level == 0 {
            return None;
        }
        Some(DyadicCube {
            level: self.level - 1,
            index: self.index.iter().map(|m| m.div_euclid(2)).collect(),
        })
    }

    /// The `2^n` children one level down.
    pub fn children(&self) -> Vec<DyadicCube> {
        let n = self.dim();
        (0..1usize << n)
            .map(|bits| DyadicCube {
                level: self.level + 1,
                index: self
                    .index
                    .iter()
                    .enumerate()
                    .map(|(i, m)| 2 * m + ((bits >> i) & 1) as i64)
                    .collect(),
            })
            .collect()
    }

    /// Whether the closure of the cube contains the origin.
    pub fn touches_origin(&self) -> bool {
        self.index.iter().all(|&m| m == 0 || m == -1)
    }

    pub fn contains(&self, other: &DyadicCube) -> bool {
        if other.dim() != self.dim() || other.level < self.level {
            return false;
        }
        let shift = other.level - self.level;
        self.index.iter().zip(&other.index).all(|(&a, &b)| b >> shift == a)
    }
}

/// The box of `cube`, checked against the ambient dimension.
pub fn cube_extent(cube: &DyadicCube, n: usize) -> Result<Vec<(Dyadic, Dyadic)>> {
    if cube.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: cube.dim(),
        });
    }
    Ok(cube.extent())
}

/// The dyadic annulus `C_k = {x : 2^{k-1} ≤ |x| < 2^k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Annulus {
    pub k: i64,
}

impl Annulus {
    pub fn new(k: i64) -> Self {
        Annulus { k }
    }

    pub fn inner(self) -> Dyadic {
        Dyadic::pow2(self.k as i32 - 1)
    }

    pub fn outer(self) -> Dyadic {
        Dyadic::pow2(self.k as i32)
    }

    /// The annulus containing `x ≠ 0` (ties go to the higher annulus).
    pub fn containing(x: Dyadic) -> Option<Annulus> {
        if x.is_zero() {
            None
        } else {
            Some(Annulus::new(x.abs().floor_log2() as i64 + 1))
        }
    }

    /// Lebesgue measure `ω_n (1 - 2^{-n}) 2^{kn}`.
    pub fn measure(self, n: usize) -> f64 {
        unit_ball_volume(n) * (1.0 - 0.5f64.powi(n as i32)) * 2f64.powi((self.k * n as i64) as i32)
    }
}

pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        1 => 2.0,
        2 => std::f64::consts::PI,
        3 => 4.0 * std::f64::consts::PI / 3.0,
        _ => panic!("unit_ball_volume: unsupported dimension {n}"),
    }
}

/// `c_n = 1 + ⌊log₂(2√n + 1)⌋`; reported for diagnostics only.
pub fn dimension_constant(n: usize) -> i32 {
    1 + (2.0 * (n as f64).sqrt() + 1.0).log2().floor() as i32
}

/// Measure of `Q ∩ C_k` with a one-sigma error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Overlap {
    pub measure: f64,
    pub std_error: f64,
    pub exact: bool,
}

impl Overlap {
    fn exact(measure: f64) -> Self {
        Overlap {
            measure,
            std_error: 0.0,
            exact: true,
        }
    }
}

/// Exact `|[a, b) ∩ [c, d)|` for half-open intervals.
pub fn interval_overlap(a: Dyadic, b: Dyadic, c: Dyadic, d: Dyadic) -> Dyadic {
    let lo = a.max(c);
    let hi = b.min(d);
    if hi > lo {
        hi - lo
    } else {
        Dyadic::ZERO
    }
}

/// Exact `|[a, b) ∩ C_k|` on the line.
pub fn line_annulus_overlap(a: Dyadic, b: Dyadic, k: i64) -> Dyadic {
    let ann = Annulus::new(k);
    let (i, o) = (ann.inner(), ann.outer());
    interval_overlap(a, b, i, o) + interval_overlap(a, b, -o, -i)
}

/// Stratified Monte Carlo estimator for `n ∈ {2, 3}` with exact shortcuts.
#[derive(Clone, Copy, Debug)]
pub struct OverlapEstimator {
    pub samples: usize,
    pub seed: u64,
}

impl Default for OverlapEstimator {
    fn default() -> Self {
        OverlapEstimator {
            samples: DEFAULT_OVERLAP_SAMPLES,
            seed: 0x005e_ed0f_c0be,
        }
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl OverlapEstimator {
    pub fn overlap(&self, k: i64, cube: &DyadicCube) -> Overlap {
        let n = cube.dim();
        if n == 1 {
            let (a, b) = cube.extent()[0];
            return Overlap::exact(line_annulus_overlap(a, b, k).to_f64());
        }
        let bounds: Vec<(f64, f64)> = cube
            .extent()
            .into_iter()
            .map(|(a, b)| (a.to_f64(), b.to_f64()))
            .collect();
        let side = cube.side().to_f64();
        let volume = side.powi(n as i32);
        let r_in = 2f64.powi(k as i32 - 1);
        let r_out = 2f64.powi(k as i32);

        let mut min2 = 0.0;
        let mut max2 = 0.0;
        for &(lo, hi) in &bounds {
            let near = if lo > 0.0 {
                lo
            } else if hi < 0.0 {
                -hi
            } else {
                0.0
            };
            min2 += near * near;
            max2 += lo.abs().max(hi.abs()).powi(2);
        }
        let (min_d, max_d) = (min2.sqrt(), max2.sqrt());
        if max_d <= r_in || min_d >= r_out {
            return Overlap::exact(0.0);
        }
        if min_d >= r_in && max_d <= r_out {
            return Overlap::exact(volume);
        }
        if cube.touches_origin() && side >= r_out {
            return Overlap::exact(Annulus::new(k).measure(n) / (1usize << n) as f64);
        }

        let per_axis = 4usize;
        let strata = per_axis.pow(n as u32);
        let per_stratum = (self.samples / strata).max(2);
        let mut key = self.seed ^ (k as u64).wrapping_mul(0x2545_f491_4f6c_dd1d);
        key = splitmix(key ^ cube.level as u64);
        for &m in cube.index() {
            key = splitmix(key ^ m as u64);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(key);
        let sub = side / per_axis as f64;
        let sub_vol = volume / strata as f64;
        let (mut est, mut var) = (0.0, 0.0);
        let mut point = vec![0.0; n];
        for s in 0..strata {
            let mut hits = 0usize;
            for _ in 0..per_stratum {
                let mut r2 = 0.0;
                let mut code = s;
                for (axis, x) in point.iter_mut().enumerate() {
                    let cell = code % per_axis;
                    code /= per_axis;
                    *x = bounds[axis].0 + (cell as f64 + rng.gen::<f64>()) * sub;
                    r2 += *x * *x;
                }
                let r = r2.sqrt();
                if r >= r_in && r < r_out {
                    hits += 1;
                }
            }
            let frac = hits as f64 / per_stratum as f64;
            est += sub_vol * frac;
            var += sub_vol * sub_vol * frac * (1.0 - frac) / per_stratum as f64;
        }
        Overlap {
            measure: est,
            std_error: var.sqrt(),
            exact: false,
        }
    }
}

/// `|Q_{v,m} ∩ C_k|`: exact for `n = 1`, stratified Monte Carlo for `n ∈ {2, 3}`.
pub fn annulus_cube_overlap(k: i64, cube: &DyadicCube, n: usize) -> Result<Overlap> {
    if !(1..=3).contains(&n) {
        return Err(Error::UnsupportedDimension(n));
    }
    if cube.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: cube.dim(),
        });
    }
    Ok(OverlapEstimator::default().overlap(k, cube))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(x: f64) -> Dyadic {
        // test helper for small dyadic literals
        let mut e = 0;
        let mut v = x;
        while v.fract() != 0.0 {
            v *= 2.0;
            e -= 1;
        }
        Dyadic::new(v as i128, e)
    }

    #[test]
    fn extents() {
        let c = DyadicCube::new(0, vec![0]).unwrap();
        assert_eq!(cube_extent(&c, 1).unwrap(), vec![(d(0.0), d(1.0))]);
        let c = DyadicCube::new(2, vec![-1]).unwrap();
        assert_eq!(c.extent(), vec![(d(-0.25), d(0.0))]);
        let c = DyadicCube::new(1, vec![1, 1]).unwrap();
        assert_eq!(c.extent(), vec![(d(0.5), d(1.0)), (d(0.5), d(1.0))]);
        assert_eq!(DyadicCube::new(-1, vec![0]), Err(Error::NegativeLevel(-1)));
        assert!(cube_extent(&c, 1).is_err());
    }

    #[test]
    fn exact_line_overlaps() {
        let q = DyadicCube::line(1, 1).unwrap();
        let o = annulus_cube_overlap(0, &q, 1).unwrap();
        assert_eq!((o.measure, o.std_error, o.exact), (0.5, 0.0, true));
        let q = DyadicCube::line(0, 0).unwrap();
        assert_eq!(annulus_cube_overlap(0, &q, 1).unwrap().measure, 0.5);
    }

    #[test]
    fn rejects_bad_dimension() {
        let q = DyadicCube::line(0, 0).unwrap();
        assert_eq!(annulus_cube_overlap(0, &q, 4), Err(Error::UnsupportedDimension(4)));
        assert!(annulus_cube_overlap(0, &q, 2).is_err());
    }

    #[test]
    fn children_refine_overlap_exactly() {
        for v in 0..6u32 {
            for m in -40i64..40 {
                let q = DyadicCube::line(v, m).unwrap();
                for k in -8i64..8 {
                    let parent = OverlapEstimator::default().overlap(k, &q).measure;
                    let kids: f64 = q
                        .children()
                        .iter()
                        .map(|c| OverlapEstimator::default().overlap(k, c).measure)
                        .sum();
                    assert_eq!(parent, kids);
                }
            }
        }
    }

    #[test]
    fn annulus_sums_recover_cube_measure() {
        // away from the origin the annuli tile the cube exactly
        let q = DyadicCube::line(3, 5).unwrap();
        let total: f64 = (-10..10).map(|k| annulus_cube_overlap(k, &q, 1).unwrap().measure).sum();
        assert_eq!(total, 0.125);
        // touching the origin, partial sums approach the measure geometrically
        let q = DyadicCube::line(0, 0).unwrap();
        let partial: f64 = (-30..=0).map(|k| annulus_cube_overlap(k, &q, 1).unwrap().measure).sum();
        assert_eq!(1.0 - partial, 2f64.powi(-31));
    }

    #[test]
    fn dimension_constant_values() {
        assert_eq!(dimension_constant(1), 2);
        assert_eq!(dimension_constant(2), 2);
        assert_eq!(dimension_constant(3), 3);
    }

    #[test]
    fn containment_and_parents() {
        let q = DyadicCube::new(3, vec![5, -3]).unwrap();
        let p = q.parent().unwrap();
        assert_eq!(p.index(), &[2, -2]);
        assert!(p.contains(&q));
        assert!(!q.contains(&p));
        assert!(DyadicCube::new(4, vec![-1, 0]).unwrap().touches_origin());
    }
}
