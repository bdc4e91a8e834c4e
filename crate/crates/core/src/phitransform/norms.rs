use serde::Serialize;

use super::{fft_inverse, Grid, ResolutionOfUnity, SampledFunction};
use crate::herznorm::{combine_levels, AnnulusProfile, HerzParams, NormValue, OriginTail, SpaceKind, SpaceParams};
use crate::{Complex64, Error, Exponent, Result};

/// Quadrature policy for norms of sampled functions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridNormOptions {
    /// Half-annuli with fewer grid cells than this are not integrated on the grid.
    pub min_cells: usize,
    /// Number of such sub-grid annuli evaluated through the trigonometric interpolant.
    pub subgrid_depth: u32,
    /// Quadrature intervals per sub-grid half-annulus.
    pub subgrid_points: usize,
    /// Blocks and DFT terms below this fraction of the largest spectral entry are zero.
    pub spectral_cut: f64,
}

impl Default for GridNormOptions {
    fn default() -> Self {
        GridNormOptions {
            min_cells: 8,
            subgrid_depth: 12,
            subgrid_points: 32,
            spectral_cut: 1e-13,
        }
    }
}

/// A function-space norm together with its quadrature metadata.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FunctionNorm {
    pub norm: NormValue,
    /// Outer Herz parameters actually used (after the weight conversion).
    pub herz: HerzParams,
    /// Annuli integrated on the grid.
    pub grid_annuli: (i64, i64),
    /// Annuli evaluated through the interpolant.
    pub interpolated_annuli: (i64, i64),
    /// Annuli `k > cut_above` leave `[-L, L)` and are excluded.
    pub cut_above: i64,
    /// Littlewood-Paley blocks with nonzero content.
    pub blocks: Vec<u32>,
}

/// Gregory end-corrected trapezoid weights on `n + 1` points (`n ≥ 6`).
fn gregory(n: usize, i: usize) -> f64 {
    const END: [f64; 3] = [3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0];
    let d = i.min(n - i);
    if d < 3 {
        END[d]
    } else {
        1.0
    }
}

/// Moduli of a sampled integrand plus its off-grid evaluator.
struct Integrand<'a> {
    grid: Grid,
    values: Vec<f64>,
    eval: Box<dyn Fn(f64) -> f64 + 'a>,
}

fn add_half_annulus(
    profile: &mut AnnulusProfile,
    k: i64,
    h: f64,
    vals: impl Iterator<Item = f64> + Clone,
    count: usize,
) {
    let n = count - 1;
    match profile.q {
        Exponent::Finite(q) => {
            let (mut greg, mut trap) = (0.0, 0.0);
            for (i, v) in vals.enumerate() {
                let w = v.powf(q);
                greg += gregory(n, i) * w;
                trap += if i == 0 || i == n { 0.5 * w } else { w };
            }
            let err = (greg - trap).abs() * h;
            let e = profile.masses.entry(k).or_insert((0.0, 0.0));
            e.0 += greg.max(0.0) * h;
            e.1 += err;
        }
        Exponent::Infinite => {
            let top = vals.fold(0.0, f64::max);
            let e = profile.masses.entry(k).or_insert((0.0, 0.0));
            e.0 = e.0.max(top);
        }
    }
}

fn grid_herz(f: &Integrand<'_>, hp: &HerzParams, opts: &GridNormOptions) -> (NormValue, (i64, i64), (i64, i64), i64) {
    let grid = f.grid;
    let dx = grid.dx();
    let n = grid.size() as i64;
    let o = grid.origin_index() as i64;
    let k_lo = (opts.min_cells as f64 * dx).log2().ceil() as i64 + 1;
    let k_hi = grid.outer_annulus();
    let sub_lo = k_lo - opts.subgrid_depth as i64;
    let mut profile = AnnulusProfile::new(1, hp.q, false);

    for k in k_lo..=k_hi {
        let a = ((k - 1) as f64).exp2() / dx;
        let b = (k as f64).exp2() / dx;
        let (a, b) = (a as i64, b as i64);
        let count = (b - a + 1) as usize;
        let pos = (a..=b).map(|j| f.values[(o + j).rem_euclid(n) as usize]);
        add_half_annulus(&mut profile, k, dx, pos, count);
        let neg = (a..=b).map(|j| f.values[(o - j).rem_euclid(n) as usize]);
        add_half_annulus(&mut profile, k, dx, neg, count);
    }
    let pts = opts.subgrid_points;
    for k in sub_lo..k_lo {
        let lo = ((k - 1) as f64).exp2();
        let h = lo / pts as f64;
        let xs: Vec<f64> = (0..=pts).map(|i| lo + i as f64 * h).collect();
        let pos: Vec<f64> = xs.iter().map(|&x| (f.eval)(x)).collect();
        let neg: Vec<f64> = xs.iter().map(|&x| (f.eval)(-x)).collect();
        add_half_annulus(&mut profile, k, h, pos.iter().cloned(), pts + 1);
        add_half_annulus(&mut profile, k, h, neg.iter().cloned(), pts + 1);
    }
    let origin = f.values[o as usize];
    profile.tail = Some(OriginTail {
        k_split: sub_lo - 1,
        coeff: match hp.q {
            Exponent::Finite(q) => origin.powf(q),
            Exponent::Infinite => origin,
        },
    });
    (profile.norm(hp.alpha, hp.p), (k_lo, k_hi), (sub_lo, k_lo - 1), k_hi)
}

/// Evaluates `Σ_k c_k e^{iξ_k t}` by a phase recurrence over sorted frequencies.
fn eval_terms(terms: &[(i64, Complex64)], step: f64, t: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let Some(&(k0, _)) = terms.first() else {
        return acc;
    };
    let base = Complex64::from_polar(1.0, step * t);
    let mut phase = Complex64::from_polar(1.0, step * t * k0 as f64);
    let mut k = k0;
    for &(kk, c) in terms {
        if kk == k + 1 {
            phase *= base;
        } else if kk != k {
            phase = Complex64::from_polar(1.0, step * t * kk as f64);
        }
        k = kk;
        acc += c * phase;
    }
    acc
}

struct Block {
    level: u32,
    samples: Vec<Complex64>,
    terms: Vec<(i64, Complex64)>,
}

fn blocks_of(f: &SampledFunction, cut: f64) -> Vec<Block> {
    let grid = *f.grid();
    let dft = f.dft();
    let top = dft.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if top == 0.0 {
        return Vec::new();
    }
    let levels = ResolutionOfUnity::max_levels(&grid);
    let mut out = Vec::new();
    for j in 0..=levels {
        let spec: Vec<Complex64> = dft
            .iter()
            .enumerate()
            .map(|(k, z)| z * ResolutionOfUnity::multiplier(j, grid.frequency(k)))
            .collect();
        if spec.iter().all(|z| z.norm() <= cut * top) {
            continue;
        }
        let mut terms: Vec<(i64, Complex64)> = spec
            .iter()
            .enumerate()
            .filter(|(_, z)| z.norm() > cut * top)
            .map(|(k, z)| (grid.signed_index(k), z / grid.size() as f64))
            .collect();
        terms.sort_by_key(|t| t.0);
        let mut samples = spec;
        fft_inverse(&mut samples);
        out.push(Block {
            level: j,
            samples,
            terms,
        });
    }
    out
}

/// Herz-type `B`/`F` norm of a sampled function:
/// `‖(2^{js} ‖F^{-1}φ_j ∗ f‖_{K̇_q^{α,p}})_j‖_{ℓ^β}` or
/// `‖(Σ_j 2^{jsβ} |F^{-1}φ_j ∗ f|^β)^{1/β}‖_{K̇_q^{α,p}}`.
///
/// With `weight_gamma = Some(γ)` the space must be Lebesgue based (`α = 0`,
/// `p = q < ∞`) and is replaced by its power-weighted version, computed in the
/// equivalent Herz form `α = γ/p`.
pub fn function_space_norm(f: &SampledFunction, sp: &SpaceParams, weight_gamma: Option<f64>) -> Result<FunctionNorm> {
    function_space_norm_with(f, sp, weight_gamma, &GridNormOptions::default())
}

pub fn function_space_norm_with(
    f: &SampledFunction,
    sp: &SpaceParams,
    weight_gamma: Option<f64>,
    opts: &GridNormOptions,
) -> Result<FunctionNorm> {
    if sp.kind == SpaceKind::F && (sp.herz.p.is_infinite() || sp.herz.q.is_infinite()) {
        return Err(Error::Unsupported("F spaces need finite p and q".into()));
    }
    let herz = match weight_gamma {
        None => sp.herz,
        Some(gamma) => {
            let p = match (sp.herz.p, sp.herz.q) {
                (Exponent::Finite(p), Exponent::Finite(q)) if p == q && sp.herz.alpha == 0.0 => p,
                _ => {
                    return Err(Error::Unsupported(
                        "power weights need a Lebesgue base space (alpha = 0, p = q < inf)".into(),
                    ))
                }
            };
            if !(gamma > -1.0) {
                return Err(Error::InvalidParameter(format!(
                    "weight exponent must exceed -n, got {gamma}"
                )));
            }
            HerzParams::new(gamma / p, sp.herz.p, sp.herz.q)?
        }
    };
    let grid = *f.grid();
    let blocks = blocks_of(f, opts.spectral_cut);
    let step = std::f64::consts::PI / grid.half_width();
    let shift = grid.half_width();
    let levels: Vec<u32> = blocks.iter().map(|b| b.level).collect();

    let (norm, ga, ia, cut) = match sp.kind {
        SpaceKind::B => {
            let mut terms = Vec::with_capacity(blocks.len());
            let mut meta = None;
            for b in &blocks {
                let integrand = Integrand {
                    grid,
                    values: b.samples.iter().map(|z| z.norm()).collect(),
                    eval: Box::new(|x| eval_terms(&b.terms, step, x + shift).norm()),
                };
                let (nv, ga, ia, cut) = grid_herz(&integrand, &herz, opts);
                meta = Some((ga, ia, cut));
                terms.push(((b.level as f64 * sp.s).exp2(), nv));
            }
            let (ga, ia, cut) = meta.unwrap_or_else(|| {
                let probe = Integrand {
                    grid,
                    values: vec![0.0; grid.size()],
                    eval: Box::new(|_| 0.0),
                };
                let (_, ga, ia, cut) = grid_herz(&probe, &herz, opts);
                (ga, ia, cut)
            });
            (combine_levels(&terms, sp.beta), ga, ia, cut)
        }
        SpaceKind::F => {
            let weights: Vec<f64> = blocks.iter().map(|b| (b.level as f64 * sp.s).exp2()).collect();
            let beta = sp.beta;
            let aggregate = move |mods: &mut dyn Iterator<Item = (f64, f64)>| -> f64 {
                match beta {
                    Exponent::Finite(t) => mods.map(|(w, m)| (w * m).powf(t)).sum::<f64>().powf(1.0 / t),
                    Exponent::Infinite => mods.map(|(w, m)| w * m).fold(0.0, f64::max),
                }
            };
            let values: Vec<f64> = (0..grid.size())
                .map(|i| aggregate(&mut blocks.iter().zip(&weights).map(|(b, w)| (*w, b.samples[i].norm()))))
                .collect();
            let integrand = Integrand {
                grid,
                values,
                eval: Box::new(|x| {
                    aggregate(
                        &mut blocks
                            .iter()
                            .zip(&weights)
                            .map(|(b, w)| (*w, eval_terms(&b.terms, step, x + shift).norm())),
                    )
                }),
            };
            grid_herz(&integrand, &herz, opts)
        }
    };
    Ok(FunctionNorm {
        norm,
        herz,
        grid_annuli: ga,
        interpolated_annuli: ia,
        cut_above: cut,
        blocks: levels,
    })
}

/// `‖f‖_{K̇_q^{α,p}}` of a sampled function, with the same quadrature as the
/// block norms.
pub fn sampled_herz_norm(f: &SampledFunction, hp: &HerzParams, opts: &GridNormOptions) -> FunctionNorm {
    let grid = *f.grid();
    let dft = f.dft();
    let top = dft.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut terms: Vec<(i64, Complex64)> = dft
        .iter()
        .enumerate()
        .filter(|(_, z)| z.norm() > opts.spectral_cut * top)
        .map(|(k, z)| (grid.signed_index(k), z / grid.size() as f64))
        .collect();
    terms.sort_by_key(|t| t.0);
    let step = std::f64::consts::PI / grid.half_width();
    let shift = grid.half_width();
    let integrand = Integrand {
        grid,
        values: f.samples().iter().map(|z| z.norm()).collect(),
        eval: Box::new(|x| eval_terms(&terms, step, x + shift).norm()),
    };
    let (norm, ga, ia, cut) = grid_herz(&integrand, hp, opts);
    FunctionNorm {
        norm,
        herz: *hp,
        grid_annuli: ga,
        interpolated_annuli: ia,
        cut_above: cut,
        blocks: Vec::new(),
    }
}

impl ResolutionOfUnity {
    /// The Littlewood-Paley block `F^{-1}φ_j ∗ f`.
    pub fn apply(&self, f: &SampledFunction, j: u32) -> Result<SampledFunction> {
        if j > self.levels() {
            return Err(Error::Bandwidth {
                level: j,
                max: self.levels(),
            });
        }
        if f.grid() != self.grid() {
            return Err(Error::InvalidGrid("resolution built for another grid".into()));
        }
        let block = self.block(j);
        let mut data = f.dft();
        data.iter_mut().zip(block).for_each(|(z, m)| *z *= *m);
        fft_inverse(&mut data);
        SampledFunction::new(*f.grid(), data)
    }
}
