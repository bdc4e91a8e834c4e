use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::EmbeddingCase;
use crate::dyadic::{CoefficientField, DyadicCube};
use crate::herznorm::seq_norm;
use crate::{Complex64, Error, Result};

/// Random sparse coefficient fields on the line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnsembleSpec {
    pub members: usize,
    /// Finest level; levels are drawn uniformly from `0..=vmax`.
    pub vmax: u32,
    /// Supports are placed in annuli `C_k` with `|k| ≤ kmax`. Cubes at level `v`
    /// can touch the origin only if `kmax ≥ v - 1`.
    pub kmax: i32,
    /// Each member has between 1 and `sparsity` nonzero entries.
    pub sparsity: usize,
    /// Moduli are `2^u` with `u` uniform in this range.
    pub log2_magnitude: (f64, f64),
    pub seed: u64,
}

impl Default for EnsembleSpec {
    fn default() -> Self {
        EnsembleSpec {
            members: 200,
            vmax: 10,
            kmax: 20,
            sparsity: 3,
            log2_magnitude: (-8.0, 8.0),
            seed: 0,
        }
    }
}

impl EnsembleSpec {
    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.log2_magnitude;
        if self.members == 0 || self.sparsity == 0 {
            return Err(Error::InvalidParameter("ensembles need members and entries".into()));
        }
        if self.kmax < 0 || self.kmax > 60 || self.vmax > 60 {
            return Err(Error::InvalidParameter("vmax and kmax must lie in 0..=60".into()));
        }
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::InvalidParameter(
                "magnitude range must be finite and ordered".into(),
            ));
        }
        Ok(())
    }
}

/// Member `index` of the ensemble; depends only on `(seed, index)` and `spec`.
pub fn generate_member(spec: &EnsembleSpec, index: usize) -> Result<CoefficientField> {
    // the level is drawn from a uniform variate so that runs at vmax and
    // vmax + 4 share every other draw
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(index as u64);
    let count = rng.gen_range(1..=spec.sparsity);
    let mut field = CoefficientField::new(1)?;
    let (lo, hi) = spec.log2_magnitude;
    for _ in 0..count {
        let v = ((rng.gen::<f64>() * (spec.vmax + 1) as f64) as u32).min(spec.vmax);
        let k = rng.gen_range(-spec.kmax..=spec.kmax);
        let x = ((k - 1) as f64).exp2() * (1.0 + rng.gen::<f64>());
        let x = if rng.gen::<bool>() { x } else { -x };
        let m = (x * (v as f64).exp2()).floor() as i64;
        let modulus = if lo == hi { lo } else { rng.gen_range(lo..hi) }.exp2();
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        field.accumulate(DyadicCube::line(v, m)?, Complex64::from_polar(modulus, phase))?;
    }
    Ok(field)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatioSample {
    pub member: usize,
    pub source: f64,
    pub target: f64,
    /// `target / source`; infinite when only the target diverges.
    pub ratio: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Quantiles {
    pub p05: f64,
    pub p25: f64,
    pub p50: f64,
    pub p75: f64,
    pub p95: f64,
}

impl Quantiles {
    /// Linear interpolation between order statistics of a sorted slice.
    fn of_sorted(xs: &[f64]) -> Quantiles {
        let at = |t: f64| -> f64 {
            if xs.is_empty() {
                return f64::NAN;
            }
            let pos = t * (xs.len() - 1) as f64;
            let (i, frac) = (pos.floor() as usize, pos.fract());
            if i + 1 < xs.len() {
                xs[i] + frac * (xs[i + 1] - xs[i])
            } else {
                xs[i]
            }
        };
        Quantiles {
            p05: at(0.05),
            p25: at(0.25),
            p50: at(0.5),
            p75: at(0.75),
            p95: at(0.95),
        }
    }
}

/// Ratio statistics of one ensemble.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnsembleStats {
    pub vmax: u32,
    pub samples: Vec<RatioSample>,
    pub max: f64,
    pub quantiles: Quantiles,
    /// Members whose source norm vanishes or diverges.
    pub excluded: usize,
}

/// Empirical embedding constant at `vmax` and at `vmax + 4` with the same seed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioReport {
    pub case: EmbeddingCase,
    pub spec: EnsembleSpec,
    pub base: EnsembleStats,
    pub extended: EnsembleStats,
    /// `extended.max / base.max`.
    pub growth: f64,
}

/// `(source, target)` norms of one field, or `None` when the source norm
/// vanishes or diverges. A divergent target alone gives an infinite target.
pub fn field_ratio(case: &EmbeddingCase, field: &CoefficientField) -> Result<Option<(f64, f64)>> {
    let source = seq_norm(field, &case.source)?;
    if source.divergent || source.value == 0.0 {
        return Ok(None);
    }
    let target = seq_norm(field, &case.target)?;
    Ok(Some((
        source.value,
        if target.divergent { f64::INFINITY } else { target.value },
    )))
}

fn run(case: &EmbeddingCase, spec: &EnsembleSpec) -> Result<EnsembleStats> {
    let outcomes: Vec<Result<Option<RatioSample>>> = (0..spec.members)
        .into_par_iter()
        .map(|i| {
            let field = generate_member(spec, i)?;
            Ok(field_ratio(case, &field)?.map(|(source, target)| RatioSample {
                member: i,
                source,
                target,
                ratio: target / source,
            }))
        })
        .collect();
    let mut samples = Vec::with_capacity(spec.members);
    let mut excluded = 0;
    for o in outcomes {
        match o? {
            Some(s) => samples.push(s),
            None => excluded += 1,
        }
    }
    let mut sorted: Vec<f64> = samples.iter().map(|s| s.ratio).collect();
    sorted.sort_by(f64::total_cmp);
    Ok(EnsembleStats {
        vmax: spec.vmax,
        max: sorted.last().copied().unwrap_or(f64::NAN),
        quantiles: Quantiles::of_sorted(&sorted),
        samples,
        excluded,
    })
}

/// Estimates `sup ‖λ‖_target / ‖λ‖_source` over a random ensemble.
///
/// Members are generated from per-index streams and evaluated in parallel, so
/// the report is independent of the thread count.
pub fn estimate_embedding_constant(case: &EmbeddingCase, spec: &EnsembleSpec) -> Result<RatioReport> {
    spec.validate()?;
    if case.n != 1 {
        return Err(Error::Unsupported("ensembles are generated on the line".into()));
    }
    let base = run(case, spec)?;
    let ext_spec = EnsembleSpec {
        vmax: spec.vmax + 4,
        ..*spec
    };
    let extended = run(case, &ext_spec)?;
    Ok(RatioReport {
        case: *case,
        spec: *spec,
        growth: extended.max / base.max,
        base,
        extended,
    })
}
