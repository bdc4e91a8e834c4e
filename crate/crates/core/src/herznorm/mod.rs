//! Homogeneous Herz quasi-norms and the `b`/`f` sequence quasi-norms built on them.
//!
//! On the line every norm is evaluated exactly: the integrand is piecewise
//! constant on dyadic intervals, each annulus mass is an exact dyadic
//! overlap, and the infinitely many annuli inside the constant region next
//! to the origin are summed as a geometric series. In two and three
//! dimensions annulus masses come from [`OverlapEstimator`] and the result
//! carries a propagated error bound.

mod cubes;
mod line;
mod profile;

use serde::Serialize;

use crate::dyadic::{
    refine_line, CoefficientField, CubeFunction, DyadicCube, LevelStack, OverlapEstimator, Partition1D,
    PiecewiseConstantFunction, Segment, StepFunction,
};
use crate::{Complex64, Error, Exponent, Result};

pub(crate) use profile::{AnnulusProfile, OriginTail};

/// Parameters `(α, p, q)` of `K̇_q^{α,p}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HerzParams {
    pub alpha: f64,
    pub p: Exponent,
    pub q: Exponent,
}

impl HerzParams {
    pub fn new(alpha: f64, p: Exponent, q: Exponent) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("alpha must be finite, got {alpha}")));
        }
        Ok(HerzParams { alpha, p, q })
    }

    /// `α > -n/q`: the condition under which functions nonzero at the origin have finite norm.
    pub fn is_valid(&self, n: usize) -> bool {
        self.alpha > -(n as f64) * self.q.recip()
    }

    /// `α + n/q`, the exponent of the origin tail.
    pub fn origin_exponent(&self, n: usize) -> f64 {
        self.alpha + n as f64 * self.q.recip()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SpaceKind {
    B,
    F,
}

impl std::fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SpaceKind::B => "B",
            SpaceKind::F => "F",
        })
    }
}

/// Herz-type space `K̇_q^{α,p} A_β^s` with `A ∈ {B, F}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpaceParams {
    pub herz: HerzParams,
    pub s: f64,
    pub beta: Exponent,
    pub kind: SpaceKind,
}

impl SpaceParams {
    pub fn new(herz: HerzParams, s: f64, beta: Exponent, kind: SpaceKind) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::InvalidParameter(format!("s must be finite, got {s}")));
        }
        Ok(SpaceParams { herz, s, beta, kind })
    }

    pub fn b(herz: HerzParams, s: f64, beta: Exponent) -> Result<Self> {
        Self::new(herz, s, beta, SpaceKind::B)
    }

    pub fn f(herz: HerzParams, s: f64, beta: Exponent) -> Result<Self> {
        Self::new(herz, s, beta, SpaceKind::F)
    }
}

/// A computed quasi-norm with its provenance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormValue {
    /// `+∞` exactly when `divergent`.
    pub value: f64,
    pub exact: bool,
    /// Zero whenever `exact`.
    pub error_bound: f64,
    /// Annuli summed term by term.
    pub explicit_terms: usize,
    /// All annuli `k ≤ tail_from` were summed in closed form.
    pub tail_from: Option<i64>,
    pub divergent: bool,
}

impl NormValue {
    pub fn zero() -> Self {
        NormValue {
            value: 0.0,
            exact: true,
            error_bound: 0.0,
            explicit_terms: 0,
            tail_from: None,
            divergent: false,
        }
    }

    pub fn divergent(tail_from: Option<i64>) -> Self {
        NormValue {
            value: f64::INFINITY,
            exact: true,
            error_bound: 0.0,
            explicit_terms: 0,
            tail_from,
            divergent: true,
        }
    }
}

/// How the annuli next to the origin are summed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TailMode {
    /// Closed-form geometric series from the first annulus inside the constant region.
    #[default]
    Analytic,
    /// Sum this many further annuli term by term before switching to the closed form.
    Explicit(u32),
}

#[derive(Clone, Copy, Debug, Default)]
pub struct NormOptions {
    pub tail: TailMode,
    pub estimator: OverlapEstimator,
}

pub fn herz_norm(f: &PiecewiseConstantFunction, hp: &HerzParams) -> Result<NormValue> {
    herz_norm_with(f, hp, &NormOptions::default())
}

pub fn herz_norm_with(f: &PiecewiseConstantFunction, hp: &HerzParams, opts: &NormOptions) -> Result<NormValue> {
    match f {
        PiecewiseConstantFunction::Line(step) => Ok(line::herz_norm_line(step, hp, opts.tail)),
        PiecewiseConstantFunction::Cubes(cf) if cf.dim() == 1 => {
            Ok(line::herz_norm_line(&cubes_to_line(cf)?, hp, opts.tail))
        }
        PiecewiseConstantFunction::Cubes(cf) => Ok(cube_function_norm(cf, hp, opts)),
    }
}

fn cubes_to_line(cf: &CubeFunction) -> Result<StepFunction> {
    let mut segs: Vec<Segment<Complex64>> = cf
        .cells()
        .iter()
        .map(|(c, v)| {
            let (start, end) = c.extent()[0];
            Segment { start, end, value: *v }
        })
        .collect();
    segs.sort_by_key(|a| a.start);
    Partition1D::new(segs)
}

fn cube_function_norm(cf: &CubeFunction, hp: &HerzParams, opts: &NormOptions) -> NormValue {
    let n = cf.dim();
    let mut orthants = vec![0.0; 1 << n];
    let mut vmax = 0;
    let cells: Vec<cubes::Cell<'_>> = cf
        .cells()
        .iter()
        .map(|(cube, v)| {
            vmax = vmax.max(cube.level());
            if let Some(o) = cubes::orthant(cube) {
                orthants[o] = v.norm();
            }
            cubes::Cell {
                cube,
                value: v.norm(),
                holes: Vec::new(),
            }
        })
        .collect();
    if cells.is_empty() {
        return NormValue::zero();
    }
    cubes::cube_profile(n, hp.q, &cells, &orthants, vmax, opts.tail, &opts.estimator).norm(hp.alpha, hp.p)
}

/// `Σ_m λ_{v,m} χ_{v,m}` for one level of a one-dimensional field.
pub fn level_function(field: &CoefficientField, v: u32) -> Result<StepFunction> {
    if field.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: field.dim(),
        });
    }
    Partition1D::new(
        field
            .level_entries(v)
            .map(|(c, value)| {
                let (start, end) = c.extent()[0];
                Segment {
                    start,
                    end,
                    value: *value,
                }
            })
            .collect(),
    )
}

/// Herz norm of a single level `Σ_m λ_{v,m} χ_{v,m}` (any dimension).
pub fn level_herz_norm(field: &CoefficientField, v: u32, hp: &HerzParams, opts: &NormOptions) -> Result<NormValue> {
    if field.dim() == 1 {
        return Ok(line::herz_norm_line(&level_function(field, v)?, hp, opts.tail));
    }
    let cells: Vec<(DyadicCube, Complex64)> = field.level_entries(v).map(|(c, z)| (c.clone(), *z)).collect();
    Ok(cube_function_norm(&CubeFunction::new(field.dim(), cells)?, hp, opts))
}

/// Combines per-level amplitudes `2^{vs} H_v` in `ℓ^β`.
pub(crate) fn combine_levels(terms: &[(f64, NormValue)], beta: Exponent) -> NormValue {
    if let Some((_, d)) = terms.iter().find(|t| t.1.divergent) {
        return NormValue::divergent(d.tail_from);
    }
    let live: Vec<(f64, f64)> = terms
        .iter()
        .filter(|t| t.1.value > 0.0)
        .map(|(scale, nv)| (scale.log2() + nv.value.log2(), nv.error_bound / nv.value))
        .collect();
    let exact = terms.iter().all(|t| t.1.exact);
    let explicit_terms = terms.iter().map(|t| t.1.explicit_terms).sum();
    let tail_from = terms.iter().filter_map(|t| t.1.tail_from).min();
    if live.is_empty() {
        return NormValue::zero();
    }
    let (value, rel) = match beta {
        Exponent::Finite(b) => {
            let top = live.iter().map(|t| b * t.0).fold(f64::NEG_INFINITY, f64::max);
            let w: Vec<f64> = live.iter().map(|t| (b * t.0 - top).exp2()).collect();
            let total: f64 = w.iter().sum();
            let rel = live.iter().zip(&w).map(|(t, w)| t.1 * w / total).sum();
            (((top + total.log2()) / b).exp2(), rel)
        }
        Exponent::Infinite => {
            let best = live
                .iter()
                .cloned()
                .fold((f64::NEG_INFINITY, 0.0), |a, t| if t.0 > a.0 { t } else { a });
            (best.0.exp2(), best.1)
        }
    };
    NormValue {
        value,
        exact,
        error_bound: if exact { 0.0 } else { value * rel },
        explicit_terms,
        tail_from,
        divergent: false,
    }
}

/// `‖λ‖_{K̇_q^{α,p} b_β^s} = (Σ_v 2^{vsβ} ‖Σ_m λ_{v,m} χ_{v,m}‖^β_{K̇_q^{α,p}})^{1/β}`.
pub fn seq_b_norm(field: &CoefficientField, sp: &SpaceParams) -> Result<NormValue> {
    seq_b_norm_with(field, sp, &NormOptions::default())
}

pub fn seq_b_norm_with(field: &CoefficientField, sp: &SpaceParams, opts: &NormOptions) -> Result<NormValue> {
    let mut terms = Vec::new();
    for v in field.levels() {
        let h = level_herz_norm(field, v, &sp.herz, opts)?;
        terms.push(((v as f64 * sp.s).exp2(), h));
    }
    Ok(combine_levels(&terms, sp.beta))
}

/// `(Σ_v 2^{vsθ}|λ_v|^θ)^{1/θ}`, or `max_v 2^{vs}|λ_v|` when `θ = ∞`.
pub fn level_aggregate(stack: &[(u32, Complex64)], s: f64, theta: Exponent) -> f64 {
    match theta {
        Exponent::Finite(t) => stack
            .iter()
            .map(|(v, z)| (*v as f64 * s * t).exp2() * z.norm().powf(t))
            .sum::<f64>()
            .powf(1.0 / t),
        Exponent::Infinite => stack
            .iter()
            .map(|(v, z)| (*v as f64 * s).exp2() * z.norm())
            .fold(0.0, f64::max),
    }
}

/// The aggregate `(Σ_v Σ_m 2^{vsθ}|λ_{v,m}|^θ χ_{v,m})^{1/θ}` as a step function.
pub fn f_aggregate(field: &CoefficientField, s: f64, theta: Exponent) -> Result<StepFunction> {
    let refined: Partition1D<LevelStack> = refine_line(field)?;
    Ok(refined.map(|stack| Complex64::new(level_aggregate(stack, s, theta), 0.0)))
}

/// `‖(Σ_v Σ_m 2^{vsθ}|λ_{v,m}|^θ χ_{v,m})^{1/θ}‖_{K̇_q^{α,p}}` with the
/// pointwise supremum when `θ = ∞`.
pub fn seq_f_norm(field: &CoefficientField, sp: &SpaceParams, theta: Exponent) -> Result<NormValue> {
    seq_f_norm_with(field, sp, theta, &NormOptions::default())
}

pub fn seq_f_norm_with(
    field: &CoefficientField,
    sp: &SpaceParams,
    theta: Exponent,
    opts: &NormOptions,
) -> Result<NormValue> {
    if field.dim() == 1 {
        let agg = f_aggregate(field, sp.s, theta)?;
        return Ok(line::herz_norm_line(&agg, &sp.herz, opts.tail));
    }
    Ok(f_norm_cubes(field, sp, theta, opts))
}

fn f_norm_cubes(field: &CoefficientField, sp: &SpaceParams, theta: Exponent, opts: &NormOptions) -> NormValue {
    let n = field.dim();
    let entries = field.entries();
    if entries.is_empty() {
        return NormValue::zero();
    }
    let parents = cubes::nearest_ancestors(entries);
    let mut cells: Vec<cubes::Cell<'_>> = Vec::with_capacity(entries.len());
    let mut slot = std::collections::BTreeMap::new();
    for cube in entries.keys() {
        let mut stack: Vec<(u32, Complex64)> = vec![(cube.level(), entries[cube])];
        let mut up = parents[cube];
        while let Some(p) = up {
            stack.push((p.level(), entries[p]));
            up = parents[p];
        }
        slot.insert(cube, cells.len());
        cells.push(cubes::Cell {
            cube,
            value: level_aggregate(&stack, sp.s, theta),
            holes: Vec::new(),
        });
    }
    for (cube, parent) in &parents {
        if let Some(p) = parent {
            cells[slot[p]].holes.push(cube);
        }
    }
    // Near the origin every origin-touching cube of an orthant is active.
    let mut orthant_stacks: Vec<Vec<(u32, Complex64)>> = vec![Vec::new(); 1 << n];
    for (cube, z) in entries.iter() {
        if let Some(o) = cubes::orthant(cube) {
            orthant_stacks[o].push((cube.level(), *z));
        }
    }
    let orthants: Vec<f64> = orthant_stacks
        .iter()
        .map(|st| level_aggregate(st, sp.s, theta))
        .collect();
    let vmax = field.vmax().unwrap_or(0);
    cubes::cube_profile(n, sp.herz.q, &cells, &orthants, vmax, opts.tail, &opts.estimator)
        .norm(sp.herz.alpha, sp.herz.p)
}

/// Dispatches on `sp.kind`; for `F` the fine index is `sp.beta`.
pub fn seq_norm(field: &CoefficientField, sp: &SpaceParams) -> Result<NormValue> {
    seq_norm_with(field, sp, &NormOptions::default())
}

pub fn seq_norm_with(field: &CoefficientField, sp: &SpaceParams, opts: &NormOptions) -> Result<NormValue> {
    match sp.kind {
        SpaceKind::B => seq_b_norm_with(field, sp, opts),
        SpaceKind::F => seq_f_norm_with(field, sp, sp.beta, opts),
    }
}

#[cfg(test)]
mod tests;
