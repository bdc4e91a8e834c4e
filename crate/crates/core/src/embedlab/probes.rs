use serde::Serialize;

use super::{EmbeddingCase, EmbeddingKind};
use crate::dyadic::{CoefficientField, DyadicCube};
use crate::herznorm::{seq_norm, HerzParams, SpaceKind, SpaceParams};
use crate::phitransform::{
    eta_family, function_space_norm_with, omega_family, sampled_herz_norm, Grid, GridNormOptions, SampledFunction,
};
use crate::{Complex64, Error, Exponent, Result};

/// `λ^N`: the value `2^{-(s₁-1/s-α₁)v}` at `(v, 1)` for `v = 1..=N`.
///
/// The cube `Q_{v,1} = [2^{-v}, 2^{1-v})` is exactly the annulus `C_{1-v}`, so
/// every level contributes one isolated annulus.
pub fn jawerth_sharpness_family(levels: u32, case: &EmbeddingCase) -> Result<CoefficientField> {
    if case.n != 1 {
        return Err(Error::UnsupportedDimension(case.n));
    }
    if levels == 0 {
        return Err(Error::InvalidParameter("the family needs N >= 1".into()));
    }
    let rate = case.s1 - case.params.s.recip() - case.params.alpha1;
    CoefficientField::from_line_entries((1..=levels).map(|v| (v, 1, Complex64::new((-rate * v as f64).exp2(), 0.0))))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SharpnessPoint {
    pub levels: u32,
    /// `‖λ^N‖_source^a` with `a` the outer exponent of the source.
    pub source_power: f64,
    /// `‖λ^N‖_target^σ` with the target fine index replaced by `σ`.
    pub target_power: f64,
    /// `‖λ^N‖_target / ‖λ^N‖_source`.
    pub ratio: f64,
    /// Set when the family is reused outside the Jawerth case it was built for.
    pub extrapolated: bool,
}

fn power(x: f64, e: Exponent) -> f64 {
    match e {
        Exponent::Finite(a) => x.powf(a),
        Exponent::Infinite => x,
    }
}

/// Norms of `λ^N` for each `N` in `levels`, with the target fine index set to `sigma`.
pub fn sharpness_norms(case: &EmbeddingCase, levels: &[u32], sigma: Exponent) -> Result<Vec<SharpnessPoint>> {
    let target = SpaceParams {
        beta: sigma,
        ..case.target
    };
    levels
        .iter()
        .map(|&n| {
            let field = jawerth_sharpness_family(n, case)?;
            let src = seq_norm(&field, &case.source)?;
            let tgt = seq_norm(&field, &target)?;
            if src.divergent || tgt.divergent {
                return Err(Error::Divergent(format!("sharpness norm at N = {n}")));
            }
            Ok(SharpnessPoint {
                levels: n,
                source_power: power(src.value, case.source.herz.p),
                target_power: power(tgt.value, sigma),
                ratio: tgt.value / src.value,
                extrapolated: case.kind != EmbeddingKind::Jawerth,
            })
        })
        .collect()
}

/// `case` with the source smoothness lowered by `shift`, which moves the
/// balance gap to `+shift`.
pub fn violate_balance(case: &EmbeddingCase, shift: f64) -> EmbeddingCase {
    let mut out = *case;
    out.s2 -= shift;
    out.source.s -= shift;
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WitnessPoint {
    pub level: u32,
    pub source: f64,
    pub target: f64,
    pub ratio: f64,
}

/// Ratios on the single-entry fields `{(v, 1) -> 1}`; off the balance line they
/// grow like `2^{gap·v}`.
pub fn single_level_witness(case: &EmbeddingCase, levels: &[u32]) -> Result<Vec<WitnessPoint>> {
    if case.n != 1 {
        return Err(Error::UnsupportedDimension(case.n));
    }
    levels
        .iter()
        .map(|&v| {
            let mut field = CoefficientField::new(1)?;
            field.insert(DyadicCube::line(v, 1)?, Complex64::new(1.0, 0.0))?;
            let source = seq_norm(&field, &case.source)?.value;
            let target = seq_norm(&field, &case.target)?.value;
            Ok(WitnessPoint {
                level: v,
                source,
                target,
                ratio: target / source,
            })
        })
        .collect()
}

/// Fine scale dilates `η` (`N ≥ 1`), coarse scale dilates `ω` (`N ≤ 0`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ProbeScale {
    Fine,
    Coarse,
}

impl ProbeScale {
    /// Grids resolving `N ∈ 1..=5` and `N ∈ -5..=0` respectively.
    pub fn default_grid(self) -> Grid {
        match self {
            ProbeScale::Fine => Grid::new(512.0, 1 << 16),
            ProbeScale::Coarse => Grid::new(4096.0, 1 << 16),
        }
        .expect("valid default grid")
    }

    fn family(self, grid: &Grid, n: i32) -> SampledFunction {
        match self {
            ProbeScale::Fine => eta_family(grid, n),
            ProbeScale::Coarse => omega_family(grid, n),
        }
    }

    /// Rejects dilations whose spectrum or spatial extent the grid cannot hold.
    fn check(self, grid: &Grid, n: i32) -> Result<()> {
        let width = (n as f64).exp2();
        let bad = match self {
            ProbeScale::Fine => n < 0 || width > grid.nyquist() / 4.0,
            ProbeScale::Coarse => {
                n > 0 || 64.0 / width > grid.half_width() || width < 32.0 * std::f64::consts::PI / grid.half_width()
            }
        };
        if bad {
            return Err(Error::Bandwidth {
                level: n.unsigned_abs(),
                max: grid.max_level(),
            });
        }
        Ok(())
    }
}

/// Norm measurements along a dilation family.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DilationReport {
    pub scale: ProbeScale,
    pub dilations: Vec<i32>,
    pub source: Vec<f64>,
    pub target: Vec<f64>,
    pub ratios: Vec<f64>,
    pub fitted_source: f64,
    pub fitted_target: f64,
    pub predicted_source: f64,
    pub predicted_target: f64,
    /// `s₁-n/s-α₁ ≤ s₂-n/q-α₂`.
    pub balance_holds: bool,
    /// `α₂+n/q ≥ α₁+n/s`.
    pub alpha_holds: bool,
}

impl DilationReport {
    /// Largest ratio over the ratio at the dilation closest to zero.
    pub fn ratio_growth(&self) -> f64 {
        let i = (0..self.dilations.len())
            .min_by_key(|&i| self.dilations[i].abs())
            .unwrap_or(0);
        self.ratios.iter().cloned().fold(0.0, f64::max) / self.ratios[i]
    }

    /// `max / min` of the ratios.
    pub fn ratio_spread(&self) -> f64 {
        let max = self.ratios.iter().cloned().fold(0.0, f64::max);
        let min = self.ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        max / min
    }
}

/// Least-squares slope of `log₂ y` against `x`.
fn log2_slope(xs: &[i32], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().map(|&x| x as f64).sum::<f64>() / n;
    let ly: Vec<f64> = ys.iter().map(|y| y.log2()).collect();
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(&ly).map(|(&x, y)| (x as f64 - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|&x| (x as f64 - mx).powi(2)).sum();
    num / den
}

fn function_norm(f: &SampledFunction, sp: &SpaceParams, gamma: Option<f64>) -> Result<f64> {
    let nv = function_space_norm_with(f, sp, gamma, &GridNormOptions::default())?.norm;
    if nv.divergent {
        return Err(Error::Divergent("dilation probe norm".into()));
    }
    Ok(nv.value)
}

fn probe(
    source: (&SpaceParams, Option<f64>),
    target: (&SpaceParams, Option<f64>),
    scale: ProbeScale,
    dilations: &[i32],
    grid: &Grid,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if dilations.len() < 2 {
        return Err(Error::InvalidParameter("a probe needs at least two dilations".into()));
    }
    let mut src = Vec::with_capacity(dilations.len());
    let mut tgt = Vec::with_capacity(dilations.len());
    for &n in dilations {
        scale.check(grid, n)?;
        let f = scale.family(grid, n);
        src.push(function_norm(&f, source.0, source.1)?);
        tgt.push(function_norm(&f, target.0, target.1)?);
    }
    Ok((src, tgt))
}

/// Measures source and target norms of `η(2^N ·)` or `ω(2^N ·)` and fits the
/// scaling exponents `s-α-n/q` (fine) or `-(α+n/q)` (coarse).
pub fn dilation_probe(
    case: &EmbeddingCase,
    scale: ProbeScale,
    dilations: &[i32],
    grid: &Grid,
) -> Result<DilationReport> {
    if case.n != 1 {
        return Err(Error::UnsupportedDimension(case.n));
    }
    let (src, tgt) = probe((&case.source, None), (&case.target, None), scale, dilations, grid)?;
    let exponent = |sp: &SpaceParams| match scale {
        ProbeScale::Fine => sp.s - sp.herz.alpha - sp.herz.q.recip(),
        ProbeScale::Coarse => -(sp.herz.alpha + sp.herz.q.recip()),
    };
    let fine = |sp: &SpaceParams| sp.s - sp.herz.alpha - sp.herz.q.recip();
    let coarse = |sp: &SpaceParams| sp.herz.alpha + sp.herz.q.recip();
    Ok(DilationReport {
        scale,
        dilations: dilations.to_vec(),
        ratios: tgt.iter().zip(&src).map(|(t, s)| t / s).collect(),
        fitted_source: log2_slope(dilations, &src),
        fitted_target: log2_slope(dilations, &tgt),
        predicted_source: exponent(&case.source),
        predicted_target: exponent(&case.target),
        balance_holds: fine(&case.target) <= fine(&case.source) + 1e-12,
        alpha_holds: coarse(&case.source) + 1e-12 >= coarse(&case.target),
        source: src,
        target: tgt,
    })
}

/// Power-weighted embedding `F_{q,β}^{s₂}(w_{γ₂}) ↪ B_{s,q}^{s₁}(w_{γ₁})` and its
/// companion `B_{q,s}^{s₂}(w_{γ₂}) ↪ F_{s,β}^{s₁}(w_{γ₁})` on the line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeightedCorollary {
    pub q: f64,
    pub s: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub s2: f64,
    pub beta: Exponent,
}

impl WeightedCorollary {
    /// Checks `0 < q < s < ∞`, `γ₁, γ₂ > -1`, `γ₂/q ≥ γ₁/s`.
    pub fn validate(&self) -> Result<()> {
        let reject = |m: &str| Err(Error::Rejected(m.into()));
        if !(self.q > 0.0 && self.q < self.s && self.s.is_finite()) {
            return reject("weighted corollary needs 0 < q < s < inf");
        }
        if !(self.gamma1 > -1.0 && self.gamma2 > -1.0) {
            return reject("weight exponents must exceed -n");
        }
        if !(self.gamma2 / self.q >= self.gamma1 / self.s - 1e-12) {
            return reject("weighted corollary needs gamma2/q >= gamma1/s");
        }
        if !self.s2.is_finite() {
            return Err(Error::InvalidParameter("s2 must be finite".into()));
        }
        Ok(())
    }

    /// `s₁` from `s₁ - (1+γ₁)/s = s₂ - (1+γ₂)/q`.
    pub fn s1(&self) -> f64 {
        self.s2 - (1.0 + self.gamma2) / self.q + (1.0 + self.gamma1) / self.s
    }

    fn lebesgue(p: f64) -> Result<HerzParams> {
        HerzParams::new(0.0, Exponent::from(p), Exponent::from(p))
    }

    /// Unweighted source and target of the F→B direction.
    pub fn jawerth_spaces(&self) -> Result<(SpaceParams, SpaceParams)> {
        Ok((
            SpaceParams::new(Self::lebesgue(self.q)?, self.s2, self.beta, SpaceKind::F)?,
            SpaceParams::new(Self::lebesgue(self.s)?, self.s1(), Exponent::from(self.q), SpaceKind::B)?,
        ))
    }

    /// Unweighted source and target of the B→F direction.
    pub fn franke_spaces(&self) -> Result<(SpaceParams, SpaceParams)> {
        Ok((
            SpaceParams::new(Self::lebesgue(self.q)?, self.s2, Exponent::from(self.s), SpaceKind::B)?,
            SpaceParams::new(Self::lebesgue(self.s)?, self.s1(), self.beta, SpaceKind::F)?,
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightedReport {
    pub corollary: WeightedCorollary,
    pub s1: f64,
    pub fine: Vec<i32>,
    pub coarse: Vec<i32>,
    /// F→B ratios on the fine and coarse families.
    pub jawerth_fine: Vec<f64>,
    pub jawerth_coarse: Vec<f64>,
    /// B→F ratios on the same families.
    pub franke_fine: Vec<f64>,
    pub franke_coarse: Vec<f64>,
}

fn growth(ratios: &[f64], anchor: usize) -> f64 {
    ratios.iter().cloned().fold(0.0, f64::max) / ratios[anchor]
}

impl WeightedReport {
    /// Largest F→B ratio relative to the ratio at the dilation closest to zero,
    /// over both families.
    pub fn jawerth_growth(&self) -> f64 {
        growth(&self.jawerth_fine, 0).max(growth(&self.jawerth_coarse, self.coarse.len() - 1))
    }

    pub fn franke_growth(&self) -> f64 {
        growth(&self.franke_fine, 0).max(growth(&self.franke_coarse, self.coarse.len() - 1))
    }
}

/// Dilation ratios for both weighted embeddings, computed in Herz form
/// `‖f‖_{A_{p,β}^s(w_γ)} ≈ ‖f‖_{K̇_p^{γ/p,p} A_β^s}`.
pub fn weighted_corollary_probe(cor: &WeightedCorollary, fine: &[i32], coarse: &[i32]) -> Result<WeightedReport> {
    cor.validate()?;
    if fine.is_empty() || coarse.is_empty() {
        return Err(Error::InvalidParameter("both dilation ranges must be non-empty".into()));
    }
    let mut fine = fine.to_vec();
    fine.sort_unstable();
    let mut coarse = coarse.to_vec();
    coarse.sort_unstable();
    let run = |(src, tgt): (SpaceParams, SpaceParams), scale: ProbeScale, ns: &[i32]| -> Result<Vec<f64>> {
        let grid = scale.default_grid();
        let ns2: Vec<i32> = if ns.len() == 1 { vec![ns[0], ns[0]] } else { ns.to_vec() };
        let (s, t) = probe((&src, Some(cor.gamma2)), (&tgt, Some(cor.gamma1)), scale, &ns2, &grid)?;
        Ok(t.iter().zip(&s).take(ns.len()).map(|(t, s)| t / s).collect())
    };
    Ok(WeightedReport {
        corollary: *cor,
        s1: cor.s1(),
        jawerth_fine: run(cor.jawerth_spaces()?, ProbeScale::Fine, &fine)?,
        jawerth_coarse: run(cor.jawerth_spaces()?, ProbeScale::Coarse, &coarse)?,
        franke_fine: run(cor.franke_spaces()?, ProbeScale::Fine, &fine)?,
        franke_coarse: run(cor.franke_spaces()?, ProbeScale::Coarse, &coarse)?,
        fine,
        coarse,
    })
}

/// Ratios `‖f‖_{K̇_q^{α,p} F_2^0} / ‖f‖_{K̇_q^{α,p}}`; a diagnostic only, since
/// the equivalence constants are not known here.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct F2Probe {
    pub herz: HerzParams,
    pub ratios: Vec<f64>,
    pub min: f64,
    pub max: f64,
}

pub fn f2_identity_probe(herz: &HerzParams, functions: &[SampledFunction]) -> Result<F2Probe> {
    let sp = SpaceParams::new(*herz, 0.0, Exponent::from(2.0), SpaceKind::F)?;
    let opts = GridNormOptions::default();
    let ratios = functions
        .iter()
        .map(|f| {
            let a = function_space_norm_with(f, &sp, None, &opts)?.norm.value;
            let b = sampled_herz_norm(f, herz, &opts).norm.value;
            Ok(a / b)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(F2Probe {
        herz: *herz,
        min: ratios.iter().cloned().fold(f64::INFINITY, f64::min),
        max: ratios.iter().cloned().fold(0.0, f64::max),
        ratios,
    })
}
