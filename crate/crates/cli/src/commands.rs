use herzlab::dyadic::{CoefficientField, DyadicCube};
use herzlab::embedlab::{
    classify_embedding_case, dilation_probe, estimate_embedding_constant, sharpness_norms, EmbeddingCase, EnsembleStats,
};
use herzlab::herznorm::seq_norm;
use herzlab::phitransform::{analyze, random_band_limited, synthesize, Grid, WindowFamily};
use herzlab::{Complex64, Error};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{CubeIndex, RunConfig};
use crate::{CliError, Command};

/// Seed used when a deterministic command is given none.
const NO_SEED: u64 = 0;

/// Ratio growth accepted as truncation stable.
pub const STABILITY_THRESHOLD: f64 = 1.10;

/// Rows of the per-command CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub schema: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

/// Everything a command produces.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: Command,
    pub seed: Option<u64>,
    /// Derived parameters (balance-line smoothness, branch, θ).
    pub resolved: Value,
    pub results: Value,
    pub table: Table,
}

/// Shortest representation that reads back to the same float.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

fn case_json(case: &EmbeddingCase) -> Value {
    json!({
        "kind": case.kind,
        "branch": case.branch,
        "theta": case.theta,
        "s1": case.s1,
        "s2": case.s2,
        "n": case.n,
        "source": case.source,
        "target": case.target,
    })
}

fn classify(config: &RunConfig) -> Result<EmbeddingCase, CliError> {
    let (kind, params) = config.section("embedding", &config.embedding)?.resolve()?;
    Ok(classify_embedding_case(kind, &params)?)
}

/// Runs `config`; `seed` overrides the configured seed.
pub fn execute(config: &RunConfig, seed: Option<u64>) -> Result<Report, CliError> {
    let seed = seed.or(config.seed);
    if config.command.is_stochastic() && seed.is_none() {
        return Err(CliError::Config(format!(
            "command `{}` is stochastic and needs a seed",
            config.command.name()
        )));
    }
    match config.command {
        Command::Norm => norm(config),
        Command::Verify => verify(config, seed.unwrap_or(NO_SEED)),
        Command::Sharpness => sharpness(config),
        Command::Dilate => dilate(config),
        Command::Roundtrip => roundtrip(config, seed.unwrap_or(NO_SEED)),
    }
    .map(|mut r| {
        r.seed = seed;
        r
    })
}

fn norm(config: &RunConfig) -> Result<Report, CliError> {
    let sp = config.section("space", &config.space)?.resolve()?;
    let section = config.section("field", &config.field)?;
    let mut field = CoefficientField::new(section.n)?;
    for e in &section.entries {
        let cube = match &e.m {
            CubeIndex::Line(m) => DyadicCube::new(e.v as i64, vec![*m; 1])?,
            CubeIndex::Box(ms) => DyadicCube::new(e.v as i64, ms.clone())?,
        };
        field.accumulate(cube, Complex64::new(e.re, e.im))?;
    }
    let nv = seq_norm(&field, &sp)?;
    if nv.divergent {
        return Err(Error::Divergent(format!(
            "origin tail of the {} norm diverges (tail from annulus {:?})",
            sp.kind, nv.tail_from
        ))
        .into());
    }
    let row = vec![
        sp.kind.to_string(),
        num(sp.herz.alpha),
        sp.herz.p.to_string(),
        sp.herz.q.to_string(),
        num(sp.s),
        sp.beta.to_string(),
        num(nv.value),
        nv.exact.to_string(),
        num(nv.error_bound),
    ];
    Ok(Report {
        command: Command::Norm,
        seed: None,
        resolved: json!({ "space": sp, "entries": field.len() }),
        results: json!(nv),
        table: Table {
            schema: "herzlab-norm/1",
            columns: vec!["kind", "alpha", "p", "q", "s", "beta", "value", "exact", "error_bound"],
            rows: vec![row],
        },
    })
}

fn stats_json(s: &EnsembleStats) -> Value {
    json!({
        "vmax": s.vmax,
        "max": s.max,
        "quantiles": s.quantiles,
        "samples": s.samples.len(),
        "excluded": s.excluded,
    })
}

fn verify(config: &RunConfig, seed: u64) -> Result<Report, CliError> {
    let case = classify(config)?;
    let spec = config.ensemble.clone().unwrap_or_default().resolve(seed);
    let report = estimate_embedding_constant(&case, &spec)?;
    if report.base.samples.is_empty() || report.extended.samples.is_empty() {
        return Err(Error::Divergent("every ensemble member has a vanishing or divergent source norm".into()).into());
    }
    let rows = [&report.base, &report.extended]
        .into_iter()
        .flat_map(|st| {
            st.samples.iter().map(move |s| {
                vec![
                    st.vmax.to_string(),
                    s.member.to_string(),
                    num(s.source),
                    num(s.target),
                    num(s.ratio),
                ]
            })
        })
        .collect();
    Ok(Report {
        command: Command::Verify,
        seed: Some(seed),
        resolved: json!({ "case": case_json(&case), "ensemble": spec }),
        results: json!({
            "base": stats_json(&report.base),
            "extended": stats_json(&report.extended),
            "growth": report.growth,
            "threshold": STABILITY_THRESHOLD,
            "stable": report.growth <= STABILITY_THRESHOLD,
        }),
        table: Table {
            schema: "herzlab-verify/1",
            columns: vec!["vmax", "member", "source", "target", "ratio"],
            rows,
        },
    })
}

fn sharpness(config: &RunConfig) -> Result<Report, CliError> {
    let case = classify(config)?;
    let section = config.section("sharpness", &config.sharpness)?;
    if section.levels.is_empty() {
        return Err(CliError::Config("sharpness needs at least one level".into()));
    }
    let pts = sharpness_norms(&case, &section.levels, section.sigma)?;
    let doubling = |n: u32, pick: fn(&herzlab::embedlab::SharpnessPoint) -> f64, p: f64| -> String {
        if !n.is_multiple_of(2) {
            return String::new();
        }
        pts.iter()
            .find(|q| q.levels == n / 2)
            .map(|q| num(p / pick(q)))
            .unwrap_or_default()
    };
    let rows = pts
        .iter()
        .map(|p| {
            vec![
                p.levels.to_string(),
                num(p.source_power),
                num(p.target_power),
                num(p.ratio),
                doubling(p.levels, |q| q.source_power, p.source_power),
                doubling(p.levels, |q| q.target_power, p.target_power),
            ]
        })
        .collect();
    let (first, last) = (pts[0], pts[pts.len() - 1]);
    let exponent = section.sigma.recip() - case.source.herz.p.recip();
    Ok(Report {
        command: Command::Sharpness,
        seed: None,
        resolved: json!({ "case": case_json(&case), "sigma": section.sigma, "extrapolated": first.extrapolated }),
        results: json!({
            "cross_ratio": last.ratio / first.ratio,
            "predicted_cross_ratio": (last.levels as f64 / first.levels as f64).powf(exponent),
            "points": pts,
        }),
        table: Table {
            schema: "herzlab-sharpness/1",
            columns: vec![
                "N",
                "source_power",
                "target_power",
                "ratio",
                "source_doubling",
                "target_doubling",
            ],
            rows,
        },
    })
}

fn grid_of(config: &RunConfig, default: Grid) -> Result<Grid, CliError> {
    match &config.grid {
        Some(g) => Ok(Grid::new(g.half_width, g.size)?),
        None => Ok(default),
    }
}

fn dilate(config: &RunConfig) -> Result<Report, CliError> {
    let case = classify(config)?;
    let section = config.section("dilate", &config.dilate)?;
    let scale = section.scale()?;
    let grid = grid_of(config, scale.default_grid())?;
    let r = dilation_probe(&case, scale, &section.dilations, &grid)?;
    let rows = (0..r.dilations.len())
        .map(|i| {
            vec![
                r.dilations[i].to_string(),
                num(r.source[i]),
                num(r.target[i]),
                num(r.ratios[i]),
            ]
        })
        .collect();
    Ok(Report {
        command: Command::Dilate,
        seed: None,
        resolved: json!({
            "case": case_json(&case),
            "scale": scale,
            "grid": { "half_width": grid.half_width(), "size": grid.size() },
        }),
        results: json!({
            "fitted_source": r.fitted_source,
            "predicted_source": r.predicted_source,
            "fitted_target": r.fitted_target,
            "predicted_target": r.predicted_target,
            "ratio_spread": r.ratio_spread(),
            "ratio_growth": r.ratio_growth(),
            "balance_holds": r.balance_holds,
            "alpha_holds": r.alpha_holds,
        }),
        table: Table {
            schema: "herzlab-dilate/1",
            columns: vec!["N", "source", "target", "ratio"],
            rows,
        },
    })
}

fn roundtrip(config: &RunConfig, seed: u64) -> Result<Report, CliError> {
    let section = config.section("roundtrip", &config.roundtrip)?;
    let grid = grid_of(config, Grid::new(64.0, 1 << 14)?)?;
    let w = WindowFamily::build(&grid)?;
    let vmax = grid.max_level();
    let band = section.band.unwrap_or((vmax as f64).exp2());
    let errors: Vec<Result<(u64, f64), CliError>> = (0..section.functions)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i as u64);
            let f = random_band_limited(&grid, band, s);
            let back = synthesize(&analyze(&f, &w, vmax)?, &w, &grid)?;
            let diff = back.combine(Complex64::new(1.0, 0.0), &f, Complex64::new(-1.0, 0.0))?;
            Ok((s, diff.l2_norm() / f.l2_norm()))
        })
        .collect();
    let errors = errors.into_iter().collect::<Result<Vec<_>, _>>()?;
    let rows = errors
        .iter()
        .enumerate()
        .map(|(i, (s, e))| vec![i.to_string(), s.to_string(), num(*e)])
        .collect();
    Ok(Report {
        command: Command::Roundtrip,
        seed: Some(seed),
        resolved: json!({
            "grid": { "half_width": grid.half_width(), "size": grid.size() },
            "levels": vmax,
            "band": band,
        }),
        results: json!({
            "max_relative_error": errors.iter().map(|e| e.1).fold(0.0, f64::max),
            "calderon_error": w.calderon_error,
            "window_lower_bound": w.lower_bound,
        }),
        table: Table {
            schema: "herzlab-roundtrip/1",
            columns: vec!["index", "seed", "relative_error"],
            rows,
        },
    })
}
