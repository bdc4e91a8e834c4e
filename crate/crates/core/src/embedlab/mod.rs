//! Classification of parameter tuples against the Jawerth and Franke
//! embedding hypotheses, plus the numerical probes built on a classified case.

mod ensemble;
mod probes;

use serde::Serialize;

use crate::herznorm::{HerzParams, SpaceKind, SpaceParams};
use crate::{Error, Exponent, Result};

pub use ensemble::{
    estimate_embedding_constant, field_ratio, generate_member, EnsembleSpec, EnsembleStats, Quantiles, RatioReport,
    RatioSample,
};
pub use probes::{
    dilation_probe, f2_identity_probe, jawerth_sharpness_family, sharpness_norms, single_level_witness,
    violate_balance, weighted_corollary_probe, DilationReport, F2Probe, ProbeScale, SharpnessPoint, WeightedCorollary,
    WeightedReport, WitnessPoint,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EmbeddingKind {
    /// `K̇_q^{α₂,r} f_θ^{s₂} ↪ K̇_s^{α₁,p} b_r^{s₁}`.
    Jawerth,
    /// `K̇_q^{α₂,p} b_p^{s₂} ↪ K̇_s^{α₁,p} f_θ^{s₁}`.
    Franke,
    /// `K̇_{p₀}^{α₁,p} b_r^{s₁+n/p₀-n/s} ↪ K̇_s^{α₁,p} b_r^{s₁}` for `q < p₀ < s`.
    SobolevShift,
}

impl std::str::FromStr for EmbeddingKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "jawerth" => Ok(EmbeddingKind::Jawerth),
            "franke" => Ok(EmbeddingKind::Franke),
            "sobolev-shift" | "sobolev_shift" | "shift" => Ok(EmbeddingKind::SobolevShift),
            other => Err(Error::InvalidParameter(format!("unknown embedding kind {other:?}"))),
        }
    }
}

/// Hypothesis branch. `A`-`D` are the Jawerth branches (the last one being the
/// equality line), `E`/`F` the Franke ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Branch {
    A,
    B,
    C,
    D,
    E,
    F,
    Shift,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Raw parameters of an embedding question. Exactly one of `s1`, `s2` may be
/// omitted; it is then derived from the balance line
/// `s₁ - n/s - α₁ = s₂ - n/q - α₂`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EmbeddingParams {
    pub n: usize,
    pub q: Exponent,
    pub s: Exponent,
    pub p: Exponent,
    /// Jawerth and shift cases only.
    pub r: Option<Exponent>,
    pub alpha1: f64,
    pub alpha2: f64,
    pub s1: Option<f64>,
    pub s2: Option<f64>,
    /// Fine index of the Franke target (defaults to `∞`).
    pub theta: Option<Exponent>,
    /// Intermediate exponent of the shift case.
    pub p0: Option<Exponent>,
}

impl EmbeddingParams {
    /// One-dimensional parameters with `s₁` to be derived.
    pub fn line(q: f64, s: f64, p: f64, r: Option<f64>, alpha1: f64, alpha2: f64, s2: f64) -> Self {
        EmbeddingParams {
            n: 1,
            q: Exponent::from(q),
            s: Exponent::from(s),
            p: Exponent::from(p),
            r: r.map(Exponent::from),
            alpha1,
            alpha2,
            s1: None,
            s2: Some(s2),
            theta: None,
            p0: None,
        }
    }
}

/// A classified embedding with its source and target spaces.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EmbeddingCase {
    pub kind: EmbeddingKind,
    pub branch: Branch,
    pub theta: Exponent,
    pub n: usize,
    pub s1: f64,
    pub s2: f64,
    pub source: SpaceParams,
    pub target: SpaceParams,
    pub params: EmbeddingParams,
}

impl EmbeddingCase {
    /// `s₁ - n/s - α₁ - (s₂ - n/q - α₂)`; zero on the balance line. Shift
    /// cases use `p0` for `q` and `α₁` for `α₂`.
    pub fn balance_gap(&self) -> f64 {
        match (self.kind, self.params.p0) {
            (EmbeddingKind::SobolevShift, Some(p0)) => {
                let p = EmbeddingParams {
                    q: p0,
                    alpha2: self.params.alpha1,
                    ..self.params
                };
                balance_gap(&p, self.s1, self.s2)
            }
            _ => balance_gap(&self.params, self.s1, self.s2),
        }
    }
}

fn balance_gap(p: &EmbeddingParams, s1: f64, s2: f64) -> f64 {
    let n = p.n as f64;
    (s1 - n * p.s.recip() - p.alpha1) - (s2 - n * p.q.recip() - p.alpha2)
}

/// Tolerant equality used by every branch test.
pub fn nearly_equal(a: f64, b: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

fn lt(a: f64, b: f64) -> bool {
    a < b && !nearly_equal(a, b)
}

fn le(a: f64, b: f64) -> bool {
    a < b || nearly_equal(a, b)
}

fn reject(msg: impl Into<String>) -> Error {
    Error::Rejected(msg.into())
}

fn herz(alpha: f64, p: Exponent, q: Exponent) -> Result<HerzParams> {
    HerzParams::new(alpha, p, q)
}

/// Classifies `params` against the hypotheses of the requested embedding.
pub fn classify_embedding_case(kind: EmbeddingKind, params: &EmbeddingParams) -> Result<EmbeddingCase> {
    let pr = params;
    if !(1..=3).contains(&pr.n) {
        return Err(Error::UnsupportedDimension(pr.n));
    }
    for (name, v) in [("alpha1", pr.alpha1), ("alpha2", pr.alpha2)] {
        if !v.is_finite() {
            return Err(Error::InvalidParameter(format!("{name} must be finite")));
        }
    }
    let n = pr.n as f64;
    let (q, s, p) = (pr.q.as_f64(), pr.s.as_f64(), pr.p.as_f64());
    let (nq, ns) = (n * pr.q.recip(), n * pr.s.recip());

    let (s1, s2) = match (pr.s1, pr.s2) {
        (Some(a), Some(b)) => {
            let gap = balance_gap(pr, a, b);
            if kind != EmbeddingKind::SobolevShift && !nearly_equal(gap, 0.0) {
                return Err(reject(format!(
                    "balance line s1 - n/s - alpha1 = s2 - n/q - alpha2 fails (gap {gap})"
                )));
            }
            (a, b)
        }
        (None, Some(b)) => (b - nq - pr.alpha2 + ns + pr.alpha1, b),
        (Some(a), None) => (a, a - ns - pr.alpha1 + nq + pr.alpha2),
        (None, None) => {
            return Err(Error::InvalidParameter("one of s1, s2 must be given".into()));
        }
    };
    if !(pr.alpha1 > -ns) {
        return Err(reject(format!(
            "validity alpha1 > -n/s fails ({} <= {})",
            pr.alpha1, -ns
        )));
    }
    if kind != EmbeddingKind::SobolevShift && !(pr.alpha2 > -nq) {
        return Err(reject(format!(
            "validity alpha2 > -n/q fails ({} <= {})",
            pr.alpha2, -nq
        )));
    }

    let lhs_a = pr.alpha2 + nq;
    let rhs_a = pr.alpha1 + ns;

    match kind {
        EmbeddingKind::Jawerth => {
            let r =
                pr.r.ok_or_else(|| Error::InvalidParameter("Jawerth cases need r".into()))?;
            if pr.q.is_infinite() || r.is_infinite() {
                return Err(reject("Jawerth needs 0 < q, r < inf"));
            }
            let rv = r.as_f64();
            let branch = if lt(q, s) {
                if le(q, rv) && lt(pr.alpha1, pr.alpha2) {
                    Branch::A
                } else if nearly_equal(pr.alpha1, pr.alpha2) && lt(q, p) && le(q, rv) && le(rv, s.min(p)) {
                    Branch::B
                } else {
                    return Err(reject("q < s but neither (q <= r, alpha2 > alpha1) nor \
                         (q < min(s,p), q <= r <= min(s,p), alpha2 = alpha1) holds".to_string()));
                }
            } else if lt(rhs_a, lhs_a) {
                Branch::C
            } else if nearly_equal(lhs_a, rhs_a) && le(q, rv) && le(rv, p) {
                Branch::D
            } else if nearly_equal(lhs_a, rhs_a) {
                return Err(reject(
                    "s <= q on the line alpha2 + n/q = alpha1 + n/s needs q <= r <= p",
                ));
            } else {
                return Err(reject("s <= q needs alpha2 + n/q >= alpha1 + n/s"));
            };
            let theta = if branch == Branch::D { r } else { Exponent::Infinite };
            Ok(EmbeddingCase {
                kind,
                branch,
                theta,
                n: pr.n,
                s1,
                s2,
                source: SpaceParams::new(herz(pr.alpha2, r, pr.q)?, s2, theta, SpaceKind::F)?,
                target: SpaceParams::new(herz(pr.alpha1, pr.p, pr.s)?, s1, r, SpaceKind::B)?,
                params: *pr,
            })
        }
        EmbeddingKind::Franke => {
            if pr.q.is_infinite() || pr.s.is_infinite() || pr.p.is_infinite() {
                return Err(reject("Franke needs 0 < s, p, q < inf"));
            }
            let branch = if lt(q, s) {
                if le(pr.alpha1, pr.alpha2) {
                    Branch::E
                } else {
                    return Err(reject("q < s needs alpha2 >= alpha1"));
                }
            } else if lt(rhs_a, lhs_a) {
                Branch::F
            } else {
                return Err(reject("s <= q needs alpha2 + n/q > alpha1 + n/s"));
            };
            let theta = pr.theta.unwrap_or(Exponent::Infinite);
            Ok(EmbeddingCase {
                kind,
                branch,
                theta,
                n: pr.n,
                s1,
                s2,
                source: SpaceParams::new(herz(pr.alpha2, pr.p, pr.q)?, s2, pr.p, SpaceKind::B)?,
                target: SpaceParams::new(herz(pr.alpha1, pr.p, pr.s)?, s1, theta, SpaceKind::F)?,
                params: *pr,
            })
        }
        EmbeddingKind::SobolevShift => {
            let r =
                pr.r.ok_or_else(|| Error::InvalidParameter("shift cases need r".into()))?;
            let p0 = pr
                .p0
                .ok_or_else(|| Error::InvalidParameter("shift cases need p0".into()))?;
            if !(lt(q, p0.as_f64()) && lt(p0.as_f64(), s)) {
                return Err(reject("shift needs q < p0 < s"));
            }
            let shifted = s1 + n * p0.recip() - ns;
            Ok(EmbeddingCase {
                kind,
                branch: Branch::Shift,
                theta: Exponent::Infinite,
                n: pr.n,
                s1,
                s2: shifted,
                source: SpaceParams::new(herz(pr.alpha1, pr.p, p0)?, shifted, r, SpaceKind::B)?,
                target: SpaceParams::new(herz(pr.alpha1, pr.p, pr.s)?, s1, r, SpaceKind::B)?,
                params: *pr,
            })
        }
    }
}

/// One parameter set per Jawerth/Franke branch, all in `n = 1` with `s₂ = 0`.
pub fn representative_case(branch: Branch) -> Result<EmbeddingCase> {
    use EmbeddingKind::*;
    let (kind, mut params) = match branch {
        Branch::A => (Jawerth, EmbeddingParams::line(1.0, 2.0, 1.0, Some(1.0), 0.0, 1.0, 0.0)),
        Branch::B => (
            Jawerth,
            EmbeddingParams::line(1.0, 2.0, 2.0, Some(1.5), 0.25, 0.25, 0.0),
        ),
        Branch::C => (Jawerth, EmbeddingParams::line(2.0, 1.0, 1.0, Some(1.0), 0.0, 1.0, 0.0)),
        Branch::D => (Jawerth, EmbeddingParams::line(2.0, 1.0, 2.0, Some(2.0), 0.0, 0.5, 0.0)),
        Branch::E => (Franke, EmbeddingParams::line(1.0, 2.0, 1.0, None, 0.0, 0.5, 0.0)),
        Branch::F => (Franke, EmbeddingParams::line(2.0, 1.0, 1.0, None, 0.0, 1.0, 0.0)),
        Branch::Shift => {
            let mut p = EmbeddingParams::line(1.0, 4.0, 1.0, Some(1.0), 0.0, 0.0, 0.0);
            p.s1 = Some(0.0);
            p.s2 = None;
            p.p0 = Some(Exponent::from(2.0));
            (SobolevShift, p)
        }
    };
    if branch == Branch::F {
        params.theta = Some(Exponent::from(2.0));
    }
    classify_embedding_case(kind, &params)
}
