//! Run configurations: TOML with one table per parameter block.

use herzlab::embedlab::{EmbeddingKind, EmbeddingParams, EnsembleSpec, ProbeScale};
use herzlab::{Exponent, HerzParams, SpaceKind, SpaceParams};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Norm,
    Verify,
    Sharpness,
    Dilate,
    Roundtrip,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Norm => "norm",
            Command::Verify => "verify",
            Command::Sharpness => "sharpness",
            Command::Dilate => "dilate",
            Command::Roundtrip => "roundtrip",
        }
    }

    pub fn is_stochastic(self) -> bool {
        matches!(self, Command::Verify | Command::Roundtrip)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<EmbeddingSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<EnsembleSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sharpness: Option<SharpnessSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dilate: Option<DilateSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roundtrip: Option<RoundtripSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSection>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSection {
    /// `"b"` or `"f"`.
    pub kind: String,
    pub alpha: f64,
    pub p: Exponent,
    pub q: Exponent,
    pub s: f64,
    pub beta: Exponent,
}

impl SpaceSection {
    pub fn resolve(&self) -> Result<SpaceParams, CliError> {
        let kind = match self.kind.to_ascii_lowercase().as_str() {
            "b" => SpaceKind::B,
            "f" => SpaceKind::F,
            other => {
                return Err(CliError::Config(format!(
                    "space kind must be \"b\" or \"f\", got {other:?}"
                )))
            }
        };
        Ok(SpaceParams::new(
            HerzParams::new(self.alpha, self.p, self.q)?,
            self.s,
            self.beta,
            kind,
        )?)
    }
}

/// Cube index: a bare integer on the line, a list in higher dimensions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CubeIndex {
    Line(i64),
    Box(Vec<i64>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldEntry {
    pub v: u32,
    pub m: CubeIndex,
    pub re: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub im: f64,
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSection {
    #[serde(default = "one")]
    pub n: usize,
    pub entries: Vec<FieldEntry>,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingSection {
    /// `"jawerth"`, `"franke"` or `"sobolev-shift"`.
    pub kind: String,
    #[serde(default = "one")]
    pub n: usize,
    pub q: Exponent,
    pub s: Exponent,
    pub p: Exponent,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Exponent>,
    pub alpha1: f64,
    pub alpha2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Exponent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p0: Option<Exponent>,
}

impl EmbeddingSection {
    pub fn resolve(&self) -> Result<(EmbeddingKind, EmbeddingParams), CliError> {
        let kind: EmbeddingKind = self.kind.parse()?;
        Ok((
            kind,
            EmbeddingParams {
                n: self.n,
                q: self.q,
                s: self.s,
                p: self.p,
                r: self.r,
                alpha1: self.alpha1,
                alpha2: self.alpha2,
                s1: self.s1,
                s2: self.s2,
                theta: self.theta,
                p0: self.p0,
            },
        ))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vmax: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kmax: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sparsity: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log2_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log2_max: Option<f64>,
}

impl EnsembleSection {
    pub fn resolve(&self, seed: u64) -> EnsembleSpec {
        let d = EnsembleSpec::default();
        EnsembleSpec {
            members: self.members.unwrap_or(d.members),
            vmax: self.vmax.unwrap_or(d.vmax),
            kmax: self.kmax.unwrap_or(d.kmax),
            sparsity: self.sparsity.unwrap_or(d.sparsity),
            log2_magnitude: (
                self.log2_min.unwrap_or(d.log2_magnitude.0),
                self.log2_max.unwrap_or(d.log2_magnitude.1),
            ),
            seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SharpnessSection {
    pub levels: Vec<u32>,
    pub sigma: Exponent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DilateSection {
    /// `"fine"` or `"coarse"`.
    pub scale: String,
    pub dilations: Vec<i32>,
}

impl DilateSection {
    pub fn scale(&self) -> Result<ProbeScale, CliError> {
        match self.scale.to_ascii_lowercase().as_str() {
            "fine" => Ok(ProbeScale::Fine),
            "coarse" => Ok(ProbeScale::Coarse),
            other => Err(CliError::Config(format!(
                "scale must be \"fine\" or \"coarse\", got {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub half_width: f64,
    pub size: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoundtripSection {
    pub functions: usize,
    /// Spectral radius of the random functions; defaults to `2^{max level}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub band: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: String,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.message().to_string()))
    }

    /// Canonical text; `parse(serialize(c)) == c`.
    pub fn serialize(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn section<'a, T>(&self, name: &str, s: &'a Option<T>) -> Result<&'a T, CliError> {
        s.as_ref()
            .ok_or_else(|| CliError::Config(format!("command `{}` needs a [{name}] table", self.command.name())))
    }
}
