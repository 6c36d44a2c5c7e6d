//! Seeded experiments with machine-readable reports.
//!
//! An [`ExperimentConfig`] names one experiment and its parameters. Running
//! it yields a [`Report`] `{config, results, provenance}` in which every
//! number is tagged `exact`, `bound` or `statistical` (with a standard
//! error), plus an optional artifact (a pattern document or a CSV table).
//! Identical configs give identical reports apart from `runtime_ms`.

mod run;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

pub use run::execute;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

macro_rules! failed_from {
    ($($t:ty),*) => {$(
        impl From<$t> for ExperimentError {
            fn from(e: $t) -> Self {
                ExperimentError::Failed(e.to_string())
            }
        }
    )*};
}

failed_from!(
    crate::wr::WrError,
    crate::hochman::HochmanError,
    crate::factor::FactorError,
    crate::entropy::EntropyError,
    crate::sft::SftError,
    crate::grid::GridError,
    std::io::Error,
    csv::Error
);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", content = "params", rename_all = "kebab-case")]
pub enum Experiment {
    Entropy(EntropyParams),
    WrSample(WrSampleParams),
    WrPeierls(WrPeierlsParams),
    WrVerify(WrVerifyParams),
    HochmanGen(HochmanGenParams),
    HochmanAlpha(HochmanAlphaParams),
    YmnEntropy(YmnEntropyParams),
    FactorDecompose(FactorDecomposeParams),
    Animals(AnimalsParams),
}

impl Experiment {
    /// Whether the artifact, rather than the report, is the main output.
    pub fn artifact_is_primary(&self) -> bool {
        matches!(self, Experiment::HochmanGen(_) | Experiment::HochmanAlpha(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Entropy(_) => "entropy",
            Experiment::WrSample(_) => "wr-sample",
            Experiment::WrPeierls(_) => "wr-peierls",
            Experiment::WrVerify(_) => "wr-verify",
            Experiment::HochmanGen(_) => "hochman-gen",
            Experiment::HochmanAlpha(_) => "hochman-alpha",
            Experiment::YmnEntropy(_) => "ymn-entropy",
            Experiment::FactorDecompose(_) => "factor-decompose",
            Experiment::Animals(_) => "animals",
        }
    }
}

/// Finite-size and strip upper bounds. Rules come from a JSON file or,
/// without one, from Widom-Rowlinson with `r1`, `r2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntropyParams {
    #[serde(default)]
    pub rules: Option<String>,
    #[serde(default = "one")]
    pub r1: u32,
    #[serde(default = "one")]
    pub r2: u32,
    #[serde(default = "default_sizes")]
    pub sizes: Vec<usize>,
    #[serde(default = "default_widths")]
    pub widths: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WrSampleParams {
    pub r1: u32,
    pub r2: u32,
    pub k: i32,
    pub sweeps: usize,
    #[serde(default)]
    pub burn_in: usize,
    #[serde(default = "one_usize")]
    pub chains: usize,
    pub boundary: crate::wr::BoundaryKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WrPeierlsParams {
    pub r1: u32,
    pub r2: u32,
    #[serde(default = "two")]
    pub d: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WrVerifyParams {
    pub k: i32,
    pub r1: u32,
    pub r2: u32,
    #[serde(default)]
    pub v: [i32; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HochmanGenParams {
    pub level: u32,
    pub k: u32,
    /// Label every blank with this value; random labels from the seed when absent.
    #[serde(default)]
    pub label: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HochmanAlphaParams {
    pub level: u32,
    pub max_k: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct YmnEntropyParams {
    pub m: u32,
    pub n: u32,
    pub big_n: usize,
    /// Generating level; the smallest with `side ≥ 2N` when absent.
    #[serde(default)]
    pub level: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorDecomposeParams {
    pub code: crate::factor::CodeKind,
    pub k: u32,
    /// Level-`2n` squares carry the decomposition.
    pub n: u32,
    /// Code radius, 0 or 1.
    #[serde(default)]
    pub radius: u32,
    pub window_radius: i32,
    #[serde(default = "default_windows")]
    pub windows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnimalsParams {
    pub n: usize,
    #[serde(default)]
    pub contours: bool,
}

fn one() -> u32 {
    1
}

fn two() -> u32 {
    2
}

fn one_usize() -> usize {
    1
}

fn default_sizes() -> Vec<usize> {
    vec![1, 2, 3, 4]
}

fn default_widths() -> Vec<usize> {
    vec![1, 2, 3]
}

fn default_windows() -> usize {
    20
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub version: String,
    pub seed: u64,
    pub runtime_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub config: ExperimentConfig,
    pub results: Value,
    pub provenance: Provenance,
}

impl Report {
    /// Named invariants that failed, from `results.violations`.
    pub fn violations(&self) -> Vec<String> {
        self.results["violations"]
            .as_array()
            .map(|v| v.iter().filter_map(|s| s.as_str().map(String::from)).collect())
            .unwrap_or_default()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Secondary output: a pattern document or a CSV table.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub kind: ArtifactKind,
    pub text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArtifactKind {
    PatternJson,
    Csv,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub artifact: Option<Artifact>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.report.violations().is_empty()
    }
}

/// How a number was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Exact,
    Bound,
}

pub fn exact<T: Serialize>(v: T) -> Value {
    json!({ "value": v, "provenance": "exact" })
}

pub fn bound<T: Serialize>(v: T) -> Value {
    json!({ "value": v, "provenance": "bound" })
}

pub fn statistical(v: f64, stderr: f64) -> Value {
    json!({ "value": v, "provenance": "statistical", "stderr": stderr })
}

/// Wraps every numeric leaf of `v` with the given label.
pub fn label_all(v: Value, label: Label) -> Value {
    match v {
        Value::Number(_) => match label {
            Label::Exact => exact(v),
            Label::Bound => bound(v),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(|x| label_all(x, label)).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, x)| (k, label_all(x, label))).collect()),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_rejects_unknown_keys() {
        let good = r#"{"experiment":{"command":"animals","params":{"n":3}},"seed":1}"#;
        let cfg: ExperimentConfig = serde_json::from_str(good).unwrap();
        assert_eq!(cfg.experiment.name(), "animals");
        let bad = r#"{"experiment":{"command":"animals","params":{"n":3,"m":1}},"seed":1}"#;
        assert!(serde_json::from_str::<ExperimentConfig>(bad).is_err());
        let bad_top = r#"{"experiment":{"command":"animals","params":{"n":3}},"seeds":1}"#;
        assert!(serde_json::from_str::<ExperimentConfig>(bad_top).is_err());
    }

    #[test]
    fn labels_wrap_numbers() {
        let v = label_all(json!({"a": 1, "b": [2.5], "c": "x"}), Label::Exact);
        assert_eq!(v["a"]["provenance"], "exact");
        assert_eq!(v["b"][0]["value"], 2.5);
        assert_eq!(v["c"], "x");
    }
}
