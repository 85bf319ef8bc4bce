//! Declarative run configuration (TOML).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use fif_core::interp::{Contraction, DataSet, IntervalParams, ScalarFn, DEFAULT_MARGIN_GROWTH};
use fif_core::fixed_point::RbConfig;

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Seed for every randomized step (Edelstein sampling, chaos game,
    /// Holder audit).
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub data: DataBlock,
    pub maps: MapsBlock,
    #[serde(default)]
    pub verify: VerifyBlock,
    #[serde(default)]
    pub solver: SolverBlock,
    #[serde(default)]
    pub attractor: AttractorBlock,
    #[serde(default)]
    pub analysis: AnalysisBlock,
    #[serde(default)]
    pub output: OutputBlock,
}

fn default_seed() -> u64 {
    1
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DataBlock {
    pub t: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
}

/// One spec broadcast to every interval, or one per interval.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum PerInterval<T> {
    Many(Vec<T>),
    One(T),
}

impl<T: Clone> PerInterval<T> {
    fn expand(&self, field: &str, n: usize) -> Result<Vec<T>, CliError> {
        match self {
            PerInterval::One(x) => Ok(vec![x.clone(); n]),
            PerInterval::Many(xs) if xs.len() == n => Ok(xs.clone()),
            PerInterval::Many(xs) if xs.len() == 1 => Ok(vec![xs[0].clone(); n]),
            PerInterval::Many(xs) => Err(CliError::Config(format!(
                "maps.{field}: {} entries for {n} intervals",
                xs.len()
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(untagged)]
pub enum FnSpec {
    Constant(f64),
    Form(FnForm),
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FnForm {
    Constant { value: f64 },
    Affine { slope: f64, intercept: f64 },
    Sine {
        amplitude: f64,
        frequency: f64,
        #[serde(default)]
        phase: f64,
    },
}

impl From<FnSpec> for ScalarFn {
    fn from(spec: FnSpec) -> Self {
        match spec {
            FnSpec::Constant(c) | FnSpec::Form(FnForm::Constant { value: c }) => ScalarFn::Constant(c),
            FnSpec::Form(FnForm::Affine { slope, intercept }) => ScalarFn::Affine { slope, intercept },
            FnSpec::Form(FnForm::Sine {
                amplitude,
                frequency,
                phase,
            }) => ScalarFn::Sine {
                amplitude,
                frequency,
                phase,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(untagged)]
pub enum ContractionSpec {
    Named(ContractionName),
    Form(ContractionForm),
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContractionName {
    Zero,
    Tanh,
    Arctan,
    BoundedRational,
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ContractionForm {
    Zero,
    Linear { k: f64 },
    Tanh {
        #[serde(default = "unit")]
        scale: f64,
    },
    Arctan {
        #[serde(default = "unit")]
        scale: f64,
    },
    BoundedRational {
        #[serde(default = "unit")]
        scale: f64,
    },
}

fn unit() -> f64 {
    1.0
}

impl From<ContractionSpec> for Contraction {
    fn from(spec: ContractionSpec) -> Self {
        match spec {
            ContractionSpec::Named(ContractionName::Zero) | ContractionSpec::Form(ContractionForm::Zero) => {
                Contraction::ZERO
            }
            ContractionSpec::Named(ContractionName::Tanh) => Contraction::Tanh { scale: 1.0 },
            ContractionSpec::Named(ContractionName::Arctan) => Contraction::Arctan { scale: 1.0 },
            ContractionSpec::Named(ContractionName::BoundedRational) => Contraction::BoundedRational { scale: 1.0 },
            ContractionSpec::Form(ContractionForm::Linear { k }) => Contraction::Linear { k },
            ContractionSpec::Form(ContractionForm::Tanh { scale }) => Contraction::Tanh { scale },
            ContractionSpec::Form(ContractionForm::Arctan { scale }) => Contraction::Arctan { scale },
            ContractionSpec::Form(ContractionForm::BoundedRational { scale }) => {
                Contraction::BoundedRational { scale }
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MapsBlock {
    pub b: PerInterval<FnSpec>,
    pub c: PerInterval<FnSpec>,
    pub d: PerInterval<FnSpec>,
    pub e: PerInterval<FnSpec>,
    pub s: PerInterval<ContractionSpec>,
    pub r: PerInterval<ContractionSpec>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyBlock {
    pub edelstein_pairs: usize,
    pub margin_growth: f64,
}

impl Default for VerifyBlock {
    fn default() -> Self {
        VerifyBlock {
            edelstein_pairs: 20_000,
            margin_growth: DEFAULT_MARGIN_GROWTH,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverBlock {
    pub grid_per_interval: usize,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverBlock {
    fn default() -> Self {
        let rb = RbConfig::default();
        SolverBlock {
            grid_per_interval: rb.per_interval,
            tol: rb.tol,
            max_iter: rb.max_iter,
        }
    }
}

impl SolverBlock {
    pub fn rb_config(&self) -> RbConfig {
        RbConfig {
            per_interval: self.grid_per_interval,
            tol: self.tol,
            max_iter: self.max_iter,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AttractorMode {
    Hutchinson,
    Chaos,
    Both,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct AttractorBlock {
    pub mode: AttractorMode,
    pub depth: usize,
    pub cap: usize,
    /// Chaos-game steps; 0 matches the Hutchinson cloud size plus burn-in.
    pub chaos_points: usize,
    pub burn_in: usize,
}

impl Default for AttractorBlock {
    fn default() -> Self {
        AttractorBlock {
            mode: AttractorMode::Both,
            depth: 14,
            cap: 200_000,
            chaos_points: 0,
            burn_in: 1000,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalysisBlock {
    /// Box sizes; defaults to `|I| * 2^-k`, `k = 3..=9`.
    pub eps: Option<Vec<f64>>,
    /// Holder scales; defaults to `|I| * 2^-k`, `k = 3..=9`.
    pub scales: Option<Vec<f64>>,
    pub slack: f64,
    pub audit_pairs: usize,
    /// Mesh-anchor shift, in units of eps, for the robustness check.
    pub mesh_shift: f64,
    /// Test mode: replace the measured box counts by `N = (1/eps)^d`.
    pub synthetic_dimension: Option<f64>,
}

impl Default for AnalysisBlock {
    fn default() -> Self {
        AnalysisBlock {
            eps: None,
            scales: None,
            slack: fif_core::analysis::DEFAULT_SLACK,
            audit_pairs: 100_000,
            mesh_shift: 0.5,
            synthetic_dimension: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputBlock {
    pub dir: PathBuf,
    pub svg: bool,
}

impl Default for OutputBlock {
    fn default() -> Self {
        OutputBlock {
            dir: PathBuf::from("out"),
            svg: true,
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn dataset(&self) -> Result<DataSet, CliError> {
        let d = &self.data;
        Ok(DataSet::new(d.t.clone(), d.v.clone(), d.w.clone())?)
    }

    /// Per-interval parameters after broadcasting.
    pub fn interval_params(&self, intervals: usize) -> Result<Vec<IntervalParams>, CliError> {
        let m = &self.maps;
        let [b, c, d, e] = [("b", &m.b), ("c", &m.c), ("d", &m.d), ("e", &m.e)]
            .map(|(name, spec)| spec.expand(name, intervals));
        let (b, c, d, e) = (b?, c?, d?, e?);
        let s = m.s.expand("s", intervals)?;
        let r = m.r.expand("r", intervals)?;
        Ok((0..intervals)
            .map(|j| IntervalParams {
                b: b[j].into(),
                c: c[j].into(),
                d: d[j].into(),
                e: e[j].into(),
                s: s[j].into(),
                r: r[j].into(),
            })
            .collect())
    }

    pub fn rb_config(&self) -> RbConfig {
        self.solver.rb_config()
    }
}
