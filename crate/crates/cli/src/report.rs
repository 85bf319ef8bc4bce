//! JSON fragments per stage and the aggregated `report.json`.

use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::CliError;
use crate::output::write_json;

pub const VERIFY_JSON: &str = "verify.json";
pub const SOLVE_JSON: &str = "solve.json";
pub const ATTRACTOR_JSON: &str = "attractor.json";
pub const ANALYSIS_JSON: &str = "analysis.json";
pub const REPORT_JSON: &str = "report.json";

const SECTIONS: [(&str, &str); 4] = [
    ("verify", VERIFY_JSON),
    ("solve", SOLVE_JSON),
    ("attractor", ATTRACTOR_JSON),
    ("analysis", ANALYSIS_JSON),
];

#[derive(Debug, Clone, Serialize)]
pub struct EdelsteinWitnessOut {
    /// 1-based interval number.
    pub interval: usize,
    pub t: f64,
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifySummary {
    pub intervals: usize,
    /// `[|b|+|d|, |c|+|e|]` per interval.
    pub column_sums: Vec<[f64; 2]>,
    /// Names of `s_j` and `r_j`.
    pub contractions: Vec<[&'static str; 2]>,
    /// `[v_lo, v_hi, w_lo, w_hi]`.
    pub rect: [f64; 4],
    pub rect_attempts: usize,
    pub edelstein_pairs: usize,
    pub edelstein_max_ratio: f64,
    pub edelstein_witness: Option<EdelsteinWitnessOut>,
    pub seed: u64,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveSummary {
    pub grid_points: usize,
    pub per_interval: usize,
    pub max_spacing: f64,
    pub tol: f64,
    pub iterations: usize,
    pub final_change: f64,
    pub residual: f64,
    pub node_residual: f64,
    /// Median of successive change ratios; estimates the contraction factor.
    pub ratio_estimate: Option<f64>,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HutchinsonSummary {
    pub depth: usize,
    pub cap: usize,
    pub points: usize,
    pub displacements: Vec<f64>,
    pub final_displacement: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChaosSummary {
    pub steps: usize,
    pub burn_in: usize,
    pub points: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphComparison {
    pub hausdorff: f64,
    /// `max(grid spacing, final Hutchinson displacement)`.
    pub scale: f64,
    pub ratio: f64,
    /// `ratio <= 5`.
    pub passes: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AttractorSummary {
    pub hutchinson: Option<HutchinsonSummary>,
    pub chaos: Option<ChaosSummary>,
    pub chaos_vs_hutchinson: Option<f64>,
    pub graph_vs_hutchinson: Option<GraphComparison>,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentAnalysis {
    pub component: &'static str,
    pub eps: Vec<f64>,
    pub counts: Vec<u64>,
    pub box_dim: f64,
    pub box_intercept: f64,
    pub box_r2: f64,
    pub local_slopes: Vec<f64>,
    pub degenerate: bool,
    pub shifted_box_dim: f64,
    pub mesh_shift: f64,
    pub alpha_hat: f64,
    pub k_hat: f64,
    pub holder_scales: Vec<f64>,
    pub oscillations: Vec<f64>,
    pub holder_r2: f64,
    pub holder_rms_residual: f64,
    pub holder_non_monotone: bool,
    pub audit_pairs: usize,
    pub audit_violations: usize,
    pub audit_max_ratio: f64,
    pub bound: f64,
    pub bound_margin: f64,
    pub bound_passes: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SyntheticSummary {
    pub dimension: f64,
    pub eps: Vec<f64>,
    pub counts: Vec<u64>,
    pub fitted: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisSummary {
    pub slack: f64,
    pub components: Vec<ComponentAnalysis>,
    pub synthetic: Option<SyntheticSummary>,
    pub passes: bool,
    pub seconds: f64,
}

/// Collects the stage fragments present in `dir` into `report.json`.
/// Stages without a fragment are marked skipped.
pub fn write_report(dir: &Path, command: &str) -> Result<Value, CliError> {
    let mut sections = Map::new();
    for (name, file) in SECTIONS {
        let path = dir.join(file);
        let entry = if path.exists() {
            let text = std::fs::read_to_string(&path)?;
            let mut v: Value = serde_json::from_str(&text)?;
            if let Value::Object(m) = &mut v {
                m.insert("status".into(), Value::from("done"));
            }
            v
        } else {
            let mut m = Map::new();
            m.insert("status".into(), Value::from("skipped"));
            Value::Object(m)
        };
        sections.insert(name.into(), entry);
    }
    let mut root = Map::new();
    root.insert("command".into(), Value::from(command));
    root.insert("sections".into(), Value::Object(sections));
    let report = Value::Object(root);
    write_json(&dir.join(REPORT_JSON), &report)?;
    Ok(report)
}
