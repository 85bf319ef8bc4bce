use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid data set: {0}")]
    InvalidData(String),

    #[error("non-contractive interval map: N = {intervals} gives |a_1| = 1")]
    NonContractiveIntervalMap { intervals: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("interval index {index} out of range 1..={intervals}")]
    IndexOutOfRange { index: usize, intervals: usize },

    #[error("norm condition violated on interval {interval}: {column} column sum {sum} > 1")]
    NormCondition {
        interval: usize,
        column: &'static str,
        sum: f64,
    },

    #[error("contraction {0} is not an Edelstein contraction")]
    NotEdelstein(String),

    #[error("no invariant rectangle found after {attempts} attempts; choose bounded contractions or smaller norms")]
    NoInvariantRect { attempts: usize },

    #[error("operator left C(I); input h violated endpoint membership (mismatch {mismatch:e} at knot {knot})")]
    LeftContinuousSpace { knot: usize, mismatch: f64 },

    #[error("point t = {t} lies outside [{lo}, {hi}]")]
    OutOfDomain { t: f64, lo: f64, hi: f64 },

    #[error("fixed-point iteration did not converge in {iterations} iterations (last change {last_change:e})")]
    NotConverged {
        iterations: usize,
        last_change: f64,
        trace: Vec<f64>,
    },

    #[error("undersampled input: spacing {spacing:e} exceeds eps/4 = {required:e} for eps = {eps:e}")]
    Undersampled { spacing: f64, required: f64, eps: f64 },

    #[error("invalid scale list: {0}")]
    InvalidScales(String),

    #[error("empty point set")]
    EmptyCloud,
}
