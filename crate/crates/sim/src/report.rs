//! JSON metric reports.
//!
//! Keys appear in a fixed order and every number is rounded to six
//! significant digits, so reports are byte-stable across runs and platforms.
//! Drones are numbered from 1, as in the trace files.

use serde::Serialize;
use swarmpath_core::metrics::{MetricsReport, RunMetrics};

/// Label attached to APE figures: the error is normalized by the reference
/// trajectory's path length, which is one of several possible conventions.
pub const APE_LABEL: &str = "APE (path-length-normalized)";

/// Drone whose pair distances are singled out in comparisons (1-based).
pub const REFERENCE_DRONE: usize = 2;

/// Round to six significant digits.
pub fn sig6(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.5e}").parse().expect("formatted float parses")
}

fn opt6(x: Option<f64>) -> Option<f64> {
    x.map(sig6)
}

#[derive(Debug, Serialize)]
pub struct DroneRow {
    pub drone: usize,
    pub path_length: f64,
}

#[derive(Debug, Serialize)]
pub struct PairRow {
    pub pair: [usize; 2],
    pub max_distance: f64,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub controller: &'static str,
    pub outcome: &'static str,
    pub completion_time: Option<f64>,
    pub drones: Vec<DroneRow>,
    pub pairs: Vec<PairRow>,
}

impl From<&RunMetrics> for RunReport {
    fn from(m: &RunMetrics) -> Self {
        RunReport {
            controller: m.controller.tag(),
            outcome: m.outcome.tag(),
            completion_time: opt6(m.completion_time),
            drones: m
                .path_lengths
                .iter()
                .enumerate()
                .map(|(i, &l)| DroneRow { drone: i + 1, path_length: sig6(l) })
                .collect(),
            pairs: m
                .pair_max_distances
                .iter()
                .map(|p| PairRow { pair: [p.i + 1, p.j + 1], max_distance: sig6(p.distance) })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ReferencePairRow {
    pub pair: [usize; 2],
    pub swarmpath: f64,
    pub baseline: f64,
    pub ratio: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct PairRatioRow {
    pub pair: [usize; 2],
    pub ratio: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct ApeReport {
    pub label: &'static str,
    pub reference: &'static str,
    pub percent: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct ComparisonReport {
    pub swarmpath: RunReport,
    pub baseline: RunReport,
    pub time_ratio: Option<f64>,
    /// Pairs `(2, j)` for every other drone `j`.
    pub reference_pairs: Vec<ReferencePairRow>,
    /// Ratio for every unordered pair.
    pub pair_ratios: Vec<PairRatioRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ape: Option<ApeReport>,
}

/// Build the comparison document from a report produced by
/// [`swarmpath_core::metrics::compare`].
pub fn comparison_report(report: &MetricsReport) -> ComparisonReport {
    let [sp, bl] = &report.runs[..] else { panic!("comparison report needs exactly two runs") };
    let cmp = report.comparison.as_ref().expect("comparison present");
    let r = REFERENCE_DRONE - 1;
    let reference_pairs = (0..sp.path_lengths.len())
        .filter(|&j| j != r)
        .map(|j| ReferencePairRow {
            pair: [REFERENCE_DRONE, j + 1],
            swarmpath: sig6(sp.pair_distance(r, j).unwrap_or(0.0)),
            baseline: sig6(bl.pair_distance(r, j).unwrap_or(0.0)),
            ratio: opt6(cmp.pair_ratio(r, j)),
        })
        .collect();
    ComparisonReport {
        swarmpath: sp.into(),
        baseline: bl.into(),
        time_ratio: opt6(cmp.time_ratio),
        reference_pairs,
        pair_ratios: cmp.pair_ratios.iter().map(|p| PairRatioRow { pair: [p.i + 1, p.j + 1], ratio: opt6(p.ratio) }).collect(),
        ape: report.ape.as_ref().map(|v| ApeReport {
            label: APE_LABEL,
            reference: "conventional-apf",
            percent: v.iter().copied().map(sig6).collect(),
        }),
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    text
}
