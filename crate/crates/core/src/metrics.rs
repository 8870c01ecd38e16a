//! Trajectory measures: path length, pairwise separation, completion time,
//! absolute percentage error and the two-controller comparison.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::simulator::{is_complete, Controller, Outcome, SimulationTrace};

fn check_index(trace: &SimulationTrace, drone: usize) -> Result<()> {
    let count = trace.drone_count();
    if drone >= count {
        return Err(Error::BadIndex { index: drone, count });
    }
    Ok(())
}

/// Sum of distances between consecutive frames.
pub fn path_length(trace: &SimulationTrace, drone: usize) -> Result<f64> {
    check_index(trace, drone)?;
    let mut total = 0.0;
    let mut positions = trace.positions(drone);
    if let Some(mut prev) = positions.next() {
        for p in positions {
            total += p.distance(prev);
            prev = p;
        }
    }
    Ok(total)
}

/// Largest separation of drones `i` and `j` over all frames.
pub fn max_pairwise_distance(trace: &SimulationTrace, i: usize, j: usize) -> Result<f64> {
    check_index(trace, i)?;
    check_index(trace, j)?;
    if i == j {
        return Err(Error::SamePair(i));
    }
    Ok(trace
        .frames
        .iter()
        .map(|f| f.drones[i].position.distance(f.drones[j].position))
        .fold(0.0, f64::max))
}

/// Time of the first frame where every drone is at its goal, for completed runs.
pub fn completion_time(trace: &SimulationTrace) -> Option<f64> {
    if trace.outcome != Outcome::Completed {
        return None;
    }
    trace.frames.iter().find(|f| is_complete(&trace.spec, f)).map(|f| f.t)
}

/// Absolute percentage error of drone `drone` in `trace_a` against `trace_b`.
///
/// Mean positional error over all time stamps, divided by the length of the
/// reference path in `trace_b`, in percent. When one trace is shorter its last
/// frame is held for the remaining stamps.
pub fn ape(trace_a: &SimulationTrace, trace_b: &SimulationTrace, drone: usize) -> Result<f64> {
    check_index(trace_a, drone)?;
    check_index(trace_b, drone)?;
    let (dt_a, dt_b) = (trace_a.spec.dt, trace_b.spec.dt);
    if dt_a != dt_b {
        return Err(Error::DtMismatch { a: dt_a, b: dt_b });
    }
    let reference = path_length(trace_b, drone)?;
    if reference == 0.0 {
        return Err(Error::ZeroReferenceLength);
    }
    let (na, nb) = (trace_a.frames.len(), trace_b.frames.len());
    let stamps = na.max(nb);
    let mut sum = 0.0;
    for k in 0..stamps {
        let pa = trace_a.frames[k.min(na - 1)].drones[drone].position;
        let pb = trace_b.frames[k.min(nb - 1)].drones[drone].position;
        sum += pa.distance(pb);
    }
    Ok(100.0 * (sum / stamps as f64) / reference)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairDistance {
    pub i: usize,
    pub j: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairRatio {
    pub i: usize,
    pub j: usize,
    /// SwarmPath over baseline; absent when either run did not complete.
    pub ratio: Option<f64>,
}

/// Measures of a single run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunMetrics {
    pub controller: Controller,
    pub outcome: Outcome,
    pub completion_time: Option<f64>,
    pub path_lengths: Vec<f64>,
    /// Every unordered pair `i < j`.
    pub pair_max_distances: Vec<PairDistance>,
}

impl RunMetrics {
    pub fn of(trace: &SimulationTrace) -> Self {
        let n = trace.drone_count();
        let path_lengths = (0..n).map(|i| path_length(trace, i).unwrap_or(0.0)).collect();
        let mut pair_max_distances = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let distance = max_pairwise_distance(trace, i, j).unwrap_or(0.0);
                pair_max_distances.push(PairDistance { i, j, distance });
            }
        }
        Self {
            controller: trace.controller,
            outcome: trace.outcome,
            completion_time: completion_time(trace),
            path_lengths,
            pair_max_distances,
        }
    }

    pub fn pair_distance(&self, i: usize, j: usize) -> Option<f64> {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.pair_max_distances.iter().find(|p| p.i == i && p.j == j).map(|p| p.distance)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    /// SwarmPath completion time over baseline completion time.
    pub time_ratio: Option<f64>,
    pub pair_ratios: Vec<PairRatio>,
}

impl Comparison {
    pub fn pair_ratio(&self, i: usize, j: usize) -> Option<f64> {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.pair_ratios.iter().find(|p| p.i == i && p.j == j).and_then(|p| p.ratio)
    }
}

/// Everything reported about one or two runs.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub runs: Vec<RunMetrics>,
    pub comparison: Option<Comparison>,
    /// Per-drone APE in percent, when a reference trace was supplied.
    pub ape: Option<Vec<f64>>,
}

impl MetricsReport {
    pub fn single(trace: &SimulationTrace) -> Self {
        Self { runs: alloc::vec![RunMetrics::of(trace)], comparison: None, ape: None }
    }
}

fn ratio(num: Option<f64>, den: Option<f64>) -> Option<f64> {
    match (num, den) {
        (Some(n), Some(d)) if d > 0.0 => Some(n / d),
        _ => None,
    }
}

/// Compare a SwarmPath run with a conventional-APF run of the same scenario.
pub fn compare(trace_swarmpath: &SimulationTrace, trace_baseline: &SimulationTrace) -> Result<MetricsReport> {
    if trace_swarmpath.spec != trace_baseline.spec {
        return Err(Error::SpecMismatch);
    }
    let sp = RunMetrics::of(trace_swarmpath);
    let bl = RunMetrics::of(trace_baseline);
    let both = sp.outcome == Outcome::Completed && bl.outcome == Outcome::Completed;
    let time_ratio = if both { ratio(sp.completion_time, bl.completion_time) } else { None };
    let pair_ratios = sp
        .pair_max_distances
        .iter()
        .map(|p| PairRatio {
            i: p.i,
            j: p.j,
            ratio: if both { ratio(Some(p.distance), bl.pair_distance(p.i, p.j)) } else { None },
        })
        .collect();
    Ok(MetricsReport {
        runs: alloc::vec![sp, bl],
        comparison: Some(Comparison { time_ratio, pair_ratios }),
        ape: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::{DroneSample, Frame};
    use crate::topology::LinkMode;
    use crate::vec2::Vec2;
    use crate::world::ScenarioSpec;
    use alloc::vec;

    fn trace_of(paths: &[&[(f64, f64)]], outcome: Outcome) -> SimulationTrace {
        let n = paths[0].len();
        let frames = (0..n)
            .map(|k| Frame {
                t: k as f64 * 0.01,
                leader: None,
                drones: paths
                    .iter()
                    .map(|p| DroneSample { position: Vec2::new(p[k].0, p[k].1), mode: LinkMode::LeaderLinked })
                    .collect(),
            })
            .collect();
        let mut spec = ScenarioSpec::open_field(Vec2::ZERO, Vec2::new(100.0, 0.0));
        spec.formation_offsets = (0..paths.len()).map(|i| Vec2::new(0.0, i as f64)).collect();
        SimulationTrace { spec, controller: Controller::SwarmPath, frames, outcome }
    }

    #[test]
    fn path_length_examples() {
        let t = trace_of(&[&[(0.0, 0.0), (3.0, 4.0)]], Outcome::MaxSteps);
        assert_eq!(path_length(&t, 0).unwrap(), 5.0);
        let t = trace_of(&[&[(1.0, 1.0)]], Outcome::MaxSteps);
        assert_eq!(path_length(&t, 0).unwrap(), 0.0);
        let t = trace_of(&[&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]], Outcome::MaxSteps);
        assert_eq!(path_length(&t, 0).unwrap(), 2.0);
        assert_eq!(path_length(&t, 1), Err(Error::BadIndex { index: 1, count: 1 }));
    }

    #[test]
    fn pairwise_examples() {
        let frozen = trace_of(&[&[(0.0, 0.0), (0.0, 0.0)], &[(1.0, 0.0), (1.0, 0.0)]], Outcome::MaxSteps);
        assert_eq!(max_pairwise_distance(&frozen, 0, 1).unwrap(), 1.0);
        let visiting = trace_of(&[&[(0.0, 1.0), (0.0, 3.0)], &[(0.0, 0.0), (0.0, 0.0)]], Outcome::MaxSteps);
        assert_eq!(max_pairwise_distance(&visiting, 0, 1).unwrap(), 3.0);
        assert_eq!(max_pairwise_distance(&visiting, 1, 0).unwrap(), 3.0);
        assert_eq!(max_pairwise_distance(&visiting, 1, 1), Err(Error::SamePair(1)));
    }

    #[test]
    fn completion_time_examples() {
        let mut spec = ScenarioSpec::open_field(Vec2::ZERO, Vec2::new(10.0, 0.0));
        spec.formation_offsets = vec![Vec2::ZERO];
        let frames: Vec<Frame> = (0..=1000)
            .map(|k| Frame {
                t: k as f64 * 0.01,
                leader: None,
                drones: vec![DroneSample { position: Vec2::new(k as f64 * 0.01, 0.0), mode: LinkMode::LeaderLinked }],
            })
            .collect();
        let mut trace = SimulationTrace { spec, controller: Controller::SwarmPath, frames, outcome: Outcome::Completed };
        // Goal at 10 m with threshold 0.1 is first met at x = 9.9.
        trace.spec.apf.goal_threshold = 1e-9;
        assert_eq!(completion_time(&trace), Some(10.0));
        trace.outcome = Outcome::MaxSteps;
        assert_eq!(completion_time(&trace), None);

        let mut at_goal = trace_of(&[&[(100.0, 0.0)]], Outcome::Completed);
        at_goal.spec.goal = Vec2::new(100.0, 0.0);
        assert_eq!(completion_time(&at_goal), Some(0.0));
    }

    #[test]
    fn ape_examples() {
        let line: Vec<(f64, f64)> = (0..=100).map(|k| (k as f64 * 0.05, 0.0)).collect();
        let shifted: Vec<(f64, f64)> = line.iter().map(|&(x, y)| (x, y + 0.05)).collect();
        let a = trace_of(&[&shifted], Outcome::Completed);
        let b = trace_of(&[&line], Outcome::Completed);
        assert_eq!(ape(&b, &b, 0).unwrap(), 0.0);
        assert!((ape(&a, &b, 0).unwrap() - 1.0).abs() < 1e-12);

        let still = trace_of(&[&[(0.0, 0.0), (0.0, 0.0)]], Outcome::Completed);
        assert_eq!(ape(&a, &still, 0), Err(Error::ZeroReferenceLength));
        let mut coarse = b.clone();
        coarse.spec.dt = 0.02;
        assert!(matches!(ape(&a, &coarse, 0), Err(Error::DtMismatch { .. })));
    }

    #[test]
    fn ape_holds_final_frame() {
        let a = trace_of(&[&[(0.0, 0.0), (1.0, 0.0)]], Outcome::Completed);
        let b = trace_of(&[&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)]], Outcome::Completed);
        // errors 0, 0, 1, 2 -> mean 0.75 over reference 3 m
        assert!((ape(&a, &b, 0).unwrap() - 25.0).abs() < 1e-12);
    }

    #[test]
    fn compare_identical() {
        let mut t = trace_of(&[&[(0.0, 0.0), (1.0, 0.0)], &[(0.0, 1.0), (1.0, 1.0)]], Outcome::Completed);
        t.spec.goal = Vec2::new(1.0, 0.0);
        let report = compare(&t, &t).unwrap();
        let cmp = report.comparison.unwrap();
        assert_eq!(cmp.time_ratio, Some(1.0));
        assert!(cmp.pair_ratios.iter().all(|p| p.ratio == Some(1.0)));
    }

    #[test]
    fn compare_stalled_baseline() {
        let sp = trace_of(&[&[(0.0, 0.0), (1.0, 0.0)], &[(0.0, 1.0), (1.0, 2.0)]], Outcome::Completed);
        let mut bl = sp.clone();
        bl.outcome = Outcome::Stalled;
        bl.controller = Controller::ConventionalApf;
        let report = compare(&sp, &bl).unwrap();
        let cmp = report.comparison.unwrap();
        assert_eq!(cmp.time_ratio, None);
        assert!(cmp.pair_ratios.iter().all(|p| p.ratio.is_none()));
        assert_eq!(report.runs[1].outcome, Outcome::Stalled);
    }

    #[test]
    fn compare_spec_mismatch() {
        let a = trace_of(&[&[(0.0, 0.0)]], Outcome::Completed);
        let mut b = a.clone();
        b.spec.dt = 0.02;
        assert_eq!(compare(&a, &b), Err(Error::SpecMismatch));
    }
}
