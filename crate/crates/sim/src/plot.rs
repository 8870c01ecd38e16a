//! Self-contained SVG plots of scenarios and traces.
//!
//! Obstacle bodies are grey discs; the APF repulsion region is a blue ring
//! and the obstacle-link region a green ring. The leader path is drawn in
//! black, each drone in its own colour, and the stretches where a drone was
//! linked to an obstacle are overdrawn in red. When several traces are
//! given, the first is drawn solid and the rest dashed (overlay mode).

use std::fmt::Write as _;

use swarmpath_core::simulator::SimulationTrace;
use swarmpath_core::topology::LinkMode;
use swarmpath_core::{ScenarioSpec, Vec2};

const PX_PER_M: f64 = 80.0;
const MARGIN_M: f64 = 0.5;
const DRONE_COLOURS: [&str; 6] = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02"];

struct View {
    min: Vec2,
    max: Vec2,
}

impl View {
    fn fit(spec: &ScenarioSpec, traces: &[&SimulationTrace]) -> Self {
        let mut min = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut max = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut grow = |p: Vec2, r: f64| {
            min = Vec2::new(min.x.min(p.x - r), min.y.min(p.y - r));
            max = Vec2::new(max.x.max(p.x + r), max.y.max(p.y + r));
        };
        grow(spec.start, 0.0);
        grow(spec.goal, 0.0);
        for o in spec.effective_obstacles() {
            grow(o.center, o.radius + o.r_apf);
        }
        for trace in traces {
            for frame in &trace.frames {
                if let Some(l) = frame.leader {
                    grow(l, 0.0);
                }
                for d in &frame.drones {
                    grow(d.position, 0.0);
                }
            }
        }
        let pad = Vec2::new(MARGIN_M, MARGIN_M);
        View { min: min - pad, max: max + pad }
    }

    fn width(&self) -> f64 {
        (self.max.x - self.min.x) * PX_PER_M
    }

    fn height(&self) -> f64 {
        (self.max.y - self.min.y) * PX_PER_M
    }

    /// World to screen; the y axis points up in the world and down on screen.
    fn px(&self, p: Vec2) -> (f64, f64) {
        ((p.x - self.min.x) * PX_PER_M, (self.max.y - p.y) * PX_PER_M)
    }
}

fn polyline(out: &mut String, view: &View, points: &[Vec2], style: &str) {
    if points.len() < 2 {
        return;
    }
    out.push_str("  <polyline points=\"");
    for (k, p) in points.iter().enumerate() {
        let (x, y) = view.px(*p);
        if k > 0 {
            out.push(' ');
        }
        write!(out, "{x:.2},{y:.2}").unwrap();
    }
    writeln!(out, "\" fill=\"none\" {style}/>").unwrap();
}

fn circle(out: &mut String, view: &View, center: Vec2, r: f64, style: &str) {
    let (x, y) = view.px(center);
    writeln!(out, "  <circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{:.2}\" {style}/>", r * PX_PER_M).unwrap();
}

/// Render the scenario and any number of traces of it.
pub fn render_svg(spec: &ScenarioSpec, traces: &[&SimulationTrace]) -> String {
    let view = View::fit(spec, traces);
    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.2} {h:.2}\">",
        w = view.width(),
        h = view.height()
    )
    .unwrap();
    out.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    for o in spec.effective_obstacles() {
        circle(&mut out, &view, o.center, o.radius + o.r_apf, "fill=\"none\" stroke=\"#3b6fd6\" stroke-width=\"1\"");
        circle(&mut out, &view, o.center, o.radius + o.r_imp, "fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"1\"");
        circle(&mut out, &view, o.center, o.radius, "fill=\"#888888\" stroke=\"#444444\" stroke-width=\"1\"");
    }

    for (t, trace) in traces.iter().enumerate() {
        let dash = if t == 0 { "" } else { " stroke-dasharray=\"6 4\" stroke-opacity=\"0.7\"" };
        let leader: Vec<Vec2> = trace.frames.iter().filter_map(|f| f.leader).collect();
        polyline(&mut out, &view, &leader, &format!("stroke=\"black\" stroke-width=\"1.5\"{dash}"));
        for i in 0..trace.drone_count() {
            let colour = DRONE_COLOURS[i % DRONE_COLOURS.len()];
            let path: Vec<Vec2> = trace.positions(i).collect();
            polyline(&mut out, &view, &path, &format!("stroke=\"{colour}\" stroke-width=\"2\"{dash}"));
            // Obstacle-linked stretches, each including the frame it started from.
            let mut run: Vec<Vec2> = Vec::new();
            for (k, f) in trace.frames.iter().enumerate() {
                if f.drones[i].mode != LinkMode::LeaderLinked {
                    if run.is_empty() && k > 0 {
                        run.push(trace.frames[k - 1].drones[i].position);
                    }
                    run.push(f.drones[i].position);
                } else if !run.is_empty() {
                    run.push(f.drones[i].position);
                    polyline(&mut out, &view, &run, "stroke=\"#d62728\" stroke-width=\"3.5\"");
                    run.clear();
                }
            }
            polyline(&mut out, &view, &run, "stroke=\"#d62728\" stroke-width=\"3.5\"");
        }
    }

    for (p, label) in [(spec.start, "start"), (spec.goal, "goal")] {
        let (x, y) = view.px(p);
        writeln!(out, "  <circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"4\" fill=\"black\"/>").unwrap();
        writeln!(out, "  <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\">{label}</text>", x + 6.0, y - 6.0)
            .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
