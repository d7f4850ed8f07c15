//! Optimizes the X⊗X and Y⊗Z programs and prints each accepted rewrite.

use dqwalk::graph_model::{DynamicGraph, Graph, RationalAngle, TimedGraph};
use dqwalk::rewrite_optimizer::{optimize, OptimizerConfig};

fn step(g: Graph, num: u32, den: u32) -> TimedGraph {
    TimedGraph::new(g, RationalAngle::new(num, den))
}

fn main() {
    let left = || Graph::xor_matching(4, 0b10, |_| true);
    let right = || Graph::xor_matching(4, 0b01, |_| true);
    let programs = [
        (
            "X⊗X",
            vec![
                step(left(), 1, 2),
                step(Graph::all_loops(4), 3, 2),
                step(right(), 1, 2),
                step(Graph::all_loops(4), 3, 2),
            ],
        ),
        (
            "Y⊗Z",
            vec![
                step(left(), 1, 2),
                step(Graph::loops_only(4, [2, 3]).unwrap(), 1, 1),
                step(Graph::loops_only(4, [1, 3]).unwrap(), 1, 1),
            ],
        ),
    ];
    for (name, steps) in programs {
        let dg = DynamicGraph::from_steps(4, steps).unwrap();
        let (out, report) = optimize(&dg, &OptimizerConfig::default());
        println!("{name}: {} graphs {} -> {} graphs {}", dg.len(), dg.total_time(), out.len(), out.total_time());
        for s in &report.steps {
            println!("  {} on steps {}..={}, saved {}", s.rule, s.start, s.end, s.time_saved);
        }
        for s in out.steps() {
            println!("  edges {:?} loops {:?} for {}", s.graph.edges(), s.graph.loops(), s.duration);
        }
    }
}
