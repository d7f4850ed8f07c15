//! Applies individual rewrite passes by hand.

use dqwalk::gate_compiler::compile_hadamard_sequential;
use dqwalk::graph_model::{DynamicGraph, Graph, RationalAngle, TimedGraph};
use dqwalk::rewrite_optimizer::{
    pass_combine_pst, pass_hypercube_hadamard, pass_merge_complementary, pass_merge_identical, pass_swap_commuting,
};

fn show(label: &str, dg: &DynamicGraph) {
    let parts: Vec<String> = dg
        .steps()
        .iter()
        .map(|s| format!("({}e {}l {})", s.graph.edges().len(), s.graph.loops().len(), s.duration))
        .collect();
    println!("{label:>22}: {} = {}", parts.join(" "), dg.total_time());
}

fn main() {
    let t = |n, d| RationalAngle::new(n, d);
    let left = Graph::xor_matching(4, 0b10, |_| true);
    let right = Graph::xor_matching(4, 0b01, |_| true);
    let loops = Graph::all_loops(4);

    let xx = DynamicGraph::from_steps(
        4,
        [
            TimedGraph::new(left, t(1, 2)),
            TimedGraph::new(loops.clone(), t(3, 2)),
            TimedGraph::new(right, t(1, 2)),
            TimedGraph::new(loops, t(3, 2)),
        ],
    )
    .unwrap();
    show("X⊗X", &xx);
    let swapped = pass_swap_commuting(&xx, 1).unwrap();
    show("swap 1,2", &swapped);
    let merged = pass_merge_identical(&swapped, 2).unwrap();
    show("merge identical 2,3", &merged);
    let combined = pass_combine_pst(&merged, 0..=1).unwrap();
    show("combine transfers", &combined);

    let tail = DynamicGraph::from_steps(
        2,
        [
            TimedGraph::new(Graph::loops_only(2, [0]).unwrap(), t(1, 2)),
            TimedGraph::new(Graph::loops_only(2, [1]).unwrap(), t(1, 1)),
        ],
    )
    .unwrap();
    show("phase tail", &tail);
    show("merge complementary", &pass_merge_complementary(&tail, 0).unwrap());

    let mut hh = compile_hadamard_sequential(0, 2).unwrap();
    hh.extend(&compile_hadamard_sequential(1, 2).unwrap()).unwrap();
    show("sequential H⊗H", &hh);
    show("hypercube replacement", &pass_hypercube_hadamard(&hh, 0..=5).unwrap());
}
