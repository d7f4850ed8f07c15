//! Evolves every basis state of three qubits through the two-step I⊗X⊗I program.

use dqwalk::graph_model::{DynamicGraph, Graph, RationalAngle, TimedGraph};
use dqwalk::numerics::StateVector;
use dqwalk::walk_engine::evolve_state;

fn main() {
    let program = DynamicGraph::from_steps(
        8,
        [
            TimedGraph::new(Graph::xor_matching(8, 0b010, |_| true), RationalAngle::new(1, 2)),
            TimedGraph::new(Graph::all_loops(8), RationalAngle::new(3, 2)),
        ],
    )
    .unwrap();
    for start in 0..8 {
        let psi = evolve_state(&program, &StateVector::basis(8, start)).unwrap();
        let (end, amp) = psi.amplitudes().iter().enumerate().max_by(|a, b| a.1.norm().total_cmp(&b.1.norm())).unwrap();
        println!("|{start:03b}⟩ -> {:.3}{:+.3}i |{end:03b}⟩", amp.re, amp.im);
    }
}
