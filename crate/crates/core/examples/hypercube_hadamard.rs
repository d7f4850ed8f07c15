//! Uniform mixing on the n-cube and the cost of parallel Hadamard layers.

use dqwalk::gate_compiler::{compile_hadamard_layer, hadamard_unitary};
use dqwalk::graph_model::{DynamicGraph, Graph, RationalAngle, TimedGraph};
use dqwalk::numerics::{phase_distance, StateVector};
use dqwalk::walk_engine::{evolve_state, total_unitary};

fn main() {
    for n in 1..=6usize {
        let dim = 1 << n;
        let walk = DynamicGraph::from_steps(
            dim,
            [TimedGraph::new(Graph::hypercube(dim, dim - 1), RationalAngle::new(n as u32, 4))],
        )
        .unwrap();
        let probs = evolve_state(&walk, &StateVector::basis(dim, 0)).unwrap().probabilities();
        let spread = probs.iter().fold(0.0f64, |m, p| m.max((p - 1.0 / dim as f64).abs()));
        let qubits: Vec<usize> = (0..n).collect();
        let layer = compile_hadamard_layer(&qubits, n).unwrap();
        let d = phase_distance(&total_unitary(&layer), &hadamard_unitary(n, dim - 1)).unwrap();
        println!(
            "n={n}: mixing error {spread:.1e}; layer {} graphs {} vs sequential {}; distance {d:.1e}",
            layer.len(),
            layer.total_time(),
            RationalAngle::new(13 * n as u32, 4)
        );
    }
}
