//! Translating circuits into dynamic graphs.
//!
//! Every fragment uses matchings at π/2 for bit flips, loop sets for
//! diagonal phases, and hypercube walks for Hadamard layers.

mod circuit;

use thiserror::Error;

use crate::angle::RationalAngle;
use crate::graph_model::{DynamicGraph, Graph, TimedGraph};

pub use circuit::{
    circuit_unitary, gate_unitary, hadamard_unitary, qubit_bit, qubit_mask, Circuit, CircuitError, Gate,
    MAX_REFERENCE_QUBITS,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("phase for vertex {vertex} is {theta}, which is not below 2π")]
    PhaseOutOfRange { vertex: usize, theta: RationalAngle },
    #[error("phase schedule covers {found} vertices, expected {expected}")]
    ScheduleSize { expected: usize, found: usize },
}

/// Per-vertex loop durations; vertex `v` receives the phase `e^{-iθ_v}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseSchedule {
    thetas: Vec<RationalAngle>,
}

impl PhaseSchedule {
    pub fn new(thetas: Vec<RationalAngle>) -> Result<Self, CompileError> {
        if let Some((vertex, &theta)) = thetas.iter().enumerate().find(|(_, t)| **t >= RationalAngle::TWO_PI) {
            return Err(CompileError::PhaseOutOfRange { vertex, theta });
        }
        Ok(Self { thetas })
    }

    pub fn thetas(&self) -> &[RationalAngle] {
        &self.thetas
    }

    pub fn max(&self) -> RationalAngle {
        self.thetas.iter().copied().max().unwrap_or(RationalAngle::ZERO)
    }
}

/// Staircase emission of a phase schedule as loops-only graphs.
///
/// With distinct nonzero values `v₁ > … > v_k`, graph `i` loops every vertex
/// with `θ ≥ v_i` for `v_i − v_{i+1}`. The total time is `max θ`.
pub fn schedule_phases(ps: &PhaseSchedule, n_vertices: usize) -> Result<Vec<TimedGraph>, CompileError> {
    if ps.thetas.len() != n_vertices {
        return Err(CompileError::ScheduleSize { expected: n_vertices, found: ps.thetas.len() });
    }
    let mut levels: Vec<RationalAngle> = ps.thetas.iter().copied().filter(|t| !t.is_zero()).collect();
    levels.sort_unstable_by(|a, b| b.cmp(a));
    levels.dedup();
    let steps = levels
        .iter()
        .enumerate()
        .map(|(i, &level)| {
            let next = levels.get(i + 1).copied().unwrap_or(RationalAngle::ZERO);
            let loops = (0..n_vertices).filter(|&v| ps.thetas[v] >= level);
            let graph = Graph::loops_only(n_vertices, loops).expect("indices in range");
            TimedGraph::new(graph, level.checked_sub(next).expect("levels are descending"))
        })
        .collect();
    Ok(steps)
}

/// Pre/post phase schedule for a Hadamard layer on the bits of `mask`.
///
/// `θ_v = (β − h(v)·π/2) mod 2π`, `h` the Hamming weight of `v & mask`,
/// with β chosen from the quarter turns to minimise `max θ`.
pub fn hadamard_phase_schedule(n_vertices: usize, mask: usize) -> PhaseSchedule {
    let for_beta = |beta: RationalAngle| {
        let thetas = (0..n_vertices)
            .map(|v| {
                let h = i64::from((v & mask).count_ones());
                // β − hπ/2 ≡ β + 3hπ/2 (mod 2π)
                (beta + RationalAngle::new(3, 2).scale(h, 1)).rem(RationalAngle::TWO_PI)
            })
            .collect();
        PhaseSchedule { thetas }
    };
    (0..4).map(|k| for_beta(RationalAngle::new(k, 2))).min_by_key(PhaseSchedule::max).expect("four candidates")
}

/// Hadamard on every qubit in `qubits` via phases, a hypercube walk, and phases.
pub fn compile_hadamard_layer(qubits: &[usize], n_qubits: usize) -> Result<DynamicGraph, CompileError> {
    Circuit::new(n_qubits, vec![Gate::Hlayer { targets: qubits.to_vec() }])?;
    let n = 1usize << n_qubits;
    let mask = qubit_mask(n_qubits, qubits.iter().copied());
    let phases = schedule_phases(&hadamard_phase_schedule(n, mask), n)?;
    let walk_time = RationalAngle::new(qubits.len() as u32, 4);
    let walk = TimedGraph::new(Graph::hypercube(n, mask), walk_time);
    let steps = phases.iter().cloned().chain([walk]).chain(phases.iter().cloned());
    Ok(DynamicGraph::from_steps(n, steps).expect("uniform vertex count"))
}

/// Three-graph Hadamard on one qubit: loops on the qubit's 1-half for 3π/2,
/// its bit-flip matching for π/4, then the loops again. Total time 13π/4.
pub fn compile_hadamard_sequential(target: usize, n_qubits: usize) -> Result<DynamicGraph, CompileError> {
    Circuit::new(n_qubits, vec![Gate::H { target }])?;
    let n = 1usize << n_qubits;
    let b = qubit_bit(n_qubits, target);
    let loops = TimedGraph::new(
        Graph::loops_only(n, (0..n).filter(|v| v & b != 0)).expect("in range"),
        RationalAngle::new(3, 2),
    );
    let walk = TimedGraph::new(Graph::xor_matching(n, b, |_| true), RationalAngle::new(1, 4));
    Ok(DynamicGraph::from_steps(n, [loops.clone(), walk, loops]).expect("uniform vertex count"))
}

/// Fragment implementing one gate.
pub fn compile_gate(gate: &Gate, n_qubits: usize) -> Result<DynamicGraph, CompileError> {
    Circuit::new(n_qubits, vec![gate.clone()])?;
    let n = 1usize << n_qubits;
    let bit = |q: usize| qubit_bit(n_qubits, q);
    let set_loops = |b: usize| Graph::loops_only(n, (0..n).filter(|v| v & b != 0)).expect("in range");
    let half_pi = RationalAngle::new(1, 2);
    let steps: Vec<TimedGraph> = match gate {
        Gate::X { target } => vec![
            TimedGraph::new(Graph::xor_matching(n, bit(*target), |_| true), half_pi),
            TimedGraph::new(Graph::all_loops(n), RationalAngle::new(3, 2)),
        ],
        Gate::Y { target } => vec![
            TimedGraph::new(Graph::xor_matching(n, bit(*target), |_| true), half_pi),
            TimedGraph::new(set_loops(bit(*target)), RationalAngle::PI),
        ],
        Gate::Z { target } => vec![TimedGraph::new(set_loops(bit(*target)), RationalAngle::PI)],
        Gate::S { target } => vec![TimedGraph::new(set_loops(bit(*target)), RationalAngle::new(3, 2))],
        Gate::T { target } => vec![TimedGraph::new(set_loops(bit(*target)), RationalAngle::new(7, 4))],
        Gate::Phase { target, theta } => {
            let duration = RationalAngle::TWO_PI
                .checked_sub(theta.rem(RationalAngle::TWO_PI))
                .expect("reduced angle is below 2π")
                .rem(RationalAngle::TWO_PI);
            if duration.is_zero() {
                vec![]
            } else {
                vec![TimedGraph::new(set_loops(bit(*target)), duration)]
            }
        }
        Gate::Cnot { control, target } => {
            let cb = bit(*control);
            vec![
                TimedGraph::new(Graph::xor_matching(n, bit(*target), |v| v & cb != 0), half_pi),
                TimedGraph::new(set_loops(cb), RationalAngle::new(3, 2)),
            ]
        }
        Gate::H { target } => return compile_hadamard_layer(&[*target], n_qubits),
        Gate::Hlayer { targets } => return compile_hadamard_layer(targets, n_qubits),
    };
    Ok(DynamicGraph::from_steps(n, steps).expect("uniform vertex count"))
}

/// Options for [`compile_circuit`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CompileOptions {
    /// Fuse runs of adjacent single-qubit H gates on distinct qubits into one layer.
    pub parallel_hadamards: bool,
    /// Compile lone H gates with [`compile_hadamard_sequential`] instead of the hypercube form.
    pub sequential_hadamards: bool,
}

/// Concatenates the fragments of every gate in order.
pub fn compile_circuit(c: &Circuit, opts: CompileOptions) -> Result<DynamicGraph, CompileError> {
    let mut program = DynamicGraph::new(c.n_vertices());
    let gates = c.gates();
    let mut i = 0;
    while i < gates.len() {
        if let (true, Gate::H { target }) = (opts.sequential_hadamards, &gates[i]) {
            program.extend(&compile_hadamard_sequential(*target, c.n_qubits())?).expect("same size");
            i += 1;
            continue;
        }
        if let (true, Gate::H { target }) = (opts.parallel_hadamards, &gates[i]) {
            let mut layer = vec![*target];
            let mut j = i + 1;
            while let Some(Gate::H { target }) = gates.get(j) {
                if layer.contains(target) {
                    break;
                }
                layer.push(*target);
                j += 1;
            }
            program.extend(&compile_hadamard_layer(&layer, c.n_qubits())?).expect("same size");
            i = j;
            continue;
        }
        program.extend(&compile_gate(&gates[i], c.n_qubits())?).expect("same size");
        i += 1;
    }
    Ok(program)
}
