//! Compiles a three-qubit circuit with each Hadamard form and checks it against the gate product.

use dqwalk::gate_compiler::{circuit_unitary, compile_circuit, Circuit, CompileOptions};
use dqwalk::numerics::phase_distance;
use dqwalk::walk_engine::total_unitary;

const CIRCUIT: &str = r#"{"n_qubits": 3, "gates": [
    {"kind": "H", "target": 0}, {"kind": "X", "target": 1}, {"kind": "H", "target": 2},
    {"kind": "CNOT", "control": 0, "target": 1},
    {"kind": "Y", "target": 0}, {"kind": "T", "target": 1}, {"kind": "Z", "target": 2},
    {"kind": "CNOT", "control": 2, "target": 1}]}"#;

fn main() {
    let circuit = Circuit::from_json(CIRCUIT).unwrap();
    let reference = circuit_unitary(&circuit);
    for (name, opts) in [
        ("sequential H", CompileOptions { sequential_hadamards: true, ..Default::default() }),
        ("hypercube H", CompileOptions::default()),
        ("parallel H layers", CompileOptions { parallel_hadamards: true, ..Default::default() }),
    ] {
        let program = compile_circuit(&circuit, opts).unwrap();
        let d = phase_distance(&total_unitary(&program), &reference).unwrap();
        println!("{name:>18}: {:2} graphs, {:>6}, distance {d:.1e}", program.len(), program.total_time().to_string());
    }
}
