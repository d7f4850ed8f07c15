//! Gate-level circuits and their reference unitaries.
//!
//! Qubit 0 is the most significant bit of a vertex label: on three qubits,
//! qubit 0 is the left digit of `|q0 q1 q2⟩`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angle::RationalAngle;
use crate::numerics::{ComplexMatrix, C64};
use crate::walk_engine::product_of;

/// Largest register handled by the dense reference simulator.
pub const MAX_REFERENCE_QUBITS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("a circuit needs at least one qubit")]
    NoQubits,
    #[error("register of {0} qubits is too large")]
    TooManyQubits(usize),
    #[error("gate {gate}: qubit {qubit} out of range for {n_qubits} qubits")]
    QubitOutOfRange { gate: usize, qubit: usize, n_qubits: usize },
    #[error("gate {0}: control and target must differ")]
    ControlIsTarget(usize),
    #[error("gate {0}: Hadamard layer needs at least one target")]
    EmptyLayer(usize),
    #[error("gate {gate}: qubit {qubit} listed twice")]
    DuplicateTarget { gate: usize, qubit: usize },
    #[error("invalid circuit JSON: {0}")]
    Json(String),
}

/// One gate of a circuit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "UPPERCASE", deny_unknown_fields)]
pub enum Gate {
    X {
        target: usize,
    },
    Y {
        target: usize,
    },
    Z {
        target: usize,
    },
    S {
        target: usize,
    },
    T {
        target: usize,
    },
    /// `diag(1, e^{iθ})` on the target.
    Phase {
        target: usize,
        theta: RationalAngle,
    },
    H {
        target: usize,
    },
    Cnot {
        control: usize,
        target: usize,
    },
    /// Hadamard on every listed qubit at once.
    Hlayer {
        targets: Vec<usize>,
    },
}

impl Gate {
    /// Qubits the gate acts on.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::X { target }
            | Gate::Y { target }
            | Gate::Z { target }
            | Gate::S { target }
            | Gate::T { target }
            | Gate::Phase { target, .. }
            | Gate::H { target } => vec![*target],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Hlayer { targets } => targets.clone(),
        }
    }
}

/// An ordered gate list on `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        let c = Self { n_qubits, gates };
        c.validate()?;
        Ok(c)
    }

    pub fn from_json(text: &str) -> Result<Self, CircuitError> {
        let c: Self = serde_json::from_str(text).map_err(|e| CircuitError::Json(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuits always serialize")
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_vertices(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    fn validate(&self) -> Result<(), CircuitError> {
        if self.n_qubits == 0 {
            return Err(CircuitError::NoQubits);
        }
        if self.n_qubits > 20 {
            return Err(CircuitError::TooManyQubits(self.n_qubits));
        }
        for (i, gate) in self.gates.iter().enumerate() {
            let qubits = gate.qubits();
            if matches!(gate, Gate::Hlayer { .. }) && qubits.is_empty() {
                return Err(CircuitError::EmptyLayer(i));
            }
            let mut seen = BTreeSet::new();
            for &q in &qubits {
                if q >= self.n_qubits {
                    return Err(CircuitError::QubitOutOfRange { gate: i, qubit: q, n_qubits: self.n_qubits });
                }
                if !seen.insert(q) {
                    return Err(match gate {
                        Gate::Cnot { .. } => CircuitError::ControlIsTarget(i),
                        _ => CircuitError::DuplicateTarget { gate: i, qubit: q },
                    });
                }
            }
        }
        Ok(())
    }
}

/// Vertex-label bit carrying qubit `q`.
pub fn qubit_bit(n_qubits: usize, q: usize) -> usize {
    debug_assert!(q < n_qubits);
    1 << (n_qubits - 1 - q)
}

/// Bit mask covering the given qubits.
pub fn qubit_mask(n_qubits: usize, qubits: impl IntoIterator<Item = usize>) -> usize {
    qubits.into_iter().fold(0, |m, q| m | qubit_bit(n_qubits, q))
}

/// Textbook unitary of one gate placed in an `n_qubits` register.
pub fn gate_unitary(gate: &Gate, n_qubits: usize) -> ComplexMatrix {
    let dim = 1usize << n_qubits;
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let bit = |q: usize| qubit_bit(n_qubits, q);
    let diagonal = |b: usize, phase: C64| {
        ComplexMatrix::from_fn(dim, |r, c| match (r == c, r & b != 0) {
            (true, true) => phase,
            (true, false) => one,
            _ => zero,
        })
    };
    match gate {
        Gate::X { target } => {
            let b = bit(*target);
            ComplexMatrix::from_fn(dim, |r, c| if r == c ^ b { one } else { zero })
        }
        Gate::Y { target } => {
            let b = bit(*target);
            ComplexMatrix::from_fn(dim, |r, c| match (r == c ^ b, c & b == 0) {
                (true, true) => C64::new(0.0, 1.0),
                (true, false) => C64::new(0.0, -1.0),
                _ => zero,
            })
        }
        Gate::Z { target } => diagonal(bit(*target), -one),
        Gate::S { target } => diagonal(bit(*target), C64::new(0.0, 1.0)),
        Gate::T { target } => diagonal(bit(*target), C64::from_polar(1.0, std::f64::consts::FRAC_PI_4)),
        Gate::Phase { target, theta } => diagonal(bit(*target), C64::from_polar(1.0, theta.radians())),
        Gate::Cnot { control, target } => {
            let (cb, tb) = (bit(*control), bit(*target));
            ComplexMatrix::from_fn(dim, |r, c| {
                let image = if c & cb != 0 { c ^ tb } else { c };
                if r == image {
                    one
                } else {
                    zero
                }
            })
        }
        Gate::H { target } => hadamard_unitary(n_qubits, bit(*target)),
        Gate::Hlayer { targets } => hadamard_unitary(n_qubits, qubit_mask(n_qubits, targets.iter().copied())),
    }
}

/// `H` on every qubit whose bit is in `mask`, identity elsewhere.
pub fn hadamard_unitary(n_qubits: usize, mask: usize) -> ComplexMatrix {
    let dim = 1usize << n_qubits;
    let amp = (0.5f64).sqrt().powi(mask.count_ones() as i32);
    ComplexMatrix::from_fn(dim, |r, c| {
        if (r & !mask) != (c & !mask) {
            return C64::new(0.0, 0.0);
        }
        let sign = if (r & c & mask).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
        C64::new(sign * amp, 0.0)
    })
}

/// Product of the gate unitaries in circuit order.
///
/// Panics for registers above [`MAX_REFERENCE_QUBITS`].
pub fn circuit_unitary(c: &Circuit) -> ComplexMatrix {
    assert!(c.n_qubits() <= MAX_REFERENCE_QUBITS, "reference simulation is limited to 10 qubits");
    product_of(c.gates().iter().map(|g| gate_unitary(g, c.n_qubits())), c.n_vertices())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let text = r#"{"n_qubits": 3, "gates": [{"kind": "H", "target": 0}, {"kind": "CNOT", "control": 0, "target": 1},
            {"kind": "PHASE", "target": 2, "theta": {"pi_num": 1, "pi_den": 4}}, {"kind": "HLAYER", "targets": [0, 2]}]}"#;
        let c = Circuit::from_json(text).unwrap();
        assert_eq!(c.gates().len(), 4);
        assert_eq!(c.gates()[1], Gate::Cnot { control: 0, target: 1 });
        assert_eq!(Circuit::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn invalid_circuits_are_rejected() {
        assert_eq!(
            Circuit::new(2, vec![Gate::X { target: 2 }]),
            Err(CircuitError::QubitOutOfRange { gate: 0, qubit: 2, n_qubits: 2 })
        );
        assert_eq!(Circuit::new(2, vec![Gate::Cnot { control: 1, target: 1 }]), Err(CircuitError::ControlIsTarget(0)));
        assert_eq!(Circuit::new(2, vec![Gate::Hlayer { targets: vec![] }]), Err(CircuitError::EmptyLayer(0)));
        assert!(Circuit::from_json(r#"{"n_qubits": 1, "gates": [{"kind": "SWAP", "target": 0}]}"#).is_err());
    }

    #[test]
    fn reference_unitaries() {
        let x1 = circuit_unitary(&Circuit::new(3, vec![Gate::X { target: 1 }]).unwrap());
        for v in 0..8 {
            assert_eq!(x1[(v ^ 0b010, v)], C64::new(1.0, 0.0));
        }
        let hh = circuit_unitary(&Circuit::new(2, vec![Gate::H { target: 0 }, Gate::H { target: 1 }]).unwrap());
        for r in 0..4usize {
            for c in 0..4usize {
                let sign = if (r & c).count_ones() % 2 == 0 { 0.5 } else { -0.5 };
                assert!((hh[(r, c)] - C64::new(sign, 0.0)).norm() < 1e-15);
            }
        }
        let cx = circuit_unitary(&Circuit::new(2, vec![Gate::Cnot { control: 0, target: 1 }]).unwrap());
        let image = [0, 1, 3, 2];
        for (c, &r) in image.iter().enumerate() {
            assert_eq!(cx[(r, c)], C64::new(1.0, 0.0));
        }
    }
}
