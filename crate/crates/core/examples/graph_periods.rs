//! Spectral norms and periods of small graph families.

use dqwalk::graph_model::{Graph, Period};

fn main() {
    let families = [
        ("single edge P2", Graph::new(2, [(0, 1)], []).unwrap()),
        ("path P3", Graph::new(3, [(0, 1), (1, 2)], []).unwrap()),
        ("path P4", Graph::new(4, [(0, 1), (1, 2), (2, 3)], []).unwrap()),
        ("cycle C4", Graph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)], []).unwrap()),
        ("3-cube", Graph::hypercube(8, 0b111)),
        ("all loops", Graph::all_loops(4)),
        ("no edges", Graph::empty(4)),
    ];
    for (name, g) in families {
        let period = match g.period() {
            Period::Finite(t) => t.to_string(),
            Period::Infinite => "none".to_string(),
        };
        println!("{name:>15}: norm {:.4}, period {period}", g.spectral_norm());
    }
}
