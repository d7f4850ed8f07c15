//! Acceptance criteria 1 to 10, one PASS/FAIL line each.
//!
//! Exits nonzero when a criterion outside `UNATTAINABLE` fails.

mod support;

use dqwalk::cli;
use dqwalk::gate_compiler::{
    compile_hadamard_layer, compile_hadamard_sequential, gate_unitary, hadamard_unitary, Gate,
};
use dqwalk::graph_model::{parse_dynamic_graph, DynamicGraph, Graph, RationalAngle, TimedGraph};
use dqwalk::numerics::{phase_distance, StateVector, C64};
use dqwalk::rewrite_optimizer::{optimize, pass_hypercube_hadamard, pass_merge_complementary, OptimizerConfig};
use dqwalk::tolerance::EQUIVALENCE;
use dqwalk::walk_engine::catalog::{recover_from_trace, spans_to_program, RecoveredSpan};
use dqwalk::walk_engine::{evolve_state, total_unitary};
use rand::rngs::StdRng;
use rand::SeedableRng;
use support::planted::{check_planted, planted_program, Plant};

/// Criteria whose printed inputs are internally inconsistent; see the decisions ledger.
const UNATTAINABLE: &[u32] = &[8];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn fixture(name: &str) -> DynamicGraph {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_dynamic_graph(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn criterion_1() -> Outcome {
    let u = total_unitary(&fixture("middle_flip.json"));
    let expected = gate_unitary(&Gate::X { target: 1 }, 3);
    let d = u.max_abs_diff(&expected).unwrap();
    outcome(d < EQUIVALENCE, format!("entrywise difference from I⊗X⊗I is {d:.2e}"))
}

fn criterion_2() -> Outcome {
    let dg = fixture("xx_sequential.json");
    let (out, report) = optimize(&dg, &OptimizerConfig::default());
    let pass = dg.len() == 4
        && dg.total_time() == RationalAngle::new(4, 1)
        && out.len() <= 2
        && out.total_time() == RationalAngle::TWO_PI
        && report.final_distance < EQUIVALENCE;
    outcome(
        pass,
        format!(
            "{} graphs {} to {} graphs {}, distance {:.2e}",
            dg.len(),
            dg.total_time(),
            out.len(),
            out.total_time(),
            report.final_distance
        ),
    )
}

fn criterion_3() -> Outcome {
    let step = |loops: &[usize], t| TimedGraph::new(Graph::loops_only(2, loops.iter().copied()).unwrap(), t);
    let tail =
        DynamicGraph::from_steps(2, [step(&[0], RationalAngle::new(1, 2)), step(&[1], RationalAngle::new(1, 1))])
            .unwrap();
    let expected = vec![step(&[0, 1], RationalAngle::new(1, 2)), step(&[1], RationalAngle::new(1, 2))];
    match pass_merge_complementary(&tail, 0) {
        Ok(out) => {
            let saved = tail.total_time().checked_sub(out.total_time());
            let pass = out.steps() == expected.as_slice() && saved == Some(RationalAngle::new(1, 2));
            let three_qubit_total = RationalAngle::new(13, 4).checked_sub(RationalAngle::new(1, 2)).unwrap();
            outcome(pass, format!("saved {}, so 13π/4 becomes {}", saved.unwrap_or_default(), three_qubit_total))
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn criterion_4() -> Outcome {
    let dg = fixture("yz.json");
    let (out, report) = optimize(&dg, &OptimizerConfig::default());
    let y_z = gate_unitary(&Gate::Y { target: 0 }, 2).matmul(&gate_unitary(&Gate::Z { target: 1 }, 2)).unwrap();
    let gate_distance = phase_distance(&total_unitary(&dg), &y_z).unwrap();
    let pass = out.len() == 2
        && out.total_time() == RationalAngle::new(3, 2)
        && report.final_distance < EQUIVALENCE
        && gate_distance < EQUIVALENCE;
    outcome(
        pass,
        format!(
            "{} graphs {} to {} graphs {}, distance {:.2e}, input equals Y⊗Z within {:.2e}",
            dg.len(),
            dg.total_time(),
            out.len(),
            out.total_time(),
            report.final_distance,
            gate_distance
        ),
    )
}

fn criterion_5() -> Outcome {
    let layer = compile_hadamard_layer(&[0, 1], 2).unwrap();
    let hh = hadamard_unitary(2, 0b11);
    let d_layer = phase_distance(&total_unitary(&layer), &hh).unwrap();
    let mut sequential = compile_hadamard_sequential(0, 2).unwrap();
    sequential.extend(&compile_hadamard_sequential(1, 2).unwrap()).unwrap();
    let bound = RationalAngle::new(5, 2);
    let replaced = pass_hypercube_hadamard(&sequential, 0..=sequential.len() - 1);
    let (pass_r, detail_r) = match &replaced {
        Ok(r) => {
            let d = phase_distance(&total_unitary(r), &hh).unwrap();
            (
                r.len() <= 5 && r.total_time() <= bound && d < EQUIVALENCE,
                format!(
                    "{} graphs {} to {} graphs {}",
                    sequential.len(),
                    sequential.total_time(),
                    r.len(),
                    r.total_time()
                ),
            )
        }
        Err(e) => (false, e.to_string()),
    };
    let pass = layer.len() <= 5
        && layer.total_time() <= bound
        && d_layer < EQUIVALENCE
        && sequential.len() == 6
        && sequential.total_time() == RationalAngle::new(13, 2)
        && pass_r;
    outcome(
        pass,
        format!("layer {} graphs {}, distance {d_layer:.2e}; replacement {detail_r}", layer.len(), layer.total_time()),
    )
}

fn criterion_6() -> Outcome {
    let mut worst_uniform: f64 = 0.0;
    let mut worst_law: f64 = 0.0;
    for n in 1..=4usize {
        let dim = 1 << n;
        let cube = Graph::hypercube(dim, dim - 1);
        let start = StateVector::basis(dim, 0);
        let walk = |t: RationalAngle| {
            let dg = DynamicGraph::from_steps(dim, [TimedGraph::new(cube.clone(), t)]).unwrap();
            evolve_state(&dg, &start).unwrap()
        };
        let psi = walk(RationalAngle::new(n as u32, 4));
        for p in psi.probabilities() {
            worst_uniform = worst_uniform.max((p - 0.5f64.powi(n as i32)).abs());
        }
        for j in 0..=16 * n as u32 {
            let t = RationalAngle::new(j, 8);
            let psi = walk(t);
            let (s, c) = (t.radians() / n as f64).sin_cos();
            for (x, amp) in psi.amplitudes().iter().enumerate() {
                let h = x.count_ones() as i32;
                let law = C64::new(0.0, -1.0).powi(h) * s.powi(h) * c.powi(n as i32 - h);
                worst_law = worst_law.max((amp - law).norm());
            }
        }
    }
    outcome(
        worst_uniform < 1e-10 && worst_law < EQUIVALENCE,
        format!("uniformity error {worst_uniform:.2e}, amplitude law error {worst_law:.2e} for n = 1..4"),
    )
}

fn criterion_7() -> Outcome {
    let n = 6;
    let qubits: Vec<usize> = (0..n).collect();
    let layer = compile_hadamard_layer(&qubits, n).unwrap();
    let walks: Vec<usize> = (0..layer.len()).filter(|&k| !layer.steps()[k].graph.is_loops_only()).collect();
    let (before, after) = match walks.as_slice() {
        [w] => (*w, layer.len() - w - 1),
        _ => (usize::MAX, usize::MAX),
    };
    let bound = RationalAngle::new(3, 1) + RationalAngle::new(6, 4);
    let d = phase_distance(&total_unitary(&layer), &hadamard_unitary(n, (1 << n) - 1)).unwrap();
    let pass = walks.len() == 1 && before <= 3 && after <= 3 && layer.total_time() <= bound && d < 1e-8;
    let sequential = RationalAngle::new(13 * n as u32, 4);
    outcome(
        pass,
        format!(
            "{} walk graph, {before} + {after} phase graphs, {} (bound {bound}, sequential {sequential}), distance {d:.2e}",
            walks.len(),
            layer.total_time()
        ),
    )
}

fn criterion_8() -> Outcome {
    let a = support::parse_trace(support::SEQUENTIAL_TRACE, 8);
    let d = support::parse_trace(support::REDUCED_TRACE, 8);
    let (fa, fd) = (a.last().unwrap(), d.last().unwrap());
    let diff = fa.max_abs_diff(fd).unwrap();
    let rows: Vec<String> = (0..8)
        .filter(|&r| (0..8).any(|c| (fa[(r, c)] - fd[(r, c)]).norm() >= 1e-12))
        .map(|r| format!("|{r:03b}⟩"))
        .collect();
    let negated = rows.len() == 1 && {
        let r = usize::from_str_radix(&rows[0][1..4], 2).unwrap();
        (0..8).all(|c| (fa[(r, c)] + fd[(r, c)]).norm() < 1e-12)
    };
    outcome(
        diff < 1e-12,
        format!(
            "final maps differ by {diff:.2e} on rows [{}]{}",
            rows.join(", "),
            if negated { ", which are exact negations" } else { "" }
        ),
    )
}

fn criterion_9() -> Outcome {
    let maps = support::parse_trace(support::SEQUENTIAL_TRACE, 8);
    let spans = recover_from_trace(&maps);
    let opaque = spans.iter().filter(|s| matches!(s, RecoveredSpan::Opaque { .. })).count();
    let Some(program) = spans_to_program(8, &spans) else {
        return outcome(false, format!("{opaque} arrows have no catalog graph"));
    };
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sequential.json");
    std::fs::write(&path, dqwalk::graph_model::serialize_dynamic_graph(&program)).unwrap();
    let stats = cli::cmd_stats(&path);
    let stats_json = stats.json.unwrap();
    let stats_ok = stats.exit_code == 0
        && stats_json["graphs"] == 16
        && stats_json["total_time"] == serde_json::json!({"pi_num": 67, "pi_den": 4})
        && stats.summary.contains("67π/4");
    let (out, report) = optimize(&program, &OptimizerConfig::default());
    let pass = stats_ok
        && out.total_time() <= RationalAngle::new(21, 4)
        && out.len() <= 14
        && report.final_distance < EQUIVALENCE;
    outcome(
        pass,
        format!(
            "recovered {} graphs {}, optimized to {} graphs {}, distance {:.2e}",
            program.len(),
            program.total_time(),
            out.len(),
            out.total_time(),
            report.final_distance
        ),
    )
}

fn criterion_10() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2024);
    let cases = 200;
    let (mut rewrites, mut periods, mut improved) = (0, 0, 0);
    for k in 0..cases {
        let plant = Plant::ALL[k % Plant::ALL.len()];
        let p = planted_program(&mut rng, plant);
        match check_planted(&p) {
            Ok(c) => {
                rewrites += c.rewrites;
                periods += c.periods_checked;
                improved += usize::from(c.improved);
            }
            Err(e) => return outcome(false, format!("case {k} ({plant:?}): {e}")),
        }
    }
    outcome(
        true,
        format!("{cases} programs, {rewrites} rewrites checked, {improved} improved, {periods} period identities"),
    )
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut unexpected = Vec::new();
    for (id, run) in criteria {
        let o = run();
        println!("criterion {id}: {}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass && !UNATTAINABLE.contains(&id) {
            unexpected.push(id);
        }
    }
    for id in UNATTAINABLE {
        println!("criterion {id} is recorded as unattainable from the printed inputs");
    }
    if !unexpected.is_empty() {
        eprintln!("failing criteria: {unexpected:?}");
        std::process::exit(1);
    }
}
