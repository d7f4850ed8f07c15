//! Random programs with one planted rewrite opportunity.

use std::collections::HashSet;

use dqwalk::gate_compiler::compile_hadamard_sequential;
use dqwalk::graph_model::{DynamicGraph, Graph, Period, RationalAngle, TimedGraph};
use dqwalk::numerics::{phase_distance, ComplexMatrix};
use dqwalk::rewrite_optimizer::{optimize, optimize_traced, OptimizerConfig};
use dqwalk::tolerance::EQUIVALENCE;
use dqwalk::walk_engine::{step_unitary, total_unitary};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

/// The opportunity planted in a program.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plant {
    Duplicate,
    Commuting,
    PstPair,
    Complementary,
    DiagonalRun,
    SequentialHadamard,
    OverPeriod,
    ZeroTime,
}

impl Plant {
    pub const ALL: [Plant; 8] = [
        Plant::Duplicate,
        Plant::Commuting,
        Plant::PstPair,
        Plant::Complementary,
        Plant::DiagonalRun,
        Plant::SequentialHadamard,
        Plant::OverPeriod,
        Plant::ZeroTime,
    ];

    /// Whether the planted pattern alone admits a cost-lowering rewrite.
    pub fn is_strict(self) -> bool {
        matches!(
            self,
            Plant::Duplicate | Plant::Complementary | Plant::SequentialHadamard | Plant::OverPeriod | Plant::ZeroTime
        )
    }
}

/// A planted program and what was planted.
#[derive(Debug, Clone)]
pub struct Planted {
    pub n_qubits: usize,
    pub plant: Plant,
    pub program: DynamicGraph,
}

fn quarter_turns(rng: &mut StdRng, lo: u32, hi: u32) -> RationalAngle {
    RationalAngle::new(rng.gen_range(lo..=hi), 4)
}

fn random_subset(rng: &mut StdRng, n: usize) -> Vec<usize> {
    let mut s: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    if s.is_empty() {
        s.push(rng.gen_range(0..n));
    }
    s
}

fn random_mask(rng: &mut StdRng, n_qubits: usize) -> usize {
    rng.gen_range(1..1usize << n_qubits)
}

/// A graph from one of the families the compiler emits, or an arbitrary sparse graph.
pub fn random_graph(rng: &mut StdRng, n_qubits: usize) -> Graph {
    let n = 1 << n_qubits;
    match rng.gen_range(0..5) {
        0 => Graph::loops_only(n, random_subset(rng, n)).unwrap(),
        1 => Graph::xor_matching(n, random_mask(rng, n_qubits), |_| true),
        2 => {
            let mask = 1 << rng.gen_range(0..n_qubits);
            let control = 1 << rng.gen_range(0..n_qubits);
            Graph::xor_matching(n, mask, |v| v & control != 0)
        }
        3 => Graph::hypercube(n, random_mask(rng, n_qubits)),
        _ => {
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(1.5 / n as f64) {
                        edges.push((i, j));
                    }
                }
            }
            let loops: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.2)).collect();
            Graph::new(n, edges, loops).unwrap()
        }
    }
}

fn plant_steps(rng: &mut StdRng, plant: Plant, n_qubits: usize) -> Vec<TimedGraph> {
    let n = 1 << n_qubits;
    let step = |g: Graph, t: RationalAngle| TimedGraph::new(g, t);
    match plant {
        Plant::Duplicate => {
            let g = random_graph(rng, n_qubits);
            vec![step(g.clone(), quarter_turns(rng, 1, 7)), step(g, quarter_turns(rng, 1, 7))]
        }
        Plant::Commuting => {
            let mask = random_mask(rng, n_qubits);
            vec![
                step(Graph::xor_matching(n, mask, |_| true), quarter_turns(rng, 1, 7)),
                step(Graph::all_loops(n), quarter_turns(rng, 1, 7)),
            ]
        }
        Plant::PstPair => {
            let a = random_mask(rng, n_qubits);
            let b = loop {
                let b = random_mask(rng, n_qubits);
                if b != a {
                    break b;
                }
            };
            let half = RationalAngle::new(1, 2);
            vec![step(Graph::xor_matching(n, a, |_| true), half), step(Graph::xor_matching(n, b, |_| true), half)]
        }
        Plant::Complementary => {
            let mut vs: Vec<usize> = (0..n).collect();
            vs.shuffle(rng);
            let t1 = rng.gen_range(1..=6u32);
            let t2 = rng.gen_range(t1 + 1..=7);
            vec![
                step(Graph::loops_only(n, [vs[0]]).unwrap(), RationalAngle::new(t1, 4)),
                step(Graph::loops_only(n, [vs[1]]).unwrap(), RationalAngle::new(t2, 4)),
            ]
        }
        Plant::DiagonalRun => vec![
            step(Graph::loops_only(n, random_subset(rng, n)).unwrap(), quarter_turns(rng, 1, 7)),
            step(Graph::loops_only(n, random_subset(rng, n)).unwrap(), quarter_turns(rng, 1, 7)),
        ],
        Plant::SequentialHadamard => {
            compile_hadamard_sequential(rng.gen_range(0..n_qubits), n_qubits).unwrap().steps().to_vec()
        }
        Plant::OverPeriod => {
            let t = quarter_turns(rng, 1, 7);
            vec![step(Graph::loops_only(n, random_subset(rng, n)).unwrap(), t + RationalAngle::TWO_PI)]
        }
        Plant::ZeroTime => vec![step(random_graph(rng, n_qubits), RationalAngle::ZERO)],
    }
}

/// A program of 1 to 8 steps on 2 to 4 qubits with durations in multiples of π/4.
pub fn planted_program(rng: &mut StdRng, plant: Plant) -> Planted {
    let n_qubits = rng.gen_range(2..=4);
    let planted = plant_steps(rng, plant, n_qubits);
    let extra = rng.gen_range(0..=8 - planted.len());
    let mut steps: Vec<TimedGraph> =
        (0..extra).map(|_| TimedGraph::new(random_graph(rng, n_qubits), quarter_turns(rng, 1, 8))).collect();
    let at = rng.gen_range(0..=steps.len());
    steps.splice(at..at, planted);
    let program = DynamicGraph::from_steps(1 << n_qubits, steps).unwrap();
    Planted { n_qubits, plant, program }
}

/// What one property check covered.
#[derive(Debug, Clone, Default)]
pub struct Checked {
    pub rewrites: usize,
    pub periods_checked: usize,
    pub improved: bool,
}

fn cost(dg: &DynamicGraph) -> (RationalAngle, usize) {
    (dg.total_time(), dg.len())
}

/// Runs the optimizer on `p` and checks every accepted rewrite, termination and the period identity.
pub fn check_planted(p: &Planted) -> Result<Checked, String> {
    let original = total_unitary(&p.program);
    let (out, report, trace) = optimize_traced(&p.program, &OptimizerConfig::default());
    if !report.diagnostics.is_empty() {
        return Err(format!("driver diagnostics: {:?}", report.diagnostics));
    }
    if trace.len() != report.steps.len() {
        return Err(format!("{} programs traced for {} rewrites", trace.len(), report.steps.len()));
    }
    let mut seen: HashSet<Graph> = HashSet::new();
    let mut periods_checked = 0;
    let mut prev = p.program.clone();
    for (k, next) in std::iter::once(&p.program).chain(&trace).enumerate() {
        let d = phase_distance(&original, &total_unitary(next)).unwrap();
        if d >= EQUIVALENCE {
            return Err(format!("rewrite {k} changed the unitary: distance {d:e}"));
        }
        let ((t0, c0), (t1, c1)) = (cost(&prev), cost(next));
        if t1 > t0 || c1 > c0 {
            return Err(format!("rewrite {k} raised the cost: ({t0}, {c0}) to ({t1}, {c1})"));
        }
        if k > 0 {
            let s = &report.steps[k - 1];
            if s.time_saved != t0.checked_sub(t1).unwrap() || s.graph_delta != c1 as i64 - c0 as i64 {
                return Err(format!("rewrite {k} misreported: {s:?}"));
            }
        }
        for step in next.steps() {
            if !seen.insert(step.graph.clone()) {
                continue;
            }
            if let Period::Finite(t) = step.graph.period() {
                if !t.is_zero() {
                    let u = step_unitary(&TimedGraph::new(step.graph.clone(), t));
                    let d = u.max_abs_diff(&ComplexMatrix::identity(u.dim())).unwrap();
                    if d >= EQUIVALENCE {
                        return Err(format!("U(T) differs from I by {d:e} at period {t}"));
                    }
                    periods_checked += 1;
                }
            }
        }
        prev = next.clone();
    }
    if out != prev {
        return Err("returned program differs from the last traced one".into());
    }
    let (again, rerun) = optimize(&out, &OptimizerConfig::default());
    if !rerun.steps.is_empty() || again != out {
        return Err(format!("output is not a fixpoint: {} more rewrites", rerun.steps.len()));
    }
    let ((t0, c0), (t1, c1)) = (cost(&p.program), cost(&out));
    let improved = (t1, c1) != (t0, c0);
    if p.plant.is_strict() && !improved {
        return Err(format!("planted {:?} left the cost at ({t0}, {c0})", p.plant));
    }
    Ok(Checked { rewrites: report.steps.len(), periods_checked, improved })
}
