//! Recovering timed graphs from observed step unitaries.
//!
//! The catalog covers loop sets, matchings (with optional looped singletons)
//! and hypercube walks over any subset of address bits, each at durations
//! that are multiples of π/4.

use std::ops::Range;

use crate::angle::RationalAngle;
use crate::graph_model::{DynamicGraph, Graph, TimedGraph};
use crate::numerics::{ComplexMatrix, C64};
use crate::tolerance;

use super::step_unitary;

const QUARTER_STEPS: u32 = 8;

/// Finds a catalog step whose unitary equals `u` entrywise.
pub fn identify_step(u: &ComplexMatrix) -> Option<TimedGraph> {
    let tol = tolerance::CLASSIFICATION;
    if u.is_diagonal(tol) {
        return identify_diagonal(u);
    }
    identify_matching(u).or_else(|| identify_hypercube(u))
}

fn matches(tg: &TimedGraph, u: &ComplexMatrix) -> bool {
    step_unitary(tg).max_abs_diff(u).is_ok_and(|d| d <= tolerance::CLASSIFICATION)
}

fn identify_diagonal(u: &ComplexMatrix) -> Option<TimedGraph> {
    let n = u.dim();
    let one = C64::new(1.0, 0.0);
    let moved: Vec<usize> = (0..n).filter(|&v| (u[(v, v)] - one).norm() > tolerance::CLASSIFICATION).collect();
    let Some(&first) = moved.first() else {
        return Some(TimedGraph::new(Graph::empty(n), RationalAngle::ZERO));
    };
    let theta = RationalAngle::from_unit_phase(u[(first, first)], 4, tolerance::CLASSIFICATION)?;
    let tg = TimedGraph::new(Graph::loops_only(n, moved).ok()?, theta);
    matches(&tg, u).then_some(tg)
}

fn identify_matching(u: &ComplexMatrix) -> Option<TimedGraph> {
    let n = u.dim();
    let tol = tolerance::CLASSIFICATION;
    let mut edges = Vec::new();
    let mut paired = vec![false; n];
    for r in 0..n {
        let partners: Vec<usize> = (0..n).filter(|&c| c != r && u[(r, c)].norm() > tol).collect();
        match partners.as_slice() {
            [] => {}
            [c] if r < *c => {
                edges.push((r, *c));
                paired[r] = true;
                paired[*c] = true;
            }
            [_] => {}
            _ => return None,
        }
    }
    let one = C64::new(1.0, 0.0);
    let loops: Vec<usize> = (0..n).filter(|&v| !paired[v] && (u[(v, v)] - one).norm() > tol).collect();
    let graph = Graph::new(n, edges, loops).ok()?;
    (1..QUARTER_STEPS).map(|k| TimedGraph::new(graph.clone(), RationalAngle::new(k, 4))).find(|tg| matches(tg, u))
}

fn identify_hypercube(u: &ComplexMatrix) -> Option<TimedGraph> {
    let n = u.dim();
    if !n.is_power_of_two() {
        return None;
    }
    for bits in 1..n {
        if bits.count_ones() < 2 {
            continue;
        }
        let graph = Graph::hypercube(n, bits);
        let period_quarters = QUARTER_STEPS * bits.count_ones();
        for k in 1..period_quarters {
            let tg = TimedGraph::new(graph.clone(), RationalAngle::new(k, 4));
            if matches(&tg, u) {
                return Some(tg);
            }
        }
    }
    None
}

/// Factors a monomial unitary with an involutive permutation as
/// a loop set and a π/2 matching, in either order.
pub fn identify_pair(u: &ComplexMatrix) -> Option<[TimedGraph; 2]> {
    let n = u.dim();
    let tol = tolerance::CLASSIFICATION;
    let mut image = vec![usize::MAX; n];
    for c in 0..n {
        let rows: Vec<usize> = (0..n).filter(|&r| u[(r, c)].norm() > tol).collect();
        let [r] = rows.as_slice() else { return None };
        image[c] = *r;
    }
    if (0..n).any(|c| image[image[c]] != c) {
        return None;
    }
    let edges = (0..n).filter(|&c| c < image[c]).map(|c| (c, image[c]));
    let matching = TimedGraph::new(Graph::new(n, edges, []).ok()?, RationalAngle::new(1, 2));
    if matching.graph.is_empty() {
        return None;
    }
    let m = step_unitary(&matching);
    let m_dag = m.adjoint();
    // u = m · d: the loop step runs first.
    if let Some(d) = identify_step(&(&m_dag * u)).filter(|s| s.graph.is_loops_only()) {
        return Some([d, matching]);
    }
    // u = d · m: the matching runs first.
    if let Some(d) = identify_step(&(u * &m_dag)).filter(|s| s.graph.is_loops_only()) {
        return Some([matching, d]);
    }
    None
}

/// One recovered stretch of a trace.
#[derive(Debug, Clone)]
pub enum RecoveredSpan {
    /// Catalog steps reproducing the transitions in `arrows` (1-based arrow indices).
    Steps { arrows: Range<usize>, steps: Vec<TimedGraph> },
    /// A transition with no catalog realization, kept as its unitary.
    Opaque { arrow: usize, unitary: ComplexMatrix },
}

/// Recovers a step sequence from a trace of linear maps.
///
/// `maps[0]` is the starting map and `maps[k]` the map after arrow `k`; each
/// arrow's step unitary is `maps[k]·maps[k-1]†`. Arrows with no catalog match
/// are retried jointly with a neighbour as a loop-set/matching pair that
/// reproduces the two-arrow composite.
pub fn recover_from_trace(maps: &[ComplexMatrix]) -> Vec<RecoveredSpan> {
    let arrow = |from: usize, to: usize| &maps[to] * &maps[from].adjoint();
    let k_max = maps.len().saturating_sub(1);
    let single: Vec<Option<TimedGraph>> = (1..=k_max).map(|k| identify_step(&arrow(k - 1, k))).collect();

    let mut spans = Vec::new();
    let mut k = 1;
    while k <= k_max {
        if let Some(step) = &single[k - 1] {
            spans.push(RecoveredSpan::Steps { arrows: k..k + 1, steps: vec![step.clone()] });
            k += 1;
            continue;
        }
        if k >= 2 {
            if let Some(pair) = identify_pair(&arrow(k - 2, k)) {
                if let Some(RecoveredSpan::Steps { arrows, .. }) = spans.last() {
                    if arrows.start == k - 1 && arrows.len() == 1 {
                        spans.pop();
                        spans.push(RecoveredSpan::Steps { arrows: k - 1..k + 1, steps: pair.to_vec() });
                        k += 1;
                        continue;
                    }
                }
            }
        }
        if k < k_max {
            if let Some(pair) = identify_pair(&arrow(k - 1, k + 1)) {
                spans.push(RecoveredSpan::Steps { arrows: k..k + 2, steps: pair.to_vec() });
                k += 2;
                continue;
            }
        }
        spans.push(RecoveredSpan::Opaque { arrow: k, unitary: arrow(k - 1, k) });
        k += 1;
    }
    spans
}

/// Concatenates recovered spans into a program, or `None` if any span is opaque.
pub fn spans_to_program(n_vertices: usize, spans: &[RecoveredSpan]) -> Option<DynamicGraph> {
    let mut steps = Vec::new();
    for span in spans {
        match span {
            RecoveredSpan::Steps { steps: s, .. } => steps.extend(s.iter().cloned()),
            RecoveredSpan::Opaque { .. } => return None,
        }
    }
    DynamicGraph::from_steps(n_vertices, steps).ok()
}
