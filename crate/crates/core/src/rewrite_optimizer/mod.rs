//! Verified rewrite passes over dynamic graphs and a fixpoint driver.

mod context;
mod driver;
mod moves;
mod phases;

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angle::RationalAngle;
use crate::graph_model::{DynamicGraph, Graph, TimedGraph};
use crate::numerics::phase_distance;
use crate::tolerance;
use crate::walk_engine::{graphs_commute, total_unitary, PhasedBitFlip};

use context::Ctx;
use moves::Cost;

pub use driver::{optimize, optimize_traced, OptimizerConfig};

/// Rewrite rule identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RuleId {
    SwapCommuting,
    MergeIdentical,
    CombinePst,
    MergeComplementary,
    MoveSingleton,
    HypercubeHadamard,
    NormalizeTime,
    DropZero,
}

impl RuleId {
    pub const ALL: [RuleId; 8] = [
        RuleId::SwapCommuting,
        RuleId::MergeIdentical,
        RuleId::CombinePst,
        RuleId::MergeComplementary,
        RuleId::MoveSingleton,
        RuleId::HypercubeHadamard,
        RuleId::NormalizeTime,
        RuleId::DropZero,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            RuleId::SwapCommuting => "SWAP_COMMUTING",
            RuleId::MergeIdentical => "MERGE_IDENTICAL",
            RuleId::CombinePst => "COMBINE_PST",
            RuleId::MergeComplementary => "MERGE_COMPLEMENTARY",
            RuleId::MoveSingleton => "MOVE_SINGLETON",
            RuleId::HypercubeHadamard => "HYPERCUBE_HADAMARD",
            RuleId::NormalizeTime => "NORMALIZE_TIME",
            RuleId::DropZero => "DROP_ZERO",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown rule `{0}`")]
pub struct UnknownRule(pub String);

impl FromStr for RuleId {
    type Err = UnknownRule;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let wanted = s.trim().to_ascii_uppercase().replace('-', "_");
        RuleId::ALL.into_iter().find(|r| r.as_str() == wanted).ok_or_else(|| UnknownRule(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RewriteError {
    #[error("{rule} does not apply: {reason}")]
    NotApplicable { rule: RuleId, reason: String },
    #[error("step index {index} out of range for {len} steps")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("{rule} changed the unitary (distance {distance:.3e})")]
    Inequivalent { rule: RuleId, distance: f64 },
}

fn not_applicable(rule: RuleId, reason: impl Into<String>) -> RewriteError {
    RewriteError::NotApplicable { rule, reason: reason.into() }
}

/// One accepted rewrite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteStep {
    pub rule: RuleId,
    /// First step index acted on, in the program before the rewrite.
    pub start: usize,
    /// Last step index acted on (inclusive).
    pub end: usize,
    /// Reduction in total time.
    pub time_saved: RationalAngle,
    /// Change in graph count.
    pub graph_delta: i64,
}

/// Summary of an optimisation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationReport {
    pub steps: Vec<RewriteStep>,
    pub time_before: RationalAngle,
    pub time_after: RationalAngle,
    pub count_before: usize,
    pub count_after: usize,
    /// Global-phase distance between the input and output unitaries.
    pub final_distance: f64,
    pub diagnostics: Vec<String>,
}

impl OptimizationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    /// Sum of the recorded time savings.
    pub fn total_time_saved(&self) -> RationalAngle {
        self.steps.iter().map(|s| s.time_saved).sum()
    }

    /// Sum of the recorded graph-count changes.
    pub fn total_graph_delta(&self) -> i64 {
        self.steps.iter().map(|s| s.graph_delta).sum()
    }
}

fn check_index(dg: &DynamicGraph, index: usize) -> Result<(), RewriteError> {
    if index < dg.len() {
        Ok(())
    } else {
        Err(RewriteError::IndexOutOfRange { index, len: dg.len() })
    }
}

fn finish(dg: &DynamicGraph, rule: RuleId, steps: Vec<TimedGraph>) -> Result<DynamicGraph, RewriteError> {
    let out = DynamicGraph::from_steps(dg.n_vertices(), steps).expect("uniform vertex count");
    let distance = phase_distance(&total_unitary(dg), &total_unitary(&out)).expect("same dimension");
    if distance >= tolerance::EQUIVALENCE {
        return Err(RewriteError::Inequivalent { rule, distance });
    }
    Ok(out)
}

/// Exchanges steps `i` and `i+1` when their graphs commute.
pub fn pass_swap_commuting(dg: &DynamicGraph, i: usize) -> Result<DynamicGraph, RewriteError> {
    let rule = RuleId::SwapCommuting;
    check_index(dg, i + 1)?;
    let s = dg.steps();
    if !graphs_commute(&s[i].graph, &s[i + 1].graph) {
        return Err(not_applicable(rule, format!("steps {i} and {} do not commute", i + 1)));
    }
    let mut steps = s.to_vec();
    steps.swap(i, i + 1);
    finish(dg, rule, steps)
}

/// Runs step `i`'s graph for the sum of both durations when steps `i` and `i+1` share a graph.
pub fn pass_merge_identical(dg: &DynamicGraph, i: usize) -> Result<DynamicGraph, RewriteError> {
    let rule = RuleId::MergeIdentical;
    check_index(dg, i + 1)?;
    let mut ctx = Ctx::new(dg.n_vertices());
    let steps = moves::merge_identical(&mut ctx, dg.steps(), i)
        .ok_or_else(|| not_applicable(rule, format!("steps {i} and {} have different graphs", i + 1)))?;
    finish(dg, rule, steps)
}

/// Replaces a run of phased bit flips with one matching and a phase correction.
pub fn pass_combine_pst(dg: &DynamicGraph, range: RangeInclusive<usize>) -> Result<DynamicGraph, RewriteError> {
    let rule = RuleId::CombinePst;
    let (i, j) = (*range.start(), *range.end());
    check_index(dg, j)?;
    if j <= i {
        return Err(not_applicable(rule, "the range must cover at least two steps"));
    }
    if !dg.n_vertices().is_power_of_two() {
        return Err(not_applicable(rule, "vertex count is not a power of two"));
    }
    let mut ctx = Ctx::new(dg.n_vertices());
    let mut total = PhasedBitFlip::identity();
    for k in i..=j {
        let f = ctx
            .flip(&dg.steps()[k])
            .ok_or_else(|| not_applicable(rule, format!("step {k} is not a phased bit flip")))?;
        total = total.then(&f);
    }
    let replacement = moves::pst_replacement(dg.n_vertices(), total)
        .ok_or_else(|| not_applicable(rule, "cumulative phase is not a rational multiple of π"))?;
    finish(dg, rule, dg.splice(i..j + 1, replacement).into_steps())
}

/// Runs support-disjoint neighbours with equal norms together for the shorter duration.
pub fn pass_merge_complementary(dg: &DynamicGraph, i: usize) -> Result<DynamicGraph, RewriteError> {
    let rule = RuleId::MergeComplementary;
    check_index(dg, i + 1)?;
    let (a, b) = (&dg.steps()[i].graph, &dg.steps()[i + 1].graph);
    if !a.supports_disjoint(b) {
        return Err(not_applicable(rule, "supports overlap"));
    }
    let mut ctx = Ctx::new(dg.n_vertices());
    if !ctx.same_norm(a, b) {
        return Err(not_applicable(rule, "spectral norms differ"));
    }
    let steps =
        moves::merge_complementary(&mut ctx, dg.steps(), i).ok_or_else(|| not_applicable(rule, "a graph is empty"))?;
    finish(dg, rule, steps)
}

/// Phase a looped singleton collects in a step, `t/‖A‖`, when the norm is an integer.
fn singleton_budget(ctx: &mut Ctx, s: &TimedGraph, rule: RuleId) -> Result<RationalAngle, RewriteError> {
    let k =
        ctx.integer_norm(&s.graph).ok_or_else(|| not_applicable(rule, "spectral norm is not a positive integer"))?;
    Ok(s.duration.scale(1, k).rem(RationalAngle::TWO_PI))
}

fn without_loop(g: &Graph, v: usize) -> Graph {
    Graph::new(g.n_vertices(), g.edges().iter().copied(), g.loops().iter().copied().filter(|&w| w != v))
        .expect("subgraph of a valid graph")
}

fn singleton(n: usize, v: usize, t: RationalAngle) -> TimedGraph {
    TimedGraph::new(Graph::loops_only(n, [v]).expect("in range"), t)
}

/// Moves the looped singleton `v` of step `source` into step `target`.
///
/// If the target is loops-only and loops `v`, the phase is added to `v`
/// there. If `v` is bare in the target and the budget covers the target's
/// own singleton phase, a loop is added to the target and any remainder
/// runs as a singleton step right after it.
pub fn pass_move_singleton(
    dg: &DynamicGraph,
    source: usize,
    v: usize,
    target: usize,
) -> Result<DynamicGraph, RewriteError> {
    let rule = RuleId::MoveSingleton;
    check_index(dg, source)?;
    check_index(dg, target)?;
    let n = dg.n_vertices();
    if v >= n {
        return Err(not_applicable(rule, format!("vertex {v} out of range")));
    }
    if source == target {
        return Err(not_applicable(rule, "source and target coincide"));
    }
    let steps = dg.steps();
    let (src, tgt) = (&steps[source], &steps[target]);
    if !src.graph.has_loop(v) || !src.graph.is_edge_free(v) {
        return Err(not_applicable(rule, format!("vertex {v} is not a looped singleton in step {source}")));
    }
    let (lo, hi) = (source.min(target), source.max(target));
    if let Some(k) = (lo + 1..hi).find(|&k| !steps[k].graph.is_edge_free(v)) {
        return Err(not_applicable(rule, format!("vertex {v} has an edge in step {k}")));
    }
    if !tgt.graph.is_edge_free(v) {
        return Err(not_applicable(rule, format!("vertex {v} has an edge in step {target}")));
    }
    let mut ctx = Ctx::new(n);
    let tau = singleton_budget(&mut ctx, src, rule)?;
    let stripped = without_loop(&src.graph, v);
    let mut new_target = Vec::new();
    if tgt.graph.has_loop(v) {
        if !tgt.graph.is_loops_only() {
            return Err(not_applicable(rule, "target loops the vertex but is not loops-only"));
        }
        let total = (tgt.duration + tau).rem(RationalAngle::TWO_PI);
        let rest = without_loop(&tgt.graph, v);
        if !rest.is_empty() {
            new_target.push(TimedGraph::new(rest, tgt.duration));
        }
        if !total.is_zero() {
            new_target.push(singleton(n, v, total));
        }
    } else {
        let rho = singleton_budget(&mut ctx, tgt, rule)?;
        if tau < rho {
            return Err(not_applicable(rule, "singleton budget is below the target's phase"));
        }
        let looped = tgt.graph.with_loops(tgt.graph.loops().iter().copied().chain([v])).expect("in range");
        if !ctx.same_norm(&looped, &tgt.graph) {
            return Err(not_applicable(rule, "adding the loop changes the target's norm"));
        }
        new_target.push(TimedGraph::new(looped, tgt.duration));
        let remainder = tau.checked_sub(rho).expect("checked above");
        if !remainder.is_zero() {
            new_target.push(singleton(n, v, remainder));
        }
    }
    let source_step = (!stripped.is_empty()).then(|| TimedGraph::new(stripped, src.duration));
    let mut out = Vec::new();
    for (k, s) in steps.iter().enumerate() {
        if k == source {
            out.extend(source_step.clone());
        } else if k == target {
            out.extend(new_target.iter().cloned());
        } else {
            out.push(s.clone());
        }
    }
    finish(dg, rule, out)
}

/// Splits the looped singleton `v` out of step `index` into its own step right after it.
pub fn pass_extract_singleton(dg: &DynamicGraph, index: usize, v: usize) -> Result<DynamicGraph, RewriteError> {
    let rule = RuleId::MoveSingleton;
    check_index(dg, index)?;
    let s = &dg.steps()[index];
    if v >= dg.n_vertices() || !s.graph.has_loop(v) || !s.graph.is_edge_free(v) {
        return Err(not_applicable(rule, format!("vertex {v} is not a looped singleton in step {index}")));
    }
    let mut ctx = Ctx::new(dg.n_vertices());
    let rho = singleton_budget(&mut ctx, s, rule)?;
    let stripped = without_loop(&s.graph, v);
    if stripped.is_empty() {
        return Err(not_applicable(rule, "the step is already a single singleton"));
    }
    if !ctx.same_norm(&stripped, &s.graph) {
        return Err(not_applicable(rule, "removing the loop changes the norm"));
    }
    let mut replacement = vec![TimedGraph::new(stripped, s.duration)];
    if !rho.is_zero() {
        replacement.push(singleton(dg.n_vertices(), v, rho));
    }
    finish(dg, rule, dg.splice(index..index + 1, replacement).into_steps())
}

/// Replaces steps `range` by the hypercube form of the Hadamard layer they implement.
pub fn pass_hypercube_hadamard(dg: &DynamicGraph, range: RangeInclusive<usize>) -> Result<DynamicGraph, RewriteError> {
    let rule = RuleId::HypercubeHadamard;
    let (i, j) = (*range.start(), *range.end());
    check_index(dg, j)?;
    if j < i {
        return Err(not_applicable(rule, "empty range"));
    }
    let n = dg.n_vertices();
    if !n.is_power_of_two() || n < 2 {
        return Err(not_applicable(rule, "vertex count is not a power of two"));
    }
    let n_qubits = n.trailing_zeros() as usize;
    let mut ctx = Ctx::new(n);
    let fragment = &dg.steps()[i..=j];
    let u = ctx.total(fragment);
    let mask =
        moves::hadamard_mask(&u, n_qubits).ok_or_else(|| not_applicable(rule, "fragment is not a Hadamard layer"))?;
    let qubits: Vec<usize> = (0..n_qubits).filter(|&q| mask & (1 << (n_qubits - 1 - q)) != 0).collect();
    let layer = crate::gate_compiler::compile_hadamard_layer(&qubits, n_qubits).expect("valid qubits").into_steps();
    if !Cost::of(&layer).improves_on(&Cost::of(fragment)) {
        return Err(not_applicable(rule, "hypercube form is not cheaper"));
    }
    finish(dg, rule, dg.splice(i..j + 1, layer).into_steps())
}
