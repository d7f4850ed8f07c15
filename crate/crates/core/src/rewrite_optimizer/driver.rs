//! Deterministic fixpoint driver.

use std::collections::{BTreeSet, HashSet};

use crate::graph_model::{DynamicGraph, TimedGraph};
use crate::numerics::{phase_distance, ComplexMatrix};
use crate::tolerance;

use super::context::Ctx;
use super::moves::{candidates_at, diff_bounds, Candidate, Cost};
use super::{OptimizationReport, RewriteStep, RuleId};

/// Which rules the driver may use, and how many rewrites it may accept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimizerConfig {
    pub passes: BTreeSet<RuleId>,
    /// Defaults to `10·len²` for the input program.
    pub max_iterations: Option<usize>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { passes: RuleId::ALL.into_iter().collect(), max_iterations: None }
    }
}

impl OptimizerConfig {
    fn enabled(&self, rule: RuleId) -> bool {
        self.passes.contains(&rule)
    }
}

struct Driver<'a> {
    ctx: Ctx,
    config: &'a OptimizerConfig,
    steps: Vec<TimedGraph>,
    unitary: ComplexMatrix,
    banned: HashSet<Vec<TimedGraph>>,
    report: Vec<RewriteStep>,
    diagnostics: Vec<String>,
    trace: Vec<DynamicGraph>,
}

/// Rewrites `dg` to a cheaper equivalent program.
///
/// Each iteration normalises durations, drops idle steps, then accepts the
/// first candidate in left-to-right scan order that lowers the cost without
/// raising either coordinate. When none exists, one cost-neutral move is
/// accepted only together with a strict decrease it enables.
pub fn optimize(dg: &DynamicGraph, config: &OptimizerConfig) -> (DynamicGraph, OptimizationReport) {
    let (out, report, _) = optimize_traced(dg, config);
    (out, report)
}

/// As [`optimize`], also returning the program after every accepted rewrite, in order.
pub fn optimize_traced(
    dg: &DynamicGraph,
    config: &OptimizerConfig,
) -> (DynamicGraph, OptimizationReport, Vec<DynamicGraph>) {
    let n = dg.n_vertices();
    let mut ctx = Ctx::new(n);
    let steps = dg.steps().to_vec();
    let unitary = ctx.total(&steps);
    let original = unitary.clone();
    let max_iterations = config.max_iterations.unwrap_or(10 * steps.len() * steps.len());
    let mut driver = Driver {
        ctx,
        config,
        steps,
        unitary,
        banned: HashSet::new(),
        report: Vec::new(),
        diagnostics: Vec::new(),
        trace: Vec::new(),
    };
    let mut iterations = 0;
    loop {
        driver.normalize();
        if iterations >= max_iterations {
            break;
        }
        let Some(moves) = driver.search() else { break };
        driver.accept(moves);
        iterations += 1;
    }
    let result = DynamicGraph::from_steps(n, driver.steps.clone()).expect("uniform vertex count");
    let final_distance = phase_distance(&original, &driver.unitary).expect("same dimension");
    let report = OptimizationReport {
        steps: driver.report,
        time_before: dg.total_time(),
        time_after: result.total_time(),
        count_before: dg.len(),
        count_after: result.len(),
        final_distance,
        diagnostics: driver.diagnostics,
    };
    (result, report, driver.trace)
}

impl Driver<'_> {
    fn normalize(&mut self) {
        if self.config.enabled(RuleId::NormalizeTime) {
            for k in 0..self.steps.len() {
                let reduced = self.ctx.reduce(&self.steps[k]);
                if reduced != self.steps[k] {
                    let mut next = self.steps.clone();
                    next[k] = reduced;
                    self.commit(vec![Candidate { rule: RuleId::NormalizeTime, steps: next }]);
                }
            }
        }
        if self.config.enabled(RuleId::DropZero) {
            while let Some(k) = self.steps.iter().position(|s| s.duration.is_zero() || s.graph.is_empty()) {
                let mut next = self.steps.clone();
                next.remove(k);
                if !self.commit(vec![Candidate { rule: RuleId::DropZero, steps: next }]) {
                    break;
                }
            }
        }
    }

    fn candidates(&mut self, steps: &[TimedGraph], with_swaps: bool) -> Vec<Candidate> {
        let config = self.config;
        let enabled = |r: RuleId| config.enabled(r);
        let mut all = Vec::new();
        for i in 0..steps.len() {
            all.extend(candidates_at(&mut self.ctx, steps, i, &enabled, with_swaps));
        }
        all
    }

    fn first_strict(&mut self, steps: &[TimedGraph]) -> Option<Candidate> {
        let base = Cost::of(steps);
        let config = self.config;
        let enabled = |r: RuleId| config.enabled(r);
        for i in 0..steps.len() {
            for c in candidates_at(&mut self.ctx, steps, i, &enabled, false) {
                if Cost::of(&c.steps).improves_on(&base) && !self.banned.contains(&c.steps) {
                    return Some(c);
                }
            }
        }
        None
    }

    fn search(&mut self) -> Option<Vec<Candidate>> {
        let current = self.steps.clone();
        if let Some(c) = self.first_strict(&current) {
            return Some(vec![c]);
        }
        let base = Cost::of(&current);
        let mut seen: HashSet<Vec<TimedGraph>> = HashSet::new();
        let neutral: Vec<Candidate> = self
            .candidates(&current, true)
            .into_iter()
            .filter(|c| Cost::of(&c.steps) == base && seen.insert(c.steps.clone()))
            .collect();
        for enabling in neutral {
            if let Some(c) = self.first_strict(&enabling.steps) {
                if !self.banned.contains(&c.steps) {
                    return Some(vec![enabling, c]);
                }
            }
        }
        None
    }

    /// Applies `moves` in order after verifying the final program; returns whether they were kept.
    fn commit(&mut self, moves: Vec<Candidate>) -> bool {
        let last = moves.last().expect("at least one move").steps.clone();
        let after = self.ctx.total(&last);
        let distance = phase_distance(&self.unitary, &after).expect("same dimension");
        if distance >= tolerance::EQUIVALENCE {
            let rules: Vec<&str> = moves.iter().map(|m| m.rule.as_str()).collect();
            self.diagnostics.push(format!(
                "internal error: {} rejected, equivalence distance {distance:.3e}",
                rules.join(" then ")
            ));
            self.banned.insert(last);
            return false;
        }
        let mut prev = self.steps.clone();
        for m in moves {
            self.report.push(record(m.rule, &prev, &m.steps));
            self.trace.push(DynamicGraph::from_steps(self.ctx.n, m.steps.clone()).expect("uniform vertex count"));
            prev = m.steps;
        }
        self.steps = prev;
        self.unitary = after;
        true
    }

    fn accept(&mut self, moves: Vec<Candidate>) {
        self.commit(moves);
    }
}

fn record(rule: RuleId, before: &[TimedGraph], after: &[TimedGraph]) -> RewriteStep {
    let (start, old_end, _) = diff_bounds(before, after);
    let (b, a) = (Cost::of(before), Cost::of(after));
    RewriteStep {
        rule,
        start,
        end: old_end.max(start + 1) - 1,
        time_saved: b.time.checked_sub(a.time).expect("accepted rewrites never add time"),
        graph_delta: a.count as i64 - b.count as i64,
    }
}
