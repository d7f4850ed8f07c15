//! Candidate rewrites of a step list, one generator per rule family.
//!
//! Every generator returns whole new step lists. Apart from the Hadamard
//! layer substitution, each candidate reproduces the exact unitary of its
//! input, global phase included.

use std::collections::BTreeSet;
use std::ops::Range;

use crate::angle::RationalAngle;
use crate::gate_compiler::{compile_hadamard_layer, hadamard_unitary};
use crate::graph_model::{Graph, TimedGraph};
use crate::numerics::{phase_distance, ComplexMatrix, C64};
use crate::tolerance;
use crate::walk_engine::PhasedBitFlip;

use super::context::Ctx;
use super::phases::{add_mod, sub_mod, Phases};
use super::RuleId;

/// A rewritten program and the rule that produced it.
#[derive(Debug, Clone)]
pub(crate) struct Candidate {
    pub rule: RuleId,
    pub steps: Vec<TimedGraph>,
}

/// Total time and graph count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Cost {
    pub time: RationalAngle,
    pub count: usize,
}

impl Cost {
    pub fn of(steps: &[TimedGraph]) -> Self {
        Self { time: steps.iter().map(|s| s.duration).sum(), count: steps.len() }
    }

    /// No worse in either coordinate and better in at least one.
    pub fn improves_on(&self, other: &Self) -> bool {
        self.time <= other.time && self.count <= other.count && self != other
    }

    pub fn no_worse_than(&self, other: &Self) -> bool {
        self.time <= other.time && self.count <= other.count
    }

    fn lexicographic(&self) -> (RationalAngle, usize) {
        (self.time, self.count)
    }
}

fn splice(steps: &[TimedGraph], range: Range<usize>, replacement: Vec<TimedGraph>) -> Vec<TimedGraph> {
    let mut out = Vec::with_capacity(steps.len() + replacement.len());
    out.extend_from_slice(&steps[..range.start]);
    out.extend(replacement);
    out.extend_from_slice(&steps[range.end..]);
    out
}

fn nonzero(s: TimedGraph) -> Option<TimedGraph> {
    (!s.duration.is_zero() && !s.graph.is_empty()).then_some(s)
}

/// Maximal runs of consecutive diagonal steps.
pub(crate) fn diagonal_runs(ctx: &mut Ctx, steps: &[TimedGraph]) -> Vec<Range<usize>> {
    let mut runs = Vec::new();
    let mut k = 0;
    while k < steps.len() {
        if ctx.is_diagonal(&steps[k]) {
            let start = k;
            while k < steps.len() && ctx.is_diagonal(&steps[k]) {
                k += 1;
            }
            runs.push(start..k);
        } else {
            k += 1;
        }
    }
    runs
}

fn run_phases(ctx: &mut Ctx, steps: &[TimedGraph]) -> Phases {
    let mut acc = vec![RationalAngle::ZERO; ctx.n];
    for s in steps {
        let p = ctx.phases(s).expect("diagonal run");
        for (a, b) in acc.iter_mut().zip(p) {
            *a = add_mod(*a, b);
        }
    }
    acc
}

fn emit(ctx: &mut Ctx, phases: &[RationalAngle]) -> Vec<TimedGraph> {
    let n = ctx.n;
    ctx.planner.emit(phases).steps(n)
}

fn emission_cost(ctx: &mut Ctx, phases: &[RationalAngle]) -> Cost {
    let e = ctx.planner.emit(phases);
    Cost { time: e.time(), count: e.count() }
}

/// Re-emits every diagonal run meeting `window` whenever that is no worse.
pub(crate) fn settle(ctx: &mut Ctx, steps: Vec<TimedGraph>, window: Range<usize>) -> Vec<TimedGraph> {
    let lo = window.start.saturating_sub(1);
    let hi = window.end + 1;
    let mut steps = steps;
    let runs = diagonal_runs(ctx, &steps);
    for run in runs.into_iter().rev() {
        if run.end <= lo || run.start >= hi {
            continue;
        }
        if let Some(replacement) = consolidated(ctx, &steps[run.clone()]) {
            steps = splice(&steps, run, replacement);
        }
    }
    steps
}

/// Cheapest loops-only form of a diagonal run, if it differs and is no worse.
fn consolidated(ctx: &mut Ctx, run: &[TimedGraph]) -> Option<Vec<TimedGraph>> {
    let phases = run_phases(ctx, run);
    let replacement = emit(ctx, &phases);
    (replacement != run && Cost::of(&replacement).no_worse_than(&Cost::of(run))).then_some(replacement)
}

/// Steps `i` and `i+1` on the same graph become one step.
pub(crate) fn merge_identical(ctx: &mut Ctx, steps: &[TimedGraph], i: usize) -> Option<Vec<TimedGraph>> {
    let (a, b) = (steps.get(i)?, steps.get(i + 1)?);
    if a.graph != b.graph {
        return None;
    }
    let merged = ctx.reduce(&TimedGraph::new(a.graph.clone(), a.duration + b.duration));
    Some(splice(steps, i..i + 2, nonzero(merged).into_iter().collect()))
}

/// Moves whole components shared by adjacent steps onto the step that consists of them alone.
pub(crate) fn transfer_components(ctx: &mut Ctx, steps: &[TimedGraph], i: usize) -> Vec<Vec<TimedGraph>> {
    let mut out = Vec::new();
    let (Some(first), Some(second)) = (steps.get(i), steps.get(i + 1)) else { return out };
    for (big, small, small_first) in [(first, second, false), (second, first, true)] {
        if small.graph.edges().is_empty() || small.graph == big.graph {
            continue;
        }
        let Some(rest) = remove_components(&big.graph, &small.graph) else { continue };
        if !ctx.same_norm(&small.graph, &big.graph) || (!rest.is_empty() && !ctx.same_norm(&rest, &big.graph)) {
            continue;
        }
        let grown = nonzero(ctx.reduce(&TimedGraph::new(small.graph.clone(), small.duration + big.duration)));
        let rest = nonzero(TimedGraph::new(rest, big.duration));
        let replacement: Vec<TimedGraph> =
            if small_first { grown.into_iter().chain(rest).collect() } else { rest.into_iter().chain(grown).collect() };
        out.push(splice(steps, i..i + 2, replacement));
    }
    out
}

/// `big` without the vertices of `part`, when `part` is a union of components of `big`.
fn remove_components(big: &Graph, part: &Graph) -> Option<Graph> {
    let support = part.support();
    let neighbours = |g: &Graph, v: usize| -> BTreeSet<usize> {
        g.edges().iter().filter_map(|&(a, b)| (a == v).then_some(b).or((b == v).then_some(a))).collect()
    };
    for &v in &support {
        if neighbours(big, v) != neighbours(part, v) || big.has_loop(v) != part.has_loop(v) {
            return None;
        }
    }
    let edges = big.edges().iter().copied().filter(|(a, _)| !support.contains(a));
    let loops = big.loops().iter().copied().filter(|v| !support.contains(v));
    Graph::new(big.n_vertices(), edges, loops).ok()
}

/// Last index `j` such that steps `i..=j` all classify as phased bit flips.
fn pst_run_end(ctx: &mut Ctx, steps: &[TimedGraph], i: usize) -> Option<usize> {
    let mut j = None;
    for (k, s) in steps.iter().enumerate().skip(i) {
        if ctx.flip(s).is_none() {
            break;
        }
        j = Some(k);
    }
    j
}

/// Replacement for a run of phased bit flips with combined classification `total`.
pub(crate) fn pst_replacement(n: usize, total: PhasedBitFlip) -> Option<Vec<TimedGraph>> {
    let mut out = Vec::new();
    let residual = if total.flip_mask != 0 {
        out.push(TimedGraph::new(Graph::xor_matching(n, total.flip_mask, |_| true), RationalAngle::new(1, 2)));
        total.phase * C64::new(0.0, 1.0)
    } else {
        total.phase
    };
    let theta = Ctx::angle_of(residual)?;
    if !theta.is_zero() {
        out.push(TimedGraph::new(Graph::all_loops(n), theta));
    }
    Some(out)
}

/// PST combinations of `i..=j` for every `j`, longest run first.
pub(crate) fn combine_pst(ctx: &mut Ctx, steps: &[TimedGraph], i: usize) -> Vec<Vec<TimedGraph>> {
    let mut out = Vec::new();
    let Some(end) = pst_run_end(ctx, steps, i) else { return out };
    if !ctx.n.is_power_of_two() {
        return out;
    }
    let flips: Vec<PhasedBitFlip> = steps[i..=end].iter().map(|s| ctx.flip(s).expect("classified")).collect();
    for j in (i + 1..=end).rev() {
        let total = flips[..=j - i].iter().fold(PhasedBitFlip::identity(), |acc, f| acc.then(f));
        if let Some(replacement) = pst_replacement(ctx.n, total) {
            out.push(splice(steps, i..j + 1, replacement));
        }
    }
    out
}

/// Union of support-disjoint neighbours with equal norms.
pub(crate) fn merge_complementary(ctx: &mut Ctx, steps: &[TimedGraph], i: usize) -> Option<Vec<TimedGraph>> {
    let (a, b) = (steps.get(i)?, steps.get(i + 1)?);
    if a.graph.is_empty() || b.graph.is_empty() || !a.graph.supports_disjoint(&b.graph) {
        return None;
    }
    if !ctx.same_norm(&a.graph, &b.graph) {
        return None;
    }
    let union = a.graph.union(&b.graph).ok()?;
    let t_min = a.duration.min(b.duration);
    let mut replacement = vec![TimedGraph::new(union, t_min)];
    if a.duration != b.duration {
        let longer = if a.duration > b.duration { &a.graph } else { &b.graph };
        replacement.push(TimedGraph::new(longer.clone(), a.duration.abs_diff(b.duration)));
    }
    Some(splice(steps, i..i + 2, replacement))
}

/// Re-emission of the diagonal run starting at `i`.
pub(crate) fn consolidate_at(ctx: &mut Ctx, steps: &[TimedGraph], i: usize) -> Option<Vec<TimedGraph>> {
    let run = diagonal_runs(ctx, steps).into_iter().find(|r| r.start == i)?;
    let replacement = consolidated(ctx, &steps[run.clone()])?;
    Some(splice(steps, run, replacement))
}

/// Blocks of the join of the component partitions of `graphs`.
fn join_partition(n: usize, graphs: &[TimedGraph]) -> Vec<Vec<usize>> {
    let mut edges = Vec::new();
    for s in graphs {
        edges.extend(s.graph.edges().iter().copied());
    }
    Graph::new(n, edges.into_iter().collect::<BTreeSet<_>>(), []).expect("valid edges").components()
}

/// Shifts a diagonal from the run starting at `i` through the following corridor into the next run.
pub(crate) fn migrate(ctx: &mut Ctx, steps: &[TimedGraph], i: usize) -> Option<Vec<TimedGraph>> {
    let runs = diagonal_runs(ctx, steps);
    let pos = runs.iter().position(|r| r.start == i)?;
    let (r1, r2) = (runs[pos].clone(), runs.get(pos + 1)?.clone());
    let blocks: Vec<Vec<usize>> =
        join_partition(ctx.n, &steps[r1.end..r2.start]).into_iter().filter(|b| !b.is_empty()).collect();
    let phi1 = run_phases(ctx, &steps[r1.clone()]);
    let phi2 = run_phases(ctx, &steps[r2.clone()]);

    let mut delta = vec![RationalAngle::ZERO; blocks.len()];
    let objective = |ctx: &mut Ctx, delta: &[RationalAngle]| {
        let (mut p1, mut p2) = (phi1.clone(), phi2.clone());
        for (b, &d) in blocks.iter().zip(delta) {
            for &v in b {
                p1[v] = sub_mod(p1[v], d);
                p2[v] = add_mod(p2[v], d);
            }
        }
        let (c1, c2) = (emission_cost(ctx, &p1), emission_cost(ctx, &p2));
        (Cost { time: c1.time + c2.time, count: c1.count + c2.count }, p1, p2)
    };
    let start = objective(ctx, &delta).0;
    let mut best = start;
    let values1: BTreeSet<RationalAngle> = phi1.iter().copied().collect();
    let values2: BTreeSet<RationalAngle> = phi2.iter().copied().collect();
    for _round in 0..3 {
        let mut improved = false;
        for bi in 0..blocks.len() {
            let mut options = BTreeSet::new();
            for &v in &blocks[bi] {
                for &w in &values1 {
                    options.insert(sub_mod(phi1[v], w));
                }
                for &w in &values2 {
                    options.insert(sub_mod(w, phi2[v]));
                }
            }
            for d in options {
                if d == delta[bi] {
                    continue;
                }
                let mut trial = delta.clone();
                trial[bi] = d;
                let c = objective(ctx, &trial).0;
                if c.lexicographic() < best.lexicographic() {
                    best = c;
                    delta = trial;
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
    if best == start {
        return None;
    }
    let (_, p1, p2) = objective(ctx, &delta);
    let (e1, e2) = (emit(ctx, &p1), emit(ctx, &p2));
    let mut out = steps[..r1.start].to_vec();
    out.extend(e1);
    out.extend_from_slice(&steps[r1.end..r2.start]);
    out.extend(e2);
    out.extend_from_slice(&steps[r2.end..]);
    Some(out)
}

/// `v` has no edge in any step of `range`.
fn edge_free_over(steps: &[TimedGraph], range: Range<usize>, v: usize) -> bool {
    steps[range].iter().all(|s| s.graph.is_edge_free(v))
}

/// Phase `t/‖A‖` a looped singleton collects in step `s`, when rational.
fn singleton_phase(ctx: &mut Ctx, s: &TimedGraph) -> Option<RationalAngle> {
    let k = ctx.integer_norm(&s.graph)?;
    Some(s.duration.scale(1, k).rem(RationalAngle::TWO_PI))
}

/// Moves phase from the diagonal run starting at `i` into loops on isolated vertices of non-diagonal steps.
pub(crate) fn absorb_into_walks(ctx: &mut Ctx, steps: &[TimedGraph], i: usize) -> Vec<Vec<TimedGraph>> {
    let mut out = Vec::new();
    let Some(run) = diagonal_runs(ctx, steps).into_iter().find(|r| r.start == i) else { return out };
    let phi = run_phases(ctx, &steps[run.clone()]);
    let targets: Vec<usize> = (0..steps.len()).filter(|&k| !run.contains(&k) && !ctx.is_diagonal(&steps[k])).collect();
    for k in targets {
        let target = &steps[k];
        let Some(rho) = singleton_phase(ctx, target) else { continue };
        if rho.is_zero() {
            continue;
        }
        let between = if k < run.start { k + 1..run.start } else { run.end..k };
        let free: Vec<usize> = (0..ctx.n)
            .filter(|&v| {
                !phi[v].is_zero()
                    && target.graph.is_edge_free(v)
                    && !target.graph.has_loop(v)
                    && edge_free_over(steps, between.clone(), v)
            })
            .collect();
        if free.is_empty() {
            continue;
        }
        let mut subsets: BTreeSet<Vec<usize>> = BTreeSet::new();
        for value in free.iter().map(|&v| phi[v]).collect::<BTreeSet<_>>() {
            subsets.insert(free.iter().copied().filter(|&v| phi[v] == value).collect());
            subsets.insert(free.iter().copied().filter(|&v| phi[v] >= value).collect());
        }
        subsets.insert(free.iter().copied().filter(|&v| phi[v] >= rho).collect());
        subsets.remove(&Vec::new());
        for subset in subsets {
            let Ok(graph) = target.graph.with_loops(target.graph.loops().iter().copied().chain(subset.iter().copied()))
            else {
                continue;
            };
            if !ctx.same_norm(&graph, &target.graph) {
                continue;
            }
            let mut p = phi.clone();
            for &v in &subset {
                p[v] = sub_mod(p[v], rho);
            }
            let emitted = emit(ctx, &p);
            let mut new_steps = steps.to_vec();
            new_steps[k] = TimedGraph::new(graph, target.duration);
            out.push(splice(&new_steps, run.clone(), emitted));
        }
    }
    out
}

/// Removes a looped singleton from the non-diagonal step `i`, sending its phase to a neighbouring run.
pub(crate) fn extract_singletons(ctx: &mut Ctx, steps: &[TimedGraph], i: usize) -> Vec<Vec<TimedGraph>> {
    let mut out = Vec::new();
    let s = &steps[i];
    if ctx.is_diagonal(s) {
        return out;
    }
    let Some(rho) = singleton_phase(ctx, s) else { return out };
    let singles: Vec<usize> = s.graph.loops().iter().copied().filter(|&v| s.graph.is_edge_free(v)).collect();
    if singles.is_empty() {
        return out;
    }
    let runs = diagonal_runs(ctx, steps);
    for v in singles {
        let Ok(graph) =
            Graph::new(ctx.n, s.graph.edges().iter().copied(), s.graph.loops().iter().copied().filter(|&w| w != v))
        else {
            continue;
        };
        if graph.is_empty() || !ctx.same_norm(&graph, &s.graph) {
            continue;
        }
        let stripped = TimedGraph::new(graph, s.duration);
        let left = runs.iter().rfind(|r| r.end <= i).cloned();
        let right = runs.iter().find(|r| r.start > i).cloned();
        let mut placed = false;
        for run in [left, right].into_iter().flatten() {
            let between = if run.end <= i { run.end..i } else { i + 1..run.start };
            if !edge_free_over(steps, between, v) {
                continue;
            }
            let mut p = run_phases(ctx, &steps[run.clone()]);
            p[v] = add_mod(p[v], rho);
            let emitted = emit(ctx, &p);
            let mut new_steps = steps.to_vec();
            new_steps[i] = stripped.clone();
            out.push(splice(&new_steps, run, emitted));
            placed = true;
        }
        if !placed {
            let single = TimedGraph::new(Graph::loops_only(ctx.n, [v]).expect("in range"), rho);
            out.push(splice(steps, i..i + 1, vec![stripped, single]));
        }
    }
    out
}

/// Qubit subset whose Hadamard layer matches `u` up to global phase.
pub(crate) fn hadamard_mask(u: &ComplexMatrix, n_qubits: usize) -> Option<usize> {
    let tol = 1e-6;
    let mask = (0..u.dim()).filter(|&c| u[(0, c)].norm() > tol).fold(0usize, |m, c| m | c);
    if mask == 0 {
        return None;
    }
    let d = phase_distance(u, &hadamard_unitary(n_qubits, mask)).ok()?;
    (d < tolerance::EQUIVALENCE).then_some(mask)
}

fn mask_qubits(n_qubits: usize, mask: usize) -> Vec<usize> {
    (0..n_qubits).filter(|&q| mask & (1 << (n_qubits - 1 - q)) != 0).collect()
}

/// Fragments from `i` whose product is a Hadamard layer, longest first, replaced by the hypercube form when cheaper.
pub(crate) fn hypercube_hadamard(ctx: &mut Ctx, steps: &[TimedGraph], i: usize) -> Vec<Vec<TimedGraph>> {
    let mut out = Vec::new();
    let n = ctx.n;
    if !n.is_power_of_two() || n < 2 || i >= steps.len() {
        return out;
    }
    let n_qubits = n.trailing_zeros() as usize;
    let mut products = Vec::with_capacity(steps.len() - i);
    let mut acc = ComplexMatrix::identity(n);
    for s in &steps[i..] {
        acc = &ctx.unitary(s) * &acc;
        products.push(acc.clone());
    }
    for j in (i..steps.len()).rev() {
        let Some(mask) = hadamard_mask(&products[j - i], n_qubits) else { continue };
        let Ok(layer) = compile_hadamard_layer(&mask_qubits(n_qubits, mask), n_qubits) else { continue };
        let layer = layer.into_steps();
        if Cost::of(&layer).improves_on(&Cost::of(&steps[i..=j])) {
            out.push(splice(steps, i..j + 1, layer));
        }
    }
    out
}

/// Moves step `i` to every other position reachable through commuting neighbours.
pub(crate) fn commuting_moves(ctx: &mut Ctx, steps: &[TimedGraph], i: usize) -> Vec<Vec<TimedGraph>> {
    let mut out = Vec::new();
    let moving = &steps[i];
    let diag = ctx.is_diagonal(moving);
    let relocate = |to: usize| {
        let mut s = steps.to_vec();
        let item = s.remove(i);
        s.insert(to, item);
        s
    };
    let mut k = i + 1;
    while k < steps.len() && ctx.commutes(&moving.graph, &steps[k].graph) {
        if !(diag && ctx.is_diagonal(&steps[k])) {
            out.push(relocate(k));
        }
        k += 1;
    }
    let mut k = i;
    while k > 0 && ctx.commutes(&moving.graph, &steps[k - 1].graph) {
        if !(diag && ctx.is_diagonal(&steps[k - 1])) {
            out.push(relocate(k - 1));
        }
        k -= 1;
    }
    out
}

/// Every candidate anchored at position `i`, in rule order.
pub(crate) fn candidates_at(
    ctx: &mut Ctx,
    steps: &[TimedGraph],
    i: usize,
    enabled: &dyn Fn(RuleId) -> bool,
    with_swaps: bool,
) -> Vec<Candidate> {
    let mut raw: Vec<(RuleId, Vec<TimedGraph>)> = Vec::new();
    if enabled(RuleId::MergeIdentical) {
        raw.extend(merge_identical(ctx, steps, i).map(|s| (RuleId::MergeIdentical, s)));
        raw.extend(transfer_components(ctx, steps, i).into_iter().map(|s| (RuleId::MergeIdentical, s)));
    }
    if enabled(RuleId::CombinePst) {
        raw.extend(combine_pst(ctx, steps, i).into_iter().map(|s| (RuleId::CombinePst, s)));
    }
    if enabled(RuleId::MergeComplementary) {
        raw.extend(merge_complementary(ctx, steps, i).map(|s| (RuleId::MergeComplementary, s)));
    }
    if enabled(RuleId::MoveSingleton) {
        raw.extend(consolidate_at(ctx, steps, i).map(|s| (RuleId::MoveSingleton, s)));
        raw.extend(migrate(ctx, steps, i).map(|s| (RuleId::MoveSingleton, s)));
        raw.extend(absorb_into_walks(ctx, steps, i).into_iter().map(|s| (RuleId::MoveSingleton, s)));
        raw.extend(extract_singletons(ctx, steps, i).into_iter().map(|s| (RuleId::MoveSingleton, s)));
    }
    if enabled(RuleId::HypercubeHadamard) {
        raw.extend(hypercube_hadamard(ctx, steps, i).into_iter().map(|s| (RuleId::HypercubeHadamard, s)));
    }
    if with_swaps && enabled(RuleId::SwapCommuting) {
        raw.extend(commuting_moves(ctx, steps, i).into_iter().map(|s| (RuleId::SwapCommuting, s)));
    }
    raw.into_iter()
        .map(|(rule, new_steps)| {
            let window = changed_window(steps, &new_steps);
            let settled = if rule == RuleId::SwapCommuting { new_steps } else { settle(ctx, new_steps, window) };
            Candidate { rule, steps: settled }
        })
        .filter(|c| c.steps != steps)
        .collect()
}

/// Range of `new` that differs from `old`, after stripping the common prefix and suffix.
pub(crate) fn changed_window(old: &[TimedGraph], new: &[TimedGraph]) -> Range<usize> {
    let (start, _, new_end) = diff_bounds(old, new);
    start..new_end
}

/// Common prefix length and the exclusive ends of the differing spans in `old` and `new`.
pub(crate) fn diff_bounds(old: &[TimedGraph], new: &[TimedGraph]) -> (usize, usize, usize) {
    let prefix = old.iter().zip(new).take_while(|(a, b)| a == b).count();
    let max_suffix = old.len().min(new.len()) - prefix;
    let suffix = old.iter().rev().zip(new.iter().rev()).take(max_suffix).take_while(|(a, b)| a == b).count();
    (prefix, old.len() - suffix, new.len() - suffix)
}
