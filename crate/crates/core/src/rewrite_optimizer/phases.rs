//! Exact per-vertex phase vectors and their cheapest loops-only realisation.
//!
//! A run of diagonal steps multiplies each vertex by `e^{-iφ_v}`. The vector
//! `φ` is re-emitted as loops-only graphs whose loop sets may overlap: each
//! vertex collects the durations of the graphs that loop it, so the emitted
//! durations must form a set whose subset sums cover every distinct phase.

use std::collections::{BTreeSet, HashMap};

use num_integer::Integer;
use num_rational::Ratio;

use crate::angle::RationalAngle;
use crate::graph_model::{Graph, TimedGraph};

/// Phase vector entries, each in `[0, 2π)`.
pub(crate) type Phases = Vec<RationalAngle>;

/// Largest number of unit steps searched for a non-staircase decomposition.
const MAX_SEARCH_UNITS: i64 = 64;

pub(crate) fn add_mod(a: RationalAngle, b: RationalAngle) -> RationalAngle {
    (a + b).rem(RationalAngle::TWO_PI)
}

pub(crate) fn sub_mod(a: RationalAngle, b: RationalAngle) -> RationalAngle {
    let b = b.rem(RationalAngle::TWO_PI);
    add_mod(a, RationalAngle::TWO_PI.checked_sub(b).expect("reduced below 2π"))
}

/// Phases accumulated by a sequence of loops-only steps.
pub(crate) fn loops_phases(steps: &[TimedGraph], n: usize) -> Phases {
    let mut phases = vec![RationalAngle::ZERO; n];
    for step in steps {
        for &v in step.graph.loops() {
            phases[v] = add_mod(phases[v], step.duration);
        }
    }
    phases
}

/// Durations and per-vertex membership of a loops-only realisation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Emission {
    pub parts: Vec<RationalAngle>,
    pub members: Vec<BTreeSet<usize>>,
}

impl Emission {
    pub fn time(&self) -> RationalAngle {
        self.parts.iter().copied().sum()
    }

    pub fn count(&self) -> usize {
        self.parts.len()
    }

    pub fn steps(&self, n: usize) -> Vec<TimedGraph> {
        self.parts
            .iter()
            .zip(&self.members)
            .map(|(&t, loops)| TimedGraph::new(Graph::loops_only(n, loops.iter().copied()).expect("in range"), t))
            .collect()
    }
}

/// Memoised emission planner keyed by the set of distinct phase values.
#[derive(Default)]
pub(crate) struct PhasePlanner {
    plans: HashMap<Vec<RationalAngle>, Vec<(RationalAngle, Vec<usize>)>>,
}

impl PhasePlanner {
    /// Cheapest realisation: minimal time (the largest phase), then fewest graphs.
    pub fn emit(&mut self, phases: &[RationalAngle]) -> Emission {
        let values: Vec<RationalAngle> =
            phases.iter().copied().filter(|p| !p.is_zero()).collect::<BTreeSet<_>>().into_iter().collect();
        let plan = self.plans.entry(values.clone()).or_insert_with(|| plan_parts(&values)).clone();
        let mut members = vec![BTreeSet::new(); plan.len()];
        for (v, &phase) in phases.iter().enumerate() {
            if phase.is_zero() {
                continue;
            }
            let idx = values.binary_search(&phase).expect("value present");
            for (k, (_, covers)) in plan.iter().enumerate() {
                if covers.contains(&idx) {
                    members[k].insert(v);
                }
            }
        }
        Emission { parts: plan.iter().map(|(t, _)| *t).collect(), members }
    }
}

/// For ascending distinct values, returns parts (descending) with the indices of the values each part covers.
fn plan_parts(values: &[RationalAngle]) -> Vec<(RationalAngle, Vec<usize>)> {
    if values.is_empty() {
        return Vec::new();
    }
    if let Some(plan) = subset_sum_plan(values) {
        return plan;
    }
    staircase_plan(values)
}

/// Part `i` spans from `values[i-1]` to `values[i]` and covers every value at or above `values[i]`.
fn staircase_plan(values: &[RationalAngle]) -> Vec<(RationalAngle, Vec<usize>)> {
    let mut plan: Vec<(RationalAngle, Vec<usize>)> = (0..values.len())
        .map(|i| {
            let lower = if i == 0 { RationalAngle::ZERO } else { values[i - 1] };
            (values[i].checked_sub(lower).expect("ascending"), (i..values.len()).collect())
        })
        .collect();
    plan.reverse();
    plan
}

fn subset_sum_plan(values: &[RationalAngle]) -> Option<Vec<(RationalAngle, Vec<usize>)>> {
    let den = values.iter().fold(1i64, |acc, v| acc.lcm(&v.den()));
    let units: Vec<i64> = values.iter().map(|v| v.num() * (den / v.den())).collect();
    let g = units.iter().fold(0i64, |acc, &u| acc.gcd(&u));
    let units: Vec<i64> = units.iter().map(|u| u / g).collect();
    let total = *units.last().expect("nonempty");
    if total > MAX_SEARCH_UNITS || values.len() <= 2 {
        return None;
    }
    for k in 1..values.len() {
        let mut parts = Vec::with_capacity(k);
        if let Some(found) = search_partition(total, k, total, &mut parts, &units) {
            let to_angle = |u: i64| RationalAngle::from_ratio(Ratio::new(u * g, den));
            return Some(found.into_iter().map(|(part, covers)| (to_angle(part), covers)).collect());
        }
    }
    None
}

/// Enumerates non-increasing partitions of `remaining` into exactly `k` parts, each at most `cap`.
fn search_partition(
    remaining: i64,
    k: usize,
    cap: i64,
    parts: &mut Vec<i64>,
    targets: &[i64],
) -> Option<Vec<(i64, Vec<usize>)>> {
    if k == 0 {
        return (remaining == 0).then(|| assign_subsets(parts, targets)).flatten();
    }
    let max_part = cap.min(remaining - (k as i64 - 1));
    let min_part = (remaining + k as i64 - 1) / k as i64;
    let mut p = max_part;
    while p >= min_part.max(1) {
        parts.push(p);
        if let Some(found) = search_partition(remaining - p, k - 1, p, parts, targets) {
            return Some(found);
        }
        parts.pop();
        p -= 1;
    }
    None
}

/// Picks, for every target, a subset of `parts` summing to it; fails if any target is unreachable.
fn assign_subsets(parts: &[i64], targets: &[i64]) -> Option<Vec<(i64, Vec<usize>)>> {
    let k = parts.len();
    let mut best_subset: HashMap<i64, usize> = HashMap::new();
    for mask in 1usize..(1 << k) {
        let sum: i64 = (0..k).filter(|b| mask & (1 << b) != 0).map(|b| parts[b]).sum();
        best_subset.entry(sum).or_insert(mask);
    }
    let mut covers = vec![Vec::new(); k];
    for (idx, t) in targets.iter().enumerate() {
        let mask = *best_subset.get(t)?;
        for (b, cover) in covers.iter_mut().enumerate() {
            if mask & (1 << b) != 0 {
                cover.push(idx);
            }
        }
    }
    Some(parts.iter().copied().zip(covers).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::C64;
    use crate::walk_engine::{product_of, step_unitary};

    fn angle(n: u32, d: u32) -> RationalAngle {
        RationalAngle::new(n, d)
    }

    fn realised(emission: &Emission, n: usize) -> Vec<C64> {
        let u = product_of(emission.steps(n).iter().map(step_unitary), n);
        (0..n).map(|v| u[(v, v)]).collect()
    }

    #[test]
    fn three_quarter_turns_need_two_graphs() {
        let phases = vec![RationalAngle::ZERO, angle(1, 2), angle(1, 1), angle(3, 2)];
        let e = PhasePlanner::default().emit(&phases);
        assert_eq!(e.count(), 2);
        assert_eq!(e.time(), angle(3, 2));
        for (v, z) in realised(&e, 4).iter().enumerate() {
            assert!((z - C64::from_polar(1.0, -phases[v].radians())).norm() < 1e-12);
        }
    }

    #[test]
    fn two_values_use_the_staircase() {
        let phases = vec![angle(1, 1), angle(1, 2), angle(1, 2), RationalAngle::ZERO];
        let e = PhasePlanner::default().emit(&phases);
        assert_eq!(e.parts, vec![angle(1, 2), angle(1, 2)]);
        assert_eq!(e.time(), angle(1, 1));
    }

    #[test]
    fn emitted_time_is_the_largest_phase() {
        let phases: Vec<RationalAngle> = (0..8).map(|k| angle(k, 4)).collect();
        let e = PhasePlanner::default().emit(&phases);
        assert_eq!(e.time(), angle(7, 4));
        assert_eq!(e.count(), 3);
        for (v, z) in realised(&e, 8).iter().enumerate() {
            assert!((z - C64::from_polar(1.0, -phases[v].radians())).norm() < 1e-12);
        }
    }

    #[test]
    fn modular_helpers() {
        assert_eq!(add_mod(angle(3, 2), angle(1, 1)), angle(1, 2));
        assert_eq!(sub_mod(angle(1, 4), angle(1, 2)), angle(7, 4));
        assert_eq!(sub_mod(angle(1, 2), RationalAngle::ZERO), angle(1, 2));
    }
}
