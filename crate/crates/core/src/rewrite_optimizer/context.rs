//! Memoised per-step analysis shared by the passes and the driver.

use std::collections::HashMap;

use crate::angle::RationalAngle;
use crate::graph_model::{Graph, Period, TimedGraph};
use crate::numerics::{ComplexMatrix, C64};
use crate::tolerance;
use crate::walk_engine::{classify_unitary, graphs_commute, product_of, step_unitary, PhasedBitFlip};

use super::phases::{loops_phases, PhasePlanner, Phases};

/// Largest denominator accepted when reading a diagonal phase back as a multiple of π.
const PHASE_MAX_DEN: i64 = 64;

pub(crate) struct Ctx {
    pub n: usize,
    pub planner: PhasePlanner,
    unitaries: HashMap<TimedGraph, ComplexMatrix>,
    flips: HashMap<TimedGraph, Option<PhasedBitFlip>>,
    norms: HashMap<Graph, f64>,
    periods: HashMap<Graph, Period>,
    diagonals: HashMap<TimedGraph, Option<Phases>>,
    commute: HashMap<(Graph, Graph), bool>,
}

impl Ctx {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            planner: PhasePlanner::default(),
            unitaries: HashMap::new(),
            flips: HashMap::new(),
            norms: HashMap::new(),
            periods: HashMap::new(),
            diagonals: HashMap::new(),
            commute: HashMap::new(),
        }
    }

    pub fn unitary(&mut self, s: &TimedGraph) -> ComplexMatrix {
        if let Some(u) = self.unitaries.get(s) {
            return u.clone();
        }
        let u = step_unitary(s);
        self.unitaries.insert(s.clone(), u.clone());
        u
    }

    pub fn total(&mut self, steps: &[TimedGraph]) -> ComplexMatrix {
        let us: Vec<ComplexMatrix> = steps.iter().map(|s| self.unitary(s)).collect();
        product_of(us, self.n)
    }

    pub fn flip(&mut self, s: &TimedGraph) -> Option<PhasedBitFlip> {
        if let Some(f) = self.flips.get(s) {
            return *f;
        }
        let f = if s.duration.is_zero() { Some(PhasedBitFlip::identity()) } else { classify_unitary(&self.unitary(s)) };
        self.flips.insert(s.clone(), f);
        f
    }

    pub fn norm(&mut self, g: &Graph) -> f64 {
        if let Some(&x) = self.norms.get(g) {
            return x;
        }
        let x = g.spectral_norm();
        self.norms.insert(g.clone(), x);
        x
    }

    /// The spectral norm when it is a positive integer.
    pub fn integer_norm(&mut self, g: &Graph) -> Option<i64> {
        let x = self.norm(g);
        let r = x.round();
        (r >= 1.0 && (x - r).abs() <= tolerance::EQUIVALENCE).then_some(r as i64)
    }

    pub fn same_norm(&mut self, a: &Graph, b: &Graph) -> bool {
        (self.norm(a) - self.norm(b)).abs() <= tolerance::EQUIVALENCE
    }

    pub fn period(&mut self, g: &Graph) -> Period {
        if let Some(p) = self.periods.get(g) {
            return *p;
        }
        let p = g.period();
        self.periods.insert(g.clone(), p);
        p
    }

    pub fn reduce(&mut self, s: &TimedGraph) -> TimedGraph {
        let p = self.period(&s.graph);
        s.reduced_with(p)
    }

    /// Per-vertex phases of a step whose unitary is diagonal.
    pub fn phases(&mut self, s: &TimedGraph) -> Option<Phases> {
        if let Some(p) = self.diagonals.get(s) {
            return p.clone();
        }
        let p = if s.graph.is_loops_only() || s.duration.is_zero() {
            Some(loops_phases(std::slice::from_ref(s), self.n))
        } else {
            let u = self.unitary(s);
            if u.is_diagonal(tolerance::CLASSIFICATION) {
                (0..self.n)
                    .map(|v| RationalAngle::from_unit_phase(u[(v, v)], PHASE_MAX_DEN, tolerance::CLASSIFICATION))
                    .collect()
            } else {
                None
            }
        };
        self.diagonals.insert(s.clone(), p.clone());
        p
    }

    pub fn is_diagonal(&mut self, s: &TimedGraph) -> bool {
        self.phases(s).is_some()
    }

    pub fn commutes(&mut self, a: &Graph, b: &Graph) -> bool {
        let key = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        if let Some(&c) = self.commute.get(&key) {
            return c;
        }
        let c = graphs_commute(a, b);
        self.commute.insert(key, c);
        c
    }

    /// `θ ∈ [0, 2π)` with `e^{-iθ} = z`, for `z` a rational multiple of π on the unit circle.
    pub fn angle_of(z: C64) -> Option<RationalAngle> {
        RationalAngle::from_unit_phase(z, PHASE_MAX_DEN, tolerance::CLASSIFICATION)
    }
}
