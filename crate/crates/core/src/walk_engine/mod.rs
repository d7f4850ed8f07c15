//! Simulation and structural analysis of dynamic graphs.

pub mod catalog;

use crate::graph_model::{DynamicGraph, Graph, TimedGraph};
use crate::numerics::{self, ComplexMatrix, NumericsError, StateVector, C64};
use crate::tolerance;

/// `e^{-iAt/‖A‖}` for one step; the identity for an empty graph or zero duration.
pub fn step_unitary(tg: &TimedGraph) -> ComplexMatrix {
    let g = &tg.graph;
    let n = g.n_vertices();
    if tg.duration.is_zero() || g.is_empty() {
        return ComplexMatrix::identity(n);
    }
    if g.is_loops_only() {
        let phase = C64::from_polar(1.0, -tg.duration.radians());
        let diag: Vec<C64> = (0..n).map(|v| if g.has_loop(v) { phase } else { C64::new(1.0, 0.0) }).collect();
        return ComplexMatrix::diagonal(&diag);
    }
    numerics::unitary_from_eigen(&g.eigen(), tg.duration.radians())
}

/// Product of the step unitaries, later steps on the left.
pub fn total_unitary(dg: &DynamicGraph) -> ComplexMatrix {
    product_of(dg.steps().iter().map(step_unitary), dg.n_vertices())
}

/// Multiplies unitaries given in execution order.
pub fn product_of(unitaries: impl IntoIterator<Item = ComplexMatrix>, dim: usize) -> ComplexMatrix {
    unitaries.into_iter().fold(ComplexMatrix::identity(dim), |acc, u| &u * &acc)
}

/// Runs the walk from `psi0`.
pub fn evolve_state(dg: &DynamicGraph, psi0: &StateVector) -> Result<StateVector, NumericsError> {
    if psi0.dim() != dg.n_vertices() {
        return Err(NumericsError::DimensionMismatch { expected: dg.n_vertices(), found: psi0.dim() });
    }
    dg.steps().iter().try_fold(psi0.clone(), |psi, step| step_unitary(step).apply(&psi))
}

/// Exact integer test of `A₁A₂ = A₂A₁`.
///
/// Panics if the graphs have different vertex counts.
pub fn graphs_commute(g1: &Graph, g2: &Graph) -> bool {
    assert_eq!(g1.n_vertices(), g2.n_vertices(), "graphs must share a vertex set");
    let n = g1.n_vertices();
    let neighbours = |g: &Graph| {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in g.edges() {
            adj[a].push(b);
            adj[b].push(a);
        }
        for &v in g.loops() {
            adj[v].push(v);
        }
        adj
    };
    let (a1, a2) = (neighbours(g1), neighbours(g2));
    let product = |x: &[Vec<usize>], y: &[Vec<usize>], r: usize| {
        let mut row = vec![0i64; n];
        for &k in &x[r] {
            for &c in &y[k] {
                row[c] += 1;
            }
        }
        row
    };
    (0..n).all(|r| product(&a1, &a2, r) == product(&a2, &a1, r))
}

/// A step unitary of the form `γ·X_mask`, where `X_mask` sends `|v⟩` to `|v ⊕ mask⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasedBitFlip {
    pub flip_mask: usize,
    pub phase: C64,
}

impl PhasedBitFlip {
    pub fn identity() -> Self {
        Self { flip_mask: 0, phase: C64::new(1.0, 0.0) }
    }

    /// The classification of `other · self` (apply `self` first).
    pub fn then(&self, other: &Self) -> Self {
        Self { flip_mask: self.flip_mask ^ other.flip_mask, phase: self.phase * other.phase }
    }

    pub fn unitary(&self, dim: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(dim, |r, c| if r == c ^ self.flip_mask { self.phase } else { C64::new(0.0, 0.0) })
    }
}

/// Classifies a step as a phased bit flip, if it is one.
pub fn classify_phased_bitflip(tg: &TimedGraph) -> Option<PhasedBitFlip> {
    if tg.duration.is_zero() {
        return Some(PhasedBitFlip::identity());
    }
    classify_unitary(&step_unitary(tg))
}

/// Classifies a unitary on a power-of-two dimension as `γ·X_mask`.
pub fn classify_unitary(u: &ComplexMatrix) -> Option<PhasedBitFlip> {
    let n = u.dim();
    if !n.is_power_of_two() {
        return None;
    }
    let mask = (0..n).max_by(|&a, &b| u[(a, 0)].norm().total_cmp(&u[(b, 0)].norm()))?;
    let candidate = PhasedBitFlip { flip_mask: mask, phase: u[(mask, 0)] };
    if (candidate.phase.norm() - 1.0).abs() > tolerance::CLASSIFICATION {
        return None;
    }
    let fits = (0..n).all(|c| {
        (0..n).all(|r| {
            let want = if r == c ^ mask { candidate.phase } else { C64::new(0.0, 0.0) };
            (u[(r, c)] - want).norm() <= tolerance::CLASSIFICATION
        })
    });
    fits.then_some(candidate)
}
