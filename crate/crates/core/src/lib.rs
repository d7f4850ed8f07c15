//! Continuous-time quantum walks on dynamic graphs.
//!
//! A dynamic graph is a sequence of graphs, each evolved for an exact
//! duration. This crate simulates such programs, compiles small quantum
//! circuits into them, and shortens them with a set of verified rewrites.
//!
//! ```
//! use dqwalk::graph_model::{DynamicGraph, Graph, RationalAngle, TimedGraph};
//! use dqwalk::walk_engine::total_unitary;
//!
//! // Flip the middle qubit of three: a perfect matching at π/2, then a phase fix.
//! let program = DynamicGraph::from_steps(8, [
//!     TimedGraph::new(Graph::xor_matching(8, 0b010, |_| true), RationalAngle::new(1, 2)),
//!     TimedGraph::new(Graph::all_loops(8), RationalAngle::new(3, 2)),
//! ]).unwrap();
//! let u = total_unitary(&program);
//! assert!((u[(0b000, 0b010)].re - 1.0).abs() < 1e-12);
//! ```

mod angle;
pub mod cli;
pub mod gate_compiler;
pub mod graph_model;
pub mod numerics;
pub mod rewrite_optimizer;
pub mod tolerance;
pub mod walk_engine;
