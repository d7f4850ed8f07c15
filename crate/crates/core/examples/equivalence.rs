//! Global-phase equivalence and commutation checks.

use dqwalk::graph_model::{DynamicGraph, Graph, RationalAngle, TimedGraph};
use dqwalk::numerics::phase_distance;
use dqwalk::walk_engine::{graphs_commute, total_unitary};

fn main() {
    let left = Graph::xor_matching(4, 0b10, |_| true);
    let right = Graph::xor_matching(4, 0b01, |_| true);
    let loops = Graph::all_loops(4);
    let half = RationalAngle::new(1, 2);
    let a = DynamicGraph::from_steps(4, [TimedGraph::new(left.clone(), half), TimedGraph::new(right.clone(), half)])
        .unwrap();
    let b = DynamicGraph::from_steps(4, [TimedGraph::new(right.clone(), half), TimedGraph::new(left.clone(), half)])
        .unwrap();
    let c = DynamicGraph::from_steps(4, [TimedGraph::new(left.clone(), half)]).unwrap();
    let d = |x: &DynamicGraph, y: &DynamicGraph| phase_distance(&total_unitary(x), &total_unitary(y)).unwrap();
    println!("matchings in either order: distance {:.1e}", d(&a, &b));
    println!("one matching against two: distance {:.3}", d(&a, &c));
    println!("left and right matchings commute: {}", graphs_commute(&left, &right));
    println!("left matching and all loops commute: {}", graphs_commute(&left, &loops));
    let path = Graph::new(4, [(0, 1), (1, 2)], []).unwrap();
    println!("left matching and a path commute: {}", graphs_commute(&left, &path));
}
