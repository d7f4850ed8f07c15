//! Recovers a program from a printed state trace and optimizes it.

#[path = "../tests/support/mod.rs"]
mod support;

use dqwalk::rewrite_optimizer::{optimize, OptimizerConfig};
use dqwalk::walk_engine::catalog::{recover_from_trace, spans_to_program, RecoveredSpan};

fn main() {
    for (name, text) in [("sequential", support::SEQUENTIAL_TRACE), ("reduced", support::REDUCED_TRACE)] {
        let maps = support::parse_trace(text, 8);
        let spans = recover_from_trace(&maps);
        for span in &spans {
            match span {
                RecoveredSpan::Steps { arrows, steps } if steps.len() > 1 => {
                    println!("{name}: arrows {arrows:?} recovered jointly as {} steps", steps.len())
                }
                RecoveredSpan::Opaque { arrow, .. } => println!("{name}: arrow {arrow} has no catalog graph"),
                _ => {}
            }
        }
        match spans_to_program(8, &spans) {
            Some(program) => {
                let (out, report) = optimize(&program, &OptimizerConfig::default());
                println!(
                    "{name}: {} graphs {} -> {} graphs {} in {} rewrites",
                    program.len(),
                    program.total_time(),
                    out.len(),
                    out.total_time(),
                    report.steps.len()
                );
            }
            None => println!("{name}: not fully recoverable"),
        }
    }
}
