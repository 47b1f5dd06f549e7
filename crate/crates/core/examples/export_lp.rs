//! Writes the mixed-integer model of the seven-vertex example in LP format
//! and checks the optimal path against it with exact arithmetic.

use spedac::export::{export_flow_model, induced_assignment, verify_model_at_point, SecMode};
use spedac::fixtures::seven_vertex;
use spedac::solvers::{branch_and_bound, BranchAndBoundConfig};

fn main() {
    let inst = seven_vertex(10);
    let model = export_flow_model(&inst, SecMode::Mtz);
    print!("{}", model.render());

    let best = branch_and_bound(&inst, &BranchAndBoundConfig::default()).incumbent.unwrap();
    let check = verify_model_at_point(&model, &induced_assignment(&inst, &best, SecMode::Mtz)).unwrap();
    eprintln!("optimal path evaluates to {} in the model, {} violations", check.objective, check.violations.len());
}
