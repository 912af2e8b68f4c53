//! Locates the ε where the family stops violating the implication.

use guessgap::counterexample::closed_form_gap;
use guessgap::{closed_form_report, violation_boundary};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let eps_star = violation_boundary();
    println!("eps* = {eps_star:.10} (residual {:.1e})", closed_form_gap(eps_star).abs());
    for eps in [eps_star - 1e-4, eps_star + 1e-4] {
        let r = closed_form_report(eps)?;
        println!(
            "eps = {eps:.6}: gap = {:+.3e}, violated = {}",
            r.gap(),
            r.implication_violated
        );
    }
    assert!(closed_form_report(eps_star - 1e-4)?.implication_violated);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
