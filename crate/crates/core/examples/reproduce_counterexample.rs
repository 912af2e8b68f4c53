//! Builds the eight-cell counterexample at ε = 0.01, analyzes it, and checks
//! the numbers against the closed forms.

use guessgap::counterexample::CounterexampleParams;
use guessgap::{analyze_tripartite, build_counterexample, closed_form_report, verify_counterexample};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let epsilon = 0.01;
    let dist = build_counterexample(epsilon)?;
    let shape = dist.shape();

    println!("nonzero cells P(bob, alice, eve):");
    for (i, p) in dist.probs().iter().enumerate().filter(|(_, p)| **p > 0.0) {
        let (b, a, e) = shape.coords(i);
        println!("  P[{b}{a}{e}] = {p}");
    }

    let report = analyze_tripartite(&dist);
    let closed = closed_form_report(epsilon)?;
    let params = CounterexampleParams::new(epsilon)?;
    println!("             analyzed    closed form");
    println!("  P_B      {:>10.6}  {:>10.6}", report.p_b, closed.p_b);
    println!("  P_E      {:>10.6}  {:>10.6}", report.p_e, closed.p_e);
    println!("  I(A;B)   {:>10.6}  {:>10.6}", report.i_ab, closed.i_ab);
    println!("  I(A;E)   {:>10.6}  {:>10.6}   (= 0.5 - eps', eps' = {:.6})", report.i_ae, closed.i_ae, params.epsilon_prime);

    let check = verify_counterexample(epsilon, 1e-12)?;
    println!(
        "P_B > P_E: {}   I(A;E) > I(A;B): {}   max deviation {:.1e}",
        report.premise_holds, report.implication_violated, check.max_deviation
    );
    assert!(report.implication_violated);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
