//! Multi-restart search for the largest gap I(A;E) - I(A;B) with a binary
//! Alice and Bob and a four-outcome Eve, under P_B - P_E >= 0.02.

use guessgap::{analyze_tripartite, build_counterexample, run_search, SearchConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SearchConfig { restarts: 24, ..SearchConfig::default() };
    let warm = analyze_tripartite(&build_counterexample(0.01)?);
    let best = run_search(&cfg)?;

    println!("warm start (eps = 0.01): gap {:.6}", warm.gap());
    println!(
        "best found: gap {:.6}, P_B - P_E = {:.6}, restart {}, {} iterations",
        best.report.gap(),
        best.report.p_b - best.report.p_e,
        best.restart_index,
        best.iterations_used
    );
    let shape = best.best_dist.shape();
    for (i, p) in best.best_dist.probs().iter().enumerate().filter(|(_, p)| **p > 1e-9) {
        let (b, a, e) = shape.coords(i);
        println!("  P[{b}{a}{e}] = {p:.6}");
    }
    assert!(best.feasible && best.objective >= warm.gap() - 1e-9);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
