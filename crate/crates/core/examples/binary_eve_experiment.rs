//! With every party binary, can P_B > P_E still coexist with
//! I(A;E) > I(A;B)? Runs the exhaustive grid and the continuous search side
//! by side for several margins and reports what each finds.

use guessgap::{brute_force_grid, run_search, Error, SearchConfig, Shape};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let shape = Shape::new(2, 2, 2)?;
    println!("{:>6} {:>12} {:>12} {:>10}", "delta", "grid(10)", "search", "violated");
    for delta in [0.0, 0.02, 0.05, 0.1] {
        let grid = match brute_force_grid(shape, 10, delta) {
            Ok(r) => format!("{:.6}", r.objective),
            Err(Error::NoFeasiblePoint) => "none".into(),
            Err(e) => return Err(e.into()),
        };
        let cfg = SearchConfig { shape, delta, restarts: 30, ..SearchConfig::default() };
        let (found, violated) = match run_search(&cfg) {
            Ok(r) => (format!("{:.6}", r.report.gap()), r.report.implication_violated.to_string()),
            Err(Error::NoFeasiblePoint) => ("none".into(), "-".into()),
            Err(e) => return Err(e.into()),
        };
        println!("{delta:>6.2} {grid:>12} {found:>12} {violated:>10}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
