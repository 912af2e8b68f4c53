//! Sweeps ε across the admissible range and writes a CSV table and an SVG
//! chart. Pass an output directory as the first argument (defaults to the
//! system temp dir).

use std::path::PathBuf;

use guessgap::io::{emit_sweep_csv, first_sign_change, render_sweep_svg};
use guessgap::sweep;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let out_dir = std::env::args()
        .nth(1)
        .filter(|a| !a.starts_with('-'))
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);

    let rows = sweep(0.0, 0.125, 51)?;
    for r in rows.iter().step_by(5) {
        println!(
            "eps={:.4}  P_B-P_E={:.4}  I(A;B)={:.4}  I(A;E)={:.4}  gap={:+.4}",
            r.epsilon,
            r.p_b - r.p_e,
            r.i_ab,
            r.i_ae,
            r.gap
        );
    }
    if let Some(eps) = first_sign_change(&rows) {
        println!("gap changes sign near eps = {eps:.5}");
    }

    let csv = out_dir.join("guessgap_sweep.csv");
    let svg = out_dir.join("guessgap_sweep.svg");
    emit_sweep_csv(&rows, &csv)?;
    render_sweep_svg(&rows, &svg)?;
    println!("wrote {} and {}", csv.display(), svg.display());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
