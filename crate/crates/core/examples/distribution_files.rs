//! Writes a random joint distribution to disk, reads it back bit-exactly and
//! analyzes it.

use guessgap::io::{load_distribution, save_distribution};
use guessgap::{analyze_tripartite, dirichlet_sample, Shape};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dist = dirichlet_sample(Shape::new(2, 3, 4)?, 0.8, 7)?;
    let path = std::env::temp_dir().join(format!("guessgap_example_{}.json", std::process::id()));
    save_distribution(&dist, &path)?;
    let back = load_distribution(&path)?;
    std::fs::remove_file(&path)?;
    assert_eq!(back, dist);

    let r = analyze_tripartite(&back);
    println!("shape {}: {} cells, reloaded bit-exactly", back.shape(), back.probs().len());
    println!("  H(A) = {:.6}", r.h_a);
    println!("  P_B = {:.6}, I(A;B) = {:.6}, Fano slack {:.6}", r.p_b, r.i_ab, r.fano_slack_b);
    println!("  P_E = {:.6}, I(A;E) = {:.6}, Fano slack {:.6}", r.p_e, r.i_ae, r.fano_slack_e);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
