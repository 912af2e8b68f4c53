//! Entropy, mutual information and guessing probability on small tables,
//! plus the simplex projection used by the search.

use guessgap::{binary_entropy, guessing_probability, mutual_information, project_to_simplex, shannon_entropy, PairDistribution};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    println!("H(0.75, 0.25) = {:.6}", shannon_entropy(&[0.75, 0.25])?);
    println!("H(0.04)       = {:.6}", binary_entropy(0.04)?);

    // rows: guessed variable, cols: observation
    let noisy = PairDistribution::from_rows(&[vec![0.375, 0.125], vec![0.125, 0.375]])?;
    let lopsided = PairDistribution::from_rows(&[vec![0.24, 0.125, 0.125, 0.01], vec![0.01, 0.125, 0.125, 0.24]])?;
    for (name, t) in [("symmetric channel", &noisy), ("four-symbol observer", &lopsided)] {
        println!(
            "{name:>22}: guessing {:.4}, mutual information {:.4}",
            guessing_probability(t)?,
            mutual_information(t)?
        );
    }

    let p = project_to_simplex(&[0.9, 0.4, -0.2])?;
    println!("projection of (0.9, 0.4, -0.2) onto the simplex: {p:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("example failed");
}
