//! Probability-simplex utilities: Euclidean projection and seeded
//! Dirichlet sampling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use crate::dist::{Shape, TripartiteDistribution};
use crate::error::{Error, Result};

/// Euclidean projection onto `{p : p >= 0, sum p = 1}`.
///
/// Sort-then-threshold: find the largest `k` such that the `k`-th largest
/// entry stays positive after subtracting `(sum of top k - 1) / k`, then
/// shift everything by that threshold and clip at zero.
pub fn project_to_simplex(v: &[f64]) -> Result<Vec<f64>> {
    if v.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(index) = v.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));

    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let t = (cumsum - 1.0) / (j + 1) as f64;
        if u - t > 0.0 {
            theta = t;
        } else {
            break;
        }
    }
    Ok(v.iter().map(|&x| (x - theta).max(0.0)).collect())
}

/// Draws a joint distribution from a symmetric Dirichlet with the given
/// concentration, one Gamma variate per cell, normalized.
///
/// The generator is ChaCha8 seeded with `seed`, so output is reproducible
/// across platforms and runs.
pub fn dirichlet_sample(shape: Shape, concentration: f64, seed: u64) -> Result<TripartiteDistribution> {
    if !(concentration > 0.0) || !concentration.is_finite() {
        return Err(Error::NonPositiveConcentration(concentration));
    }
    let gamma = Gamma::new(concentration, 1.0)
        .map_err(|_| Error::NonPositiveConcentration(concentration))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = shape.cells();
    loop {
        let draws: Vec<f64> = (0..n).map(|_| gamma.sample(&mut rng)).collect();
        let total: f64 = draws.iter().sum();
        // very small concentrations can underflow every cell
        if total > 0.0 && total.is_finite() {
            let probs = draws.into_iter().map(|g| g / total).collect();
            return TripartiteDistribution::new(probs, shape);
        }
    }
}

/// Mixes a base seed with a stream index (splitmix64 finalizer).
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
