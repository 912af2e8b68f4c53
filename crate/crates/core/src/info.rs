//! Entropies, mutual information and guessing probabilities, all in bits.

use serde::{Deserialize, Serialize};

use crate::dist::{check_probs, PairDistribution, TripartiteDistribution, VarId};
use crate::error::{Error, Result};

#[inline]
fn plog2p(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

pub(crate) fn entropy_unchecked(p: &[f64]) -> f64 {
    p.iter().map(|&x| plog2p(x)).sum()
}

/// Shannon entropy in bits, with `0 log 0 = 0`.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if p.is_empty() {
        return Err(Error::InvalidDistribution("empty distribution".into()));
    }
    let p = check_probs(p.to_vec()).map_err(|e| Error::InvalidDistribution(e.to_string()))?;
    Ok(entropy_unchecked(&p))
}

/// Binary entropy `H(p) = -p log2 p - (1-p) log2 (1-p)`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(p));
    }
    Ok(binary_entropy_unchecked(p))
}

#[inline]
pub(crate) fn binary_entropy_unchecked(p: f64) -> f64 {
    plog2p(p) + plog2p(1.0 - p)
}

fn mi_unchecked(pair: &PairDistribution) -> f64 {
    let rows = pair.row_marginal();
    let cols = pair.col_marginal();
    let mut total = 0.0;
    for (r, &qr) in rows.iter().enumerate() {
        for (c, &qc) in cols.iter().enumerate() {
            let q = pair.get(r, c);
            if q > 0.0 {
                total += q * (q / (qr * qc)).log2();
            }
        }
    }
    total
}

/// Mutual information between the row and column variables of `pair`.
pub fn mutual_information(pair: &PairDistribution) -> Result<f64> {
    recheck(pair)?;
    Ok(mi_unchecked(pair))
}

fn guess_unchecked(pair: &PairDistribution) -> f64 {
    (0..pair.cols())
        .map(|c| (0..pair.rows()).map(|r| pair.get(r, c)).fold(0.0, f64::max))
        .sum()
}

/// Success probability of guessing the row variable from the column
/// variable with the maximum-likelihood rule: `Σ_col max_row q(row, col)`.
pub fn guessing_probability(pair: &PairDistribution) -> Result<f64> {
    recheck(pair)?;
    Ok(guess_unchecked(pair))
}

/// `H(row | col)` in bits. Zero-mass columns contribute nothing.
pub fn conditional_entropy(pair: &PairDistribution) -> Result<f64> {
    recheck(pair)?;
    Ok(cond_entropy_unchecked(pair))
}

fn cond_entropy_unchecked(pair: &PairDistribution) -> f64 {
    (entropy_unchecked(pair.probs()) - entropy_unchecked(&pair.col_marginal())).max(0.0)
}

// PairDistribution can only be built valid; this guards against NaN
// sneaking in through crate-internal raw construction.
fn recheck(pair: &PairDistribution) -> Result<()> {
    if pair.probs().iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::InvalidDistribution("non-finite or negative cell".into()));
    }
    let sum: f64 = pair.probs().iter().sum();
    if (sum - 1.0).abs() > crate::dist::NORM_TOL {
        return Err(Error::InvalidDistribution(format!("sums to {sum}")));
    }
    Ok(())
}

/// Fano bound on `H(X|Y)` for optimal-guess error `p_err` over `k` symbols.
pub fn fano_bound(p_err: f64, k: usize) -> f64 {
    let p_err = p_err.clamp(0.0, 1.0);
    let tail = if k > 1 && p_err > 0.0 {
        p_err * ((k - 1) as f64).log2()
    } else {
        0.0
    };
    binary_entropy_unchecked(p_err) + tail
}

/// Both sides of the implication `P_B > P_E ⇒ I(A;B) > I(A;E)` for one
/// joint distribution, with Alice as the guessed party.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfoReport {
    /// Bob's guessing probability for Alice's outcome.
    pub p_b: f64,
    /// Eve's guessing probability for Alice's outcome.
    pub p_e: f64,
    pub i_ab: f64,
    pub i_ae: f64,
    /// Entropy of Alice's marginal.
    pub h_a: f64,
    /// `p_b > p_e` (and `p_b - p_e >= margin` when a margin was requested).
    pub premise_holds: bool,
    /// Premise holds yet `i_ae > i_ab`.
    pub implication_violated: bool,
    /// Fano bound minus `H(A|B)`; nonnegative up to round-off.
    pub fano_slack_b: f64,
    /// Fano bound minus `H(A|E)`.
    pub fano_slack_e: f64,
}

impl InfoReport {
    /// `i_ae - i_ab`.
    pub fn gap(&self) -> f64 {
        self.i_ae - self.i_ab
    }

    /// Largest absolute difference over the numeric fields.
    pub fn max_deviation(&self, other: &InfoReport) -> f64 {
        [
            self.p_b - other.p_b,
            self.p_e - other.p_e,
            self.i_ab - other.i_ab,
            self.i_ae - other.i_ae,
            self.h_a - other.h_a,
            self.fano_slack_b - other.fano_slack_b,
            self.fano_slack_e - other.fano_slack_e,
        ]
        .iter()
        .fold(0.0, |m, d| m.max(d.abs()))
    }

    pub(crate) fn with_flags(mut self, margin: f64) -> Self {
        self.premise_holds = premise(self.p_b, self.p_e, margin);
        self.implication_violated = self.premise_holds && self.i_ae > self.i_ab;
        self
    }
}

/// Strict `p_b > p_e`; a positive margin additionally demands `p_b - p_e >= margin`.
pub fn premise(p_b: f64, p_e: f64, margin: f64) -> bool {
    p_b > p_e && p_b - p_e >= margin
}

/// [`analyze_tripartite_with_margin`] with margin 0.
pub fn analyze_tripartite(dist: &TripartiteDistribution) -> InfoReport {
    analyze_tripartite_with_margin(dist, 0.0)
}

/// Evaluates guessing probabilities and mutual informations of Alice with
/// Bob and with Eve, plus the premise/violation flags and Fano diagnostics.
pub fn analyze_tripartite_with_margin(dist: &TripartiteDistribution, margin: f64) -> InfoReport {
    // marginals of a validated distribution are themselves valid
    let ab = dist.marginal_pair(VarId::Alice, VarId::Bob).expect("distinct vars");
    let ae = dist.marginal_pair(VarId::Alice, VarId::Eve).expect("distinct vars");
    let alice = dist.shape().alice;

    let p_b = guess_unchecked(&ab);
    let p_e = guess_unchecked(&ae);
    let h_a = entropy_unchecked(&ab.row_marginal());
    InfoReport {
        p_b,
        p_e,
        i_ab: mi_unchecked(&ab),
        i_ae: mi_unchecked(&ae),
        h_a,
        premise_holds: false,
        implication_violated: false,
        fano_slack_b: fano_bound(1.0 - p_b, alice) - cond_entropy_unchecked(&ab),
        fano_slack_e: fano_bound(1.0 - p_e, alice) - cond_entropy_unchecked(&ae),
    }
    .with_flags(margin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counterexample::build_counterexample;
    use crate::dist::Shape;
    use crate::simplex::dirichlet_sample;
    use proptest::prelude::*;

    // Reference values computed independently (python, math.log2):
    //   H(0.75, 0.25)       = 0.8112781244591328
    //   H(0.04)             = 0.24229218908241482
    //   1 - H(1/4)          = 0.18872187554086717
    //   0.5 - 0.5 * H(0.2)  = 0.13903595255631884
    const H_075: f64 = 0.8112781244591328;
    const H_004: f64 = 0.24229218908241482;
    const I_AB_REFERENCE: f64 = 0.18872187554086717;
    const I_AE_EPS_005: f64 = 0.13903595255631884;

    fn pair(rows: &[Vec<f64>]) -> PairDistribution {
        PairDistribution::from_rows(rows).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert!((shannon_entropy(&[0.25; 4]).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(shannon_entropy(&[1.0, 0.0]).unwrap(), 0.0);
        assert!((shannon_entropy(&[0.75, 0.25]).unwrap() - H_075).abs() < 1e-15);
        assert!(shannon_entropy(&[0.5, 0.4]).is_err());
        assert!(shannon_entropy(&[]).is_err());
    }

    #[test]
    fn binary_entropy_examples() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.04).unwrap() - H_004).abs() < 1e-15);
        assert!(matches!(binary_entropy(1.5), Err(Error::OutOfRange(_))));
        assert!(binary_entropy(f64::NAN).is_err());
    }

    #[test]
    fn mi_examples() {
        let indep = pair(&[vec![0.25, 0.25], vec![0.25, 0.25]]);
        assert!(mutual_information(&indep).unwrap().abs() < 1e-15);
        let copy = pair(&[vec![0.5, 0.0], vec![0.0, 0.5]]);
        assert!((mutual_information(&copy).unwrap() - 1.0).abs() < 1e-15);
        for eps in [0.0, 0.01, 0.2] {
            let d = build_counterexample(eps).unwrap();
            let ab = d.marginal_pair(VarId::Alice, VarId::Bob).unwrap();
            assert!((mutual_information(&ab).unwrap() - I_AB_REFERENCE).abs() < 1e-12);
        }
    }

    #[test]
    fn guessing_examples() {
        let d = build_counterexample(0.01).unwrap();
        let ab = d.marginal_pair(VarId::Alice, VarId::Bob).unwrap();
        let ae = d.marginal_pair(VarId::Alice, VarId::Eve).unwrap();
        assert!((guessing_probability(&ab).unwrap() - 0.75).abs() < 1e-15);
        assert!((guessing_probability(&ae).unwrap() - 0.73).abs() < 1e-15);
        let indep = pair(&[vec![0.25, 0.25], vec![0.25, 0.25]]);
        assert_eq!(guessing_probability(&indep).unwrap(), 0.5);
    }

    #[test]
    fn analyze_reference_instance_violates() {
        let r = analyze_tripartite(&build_counterexample(0.01).unwrap());
        assert!(r.premise_holds);
        assert!(r.implication_violated);
        assert!((r.h_a - 1.0).abs() < 1e-15);
    }

    #[test]
    fn analyze_perfect_eavesdropper() {
        // Eve copies Alice, Bob is an independent fair coin.
        let mut probs = vec![0.0; 8];
        let s = Shape::new(2, 2, 2).unwrap();
        for b in 0..2 {
            for a in 0..2 {
                probs[s.index(b, a, a)] = 0.25;
            }
        }
        let d = TripartiteDistribution::new(probs, s).unwrap();
        let r = analyze_tripartite(&d);
        assert_eq!(r.p_e, 1.0);
        assert_eq!(r.p_b, 0.5);
        assert!(!r.premise_holds);
        assert!(!r.implication_violated);
        assert!((r.i_ae - 1.0).abs() < 1e-15);
        assert!(r.i_ab.abs() < 1e-15);
    }

    #[test]
    fn analyze_outside_violation_region() {
        let r = analyze_tripartite(&build_counterexample(0.05).unwrap());
        assert!(r.premise_holds);
        assert!(!r.implication_violated);
        assert!((r.i_ae - I_AE_EPS_005).abs() < 1e-12);
    }

    #[test]
    fn margin_tightens_premise() {
        let d = build_counterexample(0.01).unwrap();
        assert!(analyze_tripartite_with_margin(&d, 0.019).premise_holds);
        assert!(!analyze_tripartite_with_margin(&d, 0.03).premise_holds);
        assert!(!analyze_tripartite_with_margin(&d, 0.03).implication_violated);
    }

    #[test]
    fn fano_single_symbol_alice() {
        assert_eq!(fano_bound(0.0, 1), 0.0);
        let d = TripartiteDistribution::uniform(Shape::new(2, 1, 3).unwrap());
        let r = analyze_tripartite(&d);
        assert_eq!((r.p_b, r.p_e, r.i_ab, r.i_ae), (1.0, 1.0, 0.0, 0.0));
        assert!(r.fano_slack_b.abs() < 1e-15);
    }

    #[test]
    fn random_reports_satisfy_invariants() {
        for k in 2..=4 {
            let s = Shape::new(2, 2, k).unwrap();
            for seed in 0..200 {
                let d = dirichlet_sample(s, 1.0, seed).unwrap();
                let r = analyze_tripartite(&d);
                let amax = d.marginal_single(VarId::Alice).into_iter().fold(0.0, f64::max);
                assert!(r.i_ab >= -1e-12 && r.i_ab <= r.h_a + 1e-12);
                assert!(r.i_ae >= -1e-12 && r.i_ae <= r.h_a + 1e-12);
                assert!(r.p_b >= amax - 1e-12 && r.p_b <= 1.0 + 1e-12);
                assert!(r.p_e >= amax - 1e-12 && r.p_e <= 1.0 + 1e-12);
                assert!(r.fano_slack_b >= -1e-9 && r.fano_slack_e >= -1e-9);
                assert!(!r.implication_violated || r.premise_holds);
            }
        }
    }

    fn table(rows: usize, cols: usize) -> impl Strategy<Value = PairDistribution> {
        prop::collection::vec(0.0f64..1.0, rows * cols)
            .prop_filter("nonzero mass", |v| v.iter().sum::<f64>() > 1e-3)
            .prop_map(move |v| {
                let s: f64 = v.iter().sum();
                PairDistribution::new(rows, cols, v.iter().map(|x| x / s).collect()).unwrap()
            })
    }

    fn any_table() -> impl Strategy<Value = PairDistribution> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| table(r, c))
    }

    fn permuted(p: &PairDistribution, rows: &[usize], cols: &[usize]) -> PairDistribution {
        let mut out = Vec::new();
        for &r in rows {
            for &c in cols {
                out.push(p.get(r, c));
            }
        }
        PairDistribution::new(p.rows(), p.cols(), out).unwrap()
    }

    proptest! {
        #[test]
        fn mi_symmetric(p in any_table()) {
            let a = mutual_information(&p).unwrap();
            let b = mutual_information(&p.transpose()).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
        }

        #[test]
        fn mi_bounded(p in any_table()) {
            let i = mutual_information(&p).unwrap();
            let hr = entropy_unchecked(&p.row_marginal());
            let hc = entropy_unchecked(&p.col_marginal());
            prop_assert!(i >= -1e-12 && i <= hr.min(hc) + 1e-12);
        }

        #[test]
        fn guessing_invariant_under_relabeling(
            p in (3usize..=3, 4usize..=4).prop_flat_map(|(r, c)| table(r, c)),
            rp in Just(vec![0usize, 1, 2]).prop_shuffle(),
            cp in Just(vec![0usize, 1, 2, 3]).prop_shuffle(),
        ) {
            let g = guessing_probability(&p).unwrap();
            let q = permuted(&p, &rp, &cp);
            prop_assert!((guessing_probability(&q).unwrap() - g).abs() < 1e-15);
        }

        #[test]
        fn guessing_one_iff_columns_pure(p in any_table(), zero_mask in prop::collection::vec(any::<bool>(), 16)) {
            // Zero out cells to produce both pure and mixed columns.
            let mut probs = p.probs().to_vec();
            for (i, z) in zero_mask.iter().enumerate().take(probs.len()) {
                if *z { probs[i] = 0.0; }
            }
            let s: f64 = probs.iter().sum();
            prop_assume!(s > 1e-3);
            let q = PairDistribution::new(p.rows(), p.cols(), probs.iter().map(|x| x / s).collect()).unwrap();
            let pure = (0..q.cols()).all(|c| {
                let col: Vec<f64> = (0..q.rows()).map(|r| q.get(r, c)).collect();
                let max = col.iter().cloned().fold(0.0, f64::max);
                col.iter().sum::<f64>() - max <= 1e-12
            });
            let g = guessing_probability(&q).unwrap();
            prop_assert_eq!(pure, (g - 1.0).abs() <= 1e-12);
        }
    }
}
