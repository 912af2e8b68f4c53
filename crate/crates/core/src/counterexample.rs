//! The eight-cell counterexample family with binary Alice and Bob and a
//! four-outcome Eve, its closed-form information report, ε-sweeps and the
//! exact edge of the violation region.
//!
//! Eve's outcomes 0 and 3 identify Alice's bit almost perfectly but occur
//! only half the time; outcomes 1 and 2 carry nothing about Alice. Bob sees
//! Alice through a symmetric channel with error 1/4. Eve therefore guesses
//! slightly worse than Bob while holding more mutual information.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::{Shape, TripartiteDistribution};
use crate::error::{Error, Result};
use crate::info::{analyze_tripartite, binary_entropy_unchecked, InfoReport};

/// Largest ε keeping every cell of the family nonnegative.
pub const EPSILON_MAX: f64 = 0.25;

/// The reference instance, ε = 1/100.
pub const REFERENCE_EPSILON: f64 = 0.01;

const BOUNDARY_TOL: f64 = 1e-10;
const BOUNDARY_MAX_ITERS: usize = 60;
const SWEEP_CROSSCHECK_TOL: f64 = 1e-9;

/// ε together with the derived `ε' = H(4ε) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleParams {
    pub epsilon: f64,
    pub epsilon_prime: f64,
}

impl CounterexampleParams {
    pub fn new(epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(CounterexampleParams {
            epsilon,
            epsilon_prime: 0.5 * binary_entropy_unchecked(4.0 * epsilon),
        })
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if (0.0..=EPSILON_MAX).contains(&epsilon) {
        Ok(())
    } else {
        Err(Error::EpsilonOutOfRange(epsilon))
    }
}

/// The family as a (Bob, Alice, Eve) = (2, 2, 4) distribution.
pub fn build_counterexample(epsilon: f64) -> Result<TripartiteDistribution> {
    check_epsilon(epsilon)?;
    let shape = Shape::new(2, 2, 4)?;
    let mut probs = vec![0.0; shape.cells()];
    let cells = [
        ((0, 0, 0), 0.25 - epsilon),
        ((1, 1, 0), epsilon),
        ((0, 0, 1), 0.125),
        ((0, 1, 1), 0.125),
        ((1, 0, 2), 0.125),
        ((1, 1, 2), 0.125),
        ((0, 0, 3), epsilon),
        ((1, 1, 3), 0.25 - epsilon),
    ];
    for ((b, a, e), p) in cells {
        probs[shape.index(b, a, e)] = p;
    }
    TripartiteDistribution::new(probs, shape)
}

/// Closed forms of the family:
///
/// * `p_b = 3/4`
/// * `p_e = 1/4 + 2 max(1/4 - ε, ε)`, which is `3/4 - 2ε` for `ε <= 1/8`;
///   past 1/8 Eve's best guess in her outcomes 0 and 3 flips
/// * `i_ab = 1 - H(1/4)` for every ε
/// * `i_ae = 1/2 - H(4ε)/2`
///
/// Alice's marginal is a fair bit, so `h_a = 1`. The Fano slacks follow from
/// `H(A|B) = H(1/4)` and `H(A|E) = 1/2 + H(4ε)/2`.
pub fn closed_form_report(epsilon: f64) -> Result<InfoReport> {
    let params = CounterexampleParams::new(epsilon)?;
    let h_quarter = binary_entropy_unchecked(0.25);
    let p_b = 0.75;
    let p_e = 0.25 + 2.0 * (0.25 - epsilon).max(epsilon);
    let h_a_given_e = 0.5 + params.epsilon_prime;
    Ok(InfoReport {
        p_b,
        p_e,
        i_ab: 1.0 - h_quarter,
        i_ae: 0.5 - params.epsilon_prime,
        h_a: 1.0,
        premise_holds: false,
        implication_violated: false,
        fano_slack_b: binary_entropy_unchecked(1.0 - p_b) - h_quarter,
        fano_slack_e: binary_entropy_unchecked(1.0 - p_e) - h_a_given_e,
    }
    .with_flags(0.0))
}

/// Outcome of checking the constructed family against its closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub epsilon: f64,
    pub tol: f64,
    /// Computed from the constructed distribution.
    pub computed: InfoReport,
    pub closed_form: InfoReport,
    pub max_deviation: f64,
    /// ε lies strictly inside the violation region.
    pub in_violation_region: bool,
    pub passed: bool,
}

/// Like [`verify_counterexample`] but returns the report even on failure.
pub fn compare_counterexample(epsilon: f64, tol: f64) -> Result<VerificationReport> {
    if !(epsilon > 0.0) {
        return Err(Error::EpsilonOutOfRange(epsilon));
    }
    if !(tol > 0.0) {
        return Err(Error::BadRange(format!("tolerance must be positive, got {tol}")));
    }
    let computed = analyze_tripartite(&build_counterexample(epsilon)?);
    let closed_form = closed_form_report(epsilon)?;
    let max_deviation = computed.max_deviation(&closed_form);
    let in_violation_region = epsilon < violation_boundary();

    let flags_agree = computed.premise_holds == closed_form.premise_holds
        && computed.implication_violated == closed_form.implication_violated;
    let violation_ok =
        !in_violation_region || (computed.premise_holds && computed.implication_violated);
    Ok(VerificationReport {
        epsilon,
        tol,
        computed,
        closed_form,
        max_deviation,
        in_violation_region,
        passed: max_deviation <= tol && flags_agree && violation_ok,
    })
}

/// Builds the family at `epsilon`, analyzes it and checks every field
/// against [`closed_form_report`] within `tol`. Inside the violation region
/// the analyzed report must also flag the implication as violated.
pub fn verify_counterexample(epsilon: f64, tol: f64) -> Result<VerificationReport> {
    let report = compare_counterexample(epsilon, tol)?;
    if report.passed {
        Ok(report)
    } else {
        Err(Error::VerificationFailed {
            max_deviation: report.max_deviation,
        })
    }
}

/// One ε sample of the family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub p_b: f64,
    pub p_e: f64,
    pub i_ab: f64,
    pub i_ae: f64,
    /// `i_ae - i_ab`; positive means the implication fails (given the premise).
    pub gap: f64,
}

impl From<(f64, &InfoReport)> for SweepRow {
    fn from((epsilon, r): (f64, &InfoReport)) -> Self {
        SweepRow {
            epsilon,
            p_b: r.p_b,
            p_e: r.p_e,
            i_ab: r.i_ab,
            i_ae: r.i_ae,
            gap: r.gap(),
        }
    }
}

/// `steps` evenly spaced ε values from `eps_start` to `eps_end` inclusive.
///
/// Rows come from the closed forms and each is cross-checked against the
/// analyzed distribution within 1e-9.
pub fn sweep(eps_start: f64, eps_end: f64, steps: usize) -> Result<Vec<SweepRow>> {
    if !(0.0 <= eps_start && eps_start < eps_end && eps_end <= EPSILON_MAX) {
        return Err(Error::BadRange(format!(
            "need 0 <= start < end <= {EPSILON_MAX}, got [{eps_start}, {eps_end}]"
        )));
    }
    if steps < 2 {
        return Err(Error::BadRange(format!("need at least 2 steps, got {steps}")));
    }
    let last = (steps - 1) as f64;
    (0..steps)
        .into_par_iter()
        .map(|i| {
            let epsilon = if i == steps - 1 {
                eps_end
            } else {
                eps_start + (eps_end - eps_start) * (i as f64 / last)
            };
            let closed = closed_form_report(epsilon)?;
            let analyzed = analyze_tripartite(&build_counterexample(epsilon)?);
            let dev = closed.max_deviation(&analyzed);
            if dev > SWEEP_CROSSCHECK_TOL {
                return Err(Error::VerificationFailed { max_deviation: dev });
            }
            Ok(SweepRow::from((epsilon, &closed)))
        })
        .collect()
}

/// `i_ae(ε) - i_ab` from the closed forms.
pub fn closed_form_gap(epsilon: f64) -> f64 {
    0.5 - 0.5 * binary_entropy_unchecked(4.0 * epsilon) - (1.0 - binary_entropy_unchecked(0.25))
}

/// The ε* where `1/2 - H(4ε)/2 = 1 - H(1/4)`, found by bisection on
/// `[0, 1/8]`. The family violates the implication for `0 < ε < ε*`.
pub fn violation_boundary() -> f64 {
    // gap(0) > 0 and gap(1/8) = -(1 - H(1/4)) < 0, and gap is decreasing.
    let (mut lo, mut hi) = (0.0_f64, 0.125_f64);
    for _ in 0..BOUNDARY_MAX_ITERS {
        if hi - lo < BOUNDARY_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if closed_form_gap(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::VarId;

    // Independent evaluation (python, math.log2 / scipy brentq):
    //   0.5 - 0.5 * H(0.04)           = 0.3788539054587926
    //   0.5 * H(0.04)                 = 0.12114609454120741
    //   1 - H(1/4)                    = 0.18872187554086717
    //   root of the closed-form gap   = 0.038785120974231126
    const I_AE_REFERENCE: f64 = 0.3788539054587926;
    const EPS_PRIME_REFERENCE: f64 = 0.12114609454120741;
    const I_AB: f64 = 0.18872187554086717;
    const BOUNDARY: f64 = 0.038785120974231126;

    #[test]
    fn reference_cells() {
        let d = build_counterexample(0.01).unwrap();
        assert_eq!(d.get(0, 0, 0), 0.24);
        assert_eq!(d.get(1, 1, 3), 0.24);
        assert_eq!(d.get(1, 1, 0), 0.01);
        assert_eq!(d.get(0, 0, 3), 0.01);
        assert_eq!(d.probs().iter().filter(|&&p| p != 0.0).count(), 8);
    }

    #[test]
    fn epsilon_zero_fails_premise() {
        let r = analyze_tripartite(&build_counterexample(0.0).unwrap());
        assert_eq!(r.p_b, 0.75);
        assert_eq!(r.p_e, 0.75);
        assert!(!r.premise_holds);
    }

    #[test]
    fn out_of_range_epsilon() {
        for eps in [0.3, -0.01, f64::NAN] {
            assert!(matches!(build_counterexample(eps), Err(Error::EpsilonOutOfRange(_))));
            assert!(closed_form_report(eps).is_err());
        }
    }

    #[test]
    fn closed_form_reference_values() {
        let r = closed_form_report(0.01).unwrap();
        assert_eq!(r.p_b, 0.75);
        assert!((r.p_e - 0.73).abs() < 1e-15);
        assert!((r.i_ab - I_AB).abs() < 1e-15);
        assert!((r.i_ae - I_AE_REFERENCE).abs() < 1e-15);
        let params = CounterexampleParams::new(0.01).unwrap();
        assert!((params.epsilon_prime - EPS_PRIME_REFERENCE).abs() < 1e-15);
        assert!(r.implication_violated);
    }

    #[test]
    fn closed_form_at_eighth() {
        let r = closed_form_report(0.125).unwrap();
        assert!(r.i_ae.abs() < 1e-15);
        assert_eq!(r.p_e, 0.5);
    }

    #[test]
    fn verify_examples() {
        let v = verify_counterexample(0.01, 1e-9).unwrap();
        assert!(v.passed && v.computed.implication_violated);
        let v = verify_counterexample(0.05, 1e-9).unwrap();
        assert!(v.passed && !v.computed.implication_violated);
        match verify_counterexample(0.01, 1e-18) {
            Ok(v) => assert!(v.max_deviation <= 1e-18),
            Err(Error::VerificationFailed { max_deviation }) => assert!(max_deviation > 1e-18),
            Err(e) => panic!("unexpected {e}"),
        }
        assert!(verify_counterexample(0.0, 1e-9).is_err());
        assert!(verify_counterexample(0.01, 0.0).is_err());
    }

    #[test]
    fn sweep_endpoints() {
        let rows = sweep(0.0, 0.25, 2).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].epsilon, 0.0);
        assert_eq!(rows[1].epsilon, 0.25);
    }

    #[test]
    fn sweep_inside_region() {
        let rows = sweep(0.001, 0.039, 20).unwrap();
        assert_eq!(rows.len(), 20);
        assert!(rows.iter().all(|r| r.p_b > r.p_e));
        // 0.039 lies just past the boundary (0.038785...), so only the last row flips
        let (inside, last) = rows.split_at(19);
        assert!(inside.iter().all(|r| r.gap > 0.0), "{inside:?}");
        assert!(last[0].gap < 0.0 && last[0].gap > -2e-3);
    }

    #[test]
    fn sweep_outside_region() {
        for r in sweep(0.05, 0.1, 3).unwrap() {
            assert!(r.gap < 0.0);
        }
    }

    #[test]
    fn sweep_bad_ranges() {
        assert!(matches!(sweep(0.1, 0.05, 5), Err(Error::BadRange(_))));
        assert!(matches!(sweep(0.0, 0.3, 5), Err(Error::BadRange(_))));
        assert!(matches!(sweep(0.0, 0.1, 1), Err(Error::BadRange(_))));
    }

    #[test]
    fn boundary_matches_reference() {
        let b = violation_boundary();
        assert!(b > 0.0385 && b < 0.0390);
        assert!((b - BOUNDARY).abs() < 1e-10);
        assert!(closed_form_gap(b).abs() < 1e-9);
        assert!(closed_form_report(b - 1e-4).unwrap().implication_violated);
        assert!(!closed_form_report(b + 1e-4).unwrap().implication_violated);
    }

    #[test]
    fn family_matches_closed_forms_on_grid() {
        for i in 0..100 {
            let eps = 0.25 * i as f64 / 99.0;
            let a = analyze_tripartite(&build_counterexample(eps).unwrap());
            let c = closed_form_report(eps).unwrap();
            assert!(a.max_deviation(&c) <= 1e-12, "eps={eps}: {a:?} vs {c:?}");
            assert!((a.i_ab - I_AB).abs() <= 1e-12);
        }
    }

    #[test]
    fn eve_guessing_affine_up_to_eighth() {
        let mut prev = f64::INFINITY;
        for i in 0..=50 {
            let eps = 0.125 * i as f64 / 50.0;
            let p_e = closed_form_report(eps).unwrap().p_e;
            assert!((p_e - (0.75 - 2.0 * eps)).abs() < 1e-15);
            assert!(p_e < prev);
            prev = p_e;
        }
        // beyond 1/8 Eve guesses the other symbol in outcomes 0 and 3
        let r = analyze_tripartite(&build_counterexample(0.2).unwrap());
        assert!((r.p_e - 0.65).abs() < 1e-15);
        assert!((closed_form_report(0.2).unwrap().p_e - 0.65).abs() < 1e-15);
    }

    #[test]
    fn family_marginals_uniform() {
        for i in 0..=10 {
            let d = build_counterexample(0.025 * i as f64).unwrap();
            for (var, n) in [(VarId::Bob, 2), (VarId::Alice, 2), (VarId::Eve, 4)] {
                for p in d.marginal_single(var) {
                    assert!((p - 1.0 / n as f64).abs() < 1e-15);
                }
            }
        }
    }
}
