//! Maximizes the violation gap `I(A;E) - I(A;B)` over joint distributions
//! of a fixed shape, subject to `P_B - P_E >= δ`.
//!
//! The constraint enters through an exact-penalty hinge
//! `λ · max(0, δ - (P_B - P_E))`; the feasible set cut out by the
//! piecewise-linear guessing probabilities is not convex, so it is never
//! projected onto. Each restart runs projected (sub)gradient ascent on the
//! simplex with monotone backtracking.

mod grid;

pub use grid::brute_force_grid;

use std::f64::consts::LN_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counterexample::{build_counterexample, REFERENCE_EPSILON};
use crate::dist::{Shape, TripartiteDistribution, VarId};
use crate::error::{Error, Result};
use crate::info::{analyze_tripartite, InfoReport};
use crate::simplex::{derive_seed, dirichlet_sample, project_to_simplex};

/// Marginal mass below which a cell gets no MI gradient contribution.
pub const GRADIENT_FLOOR: f64 = 1e-12;

/// Smallest backtracking step before a restart is declared converged.
pub const MIN_STEP: f64 = 1e-12;

/// Slack tolerance for calling a result feasible.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Consecutive small-improvement steps that end a restart.
const STALL_LIMIT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub shape: Shape,
    /// Required margin `P_B - P_E`.
    pub delta: f64,
    /// Hinge weight λ.
    pub penalty_weight: f64,
    pub restarts: usize,
    /// Iteration cap per restart.
    pub max_iters: usize,
    pub init_step: f64,
    pub seed: u64,
    pub converge_tol: f64,
    /// Also start from the ε = 0.01 family member when the shape is (2, 2, 4).
    pub include_family_warm_start: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            shape: Shape { bob: 2, alice: 2, eve: 4 },
            delta: 0.02,
            penalty_weight: 10.0,
            restarts: 100,
            max_iters: 500,
            init_step: 0.25,
            seed: 42,
            converge_tol: 1e-12,
            include_family_warm_start: true,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(0.0..1.0).contains(&self.delta) {
            return bad(format!("delta must lie in [0, 1), got {}", self.delta));
        }
        if !(self.penalty_weight >= 1.0) || !self.penalty_weight.is_finite() {
            return bad(format!("penalty weight must be >= 1, got {}", self.penalty_weight));
        }
        if self.restarts == 0 {
            return bad("restarts must be positive".into());
        }
        if !(self.init_step > 0.0) || !self.init_step.is_finite() {
            return bad(format!("init_step must be positive, got {}", self.init_step));
        }
        if !(self.converge_tol > 0.0) {
            return bad(format!("converge_tol must be positive, got {}", self.converge_tol));
        }
        Ok(())
    }

    fn check_shape(&self, dist: &TripartiteDistribution) -> Result<()> {
        if dist.shape() != self.shape {
            return Err(Error::ShapeMismatch {
                expected: self.shape.cells(),
                actual: dist.shape().cells(),
            });
        }
        Ok(())
    }

    fn wants_warm_start(&self) -> bool {
        self.include_family_warm_start && self.shape == Shape { bob: 2, alice: 2, eve: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub best_dist: TripartiteDistribution,
    pub report: InfoReport,
    pub objective: f64,
    /// `P_B - P_E >= δ - 1e-9`.
    pub feasible: bool,
    pub restart_index: usize,
    pub iterations_used: usize,
    /// `(iteration, objective)` at the start and after every accepted step.
    pub trace: Vec<(usize, f64)>,
}

fn penalized(report: &InfoReport, cfg: &SearchConfig) -> f64 {
    let shortfall = cfg.delta - (report.p_b - report.p_e);
    report.gap() - cfg.penalty_weight * shortfall.max(0.0)
}

fn is_feasible(report: &InfoReport, delta: f64) -> bool {
    report.p_b - report.p_e >= delta - FEASIBILITY_TOL
}

/// `[i_ae - i_ab] - λ · max(0, δ - (p_b - p_e))`.
pub fn objective(dist: &TripartiteDistribution, cfg: &SearchConfig) -> Result<f64> {
    cfg.check_shape(dist)?;
    Ok(penalized(&analyze_tripartite(dist), cfg))
}

/// Table of `q(alice, other)` plus both marginals.
struct PairStats {
    joint: Vec<f64>,
    alice: Vec<f64>,
    other: Vec<f64>,
    cols: usize,
}

impl PairStats {
    fn new(dist: &TripartiteDistribution, other: VarId) -> Self {
        let pair = dist.marginal_pair(VarId::Alice, other).expect("distinct vars");
        PairStats {
            alice: pair.row_marginal(),
            other: pair.col_marginal(),
            cols: pair.cols(),
            joint: pair.probs().to_vec(),
        }
    }

    /// Partial derivative of the MI (bits) with respect to `q(a, o)`.
    fn mi_partial(&self, a: usize, o: usize) -> f64 {
        let q = self.joint[a * self.cols + o];
        let (qa, qo) = (self.alice[a], self.other[o]);
        if qa < GRADIENT_FLOOR || qo < GRADIENT_FLOOR {
            0.0
        } else {
            (q.max(GRADIENT_FLOOR) / (qa * qo)).log2() - 1.0 / LN_2
        }
    }

    /// Lowest-index maximizing Alice row for each observer column.
    fn argmax_rows(&self) -> Vec<usize> {
        (0..self.cols)
            .map(|o| {
                let mut best = 0;
                for a in 1..self.alice.len() {
                    if self.joint[a * self.cols + o] > self.joint[best * self.cols + o] {
                        best = a;
                    }
                }
                best
            })
            .collect()
    }
}

/// Gradient of the gap `i_ae - i_ab` and a subgradient of the margin
/// `p_b - p_e`, per cell.
struct GradientParts {
    gap: Vec<f64>,
    margin: Vec<f64>,
    /// `δ - (p_b - p_e)`.
    shortfall: f64,
}

fn gradient_parts(dist: &TripartiteDistribution, cfg: &SearchConfig) -> GradientParts {
    let shape = dist.shape();
    let ab = PairStats::new(dist, VarId::Bob);
    let ae = PairStats::new(dist, VarId::Eve);
    let (best_b, best_e) = (ab.argmax_rows(), ae.argmax_rows());
    let report = analyze_tripartite(dist);

    let mut gap = Vec::with_capacity(shape.cells());
    let mut margin = Vec::with_capacity(shape.cells());
    for i in 0..shape.cells() {
        let (b, a, e) = shape.coords(i);
        gap.push(ae.mi_partial(a, e) - ab.mi_partial(a, b));
        let dp_b = if best_b[b] == a { 1.0 } else { 0.0 };
        let dp_e = if best_e[e] == a { 1.0 } else { 0.0 };
        margin.push(dp_b - dp_e);
    }
    GradientParts {
        gap,
        margin,
        shortfall: cfg.delta - (report.p_b - report.p_e),
    }
}

/// Per-cell (sub)gradient of [`objective`].
///
/// The MI terms are exact partial derivatives of the two bivariate MIs,
/// extended off the simplex; an empty joint cell is floored at 1e-12 inside
/// the logarithm and a cell whose Alice or observer marginal is below 1e-12
/// gets no MI contribution. The guessing-probability terms are a
/// subgradient that credits, in every observer column, the lowest-index
/// maximizing Alice row. The hinge contributes only while the margin
/// constraint is violated.
pub fn objective_gradient(dist: &TripartiteDistribution, cfg: &SearchConfig) -> Result<Vec<f64>> {
    cfg.check_shape(dist)?;
    let parts = gradient_parts(dist, cfg);
    Ok(combine(&parts, cfg, parts.shortfall > 0.0))
}

fn combine(parts: &GradientParts, cfg: &SearchConfig, hinge_active: bool) -> Vec<f64> {
    if !hinge_active {
        return parts.gap.clone();
    }
    parts
        .gap
        .iter()
        .zip(&parts.margin)
        .map(|(g, m)| g + cfg.penalty_weight * m)
        .collect()
}

/// Removes the component along the all-ones direction.
pub fn tangent_projection(v: &[f64]) -> Vec<f64> {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|x| x - mean).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Directions tried when the plain subgradient step cannot improve, which
/// happens on the hinge kink `p_b - p_e = δ`: the gap gradient with its
/// margin-decreasing component removed, then the gradient with the hinge
/// switched on.
fn fallback_directions(parts: &GradientParts, cfg: &SearchConfig) -> Vec<Vec<f64>> {
    let gap = tangent_projection(&parts.gap);
    let margin = tangent_projection(&parts.margin);
    let mut out = Vec::with_capacity(2);
    let mm = dot(&margin, &margin);
    let gm = dot(&gap, &margin);
    if mm > 0.0 && gm < 0.0 {
        out.push(gap.iter().zip(&margin).map(|(g, m)| g - gm / mm * m).collect());
    }
    if parts.shortfall <= 0.0 {
        out.push(combine(parts, cfg, true));
    }
    out
}

/// Backtracking along `direction`: halve η from `init_step` until the
/// projected point strictly beats `value`.
fn line_search(
    x: &TripartiteDistribution,
    direction: &[f64],
    value: f64,
    cfg: &SearchConfig,
) -> Result<Option<(TripartiteDistribution, InfoReport, f64)>> {
    let mut step = cfg.init_step;
    while step >= MIN_STEP {
        let moved: Vec<f64> = x.probs().iter().zip(direction).map(|(p, d)| p + step * d).collect();
        let candidate = TripartiteDistribution::new(project_to_simplex(&moved)?, cfg.shape)?;
        let r = analyze_tripartite(&candidate);
        let v = penalized(&r, cfg);
        if v > value {
            return Ok(Some((candidate, r, v)));
        }
        step *= 0.5;
    }
    Ok(None)
}

/// Projected gradient ascent from `start`.
///
/// Each iteration tries `project(x + η g)` starting from `η = init_step`
/// and halves η until the objective strictly improves. If η falls below
/// 1e-12 along the subgradient and along the kink fallbacks, the run stops.
/// The run also stops after `max_iters` iterations or after ten
/// consecutive accepted steps each improving by less than `converge_tol`.
pub fn projected_ascent(start: &TripartiteDistribution, cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.check_shape(start)?;
    let mut x = start.clone();
    let mut report = analyze_tripartite(&x);
    let mut value = penalized(&report, cfg);
    let mut trace = vec![(0, value)];
    let mut iterations = 0;
    let mut stalled = 0;

    while iterations < cfg.max_iters {
        let parts = gradient_parts(&x, cfg);
        let grad = combine(&parts, cfg, parts.shortfall > 0.0);
        let mut accepted = line_search(&x, &grad, value, cfg)?;
        if accepted.is_none() {
            for direction in fallback_directions(&parts, cfg) {
                accepted = line_search(&x, &direction, value, cfg)?;
                if accepted.is_some() {
                    break;
                }
            }
        }
        let Some((candidate, r, v)) = accepted else {
            break;
        };
        iterations += 1;
        let improvement = v - value;
        x = candidate;
        report = r;
        value = v;
        trace.push((iterations, value));
        if improvement < cfg.converge_tol {
            stalled += 1;
            if stalled >= STALL_LIMIT {
                break;
            }
        } else {
            stalled = 0;
        }
    }

    Ok(SearchResult {
        feasible: is_feasible(&report, cfg.delta),
        best_dist: x,
        report,
        objective: value,
        restart_index: 0,
        iterations_used: iterations,
        trace,
    })
}

/// Start points in restart order: `restarts` Dirichlet(1) draws, then the
/// warm start when enabled.
fn starting_points(cfg: &SearchConfig) -> Result<Vec<TripartiteDistribution>> {
    let mut starts = (0..cfg.restarts)
        .map(|r| dirichlet_sample(cfg.shape, 1.0, derive_seed(cfg.seed, r as u64)))
        .collect::<Result<Vec<_>>>()?;
    if cfg.wants_warm_start() {
        starts.push(build_counterexample(REFERENCE_EPSILON)?);
    }
    Ok(starts)
}

/// Multi-restart search. Restarts run in parallel; the best feasible result
/// wins, ties going to the lowest restart index, so the outcome does not
/// depend on scheduling.
pub fn run_search(cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    let starts = starting_points(cfg)?;
    let results = starts
        .par_iter()
        .enumerate()
        .map(|(index, start)| {
            projected_ascent(start, cfg).map(|mut r| {
                r.restart_index = index;
                r
            })
        })
        .collect::<Result<Vec<_>>>()?;

    results
        .into_iter()
        .filter(|r| r.feasible)
        .fold(None, |best: Option<SearchResult>, r| match best {
            Some(b) if b.objective >= r.objective => Some(b),
            _ => Some(r),
        })
        .ok_or(Error::NoFeasiblePoint)
}
