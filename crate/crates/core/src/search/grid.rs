//! Exhaustive search over the lattice `{m / resolution}` of the simplex.

use crate::dist::{Shape, TripartiteDistribution};
use crate::error::{Error, Result};
use crate::info::analyze_tripartite;

use super::{is_feasible, SearchResult};

pub const MAX_GRID_CELLS: usize = 8;
pub const MAX_GRID_RESOLUTION: usize = 12;

/// Visits every composition of `total` into `parts` nonnegative parts in
/// lexicographic order.
fn for_each_composition(parts: usize, total: usize, mut visit: impl FnMut(&[usize])) {
    fn fill(counts: &mut [usize], slot: usize, left: usize, visit: &mut dyn FnMut(&[usize])) {
        if slot + 1 == counts.len() {
            counts[slot] = left;
            visit(counts);
            return;
        }
        for m in 0..=left {
            counts[slot] = m;
            fill(counts, slot + 1, left - m, visit);
        }
    }
    let mut counts = vec![0; parts];
    fill(&mut counts, 0, total, &mut visit);
}

/// Best raw gap `i_ae - i_ab` over all grid distributions satisfying
/// `p_b - p_e >= delta` (up to 1e-9). Ties keep the first point in
/// lexicographic order of cell counts.
pub fn brute_force_grid(shape: Shape, resolution: usize, delta: f64) -> Result<SearchResult> {
    let cells = shape.cells();
    if cells > MAX_GRID_CELLS || resolution > MAX_GRID_RESOLUTION {
        return Err(Error::TooLarge { cells, resolution });
    }
    if resolution == 0 {
        return Err(Error::BadRange("resolution must be positive".into()));
    }

    let scale = resolution as f64;
    let mut best: Option<(f64, TripartiteDistribution)> = None;
    let mut visited = 0;
    let mut failure = None;
    for_each_composition(cells, resolution, |counts| {
        visited += 1;
        let probs = counts.iter().map(|&m| m as f64 / scale).collect();
        let dist = match TripartiteDistribution::new(probs, shape) {
            Ok(d) => d,
            Err(e) => {
                failure.get_or_insert(e);
                return;
            }
        };
        let report = analyze_tripartite(&dist);
        if !is_feasible(&report, delta) {
            return;
        }
        let gap = report.gap();
        if best.as_ref().is_none_or(|(g, _)| gap > *g) {
            best = Some((gap, dist));
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let (gap, dist) = best.ok_or(Error::NoFeasiblePoint)?;
    let report = analyze_tripartite(&dist);
    Ok(SearchResult {
        best_dist: dist,
        report,
        objective: gap,
        feasible: true,
        restart_index: 0,
        iterations_used: visited,
        trace: Vec::new(),
    })
}
