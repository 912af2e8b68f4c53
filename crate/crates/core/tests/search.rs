use guessgap::search::tangent_projection;
use guessgap::{
    analyze_tripartite, brute_force_grid, dirichlet_sample, objective_gradient, projected_ascent, run_search,
    validate_tripartite, Error, SearchConfig, Shape,
};

// Independent enumeration in python over all compositions:
//   (2,2,2), resolution 8,  delta 0     -> 6435 points, best gap 0.31127812445913283
//   (2,2,2), resolution 10, delta 0     -> 19448 points, best gap 0.3219280948873623
//   (2,2,2), resolution 10, delta 0.02  -> best gap 0.08965969522397607
const GRID_8: f64 = 0.31127812445913283;
const GRID_10: f64 = 0.3219280948873623;
const GRID_10_MARGIN: f64 = 0.08965969522397607;

fn binary() -> Shape {
    Shape::new(2, 2, 2).unwrap()
}

#[test]
fn grid_regression_baselines() {
    let r = brute_force_grid(binary(), 8, 0.0).unwrap();
    assert_eq!(r.iterations_used, 6435);
    assert!((r.objective - GRID_8).abs() < 1e-12);
    let r = brute_force_grid(binary(), 10, 0.0).unwrap();
    assert_eq!(r.iterations_used, 19448);
    assert!((r.objective - GRID_10).abs() < 1e-12);
    let r = brute_force_grid(binary(), 10, 0.02).unwrap();
    assert!((r.objective - GRID_10_MARGIN).abs() < 1e-12);
    assert!(r.report.p_b - r.report.p_e >= 0.02 - 1e-9);
}

#[test]
fn grid_is_deterministic() {
    let a = brute_force_grid(binary(), 9, 0.01).unwrap();
    let b = brute_force_grid(binary(), 9, 0.01).unwrap();
    assert_eq!(a, b);
}

#[test]
fn grid_too_large() {
    let err = brute_force_grid(Shape::new(2, 2, 4).unwrap(), 12, 0.0).unwrap_err();
    assert!(matches!(err, Error::TooLarge { .. }));
}

#[test]
fn traces_are_monotone_and_iterates_valid() {
    for (eve, seed) in [(2, 1), (3, 2), (4, 3), (4, 4)] {
        let shape = Shape::new(2, 2, eve).unwrap();
        let cfg = SearchConfig { shape, ..SearchConfig::default() };
        let start = dirichlet_sample(shape, 0.7, seed).unwrap();
        let r = projected_ascent(&start, &cfg).unwrap();
        assert!(r.trace.windows(2).all(|w| w[1].1 >= w[0].1 && w[1].0 == w[0].0 + 1));
        assert_eq!(r.trace.len(), r.iterations_used + 1);
        assert!(validate_tripartite(r.best_dist.probs().to_vec(), shape).is_ok());
        let again = analyze_tripartite(&r.best_dist);
        assert!(again.max_deviation(&r.report) <= 1e-12);
    }
}

#[test]
fn search_matches_grid_on_binary_shape() {
    let cfg = SearchConfig { shape: binary(), delta: 0.0, restarts: 50, ..SearchConfig::default() };
    let r = run_search(&cfg).unwrap();
    assert!(r.feasible);
    assert!(r.objective >= GRID_10 - 1e-3, "{}", r.objective);
}

#[test]
fn binary_eve_with_margin_can_violate() {
    // The grid already exhibits a binary-Eve violation with P_B - P_E >= 0.02;
    // the continuous search should find at least as much.
    let cfg = SearchConfig { shape: binary(), delta: 0.02, restarts: 50, ..SearchConfig::default() };
    let r = run_search(&cfg).unwrap();
    assert!(r.feasible);
    assert!(r.objective >= GRID_10_MARGIN - 1e-3, "{}", r.objective);
    assert!(r.report.implication_violated);
}

#[test]
fn search_independent_of_thread_count() {
    let cfg = SearchConfig { restarts: 24, ..SearchConfig::default() };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_search(&cfg).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(8));
}

#[test]
fn gradient_matches_finite_differences_with_hinge_off() {
    // Complements the acceptance check, which mostly sees an active hinge.
    let shape = Shape::new(2, 2, 3).unwrap();
    let cfg = SearchConfig { shape, delta: 0.0, ..SearchConfig::default() };
    let mut checked = 0;
    for seed in 0..400 {
        let d = dirichlet_sample(shape, 2.0, seed).unwrap();
        let r = analyze_tripartite(&d);
        if d.probs().iter().any(|&p| p < 1e-3) || r.p_b - r.p_e < 1e-4 {
            continue;
        }
        checked += 1;
        let g = tangent_projection(&objective_gradient(&d, &cfg).unwrap());
        let n = d.probs().len() as f64;
        let h = 1e-6;
        for i in 0..d.probs().len() {
            let at = |sign: f64| {
                let p: Vec<f64> = d
                    .probs()
                    .iter()
                    .enumerate()
                    .map(|(j, &v)| v + sign * h * (if i == j { 1.0 } else { 0.0 } - 1.0 / n))
                    .collect();
                guessgap::objective(&guessgap::TripartiteDistribution::new(p, shape).unwrap(), &cfg).unwrap()
            };
            let fd = (at(1.0) - at(-1.0)) / (2.0 * h);
            assert!((g[i] - fd).abs() <= 1e-4 * g[i].abs().max(fd.abs()).max(1.0), "seed {seed} cell {i}");
        }
        if checked == 30 {
            break;
        }
    }
    assert_eq!(checked, 30);
}
