mod common;

use common::{brute_alpha, random_graphs, small_corpus};
use mpoly_core::linalg::{spectral_abscissa, spectral_radius};
use mpoly_core::reduction::{build_instance, convex_combination, det_closed_form, nonneg_parts};
use mpoly_core::search::{
    hurwitz_search, minimize_spectral_radius, search_general, search_symmetric, SearchConfig, SearchOutcome,
    SearchStatus, SymmetricConfig,
};
use mpoly_core::{certify, AnyMatrix, Matrix, Tolerance};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn assert_monotone(trace: &[(u64, f64)]) {
    assert!(trace.windows(2).all(|w| w[0].0 <= w[1].0 && w[0].1 <= w[1].1), "{trace:?}");
}

fn recertifies(matrices: &[AnyMatrix], out: &SearchOutcome) -> bool {
    let cert = out.certificate.as_ref().expect("feasible outcome carries a certificate");
    let floats: Vec<Matrix<f64>> = matrices.iter().map(AnyMatrix::to_f64).collect();
    let b = convex_combination(&floats, &cert.weights).unwrap();
    certify(&AnyMatrix::Float(b), Tolerance::DEFAULT).is_yes()
}

#[test]
fn never_feasible_when_alpha_at_most_target() {
    let cfg = SearchConfig { budget: 300, ..SearchConfig::default() };
    for g in small_corpus().into_iter().step_by(3) {
        let alpha = brute_alpha(&g);
        for j in alpha..=g.vertex_count() {
            let out = search_general(&build_instance(&g, j).unwrap().as_any(), &cfg).unwrap();
            assert_ne!(out.status, SearchStatus::Feasible, "alpha {alpha}, j {j}");
            assert!(out.budget_spent <= cfg.budget);
            assert_monotone(&out.objective_trace);
        }
    }
}

#[test]
fn equivalence_chain_at_certificates() {
    let cfg = SearchConfig::default();
    let mut certified = 0;
    for g in random_graphs(60, 2..=7, 41) {
        let alpha = brute_alpha(&g);
        for j in 1..alpha {
            let inst = build_instance(&g, j).unwrap();
            let out = search_general(&inst.as_any(), &cfg).unwrap();
            assert_eq!(out.status, SearchStatus::Feasible, "alpha {alpha}, j {j}");
            let exact = out.certificate.as_ref().unwrap().exact_weights.clone().unwrap();
            let b = inst.combine(&exact).unwrap();
            assert!(det_closed_form(&g, j, &exact).unwrap().is_positive());
            assert!(certify(&AnyMatrix::Exact(b.clone()), Tolerance::DEFAULT).is_yes());
            let m = convex_combination(&nonneg_parts(&g, j).unwrap(), &exact).unwrap().to_f64();
            assert!(spectral_radius(&m).unwrap() < 1.0);
            assert!(spectral_abscissa(&b.to_f64().neg()).unwrap() < 0.0);
            certified += 1;
        }
    }
    assert!(certified > 50);
}

fn symmetric_z(rng: &mut ChaCha8Rng, n: usize, shift: f64) -> Matrix<f64> {
    let raw = Matrix::from_fn(n, |_, _| if rng.random_bool(0.5) { rng.random_range(0.0..1.0) } else { 0.0 });
    let nn = Matrix::from_fn(n, |i, j| if i == j { 0.0 } else { raw[(i.min(j), i.max(j))] });
    let rho = spectral_radius(&nn).unwrap();
    Matrix::from_fn(n, |i, j| if i == j { shift * rho.max(0.1) } else { -nn[(i, j)] })
}

#[test]
fn symmetric_path_subsumes_general_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let cfg = SearchConfig { budget: 5_000, ..SearchConfig::default() };
    let mut compared = 0;
    for _ in 0..40 {
        let n = rng.random_range(2..=6);
        let k = rng.random_range(2..=4);
        let family: Vec<AnyMatrix> = (0..k)
            .map(|_| {
                let shift = rng.random_range(0.6..1.3);
                AnyMatrix::Float(symmetric_z(&mut rng, n, shift))
            })
            .collect();
        let general = search_general(&family, &cfg).unwrap();
        if general.status == SearchStatus::Feasible {
            assert!(recertifies(&family, &general));
            let sym = search_symmetric(&family, &SymmetricConfig::default()).unwrap();
            assert_eq!(sym.status, SearchStatus::Feasible);
            assert!(recertifies(&family, &sym));
            compared += 1;
        }
    }
    assert!(compared > 5, "only {compared} feasible families");
}

#[test]
fn random_families_recertify() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let cfg = SearchConfig { budget: 5_000, ..SearchConfig::default() };
    for _ in 0..40 {
        let n = rng.random_range(2..=5);
        let k = rng.random_range(1..=4);
        let family: Vec<AnyMatrix> = (0..k)
            .map(|_| AnyMatrix::Float(Matrix::from_fn(n, |i, j| if i == j { rng.random_range(-1.0..3.0) } else { rng.random_range(-1.5..0.3) })))
            .collect();
        let out = search_general(&family, &cfg).unwrap();
        assert_monotone(&out.objective_trace);
        if out.status == SearchStatus::Feasible {
            assert!(recertifies(&family, &out));
        }
        let h = hurwitz_search(&family, &cfg).unwrap();
        if h.status == SearchStatus::Feasible {
            let floats: Vec<Matrix<f64>> = family.iter().map(AnyMatrix::to_f64).collect();
            let b = convex_combination(&floats, &h.certificate.as_ref().unwrap().weights).unwrap();
            assert!(spectral_abscissa(&b).unwrap() < 0.0);
        }
    }
}

#[test]
fn seeded_runs_are_identical() {
    let g = random_graphs(1, 7..=7, 44).remove(0);
    let alpha = brute_alpha(&g);
    let inst = build_instance(&g, alpha).unwrap().as_any();
    let cfg = SearchConfig { budget: 3_000, seed: 9, ..SearchConfig::default() };
    assert_eq!(search_general(&inst, &cfg).unwrap(), search_general(&inst, &cfg).unwrap());
    let parts: Vec<AnyMatrix> = nonneg_parts(&g, alpha).unwrap().into_iter().map(AnyMatrix::Exact).collect();
    let a = minimize_spectral_radius(&parts, &cfg).unwrap();
    let b = minimize_spectral_radius(&parts, &cfg).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn radius_minimum_tracks_feasibility() {
    let cfg = SearchConfig { budget: 20_000, ..SearchConfig::default() };
    for g in random_graphs(25, 3..=6, 45) {
        let alpha = brute_alpha(&g);
        for j in 1..=g.vertex_count() {
            let parts: Vec<AnyMatrix> = nonneg_parts(&g, j).unwrap().into_iter().map(AnyMatrix::Exact).collect();
            let out = minimize_spectral_radius(&parts, &cfg).unwrap();
            assert_monotone(&out.objective_trace);
            if j >= alpha {
                assert!(!out.below_one, "alpha {alpha}, j {j}, rho {}", out.rho);
            } else {
                assert!(out.below_one, "alpha {alpha}, j {j}, rho {}", out.rho);
            }
        }
    }
}
