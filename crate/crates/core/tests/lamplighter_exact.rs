use relmass::graph::build_hypercube;
use relmass::lamplighter::{build_lamplighter, LamplighterParams, LamplighterSpectrum};
use relmass::SpectralDecomposition;

#[test]
fn claim_residuals_within_bound_at_d2() {
    for eps in [1e-2, 1e-3] {
        let spec = LamplighterSpectrum::new(LamplighterParams::new(2, eps).unwrap()).unwrap();
        for t in [0.5, 1.0, 2.0, 4.0] {
            let report = spec.verify_claim(t).unwrap();
            assert!(report.holds(), "{report:?}");
        }
    }
}

#[test]
fn walker_marginal_is_the_hypercube_kernel() {
    let spec = LamplighterSpectrum::new(LamplighterParams::new(2, 0.2).unwrap()).unwrap();
    let cube = SpectralDecomposition::new(&build_hypercube(2).unwrap()).unwrap();
    for t in [0.3, 2.0, 9.0] {
        let marginal = spec.walker_marginal(t).unwrap();
        for (x, m) in marginal.iter().enumerate() {
            assert!((m - cube.transition_prob(0, x, t).unwrap()).abs() < 1e-10);
        }
    }
}

#[test]
fn halving_epsilon_halves_relative_mass() {
    let eps = 1e-3;
    let a = LamplighterSpectrum::new(LamplighterParams::new(2, eps).unwrap()).unwrap();
    let b = LamplighterSpectrum::new(LamplighterParams::new(2, eps / 2.0).unwrap()).unwrap();
    for t in [0.5, 1.0, 3.0] {
        let (u, v) = a.uv();
        let ratio = b.decomposition().relative_mass(u, v, t).unwrap() / a.decomposition().relative_mass(u, v, t).unwrap();
        assert!((ratio - 0.5).abs() <= 10.0 * eps, "t={t}: {ratio}");
    }
}

#[test]
fn graph_is_regular_with_unit_walker_rate() {
    let g = build_lamplighter(LamplighterParams::new(3, 1e-3).unwrap()).unwrap();
    assert_eq!(g.n(), 2048);
    assert!(g.is_weight_regular(1e-12));
    assert!((g.weighted_degree(0) - (1.0 + 1e-3)).abs() < 1e-12);
    assert!(g.is_connected());
}
