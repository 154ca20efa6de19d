use mgcd::cli::bench_rank_tol;
use mgcd::testkit::{plant_instance, plant_separated};
use mgcd::{
    agcd, agcd_multi, exact_gcd, functional, gauss_newton_refine, mult_matrix_rank, AgcdConfig, Complex64, Error,
    Polynomial,
};

fn cfg_for(eta: f64) -> AgcdConfig {
    AgcdConfig {
        rank_tol: bench_rank_tol(eta),
        ..Default::default()
    }
}

#[test]
fn recovers_planted_factor() {
    for seed in 0..5 {
        let inst = plant_instance(15, 14, 5, 1e-6, seed).unwrap();
        let out = agcd(&inst.f, &inst.g_observed, &cfg_for(1e-6)).unwrap();
        assert_eq!(out.degree, 5, "seed {seed}");
        assert!(out.residual < 1e-20);
        assert!(out.distance <= 1e3 * 1e-6, "{}", out.distance);
        assert!(out.gcd.distance(&inst.common.monic().unwrap()) < 1e-3);
        // g~ really has the factor
        assert!(out.g_tilde.rem(&out.gcd).unwrap().norm() < 1e-8 * out.g_tilde.norm());
    }
}

#[test]
fn structured_and_dense_paths_agree() {
    let inst = plant_instance(12, 11, 4, 1e-7, 9).unwrap();
    let fast = agcd(&inst.f, &inst.g_observed, &cfg_for(1e-7)).unwrap();
    let dense = agcd(
        &inst.f,
        &inst.g_observed,
        &AgcdConfig {
            use_structured_solver: false,
            ..cfg_for(1e-7)
        },
    )
    .unwrap();
    assert_eq!(fast.degree, dense.degree);
    assert!(fast.gcd.distance(&dense.gcd) < 1e-8);
    // different points of the solution set, at comparable distance from g
    assert!(dense.residual < 1e-20 && fast.residual < 1e-20);
    assert!(fast.distance < 1e2 * dense.distance && dense.distance < 1e2 * fast.distance);
}

#[test]
fn exact_inputs_round_trip() {
    for seed in 0..10 {
        let inst = plant_separated(9, 7, 4, 0.2, 100 + seed).unwrap();
        let cfg = AgcdConfig::default();
        assert_eq!(mult_matrix_rank(&inst.f, &inst.g_exact, &cfg).unwrap().corank, 4);
        let h = exact_gcd(&inst.f, &inst.g_exact).unwrap();
        assert!(h.distance(&inst.common.monic().unwrap()) < 1e-8);
        let out = agcd(&inst.f, &inst.g_exact, &cfg).unwrap();
        assert_eq!(out.degree, 4);
        assert!(out.distance < 1e-10);
    }
}

#[test]
fn real_inputs_give_real_outputs() {
    let f = Polynomial::from_roots(&[1.0, 2.0, -3.0, 0.5].map(|r| Complex64::new(r, 0.0)));
    let g = Polynomial::from_roots(&[1.0, 2.0, 4.0].map(|r| Complex64::new(r, 0.0)));
    let g = &g + &Polynomial::from_real(&[1e-8, -2e-8]);
    let out = agcd(
        &f,
        &g,
        &AgcdConfig {
            rank_tol: 1e-5,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(out.degree, 2);
    assert!(out.gcd.is_real() && out.v_tilde.is_real() && out.g_tilde.is_real());
    assert!(out.gcd.distance(&Polynomial::from_real(&[2.0, -3.0, 1.0])) < 1e-6);
}

#[test]
fn refinement_does_not_increase_functional() {
    let inst = plant_instance(8, 7, 3, 1e-5, 2).unwrap();
    let v0 = inst.cofactor.monic().unwrap();
    let before = functional(&inst.f, &inst.g_observed, &v0).unwrap();
    let out = gauss_newton_refine(&inst.f, &inst.g_observed, &v0, &cfg_for(1e-5)).unwrap();
    assert!(out.residual <= before);
    assert!(out.residual < 1e-20);
    assert!(out.v_tilde.distance(&v0) < 1e-3);
}

#[test]
fn combined_inputs() {
    let inst = plant_separated(8, 6, 3, 0.2, 55).unwrap();
    let other = &inst.common * &Polynomial::from_real(&[0.3, -1.0, 0.0, 1.0]);
    let out = agcd_multi(&inst.f, &[inst.g_exact.clone(), other], &AgcdConfig::default(), 1).unwrap();
    assert_eq!(out.degree, 3);
    assert_eq!(out.diagnostics.combination.len(), 2);
    assert!(out.gcd.distance(&inst.common.monic().unwrap()) < 1e-8);
}

#[test]
fn invalid_inputs() {
    let f = Polynomial::from_real(&[2.0, -3.0, 1.0]);
    let cfg = AgcdConfig::default();
    assert!(matches!(
        agcd(&f, &Polynomial::zero(), &cfg),
        Err(Error::ZeroPolynomial)
    ));
    assert!(matches!(
        agcd(&Polynomial::from_real(&[3.0]), &f, &cfg),
        Err(Error::DegreeTooSmall { .. })
    ));
    let bad = AgcdConfig {
        rank_tol: 0.0,
        ..Default::default()
    };
    assert!(agcd(&f, &f, &bad).is_err());
}
