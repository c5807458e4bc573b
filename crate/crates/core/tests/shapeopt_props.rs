use serrin_core::geometry::*;
use serrin_core::overdet::{extract_free_boundary, overdet_report};
use serrin_core::shapeopt::*;

#[test]
fn shape_derivative_matches_finite_differences() {
    let shape = FourierPerturbation {
        center: [0.0, 0.0],
        cos: vec![0.0, 0.15],
        sin: vec![0.0, 0.0, 0.1],
    };
    for seed in [11, 12] {
        let dir = FourierPerturbation::random([0.0, 0.0], 4, 0.5, seed);
        let c = finite_difference_check(256, 0.6, &shape, &dir, &[1e-2, 5e-3]).unwrap();
        assert!(c[0].relative_error < 0.1, "{c:?}");
        assert!(c[1].relative_error < 0.1, "{c:?}");
        assert!(c[1].relative_error < c[0].relative_error, "{c:?}");
    }
}

#[test]
fn symmetrization_does_not_increase_energy() {
    let vol_tol = 1e-3;
    let d = BoxDomain::unit(96).unwrap();
    for (cx, cy, a) in [(0.2, -0.1, 0.2), (-0.15, 0.25, -0.15), (0.1, 0.1, 0.3)] {
        let phi = LevelSetField::from_fn(d, |p| {
            let t = (p[1] - cy).atan2(p[0] - cx);
            (p[0] - cx).hypot(p[1] - cy) - 0.6 * (1.0 + a * (3.0 * t).cos())
        });
        let alpha = volume(&phi);
        let before = evaluate(volume_projection(&phi, alpha).unwrap().0).unwrap().energy.j;
        let s = steiner_symmetrize(&steiner_symmetrize(&phi, Axis::Y), Axis::X);
        let after = evaluate(volume_projection(&s, alpha).unwrap().0).unwrap().energy.j;
        assert!(after <= before + 2.0 * vol_tol * before.abs(), "{after} > {before}");
    }
}

#[test]
fn asymmetric_start_ends_symmetric_and_starshaped() {
    let cfg = OptimizerConfig {
        alpha: 3.5,
        grid_n: 64,
        max_iters: 30,
        symmetrize_every: 5,
        ..Default::default()
    };
    let init = initial_disk(cfg.domain().unwrap(), 2.5, [0.08, -0.05]).unwrap();
    let st = optimize(&cfg, &init).unwrap();
    assert!(symmetry_defect(&st.phi, Axis::X) <= 1.0);
    assert!(symmetry_defect(&st.phi, Axis::Y) <= 1.0);
    assert!(is_starshaped(&st.phi, [0.0, 0.0], 720).unwrap().is_starshaped());
    let js = st.accepted_energies();
    assert!(js.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    for r in &st.history {
        assert!((r.volume - cfg.alpha).abs() <= cfg.vol_tol * cfg.alpha);
    }
    assert!(st.multiplier > 0.0);
    let rep = overdet_report(&extract_free_boundary(&st.u), st.u.mesh());
    assert!(rep.touches_box);
    assert!(rep.n_components > 0);
}

#[test]
fn disk_run_converges_to_the_disk() {
    let cfg = OptimizerConfig {
        alpha: 2.5,
        grid_n: 128,
        max_iters: 20,
        ..Default::default()
    };
    let init = initial_disk(cfg.domain().unwrap(), 2.0, [0.0, 0.0]).unwrap();
    let st = optimize(&cfg, &init).unwrap();
    let exact = -2.5f64 * 2.5 / (16.0 * std::f64::consts::PI);
    assert!((st.energy.j / exact - 1.0).abs() < 0.01);
    let rep = overdet_report(&extract_free_boundary(&st.u), st.u.mesh());
    assert!(!rep.touches_box);
    assert!(rep.disk_deviation < 0.01);
}

#[test]
fn runs_are_deterministic() {
    let cfg = OptimizerConfig {
        alpha: 3.2,
        grid_n: 48,
        max_iters: 8,
        symmetrize_every: 4,
        ..Default::default()
    };
    let init = initial_disk(cfg.domain().unwrap(), 2.6, [0.05, 0.0]).unwrap();
    let a = optimize(&cfg, &init).unwrap();
    let b = optimize(&cfg, &init).unwrap();
    assert_eq!(a.history, b.history);
    assert_eq!(a.phi.to_text(), b.phi.to_text());
}

#[test]
fn disk_cv_decays_with_refinement() {
    let r = 0.8;
    let cv: Vec<f64> = [64, 128, 256, 512]
        .iter()
        .map(|&n| {
            let d = BoxDomain::unit(n).unwrap();
            let ev = evaluate(disk_levelset(d, r, [0.0, 0.0]).unwrap()).unwrap();
            overdet_report(&extract_free_boundary(&ev.u), ev.u.mesh()).cv.unwrap()
        })
        .collect();
    let order = (cv[0] / cv[3]).log2() / 3.0;
    assert!(order >= 0.9, "cv {cv:?} order {order}");
}
