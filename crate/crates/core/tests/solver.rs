use proptest::prelude::*;
use spde_core::solver::{
    exp_euler_solve, gronwall_check, solve_mild, sup_sq_distance, theta_eigenvalues, yosida_continuation,
    yosida_continuation_with,
};
use spde_core::{time_grid, Config, Convolution, Drift, Grid, Operator, SpaceTag, Spectral, Stepper};

fn config(h: f64, stepper: Stepper) -> Config {
    Config {
        yosida_delta: 1e-4,
        time_step: h,
        stepper,
        ..Config::default()
    }
}

fn zero_forcing(op: &Operator, horizon: f64, h: f64) -> Convolution {
    Convolution::zero(op.len(), &time_grid::uniform(horizon, h).unwrap()).unwrap()
}

fn constant_forcing(horizon: f64, h: f64, c: &Spectral) -> Convolution {
    let grid = time_grid::uniform(horizon, h).unwrap();
    Convolution {
        values: vec![c.clone(); grid.len()],
        left_limits: vec![c.clone(); grid.len()],
        time_grid: grid,
    }
}

fn datum(op: &Operator, coeffs: &[f64]) -> Grid {
    let mut v = vec![0.0; op.len()];
    v[..coeffs.len()].copy_from_slice(coeffs);
    op.from_spectral(&Spectral::new(v).unwrap(), SpaceTag::ContinuousSup).unwrap()
}

fn linear() -> Drift {
    // b(s) = -s.
    Drift::new(&[0.0, 1.0]).unwrap()
}

fn cubic() -> Drift {
    Drift::new(&[0.0, 0.0, 0.0, 1.0]).unwrap()
}

#[test]
fn theta_eigenvalue_limits() {
    let op = Operator::dirichlet(1, 6, 0.0).unwrap();
    assert_eq!(theta_eigenvalues(&op, 0.0), op.eigenvalues());
    for (&a, &l) in theta_eigenvalues(&op, 1e8).iter().zip(op.eigenvalues()) {
        assert!((a * 1e8 - 1.0).abs() < 1e-5 * (1.0 + 1.0 / l));
    }
}

#[test]
fn zero_drift_is_the_exact_linear_flow() {
    let op = Operator::dirichlet(1, 8, 0.0).unwrap();
    let x = datum(&op, &[1.0, -0.5, 0.25, 0.0, 0.1]);
    let v0 = op.to_spectral(&x).unwrap();
    for stepper in [Stepper::ExponentialEuler, Stepper::PicardTheta] {
        let path = solve_mild(&op, &Drift::zero(), &x, &zero_forcing(&op, 0.5, 0.01), &config(0.01, stepper)).unwrap();
        assert_eq!(path.y[0], x);
        for (m, &t) in path.time_grid.iter().enumerate() {
            let exact = op.semigroup_apply(t, &v0).unwrap();
            // Only rounding from repeated products of e^{-lambda h} remains.
            let e = path.y_spectral[m].sub(&exact).unwrap().norm();
            assert!(e < 1e-15 * (m + 1) as f64, "{stepper:?} m={m} e={e:e}");
        }
    }
}

#[test]
fn linear_drift_single_mode_oracle() {
    let op = Operator::dirichlet(1, 1, 0.0).unwrap();
    let l = op.eigenvalues()[0];
    let x = datum(&op, &[1.0]);
    let err = |h: f64| {
        let path = exp_euler_solve(&op, &linear(), &x, &zero_forcing(&op, 0.5, h), &config(h, Stepper::ExponentialEuler)).unwrap();
        path.time_grid
            .iter()
            .zip(&path.y_spectral)
            .map(|(&t, v)| (v.coeffs()[0] - (-(l + 1.0) * t).exp()).abs())
            .fold(0.0, f64::max)
    };
    let (e1, e2) = (err(1e-2), err(5e-3));
    assert!(e1 < 1e-2);
    assert!((e2 / e1 - 0.5).abs() < 0.05, "ratio {}", e2 / e1);
}

#[test]
fn constant_forcing_affine_oracle() {
    let op = Operator::dirichlet(1, 4, 0.0).unwrap();
    let x = datum(&op, &[0.5, 0.0, -0.3, 0.2]);
    let x0 = op.to_spectral(&x).unwrap();
    let c = Spectral::new(vec![1.0, 0.4, -0.2, 0.1]).unwrap();
    let err = |h: f64, stepper: Stepper| {
        let path = solve_mild(&op, &linear(), &x, &constant_forcing(0.5, h, &c), &config(h, stepper)).unwrap();
        let mut worst: f64 = 0.0;
        for (&t, v) in path.time_grid.iter().zip(&path.y_spectral) {
            for i in 0..4 {
                // y' = -lambda y - (y + c): affine with rate lambda + 1.
                let r = op.eigenvalues()[i] + 1.0;
                let eq = -c.coeffs()[i] / r;
                let exact = eq + (-r * t).exp() * (x0.coeffs()[i] - eq);
                worst = worst.max((v.coeffs()[i] - exact).abs());
            }
        }
        worst
    };
    let (e1, e2) = (err(1e-2, Stepper::ExponentialEuler), err(5e-3, Stepper::ExponentialEuler));
    assert!(e1 < 2e-2, "{e1}");
    assert!((e2 / e1 - 0.5).abs() < 0.05, "{e1} -> {e2}");
    // The implicit stepper subdivides every step until (2/delta + |zeta|) h
    // is at most 1/2, so its error is set by the substep, not by h.
    assert!(err(1e-2, Stepper::PicardTheta) < 1e-5);
}

#[test]
fn steppers_agree_at_first_order() {
    let op = Operator::dirichlet(1, 4, 0.0).unwrap();
    let x = datum(&op, &[1.5, -0.8, 0.4, 0.2]);
    let f = Drift::new(&[0.0, 3.0, 0.0, 1.0]).unwrap();
    let gap = |h: f64| {
        let forcing = zero_forcing(&op, 0.5, h);
        let mut cfg = config(h, Stepper::ExponentialEuler);
        cfg.yosida_delta = 1e-3;
        let a = solve_mild(&op, &f, &x, &forcing, &cfg).unwrap();
        cfg.stepper = Stepper::PicardTheta;
        let b = solve_mild(&op, &f, &x, &forcing, &cfg).unwrap();
        sup_sq_distance(&a, &b).sqrt()
    };
    let (g1, g2, g3) = (gap(4e-3), gap(2e-3), gap(1e-3));
    for r in [g2 / g1, g3 / g2] {
        assert!((0.4..=0.6).contains(&r), "ratios {} {}", g2 / g1, g3 / g2);
    }
}

#[test]
fn forcing_is_read_through_left_limits_only() {
    let op = Operator::dirichlet(1, 6, 0.0).unwrap();
    let x = datum(&op, &[0.7, 0.3, -0.2]);
    let h = 0.01;
    let base = constant_forcing(0.4, h, &Spectral::new(vec![0.1, -0.2, 0.0, 0.3, 0.0, 0.05]).unwrap());
    let k = 17;
    // A jump at t_k changes f(t_k) and everything after, never f(t_k^-).
    let mut moved = base.clone();
    let jump = Spectral::new(vec![1.0, 0.5, -0.5, 0.2, 0.1, -0.1]).unwrap();
    for m in k..moved.len() {
        moved.values[m] = moved.values[m].add(&jump).unwrap();
        if m > k {
            moved.left_limits[m] = moved.left_limits[m].add(&jump).unwrap();
        }
    }
    assert_eq!(moved.jump_indices(), vec![k]);
    for stepper in [Stepper::ExponentialEuler, Stepper::PicardTheta] {
        let a = solve_mild(&op, &cubic(), &x, &base, &config(h, stepper)).unwrap();
        let b = solve_mild(&op, &cubic(), &x, &moved, &config(h, stepper)).unwrap();
        assert_eq!(a.y[..=k], b.y[..=k]);
        assert_ne!(a.y[k + 2], b.y[k + 2]);
    }
}

#[test]
fn continuation_of_linear_drift_is_exact() {
    let op = Operator::dirichlet(1, 4, 0.0).unwrap();
    let x = datum(&op, &[1.0, 0.5]);
    let (path, table) =
        yosida_continuation(&op, &linear(), &x, &zero_forcing(&op, 0.5, 0.01), 0.5, 4, &config(0.01, Stepper::ExponentialEuler)).unwrap();
    assert_eq!(table.rows.len(), 3);
    assert!(table.rows.iter().all(|r| r.sup_sq_distance < 1e-28));
    assert_eq!(path.config.yosida_delta, 0.5 / 8.0);
}

#[test]
fn continuation_sequences_agree_after_extrapolation() {
    let op = Operator::dirichlet(1, 1, 0.0).unwrap();
    let x = datum(&op, &[1.0]);
    let forcing = zero_forcing(&op, 1.0, 1e-3);
    let cfg = config(1e-3, Stepper::ExponentialEuler);
    let d = 1e-2;
    let solve = |delta: f64| {
        let c = Config { yosida_delta: delta, ..cfg };
        solve_mild(&op, &cubic(), &x, &forcing, &c).unwrap()
    };
    // Richardson extrapolation to delta = 0 from each pair.
    let extrapolate = |a: f64, b: f64| -> Vec<f64> {
        let (pa, pb) = (solve(a), solve(b));
        pa.y_spectral
            .iter()
            .zip(&pb.y_spectral)
            .map(|(u, v)| (b * u.coeffs()[0] - a * v.coeffs()[0]) / (b - a))
            .collect()
    };
    let e1 = extrapolate(d, d / 2.0);
    let e2 = extrapolate(d / 3.0, d / 6.0);
    let gap = e1.iter().zip(&e2).map(|(a, b)| (a - b).powi(2)).fold(0.0, f64::max);
    let (_, table) = yosida_continuation_with(&op, &cubic(), &x, &forcing, &[d, d / 2.0], &cfg).unwrap();
    let c = table.rows[0].sup_sq_distance / (1.5 * d);
    assert!(c > 0.0);
    assert!(gap <= c * (d / 2.0 + d / 6.0), "gap {gap} vs {}", c * (d / 2.0 + d / 6.0));
}

#[test]
fn continuation_needs_two_levels() {
    let op = Operator::dirichlet(1, 2, 0.0).unwrap();
    let x = datum(&op, &[1.0]);
    let f = zero_forcing(&op, 0.1, 0.01);
    assert!(yosida_continuation(&op, &cubic(), &x, &f, 0.1, 1, &config(0.01, Stepper::ExponentialEuler)).is_err());
}

#[test]
fn invalid_configurations_are_rejected() {
    let op = Operator::dirichlet(1, 4, 0.0).unwrap();
    let x = datum(&op, &[1.0]);
    let f = zero_forcing(&op, 0.1, 0.02);
    // Forcing coarser than the solver step.
    assert!(solve_mild(&op, &cubic(), &x, &f, &config(0.01, Stepper::ExponentialEuler)).is_err());
    let mut cfg = config(0.02, Stepper::ExponentialEuler);
    cfg.yosida_theta = -1.0;
    assert!(solve_mild(&op, &cubic(), &x, &f, &cfg).is_err());
    let mut cfg = config(0.02, Stepper::ExponentialEuler);
    cfg.yosida_delta = 0.5;
    assert!(solve_mild(&op, &Drift::new(&[0.0, 3.0, 0.0, 1.0]).unwrap(), &x, &f, &cfg).is_err());
    let wrong = Operator::dirichlet(1, 5, 0.0).unwrap();
    assert!(solve_mild(&wrong, &cubic(), &x, &f, &config(0.02, Stepper::ExponentialEuler)).is_err());
}

#[test]
fn gronwall_examples() {
    let b = -0.4;
    let times: Vec<f64> = (0..=100).map(|i| i as f64 * 0.01).collect();
    let gamma: Vec<f64> = times.iter().map(|t| (b * t).exp() * 2.0).collect();
    let zero = vec![0.0; times.len()];
    assert!(gronwall_check(&times, &gamma, b, &zero).unwrap());
    let doubled: Vec<f64> = gamma.iter().enumerate().map(|(i, g)| if i == 0 { *g } else { 2.0 * g }).collect();
    assert!(!gronwall_check(&times, &doubled, b, &zero).unwrap());
    assert!(gronwall_check(&times, &gamma[..10], b, &zero).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn solver_distances_satisfy_gronwall(a in prop::collection::vec(-2.0..2.0f64, 4), b in prop::collection::vec(-2.0..2.0f64, 4)) {
        let op = Operator::dirichlet(1, 8, 0.0).unwrap();
        let f = Drift::new(&[0.0, 1.0, 0.0, 1.0]).unwrap();
        let zeta = f.dissipativity_constant();
        let (x, z) = (datum(&op, &a), datum(&op, &b));
        let forcing = constant_forcing(0.3, 1e-3, &Spectral::new(vec![0.2, 0.0, -0.1, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap());
        let cfg = Config { yosida_delta: 1e-3, time_step: 1e-3, ..Config::default() };
        let px = solve_mild(&op, &f, &x, &forcing, &cfg).unwrap();
        let pz = solve_mild(&op, &f, &z, &forcing, &cfg).unwrap();
        let zero = vec![0.0; px.time_grid.len()];
        let h_dist: Vec<f64> = px.y_spectral.iter().zip(&pz.y_spectral).map(|(u, v)| u.sub(v).unwrap().norm()).collect();
        prop_assert!(gronwall_check(&px.time_grid, &h_dist, zeta, &zero).unwrap());
        let sup_dist: Vec<f64> = px.y.iter().zip(&pz.y).map(|(u, v)| u.sub(v).unwrap().sup_norm()).collect();
        prop_assert!(gronwall_check(&px.time_grid, &sup_dist, zeta, &zero).unwrap());
    }
}
