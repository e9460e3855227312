use hyperfoil::energy::MassNorm;
use hyperfoil::fields::ConeBump;
use hyperfoil::nullcond::{CoefficientTensors, TensorKind};
use hyperfoil::solver::*;
use hyperfoil::{ScalarField, SliceRegion, SpacetimePoint};

fn free(preset: Preset) -> SystemSpec {
    preset.system().unwrap()
}

fn ladder(from: f64, to: f64, step: f64) -> Vec<f64> {
    let n = ((to - from) / step).round() as usize;
    (0..=n).map(|k| from + step * k as f64).collect()
}

/// Evolves `u(r) = profile(r)`, `∂_t u = 0` on the whole grid for `steps` steps.
fn evolve_profile(
    spec: &SystemSpec,
    dr: f64,
    r_max: f64,
    steps: usize,
    profile: impl Fn(f64) -> f64,
) -> Evolver<'_> {
    let grid = RadialGrid::new(dr, 0.5, r_max).unwrap();
    let mut state = CauchyState::zeros(spec.n(), grid.points(), 0.0);
    for k in 0..grid.points() {
        state.u[0][k] = profile(grid.r(k));
    }
    let mut ev = Evolver::new(spec, grid, state, None).unwrap();
    for _ in 0..steps {
        ev.step().unwrap();
    }
    ev
}

#[test]
fn zero_state_has_zero_acceleration() {
    for preset in Preset::ALL {
        let spec = free(preset);
        let grid = RadialGrid::new(0.1, 0.5, 10.0).unwrap();
        let pts = grid.points();
        let zero = vec![vec![0.0; pts]; spec.n()];
        let mut acc = vec![vec![1.0; pts]; spec.n()];
        rhs(&spec, &grid, 4.0, &zero, &zero, None, &mut acc, pts).unwrap();
        assert!(acc.iter().flatten().all(|&a| a == 0.0), "{preset}");
    }
}

#[test]
fn constant_klein_gordon_state_oscillates_with_period_two_pi() {
    let spec = free(Preset::FreeKg);
    let grid = RadialGrid::new(0.05, 0.5, 40.0).unwrap();
    let pts = grid.points();
    let one = vec![vec![1.0; pts]];
    let zero = vec![vec![0.0; pts]];
    let mut acc = vec![vec![0.0; pts]];
    rhs(&spec, &grid, 3.0, &one, &zero, None, &mut acc, pts).unwrap();
    // away from the outer edge the Laplacian of a constant vanishes
    for (k, a) in acc[0].iter().enumerate().take(pts - 2) {
        assert!((a + 1.0).abs() < 1e-12, "k = {k}: {a}");
    }

    let period = 2.0 * std::f64::consts::PI;
    let steps = (period / grid.dt()).ceil() as usize;
    let ev = evolve_profile(&spec, 0.05, 40.0, steps, |_| 1.0);
    let t = ev.state.t;
    for k in 0..100 {
        assert!((ev.state.u[0][k] - t.cos()).abs() < 1e-7, "k = {k}");
    }
    assert!((t - period).abs() < grid.dt());
    assert!((ev.state.u[0][0] - 1.0).abs() < 2e-3);
}

#[test]
fn laplacian_of_gaussian_is_second_order() {
    let spec = free(Preset::FreeWave);
    let err = |dr: f64| {
        let grid = RadialGrid::new(dr, 0.5, 10.0).unwrap();
        let pts = grid.points();
        // u = exp(−r² − (t − t0)²) at t = t0: ∂_t u = 0 and ∂_t²u = Δu − 2u
        let u = vec![grid
            .radii(pts)
            .iter()
            .map(|r| (-r * r).exp())
            .collect::<Vec<_>>()];
        let ut = vec![vec![0.0; pts]];
        let mut acc = vec![vec![0.0; pts]];
        rhs(&spec, &grid, 5.0, &u, &ut, None, &mut acc, pts).unwrap();
        (0..pts)
            .filter(|&k| grid.r(k) <= 4.0)
            .map(|k| {
                let r = grid.r(k);
                let lap = (4.0 * r * r - 6.0) * (-r * r).exp();
                (acc[0][k] - lap).abs()
            })
            .fold(0.0, f64::max)
    };
    let (e1, e2, e3) = (err(0.04), err(0.02), err(0.01));
    assert!(e1 < 0.01, "{e1}");
    assert!((e1 / e2).log2() > 1.9, "{e1} {e2}");
    assert!((e2 / e3).log2() > 1.9, "{e2} {e3}");
}

#[test]
fn self_convergence_order_at_least_1_9() {
    let spec = free(Preset::FreeWave);
    let profile = |r: f64| (-r * r).exp();
    let t_end = 4.0;
    let run = |dr: f64| {
        let steps = (t_end / (0.5 * dr)).round() as usize;
        evolve_profile(&spec, dr, 16.0, steps, profile).state.u[0].clone()
    };
    let (c, m, f) = (run(0.04), run(0.02), run(0.01));
    let n = (10.0 / 0.04) as usize;
    let l2 = |a: &[f64], b: &[f64], sa: usize, sb: usize| {
        (0..n)
            .map(|k| (a[k * sa] - b[k * sb]).powi(2))
            .sum::<f64>()
            .sqrt()
    };
    let e_cm = l2(&c, &m, 1, 2);
    let e_mf = l2(&m, &f, 2, 4);
    let order = (e_cm / e_mf).log2();
    assert!(order >= 1.9, "order {order} ({e_cm:e}, {e_mf:e})");
}

#[test]
fn time_reversal_returns_initial_data() {
    let spec = free(Preset::FreeWave);
    for dr in [0.04, 0.02] {
        let profile = |r: f64| (-(r - 3.0).powi(2)).exp();
        let grid = RadialGrid::new(dr, 0.5, 20.0).unwrap();
        let steps = (3.0 / grid.dt()).round() as usize;
        let fwd = evolve_profile(&spec, dr, 20.0, steps, profile);
        let mut back = fwd.state.clone();
        back.ut[0].iter_mut().for_each(|v| *v = -*v);
        let mut ev = Evolver::new(&spec, grid, back, None).unwrap();
        for _ in 0..steps {
            ev.step().unwrap();
        }
        let err = (0..grid.points())
            .map(|k| (ev.state.u[0][k] - profile(grid.r(k))).abs())
            .fold(0.0, f64::max);
        assert!(err < dr * dr, "dr {dr}: {err:e}");
    }
}

#[test]
fn zero_data_stays_zero() {
    let settings = RunSettings {
        dr: 0.05,
        t_final: 15.0,
        ladder: vec![3.0, 4.0],
        ..Default::default()
    };
    for preset in Preset::ALL {
        let out = run_preset(preset, 0.0, &settings, MassNorm::default()).unwrap();
        assert!(
            out.record
                .history
                .iter()
                .all(|h| h.sup.iter().all(|&s| s == 0.0)),
            "{preset}"
        );
        assert!(out
            .summaries
            .iter()
            .all(|s| s.energies.iter().all(|e| e.energy() == 0.0)));
    }
}

#[test]
fn cfl_violation_is_a_config_error() {
    assert!(matches!(
        RadialGrid::new(0.01, 0.6, 10.0),
        Err(SolverError::Config(_))
    ));
    let settings = RunSettings {
        cfl: 0.51,
        ..Default::default()
    };
    assert!(matches!(
        run_preset(Preset::FreeKg, 0.01, &settings, MassNorm::default()),
        Err(SolverError::Config(_))
    ));
    assert!(run_preset(
        Preset::FreeKg,
        -0.1,
        &RunSettings::default(),
        MassNorm::default()
    )
    .is_err());
}

#[test]
fn first_hyperboloid_spans_three_to_five() {
    let settings = RunSettings::default();
    let slice = settings.slice_in(3.0, SliceRegion::Cone).unwrap();
    let lo = slice
        .nodes
        .iter()
        .map(|n| n.t)
        .fold(f64::INFINITY, f64::min);
    let hi = slice.nodes.iter().map(|n| n.t).fold(0.0, f64::max);
    assert!((3.0..3.001).contains(&lo), "{lo}");
    assert!(hi <= 5.0 && hi > 4.99, "{hi}");
    assert_eq!(SliceRegion::Cone.time_extent(3.0), Some((3.0, 5.0)));
}

fn bridged_ratio(dr: f64) -> f64 {
    let spec = free(Preset::FreeWave);
    let settings = RunSettings {
        dr,
        t_final: 5.5,
        snapshot_interval: Some(0.25),
        ..Default::default()
    };
    let record = run(&spec, &Preset::FreeWave.data(2.0, 0.5), &settings).unwrap();
    let cap = bridge_to_first_hyperboloid(&record, &settings).unwrap();
    assert!(cap.complete());
    let bridged = summarize_slice(&spec, &cap, MassNorm::default())
        .unwrap()
        .energy(0);
    bridged / record.history[0].flat_energy[0]
}

#[test]
fn bridged_energy_is_comparable_to_cauchy_energy() {
    let coarse = bridged_ratio(0.02);
    let fine = bridged_ratio(0.01);
    // for the free wave the flux through H_{B+1} equals the energy at t = B + 1
    assert!((coarse - 1.0).abs() < 0.01, "{coarse}");
    assert!((fine - 1.0).abs() < 0.01, "{fine}");
    assert!((coarse - fine).abs() < 0.005, "{coarse} {fine}");
}

#[test]
fn bridge_needs_coverage_and_maps_zero_to_zero() {
    let spec = free(Preset::FreeKg);
    let mut settings = RunSettings {
        dr: 0.05,
        t_final: 4.5,
        snapshot_interval: Some(0.25),
        ..Default::default()
    };
    let short = run(&spec, &Preset::FreeKg.data(2.0, 0.1), &settings).unwrap();
    assert!(matches!(
        bridge_to_first_hyperboloid(&short, &settings),
        Err(SolverError::Coverage(_))
    ));
    let no_snapshots = run(
        &spec,
        &Preset::FreeKg.data(2.0, 0.1),
        &RunSettings {
            snapshot_interval: None,
            ..settings.clone()
        },
    )
    .unwrap();
    assert!(bridge_to_first_hyperboloid(&no_snapshots, &settings).is_err());

    settings.t_final = 6.0;
    let zero = run(&spec, &Preset::FreeKg.data(2.0, 0.0), &settings).unwrap();
    let cap = bridge_to_first_hyperboloid(&zero, &settings).unwrap();
    assert!(cap
        .u
        .iter()
        .chain(&cap.ut)
        .chain(&cap.ur)
        .flatten()
        .all(|&v| v == 0.0));

    settings.snapshot_interval = Some(0.3);
    assert!(matches!(
        run(&spec, &Preset::FreeKg.data(2.0, 0.1), &settings),
        Err(SolverError::Config(_))
    ));
}

#[test]
fn snapshot_interpolation_matches_online_capture() {
    for preset in [Preset::FreeWave, Preset::FreeKg] {
        let spec = free(preset);
        let settings = RunSettings {
            dr: 0.02,
            t_final: 9.0,
            ladder: vec![4.0],
            snapshot_interval: Some(0.25),
            ..Default::default()
        };
        let record = run(&spec, &preset.data(2.0, 1.0), &settings).unwrap();
        let online = record.slice(4.0).unwrap();
        assert!(online.complete());
        let interp = interpolate_to_hyperboloid(&record, settings.slice(4.0).unwrap()).unwrap();
        for (a, b) in [
            (&online.u, &interp.u),
            (&online.ut, &interp.ut),
            (&online.ur, &interp.ur),
        ] {
            let scale = a[0].iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let diff = a[0]
                .iter()
                .zip(&b[0])
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            assert!(diff < 1e-2 * scale, "{preset}: {diff:e} vs {scale:e}");
        }
        let e_online = summarize_slice(&spec, online, MassNorm::default())
            .unwrap()
            .energy(0);
        let e_interp = summarize_slice(&spec, &interp, MassNorm::default())
            .unwrap()
            .energy(0);
        assert!((e_online - e_interp).abs() < 0.01 * e_online);
    }
}

#[test]
fn interpolation_needs_coverage() {
    let spec = free(Preset::FreeWave);
    let settings = RunSettings {
        dr: 0.05,
        t_final: 7.0,
        snapshot_interval: Some(0.25),
        ..Default::default()
    };
    let record = run(&spec, &Preset::FreeWave.data(2.0, 1.0), &settings).unwrap();
    // H_4 ∩ Λ′ reaches t = 8.5
    let res = interpolate_to_hyperboloid(&record, settings.slice(4.0).unwrap());
    assert!(matches!(res, Err(SolverError::Coverage(_))));
}

#[test]
fn decay_fit_synthetic_series() {
    let exact: Vec<(f64, f64)> = (5..=20)
        .map(|t| (t as f64, (t as f64).powf(-1.5)))
        .collect();
    let fit = decay_fit(&exact).unwrap();
    assert!((fit.exponent + 1.5).abs() < 1e-12);
    assert!(fit.stderr < 1e-12);
    assert_eq!(fit.points, 16);

    let wobble: Vec<(f64, f64)> = (5..=40)
        .map(|t| {
            let t = t as f64;
            (t, t.powf(-1.5) * (1.0 + 0.1 * t.sin()))
        })
        .collect();
    let fit = decay_fit(&wobble).unwrap();
    assert!((fit.exponent + 1.5).abs() < 0.05, "{fit:?}");
    assert!(fit.stderr > 0.0);

    let flat: Vec<(f64, f64)> = (5..=12).map(|t| (t as f64, 3.0)).collect();
    assert!(decay_fit(&flat).unwrap().exponent.abs() < 1e-12);

    assert!(decay_fit(&exact[..4]).is_err());
    let mut bad = exact.clone();
    bad[3].1 = 0.0;
    assert!(decay_fit(&bad).is_err());
    bad[3].1 = -1.0;
    assert!(decay_fit(&bad).is_err());
}

#[test]
fn support_grows_at_most_at_unit_speed() {
    for dr in [0.04, 0.02] {
        let settings = RunSettings {
            dr,
            t_final: 23.0,
            record_interval: 0.25,
            ..Default::default()
        };
        for preset in [Preset::FreeWave, Preset::FreeKg, Preset::CoupledWkg] {
            let out = run(&free(preset), &preset.data(2.0, 0.1), &settings).unwrap();
            let h = &out.history;
            assert!(h[0].support <= 2.0);
            for i in 0..h.len() {
                // rates are per unit time; shorter windows only see the stencil's precursor
                for j in (i + 1..h.len()).filter(|&j| h[j].t - h[i].t >= 1.0) {
                    let allowed = (1.0 + 10.0 * dr) * (h[j].t - h[i].t) + dr;
                    assert!(
                        h[j].support - h[i].support <= allowed,
                        "{preset} dr {dr}: {} -> {} over [{}, {}]",
                        h[i].support,
                        h[j].support,
                        h[i].t,
                        h[j].t
                    );
                }
            }
            assert!(out.max_support_excess <= 10.0 * dr * (settings.t_final - 3.0) + dr);
        }
    }
}

#[test]
fn free_wave_cauchy_energy_conserved_within_one_percent() {
    let settings = RunSettings {
        dr: 0.01,
        t_final: 33.0,
        ..Default::default()
    };
    let out = run(
        &free(Preset::FreeWave),
        &Preset::FreeWave.data(2.0, 0.01),
        &settings,
    )
    .unwrap();
    assert!((out.t_end - 33.0).abs() < 1e-9);
    let e: Vec<f64> = out.history.iter().map(|h| h.flat_energy[0]).collect();
    let hi = e.iter().copied().fold(0.0, f64::max);
    let lo = e.iter().copied().fold(f64::INFINITY, f64::min);
    assert!((hi - lo) / hi < 0.01, "variation {}", (hi - lo) / hi);
}

fn worst_margin(spec: &SystemSpec, summaries: &[SliceSummary]) -> f64 {
    (0..spec.n())
        .flat_map(|c| run_inequality(summaries, c).unwrap())
        .map(|r| r.margin)
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn preset_runs_satisfy_the_energy_inequality() {
    let settings = RunSettings {
        dr: 0.02,
        t_final: 51.0,
        ladder: ladder(3.0, 10.0, 0.5),
        ..Default::default()
    };
    for preset in Preset::ALL {
        let spec = free(preset);
        let eps = if preset == Preset::QuasilinearToy {
            0.04
        } else {
            0.01
        };
        let record = run(&spec, &preset.data(2.0, eps), &settings).unwrap();
        assert!(record.truncation.is_none());
        for norm in [MassNorm::Doubled, MassNorm::Flux] {
            let summaries = summarize(&spec, &record, norm).unwrap();
            assert!(summaries.iter().all(|s| s.complete));
            let worst = worst_margin(&spec, &summaries);
            assert!(worst >= -0.03, "{preset} {norm:?}: {worst}");
        }
    }
}

#[test]
fn doubled_mass_density_drifts_for_free_klein_gordon() {
    let settings = RunSettings {
        dr: 0.05,
        t_final: 201.0,
        ladder: ladder(3.0, 20.0, 1.0),
        ..Default::default()
    };
    let spec = free(Preset::FreeKg);
    let record = run(&spec, &Preset::FreeKg.data(2.0, 0.01), &settings).unwrap();
    let flux = summarize(&spec, &record, MassNorm::Flux).unwrap();
    assert!(worst_margin(&spec, &flux) > -1e-3);
    // 2(au)² is not the conserved density of □v + v = 0
    let doubled = summarize(&spec, &record, MassNorm::Doubled).unwrap();
    assert!(worst_margin(&spec, &doubled) < -0.03);
}

#[test]
fn removing_the_mass_lowers_the_energy() {
    let spec = free(Preset::FreeKg);
    let mut massless = spec.clone();
    massless.masses = vec![0.0];
    let settings = RunSettings {
        dr: 0.02,
        t_final: 19.0,
        ladder: vec![3.0, 4.0, 5.0, 6.0],
        ..Default::default()
    };
    let record = run(&spec, &Preset::FreeKg.data(2.0, 0.05), &settings).unwrap();
    for cap in &record.slices {
        for norm in [MassNorm::Doubled, MassNorm::Intro, MassNorm::Flux] {
            let with = summarize_slice(&spec, cap, norm).unwrap().energy(0);
            let without = summarize_slice(&massless, cap, norm).unwrap().energy(0);
            assert!(without < with, "T = {} {norm:?}", cap.big_t);
            assert!(without > 0.0);
        }
    }
}

#[test]
fn bootstrap_monitor_examples() {
    let settings = RunSettings {
        dr: 0.05,
        t_final: 51.0,
        ladder: ladder(3.0, 10.0, 1.0),
        ..Default::default()
    };
    let zero = run_preset(Preset::CoupledWkg, 0.0, &settings, MassNorm::default()).unwrap();
    let rep = bootstrap_monitor(
        &zero.spec,
        &zero.summaries,
        1.0 / 6.0,
        2.0,
        BootstrapScale::Epsilon(0.0),
    );
    assert!(rep.passed());
    assert_eq!(rep.rows.len(), 2 * 8);

    let wave = run_preset(Preset::FreeWave, 0.01, &settings, MassNorm::default()).unwrap();
    let rep = bootstrap_monitor(
        &wave.spec,
        &wave.summaries,
        1.0 / 6.0,
        2.0,
        BootstrapScale::InitialEnergy,
    );
    assert!(rep.passed(), "{:?}", rep.first_violation);
    assert!(rep.first_violation.is_none());

    let strong = run_preset(Preset::NonnullWave, 0.3, &settings, MassNorm::default()).unwrap();
    let rep = bootstrap_monitor(
        &strong.spec,
        &strong.summaries,
        1.0 / 6.0,
        2.0,
        BootstrapScale::Epsilon(0.3),
    );
    let t = rep.first_violation.expect("violation recorded");
    assert!(t.is_finite() && (3.0..=10.0).contains(&t));
}

#[test]
fn blowup_is_recorded_as_truncation() {
    let settings = RunSettings {
        dr: 0.05,
        t_final: 30.0,
        ladder: vec![3.0, 4.0, 10.0],
        ..Default::default()
    };
    let out = run_preset(Preset::NonnullWave, 40.0, &settings, MassNorm::default()).unwrap();
    let tr = out.record.truncation.expect("truncated");
    assert!(tr.t < 30.0);
    assert_eq!(out.record.t_end, tr.t.min(out.record.t_end));
    // the late slice is never completed
    assert!(out.summaries.iter().all(|s| s.big_t < 10.0 || !s.complete));
}

#[test]
fn non_radial_tensors_are_rejected() {
    let mut anti = CoefficientTensors::zeros(2, 0);
    anti.set(TensorKind::P, &[1, 0, 1, 1, 2], 1.0).unwrap();
    anti.set(TensorKind::P, &[1, 1, 0, 1, 2], -1.0).unwrap();
    assert!(matches!(
        SystemSpec::new(anti, vec![0.0, 0.0], false),
        Err(SolverError::NotRadial(_))
    ));

    let mut q = CoefficientTensors::zeros(1, 0);
    q.set(TensorKind::Q, &[1, 2, 1, 1], 1.0).unwrap();
    assert!(matches!(
        SystemSpec::new(q, vec![0.0], false),
        Err(SolverError::NotRadial(_))
    ));

    let mut aniso = CoefficientTensors::zeros(1, 0);
    aniso.set(TensorKind::P, &[1, 1, 1, 1, 1], 1.0).unwrap();
    assert!(matches!(
        SystemSpec::new(aniso, vec![0.0], false),
        Err(SolverError::NotRadial(_))
    ));

    assert!(SystemSpec::new(CoefficientTensors::zeros(1, 0), vec![1.0], false).is_err());
    assert!(SystemSpec::new(CoefficientTensors::zeros(0, 1), vec![0.5], false).is_err());
    assert!(SystemSpec::new(CoefficientTensors::zeros(0, 1), vec![1.0], false).is_ok());
}

#[test]
fn radial_bump_matches_jet_oracle() {
    let bump = RadialBump {
        amp: 0.7,
        freq: 0.5,
        c: 0.8,
    };
    let field = ScalarField::cone_bump(ConeBump {
        amp: 0.7,
        freq: 0.5,
        c: 0.8,
    });
    for mass in [0.0, 1.0, 1.5] {
        let forced = ScalarField::combine(vec![
            (1.0, field.wave().unwrap()),
            (mass * mass, field.clone()),
        ]);
        for (t, r) in [
            (5.0, 0.3),
            (8.0, 2.0),
            (12.0, 5.0),
            (4.0, 2.3),
            (20.0, 16.0),
        ] {
            let p = SpacetimePoint::new(t, [r, 0.0, 0.0]);
            let jet = field.jet(&p, 1).unwrap();
            let (u, ut, ur) = bump.first_order(t, r);
            assert!((u - jet.value()).abs() < 1e-14);
            assert!((ut - jet.derivative([1, 0, 0, 0])).abs() < 1e-13);
            assert!((ur - jet.derivative([0, 1, 0, 0])).abs() < 1e-13);
            let f = forced.value(&p).unwrap();
            assert!(
                (bump.forcing(t, r, mass) - f).abs() < 1e-12 * (1.0 + f.abs()),
                "({t}, {r})"
            );
        }
    }
    assert_eq!(bump.first_order(4.0, 3.0), (0.0, 0.0, 0.0));
    assert_eq!(bump.forcing(1.0, 0.0, 1.0), 0.0);
}

#[test]
fn manufactured_solution_is_reproduced() {
    let bump = RadialBump {
        amp: 1.0,
        freq: 0.5,
        c: 0.8,
    };
    let spec = free(Preset::FreeKg).with_forcing(vec![Some(bump)]).unwrap();
    let data = InitialData::Manufactured(vec![Some(bump)]);
    let err = |dr: f64| {
        let settings = RunSettings {
            dr,
            t_final: 10.0,
            ..Default::default()
        };
        let grid = RadialGrid::for_run(2.0, dr, 0.5, 10.0).unwrap();
        let state = CauchyState::from_data(&data, &grid, settings.t_start());
        let mut ev = Evolver::new(&spec, grid, state, settings.active_margin).unwrap();
        while ev.state.t < 10.0 - 1e-9 {
            ev.step().unwrap();
        }
        let t = ev.state.t;
        (0..grid.points())
            .map(|k| (ev.state.u[0][k] - bump.first_order(t, grid.r(k)).0).abs())
            .fold(0.0, f64::max)
    };
    let (e1, e2) = (err(0.04), err(0.02));
    assert!(e1 < 1e-2, "{e1}");
    assert!(e1 / e2 > 3.0, "{e1:e} {e2:e}");
}

#[test]
fn runs_are_deterministic() {
    let settings = RunSettings {
        dr: 0.05,
        t_final: 12.0,
        ladder: vec![3.0, 4.0, 5.0],
        ..Default::default()
    };
    let a = run_preset(Preset::CoupledWkg, 0.1, &settings, MassNorm::default()).unwrap();
    let b = run_preset(Preset::CoupledWkg, 0.1, &settings, MassNorm::default()).unwrap();
    assert_eq!(a.record, b.record);
    assert_eq!(a.summaries, b.summaries);
    let c = run_preset(
        Preset::CoupledWkg,
        0.1,
        &RunSettings {
            seed: 1,
            ..settings.clone()
        },
        MassNorm::default(),
    )
    .unwrap();
    assert_ne!(a.record.config_hash, c.record.config_hash);
    assert_eq!(a.record.config_hash.len(), 64);
}

#[test]
fn preset_names_roundtrip() {
    for p in Preset::ALL {
        assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        assert_eq!(p.to_string(), p.name());
    }
    assert!("wave".parse::<Preset>().is_err());
}

#[test]
fn mismatched_data_is_rejected() {
    let spec = free(Preset::CoupledWkg);
    let res = run(
        &spec,
        &Preset::FreeWave.data(2.0, 0.1),
        &RunSettings::default(),
    );
    assert!(matches!(res, Err(SolverError::Config(_))));
}
