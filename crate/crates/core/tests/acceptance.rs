//! End-to-end acceptance checks. Each test prints one verdict line and fails
//! when its numerical target or its runtime budget is missed.

use std::sync::Arc;
use std::time::{Duration, Instant};

use hyperfoil::energy::{
    energy_em, energy_inequality_check, energy_integrands, sobolev_ratio, FieldJetOnSlice,
    InequalitySample, MassNorm, SobolevGrid,
};
use hyperfoil::fields::{run_battery, sobolev_profiles, test_family, Identity};
use hyperfoil::geometry::{build_slice, QuadratureRule, SliceNode};
use hyperfoil::nullcond::{
    check_null_condition, check_weak_null, frame_zero_components, sample_null_cone, sphere_point,
    ClassicalForm, CoefficientTensors, TensorKind, DEFAULT_NULL_TOL,
};
use hyperfoil::solver::{
    bootstrap_monitor, decay_fit, decay_series, run_inequality, run_preset, run_system,
    BootstrapScale, InitialData, Preset, RadialBump, RunSettings, SliceSummary, SystemRun,
};
use hyperfoil::{SliceRegion, SpacetimePoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ladder(from: f64, to: f64, step: f64) -> Vec<f64> {
    let n = ((to - from) / step).round() as usize;
    (0..=n).map(|k| from + step * k as f64).collect()
}

fn verdict(label: &str, start: Instant, budget_s: u64, passed: bool, detail: String) {
    let elapsed = start.elapsed();
    let in_time = elapsed <= Duration::from_secs(budget_s);
    let ok = passed && in_time;
    let line = format!(
        "{label}: {} ({detail}; {:.1} s of {budget_s} s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    println!("{line}");
    assert!(ok, "{line}");
}

fn relative_variation(values: &[f64]) -> f64 {
    let hi = values.iter().copied().fold(0.0, f64::max);
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    if hi > 0.0 {
        (hi - lo) / hi
    } else {
        0.0
    }
}

fn final_energy(run: &SystemRun) -> Option<(f64, f64)> {
    run.summaries
        .iter()
        .rfind(|s| s.complete)
        .map(|s| (s.big_t, s.energy(0)))
}

#[test]
fn criterion_01_energy_expressions_agree() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst_node = 0.0f64;
    for _ in 0..1000 {
        let big_t: f64 = rng.gen_range(1.0..50.0);
        let r = rng.gen_range(0.0..(big_t * big_t - 1.0) / 2.0);
        let omega = sphere_point(rng.gen_range(0..1000), [rng.gen(), rng.gen(), rng.gen()]);
        let node = SliceNode {
            x: omega.map(|w| w * r),
            r,
            t: big_t.hypot(r),
            weight: 1.0,
        };
        let ut = rng.gen_range(-3.0..3.0);
        let grad = [
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
        ];
        let e = energy_integrands(&node, big_t, ut, grad);
        let scale = e.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            worst_node = worst_node.max((e[i] - e[j]).abs() / scale);
        }
    }
    let mut worst_total = 0.0f64;
    for (k, (_, field)) in test_family().iter().enumerate() {
        for big_t in [3.0, 5.5, 8.0] {
            let slice = Arc::new(
                build_slice(big_t, SliceRegion::Cone, 400, QuadratureRule::Midpoint).unwrap(),
            );
            let jet = FieldJetOnSlice::from_field(slice, (k % 2) as f64, field).unwrap();
            worst_total =
                worst_total.max(energy_em(&jet, big_t, MassNorm::Doubled).unwrap().spread);
        }
    }
    verdict(
        "1 energy expressions",
        start,
        5,
        worst_node < 1e-12 && worst_total < 1e-9,
        format!("node spread {worst_node:.2e}, integrated spread {worst_total:.2e}"),
    );
}

#[test]
fn criterion_02_commutator_battery() {
    let start = Instant::now();
    let rows = run_battery(&test_family(), &Identity::ALL, 100, 0, 1e-10).unwrap();
    let worst = rows.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    let failed: Vec<String> = rows
        .iter()
        .filter(|r| !r.passed)
        .map(|r| format!("{}/{}", r.identity.id(), r.field))
        .collect();
    verdict(
        "2 commutator battery",
        start,
        10,
        failed.is_empty() && rows.len() == Identity::ALL.len() * 5,
        format!(
            "{} rows, worst residual {worst:.2e}, failing {failed:?}",
            rows.len()
        ),
    );
}

#[test]
fn criterion_03_null_classification() {
    let start = Instant::now();
    let samples = sample_null_cone(200, 0);
    let p = SpacetimePoint::new(4.0, [1.0, 2.0, -1.0]);
    let mut ok = true;
    let mut nulls = vec![ClassicalForm::Q0.tensors()];
    for al in 0..4 {
        for be in al + 1..4 {
            nulls.push(ClassicalForm::Antisymmetric(al, be).tensors());
        }
    }
    // a mixture of null forms is null
    let mut mix = CoefficientTensors::zeros(nulls[1].j0, nulls[1].k0);
    for (k, c) in nulls.iter().enumerate().skip(1) {
        for (idx, v) in c.nonzeros(TensorKind::P) {
            let old = mix.get(TensorKind::P, &idx);
            mix.set(TensorKind::P, &idx, old + (k as f64 + 1.0) * v)
                .unwrap();
        }
    }
    nulls.push(mix);
    for c in &nulls {
        ok &= check_null_condition(c, &samples, DEFAULT_NULL_TOL).passed;
        ok &= check_weak_null(c, &p, 100, 0, DEFAULT_NULL_TOL)
            .unwrap()
            .passed();
        // null implies weak null on every sampled direction
        ok &= (0..100).all(|k| {
            frame_zero_components(c, sphere_point(k, [0.3, 0.6, 0.1]))
                <= DEFAULT_NULL_TOL * c.magnitude()
        });
    }
    for form in [ClassicalForm::TimeSquared, ClassicalForm::TimeProduct] {
        let c = form.tensors();
        ok &= !check_null_condition(&c, &samples, DEFAULT_NULL_TOL).passed;
        ok &= !check_weak_null(&c, &p, 100, 0, DEFAULT_NULL_TOL)
            .unwrap()
            .passed();
    }
    verdict(
        "3 null classification",
        start,
        1,
        ok,
        format!("{} null forms, 2 non-null forms", nulls.len()),
    );
}

#[test]
fn criterion_04_sobolev_ratio_is_stable() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut detail = Vec::new();
    for (name, field) in sobolev_profiles() {
        let ratios: Vec<f64> = [4.0, 8.0, 16.0, 32.0]
            .iter()
            .map(|&t| {
                sobolev_ratio(&field, t, SobolevGrid::default())
                    .unwrap()
                    .ratio
            })
            .collect();
        let v = relative_variation(&ratios);
        worst = worst.max(v);
        detail.push(format!("{name} {:.1}%", 100.0 * v));
    }
    verdict(
        "4 Sobolev ratio",
        start,
        30,
        worst < 0.2,
        format!("variation {}", detail.join(", ")),
    );
}

#[test]
fn criterion_05_free_klein_gordon_decay() {
    let start = Instant::now();
    // The interior sup carries a |cos| modulation of period π; fit its upper
    // envelope max_{[T, T + π]} sampled on a quarter-unit ladder.
    let window = std::f64::consts::PI;
    let dense = ladder(5.0, 24.0, 0.25);
    let settings = RunSettings {
        dr: 0.01,
        t_final: 2f64.sqrt() * 24.0 + 1.0,
        ladder: dense,
        slice_region: SliceRegion::Interior,
        ..Default::default()
    };
    let run = run_preset(Preset::FreeKg, 0.01, &settings, MassNorm::default()).unwrap();
    assert!(run.record.truncation.is_none());
    let series = decay_series(&run.summaries, 0, "interior_value");
    let envelope: Vec<(f64, f64)> = (5..=20)
        .map(|t| {
            let t = f64::from(t);
            let sup = series
                .iter()
                .filter(|(s, _)| *s >= t - 1e-9 && *s <= t + window + 1e-9)
                .map(|(_, v)| *v)
                .fold(0.0, f64::max);
            (t, sup)
        })
        .collect();
    let raw: Vec<(f64, f64)> = series
        .iter()
        .copied()
        .filter(|(t, _)| t.fract() == 0.0 && *t <= 20.0)
        .collect();
    let fit = decay_fit(&envelope).unwrap();
    let raw_fit = decay_fit(&raw).unwrap();
    verdict(
        "5 free Klein-Gordon decay",
        start,
        60,
        (fit.exponent + 1.5).abs() <= 0.2,
        format!(
            "envelope exponent {:.3} ± {:.3}, raw exponent {:.3} ± {:.3}, target -1.5 ± 0.2",
            fit.exponent, fit.stderr, raw_fit.exponent, raw_fit.stderr
        ),
    );
}

#[test]
fn criterion_06_free_wave_weighted_decay() {
    let start = Instant::now();
    // H_T ∩ Λ′ extends to t = (T² + 1)/2
    let settings = RunSettings {
        dr: 0.02,
        t_final: 201.0,
        ladder: ladder(5.0, 20.0, 1.0),
        ..Default::default()
    };
    let run = run_preset(Preset::FreeWave, 0.01, &settings, MassNorm::default()).unwrap();
    let series = decay_series(&run.summaries, 0, "cone_weighted");
    let values: Vec<f64> = series.iter().map(|(_, v)| *v).collect();
    let late: Vec<f64> = series
        .iter()
        .filter(|(t, _)| *t >= 8.0)
        .map(|(_, v)| *v)
        .collect();
    let interior: Vec<f64> = decay_series(&run.summaries, 0, "interior_weighted")
        .iter()
        .map(|(_, v)| *v)
        .collect();
    let variation = relative_variation(&values);
    verdict(
        "6 free wave weighted decay",
        start,
        60,
        series.len() == 16 && variation < 0.3,
        format!(
            "variation {:.1}% over {} slices (T ≥ 8: {:.1}%), weighted sup {:.3e}..{:.3e}, interior sup {:.1e}..{:.1e}",
            100.0 * variation,
            series.len(),
            100.0 * relative_variation(&late),
            values.first().copied().unwrap_or(0.0),
            values.last().copied().unwrap_or(0.0),
            interior.first().copied().unwrap_or(0.0),
            interior.last().copied().unwrap_or(0.0),
        ),
    );
}

/// Numerical √-form margins and their distance to the exact-solution margins on the same slices.
fn manufactured_margins(preset: Preset, bump: RadialBump, dr: f64) -> (f64, f64) {
    let settings = RunSettings {
        dr,
        // H_8 ∩ Λ′ ends at t = 32.5
        t_final: 33.0,
        ladder: ladder(3.0, 8.0, 0.25),
        ..Default::default()
    };
    let spec = preset
        .system()
        .unwrap()
        .with_forcing(vec![Some(bump)])
        .unwrap();
    let mass = spec.masses[0];
    let run = run_system(
        spec,
        &InitialData::Manufactured(vec![Some(bump)]),
        &settings,
        MassNorm::default(),
    )
    .unwrap();
    assert!(run.summaries.iter().all(|s| s.complete));
    let numerical = run_inequality(&run.summaries, 0).unwrap();
    let exact: Vec<InequalitySample> = settings
        .ladder
        .iter()
        .map(|&big_t| {
            let slice = settings.slice(big_t).unwrap();
            let (mut u, mut ut, mut ur, mut src) = (vec![], vec![], vec![], 0.0);
            for n in &slice.nodes {
                let (a, b, c) = bump.first_order(n.t, n.r);
                u.push(a);
                ut.push(b);
                ur.push(c);
                src += n.weight * bump.forcing(n.t, n.r, mass).powi(2);
            }
            let jet = FieldJetOnSlice::from_radial(slice, mass, u, ut, ur).unwrap();
            InequalitySample {
                big_t,
                energy: energy_em(&jet, big_t, MassNorm::default())
                    .unwrap()
                    .energy(),
                source_norm: src.sqrt(),
            }
        })
        .collect();
    let exact = energy_inequality_check(&exact).unwrap();
    let worst = numerical
        .iter()
        .map(|r| r.margin)
        .fold(f64::INFINITY, f64::min);
    let distance = numerical
        .iter()
        .zip(&exact)
        .map(|(a, b)| (a.margin - b.margin).abs())
        .fold(0.0, f64::max);
    (worst, distance)
}

#[test]
fn criterion_07_energy_inequality_manufactured() {
    let start = Instant::now();
    let bump = RadialBump {
        amp: 1.0,
        freq: 0.5,
        c: 0.8,
    };
    let mut ok = true;
    let mut detail = Vec::new();
    for preset in [Preset::FreeWave, Preset::FreeKg] {
        let rows: Vec<(f64, f64)> = [0.02, 0.01, 0.005]
            .iter()
            .map(|&dr| manufactured_margins(preset, bump, dr))
            .collect();
        ok &= rows[1].0 >= -0.02;
        ok &= rows[0].1 > rows[1].1 && rows[1].1 > rows[2].1;
        detail.push(format!(
            "{preset}: margin {:.2e} at dr 0.01, distance to exact {:.1e} / {:.1e} / {:.1e}",
            rows[1].0, rows[0].1, rows[1].1, rows[2].1
        ));
    }
    verdict("7 energy inequality", start, 90, ok, detail.join("; "));
}

#[test]
fn criterion_08_curved_energy_comparable() {
    let start = Instant::now();
    let settings = RunSettings {
        dr: 0.02,
        t_final: 51.0,
        ladder: ladder(3.0, 10.0, 1.0),
        ..Default::default()
    };
    let run = run_preset(Preset::QuasilinearToy, 0.04, &settings, MassNorm::default()).unwrap();
    let complete: Vec<&SliceSummary> = run.summaries.iter().filter(|s| s.complete).collect();
    let max_g = complete.iter().map(|s| s.max_g).fold(0.0, f64::max);
    let worst = complete
        .iter()
        .map(|s| {
            let c = s.curved.expect("quasilinear system");
            c.flat / c.curved
        })
        .fold(0.0, f64::max);
    verdict(
        "8 curved energy comparability",
        start,
        30,
        complete.len() == settings.ladder.len() && max_g <= 0.05 && worst <= 3.0,
        format!(
            "max |G| {max_g:.3}, max E_m/E_G {worst:.4} over {} slices",
            complete.len()
        ),
    );
}

#[test]
fn criterion_09_null_versus_nonnull() {
    let start = Instant::now();
    let settings = RunSettings {
        dr: 0.05,
        t_final: 451.0,
        ladder: ladder(3.0, 30.0, 1.0),
        ..Default::default()
    };
    let null = run_preset(Preset::NullWave, 0.3, &settings, MassNorm::default()).unwrap();
    let nonnull = run_preset(Preset::NonnullWave, 0.3, &settings, MassNorm::default()).unwrap();
    let (passed, detail) = match &nonnull.record.truncation {
        Some(tr) => (
            true,
            format!("non-null run truncated by blowup at t = {:.2}", tr.t),
        ),
        None => {
            let (tn, en) = final_energy(&null).unwrap();
            let (tm, em) = final_energy(&nonnull).unwrap();
            (
                tn == tm && em >= 2.0 * en,
                format!(
                    "E(T = {tm}) non-null {em:.4e} vs null {en:.4e}, ratio {:.2}",
                    em / en
                ),
            )
        }
    };
    verdict("9 null versus non-null", start, 120, passed, detail);
}

#[test]
fn criterion_10_bootstrap_monitor() {
    let start = Instant::now();
    let settings = RunSettings {
        dr: 0.05,
        t_final: 451.0,
        ladder: ladder(3.0, 30.0, 1.0),
        ..Default::default()
    };
    let run = run_preset(Preset::CoupledWkg, 0.01, &settings, MassNorm::default()).unwrap();
    let rep = bootstrap_monitor(
        &run.spec,
        &run.summaries,
        1.0 / 6.0,
        2.0,
        BootstrapScale::InitialEnergy,
    );
    let worst = rep
        .rows
        .iter()
        .map(|r| r.value / r.bound)
        .fold(0.0, f64::max);
    verdict(
        "10 bootstrap monitor",
        start,
        120,
        run.record.truncation.is_none()
            && rep.passed()
            && rep.rows.len() == 2 * settings.ladder.len(),
        format!("{} checks, worst value/bound {worst:.3}", rep.rows.len()),
    );
}
