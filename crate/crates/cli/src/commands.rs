use std::io::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use hyperfoil::config::{ConfigError, SimConfig};
use hyperfoil::energy::{sobolev_ratio, SobolevGrid};
use hyperfoil::fields::{run_battery, sobolev_profiles, test_family, Identity};
use hyperfoil::nullcond::{
    check_null_condition, check_weak_null, load_tensors, sample_null_cone, NullError,
};
use hyperfoil::report::write_reports;
use hyperfoil::solver::{run_inequality, run_system, SolverError, SystemRun};
use hyperfoil::SpacetimePoint;

use crate::{Cli, Command, Global};

pub const OK: u8 = 0;
pub const CHECK_FAILED: u8 = 1;
pub const CONFIG_ERROR: u8 = 2;
pub const TRUNCATED: u8 = 3;

/// Input problems exit with 2, everything else with 1.
pub fn exit_code_for(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<ConfigError>() || cause.is::<NullError>() {
            return CONFIG_ERROR;
        }
        if let Some(SolverError::Config(_) | SolverError::NotRadial(_)) =
            cause.downcast_ref::<SolverError>()
        {
            return CONFIG_ERROR;
        }
    }
    CHECK_FAILED
}

pub fn dispatch(cli: &Cli) -> Result<u8> {
    let g = &cli.global;
    match &cli.command {
        Command::Commutators { list, tol, points } => commutators(g, *list, *tol, *points),
        Command::Nullcheck {
            file,
            tol,
            samples,
            directions,
        } => nullcheck(g, file, *tol, *samples, *directions),
        Command::Simulate => simulate(g),
        Command::Energy { min_margin } => energy(g, *min_margin),
        Command::Decay => decay(g),
        Command::Sobolev { max_variation } => sobolev(g, *max_variation),
    }
}

fn load_config(g: &Global) -> Result<SimConfig> {
    let mut cfg = match &g.config {
        Some(path) => SimConfig::load(path)?,
        None => SimConfig::default(),
    };
    for o in &g.overrides {
        cfg.set(o)?;
    }
    if let Some(seed) = g.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn out_dir(g: &Global) -> Result<&Path> {
    std::fs::create_dir_all(&g.out).with_context(|| format!("creating {}", g.out.display()))?;
    Ok(&g.out)
}

fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w =
        csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

fn commutators(g: &Global, list: bool, tol: f64, points: usize) -> Result<u8> {
    if list {
        for id in Identity::ALL {
            println!("{}", id.id());
        }
        return Ok(OK);
    }
    if g.dry_run {
        println!(
            "dry run: {} identities x {} fields x {points} points",
            Identity::ALL.len(),
            test_family().len()
        );
        return Ok(OK);
    }
    let seed = g.seed.unwrap_or(0);
    let rows = run_battery(&test_family(), &Identity::ALL, points, seed, tol)?;
    let mut failed = 0;
    let mut table = Vec::new();
    for id in Identity::ALL {
        let mine: Vec<_> = rows.iter().filter(|r| r.identity == id).collect();
        let worst = mine.iter().map(|r| r.max_residual).fold(0.0, f64::max);
        let ok = mine.iter().all(|r| r.passed);
        failed += usize::from(!ok);
        println!(
            "{:<26} {:>10.3e}  {}",
            id.id(),
            worst,
            if ok { "ok" } else { "FAIL" }
        );
    }
    for r in &rows {
        table.push(vec![
            r.identity.id().to_string(),
            r.field.to_string(),
            format!("{:.6e}", r.max_residual),
            format!("{:.6e}", r.scale),
            r.passed.to_string(),
        ]);
    }
    let path = out_dir(g)?.join("commutators.csv");
    write_csv(
        &path,
        &["identity", "field", "max_residual", "scale", "passed"],
        &table,
    )?;
    println!(
        "{} identities, {} failing at tol {tol:e}; wrote {}",
        Identity::ALL.len(),
        failed,
        path.display()
    );
    Ok(if failed == 0 { OK } else { CHECK_FAILED })
}

fn nullcheck(g: &Global, file: &Path, tol: f64, samples: usize, directions: usize) -> Result<u8> {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", file.display());
            return Ok(CONFIG_ERROR);
        }
    };
    let tensors = match load_tensors(&text) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{}: {e}", file.display());
            return Ok(CONFIG_ERROR);
        }
    };
    if g.dry_run {
        println!(
            "{}: parsed system with {} wave and {} Klein-Gordon components",
            file.display(),
            tensors.j0,
            tensors.k0
        );
        return Ok(OK);
    }
    let seed = g.seed.unwrap_or(0);
    let null = check_null_condition(&tensors, &sample_null_cone(samples, seed), tol);
    // any point with r ≥ t/2 fixes one frame; the sampled directions cover the rest
    let p = SpacetimePoint::new(4.0, [3.0, 0.0, 0.0]);
    let weak = check_weak_null(&tensors, &p, directions, seed, tol)?;
    let verdict = |b: bool| if b { "pass" } else { "FAIL" };
    println!(
        "null condition:      {}  (max violation {:.3e}, scale {:.3e})",
        verdict(null.passed),
        null.max_violation,
        null.scale
    );
    println!(
        "weak null condition: {}  (max violation {:.3e} over {} directions)",
        verdict(weak.passed()),
        weak.sampled.max_violation.max(weak.at_point.max_violation),
        weak.directions
    );
    Ok(if null.passed { OK } else { CHECK_FAILED })
}

fn evolve(g: &Global) -> Result<Option<(SimConfig, SystemRun)>> {
    let cfg = load_config(g)?;
    let spec = cfg.system()?;
    let settings = cfg.settings();
    settings.validate()?;
    if g.dry_run {
        println!(
            "dry run: config {} valid; {} component(s), dr {}, t_final {}, {} ladder slices",
            &cfg.hash()[..12],
            spec.n(),
            cfg.dr,
            cfg.t_final,
            cfg.t_ladder.len()
        );
        return Ok(None);
    }
    let data = cfg.data(spec.n());
    let run = run_system(spec, &data, &settings, cfg.mass_norm)?;
    let files = write_reports(out_dir(g)?, &run)?;
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(Some((cfg, run)))
}

fn truncation_code(run: &SystemRun) -> Option<u8> {
    run.record.truncation.map(|tr| {
        println!("run truncated at t = {:.4} ({:?})", tr.t, tr.reason);
        TRUNCATED
    })
}

fn simulate(g: &Global) -> Result<u8> {
    let Some((cfg, run)) = evolve(g)? else {
        return Ok(OK);
    };
    println!(
        "{}: {} steps to t = {:.4}, {} slice(s) summarized",
        cfg.preset,
        run.record.steps,
        run.record.t_end,
        run.summaries.len()
    );
    Ok(truncation_code(&run).unwrap_or(OK))
}

fn energy(g: &Global, min_margin: f64) -> Result<u8> {
    let Some((_, run)) = evolve(g)? else {
        return Ok(OK);
    };
    let mut stdout = std::io::stdout().lock();
    writeln!(
        stdout,
        "{:>8} {:>4} {:>14} {:>10} {:>14} {:>10}",
        "T", "comp", "E_m", "spread", "E_G", "margin"
    )?;
    let mut worst = f64::INFINITY;
    for c in 0..run.spec.n() {
        let rows = run_inequality(&run.summaries, c).unwrap_or_default();
        for s in &run.summaries {
            let e = &s.energies[c];
            let margin = rows.iter().find(|r| r.big_t == s.big_t).map(|r| r.margin);
            if let Some(m) = margin {
                worst = worst.min(m);
            }
            writeln!(
                stdout,
                "{:>8.3} {:>4} {:>14.6e} {:>10.2e} {:>14.6e} {:>10}",
                s.big_t,
                c + 1,
                e.energy(),
                e.spread,
                e.curved,
                margin.map_or("-".into(), |m| format!("{m:.4}"))
            )?;
        }
    }
    if let Some(code) = truncation_code(&run) {
        return Ok(code);
    }
    if worst.is_finite() {
        writeln!(
            stdout,
            "worst inequality margin {worst:.4} (threshold {min_margin})"
        )?;
    }
    Ok(if worst >= min_margin {
        OK
    } else {
        CHECK_FAILED
    })
}

fn decay(g: &Global) -> Result<u8> {
    let Some((_, run)) = evolve(g)? else {
        return Ok(OK);
    };
    if run.decay.is_empty() {
        println!("no region had enough complete slices for a fit");
    }
    for d in &run.decay {
        println!(
            "u{} {:<18} exponent {:>8.4} ± {:.4} ({} slices)",
            d.component, d.region, d.fit.exponent, d.fit.stderr, d.fit.points
        );
    }
    Ok(truncation_code(&run).unwrap_or(OK))
}

fn sobolev(g: &Global, max_variation: f64) -> Result<u8> {
    let cfg = load_config(g)?;
    if g.dry_run {
        println!(
            "dry run: {} profiles on {} slices",
            sobolev_profiles().len(),
            cfg.t_ladder.len()
        );
        return Ok(OK);
    }
    let mut rows = Vec::new();
    let mut failed = false;
    for (name, field) in sobolev_profiles() {
        let ratios = cfg
            .t_ladder
            .iter()
            .map(|&t| sobolev_ratio(&field, t, SobolevGrid::default()))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let lo = ratios.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().map(|r| r.ratio).fold(0.0, f64::max);
        let variation = if hi > 0.0 { (hi - lo) / hi } else { 0.0 };
        failed |= variation >= max_variation;
        println!(
            "{name:<8} ratio in [{lo:.5}, {hi:.5}], variation {:.2}%",
            100.0 * variation
        );
        for r in ratios {
            rows.push(vec![
                name.to_string(),
                format!("{:.6e}", r.big_t),
                format!("{:.6e}", r.sup),
                format!("{:.6e}", r.norm2),
                format!("{:.6e}", r.ratio),
            ]);
        }
    }
    let path = out_dir(g)?.join("sobolev.csv");
    write_csv(&path, &["profile", "T", "sup", "norm2", "ratio"], &rows)?;
    println!("wrote {}", path.display());
    Ok(if failed { CHECK_FAILED } else { OK })
}
