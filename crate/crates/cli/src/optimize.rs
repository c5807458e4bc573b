use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use serde::Serialize;
use serrin_core::fem::{boundary_gradient, write_boundary_csv, write_field};
use serrin_core::geometry::{is_starshaped, steiner_symmetrize, symmetry_defect, Axis, LevelSetField};
use serrin_core::overdet::{extract_free_boundary, overdet_report};
use serrin_core::report::{fmt17, ser_f64, ser_opt_f64, to_json};
use serrin_core::shapeopt::{
    evaluate, initial_disk, optimize_with_observer, resample, volume_projection, IterationRecord, OptimizerConfig,
    StopReason,
};

use crate::config::{parse_point, FileConfig};
use crate::output::OutDir;
use crate::{Outcome, Shared};

#[derive(Args, Debug)]
pub struct OptimizeArgs {
    #[command(flatten)]
    shared: Shared,
    /// Initial pseudo-time step.
    #[arg(long)]
    step0: Option<f64>,
    /// Relative volume tolerance.
    #[arg(long)]
    vol_tol: Option<f64>,
    /// Relative energy decrease over 10 accepted steps below which the run stops.
    #[arg(long)]
    stop_tol: Option<f64>,
    /// Width in cells of the velocity smoothing along the free boundary.
    #[arg(long)]
    smooth_cells: Option<f64>,
    /// Start from this level set (resampled onto the run grid) instead of a disk.
    #[arg(long)]
    init: Option<PathBuf>,
    /// Area of the initial disk.
    #[arg(long)]
    init_area: Option<f64>,
    /// Center `x,y` of the initial disk.
    #[arg(long)]
    init_center: Option<String>,
    /// Print every iteration record to stderr.
    #[arg(long)]
    verbose: bool,
}

/// Starting area: a disk of area α − 0.5 that still fits comfortably in the box.
fn default_init_area(alpha: f64) -> f64 {
    (alpha - 0.5).min(0.97 * std::f64::consts::PI).max(0.5 * alpha)
}

#[derive(Serialize)]
struct RunReport {
    #[serde(serialize_with = "ser_f64")]
    alpha: f64,
    grid_n: usize,
    #[serde(serialize_with = "ser_f64")]
    final_j: f64,
    #[serde(serialize_with = "ser_f64")]
    final_volume: f64,
    #[serde(serialize_with = "ser_f64")]
    multiplier: f64,
    #[serde(serialize_with = "ser_opt_f64")]
    free_boundary_cv: Option<f64>,
    touches_box: bool,
    #[serde(serialize_with = "ser_f64")]
    compliance: f64,
    #[serde(serialize_with = "ser_opt_f64")]
    lambda_hat: Option<f64>,
    #[serde(serialize_with = "ser_f64")]
    disk_deviation: f64,
    n_components: usize,
    #[serde(serialize_with = "ser_f64")]
    symmetry_defect_x: f64,
    #[serde(serialize_with = "ser_f64")]
    symmetry_defect_y: f64,
    starshaped: Option<bool>,
    /// Energy after symmetrizing the final domain about both axes and re-projecting.
    #[serde(serialize_with = "ser_f64")]
    symmetrized_j: f64,
    iterations: usize,
    accepted_steps: usize,
    stop_reason: &'static str,
    seed: u64,
    max_iters: usize,
    symmetrize_every: usize,
    #[serde(serialize_with = "ser_f64")]
    step0: f64,
    #[serde(serialize_with = "ser_f64")]
    vol_tol: f64,
    #[serde(serialize_with = "ser_f64")]
    stop_tol: f64,
    #[serde(serialize_with = "ser_f64")]
    smooth_cells: f64,
}

fn history_csv(history: &[IterationRecord]) -> String {
    let mut s = String::from("iter,j,volume,multiplier,step,accepted\n");
    for r in history {
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.iter,
            fmt17(r.j),
            fmt17(r.volume),
            fmt17(r.multiplier),
            fmt17(r.step),
            r.accepted
        ));
    }
    s
}

pub fn run(args: OptimizeArgs) -> Result<Outcome> {
    let file = FileConfig::load(args.shared.config.as_deref())?;
    let defaults = OptimizerConfig::default();
    let cfg = OptimizerConfig {
        alpha: args.shared.alpha.or(file.alpha).unwrap_or(defaults.alpha),
        grid_n: args.shared.grid.or(file.grid).unwrap_or(defaults.grid_n),
        max_iters: args.shared.max_iters.or(file.max_iters).unwrap_or(defaults.max_iters),
        step0: args.step0.or(file.step0).unwrap_or(defaults.step0),
        vol_tol: args.vol_tol.or(file.vol_tol).unwrap_or(defaults.vol_tol),
        stop_tol: args.stop_tol.or(file.stop_tol).unwrap_or(defaults.stop_tol),
        symmetrize_every: args.shared.symmetrize_every.or(file.symmetrize_every).unwrap_or(defaults.symmetrize_every),
        smooth_cells: args.smooth_cells.or(file.smooth_cells).unwrap_or(defaults.smooth_cells),
    };
    let seed = args.shared.seed.or(file.seed).unwrap_or(0);
    let out = args.shared.out.or(file.out).unwrap_or_else(|| PathBuf::from("out"));
    let (domain, _) = cfg.validate()?;

    let init = match &args.init {
        Some(path) => {
            let f = std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
            let phi = LevelSetField::read_from(std::io::BufReader::new(f))
                .with_context(|| format!("reading {}", path.display()))?;
            resample(&phi, domain)
        }
        None => {
            let area = args.init_area.or(file.init_area).unwrap_or_else(|| default_init_area(cfg.alpha));
            let center = match args.init_center.as_deref().or(file.init_center.as_deref()) {
                Some(s) => parse_point(s)?,
                None => [0.0, 0.0],
            };
            initial_disk(domain, area, center).context("initial disk")?
        }
    };

    let verbose = args.verbose;
    let state = optimize_with_observer(&cfg, &init, |r| {
        if verbose {
            eprintln!(
                "iter {:4} {:?} j={} volume={} multiplier={} step={} accepted={}",
                r.iter,
                r.kind,
                fmt17(r.j),
                fmt17(r.volume),
                fmt17(r.multiplier),
                fmt17(r.step),
                r.accepted
            );
        }
    })?;

    let fb = extract_free_boundary(&state.u);
    let od = overdet_report(&fb, state.u.mesh());
    let sym = steiner_symmetrize(&steiner_symmetrize(&state.phi, Axis::Y), Axis::X);
    let (sym, _) = volume_projection(&sym, cfg.alpha)?;
    let symmetrized_j = evaluate(sym)?.energy.j;
    let starshaped = is_starshaped(&state.phi, [0.0, 0.0], 720).ok().map(|s| s.is_starshaped());
    let report = RunReport {
        alpha: cfg.alpha,
        grid_n: cfg.grid_n,
        final_j: state.energy.j,
        final_volume: serrin_core::geometry::volume(&state.phi),
        multiplier: state.multiplier,
        free_boundary_cv: od.cv,
        touches_box: od.touches_box,
        compliance: state.energy.compliance,
        lambda_hat: od.lambda_hat,
        disk_deviation: od.disk_deviation,
        n_components: od.n_components,
        symmetry_defect_x: symmetry_defect(&state.phi, Axis::X),
        symmetry_defect_y: symmetry_defect(&state.phi, Axis::Y),
        starshaped,
        symmetrized_j,
        iterations: state.iterations,
        accepted_steps: state.history.iter().filter(|r| r.accepted).count().saturating_sub(1),
        stop_reason: match state.stop {
            StopReason::Converged => "converged",
            StopReason::Stalled => "stalled",
            StopReason::MaxIters => "max_iters",
        },
        seed,
        max_iters: cfg.max_iters,
        symmetrize_every: cfg.symmetrize_every,
        step0: cfg.step0,
        vol_tol: cfg.vol_tol,
        stop_tol: cfg.stop_tol,
        smooth_cells: cfg.smooth_cells,
    };

    let dir = OutDir::create(&out)?;
    dir.write_text("history.csv", &history_csv(&state.history))?;
    dir.write_with("levelset.txt", |w| state.phi.write_to(w))?;
    dir.write_with("field.txt", |w| write_field(&state.u, w))?;
    dir.write_with("boundary.csv", |w| write_boundary_csv(&boundary_gradient(&state.u), w))?;
    dir.write_with("gamma.csv", |w| fb.write_csv(w))?;
    dir.write_text("report.json", &to_json(&report))?;
    dir.write_text("overdet_report.json", &to_json(&od))?;

    println!(
        "optimize: alpha={} grid={} j={} volume={} multiplier={} cv={} touches_box={} disk_deviation={} stop={} -> {}",
        cfg.alpha,
        cfg.grid_n,
        fmt17(report.final_j),
        fmt17(report.final_volume),
        fmt17(report.multiplier),
        report.free_boundary_cv.map_or("none".into(), fmt17),
        report.touches_box,
        fmt17(report.disk_deviation),
        report.stop_reason,
        out.display()
    );
    Ok(Outcome::Passed)
}
