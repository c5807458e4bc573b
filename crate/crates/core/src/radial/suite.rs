use std::io::Write;

use serde::Serialize;

use super::checks::{decay_check, eikonal_check, pde_residual, residual_at, residual_grid, sphere_cap_gamma_check};
use super::profile::{exterior_profile, interior_profile, PiecewiseRadialProfile};
use super::source::{exterior_source, interior_source, source_properties, SourceFunction};
use crate::error::Result;
use crate::report::{fmt17, ser_f64, ser_opt_f64};

pub const RESIDUAL_TOL: f64 = 1e-10;
pub const GLUING_TOL: f64 = 1e-12;
pub const RESIDUAL_SAMPLES: usize = 10_000;
pub const CAP_SAMPLES: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    Interior,
    Exterior,
}

impl Construction {
    pub fn name(&self) -> &'static str {
        match self {
            Construction::Interior => "interior",
            Construction::Exterior => "exterior",
        }
    }
}

/// Outcome of every check of one construction in one dimension.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub construction: Construction,
    pub n: usize,
    #[serde(serialize_with = "ser_f64")]
    pub max_pde_residual: f64,
    pub residual_samples: usize,
    /// `[Δu, Δu', Δu'']` at each breakpoint.
    pub breakpoint_gaps: Vec<[SerF64; 3]>,
    #[serde(serialize_with = "ser_f64")]
    pub f_branch_gap: f64,
    #[serde(serialize_with = "ser_f64")]
    pub eikonal_max_error: f64,
    #[serde(serialize_with = "ser_f64")]
    pub f_min_slope: f64,
    #[serde(serialize_with = "ser_f64")]
    pub f_lipschitz_bound: f64,
    pub f_positive: bool,
    /// Whether monotonicity and positivity of `f` count towards `passed`.
    pub f_properties_asserted: bool,
    pub decay_ok: Option<bool>,
    #[serde(serialize_with = "ser_opt_f64")]
    pub sphere_cap_max_error: Option<f64>,
    pub failures: Vec<String>,
    pub passed: bool,
}

/// `f64` serialized with 17 significant digits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SerF64(#[serde(serialize_with = "ser_f64")] pub f64);

struct Plan {
    residual_range: (f64, f64),
    eikonal: ((f64, f64), f64),
    f_interval: (f64, f64),
    f_samples: usize,
    assert_f: bool,
    decay_r: Option<f64>,
}

fn plan(c: Construction, n: usize) -> Plan {
    match c {
        Construction::Interior => Plan {
            residual_range: (1e-3, 5.0),
            eikonal: ((1.0, 5.0), 8.0),
            f_interval: (-50.0, 50.0),
            f_samples: 10_001,
            assert_f: true,
            decay_r: None,
        },
        Construction::Exterior => Plan {
            residual_range: (1e-3, 1e3),
            eikonal: ((1e-3, 1.0), 0.5),
            // the 1e-3 grid of (0, 3/2)
            f_interval: (1e-3, 1.499),
            f_samples: 1499,
            assert_f: n >= 4,
            decay_r: Some(1e3),
        },
    }
}

pub fn profile_and_source(c: Construction, n: usize) -> Result<(PiecewiseRadialProfile, SourceFunction)> {
    Ok(match c {
        Construction::Interior => (interior_profile(n)?, interior_source(n)?),
        Construction::Exterior => (exterior_profile(n)?, exterior_source(n)?),
    })
}

/// Runs the full identity suite for one construction in dimension `n`.
pub fn verify(c: Construction, n: usize, seed: u64) -> Result<VerificationReport> {
    let (prof, f) = profile_and_source(c, n)?;
    let p = plan(c, n);
    let mut grid = residual_grid(&prof, p.residual_range.0, p.residual_range.1, RESIDUAL_SAMPLES);
    if prof.includes_origin() {
        grid.insert(0, 0.0);
    }
    let max_pde_residual = pde_residual(&prof, &f, &grid)?;
    let gaps = prof.breakpoint_gaps();
    let f_branch_gap = f.branch_gap();
    let eikonal_max_error = eikonal_check(&prof, p.eikonal.0, p.eikonal.1)?;
    let props = source_properties(&f, p.f_interval, p.f_samples)?;
    let decay_ok = p.decay_r.map(|r| decay_check(&prof, r)).transpose()?;
    let cap = sphere_cap_gamma_check(&prof, 0.5, CAP_SAMPLES, seed)?;

    let mut failures = Vec::new();
    if !(max_pde_residual < RESIDUAL_TOL) {
        failures.push(format!("pde residual {max_pde_residual:e} >= {RESIDUAL_TOL:e}"));
    }
    for (g, b) in gaps.iter().zip(prof.breakpoints()) {
        if !(g.iter().sum::<f64>() < GLUING_TOL) {
            failures.push(format!("C2 gap {g:?} at r = {b}"));
        }
    }
    if !(f_branch_gap < GLUING_TOL) {
        failures.push(format!("f branch gap {f_branch_gap:e}"));
    }
    if eikonal_max_error != 0.0 {
        failures.push(format!("eikonal error {eikonal_max_error:e}"));
    }
    if p.assert_f && !(props.min_slope > 0.0 && props.positive) {
        failures.push(format!(
            "f not positive and increasing (min slope {:e}, positive {})",
            props.min_slope, props.positive
        ));
    }
    if decay_ok == Some(false) {
        failures.push("decay check failed".into());
    }
    if !cap.passed() {
        failures.push(format!("sphere cap data off by {:e}", cap.max_value_error.max(cap.max_grad_error)));
    }
    Ok(VerificationReport {
        construction: c,
        n,
        max_pde_residual,
        residual_samples: grid.len(),
        breakpoint_gaps: gaps.iter().map(|g| g.map(SerF64)).collect(),
        f_branch_gap,
        eikonal_max_error,
        f_min_slope: props.min_slope,
        f_lipschitz_bound: props.lipschitz_bound,
        f_positive: props.positive,
        f_properties_asserted: p.assert_f,
        decay_ok,
        sphere_cap_max_error: Some(cap.max_value_error.max(cap.max_grad_error)),
        passed: failures.is_empty(),
        failures,
    })
}

/// `r,u,du,d2u,residual` rows on `radii` (for plotting).
pub fn write_profile_csv<W: Write>(
    prof: &PiecewiseRadialProfile,
    f: &SourceFunction,
    radii: &[f64],
    mut w: W,
) -> Result<()> {
    writeln!(w, "r,u,du,d2u,residual")?;
    for &r in radii {
        prof.check_radius(r)?;
        let res = residual_at(prof, f, r)?;
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt17(r),
            fmt17(prof.u(r)),
            fmt17(prof.du(r)),
            fmt17(prof.d2u(r)),
            fmt17(res)
        )?;
    }
    Ok(())
}
