use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::profile::{PiecewiseRadialProfile, ProfileKind};
use super::source::SourceFunction;
use crate::error::{Error, Result};
use crate::par;

/// Radii closer than this to a breakpoint are rejected by [`pde_residual`].
pub const BREAKPOINT_GUARD: f64 = 1e-9;

/// Spacing of the eikonal sampling grid.
pub const EIKONAL_SPACING: f64 = 1e-3;

/// Radial Laplacian `u'' + (n−1)u'/r`, with the limit `n·u''(0)` at `r = 0`.
pub fn radial_laplacian(prof: &PiecewiseRadialProfile, r: f64) -> f64 {
    let n = prof.dimension() as f64;
    if r == 0.0 {
        n * prof.d2u(0.0)
    } else {
        prof.d2u(r) + (n - 1.0) * prof.du(r) / r
    }
}

/// `|−Δu(r) − f(u(r))|` at one admissible radius.
pub fn residual_at(prof: &PiecewiseRadialProfile, f: &SourceFunction, r: f64) -> Result<f64> {
    let (hi, lo) = prof.piece(r).u_split(r);
    Ok((-radial_laplacian(prof, r) - f.eval_split(hi, lo)?).abs())
}

/// Largest `|−Δu − f(u)|` over `r_grid`.
pub fn pde_residual(prof: &PiecewiseRadialProfile, f: &SourceFunction, r_grid: &[f64]) -> Result<f64> {
    if prof.dimension() != f.dimension() {
        return Err(Error::InvalidArgument(format!(
            "profile is {}-dimensional but source is {}-dimensional",
            prof.dimension(),
            f.dimension()
        )));
    }
    for &r in r_grid {
        prof.check_radius(r)?;
        if let Some(&b) = prof.breakpoints().iter().find(|&&b| (r - b).abs() < BREAKPOINT_GUARD) {
            return Err(Error::NearBreakpoint {
                r,
                breakpoint: b,
                tol: BREAKPOINT_GUARD,
            });
        }
        // domain errors of f surface here rather than as NaN in the reduction
        f.eval_split(prof.piece(r).u_split(r).0, 0.0)?;
    }
    let res = par::map_collect(r_grid.len(), |k| residual_at(prof, f, r_grid[k]).unwrap_or(f64::NAN));
    Ok(res.into_iter().fold(0.0, |m, x| if x.is_nan() || m.is_nan() { f64::NAN } else { m.max(x) }))
}

/// `count` log-spaced radii in `[a, b]` with those within
/// [`BREAKPOINT_GUARD`] of a breakpoint removed.
pub fn residual_grid(prof: &PiecewiseRadialProfile, a: f64, b: f64, count: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    (0..count)
        .map(|k| match k {
            0 => a,
            _ if k + 1 == count => b,
            _ => (la + (lb - la) * k as f64 / (count - 1) as f64).exp(),
        })
        .filter(|r| prof.breakpoints().iter().all(|bp| (r - bp).abs() >= BREAKPOINT_GUARD))
        .collect()
}

/// Largest `||u'(r)| − c|` on a grid of spacing [`EIKONAL_SPACING`] covering `[a, b]`.
pub fn eikonal_check(prof: &PiecewiseRadialProfile, region: (f64, f64), c: f64) -> Result<f64> {
    let (a, b) = region;
    prof.check_radius(a)?;
    prof.check_radius(b)?;
    if b < a {
        return Err(Error::InvalidArgument(format!("empty region [{a}, {b}]")));
    }
    let steps = ((b - a) / EIKONAL_SPACING).ceil() as usize;
    Ok(par::max(steps + 1, |k| {
        let r = if k == steps { b } else { a + k as f64 * EIKONAL_SPACING };
        (prof.du(r).abs() - c).abs()
    }))
}

/// Decay at infinity of an exterior profile: `|u(r_max)| ≤ 2/r_max`,
/// `|u'(r_max)| ≤ 2/r_max²`, and both strictly decreasing on the last decade.
pub fn decay_check(prof: &PiecewiseRadialProfile, r_max: f64) -> Result<bool> {
    if prof.kind() != ProfileKind::Exterior {
        return Err(Error::NotExterior);
    }
    prof.check_radius(r_max / 10.0)?;
    let bound = |r: f64| prof.u(r).abs() <= 2.0 / r && prof.du(r).abs() <= 2.0 / (r * r);
    let radii: Vec<f64> = (0..=100).map(|k| r_max * 10f64.powf(k as f64 / 100.0 - 1.0)).collect();
    let decreasing = radii.windows(2).all(|w| {
        prof.u(w[1]).abs() < prof.u(w[0]).abs() && prof.du(w[1]).abs() < prof.du(w[0]).abs()
    });
    Ok(bound(r_max) && decreasing)
}

/// Worst Dirichlet and Neumann mismatch on sampled points of the cap
/// `{|x| = 1, x₁ < cap_plane}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphereCapCheck {
    pub samples: usize,
    pub max_value_error: f64,
    pub max_grad_error: f64,
}

impl SphereCapCheck {
    pub const TOL: f64 = 1e-14;

    pub fn passed(&self) -> bool {
        self.max_value_error < Self::TOL && self.max_grad_error < Self::TOL
    }
}

/// Samples the cap with `x₁` uniform in `(−1, cap_plane)` and the remaining
/// coordinates uniform on the sphere of radius `√(1 − x₁²)`, then checks
/// `u = 0, |∇u| = 8` (interior) or `u = 1, |∇u| = 1/2` (exterior).
pub fn sphere_cap_gamma_check(
    prof: &PiecewiseRadialProfile,
    cap_plane: f64,
    samples: usize,
    seed: u64,
) -> Result<SphereCapCheck> {
    if !(cap_plane > -1.0 && cap_plane < 1.0) {
        return Err(Error::InvalidArgument(format!("cap plane must lie in (-1, 1), got {cap_plane}")));
    }
    let (value, slope) = match prof.kind() {
        ProfileKind::Interior => (0.0, 8.0),
        ProfileKind::Exterior => (1.0, 0.5),
        ProfileKind::Ball => {
            return Err(Error::InvalidArgument("sphere cap data are defined for the interior and exterior profiles".into()))
        }
    };
    let n = prof.dimension();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_u = 0.0f64;
    let mut worst_g = 0.0f64;
    let mut x = vec![0.0; n];
    for _ in 0..samples {
        let x1 = -1.0 + (cap_plane + 1.0) * rng.random::<f64>();
        loop {
            for xi in x.iter_mut().skip(1) {
                *xi = rng.sample(StandardNormal);
            }
            let norm = x[1..].iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 1e-12 {
                let scale = (1.0 - x1 * x1).sqrt() / norm;
                x[1..].iter_mut().for_each(|v| *v *= scale);
                break;
            }
        }
        x[0] = x1;
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let du = prof.du(r);
        let grad = x.iter().map(|v| (du * v / r).powi(2)).sum::<f64>().sqrt();
        worst_u = worst_u.max((prof.u(r) - value).abs());
        worst_g = worst_g.max((grad - slope).abs());
    }
    Ok(SphereCapCheck {
        samples,
        max_value_error: worst_u,
        max_grad_error: worst_g,
    })
}
