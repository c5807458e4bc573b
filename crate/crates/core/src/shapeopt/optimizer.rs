use std::f64::consts::PI;

use super::advect::{advect, cfl_step};
use super::gradient::{multiplier_estimate, shape_gradient, smooth_velocity};
use super::projection::volume_projection;
use crate::error::{Error, Result};
use crate::fem::{dirichlet_energy, mesh_from_levelset, solve_poisson, EnergyValue, ScalarField};
use crate::geometry::{
    disk_levelset, reinitialize, steiner_symmetrize, volume, Axis, BoxDomain, LevelSetField,
    Point2, VolumeTarget,
};

/// Accepted steps between reinitializations.
pub const REINIT_EVERY: usize = 10;
/// Window (in accepted steps) of the relative-decrease stopping test.
pub const STOP_WINDOW: usize = 10;
/// Step halvings tried before the line search gives up.
pub const MAX_HALVINGS: usize = 10;
/// Consecutive accepted steps after which the step is reset to `step0`.
pub const RESET_AFTER: usize = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerConfig {
    pub alpha: f64,
    pub grid_n: usize,
    pub max_iters: usize,
    /// Initial pseudo-time step; each trial step is also capped by the CFL limit.
    pub step0: f64,
    pub vol_tol: f64,
    pub stop_tol: f64,
    /// Steiner-symmetrize about both axes every this many iterations (0 = never).
    pub symmetrize_every: usize,
    /// Width, in cells, of the Gaussian smoothing applied to the velocity
    /// along the free boundary (0 = raw velocity).
    pub smooth_cells: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            alpha: 3.5,
            grid_n: 128,
            max_iters: 300,
            step0: 1.0,
            vol_tol: 1e-3,
            stop_tol: 1e-5,
            symmetrize_every: 0,
            smooth_cells: 2.0,
        }
    }
}

impl OptimizerConfig {
    pub fn domain(&self) -> Result<BoxDomain> {
        BoxDomain::unit(self.grid_n)
    }

    pub fn validate(&self) -> Result<(BoxDomain, VolumeTarget)> {
        let domain = self.domain()?;
        let target = VolumeTarget::new(self.alpha, &domain)?;
        if !(self.step0.is_finite() && self.step0 > 0.0) {
            return Err(Error::InvalidArgument(format!("step0 must be positive, got {}", self.step0)));
        }
        if !(self.vol_tol > 0.0 && self.vol_tol <= 0.01) {
            return Err(Error::InvalidArgument(format!(
                "vol_tol must lie in (0, 0.01], got {}",
                self.vol_tol
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidArgument("max_iters must be at least 1".into()));
        }
        if !(self.smooth_cells >= 0.0 && self.smooth_cells.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "smooth_cells must be non-negative, got {}",
                self.smooth_cells
            )));
        }
        if !(self.stop_tol >= 0.0) {
            return Err(Error::InvalidArgument(format!("stop_tol must be non-negative, got {}", self.stop_tol)));
        }
        Ok((domain, target))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IterationKind {
    Initial,
    Advect,
    Symmetrize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterationRecord {
    pub iter: usize,
    pub j: f64,
    pub volume: f64,
    pub multiplier: f64,
    pub step: f64,
    pub accepted: bool,
    pub kind: IterationKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// Relative energy decrease over the last window fell below `stop_tol`.
    Converged,
    /// No step length decreased the energy.
    Stalled,
    MaxIters,
}

/// State problem solved on one level set.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub phi: LevelSetField,
    pub u: ScalarField,
    pub energy: EnergyValue,
    pub volume: f64,
    pub multiplier: f64,
}

/// Meshes `phi`, solves the state problem, and evaluates energy and multiplier.
pub fn evaluate(phi: LevelSetField) -> Result<Evaluation> {
    let mesh = mesh_from_levelset(&phi)?;
    let u = solve_poisson(mesh)?;
    let energy = dirichlet_energy(&u);
    let multiplier = multiplier_estimate(&u);
    let volume = volume(&phi);
    Ok(Evaluation {
        phi,
        u,
        energy,
        volume,
        multiplier,
    })
}

#[derive(Clone, Debug)]
pub struct OptimizerState {
    pub phi: LevelSetField,
    pub multiplier: f64,
    pub history: Vec<IterationRecord>,
    pub u: ScalarField,
    pub energy: EnergyValue,
    pub iterations: usize,
    pub stop: StopReason,
}

impl OptimizerState {
    /// Energies of the accepted records, in order.
    pub fn accepted_energies(&self) -> Vec<f64> {
        self.history.iter().filter(|r| r.accepted).map(|r| r.j).collect()
    }
}

/// Centered (or offset) disk of the given area.
pub fn initial_disk(domain: BoxDomain, area: f64, center: Point2) -> Result<LevelSetField> {
    disk_levelset(domain, (area / PI).sqrt(), center)
}

/// Transfers `phi` to another grid by piecewise-linear interpolation and
/// reinitializes it.
pub fn resample(phi: &LevelSetField, domain: BoxDomain) -> LevelSetField {
    reinitialize(&LevelSetField::from_fn(domain, |p| phi.interpolate(p)))
}

pub fn optimize(config: &OptimizerConfig, init: &LevelSetField) -> Result<OptimizerState> {
    optimize_with_observer(config, init, |_| {})
}

fn ctx<T>(iter: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::Iteration {
        iter,
        source: Box::new(e),
    })
}

/// Level-set gradient flow for `min J(Ω)` subject to `|Ω| = α`, `Ω ⊂ D`.
///
/// Every iteration solves the state problem, sets the multiplier to the
/// FREE-boundary mean of `½|∇u|²`, advects with `½|∇u|² − multiplier` and
/// projects back onto the volume constraint. A trial is accepted only if
/// it lowers `J`; otherwise the step is halved. `observer` sees every
/// record as it is produced.
pub fn optimize_with_observer<F>(
    config: &OptimizerConfig,
    init: &LevelSetField,
    mut observer: F,
) -> Result<OptimizerState>
where
    F: FnMut(&IterationRecord),
{
    let (domain, target) = config.validate()?;
    if init.domain() != &domain {
        return Err(Error::InvalidArgument(format!(
            "initial level set is on a {} grid, config asks for {}",
            init.domain().grid_n(),
            domain.grid_n()
        )));
    }
    let alpha = target.alpha();
    let h = domain.h();
    let mut history = Vec::new();
    let mut push = |rec: IterationRecord, history: &mut Vec<IterationRecord>| {
        observer(&rec);
        history.push(rec);
    };

    let (phi0, _) = ctx(0, volume_projection(init, alpha))?;
    let mut cur = ctx(0, evaluate(phi0))?;
    push(
        IterationRecord {
            iter: 0,
            j: cur.energy.j,
            volume: cur.volume,
            multiplier: cur.multiplier,
            step: 0.0,
            accepted: true,
            kind: IterationKind::Initial,
        },
        &mut history,
    );
    let mut accepted_j = vec![cur.energy.j];
    let mut step = config.step0;
    let mut consecutive = 0usize;
    let mut accepted_steps = 0usize;
    let mut stop = StopReason::MaxIters;
    let mut iter = 0;

    while iter < config.max_iters {
        iter += 1;

        if config.symmetrize_every > 0 && iter % config.symmetrize_every == 0 {
            let sym = steiner_symmetrize(&steiner_symmetrize(&cur.phi, Axis::Y), Axis::X);
            let (sym, _) = ctx(iter, volume_projection(&sym, alpha))?;
            let trial = ctx(iter, evaluate(sym))?;
            let accepted = trial.energy.j <= cur.energy.j;
            push(
                IterationRecord {
                    iter,
                    j: trial.energy.j,
                    volume: trial.volume,
                    multiplier: trial.multiplier,
                    step: 0.0,
                    accepted,
                    kind: IterationKind::Symmetrize,
                },
                &mut history,
            );
            if accepted {
                cur = trial;
                accepted_j.push(cur.energy.j);
            }
            continue;
        }

        let velocity = smooth_velocity(&shape_gradient(&cur.u, cur.multiplier), config.smooth_cells * h);
        let reinit_due = (accepted_steps + 1).is_multiple_of(REINIT_EVERY);
        let mut s = step.min(cfl_step(h, &velocity));
        let mut next = None;
        for _ in 0..=MAX_HALVINGS {
            let mut moved = ctx(iter, advect(&cur.phi, &velocity, s))?;
            if reinit_due {
                moved = reinitialize(&moved);
            }
            let (moved, _) = ctx(iter, volume_projection(&moved, alpha))?;
            let trial = match evaluate(moved) {
                Ok(t) => t,
                // a trial that empties the domain is a rejected step
                Err(Error::EmptyRegion | Error::DegenerateRegion { .. }) => {
                    s *= 0.5;
                    continue;
                }
                Err(e) => return ctx(iter, Err(e)),
            };
            let accepted = trial.energy.j < cur.energy.j;
            push(
                IterationRecord {
                    iter,
                    j: trial.energy.j,
                    volume: trial.volume,
                    multiplier: trial.multiplier,
                    step: s,
                    accepted,
                    kind: IterationKind::Advect,
                },
                &mut history,
            );
            if accepted {
                next = Some(trial);
                break;
            }
            s *= 0.5;
        }
        match next {
            Some(trial) => {
                cur = trial;
                accepted_j.push(cur.energy.j);
                accepted_steps += 1;
                consecutive += 1;
                if consecutive >= RESET_AFTER {
                    step = config.step0;
                    consecutive = 0;
                } else {
                    step = s;
                }
            }
            None => {
                stop = StopReason::Stalled;
                break;
            }
        }
        if accepted_j.len() > STOP_WINDOW {
            let last = accepted_j[accepted_j.len() - 1];
            let before = accepted_j[accepted_j.len() - 1 - STOP_WINDOW];
            if (before - last) / last.abs() < config.stop_tol {
                stop = StopReason::Converged;
                break;
            }
        }
    }

    Ok(OptimizerState {
        multiplier: cur.multiplier,
        phi: cur.phi,
        u: cur.u,
        energy: cur.energy,
        history,
        iterations: iter,
        stop,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        let ok = OptimizerConfig::default();
        assert!(ok.validate().is_ok());
        let bad = |f: fn(&mut OptimizerConfig)| {
            let mut c = OptimizerConfig::default();
            f(&mut c);
            c.validate().is_err()
        };
        assert!(bad(|c| c.alpha = 5.0));
        assert!(bad(|c| c.step0 = 0.0));
        assert!(bad(|c| c.vol_tol = 0.02));
        assert!(bad(|c| c.max_iters = 0));
        assert!(bad(|c| c.grid_n = 4));
    }

    #[test]
    fn wrong_grid_is_rejected() {
        let cfg = OptimizerConfig {
            grid_n: 32,
            ..Default::default()
        };
        let init = initial_disk(BoxDomain::unit(64).unwrap(), 2.0, [0.0, 0.0]).unwrap();
        assert!(matches!(optimize(&cfg, &init), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn small_disk_run_is_monotone_and_feasible() {
        let cfg = OptimizerConfig {
            alpha: 2.0,
            grid_n: 48,
            max_iters: 15,
            ..Default::default()
        };
        let init = initial_disk(cfg.domain().unwrap(), 1.6, [0.05, 0.0]).unwrap();
        let st = optimize(&cfg, &init).unwrap();
        let js = st.accepted_energies();
        assert!(js.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        for r in &st.history {
            assert!((r.volume - cfg.alpha).abs() <= cfg.vol_tol * cfg.alpha);
        }
        assert!(st.multiplier > 0.0);
    }
}
