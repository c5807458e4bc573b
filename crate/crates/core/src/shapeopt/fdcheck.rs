use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gradient::shape_derivative_vector;
use super::optimizer::evaluate;
use crate::error::Result;
use crate::geometry::{BoxDomain, LevelSetField, Point2};

/// Smooth periodic function `1 + Σ_k a_k cos kθ + b_k sin kθ` of the polar
/// angle about `center`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierPerturbation {
    pub center: Point2,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl FourierPerturbation {
    pub fn constant(center: Point2) -> Self {
        FourierPerturbation {
            center,
            cos: vec![],
            sin: vec![],
        }
    }

    /// `modes` random coefficients per family, uniform in `[−amplitude, amplitude]`.
    pub fn random(center: Point2, modes: usize, amplitude: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = || (0..modes).map(|_| rng.random_range(-amplitude..=amplitude)).collect::<Vec<_>>();
        let cos = draw();
        let sin = draw();
        FourierPerturbation { center, cos, sin }
    }

    pub fn angle(&self, p: Point2) -> f64 {
        (p[1] - self.center[1]).atan2(p[0] - self.center[0])
    }

    pub fn at_angle(&self, t: f64) -> f64 {
        let mut v = 1.0;
        for (k, (a, b)) in self.cos.iter().zip(&self.sin).enumerate() {
            let m = (k + 1) as f64;
            v += a * (m * t).cos() + b * (m * t).sin();
        }
        v
    }

    pub fn at(&self, p: Point2) -> f64 {
        self.at_angle(self.angle(p))
    }

    /// Radial vector field `V(θ)·e_r`.
    pub fn radial_field(&self, p: Point2) -> [f64; 2] {
        let (dx, dy) = (p[0] - self.center[0], p[1] - self.center[1]);
        let r = dx.hypot(dy);
        let v = self.at(p);
        [v * dx / r, v * dy / r]
    }
}

/// Star-shaped domain `r < radius·shape(θ) + eps·direction(θ)`.
pub fn star_domain(
    domain: BoxDomain,
    radius: f64,
    shape: &FourierPerturbation,
    direction: &FourierPerturbation,
    eps: f64,
) -> LevelSetField {
    LevelSetField::from_fn(domain, |p| {
        let r = (p[0] - shape.center[0]).hypot(p[1] - shape.center[1]);
        r - radius * shape.at(p) - eps * direction.at(p)
    })
}

/// Finite-difference quotient against the boundary-integral prediction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdCheck {
    pub eps: f64,
    /// `(J(Ω_ε) − J(Ω)) / ε`
    pub finite_difference: f64,
    /// `−∫_Γ ½|∇u|² V·ν`
    pub predicted: f64,
    pub relative_error: f64,
}

/// Compares `(J(Ω_ε) − J(Ω))/ε` with the shape derivative on `Ω` for each
/// `eps`, where `Ω = {r < radius·shape(θ)}` on a `grid_n` grid and `Ω_ε`
/// moves its boundary radially by `eps·direction(θ)`.
pub fn finite_difference_check(
    grid_n: usize,
    radius: f64,
    shape: &FourierPerturbation,
    direction: &FourierPerturbation,
    eps: &[f64],
) -> Result<Vec<FdCheck>> {
    let d = BoxDomain::unit(grid_n)?;
    let base = evaluate(star_domain(d, radius, shape, direction, 0.0))?;
    let predicted = shape_derivative_vector(&base.u, |p| direction.radial_field(p));
    eps.iter()
        .map(|&e| {
            let j = evaluate(star_domain(d, radius, shape, direction, e))?.energy.j;
            let fd = (j - base.energy.j) / e;
            Ok(FdCheck {
                eps: e,
                finite_difference: fd,
                predicted,
                relative_error: ((fd - predicted) / predicted).abs(),
            })
        })
        .collect()
}
