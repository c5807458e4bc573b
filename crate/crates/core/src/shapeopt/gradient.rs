use crate::fem::{boundary_gradient, EdgeTag, ScalarField};
use crate::geometry::Point2;
use crate::par;

/// Normal velocity on one boundary edge (positive = outward).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeVelocity {
    pub a: Point2,
    pub b: Point2,
    pub grad: f64,
    pub velocity: f64,
    pub tag: EdgeTag,
}

impl EdgeVelocity {
    pub fn length(&self) -> f64 {
        (self.b[0] - self.a[0]).hypot(self.b[1] - self.a[1])
    }

    pub fn midpoint(&self) -> Point2 {
        [0.5 * (self.a[0] + self.b[0]), 0.5 * (self.a[1] + self.b[1])]
    }
}

/// Length-weighted mean of `½|∇u|²` over the FREE edges; 0 if there are none.
pub fn multiplier_estimate(u: &ScalarField) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for s in boundary_gradient(u) {
        if s.tag == EdgeTag::Free {
            num += 0.5 * s.grad * s.grad * s.length;
            den += s.length;
        }
    }
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// Descent velocity for `J + multiplier·(|Ω| − α)`: `½|∇u|² − multiplier`
/// on FREE edges, 0 on BOX edges.
pub fn shape_gradient(u: &ScalarField, multiplier: f64) -> Vec<EdgeVelocity> {
    let m = u.mesh();
    boundary_gradient(u)
        .into_iter()
        .map(|s| EdgeVelocity {
            a: m.vertices()[s.edge.v[0]],
            b: m.vertices()[s.edge.v[1]],
            grad: s.grad,
            velocity: match s.tag {
                EdgeTag::Free => 0.5 * s.grad * s.grad - multiplier,
                EdgeTag::Box => 0.0,
            },
            tag: s.tag,
        })
        .collect()
}

/// Gaussian smoothing of the FREE velocities along the boundary with
/// standard deviation `width`, weighted by edge length. BOX edges are left
/// untouched; `width <= 0` returns the input.
pub fn smooth_velocity(edges: &[EdgeVelocity], width: f64) -> Vec<EdgeVelocity> {
    if width <= 0.0 {
        return edges.to_vec();
    }
    let free: Vec<(Point2, f64, f64)> = edges
        .iter()
        .filter(|e| e.tag == EdgeTag::Free)
        .map(|e| (e.midpoint(), e.length(), e.velocity))
        .collect();
    let cutoff2 = (3.0 * width).powi(2);
    let inv = 0.5 / (width * width);
    par::map_collect(edges.len(), |k| {
        let e = edges[k];
        if e.tag != EdgeTag::Free {
            return e;
        }
        let p = e.midpoint();
        let (mut num, mut den) = (0.0, 0.0);
        for &(q, len, v) in &free {
            let d2 = (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2);
            if d2 < cutoff2 {
                let w = len * (-d2 * inv).exp();
                num += w * v;
                den += w;
            }
        }
        EdgeVelocity {
            velocity: num / den,
            ..e
        }
    })
}

/// First variation of `J` for the outward normal displacement `vn`:
/// `dJ(Ω; V) = −∫_Γ ½|∇u|² (V·ν)`, summed over FREE edges at midpoints.
pub fn shape_derivative<F>(u: &ScalarField, vn: F) -> f64
where
    F: Fn(Point2) -> f64,
{
    boundary_gradient(u)
        .iter()
        .filter(|s| s.tag == EdgeTag::Free)
        .map(|s| -0.5 * s.grad * s.grad * vn(s.midpoint) * s.length)
        .sum()
}

/// `dJ(Ω; V)` for a vector field `V`, using the outward normal of each FREE edge.
pub fn shape_derivative_vector<F>(u: &ScalarField, field: F) -> f64
where
    F: Fn(Point2) -> [f64; 2],
{
    let m = u.mesh();
    boundary_gradient(u)
        .iter()
        .filter(|s| s.tag == EdgeTag::Free)
        .map(|s| {
            // domain on the left of (a, b): outward normal is (dy, −dx)/len
            let a = m.vertices()[s.edge.v[0]];
            let b = m.vertices()[s.edge.v[1]];
            let nu = [(b[1] - a[1]) / s.length, (a[0] - b[0]) / s.length];
            let v = field(s.midpoint);
            -0.5 * s.grad * s.grad * (v[0] * nu[0] + v[1] * nu[1]) * s.length
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{mesh_from_levelset, solve_poisson};
    use crate::geometry::{disk_levelset, BoxDomain};

    fn disk_state(r: f64) -> ScalarField {
        let d = BoxDomain::unit(256).unwrap();
        solve_poisson(mesh_from_levelset(&disk_levelset(d, r, [0.0, 0.0]).unwrap()).unwrap())
            .unwrap()
    }

    #[test]
    fn disk_is_stationary_at_the_radial_multiplier() {
        let r = (2.5f64 / std::f64::consts::PI).sqrt();
        let u = disk_state(r);
        let lam = 0.5 * (r / 2.0) * (r / 2.0);
        let v = shape_gradient(&u, lam);
        let vmax = v.iter().map(|e| e.velocity.abs()).fold(0.0, f64::max);
        // |∇u| within 0.5% of R/2 puts ½|∇u|² within 1% of lam
        assert!(vmax < 0.01 * lam, "max |v| = {vmax}");
        assert!((multiplier_estimate(&u) / lam - 1.0).abs() < 0.005);
    }

    #[test]
    fn zero_multiplier_means_growth() {
        let u = disk_state(0.6);
        assert!(shape_gradient(&u, 0.0).iter().all(|e| e.velocity >= 0.0));
    }
}
