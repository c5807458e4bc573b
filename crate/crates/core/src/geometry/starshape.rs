use std::f64::consts::PI;

use super::levelset::{LevelSetField, Point2};
use crate::error::{Error, Result};

/// Outcome of a starshapedness test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Starshape {
    Starshaped,
    /// Angle (radians) of a ray that leaves and re-enters the domain.
    NotStarshaped { witness_angle: f64 },
}

impl Starshape {
    pub fn is_starshaped(&self) -> bool {
        matches!(self, Starshape::Starshaped)
    }
}

/// Casts `n_rays` rays from `center` and checks that along each one the
/// domain is left at most once.
///
/// Rays are sampled every `h/4` on the piecewise-linear interpolant of `φ`
/// until they reach the box boundary.
pub fn is_starshaped(phi: &LevelSetField, center: Point2, n_rays: usize) -> Result<Starshape> {
    let d = *phi.domain();
    if !d.contains(center) || phi.interpolate(center) >= 0.0 {
        return Err(Error::CenterOutside(center[0], center[1]));
    }
    if n_rays == 0 {
        return Err(Error::InvalidArgument("n_rays must be positive".into()));
    }
    let ds = 0.25 * d.h();
    let hw = d.half_width();
    for r in 0..n_rays {
        let angle = 2.0 * PI * r as f64 / n_rays as f64;
        let (dx, dy) = (angle.cos(), angle.sin());
        // distance from center to the box boundary along the ray
        let reach = |c: f64, dir: f64| {
            if dir > 0.0 {
                (hw - c) / dir
            } else if dir < 0.0 {
                (-hw - c) / dir
            } else {
                f64::INFINITY
            }
        };
        let t_max = reach(center[0], dx).min(reach(center[1], dy));
        let steps = (t_max / ds).ceil() as usize;
        let mut left = false;
        for s in 1..=steps {
            let t = (s as f64 * ds).min(t_max);
            let v = phi.interpolate([center[0] + t * dx, center[1] + t * dy]);
            if v >= 0.0 {
                left = true;
            } else if left {
                return Ok(Starshape::NotStarshaped {
                    witness_angle: angle,
                });
            }
        }
    }
    Ok(Starshape::Starshaped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{disk_levelset, BoxDomain};

    fn annulus(d: BoxDomain) -> LevelSetField {
        LevelSetField::from_fn(d, |p| {
            let r = p[0].hypot(p[1]);
            (0.3 - r).max(r - 0.8)
        })
    }

    #[test]
    fn disk_is_starshaped_about_interior_points() {
        let d = BoxDomain::unit(128).unwrap();
        let phi = disk_levelset(d, 0.6, [0.1, 0.0]).unwrap();
        for c in [[0.1, 0.0], [0.5, 0.2], [-0.3, -0.3]] {
            assert!(is_starshaped(&phi, c, 360).unwrap().is_starshaped());
        }
    }

    #[test]
    fn annulus_is_not() {
        let d = BoxDomain::unit(128).unwrap();
        let res = is_starshaped(&annulus(d), [0.55, 0.0], 360).unwrap();
        match res {
            Starshape::NotStarshaped { witness_angle } => {
                // the ray through the hole points roughly towards -x
                assert!(witness_angle.cos() < 0.0, "angle {witness_angle}");
            }
            Starshape::Starshaped => panic!("annulus reported starshaped"),
        }
    }

    #[test]
    fn center_outside_is_an_error() {
        let d = BoxDomain::unit(64).unwrap();
        assert!(matches!(
            is_starshaped(&annulus(d), [0.0, 0.0], 16),
            Err(Error::CenterOutside(..))
        ));
    }
}
