use crate::error::{Error, Result};
use crate::geometry::{volume, LevelSetField};

/// Relative accuracy the projection aims for; well below any `vol_tol`.
pub const PROJECTION_RTOL: f64 = 1e-9;

/// Finds `shift` such that `{φ + shift < 0}` has area `alpha` and returns
/// `(φ + shift, shift)`. A negative shift grows the domain.
///
/// The area is a continuous non-increasing function of the shift, so the
/// root is bracketed between "everything inside" and "nothing inside" and
/// found by bisection.
pub fn volume_projection(phi: &LevelSetField, alpha: f64) -> Result<(LevelSetField, f64)> {
    let d = *phi.domain();
    let full = d.area();
    if !(alpha.is_finite() && alpha > 0.0 && alpha <= full) {
        return Err(Error::AlphaUnreachable { alpha, max: full });
    }
    if phi.interior_node_count() == 0 && volume(phi) == 0.0 {
        return Err(Error::EmptyRegion);
    }
    let (lo_v, hi_v) = phi
        .values()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
    let pad = d.h();
    // volume(shift) is non-increasing; lo gives the full box, hi the empty set
    let mut lo = -hi_v - pad;
    let mut hi = -lo_v + pad;
    let tol = PROJECTION_RTOL * alpha;
    let vol = |s: f64| volume(&phi.shifted(s));
    if (vol(0.0) - alpha).abs() <= tol {
        return Ok((phi.clone(), 0.0));
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let v = vol(mid);
        if (v - alpha).abs() <= tol {
            break;
        }
        if v > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * (1.0 + mid.abs()) {
            break;
        }
    }
    Ok((phi.shifted(mid), mid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{disk_levelset, BoxDomain};
    use std::f64::consts::PI;

    #[test]
    fn fixed_point() {
        let d = BoxDomain::unit(128).unwrap();
        let phi = disk_levelset(d, 0.5, [0.0, 0.0]).unwrap();
        let a = volume(&phi);
        let (out, s) = volume_projection(&phi, a).unwrap();
        assert_eq!(s, 0.0);
        assert_eq!(out, phi);
    }

    #[test]
    fn distance_shift_is_radius_change() {
        let d = BoxDomain::unit(256).unwrap();
        let phi = disk_levelset(d, 0.5, [0.0, 0.0]).unwrap();
        let (out, s) = volume_projection(&phi, PI * 0.36).unwrap();
        assert!((s + 0.1).abs() < 1e-3, "shift {s}");
        assert!((volume(&out) / (PI * 0.36) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn unreachable_alpha() {
        let d = BoxDomain::unit(32).unwrap();
        let phi = disk_levelset(d, 0.5, [0.0, 0.0]).unwrap();
        assert!(matches!(
            volume_projection(&phi, 5.0),
            Err(Error::AlphaUnreachable { .. })
        ));
        assert!(volume_projection(&phi, 0.0).is_err());
        let (full, _) = volume_projection(&phi, 4.0).unwrap();
        assert_eq!(volume(&full), 4.0);
    }
}
