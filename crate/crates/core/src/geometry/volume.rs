use super::levelset::LevelSetField;
use crate::par;

/// Fraction of a triangle where the linear interpolant of `(a, b, c)` is negative.
pub fn negative_fraction(a: f64, b: f64, c: f64) -> f64 {
    let vals = [a, b, c];
    let n_neg = vals.iter().filter(|v| **v < 0.0).count();
    let n_pos = vals.iter().filter(|v| **v > 0.0).count();
    if n_neg == 0 {
        return 0.0;
    }
    if n_pos == 0 {
        return 1.0;
    }
    if n_neg == 1 {
        let k = vals.iter().position(|v| *v < 0.0).unwrap();
        let (p, q, r) = (vals[k], vals[(k + 1) % 3], vals[(k + 2) % 3]);
        (p / (p - q)) * (p / (p - r))
    } else {
        let k = vals.iter().position(|v| *v > 0.0).unwrap();
        let (p, q, r) = (vals[k], vals[(k + 1) % 3], vals[(k + 2) % 3]);
        1.0 - (p / (p - q)) * (p / (p - r))
    }
}

/// Area of `{φ < 0}` from the piecewise-linear interpolant on the grid
/// triangulation. Exact whenever `φ` is linear on each triangle.
pub fn volume(phi: &LevelSetField) -> f64 {
    let d = *phi.domain();
    let n = d.grid_n();
    let tri_area = 0.5 * d.h() * d.h();
    let v = phi.values();
    par::sum(n * n, |c| {
        let (i, j) = (c % n, c / n);
        d.cell_triangles(i, j)
            .iter()
            .map(|t| negative_fraction(v[t[0]], v[t[1]], v[t[2]]))
            .sum::<f64>()
            * tri_area
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{disk_levelset, BoxDomain};
    use std::f64::consts::PI;

    #[test]
    fn empty_region_is_zero() {
        let d = BoxDomain::unit(32).unwrap();
        assert_eq!(volume(&LevelSetField::constant(d, 1.0)), 0.0);
        assert_eq!(volume(&LevelSetField::constant(d, -1.0)), 4.0);
    }

    #[test]
    fn half_box() {
        let d = BoxDomain::unit(32).unwrap();
        let phi = LevelSetField::from_fn(d, |p| p[0]);
        assert!((volume(&phi) - 2.0).abs() < 1e-14);
        // not on a grid line
        let phi = LevelSetField::from_fn(d, |p| p[1] - 0.3141);
        assert!((volume(&phi) - 2.0 * 1.3141).abs() < 1e-13);
    }

    #[test]
    fn oblique_half_plane_is_exact() {
        let d = BoxDomain::unit(40).unwrap();
        // x + 2y < 0.5 clipped to the box: area by the polygon formula
        let phi = LevelSetField::from_fn(d, |p| p[0] + 2.0 * p[1] - 0.5);
        // line meets y=1 at x=-1.5 (outside), x=-1 at y=0.75, x=1 at y=-0.25
        let pts = [[-1.0, -1.0], [1.0, -1.0], [1.0, -0.25], [-1.0, 0.75]];
        let mut a = 0.0;
        for k in 0..4 {
            let (p, q) = (pts[k], pts[(k + 1) % 4]);
            a += p[0] * q[1] - q[0] * p[1];
        }
        assert!((volume(&phi) - 0.5 * a).abs() < 1e-13);
    }

    #[test]
    fn disk_area() {
        let d = BoxDomain::unit(256).unwrap();
        let phi = disk_levelset(d, 0.5, [0.0, 0.0]).unwrap();
        assert!((volume(&phi) - PI * 0.25).abs() < 1e-3);
    }

    #[test]
    fn fraction_cases() {
        assert_eq!(negative_fraction(-1.0, 0.0, 0.0), 1.0);
        assert_eq!(negative_fraction(0.0, 0.0, 0.0), 0.0);
        assert!((negative_fraction(-1.0, 1.0, 1.0) - 0.25).abs() < 1e-15);
        assert!((negative_fraction(-1.0, -1.0, 1.0) - 0.75).abs() < 1e-15);
        assert!((negative_fraction(-1.0, 0.0, 1.0) - 0.5).abs() < 1e-15);
    }
}
