use super::levelset::LevelSetField;
use super::reinit::reinitialize;
use crate::par;

/// Symmetry axis of a Steiner symmetrization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    /// Symmetric about the `x` axis: vertical sections are centered on `y = 0`.
    X,
    /// Symmetric about the `y` axis: horizontal sections are centered on `x = 0`.
    Y,
}

/// 1-D measure of `{φ < 0}` along a line of nodes with spacing `h`, using
/// the linear interpolant between consecutive nodes.
pub fn line_measure(values: &[f64], h: f64) -> f64 {
    values
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            match (a < 0.0, b < 0.0) {
                (true, true) => h,
                (false, false) => 0.0,
                (true, false) => h * a / (a - b),
                (false, true) => h * b / (b - a),
            }
        })
        .sum()
}

/// Section measures along the direction symmetrized by `axis`: one value
/// per grid column for [`Axis::X`], per grid row for [`Axis::Y`].
pub fn section_measures(phi: &LevelSetField, axis: Axis) -> Vec<f64> {
    let d = *phi.domain();
    let side = d.side();
    let h = d.h();
    par::map_collect(side, |k| {
        let line: Vec<f64> = match axis {
            Axis::X => (0..side).map(|j| phi.at(k, j)).collect(),
            Axis::Y => (0..side).map(|i| phi.at(i, k)).collect(),
        };
        line_measure(&line, h)
    })
}

/// Steiner symmetrization of `{φ < 0}` about `axis`.
///
/// Each section is replaced by the centered interval of the same 1-D
/// measure; the result is rebuilt as a signed distance function.
pub fn steiner_symmetrize(phi: &LevelSetField, axis: Axis) -> LevelSetField {
    let d = *phi.domain();
    let h = d.h();
    let m = section_measures(phi, axis);
    let full = 2.0 * d.half_width() * (1.0 - 1e-12);
    let values = par::map_collect(d.node_count(), |idx| {
        let (i, j) = d.ij(idx);
        let (k, t) = match axis {
            Axis::X => (i, d.coord(j)),
            Axis::Y => (j, d.coord(i)),
        };
        if m[k] >= full {
            // keep wall nodes of a full section strictly inside
            t.abs() - 0.5 * m[k] - 0.5 * h
        } else if m[k] > 0.0 {
            t.abs() - 0.5 * m[k]
        } else {
            t.abs() + 0.5 * h
        }
    });
    let raw = LevelSetField::from_values(d, values).expect("finite by construction");
    reinitialize(&raw)
}

/// Largest deviation, in cells, of `{φ < 0}` from symmetry about `axis`:
/// compares each section's measure and midpoint with its mirror image.
pub fn symmetry_defect(phi: &LevelSetField, axis: Axis) -> f64 {
    let d = *phi.domain();
    let side = d.side();
    let h = d.h();
    // Lines are mapped onto each other by the reflection: rows for X (y -> -y),
    // columns for Y (x -> -x). Record (measure, centroid) of each line.
    let sections = par::map_collect(side, |k| {
        let line: Vec<f64> = match axis {
            Axis::Y => (0..side).map(|j| phi.at(k, j)).collect(),
            Axis::X => (0..side).map(|i| phi.at(i, k)).collect(),
        };
        let m = line_measure(&line, h);
        let c = section_centroid(&line, d.half_width(), h);
        (m, c)
    });
    let n = d.grid_n();
    (0..side)
        .map(|k| {
            let (m1, c1) = sections[k];
            let (m2, c2) = sections[n - k];
            let dm = (m1 - m2).abs();
            let dc = if m1 > 0.0 && m2 > 0.0 {
                (c1 - c2).abs()
            } else {
                0.0
            };
            dm.max(dc) / h
        })
        .fold(0.0, f64::max)
}

/// Centroid coordinate of `{φ < 0}` along a line of nodes starting at `-half_width`.
fn section_centroid(values: &[f64], half_width: f64, h: f64) -> f64 {
    let mut mass = 0.0;
    let mut moment = 0.0;
    for (k, w) in values.windows(2).enumerate() {
        let x0 = -half_width + k as f64 * h;
        let (a, b) = (w[0], w[1]);
        let (lo, hi) = match (a < 0.0, b < 0.0) {
            (true, true) => (0.0, h),
            (false, false) => continue,
            (true, false) => (0.0, h * a / (a - b)),
            (false, true) => (h * a / (a - b), h),
        };
        mass += hi - lo;
        moment += (hi - lo) * (x0 + 0.5 * (lo + hi));
    }
    if mass > 0.0 {
        moment / mass
    } else {
        0.0
    }
}
