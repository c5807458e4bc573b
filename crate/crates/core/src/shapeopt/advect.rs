use super::gradient::EdgeVelocity;
use crate::error::{Error, Result};
use crate::fem::EdgeTag;
use crate::geometry::{LevelSetField, Point2};
use crate::par;

/// Half-width of the band (in cells) where the velocity is extended.
pub const BAND_CELLS: f64 = 3.0;

/// Largest admissible `max|v|·step`, in cells.
pub const CFL: f64 = 0.5;

fn segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p[0] - a[0] - t * dx).hypot(p[1] - a[1] - t * dy)
}

/// Extends FREE-edge velocities to the grid nodes within `BAND_CELLS·h` of
/// the free boundary: each node takes the velocity of its nearest FREE
/// edge, i.e. the velocity is constant along normals. Other nodes get 0.
pub fn extend_velocity(phi: &LevelSetField, edges: &[EdgeVelocity]) -> Vec<f64> {
    let d = *phi.domain();
    let n = d.grid_n();
    let h = d.h();
    let free: Vec<&EdgeVelocity> = edges.iter().filter(|e| e.tag == EdgeTag::Free).collect();
    // bucket edges by the cell containing their midpoint
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); n * n];
    for (k, e) in free.iter().enumerate() {
        let (i, j, _, _) = d.locate(e.midpoint());
        buckets[j * n + i].push(k);
    }
    let band = BAND_CELLS * h;
    let reach = BAND_CELLS.ceil() as isize + 1;
    par::map_collect(d.node_count(), |idx| {
        let p = d.node_point(idx);
        let (ci, cj) = {
            let (i, j) = d.ij(idx);
            (i.min(n - 1) as isize, j.min(n - 1) as isize)
        };
        let mut best = (f64::INFINITY, 0.0);
        for dj in -reach..=reach {
            for di in -reach..=reach {
                let (i, j) = (ci + di, cj + dj);
                if i < 0 || j < 0 || i >= n as isize || j >= n as isize {
                    continue;
                }
                for &k in &buckets[j as usize * n + i as usize] {
                    let e = free[k];
                    let dist = segment_distance(p, e.a, e.b);
                    if dist < best.0 {
                        best = (dist, e.velocity);
                    }
                }
            }
        }
        if best.0 <= band {
            best.1
        } else {
            0.0
        }
    })
}

/// One explicit upwind step of `φ_t + v|∇φ| = 0`.
///
/// `velocity` holds one value per grid node. Outside the box `φ` is
/// extrapolated linearly and clamped to at least `h/10`, which keeps the
/// domain inside `D`.
pub fn advect_nodal(phi: &LevelSetField, velocity: &[f64], step: f64) -> Result<LevelSetField> {
    let d = *phi.domain();
    let h = d.h();
    let vmax = velocity.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let limit = CFL * h;
    if !(step >= 0.0) || vmax * step > limit * (1.0 + 1e-12) {
        return Err(Error::CflViolation {
            travel: vmax * step,
            limit,
        });
    }
    let side = d.side();
    let ghost_floor = 0.1 * h;
    let values = par::map_collect(d.node_count(), |idx| {
        let v = velocity[idx];
        let c = phi.values()[idx];
        if v == 0.0 {
            return c;
        }
        let (i, j) = d.ij(idx);
        let at = |i: isize, j: isize| -> f64 {
            let last = side as isize - 1;
            if (0..=last).contains(&i) && (0..=last).contains(&j) {
                phi.at(i as usize, j as usize)
            } else {
                // mirror through the boundary node, then confine
                let (bi, bj) = (i.clamp(0, last), j.clamp(0, last));
                let (ii, jj) = ((2 * bi - i).clamp(0, last), (2 * bj - j).clamp(0, last));
                let b = phi.at(bi as usize, bj as usize);
                (2.0 * b - phi.at(ii as usize, jj as usize)).max(ghost_floor)
            }
        };
        let (i, j) = (i as isize, j as isize);
        let dxm = (c - at(i - 1, j)) / h;
        let dxp = (at(i + 1, j) - c) / h;
        let dym = (c - at(i, j - 1)) / h;
        let dyp = (at(i, j + 1) - c) / h;
        let grad = if v > 0.0 {
            (dxm.max(0.0).powi(2) + dxp.min(0.0).powi(2) + dym.max(0.0).powi(2) + dyp.min(0.0).powi(2))
                .sqrt()
        } else {
            (dxm.min(0.0).powi(2) + dxp.max(0.0).powi(2) + dym.min(0.0).powi(2) + dyp.max(0.0).powi(2))
                .sqrt()
        };
        c - step * v * grad
    });
    LevelSetField::from_values(d, values)
}

/// Extends the edge velocities and advances `φ` by one step.
pub fn advect(phi: &LevelSetField, velocity: &[EdgeVelocity], step: f64) -> Result<LevelSetField> {
    let nodal = extend_velocity(phi, velocity);
    advect_nodal(phi, &nodal, step)
}

/// Largest step satisfying the CFL condition for these edge velocities.
pub fn cfl_step(h: f64, velocity: &[EdgeVelocity]) -> f64 {
    let vmax = velocity
        .iter()
        .filter(|e| e.tag == EdgeTag::Free)
        .fold(0.0f64, |m, e| m.max(e.velocity.abs()));
    if vmax > 0.0 {
        CFL * h / vmax
    } else {
        f64::INFINITY
    }
}
