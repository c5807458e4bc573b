use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use super::levelset::LevelSetField;

#[derive(Clone, Copy, Debug, PartialEq)]
struct Trial(f64, usize);

impl Eq for Trial {}

impl PartialOrd for Trial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Trial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

/// Rebuilds `φ` as an approximate signed distance to its zero set by fast
/// marching outward from the nodes adjacent to the interface.
///
/// Interface-adjacent nodes get `|φ| / |∇φ|` (central differences), capped
/// by the distance to the nearest crossing along a grid line; the rest is
/// filled by the first-order upwind eikonal update. The sign of every node
/// is kept, so the zero set moves by less than one cell. Fields without a
/// sign change are returned unchanged.
pub fn reinitialize(phi: &LevelSetField) -> LevelSetField {
    let d = *phi.domain();
    let side = d.side();
    let h = d.h();
    let v = phi.values();
    let n_nodes = v.len();
    let inside = |k: usize| v[k] < 0.0;

    let neighbors = |k: usize| {
        let (i, j) = d.ij(k);
        let mut out = [usize::MAX; 4];
        if i > 0 {
            out[0] = k - 1;
        }
        if i + 1 < side {
            out[1] = k + 1;
        }
        if j > 0 {
            out[2] = k - side;
        }
        if j + 1 < side {
            out[3] = k + side;
        }
        out
    };

    let mut dist = vec![f64::INFINITY; n_nodes];
    let mut known = vec![false; n_nodes];
    let mut any_interface = false;

    for k in 0..n_nodes {
        if v[k] == 0.0 {
            dist[k] = 0.0;
            known[k] = true;
            any_interface = true;
            continue;
        }
        let nb = neighbors(k);
        let mut cap = f64::INFINITY;
        for &m in nb.iter().filter(|m| **m != usize::MAX) {
            if inside(m) != inside(k) {
                let theta = v[k] / (v[k] - v[m]);
                cap = cap.min(theta * h);
            }
        }
        if cap.is_finite() {
            any_interface = true;
            let grad = |lo: usize, hi: usize| -> f64 {
                match (lo != usize::MAX, hi != usize::MAX) {
                    (true, true) => (v[hi] - v[lo]) / (2.0 * h),
                    (true, false) => (v[k] - v[lo]) / h,
                    (false, true) => (v[hi] - v[k]) / h,
                    (false, false) => 0.0,
                }
            };
            let g = grad(nb[0], nb[1]).hypot(grad(nb[2], nb[3]));
            let est = if g > 1e-12 { v[k].abs() / g } else { cap };
            dist[k] = est.min(cap);
            known[k] = true;
        }
    }
    if !any_interface {
        return phi.clone();
    }

    let mut heap = BinaryHeap::new();
    let update = |k: usize, dist: &[f64], known: &[bool]| -> f64 {
        let nb = neighbors(k);
        let pick = |a: usize, b: usize| {
            let mut best = f64::INFINITY;
            for m in [a, b] {
                if m != usize::MAX && known[m] {
                    best = best.min(dist[m]);
                }
            }
            best
        };
        let a = pick(nb[0], nb[1]);
        let b = pick(nb[2], nb[3]);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        if !hi.is_finite() || hi - lo >= h {
            lo + h
        } else {
            0.5 * (lo + hi + (2.0 * h * h - (hi - lo) * (hi - lo)).sqrt())
        }
    };

    for k in 0..n_nodes {
        if known[k] {
            for m in neighbors(k) {
                if m != usize::MAX && !known[m] {
                    let t = update(m, &dist, &known);
                    if t < dist[m] {
                        dist[m] = t;
                        heap.push(Reverse(Trial(t, m)));
                    }
                }
            }
        }
    }
    while let Some(Reverse(Trial(t, k))) = heap.pop() {
        if known[k] || t > dist[k] {
            continue;
        }
        known[k] = true;
        for m in neighbors(k) {
            if m != usize::MAX && !known[m] {
                let t = update(m, &dist, &known);
                if t < dist[m] {
                    dist[m] = t;
                    heap.push(Reverse(Trial(t, m)));
                }
            }
        }
    }

    let values = (0..n_nodes)
        .map(|k| {
            if !dist[k].is_finite() {
                v[k]
            } else if inside(k) {
                -dist[k]
            } else {
                dist[k]
            }
        })
        .collect();
    LevelSetField::from_values(d, values).expect("finite distances")
}

/// Fraction of interior nodes (all four neighbors present, `|φ| > 2h`)
/// whose central-difference `|∇φ|` lies in `[0.8, 1.2]`.
pub fn eikonal_fraction(phi: &LevelSetField) -> f64 {
    let d = *phi.domain();
    let h = d.h();
    let n = d.grid_n();
    let mut total = 0usize;
    let mut good = 0usize;
    for j in 1..n {
        for i in 1..n {
            let c = phi.at(i, j);
            if c.abs() <= 2.0 * h {
                continue;
            }
            let gx = (phi.at(i + 1, j) - phi.at(i - 1, j)) / (2.0 * h);
            let gy = (phi.at(i, j + 1) - phi.at(i, j - 1)) / (2.0 * h);
            let g = gx.hypot(gy);
            total += 1;
            if (0.8..=1.2).contains(&g) {
                good += 1;
            }
        }
    }
    if total == 0 {
        1.0
    } else {
        good as f64 / total as f64
    }
}
