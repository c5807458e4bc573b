use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::par;
use crate::report::fmt17;

/// A point of the plane.
pub type Point2 = [f64; 2];

/// The square `(-half_width, half_width)²` discretized by `grid_n` cells per axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoxDomain {
    half_width: f64,
    grid_n: usize,
}

impl BoxDomain {
    pub const MIN_GRID: usize = 16;

    pub fn new(half_width: f64, grid_n: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "half_width must be positive, got {half_width}"
            )));
        }
        if grid_n < Self::MIN_GRID {
            return Err(Error::InvalidArgument(format!(
                "grid_n must be at least {}, got {grid_n}",
                Self::MIN_GRID
            )));
        }
        Ok(BoxDomain { half_width, grid_n })
    }

    /// The box `(-1, 1)²`.
    pub fn unit(grid_n: usize) -> Result<Self> {
        Self::new(1.0, grid_n)
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn grid_n(&self) -> usize {
        self.grid_n
    }

    /// Grid spacing.
    pub fn h(&self) -> f64 {
        2.0 * self.half_width / self.grid_n as f64
    }

    pub fn area(&self) -> f64 {
        4.0 * self.half_width * self.half_width
    }

    /// Nodes per side, `grid_n + 1`.
    pub fn side(&self) -> usize {
        self.grid_n + 1
    }

    pub fn node_count(&self) -> usize {
        self.side() * self.side()
    }

    /// Row-major node index, `y` increasing with `j`.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.side() + i
    }

    #[inline]
    pub fn ij(&self, idx: usize) -> (usize, usize) {
        (idx % self.side(), idx / self.side())
    }

    /// Coordinate of grid line `i`; exactly antisymmetric under `i -> n - i`.
    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        self.half_width * (2.0 * i as f64 - self.grid_n as f64) / self.grid_n as f64
    }

    #[inline]
    pub fn node_point(&self, idx: usize) -> Point2 {
        let (i, j) = self.ij(idx);
        [self.coord(i), self.coord(j)]
    }

    pub fn contains(&self, p: Point2) -> bool {
        p[0].abs() < self.half_width && p[1].abs() < self.half_width
    }

    /// Distance from `p` to the boundary of the box (for `p` inside).
    pub fn dist_to_boundary(&self, p: Point2) -> f64 {
        (self.half_width - p[0].abs()).min(self.half_width - p[1].abs())
    }

    /// The two triangles of cell `(i, j)` as counter-clockwise node triples.
    ///
    /// The diagonal alternates with the parity of `i + j`, so for even
    /// `grid_n` the triangulation is invariant under both axis reflections.
    #[inline]
    pub fn cell_triangles(&self, i: usize, j: usize) -> [[usize; 3]; 2] {
        let a = self.index(i, j);
        let b = self.index(i + 1, j);
        let c = self.index(i + 1, j + 1);
        let d = self.index(i, j + 1);
        if (i + j).is_multiple_of(2) {
            [[a, b, c], [a, c, d]]
        } else {
            [[a, b, d], [b, c, d]]
        }
    }

    /// Locates the cell containing `p` (clamped into the box) and the local
    /// coordinates `(s, t) ∈ [0, 1]²` within it.
    pub fn locate(&self, p: Point2) -> (usize, usize, f64, f64) {
        let n = self.grid_n;
        let h = self.h();
        let loc = |x: f64| {
            let u = ((x + self.half_width) / h).clamp(0.0, n as f64);
            let c = (u.floor() as usize).min(n - 1);
            (c, u - c as f64)
        };
        let (i, s) = loc(p[0]);
        let (j, t) = loc(p[1]);
        (i, j, s, t)
    }
}

/// A function sampled at the grid nodes of a [`BoxDomain`]; the trial domain
/// is the open set `{φ < 0}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelSetField {
    domain: BoxDomain,
    values: Vec<f64>,
}

impl LevelSetField {
    pub fn from_values(domain: BoxDomain, values: Vec<f64>) -> Result<Self> {
        if values.len() != domain.node_count() {
            return Err(Error::InvalidArgument(format!(
                "expected {} nodal values, got {}",
                domain.node_count(),
                values.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite value at node {k}")));
        }
        Ok(LevelSetField { domain, values })
    }

    /// Samples `f` at every node.
    pub fn from_fn<F>(domain: BoxDomain, f: F) -> Self
    where
        F: Fn(Point2) -> f64 + Sync + Send,
    {
        let values = par::map_collect(domain.node_count(), |k| f(domain.node_point(k)));
        LevelSetField { domain, values }
    }

    pub fn constant(domain: BoxDomain, value: f64) -> Self {
        LevelSetField {
            domain,
            values: vec![value; domain.node_count()],
        }
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.domain.index(i, j)]
    }

    /// `φ + shift` at every node.
    pub fn shifted(&self, shift: f64) -> Self {
        LevelSetField {
            domain: self.domain,
            values: self.values.iter().map(|v| v + shift).collect(),
        }
    }

    /// Piecewise-linear interpolant on the grid triangulation.
    pub fn interpolate(&self, p: Point2) -> f64 {
        let (i, j, s, t) = self.domain.locate(p);
        let v00 = self.at(i, j);
        let v10 = self.at(i + 1, j);
        let v11 = self.at(i + 1, j + 1);
        let v01 = self.at(i, j + 1);
        if (i + j).is_multiple_of(2) {
            // diagonal (0,0)-(1,1)
            if s >= t {
                v00 + s * (v10 - v00) + t * (v11 - v10)
            } else {
                v00 + t * (v01 - v00) + s * (v11 - v01)
            }
        } else if s + t <= 1.0 {
            // diagonal (1,0)-(0,1)
            v00 + s * (v10 - v00) + t * (v01 - v00)
        } else {
            v11 + (1.0 - s) * (v01 - v11) + (1.0 - t) * (v10 - v11)
        }
    }

    /// Number of nodes with `φ < 0`.
    pub fn interior_node_count(&self) -> usize {
        self.values.iter().filter(|v| **v < 0.0).count()
    }

    /// Writes the `levelset v1` text format.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        let side = self.domain.side();
        writeln!(
            w,
            "levelset v1 {} {}",
            self.domain.grid_n,
            fmt17(self.domain.half_width)
        )?;
        let mut line = String::new();
        for row in self.values.chunks(side) {
            line.clear();
            for (k, v) in row.iter().enumerate() {
                if k > 0 {
                    line.push(' ');
                }
                write!(line, "{}", fmt17(*v)).expect("write to String");
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("write to Vec");
        String::from_utf8(buf).expect("ascii output")
    }

    /// Parses the `levelset v1` text format.
    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let header = header?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 4 || parts[0] != "levelset" || parts[1] != "v1" {
            return Err(Error::Parse {
                line: 1,
                msg: format!("bad header {header:?}"),
            });
        }
        let bad = |msg: String| Error::Parse { line: 1, msg };
        let grid_n: usize = parts[2].parse().map_err(|e| bad(format!("grid_n: {e}")))?;
        let half_width: f64 = parts[3].parse().map_err(|e| bad(format!("half_width: {e}")))?;
        let domain = BoxDomain::new(half_width, grid_n)?;
        let side = domain.side();
        let mut values = Vec::with_capacity(domain.node_count());
        for (lineno, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let before = values.len();
            for tok in line.split_whitespace() {
                let v: f64 = tok.parse().map_err(|e| Error::Parse {
                    line: lineno + 1,
                    msg: format!("{tok:?}: {e}"),
                })?;
                values.push(v);
            }
            if values.len() - before != side {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("expected {side} values, got {}", values.len() - before),
                });
            }
        }
        if values.len() != domain.node_count() {
            return Err(Error::Parse {
                line: 0,
                msg: format!("expected {side} rows, got {}", values.len() / side),
            });
        }
        Self::from_values(domain, values)
    }
}

/// Prescribed area of the trial domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VolumeTarget {
    alpha: f64,
}

impl VolumeTarget {
    /// Fails with [`Error::AlphaUnreachable`] unless `0 < alpha <= |D|`.
    pub fn new(alpha: f64, domain: &BoxDomain) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0 && alpha <= domain.area()) {
            return Err(Error::AlphaUnreachable {
                alpha,
                max: domain.area(),
            });
        }
        Ok(VolumeTarget { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// True when no disk of area `alpha` fits in the unit box, i.e. `π < α < 4`.
    pub fn excludes_disk(&self) -> bool {
        self.alpha > std::f64::consts::PI && self.alpha < 4.0
    }
}

/// Signed distance to the circle of radius `radius` about `center`, negative inside.
pub fn disk_levelset(domain: BoxDomain, radius: f64, center: Point2) -> Result<LevelSetField> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "radius must be positive, got {radius}"
        )));
    }
    let hw = domain.half_width();
    if center[0].abs() + radius > hw || center[1].abs() + radius > hw {
        return Err(Error::DiskNotContained {
            radius,
            cx: center[0],
            cy: center[1],
        });
    }
    Ok(LevelSetField::from_fn(domain, move |p| {
        (p[0] - center[0]).hypot(p[1] - center[1]) - radius
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates_are_symmetric() {
        let d = BoxDomain::unit(64).unwrap();
        for i in 0..=64 {
            assert_eq!(d.coord(i), -d.coord(64 - i));
        }
        assert_eq!(d.coord(0), -1.0);
        assert_eq!(d.coord(32), 0.0);
    }

    #[test]
    fn small_grid_rejected() {
        assert!(BoxDomain::unit(8).is_err());
        assert!(BoxDomain::new(-1.0, 32).is_err());
    }

    #[test]
    fn triangles_are_ccw() {
        let d = BoxDomain::unit(16).unwrap();
        for (i, j) in [(0, 0), (1, 0), (3, 7)] {
            for t in d.cell_triangles(i, j) {
                let [a, b, c] = t.map(|k| d.node_point(k));
                let det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
                assert!(det > 0.0);
            }
        }
    }

    #[test]
    fn interpolation_is_exact_for_linear_fields() {
        let d = BoxDomain::unit(20).unwrap();
        let phi = LevelSetField::from_fn(d, |p| 0.3 * p[0] - 1.7 * p[1] + 0.1);
        for p in [[0.013, -0.77], [0.5, 0.5], [-0.999, 0.21], [1.0, 1.0]] {
            let exact = 0.3 * p[0] - 1.7 * p[1] + 0.1;
            assert!((phi.interpolate(p) - exact).abs() < 1e-14);
        }
    }

    #[test]
    fn disk_levelset_errors() {
        let d = BoxDomain::unit(32).unwrap();
        assert!(matches!(
            disk_levelset(d, 1.0, [0.5, 0.0]),
            Err(Error::DiskNotContained { .. })
        ));
        assert!(disk_levelset(d, 0.0, [0.0, 0.0]).is_err());
        assert!(disk_levelset(d, 0.5, [0.0, 0.0]).is_ok());
    }

    #[test]
    fn alpha_bounds() {
        let d = BoxDomain::unit(32).unwrap();
        assert!(matches!(
            VolumeTarget::new(5.0, &d),
            Err(Error::AlphaUnreachable { .. })
        ));
        assert!(VolumeTarget::new(0.0, &d).is_err());
        assert!(VolumeTarget::new(3.5, &d).unwrap().excludes_disk());
        assert!(!VolumeTarget::new(2.5, &d).unwrap().excludes_disk());
    }

    #[test]
    fn text_format_round_trips_bits() {
        let d = BoxDomain::unit(16).unwrap();
        let phi = LevelSetField::from_fn(d, |p| (p[0] * 3.1).sin() / 7.0 + p[1] * 1e-9);
        let text = phi.to_text();
        assert!(text.starts_with("levelset v1 16 "));
        assert_eq!(text.lines().count(), 18);
        let back = LevelSetField::read_from(text.as_bytes()).unwrap();
        for (a, b) in phi.values().iter().zip(back.values()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn parse_rejects_short_rows() {
        let bad = "levelset v1 16 1\n1 2 3\n";
        assert!(matches!(
            LevelSetField::read_from(bad.as_bytes()),
            Err(Error::Parse { .. })
        ));
    }
}
