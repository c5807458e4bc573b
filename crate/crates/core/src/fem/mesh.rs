use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{LevelSetField, Point2};
use crate::par;

/// Which part of `∂Ω` a boundary edge discretizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EdgeTag {
    /// `∂Ω ∩ D`, the free boundary.
    #[serde(rename = "FREE")]
    Free,
    /// `∂Ω ∩ ∂D`, contact with the box.
    #[serde(rename = "BOX")]
    Box,
}

impl fmt::Display for EdgeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeTag::Free => f.write_str("FREE"),
            EdgeTag::Box => f.write_str("BOX"),
        }
    }
}

impl std::str::FromStr for EdgeTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "FREE" => Ok(EdgeTag::Free),
            "BOX" => Ok(EdgeTag::Box),
            other => Err(format!("unknown edge tag {other:?}")),
        }
    }
}

/// A boundary edge, oriented as in its owning (counter-clockwise) triangle,
/// so the domain lies to its left.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryEdge {
    pub v: [usize; 2],
    pub tri: usize,
    pub tag: EdgeTag,
}

/// Body-fitted triangulation of a level-set domain.
#[derive(Clone, Debug, PartialEq)]
pub struct TriMesh {
    vertices: Vec<Point2>,
    triangles: Vec<[usize; 3]>,
    boundary: Vec<BoundaryEdge>,
    h: f64,
    half_width: f64,
}

impl TriMesh {
    /// Builds a mesh from raw parts; boundary edges and tags are recomputed.
    pub fn from_parts(
        vertices: Vec<Point2>,
        triangles: Vec<[usize; 3]>,
        h: f64,
        half_width: f64,
    ) -> Result<Self> {
        for t in &triangles {
            if t.iter().any(|k| *k >= vertices.len()) {
                return Err(Error::InvalidArgument(format!(
                    "triangle {t:?} references a missing vertex"
                )));
            }
        }
        let boundary = boundary_edges(&vertices, &triangles, h, half_width);
        Ok(TriMesh {
            vertices,
            triangles,
            boundary,
            h,
            half_width,
        })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary_edges(&self) -> &[BoundaryEdge] {
        &self.boundary
    }

    /// Grid spacing of the level set the mesh was cut from.
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Signed area (positive for counter-clockwise triangles).
    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t].map(|k| self.vertices[k]);
        signed_area(a, b, c)
    }

    pub fn area(&self) -> f64 {
        par::sum(self.triangles.len(), |t| self.triangle_area(t))
    }

    pub fn min_triangle_area(&self) -> f64 {
        -par::max(self.triangles.len(), |t| -self.triangle_area(t))
    }

    pub fn edge_length(&self, e: &BoundaryEdge) -> f64 {
        let (a, b) = (self.vertices[e.v[0]], self.vertices[e.v[1]]);
        (b[0] - a[0]).hypot(b[1] - a[1])
    }

    pub fn edge_midpoint(&self, e: &BoundaryEdge) -> Point2 {
        let (a, b) = (self.vertices[e.v[0]], self.vertices[e.v[1]]);
        [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
    }

    /// Total length of boundary edges carrying `tag`, or of all of them.
    pub fn perimeter(&self, tag: Option<EdgeTag>) -> f64 {
        self.boundary
            .iter()
            .filter(|e| tag.is_none_or(|t| e.tag == t))
            .map(|e| self.edge_length(e))
            .sum()
    }

    /// `true` for vertices on some boundary edge (Dirichlet nodes).
    pub fn boundary_vertex_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.vertices.len()];
        for e in &self.boundary {
            mask[e.v[0]] = true;
            mask[e.v[1]] = true;
        }
        mask
    }

    pub fn box_tolerance(&self) -> f64 {
        0.1 * self.h
    }
}

pub(crate) fn signed_area(a: Point2, b: Point2, c: Point2) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
}

fn boundary_edges(
    vertices: &[Point2],
    triangles: &[[usize; 3]],
    h: f64,
    half_width: f64,
) -> Vec<BoundaryEdge> {
    let mut count: HashMap<(usize, usize), u32> = HashMap::with_capacity(3 * triangles.len());
    for t in triangles {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            *count.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
    }
    let tol = 0.1 * h;
    let near_box = |p: Point2| half_width - p[0].abs().max(p[1].abs()) <= tol;
    let mut out = Vec::new();
    for (ti, t) in triangles.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            if count[&(a.min(b), a.max(b))] == 1 {
                let (pa, pb) = (vertices[a], vertices[b]);
                let mid = [0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])];
                let tag = if near_box(pa) && near_box(pb) && near_box(mid) {
                    EdgeTag::Box
                } else {
                    EdgeTag::Free
                };
                out.push(BoundaryEdge {
                    v: [a, b],
                    tri: ti,
                    tag,
                });
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum VertexKey {
    Node(usize),
    /// Interface crossing on the grid edge `(lo, hi)`, `lo < hi`.
    Cut(usize, usize),
}

/// Relative distance below which an interface crossing is snapped onto the
/// nearest grid node.
pub const SNAP_FRACTION: f64 = 0.1;

/// Nodal values and positions after small-cut snapping.
///
/// A node lying within `0.1·h` of an interface crossing on one of its grid
/// edges is moved onto the nearest such crossing and its value set to 0, so
/// the interface passes through it and no sliver cut is produced.
#[derive(Clone, Debug, PartialEq)]
pub struct SnappedGrid {
    pub values: Vec<f64>,
    pub points: Vec<Point2>,
    pub snapped: usize,
}

pub fn snap_small_cuts(phi: &LevelSetField) -> SnappedGrid {
    let d = *phi.domain();
    let n = d.grid_n();
    let h = d.h();
    let v = phi.values();
    // (distance, target) of the closest small cut seen from each node
    let mut best: Vec<Option<(f64, Point2)>> = vec![None; v.len()];
    let mut offer = |k: usize, dist: f64, p: Point2| {
        if best[k].is_none_or(|(b, _)| dist < b) {
            best[k] = Some((dist, p));
        }
    };
    for j in 0..n {
        for i in 0..n {
            for t in d.cell_triangles(i, j) {
                for k in 0..3 {
                    let (p, q) = (t[k], t[(k + 1) % 3]);
                    // each grid edge is seen from both sides of a diagonal or cell
                    // boundary; handle it once in canonical direction
                    let (p, q) = (p.min(q), p.max(q));
                    let (a, b) = (v[p], v[q]);
                    if !((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0)) {
                        continue;
                    }
                    let (pp, pq) = (d.node_point(p), d.node_point(q));
                    let len = (pq[0] - pp[0]).hypot(pq[1] - pp[1]);
                    let t = a / (a - b);
                    let c = [pp[0] + t * (pq[0] - pp[0]), pp[1] + t * (pq[1] - pp[1])];
                    if t * len < SNAP_FRACTION * h {
                        offer(p, t * len, c);
                    }
                    if (1.0 - t) * len < SNAP_FRACTION * h {
                        offer(q, (1.0 - t) * len, c);
                    }
                }
            }
        }
    }
    let mut values = v.to_vec();
    let mut points: Vec<Point2> = (0..v.len()).map(|k| d.node_point(k)).collect();
    let mut snapped = 0;
    for (k, b) in best.iter().enumerate() {
        if let Some((_, p)) = b {
            values[k] = 0.0;
            points[k] = *p;
            snapped += 1;
        }
    }
    SnappedGrid {
        values,
        points,
        snapped,
    }
}

/// Triangulates `{φ < 0}` by clipping the grid triangles against the linear
/// interface, after snapping crossings that fall within `0.1·h` of a node.
pub fn mesh_from_levelset(phi: &LevelSetField) -> Result<TriMesh> {
    let d = *phi.domain();
    let n = d.grid_n();
    let h = d.h();
    let snap = snap_small_cuts(phi);
    let s = &snap.values;
    let pts = &snap.points;
    let interior = s.iter().filter(|x| **x < 0.0).count();
    if phi.interior_node_count() == 0 || interior == 0 {
        return Err(Error::EmptyRegion);
    }
    if interior < 4 {
        return Err(Error::DegenerateRegion {
            interior_nodes: interior,
        });
    }

    let cut = |p: usize, q: usize| {
        if p < q {
            VertexKey::Cut(p, q)
        } else {
            VertexKey::Cut(q, p)
        }
    };
    // clipped polygons per cell, computed independently
    let polys: Vec<Vec<Vec<VertexKey>>> = par::map_collect(n * n, |c| {
        let (i, j) = (c % n, c / n);
        let mut out = Vec::new();
        for t in d.cell_triangles(i, j) {
            if !t.iter().any(|k| s[*k] < 0.0) {
                continue;
            }
            let mut poly = Vec::with_capacity(4);
            for k in 0..3 {
                let (p, q) = (t[k], t[(k + 1) % 3]);
                if s[p] <= 0.0 {
                    poly.push(VertexKey::Node(p));
                }
                if (s[p] < 0.0 && s[q] > 0.0) || (s[p] > 0.0 && s[q] < 0.0) {
                    poly.push(cut(p, q));
                }
            }
            out.push(poly);
        }
        out
    });

    let mut ids: HashMap<VertexKey, usize> = HashMap::new();
    let mut vertices: Vec<Point2> = Vec::new();
    let mut triangles: Vec<[usize; 3]> = Vec::new();
    let mut id_of = |key: VertexKey, vertices: &mut Vec<Point2>| -> usize {
        *ids.entry(key).or_insert_with(|| {
            let p = match key {
                VertexKey::Node(k) => pts[k],
                VertexKey::Cut(a, b) => {
                    let t = s[a] / (s[a] - s[b]);
                    let (pa, pb) = (pts[a], pts[b]);
                    [pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1])]
                }
            };
            vertices.push(p);
            vertices.len() - 1
        })
    };
    let min_area = 1e-14 * h * h;
    for cell in polys {
        for poly in cell {
            let v: Vec<usize> = poly.iter().map(|k| id_of(*k, &mut vertices)).collect();
            let tris: &[[usize; 3]] = &match v.len() {
                3 => vec![[v[0], v[1], v[2]]],
                4 => {
                    let dist2 = |a: usize, b: usize| {
                        let (p, q) = (vertices[a], vertices[b]);
                        (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)
                    };
                    if dist2(v[0], v[2]) <= dist2(v[1], v[3]) {
                        vec![[v[0], v[1], v[2]], [v[0], v[2], v[3]]]
                    } else {
                        vec![[v[0], v[1], v[3]], [v[1], v[2], v[3]]]
                    }
                }
                _ => unreachable!("clipped triangle has 3 or 4 vertices"),
            };
            for t in tris {
                let [a, b, c] = t.map(|k| vertices[k]);
                if signed_area(a, b, c) > min_area {
                    triangles.push(*t);
                }
            }
        }
    }
    if triangles.is_empty() {
        return Err(Error::EmptyRegion);
    }
    TriMesh::from_parts(vertices, triangles, h, d.half_width())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{disk_levelset, BoxDomain};
    use std::f64::consts::PI;

    #[test]
    fn half_space_tags() {
        let d = BoxDomain::unit(32).unwrap();
        let phi = LevelSetField::from_fn(d, |p| p[0]);
        let m = mesh_from_levelset(&phi).unwrap();
        assert!((m.area() - 2.0).abs() < 1e-13);
        for e in m.boundary_edges() {
            let mid = m.edge_midpoint(e);
            if mid[0].abs() < 1e-12 {
                assert_eq!(e.tag, EdgeTag::Free);
            } else {
                assert_eq!(e.tag, EdgeTag::Box, "edge at {mid:?}");
            }
        }
        assert!((m.perimeter(Some(EdgeTag::Free)) - 2.0).abs() < 1e-13);
        assert!((m.perimeter(Some(EdgeTag::Box)) - 4.0).abs() < 1e-13);
    }

    #[test]
    fn disk_perimeter_and_quality() {
        let d = BoxDomain::unit(256).unwrap();
        let h = d.h();
        let phi = disk_levelset(d, 0.9, [0.0, 0.0]).unwrap();
        let m = mesh_from_levelset(&phi).unwrap();
        assert!(m.boundary_edges().iter().all(|e| e.tag == EdgeTag::Free));
        let p = m.perimeter(None);
        assert!((p / (2.0 * PI * 0.9) - 1.0).abs() < 0.01, "perimeter {p}");
        assert!(m.min_triangle_area() >= 1e-3 * h * h);
    }

    #[test]
    fn boundary_edges_have_one_owner() {
        let d = BoxDomain::unit(48).unwrap();
        let phi = LevelSetField::from_fn(d, |p| {
            (p[0] - 0.2).hypot(p[1]) - 0.5 + 0.1 * (5.0 * p[1]).sin()
        });
        let m = mesh_from_levelset(&phi).unwrap();
        let mut uses: HashMap<(usize, usize), usize> = HashMap::new();
        for t in m.triangles() {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *uses.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        for e in m.boundary_edges() {
            let (a, b) = (e.v[0], e.v[1]);
            assert_eq!(uses[&(a.min(b), a.max(b))], 1);
            assert!(m.triangles()[e.tri].contains(&a) && m.triangles()[e.tri].contains(&b));
        }
        for t in 0..m.triangles().len() {
            assert!(m.triangle_area(t) > 0.0);
        }
    }

    #[test]
    fn empty_and_degenerate() {
        let d = BoxDomain::unit(32).unwrap();
        assert_eq!(
            mesh_from_levelset(&LevelSetField::constant(d, 1.0)),
            Err(Error::EmptyRegion)
        );
        let tiny = LevelSetField::from_fn(d, |p| p[0].hypot(p[1]) - 0.01);
        assert!(matches!(
            mesh_from_levelset(&tiny),
            Err(Error::DegenerateRegion { .. }) | Err(Error::EmptyRegion)
        ));
    }
}
